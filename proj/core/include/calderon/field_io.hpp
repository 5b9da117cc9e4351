#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "calderon/field_algebra.hpp"
#include "calderon/grid.hpp"

namespace calderon {

// Field file: <base>.bin holds little-endian float64 components one after
// another, each row-major n*n. <base>.meta is key=value text.
struct FieldFile {
  GridSpec grid;
  std::vector<std::string> components;
  std::vector<std::vector<double>> data;
  std::map<std::string, std::string> meta;  // extra keys, e.g. omega, k

  const std::vector<double>& component(const std::string& name) const;
};

void write_field_file(const std::filesystem::path& base, const FieldFile& file);
// Accepts either the base path or the .meta path.
FieldFile read_field_file(const std::filesystem::path& path);

void save_conductivity(const std::filesystem::path& base, const ConductivityTensor& sigma,
                       const std::string& omega = "unit-disc");
ConductivityTensor load_conductivity(const std::filesystem::path& path);

void save_complex_field(const std::filesystem::path& base, const ComplexField& f, const std::string& name,
                        const std::map<std::string, std::string>& meta = {});
ComplexField load_complex_field(const std::filesystem::path& path, const std::string& name);

}  // namespace calderon
