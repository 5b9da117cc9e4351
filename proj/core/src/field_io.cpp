#include "calderon/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace calderon {

namespace fs = std::filesystem;

namespace {

fs::path with_suffix(fs::path base, const char* suffix) {
  base += suffix;
  return base;
}

fs::path strip_meta(const fs::path& p) {
  if (p.extension() == ".meta" || p.extension() == ".bin") {
    fs::path q = p;
    q.replace_extension();
    return q;
  }
  return p;
}

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) return __builtin_bswap64(v);
  return v;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<double>& FieldFile::component(const std::string& name) const {
  for (std::size_t i = 0; i < components.size(); ++i)
    if (components[i] == name) return data[i];
  throw IoError("field file has no component '" + name + "'");
}

void write_field_file(const fs::path& base, const FieldFile& file) {
  file.grid.validate();
  if (file.components.size() != file.data.size()) throw InvalidInput("component names and data differ in count");
  if (base.has_parent_path()) fs::create_directories(base.parent_path());
  {
    std::ofstream bin(with_suffix(base, ".bin"), std::ios::binary);
    if (!bin) throw IoError("cannot write " + with_suffix(base, ".bin").string());
    for (const auto& comp : file.data) {
      if (comp.size() != file.grid.size()) throw InvalidInput("component size does not match grid");
      for (double v : comp) {
        std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(v));
        bin.write(reinterpret_cast<const char*>(&bits), sizeof bits);
      }
    }
  }
  std::ofstream meta(with_suffix(base, ".meta"));
  if (!meta) throw IoError("cannot write " + with_suffix(base, ".meta").string());
  meta.precision(17);
  meta << "format=calderon-field-1\n";
  meta << "dtype=float64\nbyte_order=little\nlayout=row-major\n";
  meta << "half_width=" << file.grid.half_width << "\n";
  meta << "n=" << file.grid.n << "\n";
  meta << "components=";
  for (std::size_t i = 0; i < file.components.size(); ++i) meta << (i ? "," : "") << file.components[i];
  meta << "\n";
  for (const auto& [k, v] : file.meta) meta << k << "=" << v << "\n";
}

FieldFile read_field_file(const fs::path& path) {
  const fs::path base = strip_meta(path);
  std::ifstream meta(with_suffix(base, ".meta"));
  if (!meta) throw IoError("cannot open field metadata " + with_suffix(base, ".meta").string());
  FieldFile f;
  std::string line;
  bool have_l = false, have_n = false;
  while (std::getline(meta, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw IoError("malformed metadata line '" + line + "'");
    const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (key == "format") {
      if (val != "calderon-field-1") throw IoError("unsupported field format '" + val + "'");
    } else if (key == "dtype") {
      if (val != "float64") throw IoError("unsupported dtype '" + val + "'");
    } else if (key == "byte_order") {
      if (val != "little") throw IoError("unsupported byte order '" + val + "'");
    } else if (key == "layout") {
      if (val != "row-major") throw IoError("unsupported layout '" + val + "'");
    } else if (key == "half_width") {
      f.grid.half_width = std::stod(val);
      have_l = true;
    } else if (key == "n") {
      f.grid.n = std::stoi(val);
      have_n = true;
    } else if (key == "components") {
      std::stringstream ss(val);
      std::string c;
      while (std::getline(ss, c, ',')) f.components.push_back(trim(c));
    } else {
      f.meta[key] = val;
    }
  }
  if (!have_l || !have_n || f.components.empty()) throw IoError("field metadata is missing half_width, n or components");
  f.grid.validate();
  std::ifstream bin(with_suffix(base, ".bin"), std::ios::binary);
  if (!bin) throw IoError("cannot open field data " + with_suffix(base, ".bin").string());
  f.data.assign(f.components.size(), std::vector<double>(f.grid.size()));
  for (auto& comp : f.data)
    for (double& v : comp) {
      std::uint64_t bits;
      if (!bin.read(reinterpret_cast<char*>(&bits), sizeof bits)) throw IoError("field data truncated");
      v = std::bit_cast<double>(to_little(bits));
    }
  char extra;
  if (bin.read(&extra, 1)) throw IoError("field data longer than metadata declares");
  return f;
}

void save_conductivity(const fs::path& base, const ConductivityTensor& sigma, const std::string& omega) {
  FieldFile f;
  f.grid = sigma.grid();
  f.components = {"s11", "s12", "s22", "mask"};
  f.data = {{sigma.s11().begin(), sigma.s11().end()},
            {sigma.s12().begin(), sigma.s12().end()},
            {sigma.s22().begin(), sigma.s22().end()},
            std::vector<double>(sigma.mask().begin(), sigma.mask().end())};
  f.meta["kind"] = "conductivity";
  f.meta["omega"] = omega;
  write_field_file(base, f);
}

ConductivityTensor load_conductivity(const fs::path& path) {
  const FieldFile f = read_field_file(path);
  const auto& m = f.component("mask");
  std::vector<std::uint8_t> mask(m.size());
  for (std::size_t k = 0; k < m.size(); ++k) mask[k] = m[k] != 0.0;
  return ConductivityTensor(f.grid, f.component("s11"), f.component("s12"), f.component("s22"), std::move(mask));
}

void save_complex_field(const fs::path& base, const ComplexField& field, const std::string& name,
                        const std::map<std::string, std::string>& meta) {
  FieldFile f;
  f.grid = field.grid();
  f.components = {name + ".re", name + ".im"};
  f.data.assign(2, std::vector<double>(field.size()));
  for (std::size_t k = 0; k < field.size(); ++k) {
    f.data[0][k] = field[k].real();
    f.data[1][k] = field[k].imag();
  }
  f.meta = meta;
  write_field_file(base, f);
}

ComplexField load_complex_field(const fs::path& path, const std::string& name) {
  const FieldFile f = read_field_file(path);
  const auto& re = f.component(name + ".re");
  const auto& im = f.component(name + ".im");
  ComplexField out(f.grid);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = {re[k], im[k]};
  return out;
}

}  // namespace calderon
