#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "calderon/grid.hpp"

namespace calderon::dtn {

struct TriangularMesh {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  // Curved boundary, counterclockwise. Closed ring for disc-like meshes,
  // the arc from angle 0 to pi for the half disc.
  std::vector<int> boundary;
  std::vector<double> boundary_angle;  // parameter angle of each boundary vertex
  std::vector<int> flat_boundary;      // half disc: segment vertices strictly between the arc ends
  double h = 0.0;                      // nominal size 1 / rings
  int rings = 0;
  bool closed = true;  // boundary is a closed ring

  std::size_t vertex_count() const noexcept { return vertices.size(); }
  double triangle_area(std::size_t t) const;  // signed
  double area() const;
  // Every boundary vertex, curved and flat.
  std::vector<int> all_boundary() const;
  // Orientation, index range and edge conformity. Throws on failure.
  void validate() const;
};

// Concentric rings k = 1..K (K = ceil(1/h)) with 6k equispaced vertices on
// ring k. The triangulation is mirror symmetric about the real axis and the
// segments at angles 0 and pi are mesh edges.
TriangularMesh disc_mesh(double h);
// Disc mesh with each vertex (r, theta) moved to (r rho(theta), theta).
TriangularMesh star_mesh(double h, const std::function<double(double)>& rho);
// Upper half of the disc mesh.
TriangularMesh half_disc_mesh(double h);

// Point location via a uniform bucket grid over triangle bounding boxes.
class PointLocator {
 public:
  explicit PointLocator(std::shared_ptr<const TriangularMesh> mesh);
  // Triangle index and barycentric weights, or nothing outside the mesh.
  std::optional<std::pair<int, Eigen::Vector3d>> locate(Eigen::Vector2d p) const;
  double interpolate(const Eigen::VectorXd& nodal, Eigen::Vector2d p) const;

 private:
  std::shared_ptr<const TriangularMesh> mesh_;
  Eigen::Vector2d lo_;
  double cell_ = 1.0;
  int nx_ = 1, ny_ = 1;
  std::vector<std::vector<int>> buckets_;
};

}  // namespace calderon::dtn
