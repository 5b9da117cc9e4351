#include "calderon/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace calderon::dtn {

double TriangularMesh::triangle_area(std::size_t t) const {
  const auto& tri = triangles[t];
  const Eigen::Vector2d a = vertices[tri[1]] - vertices[tri[0]];
  const Eigen::Vector2d b = vertices[tri[2]] - vertices[tri[0]];
  return 0.5 * (a.x() * b.y() - a.y() * b.x());
}

double TriangularMesh::area() const {
  double s = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) s += triangle_area(t);
  return s;
}

std::vector<int> TriangularMesh::all_boundary() const {
  std::vector<int> b = boundary;
  b.insert(b.end(), flat_boundary.begin(), flat_boundary.end());
  return b;
}

void TriangularMesh::validate() const {
  const int nv = int(vertices.size());
  std::map<std::pair<int, int>, int> edges;
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    for (int v : triangles[t])
      if (v < 0 || v >= nv) throw InvalidInput("mesh triangle references a missing vertex");
    if (!(triangle_area(t) > 0.0)) {
      std::ostringstream os;
      os << "mesh triangle " << t << " is not positively oriented";
      throw InvalidInput(os.str());
    }
    for (int e = 0; e < 3; ++e) {
      const int a = triangles[t][e], b = triangles[t][(e + 1) % 3];
      ++edges[{std::min(a, b), std::max(a, b)}];
    }
  }
  std::vector<int> on_boundary(nv, 0);
  for (int v : all_boundary()) on_boundary[v] = 1;
  for (const auto& [e, count] : edges) {
    if (count > 2) throw InvalidInput("mesh edge shared by more than two triangles");
    if (count == 1 && !(on_boundary[e.first] && on_boundary[e.second]))
      throw InvalidInput("mesh has a free edge away from the declared boundary");
  }
}

namespace {

struct RingIndex {
  int start(int k) const { return k == 0 ? 0 : 1 + 3 * k * (k - 1); }
  int at(int k, int j) const {
    if (k == 0) return 0;
    const int m = 6 * k;
    return start(k) + ((j % m) + m) % m;
  }
};

void orient(std::array<int, 3>& t, const std::vector<Eigen::Vector2d>& v) {
  const Eigen::Vector2d a = v[t[1]] - v[t[0]], b = v[t[2]] - v[t[0]];
  if (a.x() * b.y() - a.y() * b.x() < 0.0) std::swap(t[1], t[2]);
}

}  // namespace

TriangularMesh disc_mesh(double h) {
  if (!(h > 0.0 && h <= 0.5)) throw InvalidInput("disc mesh size must be in (0, 0.5]");
  const int K = int(std::ceil(1.0 / h - 1e-12));
  TriangularMesh mesh;
  mesh.rings = K;
  mesh.h = 1.0 / K;
  RingIndex idx;
  mesh.vertices.reserve(1 + 3 * K * (K + 1));
  mesh.vertices.emplace_back(0.0, 0.0);
  for (int k = 1; k <= K; ++k)
    for (int j = 0; j < 6 * k; ++j) {
      const double th = 2.0 * kPi * j / (6 * k), r = double(k) / K;
      mesh.vertices.emplace_back(r * std::cos(th), r * std::sin(th));
    }
  // upper half: sextants 0..2, then mirror
  std::vector<std::array<int, 3>> upper;
  for (int k = 1; k <= K; ++k)
    for (int s = 0; s < 3; ++s) {
      for (int j = 0; j < k; ++j) upper.push_back({idx.at(k, s * k + j), idx.at(k, s * k + j + 1), idx.at(k - 1, s * (k - 1) + j)});
      for (int j = 0; j + 1 < k; ++j)
        upper.push_back({idx.at(k - 1, s * (k - 1) + j), idx.at(k, s * k + j + 1), idx.at(k - 1, s * (k - 1) + j + 1)});
    }
  auto mirror = [&](int v) {
    if (v == 0) return 0;
    int k = 1;
    while (idx.start(k + 1) <= v) ++k;
    return idx.at(k, -(v - idx.start(k)));
  };
  for (auto t : upper) {
    orient(t, mesh.vertices);
    mesh.triangles.push_back(t);
  }
  for (const auto& t : upper) {
    std::array<int, 3> m{mirror(t[0]), mirror(t[1]), mirror(t[2])};
    orient(m, mesh.vertices);
    mesh.triangles.push_back(m);
  }
  for (int j = 0; j < 6 * K; ++j) {
    mesh.boundary.push_back(idx.at(K, j));
    mesh.boundary_angle.push_back(2.0 * kPi * j / (6 * K));
  }
  mesh.closed = true;
  mesh.validate();
  return mesh;
}

TriangularMesh star_mesh(double h, const std::function<double(double)>& rho) {
  TriangularMesh mesh = disc_mesh(h);
  for (auto& v : mesh.vertices) {
    const double r = v.norm();
    if (r == 0.0) continue;
    const double th = std::atan2(v.y(), v.x());
    const double s = rho(th);
    if (!(s > 0.0)) throw InvalidInput("star mesh radius function must be positive");
    v *= s;
  }
  mesh.validate();
  return mesh;
}

TriangularMesh half_disc_mesh(double h) {
  const TriangularMesh full = disc_mesh(h);
  const int K = full.rings;
  const double eps = 1e-12;
  std::vector<int> remap(full.vertices.size(), -1);
  TriangularMesh mesh;
  mesh.rings = K;
  mesh.h = full.h;
  mesh.closed = false;
  for (std::size_t v = 0; v < full.vertices.size(); ++v)
    if (full.vertices[v].y() >= -eps) {
      remap[v] = int(mesh.vertices.size());
      mesh.vertices.push_back(full.vertices[v]);
    }
  for (const auto& t : full.triangles) {
    if (remap[t[0]] < 0 || remap[t[1]] < 0 || remap[t[2]] < 0) continue;
    const double cy = (full.vertices[t[0]].y() + full.vertices[t[1]].y() + full.vertices[t[2]].y()) / 3.0;
    if (cy <= 0.0) continue;
    mesh.triangles.push_back({remap[t[0]], remap[t[1]], remap[t[2]]});
  }
  for (int j = 0; j <= 3 * K; ++j) {
    mesh.boundary.push_back(remap[full.boundary[j]]);
    mesh.boundary_angle.push_back(full.boundary_angle[j]);
  }
  // flat segment strictly inside, ordered by x
  std::vector<std::pair<double, int>> flat;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    const auto& p = mesh.vertices[v];
    if (std::abs(p.y()) <= eps && std::abs(p.x()) < 1.0 - eps) flat.emplace_back(p.x(), int(v));
  }
  std::sort(flat.begin(), flat.end());
  for (const auto& f : flat) mesh.flat_boundary.push_back(f.second);
  mesh.validate();
  return mesh;
}

// ------------------------------------------------------------------------

PointLocator::PointLocator(std::shared_ptr<const TriangularMesh> mesh) : mesh_(std::move(mesh)) {
  Eigen::Vector2d lo(1e300, 1e300), hi(-1e300, -1e300);
  for (const auto& v : mesh_->vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  lo_ = lo.array() - 1e-9;
  const double span = std::max(hi.x() - lo.x(), hi.y() - lo.y()) + 2e-9;
  const int cells = std::max(1, int(std::sqrt(double(mesh_->triangles.size()) / 2.0)));
  cell_ = span / cells;
  nx_ = int((hi.x() - lo_.x()) / cell_) + 1;
  ny_ = int((hi.y() - lo_.y()) / cell_) + 1;
  buckets_.assign(std::size_t(nx_) * ny_, {});
  for (std::size_t t = 0; t < mesh_->triangles.size(); ++t) {
    Eigen::Vector2d a(1e300, 1e300), b(-1e300, -1e300);
    for (int v : mesh_->triangles[t]) {
      a = a.cwiseMin(mesh_->vertices[v]);
      b = b.cwiseMax(mesh_->vertices[v]);
    }
    const int i0 = std::max(0, int((a.x() - lo_.x()) / cell_)), i1 = std::min(nx_ - 1, int((b.x() - lo_.x()) / cell_));
    const int j0 = std::max(0, int((a.y() - lo_.y()) / cell_)), j1 = std::min(ny_ - 1, int((b.y() - lo_.y()) / cell_));
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) buckets_[std::size_t(j) * nx_ + i].push_back(int(t));
  }
}

std::optional<std::pair<int, Eigen::Vector3d>> PointLocator::locate(Eigen::Vector2d p) const {
  const int i = int(std::floor((p.x() - lo_.x()) / cell_)), j = int(std::floor((p.y() - lo_.y()) / cell_));
  if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return std::nullopt;
  int best = -1;
  double best_min = -1e300;
  Eigen::Vector3d best_w = Eigen::Vector3d::Zero();
  for (int t : buckets_[std::size_t(j) * nx_ + i]) {
    const auto& tri = mesh_->triangles[t];
    const Eigen::Vector2d a = mesh_->vertices[tri[0]], b = mesh_->vertices[tri[1]], c = mesh_->vertices[tri[2]];
    const double det = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
    const double l1 = ((p.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (p.y() - a.y())) / det;
    const double l2 = ((b.x() - a.x()) * (p.y() - a.y()) - (p.x() - a.x()) * (b.y() - a.y())) / det;
    const Eigen::Vector3d w(1.0 - l1 - l2, l1, l2);
    const double m = w.minCoeff();
    if (m > best_min) {
      best_min = m;
      best = t;
      best_w = w;
    }
  }
  if (best < 0 || best_min < -1e-10) return std::nullopt;
  return std::make_pair(best, best_w);
}

double PointLocator::interpolate(const Eigen::VectorXd& nodal, Eigen::Vector2d p) const {
  const auto hit = locate(p);
  if (!hit) throw InvalidInput("point outside the mesh");
  const auto& tri = mesh_->triangles[hit->first];
  return hit->second(0) * nodal(tri[0]) + hit->second(1) * nodal(tri[1]) + hit->second(2) * nodal(tri[2]);
}

}  // namespace calderon::dtn
