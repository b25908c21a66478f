#include "tdg/basis.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#ifndef TDG_DEFAULT_DATA_DIR
#define TDG_DEFAULT_DATA_DIR "data"
#endif

namespace tdg {

namespace {

std::mutex g_data_mutex;
std::string g_data_dir;  // guarded by g_data_mutex
std::map<std::pair<std::string, int>, std::vector<Vec3>> g_sphere_cache;

std::string sphere_file(const std::string& dir, int p) {
  char name[64];
  std::snprintf(name, sizeof(name), "sphere_points_p%02d.txt", p);
  return dir + "/" + name;
}

std::vector<Vec3> read_points(const std::string& path, int p) {
  std::ifstream in(path);
  if (!in) return {};
  std::vector<Vec3> pts;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    Vec3 v;
    if (!(ls >> v[0] >> v[1] >> v[2])) continue;
    pts.push_back(v.normalized());
  }
  if (static_cast<int>(pts.size()) != p)
    throw UnsupportedDegreeError("direction file " + path + " holds " +
                                 std::to_string(pts.size()) + " points, expected " +
                                 std::to_string(p));
  return pts;
}

// re-orient so that pts[0] becomes exactly (0,0,1)
std::vector<Vec3> align_first_with_z(std::vector<Vec3> pts) {
  const Eigen::Matrix3d t = rotation_to(pts[0]);
  for (Vec3& v : pts) v = t.transpose() * v;
  pts[0] = Vec3(0, 0, 1);
  return pts;
}

}  // namespace

void set_data_directory(const std::string& dir) {
  std::lock_guard<std::mutex> lock(g_data_mutex);
  g_data_dir = dir;
}

std::string data_directory() {
  if (const char* env = std::getenv("TDG_DATA_DIR"); env && *env) return env;
  std::lock_guard<std::mutex> lock(g_data_mutex);
  return g_data_dir.empty() ? std::string(TDG_DEFAULT_DATA_DIR) : g_data_dir;
}

bool has_sphere_points(int p) {
  return static_cast<bool>(std::ifstream(sphere_file(data_directory(), p)));
}

Eigen::Matrix3d rotation_to(const Vec3& d) {
  const double rho = std::hypot(d[0], d[1]);
  Eigen::Matrix3d t = Eigen::Matrix3d::Identity();
  if (rho == 0.0) {
    // the identity would keep +z; -z needs a proper flip
    if (d[2] < 0.0) t.diagonal() << 1.0, -1.0, -1.0;
    return t;
  }
  t << d[0] * d[2] / rho, d[1] / rho, d[0],
       d[1] * d[2] / rho, -d[0] / rho, d[1],
       -rho, 0.0, d[2];
  return t;
}

std::vector<Vec3> fibonacci_sphere(int p) {
  std::vector<Vec3> pts;
  pts.reserve(p);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < p; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / p;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    pts.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
  }
  return pts;
}

std::vector<Vec3> canonical_directions(int p, int dim, SpherePointSource source) {
  if (p < 1) throw Error("number of plane waves must be positive");
  if (dim == 2) {
    std::vector<Vec3> dirs(p);
    for (int l = 0; l < p; ++l) {
      const double a = 2.0 * kPi * l / p;
      dirs[l] = Vec3(std::cos(a), std::sin(a), 0.0);
    }
    dirs[0] = Vec3(1, 0, 0);
    return dirs;
  }
  if (dim != 3) throw Error("dimension must be 2 or 3");
  if (source == SpherePointSource::fibonacci) return align_first_with_z(fibonacci_sphere(p));

  const std::string dir = data_directory();
  std::lock_guard<std::mutex> lock(g_data_mutex);
  auto it = g_sphere_cache.find({dir, p});
  if (it != g_sphere_cache.end()) return it->second;
  const std::string path = sphere_file(dir, p);
  std::vector<Vec3> pts = read_points(path, p);
  if (pts.empty())
    throw UnsupportedDegreeError("no extremal point set for p = " + std::to_string(p) +
                                 " (looked for " + path +
                                 "); set sphere_points = fibonacci to use the lattice fallback");
  pts = align_first_with_z(std::move(pts));
  g_sphere_cache.emplace(std::make_pair(dir, p), pts);
  return pts;
}

std::vector<Vec3> rotated_directions(int p, const DirectionFrame& frame, int dim,
                                     SpherePointSource source) {
  if (dim == 2) {
    if (frame.angle == 0.0) return canonical_directions(p, 2);
    std::vector<Vec3> dirs(p);
    for (int l = 0; l < p; ++l) {
      const double a = 2.0 * kPi * l / p + frame.angle;
      dirs[l] = Vec3(std::cos(a), std::sin(a), 0.0);
    }
    return dirs;
  }
  std::vector<Vec3> dirs = canonical_directions(p, 3, source);
  if (frame.rotation == Eigen::Matrix3d::Identity()) return dirs;
  for (Vec3& v : dirs) v = frame.rotation * v;
  return dirs;
}

DirectionFrame frame_from_direction(const Vec3& d, int dim) {
  DirectionFrame f;
  if (dim == 2) {
    double a = std::atan2(d[1], d[0]);
    if (a < 0.0) a += 2.0 * kPi;
    if (a >= 2.0 * kPi) a = 0.0;
    f.angle = a;
  } else {
    f.rotation = rotation_to(d.normalized());
  }
  return f;
}

Vec3 frame_direction(const DirectionFrame& frame, int dim) {
  if (dim == 2) return Vec3(std::cos(frame.angle), std::sin(frame.angle), 0.0);
  return frame.rotation.col(2);
}

Eigen::MatrixXcd ElementBasis::values(const std::vector<Vec3>& points) const {
  const Eigen::Index n = static_cast<Eigen::Index>(points.size());
  Eigen::Matrix<double, Eigen::Dynamic, 3> rel(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) rel.row(i) = (points[i] - center).transpose();
  const Eigen::MatrixXd phase = k * (rel * dirs.transpose());
  Eigen::MatrixXcd out(n, size());
  for (Eigen::Index j = 0; j < out.cols(); ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      out(i, j) = Complex(std::cos(phase(i, j)), std::sin(phase(i, j)));
  return out;
}

Eigen::VectorXcd ElementBasis::values_at(const Vec3& x) const {
  const Eigen::VectorXd phase = k * (dirs * (x - center));
  Eigen::VectorXcd out(phase.size());
  for (Eigen::Index j = 0; j < phase.size(); ++j)
    out[j] = Complex(std::cos(phase[j]), std::sin(phase[j]));
  return out;
}

ElementBasis element_basis(const Mesh& mesh, ElementId id) {
  const Element& e = mesh.element(id);
  ElementBasis b;
  b.k = e.k;
  b.center = mesh.centroid(id);
  const std::vector<Vec3> dirs =
      e.explicit_directions.empty()
          ? rotated_directions(mesh.plane_wave_count(id), e.frame, mesh.dim(), mesh.sphere_points())
          : e.explicit_directions;
  b.dirs.resize(static_cast<Eigen::Index>(dirs.size()), 3);
  for (std::size_t l = 0; l < dirs.size(); ++l)
    b.dirs.row(static_cast<Eigen::Index>(l)) = dirs[l].transpose();
  return b;
}

std::vector<ElementBasis> build_bases(const Mesh& mesh) {
  std::vector<ElementBasis> bases(mesh.id_count());
  for (ElementId id : mesh.leaves()) bases[id] = element_basis(mesh, id);
  return bases;
}

BasisEval eval_basis(const ElementBasis& basis, const Vec3& x, int order) {
  BasisEval ev;
  ev.value = basis.values_at(x);
  const Complex ik(0.0, basis.k);
  if (order >= 1) {
    ev.gradient.resize(basis.size(), 3);
    for (Eigen::Index l = 0; l < basis.size(); ++l)
      ev.gradient.row(l) = ik * ev.value[l] * basis.dirs.row(l).cast<Complex>();
  }
  if (order >= 2) {
    ev.hessian.resize(static_cast<std::size_t>(basis.size()));
    const double k2 = basis.k * basis.k;
    for (Eigen::Index l = 0; l < basis.size(); ++l) {
      const Vec3 d = basis.dirs.row(l).transpose();
      ev.hessian[l] = (-k2 * ev.value[l]) * (d * d.transpose()).cast<Complex>();
    }
  }
  return ev;
}

}  // namespace tdg
