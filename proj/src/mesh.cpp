#include "tdg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tdg {

DomainSpec DomainSpec::uniform(DomainKind kind, BoundaryCondition bc) {
  DomainSpec d;
  d.kind = kind;
  d.sides.fill(bc);
  return d;
}

Box DomainSpec::bounds() const {
  Box b;
  b.dim = dim();
  switch (kind) {
    case DomainKind::unit_square:
      b.lo = Vec3(0, 0, 0);
      b.hi = Vec3(1, 1, 0);
      break;
    case DomainKind::square2:
    case DomainKind::l_shape:
      b.lo = Vec3(-1, -1, 0);
      b.hi = Vec3(1, 1, 0);
      break;
    case DomainKind::unit_cube:
      b.lo = Vec3(0, 0, 0);
      b.hi = Vec3(1, 1, 1);
      break;
  }
  return b;
}

double DomainSpec::measure() const {
  const double m = bounds().measure();
  return kind == DomainKind::l_shape ? 0.75 * m : m;
}

Facet Facet::flipped() const {
  Facet f = *this;
  std::swap(f.side_a, f.side_b);
  f.normal = -normal;
  return f;
}

std::size_t Mesh::KeyHash::operator()(
    const std::pair<int, CellIndex>& key) const {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(key.first);
  for (std::int64_t v : key.second) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

Mesh::Mesh(DomainSpec domain, int base_resolution)
    : domain_(domain), n_(base_resolution) {
  if (n_ < 1) throw ConfigError("mesh resolution must be >= 1");
  spacing_ = domain_.bounds().extent(0) / n_;
}

Box Mesh::bbox(ElementId id) const {
  const Element& e = element(id);
  const Box dom = domain_.bounds();
  const double h = std::ldexp(spacing_, -e.level);
  Box b;
  b.dim = dim();
  for (int a = 0; a < 3; ++a) {
    if (a < dim()) {
      b.lo[a] = dom.lo[a] + static_cast<double>(e.index[a]) * h;
      b.hi[a] = b.lo[a] + h;
    } else {
      b.lo[a] = b.hi[a] = 0.0;
    }
  }
  return b;
}

std::size_t Mesh::total_plane_waves() const {
  std::size_t total = 0;
  for (ElementId id : leaves_) total += static_cast<std::size_t>(plane_wave_count(id));
  return total;
}

ElementId Mesh::find(int level, const CellIndex& index) const {
  const auto it = lookup_.find({level, index});
  return it == lookup_.end() ? kNoElement : it->second;
}

bool Mesh::inside_domain(int level, const CellIndex& index) const {
  const std::int64_t cells = static_cast<std::int64_t>(n_) << level;
  for (int a = 0; a < 3; ++a) {
    if (a < dim()) {
      if (index[a] < 0 || index[a] >= cells) return false;
    } else if (index[a] != 0) {
      return false;
    }
  }
  if (domain_.kind == DomainKind::l_shape) {
    // removed quadrant x > 0, y < 0 is a union of whole base cells
    const std::int64_t bi = index[0] >> level;
    const std::int64_t bj = index[1] >> level;
    const std::int64_t half = n_ / 2;
    if (bi >= half && bj < half) return false;
  }
  return true;
}

void Mesh::collect_adjacent_leaves(ElementId node, int axis, int side,
                                   std::vector<ElementId>& out) const {
  const Element& e = element(node);
  if (e.is_leaf()) {
    out.push_back(node);
    return;
  }
  const int nchildren = 1 << dim();
  const int want = side > 0 ? 1 : 0;
  for (int c = 0; c < nchildren; ++c) {
    if (((c >> axis) & 1) == want)
      collect_adjacent_leaves(e.first_child + c, axis, side, out);
  }
}

std::vector<ElementId> Mesh::face_neighbors(ElementId id, int axis,
                                            int side) const {
  const Element& e = element(id);
  CellIndex nb = e.index;
  nb[axis] += side;
  std::vector<ElementId> out;
  if (!inside_domain(e.level, nb)) return out;
  const ElementId same = find(e.level, nb);
  if (same != kNoElement) {
    collect_adjacent_leaves(same, axis, -side, out);
    return out;
  }
  for (int m = 1; m <= e.level; ++m) {
    CellIndex up = nb;
    for (int a = 0; a < dim(); ++a) up[a] >>= m;
    const ElementId anc = find(e.level - m, up);
    if (anc != kNoElement) {
      out.push_back(anc);
      return out;
    }
  }
  throw Error("mesh forest is missing a root cell");
}

ElementId Mesh::add_root(const CellIndex& index, double k, int q) {
  Element e;
  e.id = static_cast<ElementId>(nodes_.size());
  e.index = index;
  e.k = k;
  e.q = q;
  lookup_.emplace(std::pair<int, CellIndex>{0, index}, e.id);
  nodes_.push_back(e);
  leaves_.push_back(e.id);
  return e.id;
}

ElementId Mesh::split(ElementId id) {
  if (!element(id).is_leaf())
    throw Error("cannot split element " + std::to_string(id) + ": not a leaf");
  const ElementId first = static_cast<ElementId>(nodes_.size());
  const int nchildren = 1 << dim();
  nodes_.reserve(nodes_.size() + nchildren);
  for (int c = 0; c < nchildren; ++c) {
    const Element& parent = nodes_[id];
    Element child;
    child.id = first + c;
    child.parent = id;
    child.level = parent.level + 1;
    for (int a = 0; a < 3; ++a)
      child.index[a] = a < dim() ? 2 * parent.index[a] + ((c >> a) & 1) : 0;
    child.k = parent.k;
    child.q = parent.q;
    child.frame = parent.frame;
    child.explicit_directions = parent.explicit_directions;
    lookup_.emplace(std::pair<int, CellIndex>{child.level, child.index}, child.id);
    nodes_.push_back(std::move(child));
  }
  nodes_[id].first_child = first;
  leaves_.erase(std::lower_bound(leaves_.begin(), leaves_.end(), id));
  for (int c = 0; c < nchildren; ++c) leaves_.push_back(first + c);
  return first;
}

Mesh build_initial_mesh(const DomainSpec& domain, int n,
                        const WavenumberField& k_field, int q0) {
  if (n < 1) throw ConfigError("initial mesh resolution must be >= 1");
  if (q0 < 1) throw ConfigError("initial effective degree must be >= 1");
  if (domain.kind == DomainKind::l_shape && n % 2 != 0)
    throw ConfigError("l_shape needs an even resolution so the removed quadrant aligns with cells");
  Mesh mesh(domain, n);
  const int dim = domain.dim();
  const int nz = dim == 3 ? n : 1;
  for (int kz = 0; kz < nz; ++kz) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const CellIndex idx{i, j, kz};
        if (!mesh.inside_domain(0, idx)) continue;
        const ElementId id = mesh.add_root(idx, 0.0, q0);
        const Box box = mesh.bbox(id);
        const double k = k_field(box.center());
        // probe points just inside every corner
        const int ncorners = 1 << dim;
        for (int c = 0; c < ncorners; ++c) {
          Vec3 x = box.center();
          for (int a = 0; a < dim; ++a) {
            const double inset = 1e-9 * box.extent(a);
            x[a] = ((c >> a) & 1) ? box.hi[a] - inset : box.lo[a] + inset;
          }
          if (k_field(x) != k)
            throw ConfigError("mesh resolution " + std::to_string(n) +
                              " does not resolve the material interface");
        }
        if (!(k > 0.0)) throw ConfigError("wavenumber must be positive");
        mesh.element(id).k = k;
      }
    }
  }
  return mesh;
}

namespace {

bool violates_one_irregularity(const Mesh& mesh, ElementId id) {
  const Element& e = mesh.element(id);
  for (int axis = 0; axis < mesh.dim(); ++axis) {
    for (int side : {-1, 1}) {
      CellIndex nb = e.index;
      nb[axis] += side;
      const ElementId same = mesh.find(e.level, nb);
      if (same == kNoElement) continue;
      const Element& s = mesh.element(same);
      if (s.is_leaf()) continue;
      const int nchildren = 1 << mesh.dim();
      const int want = side > 0 ? 0 : 1;  // children touching our face
      for (int c = 0; c < nchildren; ++c) {
        if (((c >> axis) & 1) == want && !mesh.element(s.first_child + c).is_leaf())
          return true;
      }
    }
  }
  return false;
}

}  // namespace

RefinementResult refine_with_closure(const Mesh& mesh,
                                     std::span<const ElementId> marked) {
  RefinementResult result{mesh, {}};
  Mesh& m = result.mesh;
  std::vector<ElementId> todo(marked.begin(), marked.end());
  std::sort(todo.begin(), todo.end());
  todo.erase(std::unique(todo.begin(), todo.end()), todo.end());
  for (ElementId id : todo) {
    if (id < 0 || static_cast<std::size_t>(id) >= mesh.id_count() ||
        !mesh.element(id).is_leaf())
      throw Error("refine_elements: element " + std::to_string(id) +
                  " is not a leaf");
  }
  for (ElementId id : todo) m.split(id);
  for (;;) {
    std::vector<ElementId> violators;
    for (ElementId id : m.leaves())
      if (violates_one_irregularity(m, id)) violators.push_back(id);
    if (violators.empty()) break;
    for (ElementId id : violators) {
      m.split(id);
      result.closure.push_back(id);
    }
  }
  return result;
}

Mesh refine_elements(const Mesh& mesh, std::span<const ElementId> marked) {
  return refine_with_closure(mesh, marked).mesh;
}

std::vector<Facet> skeleton_facets(const Mesh& mesh) {
  std::vector<Facet> facets;
  facets.reserve(mesh.leaf_count() * mesh.dim());
  for (ElementId id : mesh.leaves()) {
    const Element& e = mesh.element(id);
    const Box box = mesh.bbox(id);
    for (int axis = 0; axis < mesh.dim(); ++axis) {
      for (int side : {-1, 1}) {
        Facet f;
        f.axis = axis;
        f.geometry = box;
        const double plane = side > 0 ? box.hi[axis] : box.lo[axis];
        f.geometry.lo[axis] = f.geometry.hi[axis] = plane;
        f.normal = Vec3::Zero();
        f.normal[axis] = side;
        f.side_a = id;

        CellIndex nb = e.index;
        nb[axis] += side;
        if (!mesh.inside_domain(e.level, nb)) {
          f.kind = mesh.domain().condition(axis, side) == BoundaryCondition::robin
                       ? FacetKind::robin
                       : FacetKind::dirichlet;
          facets.push_back(f);
          continue;
        }
        const ElementId same = mesh.find(e.level, nb);
        if (same != kNoElement) {
          // equal level: emit once; finer neighbours emit their own sub-facets
          if (mesh.element(same).is_leaf() && id < same) {
            f.side_b = same;
            facets.push_back(f);
          }
          continue;
        }
        const auto coarse = mesh.face_neighbors(id, axis, side);
        f.side_b = coarse.front();
        facets.push_back(f);
      }
    }
  }
  return facets;
}

int max_level_gap(const Mesh& mesh) {
  int gap = 0;
  for (ElementId id : mesh.leaves()) {
    const int level = mesh.element(id).level;
    for (int axis = 0; axis < mesh.dim(); ++axis)
      for (int side : {-1, 1})
        for (ElementId nb : mesh.face_neighbors(id, axis, side))
          gap = std::max(gap, std::abs(mesh.element(nb).level - level));
  }
  return gap;
}

}  // namespace tdg
