#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "tdg/frame.hpp"
#include "tdg/types.hpp"

namespace tdg {

enum class DomainKind { unit_square, square2, l_shape, unit_cube };
enum class BoundaryCondition { robin, dirichlet };

/// Computational domain and its Robin/Dirichlet partition.
///
/// Boundary faces are tagged by their outward normal: `sides[2 * axis + s]`
/// with s = 1 for a normal along +axis.  The two reentrant edges of the
/// L-shape use the same table (their normals are +x and -y).
struct DomainSpec {
  DomainKind kind = DomainKind::unit_square;
  std::array<BoundaryCondition, 6> sides{
      BoundaryCondition::robin, BoundaryCondition::robin,
      BoundaryCondition::robin, BoundaryCondition::robin,
      BoundaryCondition::robin, BoundaryCondition::robin};

  static DomainSpec uniform(DomainKind kind, BoundaryCondition bc);

  int dim() const { return kind == DomainKind::unit_cube ? 3 : 2; }
  /// Bounding box of the domain.
  Box bounds() const;
  double measure() const;
  BoundaryCondition condition(int axis, int side) const {
    return sides[2 * axis + (side > 0 ? 1 : 0)];
  }
};

enum class SpherePointSource { extremal, fibonacci };

inline int plane_wave_count(int q, int dim) {
  return dim == 2 ? 2 * q + 1 : (q + 1) * (q + 1);
}

using CellIndex = std::array<std::int64_t, 3>;

/// A node of the refinement forest.  Only leaves are elements of the mesh;
/// refined nodes keep their record so ids stay stable.
struct Element {
  ElementId id = kNoElement;
  ElementId parent = kNoElement;
  ElementId first_child = kNoElement;  // children have consecutive ids
  int level = 0;
  CellIndex index{0, 0, 0};  // cell position on the level-`level` lattice
  double k = 0.0;
  int q = 1;
  DirectionFrame frame;
  /// Explicit direction set overriding the frame (empty for the standard
  /// rotated set).  Used to inject known directions, e.g. for exactness
  /// checks with several propagating waves.
  std::vector<Vec3> explicit_directions;

  bool is_leaf() const { return first_child == kNoElement; }
};

enum class FacetKind { interior, robin, dirichlet };

/// A skeleton face at the finer of the two adjacent resolutions.
struct Facet {
  Box geometry;
  int axis = 0;                  // normal axis
  Vec3 normal = Vec3::Zero();    // unit normal, outward from side_a
  ElementId side_a = kNoElement;
  ElementId side_b = kNoElement; // kNoElement on the boundary
  FacetKind kind = FacetKind::interior;

  double measure() const { return geometry.measure(); }
  double diameter() const { return geometry.diameter(); }
  bool is_boundary() const { return kind != FacetKind::interior; }
  /// Same interior facet seen from the other side.
  Facet flipped() const;
};

using WavenumberField = std::function<double(const Vec3&)>;

class Mesh {
 public:
  Mesh(DomainSpec domain, int base_resolution);

  int dim() const { return domain_.dim(); }
  const DomainSpec& domain() const { return domain_; }
  int base_resolution() const { return n_; }

  /// Number of ids handed out so far (leaves and refined nodes).
  std::size_t id_count() const { return nodes_.size(); }
  const Element& element(ElementId id) const { return nodes_.at(id); }
  Element& element(ElementId id) { return nodes_.at(id); }
  /// Leaf ids in ascending order.
  const std::vector<ElementId>& leaves() const { return leaves_; }
  std::size_t leaf_count() const { return leaves_.size(); }

  Box bbox(ElementId id) const;
  Vec3 centroid(ElementId id) const { return bbox(id).center(); }
  double diameter(ElementId id) const { return bbox(id).diameter(); }
  double measure(ElementId id) const { return bbox(id).measure(); }
  int plane_wave_count(ElementId id) const {
    return tdg::plane_wave_count(element(id).q, dim());
  }
  std::size_t total_plane_waves() const;

  SpherePointSource sphere_points() const { return sphere_points_; }
  void set_sphere_points(SpherePointSource s) { sphere_points_ = s; }

  /// Node at (level, index) or kNoElement.
  ElementId find(int level, const CellIndex& index) const;
  /// True if the level-`level` cell lies inside the domain.
  bool inside_domain(int level, const CellIndex& index) const;
  /// Leaves across face (axis, side) of leaf `id` (side = -1 or +1); empty
  /// on the domain boundary.
  std::vector<ElementId> face_neighbors(ElementId id, int axis, int side) const;

  /// Appends a base cell; used by build_initial_mesh.
  ElementId add_root(const CellIndex& index, double k, int q);
  /// Splits leaf `id` into 2^d children with fresh consecutive ids, which
  /// inherit k, q, frame and explicit directions.  Returns the first child.
  ElementId split(ElementId id);

 private:
  struct KeyHash {
    std::size_t operator()(const std::pair<int, CellIndex>& key) const;
  };

  void collect_adjacent_leaves(ElementId node, int axis, int side,
                               std::vector<ElementId>& out) const;

  DomainSpec domain_;
  int n_;
  double spacing_;
  SpherePointSource sphere_points_ = SpherePointSource::extremal;
  std::vector<Element> nodes_;
  std::vector<ElementId> leaves_;
  std::unordered_map<std::pair<int, CellIndex>, ElementId, KeyHash> lookup_;
};

/// Uniform n x n (x n) grid restricted to the domain; every element starts at
/// level 0 with degree q0 and the canonical frame.  k is taken from
/// `k_field`, which must be constant on every cell.
Mesh build_initial_mesh(const DomainSpec& domain, int n,
                        const WavenumberField& k_field, int q0);

struct RefinementResult {
  Mesh mesh;
  /// Leaves refined only to restore 1-irregularity, in refinement order.
  std::vector<ElementId> closure;
};

/// Refines the marked leaves and then, until no face has adjacent levels
/// differing by more than one, every leaf that violates the constraint.
RefinementResult refine_with_closure(const Mesh& mesh,
                                     std::span<const ElementId> marked);

Mesh refine_elements(const Mesh& mesh, std::span<const ElementId> marked);

/// Interior facets are emitted once, at the finer resolution; boundary
/// facets carry their Robin/Dirichlet tag.  Ordered by owning leaf id.
std::vector<Facet> skeleton_facets(const Mesh& mesh);

/// Largest level difference across any face (0 or 1 for valid meshes).
int max_level_gap(const Mesh& mesh);

}  // namespace tdg
