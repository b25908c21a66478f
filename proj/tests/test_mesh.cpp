#include <algorithm>
#include <random>
#include <set>

#include <doctest.h>

#include "tdg/mesh.hpp"

using namespace tdg;

namespace {

Mesh uniform(DomainKind kind, int n, int q = 3, BoundaryCondition bc = BoundaryCondition::robin) {
  return build_initial_mesh(DomainSpec::uniform(kind, bc), n, [](const Vec3&) { return 10.0; }, q);
}

double leaf_measure(const Mesh& m) {
  double s = 0.0;
  for (ElementId id : m.leaves()) s += m.measure(id);
  return s;
}

std::size_t count(const std::vector<Facet>& fs, bool boundary) {
  return static_cast<std::size_t>(
      std::count_if(fs.begin(), fs.end(), [&](const Facet& f) { return f.is_boundary() == boundary; }));
}

bool contains_face(const Box& cell, const Facet& f) {
  const int a = f.axis;
  const double plane = f.geometry.lo[a];
  if (std::abs(plane - cell.lo[a]) > 1e-14 && std::abs(plane - cell.hi[a]) > 1e-14) return false;
  for (int b = 0; b < cell.dim; ++b) {
    if (b == a) continue;
    if (f.geometry.lo[b] < cell.lo[b] - 1e-14 || f.geometry.hi[b] > cell.hi[b] + 1e-14) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("initial mesh element counts") {
  CHECK(uniform(DomainKind::unit_square, 4).leaf_count() == 16);
  CHECK(uniform(DomainKind::l_shape, 8).leaf_count() == 48);
  CHECK(uniform(DomainKind::unit_cube, 2).leaf_count() == 8);
  const Mesh m = uniform(DomainKind::unit_square, 4, 3);
  for (ElementId id : m.leaves()) {
    CHECK(m.element(id).level == 0);
    CHECK(m.element(id).q == 3);
    CHECK(m.element(id).frame == DirectionFrame{});
    CHECK(m.plane_wave_count(id) == 7);
  }
  CHECK(uniform(DomainKind::unit_cube, 2, 2).plane_wave_count(0) == 9);
}

TEST_CASE("L-shape cells avoid the removed quadrant") {
  // brute-force enumeration of cell centres in (-1,1)^2 \ [0,1) x (-1,0]
  const Mesh m = uniform(DomainKind::l_shape, 8);
  std::size_t expected = 0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      const double x = -1 + (i + 0.5) * 0.25, y = -1 + (j + 0.5) * 0.25;
      if (!(x > 0 && y < 0)) ++expected;
    }
  CHECK(m.leaf_count() == expected);
  for (ElementId id : m.leaves()) {
    const Vec3 c = m.centroid(id);
    CHECK_FALSE((c[0] > 0 && c[1] < 0));
  }
  CHECK(std::abs(leaf_measure(m) - 3.0) <= 1e-12);
}

TEST_CASE("initial mesh input validation") {
  CHECK_THROWS_AS(uniform(DomainKind::l_shape, 3), ConfigError);
  CHECK_THROWS_AS(uniform(DomainKind::unit_square, 0), ConfigError);
  // k must be constant per cell: an interface at y = 0.3 is not resolved
  CHECK_THROWS_AS(build_initial_mesh(DomainSpec::uniform(DomainKind::square2, BoundaryCondition::dirichlet),
                                     4, [](const Vec3& x) { return x[1] <= 0.3 ? 2.0 : 1.0; }, 3),
                  ConfigError);
  // an interface at y = 0 is resolved by even n
  CHECK_NOTHROW(build_initial_mesh(DomainSpec::uniform(DomainKind::square2, BoundaryCondition::dirichlet),
                                   4, [](const Vec3& x) { return x[1] <= 0.0 ? 2.0 : 1.0; }, 3));
}

TEST_CASE("refine_elements") {
  const Mesh m = uniform(DomainKind::unit_square, 2);
  const std::vector<ElementId> one{0};
  const Mesh r = refine_elements(m, one);
  CHECK(r.leaf_count() == 7);
  // surviving ids are stable and children get fresh consecutive ids
  for (ElementId id : {1, 2, 3}) CHECK(r.element(id).is_leaf());
  CHECK(r.element(0).first_child == 4);
  for (ElementId c = 4; c < 8; ++c) {
    CHECK(r.element(c).parent == 0);
    CHECK(r.element(c).level == 1);
    CHECK(r.element(c).q == m.element(0).q);
    CHECK(r.element(c).k == m.element(0).k);
  }
  // children partition the parent
  double s = 0.0;
  for (ElementId c = 4; c < 8; ++c) s += r.measure(c);
  CHECK(std::abs(s - m.measure(0)) <= 1e-15);

  const std::vector<ElementId> none;
  const Mesh same = refine_elements(m, none);
  CHECK(same.leaves() == m.leaves());
  CHECK(same.id_count() == m.id_count());

  const std::vector<ElementId> bad{99};
  CHECK_THROWS_AS(refine_elements(m, bad), Error);
}

TEST_CASE("closure restores 1-irregularity") {
  const Mesh m = uniform(DomainKind::unit_square, 2);
  const std::vector<ElementId> first{0};
  const Mesh r1 = refine_elements(m, first);
  // child of element 0 touching neighbour 1 (x-adjacent): the +x, -y child
  ElementId target = kNoElement;
  for (ElementId c = 4; c < 8; ++c) {
    const Vec3 x = r1.centroid(c);
    if (x[0] > 0.25 && x[1] < 0.25) target = c;
  }
  REQUIRE(target != kNoElement);
  const std::vector<ElementId> second{target};
  const RefinementResult res = refine_with_closure(r1, second);
  CHECK(max_level_gap(res.mesh) <= 1);
  CHECK_FALSE(res.closure.empty());
  CHECK(std::find(res.closure.begin(), res.closure.end(), 1) != res.closure.end());
  CHECK_FALSE(res.mesh.element(1).is_leaf());
}

TEST_CASE("skeleton facet counts") {
  // unit cells: (-1,1)^2 with n = 2
  const Mesh sq = uniform(DomainKind::square2, 2);
  const auto fs = skeleton_facets(sq);
  CHECK(count(fs, false) == 4);
  CHECK(count(fs, true) == 8);
  // general n: 2 n (n - 1) interior and 4 n boundary faces
  for (int n : {1, 3, 5}) {
    const auto f = skeleton_facets(uniform(DomainKind::unit_square, n));
    CHECK(count(f, false) == static_cast<std::size_t>(2 * n * (n - 1)));
    CHECK(count(f, true) == static_cast<std::size_t>(4 * n));
  }
  const auto fl = skeleton_facets(uniform(DomainKind::l_shape, 2));
  CHECK(count(fl, false) == 2);
  CHECK(count(fl, true) == 8);
  const auto fc = skeleton_facets(uniform(DomainKind::unit_cube, 2));
  CHECK(count(fc, false) == 12);
  CHECK(count(fc, true) == 24);
}

TEST_CASE("hanging face is reported as sub-facets adjacent to the coarse element") {
  const Mesh m = uniform(DomainKind::unit_square, 2);
  const std::vector<ElementId> one{0};
  const Mesh r = refine_elements(m, one);
  // element 1 is the coarse +x neighbour of element 0
  int hits = 0;
  for (const Facet& f : skeleton_facets(r)) {
    if (f.is_boundary()) continue;
    if (f.side_a == 1 || f.side_b == 1) {
      const ElementId other = f.side_a == 1 ? f.side_b : f.side_a;
      if (r.element(other).parent == 0) {
        ++hits;
        CHECK(std::abs(f.measure() - 0.25) <= 1e-15);
      }
    }
  }
  CHECK(hits == 2);

  const Mesh c = uniform(DomainKind::unit_cube, 2);
  const Mesh rc = refine_elements(c, one);
  int hits3 = 0;
  for (const Facet& f : skeleton_facets(rc))
    if (!f.is_boundary() && (f.side_a == 1 || f.side_b == 1)) {
      const ElementId other = f.side_a == 1 ? f.side_b : f.side_a;
      if (rc.element(other).parent == 0) ++hits3;
    }
  CHECK(hits3 == 4);
}

TEST_CASE("boundary tags follow the domain partition") {
  DomainSpec d = DomainSpec::uniform(DomainKind::unit_square, BoundaryCondition::robin);
  d.sides[1] = BoundaryCondition::dirichlet;  // +x face
  const Mesh m = build_initial_mesh(d, 3, [](const Vec3&) { return 5.0; }, 2);
  for (const Facet& f : skeleton_facets(m)) {
    if (!f.is_boundary()) continue;
    const bool plus_x = f.axis == 0 && f.normal[0] > 0;
    CHECK((f.kind == FacetKind::dirichlet) == plus_x);
    // outward normal
    const Vec3 c = m.centroid(f.side_a);
    CHECK(f.normal.dot(f.geometry.center() - c) > 0.0);
  }
}

TEST_CASE("property: random refinement keeps measure, 1-irregularity and facet containment") {
  std::mt19937_64 rng(11);
  for (DomainKind kind : {DomainKind::unit_square, DomainKind::l_shape, DomainKind::unit_cube}) {
    Mesh m = uniform(kind, kind == DomainKind::unit_cube ? 2 : 4);
    const double measure = m.domain().measure();
    const int steps = kind == DomainKind::unit_cube ? 3 : 6;
    for (int s = 0; s < steps; ++s) {
      std::vector<ElementId> marked;
      for (ElementId id : m.leaves())
        if (std::uniform_real_distribution<double>(0, 1)(rng) < 0.2) marked.push_back(id);
      const std::size_t before = m.id_count();
      Mesh next = refine_elements(m, marked);
      // surviving elements keep ids and geometry
      for (ElementId id = 0; id < static_cast<ElementId>(before); ++id) {
        CHECK(next.element(id).index == m.element(id).index);
        CHECK(next.element(id).level == m.element(id).level);
      }
      m = std::move(next);
      CHECK(max_level_gap(m) <= 1);
      CHECK(std::abs(leaf_measure(m) - measure) <= 1e-12 * measure);
      std::set<ElementId> leaves(m.leaves().begin(), m.leaves().end());
      for (const Facet& f : skeleton_facets(m)) {
        CHECK(leaves.count(f.side_a) == 1);
        CHECK(contains_face(m.bbox(f.side_a), f));
        if (!f.is_boundary()) {
          CHECK(f.side_a != f.side_b);
          CHECK(leaves.count(f.side_b) == 1);
          CHECK(contains_face(m.bbox(f.side_b), f));
          CHECK(std::abs(m.element(f.side_a).level - m.element(f.side_b).level) <= 1);
          CHECK(f.normal.dot(m.centroid(f.side_b) - m.centroid(f.side_a)) > 0.0);
        }
      }
    }
  }
}

TEST_CASE("property: refinement is deterministic") {
  const Mesh m = uniform(DomainKind::l_shape, 4);
  const std::vector<ElementId> marked{0, 5, 7};
  const Mesh a = refine_elements(m, marked), b = refine_elements(m, marked);
  CHECK(a.leaves() == b.leaves());
  for (ElementId id : a.leaves()) CHECK(a.element(id).index == b.element(id).index);
}
