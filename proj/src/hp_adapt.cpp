#include "tdg/hp_adapt.hpp"

#include "tdg/basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace tdg {

void AdaptConfig::validate() const {
  if (!(gamma_h > 0.0 && gamma_p > 0.0 && gamma_n > 0.0))
    throw ConfigError("gamma_h, gamma_p and gamma_n must be positive");
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ConfigError("fraction must lie in (0, 1]");
  if (max_iters < 0) throw ConfigError("max_iters must be >= 0");
}

std::vector<ElementId> mark_elements(const std::vector<IndicatorRecord>& records,
                                     double fraction) {
  if (records.empty()) return {};
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ea = records[a].eta2(), eb = records[b].eta2();
    if (ea != eb) return ea > eb;
    return records[a].id < records[b].id;
  });
  const auto n = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(records.size()) - 1e-12));
  std::vector<ElementId> out;
  for (std::size_t i = 0; i < std::min(n, records.size()); ++i) out.push_back(records[order[i]].id);
  std::sort(out.begin(), out.end());
  return out;
}

bool prefers_h_refinement(double eta, double eta_pred, AdaptMode mode) {
  return mode == AdaptMode::h_only || eta > eta_pred;
}

Predictions initial_predictions(const Mesh& mesh) {
  return Predictions(mesh.id_count(), std::numeric_limits<double>::infinity());
}

namespace {

const IndicatorRecord* find_record(const std::vector<IndicatorRecord>& records, ElementId id) {
  auto it = std::lower_bound(records.begin(), records.end(), id,
                             [](const IndicatorRecord& r, ElementId v) { return r.id < v; });
  return (it != records.end() && it->id == id) ? &*it : nullptr;
}

}  // namespace

void classify_marked(const std::vector<ElementId>& marked,
                     const std::vector<IndicatorRecord>& records, const Predictions& pred2,
                     AdaptMode mode, std::vector<ElementId>& h_group,
                     std::vector<ElementId>& p_group) {
  h_group.clear();
  p_group.clear();
  for (ElementId id : marked) {
    const IndicatorRecord* r = find_record(records, id);
    if (!r) throw Error("marked element " + std::to_string(id) + " has no indicator");
    if (prefers_h_refinement(r->eta(), std::sqrt(pred2.at(id)), mode))
      h_group.push_back(id);
    else
      p_group.push_back(id);
  }
}

bool degree_supported(const Mesh& mesh, int q) {
  if (mesh.dim() == 2 || mesh.sphere_points() == SpherePointSource::fibonacci) return true;
  return has_sphere_points(plane_wave_count(q, 3));
}

void apply_degree_limit(const Mesh& mesh, std::vector<ElementId>& h_group,
                        std::vector<ElementId>& p_group) {
  std::vector<ElementId> keep;
  for (ElementId id : p_group) {
    if (degree_supported(mesh, mesh.element(id).q + 1))
      keep.push_back(id);
    else
      h_group.push_back(id);
  }
  p_group = std::move(keep);
  std::sort(h_group.begin(), h_group.end());
}

AdaptResult decide_and_refine(const Mesh& mesh, const std::vector<ElementId>& marked,
                              const std::vector<IndicatorRecord>& records,
                              const Predictions& pred2, const AdaptConfig& cfg) {
  std::vector<ElementId> sorted_marked(marked);
  std::sort(sorted_marked.begin(), sorted_marked.end());
  sorted_marked.erase(std::unique(sorted_marked.begin(), sorted_marked.end()), sorted_marked.end());

  std::vector<ElementId> h_group, p_group;
  classify_marked(sorted_marked, records, pred2, cfg.mode, h_group, p_group);
  apply_degree_limit(mesh, h_group, p_group);

  Mesh enriched = mesh;
  Predictions next(pred2);
  // unmarked elements first; marked ones are overwritten below
  for (ElementId id : mesh.leaves()) next[id] = cfg.gamma_n * pred2[id];
  for (ElementId id : p_group) {
    const IndicatorRecord* r = find_record(records, id);
    enriched.element(id).q += 1;
    next[id] = cfg.gamma_p * r->eta2();
  }

  RefinementResult ref = refine_with_closure(enriched, h_group);
  const int nchildren = 1 << mesh.dim();
  next.resize(ref.mesh.id_count(), std::numeric_limits<double>::infinity());

  auto child_prediction = [&](ElementId parent, double eta2) {
    const int q = ref.mesh.element(parent).q;
    const double val = cfg.gamma_h * std::pow(0.5, 2.0 * q) * eta2 / nchildren;
    const ElementId first = ref.mesh.element(parent).first_child;
    for (int c = 0; c < nchildren; ++c) next[first + c] = val;
  };
  for (ElementId id : h_group) child_prediction(id, find_record(records, id)->eta2());
  for (ElementId id : ref.closure) {
    // closure may hit elements created in this step; fall back to the
    // nearest ancestor that carries an indicator
    ElementId src = id;
    const IndicatorRecord* r = find_record(records, src);
    while (!r && ref.mesh.element(src).parent != kNoElement) {
      src = ref.mesh.element(src).parent;
      r = find_record(records, src);
    }
    child_prediction(id, r ? r->eta2() : 0.0);
  }

  AdaptResult out{std::move(ref.mesh), std::move(next), std::move(h_group), std::move(p_group),
                  std::move(ref.closure)};
  return out;
}

int enforce_degree_compatibility(Mesh& mesh) {
  std::vector<char> raised(mesh.id_count(), 0);
  for (;;) {
    std::vector<std::pair<ElementId, int>> bumps;
    for (ElementId id : mesh.leaves()) {
      const int q = mesh.element(id).q;
      int need = q;
      for (int axis = 0; axis < mesh.dim(); ++axis)
        for (int side : {-1, 1})
          for (ElementId nb : mesh.face_neighbors(id, axis, side))
            need = std::max(need, mesh.element(nb).q - 1);
      if (need > q) bumps.emplace_back(id, need);
    }
    if (bumps.empty()) break;
    for (auto [id, q] : bumps) {
      mesh.element(id).q = q;
      raised[id] = 1;
    }
  }
  return static_cast<int>(std::count(raised.begin(), raised.end(), 1));
}

}  // namespace tdg
