#pragma once

#include <vector>

#include "tdg/directional.hpp"
#include "tdg/estimator.hpp"
#include "tdg/mesh.hpp"

namespace tdg {

enum class AdaptMode { hp, h_only };

struct AdaptConfig {
  double gamma_h = 4.0;
  double gamma_p = 0.4;
  double gamma_n = 1.0;
  double fraction = 0.25;
  AdaptMode mode = AdaptMode::hp;
  DirectionPolicy policy = DirectionPolicy::none;
  int max_iters = 10;

  void validate() const;
};

/// Top ceil(fraction N) elements by eta (descending, ties by ascending id).
/// The result is sorted by id.
std::vector<ElementId> mark_elements(const std::vector<IndicatorRecord>& records, double fraction);

/// True if a marked element with indicator eta and prediction eta_pred is
/// to be subdivided.
bool prefers_h_refinement(double eta, double eta_pred, AdaptMode mode);

/// Squared predictions, indexed by element id (+inf for never-refined
/// initial elements).
using Predictions = std::vector<double>;

Predictions initial_predictions(const Mesh& mesh);

struct AdaptResult {
  Mesh mesh;
  Predictions pred2;
  std::vector<ElementId> h_refined;  // marked and subdivided
  std::vector<ElementId> p_refined;  // marked and enriched
  std::vector<ElementId> closure;    // subdivided for 1-irregularity
};

/// Splits `marked` into the h and p groups.
void classify_marked(const std::vector<ElementId>& marked,
                     const std::vector<IndicatorRecord>& records, const Predictions& pred2,
                     AdaptMode mode, std::vector<ElementId>& h_group,
                     std::vector<ElementId>& p_group);

/// False when no 3D direction set exists for degree q (extremal source).
bool degree_supported(const Mesh& mesh, int q);

/// Moves p-group elements whose next degree is unsupported to the h group.
void apply_degree_limit(const Mesh& mesh, std::vector<ElementId>& h_group,
                        std::vector<ElementId>& p_group);

/// One refinement step: h/p decision per marked element, prediction
/// update, closure.  Degrees are not smoothed here.
AdaptResult decide_and_refine(const Mesh& mesh, const std::vector<ElementId>& marked,
                              const std::vector<IndicatorRecord>& records,
                              const Predictions& pred2, const AdaptConfig& config);

/// Raises the lower degree across faces until neighbouring q differ by at
/// most one.  Returns the number of elements raised.
int enforce_degree_compatibility(Mesh& mesh);

}  // namespace tdg
