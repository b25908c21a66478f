#pragma once

#include <limits>
#include <vector>

#include "tdg/assembly.hpp"
#include "tdg/problems.hpp"
#include "tdg/solution.hpp"

namespace tdg {

/// Squared indicator components of one element.
struct IndicatorRecord {
  ElementId id = kNoElement;
  double jump_u2 = 0.0;
  double jump_gradu2 = 0.0;
  double robin2 = 0.0;
  double dirichlet2 = 0.0;
  double eta_pred = std::numeric_limits<double>::infinity();

  double eta2() const { return jump_u2 + jump_gradu2 + robin2 + dirichlet2; }
  double eta() const { return std::sqrt(eta2()); }
};

/// Indicators for every leaf (ascending id).  Face integrals run over the
/// skeleton facets, so hanging faces are split at the finer resolution.
std::vector<IndicatorRecord> compute_indicators(const DiscreteSolution& solution,
                                                const ProblemSpec& problem,
                                                const PenaltyParams& params);

/// Indicator of one element (computes only the facets touching it).
IndicatorRecord element_indicator(ElementId id, const DiscreteSolution& solution,
                                  const ProblemSpec& problem, const PenaltyParams& params);

enum class EstimateForm { root, square };

/// (sum eta_K^2)^(1/2); EstimateForm::square gives (sum eta_K^2)^2.
double global_estimate(const std::vector<IndicatorRecord>& records,
                       EstimateForm form = EstimateForm::root);

struct Effectivities {
  double total = 0.0;
  double jump_u = 0.0;
  double jump_gradu = 0.0;
  double robin = 0.0;
  bool flagged = false;  // exact error vanished; values are +inf
};

/// Estimate components divided by the exact L2 error ||u - u_hp||.
Effectivities effectivities(const std::vector<IndicatorRecord>& records, double l2_error,
                            EstimateForm form = EstimateForm::root);
Effectivities effectivities(const std::vector<IndicatorRecord>& records,
                            const DiscreteSolution& solution, const ProblemSpec& problem,
                            EstimateForm form = EstimateForm::root);

}  // namespace tdg
