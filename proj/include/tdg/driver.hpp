#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tdg/assembly.hpp"
#include "tdg/directional.hpp"
#include "tdg/estimator.hpp"
#include "tdg/hp_adapt.hpp"
#include "tdg/problems.hpp"

namespace tdg {

enum class Protocol { adaptive, table2, table3, calibration };

/// Everything needed to reproduce a run.  Defaults describe the smooth
/// Hankel problem.
struct ExperimentConfig {
  std::string name = "experiment";

  // [domain]
  std::optional<DomainKind> domain;  // default: the problem's own domain
  int n = 8;
  std::optional<BoundaryCondition> boundary;

  // [problem]
  ProblemKind problem = ProblemKind::hankel;
  double k = 20.0;
  double omega = 11.0;
  double n1 = 2.0;
  double n2 = 1.0;
  double theta_deg = 29.0;
  Vec3 direction = Vec3(1, 1, 1).normalized();
  double vartheta = 1.0;

  // [discretization]
  int q0 = 3;
  PenaltyParams penalty;
  SpherePointSource sphere_points = SpherePointSource::extremal;

  // [adaptivity]
  Protocol protocol = Protocol::adaptive;
  AdaptConfig adapt;
  DirectionalParams directional;
  double cond_limit = 1e14;
  EstimateForm estimate_form = EstimateForm::root;
  int q_start = 2;  // table protocols: q_start is the seed solve
  int q_end = 9;
  int passes = 2;   // table3: directional passes per q
  std::vector<double> calibration_k{20, 30, 40, 50};
  std::vector<int> calibration_q{3, 4, 5, 6, 7, 8};

  // [output]
  std::string out_dir = "out";
  bool write_vtk = true;
  bool record_timing = false;

  void validate() const;
};

/// INI text with sections [domain] [problem] [discretization] [adaptivity]
/// [output].  Keys absent from the text keep the values of `base`.
ExperimentConfig parse_config_string(const std::string& text,
                                     const ExperimentConfig& base = ExperimentConfig{});
ExperimentConfig parse_config_file(const std::string& path,
                                   const ExperimentConfig& base = ExperimentConfig{});

/// Canonical JSON form (sorted keys) and its FNV-1a hash.
std::string config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const std::string& json);
std::string config_hash(const ExperimentConfig& config);

/// Directory holding the preset INI files (TDG_PRESET_DIR overrides).
std::string preset_directory();
std::string preset_path(const std::string& name);

ProblemSpec make_problem(const ExperimentConfig& config);
Mesh make_initial_mesh(const ExperimentConfig& config, const ProblemSpec& problem);

struct IterationRecord {
  int iter = 0;
  std::size_t n_elements = 0;
  std::size_t dofs = 0;
  double rel_l2_error = 0.0;
  double estimate = 0.0;
  double eff_total = 0.0;
  double eff_jump_u = 0.0;
  double eff_jump_gradu = 0.0;
  double eff_robin = 0.0;
  double cond = 0.0;
  double residual = 0.0;
  double wall_ms = 0.0;
  int h_refined = 0;
  int p_refined = 0;
  int closure = 0;
  int frames_changed = 0;
};

struct IterationSnapshot {
  std::shared_ptr<const Mesh> mesh;
  std::vector<double> eta;  // by leaf position
};

struct SolveOutcome {
  std::shared_ptr<const Mesh> mesh;
  DiscreteSolution solution;
  std::vector<IndicatorRecord> indicators;
  IterationRecord record;
};

/// Assemble, solve, estimate and measure on a fixed mesh.
SolveOutcome solve_and_estimate(const Mesh& mesh, const ProblemSpec& problem,
                                const ExperimentConfig& config);

struct RunResult {
  std::string label;
  std::vector<IterationRecord> records;
  std::vector<IterationSnapshot> snapshots;
  std::string stop_reason;
  std::string solver_error;  // non-empty when a solve failed
  bool residual_flagged = false;
};

/// Solve -> estimate -> record -> direction update -> mark -> refine loop.
RunResult run_experiment(const ExperimentConfig& config);

struct Table2Row {
  int q;
  std::size_t dofs;
  double standard;
  double adaptive;
};

struct Table2Result {
  std::vector<Table2Row> rows;
  RunResult standard;
  RunResult adaptive;
};

/// Uniform p-refinement q_start+1..q_end on the initial mesh, with fixed
/// canonical frames and with frames updated from the previous solve.
Table2Result run_table2_protocol(const ExperimentConfig& config);

struct Table3Row {
  int q;
  std::size_t dofs;
  std::vector<double> errors;  // initial, then after each pass
};

struct Table3Result {
  std::vector<Table3Row> rows;
  RunResult runs;  // one record per solve
};

/// At each fixed q: canonical solve, then `passes` rounds of frame update
/// and re-solve.
Table3Result run_table3_protocol(const ExperimentConfig& config);

struct CalibrationRun {
  double k;
  int q;
  RunResult run;
};

/// h-refinement with fixed q for every (k, q) of the calibration grid.
std::vector<CalibrationRun> run_calibration_protocol(const ExperimentConfig& config);

/// CSV text for a record list (header line included).
std::string convergence_csv(const std::vector<IterationRecord>& records, bool with_timing);

void write_vtk(const Mesh& mesh, const std::vector<double>& eta, const std::string& path);

/// convergence.csv, run.json and (if enabled) mesh_iter<NNN>.vtk in out_dir.
void write_outputs(const RunResult& run, const ExperimentConfig& config,
                   const std::string& out_dir);

/// Runs the configured protocol and writes all artifacts.  Returns false if
/// a solve failed (outputs are still flushed).
bool run_and_write(const ExperimentConfig& config, std::string* error = nullptr);

}  // namespace tdg
