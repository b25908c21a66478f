#include "tdg/driver.hpp"

#include <chrono>

#include "tdg/solve.hpp"

namespace tdg {

ProblemSpec make_problem(const ExperimentConfig& c) {
  ProblemSpec p;
  switch (c.problem) {
    case ProblemKind::hankel: p = ProblemSpec::hankel(c.k); break;
    case ProblemKind::lshape_singular: p = ProblemSpec::lshape_singular(c.k); break;
    case ProblemKind::transmission:
      p = ProblemSpec::transmission(c.omega, c.n1, c.n2, c.theta_deg * kPi / 180.0);
      break;
    case ProblemKind::plane_wave: {
      const DomainKind dk = c.domain.value_or(DomainKind::unit_cube);
      Vec3 d = c.direction;
      if (dk != DomainKind::unit_cube) {
        if (d[2] != 0.0)
          throw ConfigError("[problem] direction: a 2D domain needs a direction with zero z component");
      }
      p = ProblemSpec::plane_wave(c.k, d, dk);
      break;
    }
  }
  if (c.domain && *c.domain != p.domain.kind)
    throw ConfigError("[domain] kind: problem '" + p.name() +
                      "' is defined on a fixed domain; only plane_wave accepts a domain override");
  if (c.boundary) p.domain = DomainSpec::uniform(p.domain.kind, *c.boundary);
  p.vartheta = c.vartheta;
  if (p.domain.kind == DomainKind::l_shape && c.n % 2 != 0)
    throw ConfigError("[domain] n: the L-shape needs an even base resolution");
  return p;
}

Mesh make_initial_mesh(const ExperimentConfig& c, const ProblemSpec& problem) {
  Mesh mesh = build_initial_mesh(
      problem.domain, c.n, [&problem](const Vec3& x) { return problem.wavenumber(x); }, c.q0);
  mesh.set_sphere_points(c.sphere_points);
  return mesh;
}

SolveOutcome solve_and_estimate(const Mesh& mesh, const ProblemSpec& problem,
                                const ExperimentConfig& c) {
  const auto t0 = std::chrono::steady_clock::now();
  auto shared = std::make_shared<const Mesh>(mesh);
  const GlobalSystem system = assemble_system(*shared, problem, c.penalty);
  const SolveReport report = solve(system);
  DiscreteSolution solution(shared, report.coeffs);
  std::vector<IndicatorRecord> indicators = compute_indicators(solution, problem, c.penalty);
  const L2Error err = l2_error(solution, problem);
  const Effectivities eff = effectivities(indicators, err.error, c.estimate_form);
  const auto t1 = std::chrono::steady_clock::now();

  IterationRecord r;
  r.n_elements = shared->leaf_count();
  r.dofs = static_cast<std::size_t>(system.size());
  r.rel_l2_error = err.relative();
  r.estimate = global_estimate(indicators, c.estimate_form);
  r.eff_total = eff.total;
  r.eff_jump_u = eff.jump_u;
  r.eff_jump_gradu = eff.jump_gradu;
  r.eff_robin = eff.robin;
  r.cond = report.condition_estimate;
  r.residual = report.residual;
  r.wall_ms = c.record_timing ? std::chrono::duration<double, std::milli>(t1 - t0).count() : 0.0;
  return SolveOutcome{shared, std::move(solution), std::move(indicators), r};
}

namespace {

constexpr double kResidualFlag = 1e-6;

std::vector<double> leaf_eta(const Mesh& mesh, const std::vector<IndicatorRecord>& ind) {
  std::vector<double> eta;
  eta.reserve(mesh.leaf_count());
  for (const auto& r : ind) eta.push_back(r.eta());
  return eta;
}

bool estimate_rose_twice(const std::vector<IterationRecord>& recs) {
  const std::size_t n = recs.size();
  return n >= 3 && recs[n - 1].estimate > recs[n - 2].estimate &&
         recs[n - 2].estimate > recs[n - 3].estimate;
}

void set_uniform_degree(Mesh& mesh, int q) {
  for (ElementId id : mesh.leaves()) mesh.element(id).q = q;
}

std::vector<ElementId> all_leaves(const Mesh& mesh) { return mesh.leaves(); }

}  // namespace

RunResult run_experiment(const ExperimentConfig& c) {
  RunResult run;
  run.label = c.name;
  const ProblemSpec problem = make_problem(c);
  Mesh mesh = make_initial_mesh(c, problem);
  Predictions pred2 = initial_predictions(mesh);

  for (int iter = 0;; ++iter) {
    SolveOutcome out;
    try {
      out = solve_and_estimate(mesh, problem, c);
    } catch (const SingularSystemError& e) {
      run.solver_error = e.what();
      run.stop_reason = "solver failure";
      return run;
    }
    out.record.iter = iter;
    for (auto& r : out.indicators) r.eta_pred = std::sqrt(pred2[r.id]);
    if (out.record.residual > kResidualFlag) run.residual_flagged = true;
    run.records.push_back(out.record);
    run.snapshots.push_back({out.mesh, leaf_eta(*out.mesh, out.indicators)});

    if (iter >= c.adapt.max_iters) {
      run.stop_reason = "max_iters";
      break;
    }
    if (out.record.cond > c.cond_limit) {
      run.stop_reason = "condition limit";
      break;
    }
    if (estimate_rose_twice(run.records)) {
      run.stop_reason = "estimate increased twice";
      break;
    }

    const std::vector<ElementId> marked = mark_elements(out.indicators, c.adapt.fraction);
    std::vector<ElementId> h_group, p_group;
    classify_marked(marked, out.indicators, pred2, c.adapt.mode, h_group, p_group);
    apply_degree_limit(mesh, h_group, p_group);

    Mesh updated = mesh;
    const std::vector<ElementId> targets =
        policy_targets(updated, c.adapt.policy, marked, p_group);
    const int changed = update_frames(updated, out.solution, targets, c.directional);

    AdaptResult step = decide_and_refine(updated, marked, out.indicators, pred2, c.adapt);
    enforce_degree_compatibility(step.mesh);

    IterationRecord& rec = run.records.back();
    rec.h_refined = static_cast<int>(step.h_refined.size());
    rec.p_refined = static_cast<int>(step.p_refined.size());
    rec.closure = static_cast<int>(step.closure.size());
    rec.frames_changed = changed;

    mesh = std::move(step.mesh);
    pred2 = std::move(step.pred2);
  }
  return run;
}

Table2Result run_table2_protocol(const ExperimentConfig& c) {
  const ProblemSpec problem = make_problem(c);
  Table2Result out;
  out.standard.label = "standard";
  out.adaptive.label = "adaptive";

  Mesh base = make_initial_mesh(c, problem);
  set_uniform_degree(base, c.q_start);
  // seed solve; its solution supplies the first frame update
  SolveOutcome prev = solve_and_estimate(base, problem, c);
  Mesh adaptive_mesh = base;
  int iter = 0;
  for (int q = c.q_start + 1; q <= c.q_end; ++q, ++iter) {
    Mesh standard_mesh = make_initial_mesh(c, problem);
    set_uniform_degree(standard_mesh, q);
    SolveOutcome s = solve_and_estimate(standard_mesh, problem, c);
    s.record.iter = iter;
    out.standard.records.push_back(s.record);
    out.standard.snapshots.push_back({s.mesh, leaf_eta(*s.mesh, s.indicators)});

    const int changed = update_frames(adaptive_mesh, prev.solution, all_leaves(adaptive_mesh), c.directional);
    set_uniform_degree(adaptive_mesh, q);
    SolveOutcome a = solve_and_estimate(adaptive_mesh, problem, c);
    a.record.iter = iter;
    a.record.frames_changed = changed;
    out.adaptive.records.push_back(a.record);
    out.adaptive.snapshots.push_back({a.mesh, leaf_eta(*a.mesh, a.indicators)});

    out.rows.push_back({q, s.record.dofs, s.record.rel_l2_error, a.record.rel_l2_error});
    prev = std::move(a);
  }
  out.standard.stop_reason = out.adaptive.stop_reason = "protocol complete";
  return out;
}

Table3Result run_table3_protocol(const ExperimentConfig& c) {
  const ProblemSpec problem = make_problem(c);
  Table3Result out;
  out.runs.label = "table3";
  int iter = 0;
  auto record = [&](SolveOutcome& s, int changed) {
    s.record.iter = iter++;
    s.record.frames_changed = changed;
    out.runs.records.push_back(s.record);
    out.runs.snapshots.push_back({s.mesh, leaf_eta(*s.mesh, s.indicators)});
  };
  for (int q = c.q_start + 1; q <= c.q_end; ++q) {
    Mesh mesh = make_initial_mesh(c, problem);
    set_uniform_degree(mesh, q);
    SolveOutcome s = solve_and_estimate(mesh, problem, c);
    record(s, 0);
    Table3Row row{q, s.record.dofs, {s.record.rel_l2_error}};
    for (int pass = 0; pass < c.passes; ++pass) {
      const int changed = update_frames(mesh, s.solution, all_leaves(mesh), c.directional);
      s = solve_and_estimate(mesh, problem, c);
      record(s, changed);
      row.errors.push_back(s.record.rel_l2_error);
    }
    out.rows.push_back(std::move(row));
  }
  out.runs.stop_reason = "protocol complete";
  return out;
}

std::vector<CalibrationRun> run_calibration_protocol(const ExperimentConfig& c) {
  std::vector<CalibrationRun> out;
  for (double k : c.calibration_k) {
    for (int q : c.calibration_q) {
      ExperimentConfig sub = c;
      sub.k = k;
      sub.omega = k;
      sub.q0 = q;
      sub.adapt.mode = AdaptMode::h_only;
      sub.adapt.policy = DirectionPolicy::none;
      sub.protocol = Protocol::adaptive;
      char label[64];
      std::snprintf(label, sizeof(label), "k%g_q%d", k, q);
      sub.name = label;
      out.push_back({k, q, run_experiment(sub)});
    }
  }
  return out;
}

}  // namespace tdg
