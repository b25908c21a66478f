#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tdg/basis.hpp"
#include "tdg/driver.hpp"

namespace tdg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory '" + dir.string() + "': " + ec.message());
}

// JSON has no infinity; non-finite values become null
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json records_json(const std::vector<IterationRecord>& recs) {
  json arr = json::array();
  for (const auto& r : recs) {
    arr.push_back({{"iter", r.iter},
                   {"n_elements", r.n_elements},
                   {"dofs", r.dofs},
                   {"rel_l2_error", num(r.rel_l2_error)},
                   {"estimate", num(r.estimate)},
                   {"eff_total", num(r.eff_total)},
                   {"eff_jump_u", num(r.eff_jump_u)},
                   {"eff_jump_gradu", num(r.eff_jump_gradu)},
                   {"eff_robin", num(r.eff_robin)},
                   {"cond", num(r.cond)},
                   {"residual", num(r.residual)},
                   {"wall_ms", r.wall_ms},
                   {"h_refined", r.h_refined},
                   {"p_refined", r.p_refined},
                   {"closure", r.closure},
                   {"frames_changed", r.frames_changed}});
  }
  return arr;
}

json run_json(const RunResult& run, const ExperimentConfig& c) {
  json j;
  j["config"] = json::parse(config_to_json(c));
  j["config_hash"] = config_hash(c);
  j["label"] = run.label;
  j["stop_reason"] = run.stop_reason;
  j["solver_error"] = run.solver_error;
  j["residual_flagged"] = run.residual_flagged;
  j["records"] = records_json(run.records);
  return j;
}

}  // namespace

std::string convergence_csv(const std::vector<IterationRecord>& records, bool with_timing) {
  std::ostringstream out;
  out << "iter,n_elements,dofs,rel_l2_error,estimate,eff_total,eff_jump_u,eff_jump_gradu,"
         "eff_robin,cond,wall_ms\n";
  for (const auto& r : records) {
    out << r.iter << ',' << r.n_elements << ',' << r.dofs << ',' << fmt("%.10e", r.rel_l2_error)
        << ',' << fmt("%.10e", r.estimate) << ',' << fmt("%.10e", r.eff_total) << ','
        << fmt("%.10e", r.eff_jump_u) << ',' << fmt("%.10e", r.eff_jump_gradu) << ','
        << fmt("%.10e", r.eff_robin) << ',' << fmt("%.6e", r.cond) << ','
        << (with_timing ? fmt("%.3f", r.wall_ms) : std::string("0")) << '\n';
  }
  return out.str();
}

void write_vtk(const Mesh& mesh, const std::vector<double>& eta, const std::string& path) {
  const auto& leaves = mesh.leaves();
  if (eta.size() != leaves.size())
    throw Error("write_vtk: " + std::to_string(eta.size()) + " indicators for " +
                std::to_string(leaves.size()) + " elements");
  const int dim = mesh.dim();
  const int nv = dim == 2 ? 4 : 8;
  std::ostringstream out;
  out << "# vtk DataFile Version 3.0\ntdg mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << leaves.size() * nv << " double\n";
  out.precision(17);
  for (ElementId id : leaves) {
    const Box b = mesh.bbox(id);
    const double xs[2] = {b.lo[0], b.hi[0]}, ys[2] = {b.lo[1], b.hi[1]};
    const double zs[2] = {dim == 3 ? b.lo[2] : 0.0, dim == 3 ? b.hi[2] : 0.0};
    for (int layer = 0; layer < (dim == 3 ? 2 : 1); ++layer) {
      const double z = zs[layer];
      out << xs[0] << ' ' << ys[0] << ' ' << z << '\n'
          << xs[1] << ' ' << ys[0] << ' ' << z << '\n'
          << xs[1] << ' ' << ys[1] << ' ' << z << '\n'
          << xs[0] << ' ' << ys[1] << ' ' << z << '\n';
    }
  }
  out << "CELLS " << leaves.size() << ' ' << leaves.size() * (nv + 1) << '\n';
  for (std::size_t c = 0; c < leaves.size(); ++c) {
    out << nv;
    for (int v = 0; v < nv; ++v) out << ' ' << c * nv + v;
    out << '\n';
  }
  out << "CELL_TYPES " << leaves.size() << '\n';
  for (std::size_t c = 0; c < leaves.size(); ++c) out << (dim == 2 ? 9 : 12) << '\n';
  out << "CELL_DATA " << leaves.size() << '\n';
  out << "SCALARS q_K int 1\nLOOKUP_TABLE default\n";
  for (ElementId id : leaves) out << mesh.element(id).q << '\n';
  out << "SCALARS eta_K double 1\nLOOKUP_TABLE default\n";
  for (double e : eta) out << e << '\n';
  out << "VECTORS direction_0 double\n";
  for (ElementId id : leaves) {
    const Element& e = mesh.element(id);
    const Vec3 d = e.explicit_directions.empty() ? frame_direction(e.frame, dim)
                                                 : e.explicit_directions.front();
    out << d[0] << ' ' << d[1] << ' ' << d[2] << '\n';
  }
  out << "SCALARS level int 1\nLOOKUP_TABLE default\n";
  for (ElementId id : leaves) out << mesh.element(id).level << '\n';
  write_text(path, out.str());
}

void write_outputs(const RunResult& run, const ExperimentConfig& c, const std::string& out_dir) {
  const fs::path dir(out_dir);
  ensure_dir(dir);
  write_text(dir / "convergence.csv", convergence_csv(run.records, c.record_timing));
  write_text(dir / "run.json", run_json(run, c).dump(2) + "\n");
  if (!c.write_vtk) return;
  for (std::size_t i = 0; i < run.snapshots.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "mesh_iter%03zu.vtk", i);
    write_vtk(*run.snapshots[i].mesh, run.snapshots[i].eta, (dir / name).string());
  }
}

namespace {

bool write_adaptive(const ExperimentConfig& c, std::string* error) {
  const RunResult run = run_experiment(c);
  write_outputs(run, c, c.out_dir);
  if (!run.solver_error.empty()) {
    if (error) *error = run.solver_error;
    return false;
  }
  return true;
}

void write_table2(const ExperimentConfig& c) {
  const Table2Result t = run_table2_protocol(c);
  const fs::path dir(c.out_dir);
  write_outputs(t.standard, c, (dir / "standard").string());
  write_outputs(t.adaptive, c, (dir / "adaptive").string());
  std::ostringstream csv;
  csv << "q,dofs,standard,adaptive,reduction\n";
  for (const auto& r : t.rows)
    csv << r.q << ',' << r.dofs << ',' << fmt("%.10e", r.standard) << ','
        << fmt("%.10e", r.adaptive) << ',' << fmt("%.6f", 1.0 - r.adaptive / r.standard) << '\n';
  write_text(dir / "table2.csv", csv.str());
  write_text(dir / "convergence.csv", convergence_csv(t.adaptive.records, c.record_timing));
  json j = run_json(t.adaptive, c);
  j["standard_records"] = records_json(t.standard.records);
  write_text(dir / "run.json", j.dump(2) + "\n");
}

void write_table3(const ExperimentConfig& c) {
  const Table3Result t = run_table3_protocol(c);
  const fs::path dir(c.out_dir);
  write_outputs(t.runs, c, c.out_dir);
  std::ostringstream csv;
  csv << "q,dofs,initial";
  for (int p = 1; p <= c.passes; ++p) csv << ",pass" << p;
  csv << '\n';
  for (const auto& r : t.rows) {
    csv << r.q << ',' << r.dofs;
    for (double e : r.errors) csv << ',' << fmt("%.10e", e);
    csv << '\n';
  }
  write_text(dir / "table3.csv", csv.str());
}

bool write_calibration(const ExperimentConfig& c, std::string* error) {
  const std::vector<CalibrationRun> runs = run_calibration_protocol(c);
  const fs::path dir(c.out_dir);
  ensure_dir(dir);
  std::ostringstream csv;
  csv << "k,q,iter,n_elements,dofs,rel_l2_error,eff_total,eff_jump_u,eff_jump_gradu,eff_robin\n";
  bool ok = true;
  for (const auto& cr : runs) {
    ExperimentConfig sub = c;
    sub.k = sub.omega = cr.k;
    sub.q0 = cr.q;
    write_outputs(cr.run, sub, (dir / cr.run.label).string());
    for (const auto& r : cr.run.records)
      csv << fmt("%g", cr.k) << ',' << cr.q << ',' << r.iter << ',' << r.n_elements << ','
          << r.dofs << ',' << fmt("%.10e", r.rel_l2_error) << ',' << fmt("%.10e", r.eff_total)
          << ',' << fmt("%.10e", r.eff_jump_u) << ',' << fmt("%.10e", r.eff_jump_gradu) << ','
          << fmt("%.10e", r.eff_robin) << '\n';
    if (!cr.run.solver_error.empty() && ok) {
      ok = false;
      if (error) *error = cr.run.label + ": " + cr.run.solver_error;
    }
  }
  write_text(dir / "calibration.csv", csv.str());
  if (!runs.empty())
    write_text(dir / "convergence.csv", convergence_csv(runs.front().run.records, c.record_timing));
  return ok;
}

}  // namespace

bool run_and_write(const ExperimentConfig& c, std::string* error) {
  try {
    switch (c.protocol) {
      case Protocol::adaptive: return write_adaptive(c, error);
      case Protocol::table2: write_table2(c); return true;
      case Protocol::table3: write_table3(c); return true;
      case Protocol::calibration: return write_calibration(c, error);
    }
  } catch (const SingularSystemError& e) {
    if (error) *error = e.what();
    return false;
  }
  return true;
}

}  // namespace tdg
