#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <json.hpp>

#include "tdg/driver.hpp"

#ifndef TDG_DEFAULT_PRESET_DIR
#define TDG_DEFAULT_PRESET_DIR "presets"
#endif

namespace tdg {

namespace {

namespace pt = boost::property_tree;
using nlohmann::json;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"domain", {"kind", "n", "boundary"}},
      {"problem", {"kind", "k", "omega", "n1", "n2", "theta_deg", "direction", "vartheta"}},
      {"discretization", {"q0", "alpha", "beta", "delta", "sphere_points"}},
      {"adaptivity",
       {"protocol", "mode", "policy", "fraction", "gamma_h", "gamma_p", "gamma_n", "max_iters",
        "lambda", "delta_ball", "cond_limit", "estimate_form", "q_start", "q_end", "passes",
        "calibration_k", "calibration_q"}},
      {"output", {"dir", "vtk", "record_timing"}},
  };
  return keys;
}

[[noreturn]] void bad(const std::string& sec, const std::string& key, const std::string& msg) {
  throw ConfigError("[" + sec + "] " + key + ": " + msg);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& sec, const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') bad(sec, key, "expected a number, got '" + raw + "'");
  return v;
}

int to_int(const std::string& sec, const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0') bad(sec, key, "expected an integer, got '" + raw + "'");
  return static_cast<int>(v);
}

bool to_bool(const std::string& sec, const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  bad(sec, key, "expected true or false, got '" + raw + "'");
}

std::vector<std::string> split_list(const std::string& raw) {
  std::string s = raw;
  for (char& c : s)
    if (c == ',' || c == ';') c = ' ';
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

template <class E>
E to_enum(const std::string& sec, const std::string& key, const std::string& raw,
          const std::vector<std::pair<std::string, E>>& table) {
  std::string s = trim(raw);
  for (char& c : s)
    if (c == '-') c = '_';
  for (const auto& [name, value] : table)
    if (name == s) return value;
  std::string opts;
  for (const auto& [name, value] : table) opts += (opts.empty() ? "" : "|") + name;
  bad(sec, key, "expected one of " + opts + ", got '" + raw + "'");
}

template <class E>
std::string enum_name(E v, const std::vector<std::pair<std::string, E>>& table) {
  for (const auto& [name, value] : table)
    if (value == v) return name;
  return "?";
}

const std::vector<std::pair<std::string, DomainKind>> kDomains{
    {"unit_square", DomainKind::unit_square},
    {"square2", DomainKind::square2},
    {"l_shape", DomainKind::l_shape},
    {"unit_cube", DomainKind::unit_cube}};
const std::vector<std::pair<std::string, BoundaryCondition>> kBoundaries{
    {"robin", BoundaryCondition::robin}, {"dirichlet", BoundaryCondition::dirichlet}};
const std::vector<std::pair<std::string, ProblemKind>> kProblems{
    {"hankel", ProblemKind::hankel},
    {"lshape_singular", ProblemKind::lshape_singular},
    {"transmission", ProblemKind::transmission},
    {"plane_wave", ProblemKind::plane_wave}};
const std::vector<std::pair<std::string, SpherePointSource>> kSphere{
    {"extremal", SpherePointSource::extremal}, {"fibonacci", SpherePointSource::fibonacci}};
const std::vector<std::pair<std::string, Protocol>> kProtocols{
    {"adaptive", Protocol::adaptive},
    {"table2", Protocol::table2},
    {"table3", Protocol::table3},
    {"calibration", Protocol::calibration}};
const std::vector<std::pair<std::string, AdaptMode>> kModes{{"hp", AdaptMode::hp},
                                                             {"h_only", AdaptMode::h_only},
                                                             {"h", AdaptMode::h_only}};
const std::vector<std::pair<std::string, DirectionPolicy>> kPolicies{
    {"none", DirectionPolicy::none},
    {"marked_p", DirectionPolicy::marked_p},
    {"marked_all", DirectionPolicy::marked_all},
    {"all", DirectionPolicy::all}};
const std::vector<std::pair<std::string, EstimateForm>> kForms{{"root", EstimateForm::root},
                                                                {"square", EstimateForm::square}};

void apply_key(ExperimentConfig& c, const std::string& sec, const std::string& key,
               const std::string& v) {
  if (sec == "domain") {
    if (key == "kind") c.domain = to_enum(sec, key, v, kDomains);
    else if (key == "n") c.n = to_int(sec, key, v);
    else if (key == "boundary") c.boundary = to_enum(sec, key, v, kBoundaries);
  } else if (sec == "problem") {
    if (key == "kind") c.problem = to_enum(sec, key, v, kProblems);
    else if (key == "k") c.k = to_double(sec, key, v);
    else if (key == "omega") c.omega = to_double(sec, key, v);
    else if (key == "n1") c.n1 = to_double(sec, key, v);
    else if (key == "n2") c.n2 = to_double(sec, key, v);
    else if (key == "theta_deg") c.theta_deg = to_double(sec, key, v);
    else if (key == "vartheta") c.vartheta = to_double(sec, key, v);
    else if (key == "direction") {
      const auto parts = split_list(v);
      if (parts.size() != 2 && parts.size() != 3)
        bad(sec, key, "expected 2 or 3 components, got '" + v + "'");
      Vec3 d = Vec3::Zero();
      for (std::size_t i = 0; i < parts.size(); ++i) d[static_cast<int>(i)] = to_double(sec, key, parts[i]);
      if (d.norm() == 0.0) bad(sec, key, "direction must be nonzero");
      c.direction = d.normalized();
    }
  } else if (sec == "discretization") {
    if (key == "q0") c.q0 = to_int(sec, key, v);
    else if (key == "alpha") c.penalty.alpha = to_double(sec, key, v);
    else if (key == "beta") c.penalty.beta = to_double(sec, key, v);
    else if (key == "delta") c.penalty.delta = to_double(sec, key, v);
    else if (key == "sphere_points") c.sphere_points = to_enum(sec, key, v, kSphere);
  } else if (sec == "adaptivity") {
    if (key == "protocol") c.protocol = to_enum(sec, key, v, kProtocols);
    else if (key == "mode") c.adapt.mode = to_enum(sec, key, v, kModes);
    else if (key == "policy") c.adapt.policy = to_enum(sec, key, v, kPolicies);
    else if (key == "fraction") c.adapt.fraction = to_double(sec, key, v);
    else if (key == "gamma_h") c.adapt.gamma_h = to_double(sec, key, v);
    else if (key == "gamma_p") c.adapt.gamma_p = to_double(sec, key, v);
    else if (key == "gamma_n") c.adapt.gamma_n = to_double(sec, key, v);
    else if (key == "max_iters") c.adapt.max_iters = to_int(sec, key, v);
    else if (key == "lambda") c.directional.lambda = to_double(sec, key, v);
    else if (key == "delta_ball") c.directional.delta_ball = to_double(sec, key, v);
    else if (key == "cond_limit") c.cond_limit = to_double(sec, key, v);
    else if (key == "estimate_form") c.estimate_form = to_enum(sec, key, v, kForms);
    else if (key == "q_start") c.q_start = to_int(sec, key, v);
    else if (key == "q_end") c.q_end = to_int(sec, key, v);
    else if (key == "passes") c.passes = to_int(sec, key, v);
    else if (key == "calibration_k") {
      c.calibration_k.clear();
      for (const auto& s : split_list(v)) c.calibration_k.push_back(to_double(sec, key, s));
    } else if (key == "calibration_q") {
      c.calibration_q.clear();
      for (const auto& s : split_list(v)) c.calibration_q.push_back(to_int(sec, key, s));
    }
  } else if (sec == "output") {
    if (key == "dir") c.out_dir = trim(v);
    else if (key == "vtk") c.write_vtk = to_bool(sec, key, v);
    else if (key == "record_timing") c.record_timing = to_bool(sec, key, v);
  }
}

std::string fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n < 1) bad("domain", "n", "must be >= 1");
  if (q0 < 1) bad("discretization", "q0", "must be >= 1");
  if (!(k > 0.0)) bad("problem", "k", "must be positive");
  if (!(omega > 0.0 && n1 > 0.0 && n2 > 0.0)) bad("problem", "omega", "omega, n1 and n2 must be positive");
  if (!(theta_deg >= 0.0 && theta_deg <= 90.0)) bad("problem", "theta_deg", "must lie in [0, 90]");
  if (vartheta != 1.0 && vartheta != -1.0) bad("problem", "vartheta", "must be +1 or -1");
  try {
    penalty.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("[discretization] ") + e.what());
  }
  try {
    adapt.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("[adaptivity] ") + e.what());
  }
  if (!(directional.lambda > 1.0)) bad("adaptivity", "lambda", "must be > 1");
  if (!(directional.delta_ball >= 0.0)) bad("adaptivity", "delta_ball", "must be >= 0");
  if (!(cond_limit > 0.0)) bad("adaptivity", "cond_limit", "must be positive");
  if (q_start < 1) bad("adaptivity", "q_start", "must be >= 1");
  if (q_end <= q_start) bad("adaptivity", "q_end", "must exceed q_start");
  if (passes < 1) bad("adaptivity", "passes", "must be >= 1");
  if (calibration_k.empty()) bad("adaptivity", "calibration_k", "must not be empty");
  for (double v : calibration_k)
    if (!(v > 0.0)) bad("adaptivity", "calibration_k", "wavenumbers must be positive");
  if (calibration_q.empty()) bad("adaptivity", "calibration_q", "must not be empty");
  for (int v : calibration_q)
    if (v < 1) bad("adaptivity", "calibration_q", "degrees must be >= 1");
  if (out_dir.empty()) bad("output", "dir", "must not be empty");
}

ExperimentConfig parse_config_string(const std::string& text, const ExperimentConfig& base) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config syntax error at line " + std::to_string(e.line()) + ": " + e.message());
  }
  ExperimentConfig c = base;
  const auto& keys = known_keys();
  for (const auto& [sec, node] : tree) {
    if (node.empty()) {
      // top-level key
      if (sec == "name") {
        c.name = trim(node.data());
        continue;
      }
      throw ConfigError("unknown top-level key '" + sec + "'");
    }
    const auto it = keys.find(sec);
    if (it == keys.end()) throw ConfigError("unknown section [" + sec + "]");
    for (const auto& [key, leaf] : node) {
      if (!it->second.count(key)) bad(sec, key, "unknown key");
      apply_key(c, sec, key, leaf.data());
    }
  }
  c.validate();
  return c;
}

ExperimentConfig parse_config_file(const std::string& path, const ExperimentConfig& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config_string(ss.str(), base);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["domain"] = {{"kind", c.domain ? enum_name(*c.domain, kDomains) : std::string("default")},
                 {"n", c.n},
                 {"boundary", c.boundary ? enum_name(*c.boundary, kBoundaries) : std::string("default")}};
  j["problem"] = {{"kind", enum_name(c.problem, kProblems)},
                  {"k", c.k},
                  {"omega", c.omega},
                  {"n1", c.n1},
                  {"n2", c.n2},
                  {"theta_deg", c.theta_deg},
                  {"direction", {c.direction[0], c.direction[1], c.direction[2]}},
                  {"vartheta", c.vartheta}};
  j["discretization"] = {{"q0", c.q0},
                         {"alpha", c.penalty.alpha},
                         {"beta", c.penalty.beta},
                         {"delta", c.penalty.delta},
                         {"sphere_points", enum_name(c.sphere_points, kSphere)}};
  j["adaptivity"] = {{"protocol", enum_name(c.protocol, kProtocols)},
                     {"mode", enum_name(c.adapt.mode, kModes)},
                     {"policy", enum_name(c.adapt.policy, kPolicies)},
                     {"fraction", c.adapt.fraction},
                     {"gamma_h", c.adapt.gamma_h},
                     {"gamma_p", c.adapt.gamma_p},
                     {"gamma_n", c.adapt.gamma_n},
                     {"max_iters", c.adapt.max_iters},
                     {"lambda", c.directional.lambda},
                     {"delta_ball", c.directional.delta_ball},
                     {"cond_limit", c.cond_limit},
                     {"estimate_form", enum_name(c.estimate_form, kForms)},
                     {"q_start", c.q_start},
                     {"q_end", c.q_end},
                     {"passes", c.passes},
                     {"calibration_k", c.calibration_k},
                     {"calibration_q", c.calibration_q}};
  j["output"] = {{"dir", c.out_dir}, {"vtk", c.write_vtk}, {"record_timing", c.record_timing}};
  return j.dump();
}

ExperimentConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON config: ") + e.what());
  }
  if (j.contains("config")) j = j["config"];
  ExperimentConfig c;
  try {
    c.name = j.at("name").get<std::string>();
    const auto& d = j.at("domain");
    const auto dk = d.at("kind").get<std::string>();
    if (dk != "default") c.domain = to_enum("domain", "kind", dk, kDomains);
    c.n = d.at("n").get<int>();
    const auto bc = d.at("boundary").get<std::string>();
    if (bc != "default") c.boundary = to_enum("domain", "boundary", bc, kBoundaries);
    const auto& p = j.at("problem");
    c.problem = to_enum("problem", "kind", p.at("kind").get<std::string>(), kProblems);
    c.k = p.at("k").get<double>();
    c.omega = p.at("omega").get<double>();
    c.n1 = p.at("n1").get<double>();
    c.n2 = p.at("n2").get<double>();
    c.theta_deg = p.at("theta_deg").get<double>();
    const auto dir = p.at("direction").get<std::vector<double>>();
    c.direction = Vec3(dir.at(0), dir.at(1), dir.at(2));
    c.vartheta = p.at("vartheta").get<double>();
    const auto& s = j.at("discretization");
    c.q0 = s.at("q0").get<int>();
    c.penalty.alpha = s.at("alpha").get<double>();
    c.penalty.beta = s.at("beta").get<double>();
    c.penalty.delta = s.at("delta").get<double>();
    c.sphere_points = to_enum("discretization", "sphere_points",
                              s.at("sphere_points").get<std::string>(), kSphere);
    const auto& a = j.at("adaptivity");
    c.protocol = to_enum("adaptivity", "protocol", a.at("protocol").get<std::string>(), kProtocols);
    c.adapt.mode = to_enum("adaptivity", "mode", a.at("mode").get<std::string>(), kModes);
    c.adapt.policy = to_enum("adaptivity", "policy", a.at("policy").get<std::string>(), kPolicies);
    c.adapt.fraction = a.at("fraction").get<double>();
    c.adapt.gamma_h = a.at("gamma_h").get<double>();
    c.adapt.gamma_p = a.at("gamma_p").get<double>();
    c.adapt.gamma_n = a.at("gamma_n").get<double>();
    c.adapt.max_iters = a.at("max_iters").get<int>();
    c.directional.lambda = a.at("lambda").get<double>();
    c.directional.delta_ball = a.at("delta_ball").get<double>();
    c.cond_limit = a.at("cond_limit").get<double>();
    c.estimate_form = to_enum("adaptivity", "estimate_form", a.at("estimate_form").get<std::string>(), kForms);
    c.q_start = a.at("q_start").get<int>();
    c.q_end = a.at("q_end").get<int>();
    c.passes = a.at("passes").get<int>();
    c.calibration_k = a.at("calibration_k").get<std::vector<double>>();
    c.calibration_q = a.at("calibration_q").get<std::vector<int>>();
    const auto& o = j.at("output");
    c.out_dir = o.at("dir").get<std::string>();
    c.write_vtk = o.at("vtk").get<bool>();
    c.record_timing = o.at("record_timing").get<bool>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("JSON config is missing or mistypes a field: ") + e.what());
  }
  c.validate();
  return c;
}

std::string config_hash(const ExperimentConfig& config) { return fnv1a(config_to_json(config)); }

std::string preset_directory() {
  if (const char* env = std::getenv("TDG_PRESET_DIR"); env && *env) return env;
  return TDG_DEFAULT_PRESET_DIR;
}

std::string preset_path(const std::string& name) {
  std::string file = name;
  if (file.size() < 4 || file.substr(file.size() - 4) != ".ini") file += ".ini";
  const std::string path = preset_directory() + "/" + file;
  if (!std::ifstream(path)) throw ConfigError("unknown preset '" + name + "' (no " + path + ")");
  return path;
}

}  // namespace tdg
