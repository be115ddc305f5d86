#include "lagflow/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "lagflow/error.hpp"

namespace lagflow {

namespace pt = boost::property_tree;

namespace {

// Keys are "section.name"; names may contain dots themselves.
pt::ptree::path_type key_path(const std::string& key) {
  std::string k = key;
  k[k.find('.')] = '/';
  return pt::ptree::path_type(k, '/');
}

std::optional<std::string> lookup(const pt::ptree& tree, const std::string& key) {
  if (auto v = tree.get_optional<std::string>(key_path(key))) return *v;
  return std::nullopt;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      "grid.d", "grid.n",
      "law.name", "law.kappa", "law.gamma", "law.rho_min", "law.table",
      "initial.preset", "initial.rho.mean", "initial.rho.modes", "initial.u1.mean",
      "initial.u1.modes", "initial.u2.mean", "initial.u2.modes",
      "solver.name", "solver.T", "solver.dt",
      "picard.tol", "picard.max_iters", "picard.epsilon", "picard.damping", "picard.beta",
      "picard.p", "picard.fold_floor", "picard.blowup_threshold", "picard.resolution_threshold",
      "picard.enforce_norm_hypothesis", "picard.mode", "picard.interpolation",
      "output.dir", "output.stride",
      "frechet.u0", "frechet.w", "frechet.t", "frechet.deltas", "frechet.dt"};
  return keys;
}

std::vector<double> parse_numbers(const std::string& text, const std::string& key) {
  std::vector<double> out;
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(","));
  for (auto p : parts) {
    boost::trim(p);
    if (p.empty()) continue;
    try {
      out.push_back(boost::lexical_cast<double>(p));
    } catch (const boost::bad_lexical_cast&) {
      fail(ErrorKind::Parse, key + ": bad number '" + p + "'");
    }
  }
  return out;
}

std::vector<std::string> split_cases(const std::string& text) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of("|"));
  std::vector<std::string> out;
  for (auto p : parts) {
    boost::trim(p);
    if (!p.empty()) out.push_back(p);
  }
  return out;
}

template <class T>
void read(const pt::ptree& tree, const std::string& key, T& target) {
  const auto v = lookup(tree, key);
  if (!v) return;
  std::string s = boost::trim_copy(*v);
  try {
    target = boost::lexical_cast<T>(s);
  } catch (const boost::bad_lexical_cast&) {
    fail(ErrorKind::Parse, key + ": cannot parse '" + s + "'");
  }
}

void read_optional(const pt::ptree& tree, const std::string& key, std::optional<double>& target) {
  if (!lookup(tree, key)) return;
  double v = 0.0;
  read(tree, key, v);
  target = v;
}

std::optional<FieldSpec> read_field(const pt::ptree& tree, const std::string& prefix) {
  const auto mean = lookup(tree, prefix + ".mean");
  const auto modes = lookup(tree, prefix + ".modes");
  if (!mean && !modes) return std::nullopt;
  FieldSpec spec;
  read(tree, prefix + ".mean", spec.mean);
  if (modes) spec.terms = parse_modes(*modes);
  return spec;
}

}  // namespace

SolverChoice parse_solver(std::string_view name) {
  if (name == "lagrangian") return SolverChoice::Lagrangian;
  if (name == "reference") return SolverChoice::Reference;
  if (name == "both") return SolverChoice::Both;
  fail(ErrorKind::InvalidArgument,
       "unknown solver '" + std::string(name) + "'; available: lagrangian reference both");
}

std::string_view to_string(SolverChoice s) {
  switch (s) {
    case SolverChoice::Lagrangian: return "lagrangian";
    case SolverChoice::Reference: return "reference";
    case SolverChoice::Both: return "both";
  }
  return "?";
}

std::vector<std::string> law_names() { return {"gamma", "isothermal", "tabulated"}; }

PressureLaw make_law(const LawConfig& law) {
  if (law.name == "gamma") return gamma_law(law.kappa, law.gamma, law.rho_min);
  if (law.name == "isothermal") return isothermal_law(law.kappa, law.rho_min);
  if (law.name == "tabulated") return tabulated_law(law.table_rho, law.table_p, law.rho_min);
  std::string msg = "unknown law '" + law.name + "'; available:";
  for (const auto& n : law_names()) msg += " " + n;
  fail(ErrorKind::Validation, msg);
}

InitialData make_initial(const RunConfig& cfg) {
  const TorusGrid g = cfg.grid();
  InitialData data = make_preset(cfg.initial.preset, g);
  if (cfg.initial.rho) data.rho = synthesize(g, cfg.initial.rho->mean, cfg.initial.rho->terms);
  if (cfg.initial.u1) data.u[0] = synthesize(g, cfg.initial.u1->mean, cfg.initial.u1->terms);
  if (cfg.initial.u2) {
    if (g.dim() < 2) fail(ErrorKind::Validation, "initial.u2 given on a one-dimensional grid");
    data.u[1] = synthesize(g, cfg.initial.u2->mean, cfg.initial.u2->terms);
  }
  return band_limited(std::move(data));
}

std::vector<std::string> validation_errors(const RunConfig& cfg) {
  std::vector<std::string> errs;
  auto add = [&](const std::string& s) { errs.push_back(s); };
  bool grid_ok = true;
  if (cfg.dim != 1 && cfg.dim != 2) add("grid.d must be 1 or 2"), grid_ok = false;
  if (cfg.n < 8 || cfg.n % 2 != 0) add("grid.n must be even and at least 8"), grid_ok = false;
  if (!(cfg.T >= 0.0)) add("solver.T must be non-negative");
  if (!(cfg.dt > 0.0)) add("solver.dt must be positive");
  if (cfg.stride < 1) add("output.stride must be at least 1");
  if (cfg.out_dir.empty()) add("output.dir must not be empty");

  std::optional<PressureLaw> law;
  try {
    law = make_law(cfg.law);
  } catch (const Error& e) {
    add(std::string("law: ") + e.what());
  }

  if (grid_ok) {
    const TorusGrid g = cfg.grid();
    PicardConfig picard = cfg.picard;
    picard.dt = cfg.dt > 0.0 ? cfg.dt : 1.0;
    try {
      picard.validate(g);
    } catch (const Error& e) {
      add(e.what());
    }
    try {
      const InitialData data = make_initial(cfg);
      const double rho_min = cfg.law.rho_min;
      if (!data.rho.all_finite() || !(data.rho.min() > rho_min)) {
        std::ostringstream os;
        os << "initial.rho: min rho0 = " << data.rho.min() << " must exceed rho_min = " << rho_min;
        add(os.str());
      } else if (law) {
        for (double r : data.rho.values()) {
          try {
            law->h(r);
          } catch (const Error& e) {
            add(std::string("initial.rho: ") + e.what());
            break;
          }
        }
      }
      if (!data.u.all_finite()) add("initial.u: non-finite values");
    } catch (const Error& e) {
      add(std::string("initial: ") + e.what());
    }
  }
  for (double t : cfg.frechet.t)
    if (!(t >= 0.0)) add("frechet.t entries must be non-negative");
  for (double d : cfg.frechet.deltas)
    if (!(d > 0.0)) add("frechet.deltas entries must be positive");
  if (!(cfg.frechet.dt > 0.0)) add("frechet.dt must be positive");
  return errs;
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    std::ostringstream os;
    os << "line " << e.line() << ": " << e.message();
    fail(ErrorKind::Parse, os.str());
  }

  std::vector<std::string> unknown;
  for (const auto& [section, entries] : tree) {
    if (entries.empty() && !entries.data().empty())
      unknown.push_back(section + " (key outside any section)");
    for (const auto& [name, value] : entries) {
      const std::string key = section + "." + name;
      if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end())
        unknown.push_back(key);
    }
  }
  if (!unknown.empty()) {
    std::string msg = "unknown configuration keys:";
    for (const auto& k : unknown) msg += " " + k;
    fail(ErrorKind::Validation, msg);
  }

  RunConfig cfg;
  read(tree, "grid.d", cfg.dim);
  read(tree, "grid.n", cfg.n);

  read(tree, "law.name", cfg.law.name);
  read(tree, "law.kappa", cfg.law.kappa);
  read(tree, "law.gamma", cfg.law.gamma);
  read(tree, "law.rho_min", cfg.law.rho_min);
  if (auto table = lookup(tree, "law.table")) {
    std::vector<std::string> pairs;
    boost::split(pairs, *table, boost::is_any_of(","));
    for (auto pr : pairs) {
      boost::trim(pr);
      if (pr.empty()) continue;
      std::vector<std::string> rp;
      boost::split(rp, pr, boost::is_any_of(":"));
      if (rp.size() != 2) fail(ErrorKind::Parse, "law.table: expected rho:p, got '" + pr + "'");
      cfg.law.table_rho.push_back(parse_numbers(rp[0], "law.table").at(0));
      cfg.law.table_p.push_back(parse_numbers(rp[1], "law.table").at(0));
    }
  }

  read(tree, "initial.preset", cfg.initial.preset);
  cfg.initial.rho = read_field(tree, "initial.rho");
  cfg.initial.u1 = read_field(tree, "initial.u1");
  cfg.initial.u2 = read_field(tree, "initial.u2");

  if (auto s = lookup(tree, "solver.name"))
    cfg.solver = parse_solver(boost::trim_copy(*s));
  read(tree, "solver.T", cfg.T);
  read(tree, "solver.dt", cfg.dt);

  read(tree, "picard.tol", cfg.picard.picard_tol);
  read(tree, "picard.max_iters", cfg.picard.max_iters);
  read_optional(tree, "picard.epsilon", cfg.picard.epsilon);
  read(tree, "picard.damping", cfg.picard.damping);
  read_optional(tree, "picard.beta", cfg.picard.beta);
  read(tree, "picard.p", cfg.picard.p);
  read(tree, "picard.fold_floor", cfg.picard.fold_floor);
  read(tree, "picard.blowup_threshold", cfg.picard.blowup_threshold);
  read(tree, "picard.resolution_threshold", cfg.picard.resolution_threshold);
  read(tree, "picard.enforce_norm_hypothesis", cfg.picard.enforce_norm_hypothesis);
  if (auto m = lookup(tree, "picard.mode")) {
    const std::string mode = boost::trim_copy(*m);
    if (mode == "stepwise") cfg.picard.mode = PicardMode::Stepwise;
    else if (mode == "global") cfg.picard.mode = PicardMode::Global;
    else fail(ErrorKind::Validation, "picard.mode must be stepwise or global, got '" + mode + "'");
  }
  if (auto m = lookup(tree, "picard.interpolation"))
    cfg.picard.interpolation = parse_interpolation(boost::trim_copy(*m));
  cfg.picard.dt = cfg.dt;

  read(tree, "output.dir", cfg.out_dir);
  read(tree, "output.stride", cfg.stride);

  if (auto s = lookup(tree, "frechet.u0")) cfg.frechet.u0 = split_cases(*s);
  if (auto s = lookup(tree, "frechet.w")) cfg.frechet.w = split_cases(*s);
  if (auto s = lookup(tree, "frechet.t"))
    cfg.frechet.t = parse_numbers(*s, "frechet.t");
  if (auto s = lookup(tree, "frechet.deltas"))
    cfg.frechet.deltas = parse_numbers(*s, "frechet.deltas");
  read(tree, "frechet.dt", cfg.frechet.dt);
  for (const auto& c : cfg.frechet.u0) parse_modes(c);
  for (const auto& c : cfg.frechet.w) parse_modes(c);

  const auto errs = validation_errors(cfg);
  if (!errs.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errs) msg += "\n  - " + e;
    fail(ErrorKind::Validation, msg);
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace lagflow
