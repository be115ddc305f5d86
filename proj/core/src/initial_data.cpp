#include "lagflow/initial_data.hpp"

#include <cmath>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/lexical_cast.hpp>

#include "lagflow/error.hpp"
#include "lagflow/spectral.hpp"

namespace lagflow {

namespace {

double to_number(const std::string& token, std::string_view term) {
  try {
    return boost::lexical_cast<double>(token);
  } catch (const boost::bad_lexical_cast&) {
    fail(ErrorKind::Parse, "bad number '" + token + "' in mode term '" + std::string(term) + "'");
  }
}

int to_wavenumber(const std::string& token, std::string_view term) {
  try {
    return boost::lexical_cast<int>(token);
  } catch (const boost::bad_lexical_cast&) {
    fail(ErrorKind::Parse,
         "bad wavenumber '" + token + "' in mode term '" + std::string(term) + "'");
  }
}

// Poisson-kernel series 2 sum_{k>=1} r^k cos(kx) and 2 sum_{k>=1} r^k sin(kx).
double poisson_cos(double x, double r) {
  return (1.0 - r * r) / (1.0 - 2.0 * r * std::cos(x) + r * r) - 1.0;
}
double poisson_sin(double x, double r) {
  return 2.0 * r * std::sin(x) / (1.0 - 2.0 * r * std::cos(x) + r * r);
}

constexpr double kPoissonRadius = 0.65;

template <class Fn>
ScalarField along_x(const TorusGrid& g, Fn&& fn) {
  return ScalarField::sample(g, [&](const Point& p) { return fn(p[0]); });
}

}  // namespace

std::vector<ModeTerm> parse_modes(std::string_view text) {
  std::vector<ModeTerm> terms;
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(";"));
  for (auto part : parts) {
    boost::trim(part);
    if (part.empty()) continue;
    std::vector<std::string> tok;
    boost::split(tok, part, boost::is_space(), boost::token_compress_on);
    ModeTerm m;
    m.amp = to_number(tok[0], part);
    if (tok.size() == 1) {
      terms.push_back(m);
      continue;
    }
    const std::string kind = boost::to_lower_copy(tok[1]);
    if (kind == "sin") m.kind = ModeTerm::Kind::Sin;
    else if (kind == "cos") m.kind = ModeTerm::Kind::Cos;
    else if (kind == "const") m.kind = ModeTerm::Kind::Const;
    else fail(ErrorKind::Parse, "unknown mode kind '" + tok[1] + "' (expected sin, cos or const)");
    if (tok.size() > 4) fail(ErrorKind::Parse, "too many tokens in mode term '" + part + "'");
    if (m.kind != ModeTerm::Kind::Const && tok.size() < 3)
      fail(ErrorKind::Parse, "mode term '" + part + "' needs a wavenumber");
    if (tok.size() >= 3) m.k0 = to_wavenumber(tok[2], part);
    if (tok.size() == 4) m.k1 = to_wavenumber(tok[3], part);
    terms.push_back(m);
  }
  return terms;
}

ScalarField synthesize(const TorusGrid& grid, double mean, const std::vector<ModeTerm>& terms) {
  for (const auto& m : terms)
    if (grid.dim() == 1 && m.k1 != 0)
      fail(ErrorKind::InvalidArgument, "second wavenumber given on a one-dimensional grid");
  return ScalarField::sample(grid, [&](const Point& x) {
    double v = mean;
    for (const auto& m : terms) {
      const double phase = m.k0 * x[0] + m.k1 * x[1];
      switch (m.kind) {
        case ModeTerm::Kind::Const: v += m.amp; break;
        case ModeTerm::Kind::Sin: v += m.amp * std::sin(phase); break;
        case ModeTerm::Kind::Cos: v += m.amp * std::cos(phase); break;
      }
    }
    return v;
  });
}

std::vector<std::string> preset_names() {
  return {"rest", "uniform_flow", "acoustic", "smooth", "steep", "poisson", "vortex"};
}

InitialData make_preset(std::string_view name, const TorusGrid& g) {
  InitialData data{ScalarField(g, 1.0), VectorField(g), std::string(name)};
  if (name == "rest") return data;
  if (name == "uniform_flow") {
    for (int c = 0; c < g.dim(); ++c) data.u[c] += 0.5;
    return data;
  }
  if (name == "acoustic") {
    data.rho = along_x(g, [](double x) { return 1.0 + 1e-3 * std::sin(x); });
    return data;
  }
  if (name == "smooth") {
    data.rho = along_x(g, [](double x) { return 1.0 + 0.2 * std::sin(x); });
    data.u[0] = along_x(g, [](double x) { return 0.1 * std::sin(x); });
    return data;
  }
  if (name == "steep") {
    data.rho = along_x(g, [](double x) { return 1.0 + 0.9 * std::sin(x); });
    return data;
  }
  if (name == "poisson") {
    data.rho = along_x(g, [](double x) { return 1.0 + 0.05 * poisson_cos(x, kPoissonRadius); });
    data.u[0] = along_x(g, [](double x) { return 0.05 * poisson_sin(x, kPoissonRadius); });
    return data;
  }
  if (name == "vortex") {
    if (g.dim() != 2) fail(ErrorKind::InvalidArgument, "preset 'vortex' requires d = 2");
    data.u[0] = ScalarField::sample(g, [](const Point& x) { return 0.5 * std::sin(x[0]) * std::cos(x[1]); });
    data.u[1] = ScalarField::sample(g, [](const Point& x) { return -0.5 * std::cos(x[0]) * std::sin(x[1]); });
    return data;
  }
  std::ostringstream os;
  os << "unknown initial-data preset '" << name << "'; available:";
  for (const auto& n : preset_names()) os << ' ' << n;
  fail(ErrorKind::InvalidArgument, os.str());
}

InitialData band_limited(InitialData data) {
  data.rho = dealias(data.rho);
  data.u = dealias(data.u);
  return data;
}

}  // namespace lagflow
