#include "lagflow/thermo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "lagflow/error.hpp"

namespace lagflow {

namespace {

class GammaModel final : public PressureLaw::Model {
 public:
  GammaModel(double kappa, double gamma) : kappa_(kappa), gamma_(gamma) {}
  double p(double rho) const override { return kappa_ * std::pow(rho, gamma_); }
  double dp(double rho) const override { return kappa_ * gamma_ * std::pow(rho, gamma_ - 1.0); }
  double h(double rho) const override {
    // expm1 keeps h accurate near rho = 1.
    return kappa_ * gamma_ / (gamma_ - 1.0) * std::expm1((gamma_ - 1.0) * std::log(rho));
  }
  double dh(double rho) const override { return kappa_ * gamma_ * std::pow(rho, gamma_ - 2.0); }
  std::string describe() const override {
    std::ostringstream os;
    os << "gamma(kappa=" << kappa_ << ", gamma=" << gamma_ << ")";
    return os.str();
  }

 private:
  double kappa_, gamma_;
};

class IsothermalModel final : public PressureLaw::Model {
 public:
  explicit IsothermalModel(double kappa) : kappa_(kappa) {}
  double p(double rho) const override { return kappa_ * rho; }
  double dp(double) const override { return kappa_; }
  double h(double rho) const override { return kappa_ * std::log(rho); }
  double dh(double rho) const override { return kappa_ / rho; }
  std::string describe() const override {
    std::ostringstream os;
    os << "isothermal(kappa=" << kappa_ << ")";
    return os.str();
  }

 private:
  double kappa_;
};

// 8-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 8> kGlNodes{-0.9602898564975363, -0.7966664774136267,
                                         -0.5255324099163290, -0.1834346424956498,
                                         0.1834346424956498,  0.5255324099163290,
                                         0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGlWeights{0.1012285362903763, 0.2223810344533745,
                                           0.3137066458778873, 0.3626837833783620,
                                           0.3626837833783620, 0.3137066458778873,
                                           0.2223810344533745, 0.1012285362903763};

class TabulatedModel final : public PressureLaw::Model {
 public:
  TabulatedModel(std::vector<double> rho, std::vector<double> p)
      : rho_(std::move(rho)), p_(std::move(p)), slope_(rho_.size()) {
    const std::size_t n = rho_.size();
    std::vector<double> secant(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i)
      secant[i] = (p_[i + 1] - p_[i]) / (rho_[i + 1] - rho_[i]);
    slope_[0] = secant[0];
    slope_[n - 1] = secant[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      // Fritsch-Carlson weighted harmonic mean keeps the cubic monotone.
      const double h0 = rho_[i] - rho_[i - 1], h1 = rho_[i + 1] - rho_[i];
      const double w0 = 2.0 * h1 + h0, w1 = h1 + 2.0 * h0;
      slope_[i] = (w0 + w1) / (w0 / secant[i - 1] + w1 / secant[i]);
    }
    // Cumulative enthalpy at the knots, anchored at rho = 1.
    knot_h_.assign(n, 0.0);
    for (std::size_t i = 1; i < n; ++i)
      knot_h_[i] = knot_h_[i - 1] + integrate_dh(i - 1, rho_[i - 1], rho_[i]);
    const double offset = h_from_knots(1.0);
    for (auto& v : knot_h_) v -= offset;
  }

  double p(double rho) const override {
    const std::size_t i = segment(rho);
    const double h = rho_[i + 1] - rho_[i], t = (rho - rho_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * p_[i] + (t3 - 2 * t2 + t) * h * slope_[i] +
           (-2 * t3 + 3 * t2) * p_[i + 1] + (t3 - t2) * h * slope_[i + 1];
  }
  double dp(double rho) const override { return dp_in(segment(rho), rho); }
  double h(double rho) const override { return h_from_knots(rho); }
  double dh(double rho) const override { return dp(rho) / rho; }
  std::string describe() const override {
    std::ostringstream os;
    os << "tabulated(" << rho_.size() << " points on [" << rho_.front() << ", " << rho_.back()
       << "])";
    return os.str();
  }

 private:
  std::size_t segment(double rho) const {
    if (!(rho >= rho_.front() && rho <= rho_.back())) {
      std::ostringstream os;
      os << "density " << rho << " outside tabulated range [" << rho_.front() << ", "
         << rho_.back() << "]";
      fail(ErrorKind::InvalidArgument, os.str());
    }
    auto it = std::upper_bound(rho_.begin(), rho_.end(), rho);
    const auto i = static_cast<std::size_t>(it - rho_.begin());
    return std::clamp<std::size_t>(i, 1, rho_.size() - 1) - 1;
  }

  double dp_in(std::size_t i, double rho) const {
    const double h = rho_[i + 1] - rho_[i], t = (rho - rho_[i]) / h;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * p_[i] + (-6 * t2 + 6 * t) * p_[i + 1]) / h +
           (3 * t2 - 4 * t + 1) * slope_[i] + (3 * t2 - 2 * t) * slope_[i + 1];
  }

  double integrate_dh(std::size_t i, double a, double b) const {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t q = 0; q < kGlNodes.size(); ++q) {
      const double r = mid + half * kGlNodes[q];
      s += kGlWeights[q] * dp_in(i, r) / r;
    }
    return s * half;
  }

  double h_from_knots(double rho) const {
    const std::size_t i = segment(rho);
    return knot_h_[i] + integrate_dh(i, rho_[i], rho);
  }

  std::vector<double> rho_, p_, slope_, knot_h_;
};

}  // namespace

PressureLaw::PressureLaw(std::shared_ptr<const Model> model, double rho_min)
    : model_(std::move(model)), rho_min_(rho_min) {
  require(model_ != nullptr, "PressureLaw: missing model");
  require(rho_min_ > 0.0, "PressureLaw: rho_min must be positive");
}

double PressureLaw::sound_speed(double rho) const { return std::sqrt(dp(rho)); }

PressureLaw gamma_law(double kappa, double gamma, double rho_min) {
  require(kappa > 0.0, "gamma_law: kappa must be positive");
  if (gamma == 1.0)
    fail(ErrorKind::InvalidArgument, "gamma_law: gamma = 1 is the isothermal law; use isothermal_law");
  require(gamma > 1.0, "gamma_law: gamma must exceed 1");
  return PressureLaw(std::make_shared<GammaModel>(kappa, gamma), rho_min);
}

PressureLaw isothermal_law(double kappa, double rho_min) {
  require(kappa > 0.0, "isothermal_law: kappa must be positive");
  return PressureLaw(std::make_shared<IsothermalModel>(kappa), rho_min);
}

PressureLaw tabulated_law(std::vector<double> rho, std::vector<double> p, double rho_min) {
  require(rho.size() == p.size(), "tabulated_law: rho and p columns differ in length");
  require(rho.size() >= 3, "tabulated_law: need at least 3 points");
  for (std::size_t i = 1; i < rho.size(); ++i) {
    require(rho[i] > rho[i - 1], "tabulated_law: rho must be strictly increasing");
    require(p[i] > p[i - 1], "tabulated_law: p must be strictly increasing (p' > 0)");
  }
  require(rho.front() > 0.0, "tabulated_law: densities must be positive");
  require(rho.front() <= 1.0 && rho.back() >= 1.0, "tabulated_law: table must bracket rho = 1");
  return PressureLaw(std::make_shared<TabulatedModel>(std::move(rho), std::move(p)), rho_min);
}

void check_density(const PressureLaw& law, const ScalarField& rho) {
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(rho[i] >= law.rho_min())) {
      std::ostringstream os;
      os << "density " << rho[i] << " below rho_min=" << law.rho_min() << " at node " << i;
      fail(ErrorKind::Vacuum, os.str());
    }
  }
}

ScalarField enthalpy_field(const PressureLaw& law, const ScalarField& rho) {
  check_density(law, rho);
  ScalarField h(rho.grid());
  for (std::size_t i = 0; i < rho.size(); ++i) h[i] = law.h(rho[i]);
  return h;
}

}  // namespace lagflow
