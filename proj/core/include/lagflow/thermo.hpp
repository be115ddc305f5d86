#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lagflow/field.hpp"

namespace lagflow {

/// Barotropic pressure law p(rho) with p'(rho) > 0 and enthalpy h defined by
/// h'(rho) = p'(rho) / rho, normalized so that h(1) = 0.
class PressureLaw {
 public:
  struct Model {
    virtual ~Model() = default;
    virtual double p(double rho) const = 0;
    virtual double dp(double rho) const = 0;
    virtual double h(double rho) const = 0;
    virtual double dh(double rho) const = 0;
    virtual std::string describe() const = 0;
  };

  PressureLaw(std::shared_ptr<const Model> model, double rho_min);

  double p(double rho) const { return model_->p(rho); }
  double dp(double rho) const { return model_->dp(rho); }
  double h(double rho) const { return model_->h(rho); }
  double dh(double rho) const { return model_->dh(rho); }
  double sound_speed(double rho) const;
  double rho_min() const noexcept { return rho_min_; }
  std::string describe() const { return model_->describe(); }

  PressureLaw with_rho_min(double rho_min) const { return PressureLaw(model_, rho_min); }

 private:
  std::shared_ptr<const Model> model_;
  double rho_min_;
};

inline constexpr double kDefaultRhoMin = 1e-6;

/// p = kappa rho^gamma. Throws for kappa <= 0 or gamma <= 1 (gamma = 1 is
/// the isothermal law).
PressureLaw gamma_law(double kappa, double gamma, double rho_min = kDefaultRhoMin);

/// p = kappa rho, h = kappa ln rho.
PressureLaw isothermal_law(double kappa, double rho_min = kDefaultRhoMin);

/// Monotone piecewise-cubic (Fritsch-Carlson) interpolation of tabulated
/// (rho, p) pairs. Both columns must be strictly increasing and the table
/// must bracket rho = 1; evaluation outside the table throws.
PressureLaw tabulated_law(std::vector<double> rho, std::vector<double> p,
                          double rho_min = kDefaultRhoMin);

/// Throws Vacuum if any density sample is below law.rho_min() (or not finite).
void check_density(const PressureLaw& law, const ScalarField& rho);

/// H = h(rho) nodewise; throws Vacuum below rho_min.
ScalarField enthalpy_field(const PressureLaw& law, const ScalarField& rho);

}  // namespace lagflow
