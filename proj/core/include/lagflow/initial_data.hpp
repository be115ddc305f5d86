#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lagflow/field.hpp"

namespace lagflow {

/// amp * trig(k . x), or a constant when kind is Const.
struct ModeTerm {
  enum class Kind { Const, Sin, Cos };
  double amp = 0.0;
  Kind kind = Kind::Const;
  int k0 = 0;
  int k1 = 0;
};

/// Parses "amp [sin|cos|const k0 [k1]]; ..." (a bare number is a constant).
/// Throws Parse with the offending term.
std::vector<ModeTerm> parse_modes(std::string_view text);

/// mean + sum of terms at every node.
ScalarField synthesize(const TorusGrid& grid, double mean, const std::vector<ModeTerm>& terms);

struct InitialData {
  ScalarField rho;
  VectorField u;
  std::string name;
};

std::vector<std::string> preset_names();

/// Named initial data. Presets depending on one coordinate vary along axis 0
/// and set only the first velocity component. Throws InvalidArgument listing
/// the available names.
InitialData make_preset(std::string_view name, const TorusGrid& grid);

/// Projects both fields onto the dealiased band.
InitialData band_limited(InitialData data);

}  // namespace lagflow
