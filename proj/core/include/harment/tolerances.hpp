#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace harment {

/// Numerical thresholds shared by the pipeline. Defaults are the documented
/// contract; the CLI can override them by name (`--tol-override name=value`).
struct Tolerances {
  /// Reject a spec if min λ_j <= positivity * max λ_j.
  double positivity = 1e-12;
  /// Unit-circle test for spectral roots: | |z| - 1 | and λ(arg z) / max λ.
  double root = 1e-8;
  /// μ values in [1 - mu_floor, 1) are clamped to 1; lower values are errors.
  double mu_floor = 1e-9;
  /// Agreement required between the equivalent mutual-information forms.
  double identity_agreement = 1e-6;
  /// Largest tolerated imaginary residue of a circulant kernel row.
  double imaginary_residue = 1e-10;
  /// Largest site count for which dense matrices may be assembled.
  std::size_t dense_cap = 4096;

  /// Sets a tolerance by name; throws Error(InvalidArgument) for unknown names.
  void set(std::string_view name, double value);

  static std::vector<std::string> names();
};

}  // namespace harment
