#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "harment/lattice.hpp"
#include "harment/tolerances.hpp"

namespace harment {

enum class SpectralKind { Regular, Singular };

/// A zero of the spectral function on the unit circle. `multiplicity` is the
/// exponent m_r of the factor (2 - 2cos(θ - α_r)), i.e. half the order of
/// vanishing of λ at α_r.
struct SpectralRoot {
  double angle = 0.0;  // in [0, 2π)
  int multiplicity = 0;
};

struct SpectralClassification {
  SpectralKind kind = SpectralKind::Regular;
  std::vector<SpectralRoot> roots;  // sorted by angle
  /// Σ_r m_r² / 4; zero for regular symbols.
  double widom_coefficient = 0.0;

  bool singular() const noexcept { return kind == SpectralKind::Singular; }
};

/// λ(θ) = Σ_k V_k cos(k·θ); `theta` has one entry per lattice axis.
double spectral_eval(const CouplingSpec& spec, std::span<const double> theta);
double spectral_eval(const CouplingSpec& spec, double theta);

/// n-th derivative of the 1D spectral function, differentiated term by term.
double spectral_derivative(const CouplingSpec& spec, double theta, int order);

/// Regular/singular verdict for a 1D spec from the companion-matrix roots of
/// z^{R-1} λ(z). Throws IllConditionedRoots when a near-circle root cluster
/// cannot be resolved.
SpectralClassification classify(const CouplingSpec& spec, const Tolerances& tolerances = {});

/// λ₀(θ) = λ(θ) / Π_r (2 - 2cos(θ - α_r))^{m_r}, evaluated from the Laurent
/// polynomial with the unit-circle roots divided out (finite at θ = α_r).
class RegularPart {
 public:
  RegularPart(const CouplingSpec& spec, const SpectralClassification& classification);
  double operator()(double theta) const;

 private:
  std::vector<std::complex<double>> deflated_;  // ascending powers of z
  int shift_ = 0;                               // power of z multiplying the deflated part
  std::complex<double> scale_ = 1.0;
};

double regular_part_eval(const CouplingSpec& spec, const SpectralClassification& classification,
                         double theta);

/// Fourier coefficients c_k of ln λ^{1/2}(θ), k = 0..order.
struct SzegoCoefficients {
  std::vector<double> c;
  std::size_t order = 0;
  /// Estimated Σ_{k>order} k c_k²; +inf for singular symbols.
  double tail_estimate = 0.0;
  /// Set when the symbol has unit-circle zeros (coefficients decay like 1/k).
  bool singular = false;
};

SzegoCoefficients szego_coefficients(const CouplingSpec& spec, std::size_t order,
                                     const Tolerances& tolerances = {});

/// Σ_{k=1..K} k c_k² plus the tail estimate.
double szego_lower_bound(const SzegoCoefficients& coefficients);

/// Fit |c_k| ≈ amplitude * rho^k over k in [from, to].
struct GeometricDecay {
  double rho = 0.0;
  double amplitude = 0.0;
  double r_squared = 0.0;
};
GeometricDecay coefficient_decay(const SzegoCoefficients& coefficients, std::size_t from,
                                 std::size_t to);

}  // namespace harment
