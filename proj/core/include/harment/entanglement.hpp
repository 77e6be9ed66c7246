#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "harment/kernel.hpp"
#include "harment/tolerances.hpp"

namespace harment {

/// f(x) = ((x+1)/2) ln((x+1)/2) - ((x-1)/2) ln((x-1)/2) for x >= 1, f(1) = 0.
double mode_entropy(double x);

struct EntropyResult {
  std::vector<double> mu;  // ascending, each >= 1
  double entropy = 0.0;    // nats
};

/// μ-spectrum of A·D (via the symmetric similar matrix Lᵀ D L, A = L Lᵀ) and
/// S = Σ f(√μ_i). μ within the eigensolver's rounding band of 1 is set to 1.
/// Throws SpectrumBelowOne if some μ < 1 - mu_floor.
EntropyResult entropy(const CirculantKernel& kernel, const Partition& partition,
                      const Tolerances& tolerances = {});

/// The three equal forms of the position/momentum Shannon mutual information.
struct MutualInformation {
  double position_form = 0.0;     // ½ ln(det A det C / det V^{-1/2})
  double momentum_form = 0.0;     // ½ ln(det D det F / det V^{1/2})
  double det_product_form = 0.0;  // ½ ln det(A·D)

  double value() const noexcept { return position_form; }
};

/// Log-space determinants from Cholesky factors. Throws NumericalIntegrity if
/// a block is not positive definite or the forms disagree by more than
/// identity_agreement.
MutualInformation mutual_information(const CirculantKernel& kernel, const Partition& partition,
                                     const Tolerances& tolerances = {});

/// 4 λ_max^{1/2} Σ_{i∈inner} Σ_{j∈outer} |V^{-1/2}_{ij}|.
double negativity_upper_bound(const CirculantKernel& kernel, const Partition& partition);

enum class DecayClass { Exponential, PowerLaw, Zero };
std::string_view to_string(DecayClass decay);

struct CorrelationEstimate {
  double xi = 0.0;  // sites; +inf for PowerLaw, 0 for Zero
  DecayClass decay_class = DecayClass::Zero;
  std::size_t window_begin = 0;  // inclusive lag range actually fitted
  std::size_t window_end = 0;
  double fit_residual = 0.0;  // RMS residual of the winning fit
  // Exponential envelope |V^{-1/2}_ℓ| ≈ amplitude exp(-rate ℓ).
  double amplitude = 0.0;
  double rate = 0.0;
};

/// Classifies the decay of |V^{-1/2}_ℓ| on a 1D kernel with N >= 64.
///
/// ln|V^{-1/2}_ℓ| is fitted against ℓ and against ln ℓ over lags in
/// [N/16, N/4] that sit above a 1e-13 noise floor (relative to the lag-0
/// entry). When fewer than 8 such lags exist the window slides down to the
/// upper half of the usable lags in [1, N/4]. The exponential model wins when
/// its RMS residual is at most half of the power-law residual and the slope is
/// negative; that rule is a heuristic, the physical ξ is only defined as a
/// limit.
CorrelationEstimate correlation_length(const CirculantKernel& kernel);

struct EntanglementReport {
  std::vector<std::size_t> extents;
  Partition partition;
  std::vector<double> mu;
  double entropy = 0.0;
  double mutual_information = 0.0;
  double det_lower_bound = 0.0;
  double negativity_upper_bound = 0.0;
  std::optional<double> szego_lower_bound;
  std::optional<CorrelationEstimate> correlation;
};

struct ReportOptions {
  Tolerances tolerances;
  std::optional<double> szego_lower_bound;
  bool with_correlation = true;  // only applied to 1D kernels with N >= 64
};

EntanglementReport entanglement_report(const CirculantKernel& kernel, const Partition& partition,
                                       const ReportOptions& options = {});

}  // namespace harment
