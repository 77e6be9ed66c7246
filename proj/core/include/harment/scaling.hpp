#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "harment/entanglement.hpp"
#include "harment/error.hpp"
#include "harment/lattice.hpp"
#include "harment/spectral.hpp"

namespace harment {

enum class FitModel { LogGrowth, Saturation, Linear };
std::string_view to_string(FitModel model);

struct ScalingFit {
  FitModel model = FitModel::Linear;
  double slope = 0.0;  // a in y = a ln x + b or y = a x + b
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double saturation_value = 0.0;  // y_∞ for Saturation fits
  double r_squared = 0.0;
  double max_residual = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;
};

ScalingFit fit_log_growth(std::span<const double> x, std::span<const double> y);
ScalingFit fit_linear(std::span<const double> x, std::span<const double> y);
/// y_∞ is the value at the largest x; max_residual is max |y - y_∞|.
ScalingFit fit_saturation(std::span<const double> x, std::span<const double> y);

/// (N/π) sin(π N₁/N): the block length seen by a log law on a ring of N
/// sites. Tends to N₁ for N → ∞.
double ring_chord_length(std::size_t n1, std::size_t n);

/// Builds the spec for ring size N. May throw NotPositive at resonant sizes.
using SpecBuilder = std::function<CouplingSpec(std::size_t n)>;

struct PartitionRule {
  enum class Kind { HalfHalf, FixedNVaryBlock };
  Kind kind = Kind::HalfHalf;
  std::size_t fixed_n = 0;

  /// N₁ = (N - 1) / 2 for odd N, N / 2 for even N; `sizes` are ring sizes.
  static PartitionRule half_half() { return {Kind::HalfHalf, 0}; }
  /// Ring of `n` sites; `sizes` are block sizes N₁.
  static PartitionRule vary_block(std::size_t n) { return {Kind::FixedNVaryBlock, n}; }
};

std::size_t half_block(std::size_t n);

struct SweepOptions {
  /// Worker threads; results are still emitted in size order.
  std::size_t threads = 1;
  Tolerances tolerances;
  bool with_correlation = false;
  /// Attach Σ k c_k² (order szego_order) to reports of regular 1D specs.
  bool with_szego = true;
  std::size_t szego_order = 200;
  std::function<void(const EntanglementReport&)> on_report;
  /// Called for sizes whose spec cannot be built; defaults to a line on stderr.
  std::function<void(std::size_t size, const Error&)> on_skip;
};

/// One report per usable size, in the order of `sizes`.
std::vector<EntanglementReport> entropy_sweep(const SpecBuilder& builder,
                                              std::span<const std::size_t> sizes,
                                              const PartitionRule& rule,
                                              const SweepOptions& options = {});

/// Smallest distance, in grid units, between a unit-circle root angle α_r
/// and the mode angles 2πj/N. Returns 0.5 for regular symbols.
double root_grid_offset(std::size_t n, const SpectralClassification& classification);

/// Odd ring size nearest to `n` whose root_grid_offset is at least
/// `min_offset`; returns the best candidate found within n/4 otherwise.
std::size_t off_resonant_size(std::size_t n, const SpectralClassification& classification,
                              double min_offset);

struct WidomOptions {
  /// Replace each size by an off-resonant odd size. Near-resonant modes add
  /// an N-dependent offset to I that masks the ln N law.
  bool avoid_resonance = true;
  double min_root_offset = 0.4;
  std::size_t threads = 1;
  Tolerances tolerances;
  std::function<void(std::size_t size, const Error&)> on_skip;
};

struct WidomSlopeResult {
  ScalingFit fit;  // LogGrowth of I against N
  double expected = 0.0;  // Σ m_r² / 4
  SpectralClassification classification;
  std::vector<std::size_t> sizes;  // ring sizes actually used
  std::vector<double> mutual_information;
};

/// Half/half mutual information against ln N. Needs >= 6 sizes spanning a
/// factor of 8.
WidomSlopeResult widom_slope(const SpecBuilder& builder, std::span<const std::size_t> sizes,
                             const WidomOptions& options = {});

struct DetCheckResult {
  ScalingFit fit;
  double expected = 0.0;
  double c0 = 0.0;
  std::vector<std::size_t> block_sizes;
  std::vector<double> excess;  // ln det D(N₁) - c₀ N₁
};

/// Strong Szegő check for a regular spec: the excess saturates at Σ k c_k².
DetCheckResult szego_det_check(const CouplingSpec& spec, std::span<const std::size_t> block_sizes,
                               std::size_t order = 200, const Tolerances& tolerances = {});

/// Widom check: slope of the excess against ln N₁ (blocks N₁ >= 8) compared
/// with Σ m_r² / 4. Requires N >= 8 max N₁.
DetCheckResult widom_det_check(const CouplingSpec& spec, std::span<const std::size_t> block_sizes,
                               const Tolerances& tolerances = {});

struct AreaLawRow {
  std::size_t n = 0;
  double entropy = 0.0;
  double ratio = 0.0;  // S / (4n)
};

struct AreaLawResult {
  std::vector<AreaLawRow> rows;
  /// False when λ nearly vanishes somewhere on a fine grid: there is no
  /// theorem to compare a singular 2D sweep against.
  bool has_reference = true;
};

/// Entropy of n×n blocks in a 2D torus with N_i >= 4n.
AreaLawResult area_law_2d(const CouplingSpec& spec, std::span<const std::size_t> block_sizes,
                          std::size_t threads = 1, const Tolerances& tolerances = {});

}  // namespace harment
