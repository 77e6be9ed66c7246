#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "harment/lattice.hpp"
#include "harment/tolerances.hpp"

namespace harment {

/// First rows of V^{1/2} and V^{-1/2} for a periodic coupling, computed exactly
/// at finite size from the discrete spectrum. Immutable after construction.
class CirculantKernel {
 public:
  const CouplingSpec& spec() const noexcept { return spec_; }
  const Lattice& lattice() const noexcept { return spec_.lattice(); }
  std::span<const double> eigenvalues() const noexcept { return spec_.eigenvalues(); }

  /// Rows indexed by lattice lag index (see Lattice::wrap).
  std::span<const double> sqrt_row() const noexcept { return sqrt_row_; }
  std::span<const double> inv_sqrt_row() const noexcept { return inv_sqrt_row_; }

  double sqrt_entry(std::size_t i, std::size_t j) const {
    return sqrt_row_[lattice().lag_index(i, j)];
  }
  double inv_sqrt_entry(std::size_t i, std::size_t j) const {
    return inv_sqrt_row_[lattice().lag_index(i, j)];
  }

  /// ln det V^{1/2} = ½ Σ_j ln λ_j.
  double log_det_sqrt() const noexcept { return log_det_sqrt_; }

 private:
  friend CirculantKernel build_kernel(const CouplingSpec&, const Tolerances&);
  CouplingSpec spec_;
  std::vector<double> sqrt_row_;
  std::vector<double> inv_sqrt_row_;
  double log_det_sqrt_ = 0.0;
};

/// (V^{±1/2})_k = (1/ΠN_i) Σ_j λ_j^{±1/2} exp(-2πi j·k/N). Throws
/// NumericalIntegrity if the discarded imaginary part is not negligible.
CirculantKernel build_kernel(const CouplingSpec& spec, const Tolerances& tolerances = {});

struct DecayPoint {
  std::size_t lag = 0;
  double magnitude = 0.0;
};

/// |(V^{-1/2})_ℓ| for ℓ = 1..⌊(N-1)/2⌋ on a 1D kernel.
std::vector<DecayPoint> kernel_row_decay(const CirculantKernel& kernel);

/// Hyper-rectangular block anchored at the origin, n_i <= N_i sites per axis.
struct Partition {
  std::vector<std::size_t> extents;

  static Partition block(std::size_t n1) { return {{n1}}; }
  std::size_t site_count() const;
};

/// Validates `partition` against `lattice`; BadPartition when empty, full, or
/// out of range.
void validate_partition(const Lattice& lattice, const Partition& partition);

/// Inner sites in block row-major order, outer sites in ascending site order.
std::vector<std::size_t> inner_sites(const Lattice& lattice, const Partition& partition);
std::vector<std::size_t> outer_sites(const Lattice& lattice, const Partition& partition);

/// V^{-1/2} = [[A, B], [Bᵀ, C]], V^{1/2} = [[D, E], [Eᵀ, F]] for the
/// inner/outer split of `partition`.
struct PartitionBlocks {
  Eigen::MatrixXd a, b, c;
  Eigen::MatrixXd d, e, f;
  Partition partition;
};

PartitionBlocks extract_blocks(const CirculantKernel& kernel, const Partition& partition);
PartitionBlocks extract_blocks(const CirculantKernel& kernel, std::size_t n1);

/// Only A and D; the entropy needs nothing else.
struct InnerBlocks {
  Eigen::MatrixXd a, d;
};
InnerBlocks extract_inner_blocks(const CirculantKernel& kernel, const Partition& partition);

/// Matrix whose (p, q) entry is row[lag(rows[p], cols[q])].
Eigen::MatrixXd gather_block(const Lattice& lattice, std::span<const double> row,
                             std::span<const std::size_t> rows,
                             std::span<const std::size_t> cols);

}  // namespace harment
