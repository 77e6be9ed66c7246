#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "harment/tolerances.hpp"

namespace harment {

/// Periodic hyper-rectangular lattice (1D ring or d-dim torus). Sites and
/// Fourier modes share the same row-major indexing; axis 0 varies slowest.
class Lattice {
 public:
  Lattice() = default;
  explicit Lattice(std::vector<std::size_t> extents);

  int dimension() const noexcept { return static_cast<int>(extents_.size()); }
  std::span<const std::size_t> extents() const noexcept { return extents_; }
  std::size_t extent(int axis) const { return extents_[static_cast<std::size_t>(axis)]; }
  std::size_t site_count() const noexcept { return site_count_; }

  std::vector<std::size_t> coordinates(std::size_t index) const;
  std::size_t index(std::span<const std::size_t> coordinates) const;

  /// Index of the lag vector (from - to), wrapped into the torus.
  std::size_t lag_index(std::size_t from, std::size_t to) const;
  /// Index of an arbitrary signed lag vector, wrapped into the torus.
  std::size_t wrap(std::span<const int> lag) const;
  /// Index of -lag for the lag stored at `index`.
  std::size_t negated(std::size_t index) const;

 private:
  std::vector<std::size_t> extents_;
  std::vector<std::size_t> strides_;
  std::size_t site_count_ = 0;
};

/// One coupling coefficient V_k for lag vector k.
struct CouplingTerm {
  std::vector<int> lag;
  double value = 0.0;
};

/// Validated finite-range, translation-invariant coupling. Immutable.
///
/// Terms are stored symmetry-completed with canonical lags
/// (|k_i| <= (N_i - 1) / 2). The circulant eigenvalues λ_j are computed at
/// construction and are all strictly positive.
class CouplingSpec {
 public:
  const Lattice& lattice() const noexcept { return lattice_; }
  int dimension() const noexcept { return lattice_.dimension(); }
  std::span<const std::size_t> extents() const noexcept { return lattice_.extents(); }
  std::size_t site_count() const noexcept { return lattice_.site_count(); }

  std::span<const CouplingTerm> terms() const noexcept { return terms_; }
  /// Coefficients vanish for any |k_i| >= range().
  int range() const noexcept { return range_; }
  /// V_k for an arbitrary lag (wrapped periodically); 0 when absent.
  double coefficient(std::span<const int> lag) const;

  std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }
  double max_eigenvalue() const noexcept { return max_eigenvalue_; }

  /// First row of the circulant V indexed by lattice lag index.
  std::vector<double> coupling_row() const;

 private:
  friend CouplingSpec build_coupling(int, std::vector<std::size_t>, std::span<const CouplingTerm>,
                                     const Tolerances&);
  Lattice lattice_;
  std::vector<CouplingTerm> terms_;
  int range_ = 0;
  std::vector<double> eigenvalues_;
  double min_eigenvalue_ = 0.0;
  double max_eigenvalue_ = 0.0;
};

/// Validates and symmetry-completes `coefficients` on a torus of `extents`.
/// Lags may be given on one side only; a lag given on both sides must agree
/// (else NotSymmetric). Requires 2R - 1 <= min extent. Throws NotPositive
/// (carrying the offending mode index) if some λ_j <= positivity * max λ.
CouplingSpec build_coupling(int dimension, std::vector<std::size_t> extents,
                            std::span<const CouplingTerm> coefficients,
                            const Tolerances& tolerances = {});

/// Same coefficients on a different torus.
CouplingSpec with_extents(const CouplingSpec& spec, std::vector<std::size_t> extents,
                          const Tolerances& tolerances = {});

struct EtaChainParams {
  double eta = 1.2;
  std::size_t n = 64;
};

/// One-sided coefficients of ½ Σ (-2η q_i + q_{i+1} + q_{i-1})²:
/// V_0 = 4η² + 2, V_1 = -4η, V_2 = 1. Not validated.
std::vector<CouplingTerm> eta_chain_coefficients(double eta);

/// The η-parameterized next-nearest-neighbour chain, λ(θ) = (2η - 2cos θ)².
/// Requires η >= 0 and N >= 5; NotPositive when some cos θ_j is too close to η.
CouplingSpec build_eta_chain(const EtaChainParams& params, const Tolerances& tolerances = {});

/// Product coupling V_{(k1,k2)} = a_{k1} b_{k2} of two 1D chains on an
/// extents(a) x extents(b) torus.
CouplingSpec separable_coupling(const CouplingSpec& a, const CouplingSpec& b,
                                const Tolerances& tolerances = {});

/// Dense (block-)circulant V with V[i][j] = V_{i-j mod extents}. TooLarge
/// above `cap` sites.
Eigen::MatrixXd dense_potential(const CouplingSpec& spec, std::size_t cap = 4096);

}  // namespace harment
