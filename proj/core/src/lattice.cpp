#include "harment/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "harment/error.hpp"

namespace harment {

Lattice::Lattice(std::vector<std::size_t> extents) : extents_(std::move(extents)) {
  if (extents_.empty()) {
    throw Error(ErrorKind::InvalidArgument, "lattice needs at least one axis");
  }
  strides_.assign(extents_.size(), 1);
  site_count_ = 1;
  for (std::size_t axis = extents_.size(); axis-- > 0;) {
    if (extents_[axis] == 0) {
      throw Error(ErrorKind::InvalidArgument, "lattice extents must be positive");
    }
    strides_[axis] = site_count_;
    site_count_ *= extents_[axis];
  }
}

std::vector<std::size_t> Lattice::coordinates(std::size_t index) const {
  std::vector<std::size_t> coords(extents_.size());
  for (std::size_t axis = 0; axis < extents_.size(); ++axis) {
    coords[axis] = (index / strides_[axis]) % extents_[axis];
  }
  return coords;
}

std::size_t Lattice::index(std::span<const std::size_t> coordinates) const {
  std::size_t idx = 0;
  for (std::size_t axis = 0; axis < extents_.size(); ++axis) {
    idx += (coordinates[axis] % extents_[axis]) * strides_[axis];
  }
  return idx;
}

std::size_t Lattice::lag_index(std::size_t from, std::size_t to) const {
  std::size_t idx = 0;
  for (std::size_t axis = 0; axis < extents_.size(); ++axis) {
    const std::size_t n = extents_[axis];
    const std::size_t a = (from / strides_[axis]) % n;
    const std::size_t b = (to / strides_[axis]) % n;
    idx += ((a + n - b) % n) * strides_[axis];
  }
  return idx;
}

std::size_t Lattice::wrap(std::span<const int> lag) const {
  std::size_t idx = 0;
  for (std::size_t axis = 0; axis < extents_.size(); ++axis) {
    const auto n = static_cast<long>(extents_[axis]);
    long k = static_cast<long>(lag[axis]) % n;
    if (k < 0) k += n;
    idx += static_cast<std::size_t>(k) * strides_[axis];
  }
  return idx;
}

std::size_t Lattice::negated(std::size_t index) const {
  std::size_t idx = 0;
  for (std::size_t axis = 0; axis < extents_.size(); ++axis) {
    const std::size_t n = extents_[axis];
    const std::size_t k = (index / strides_[axis]) % n;
    idx += ((n - k) % n) * strides_[axis];
  }
  return idx;
}

namespace {

std::vector<int> canonical_lag(std::span<const int> lag, std::span<const std::size_t> extents) {
  std::vector<int> out(lag.size());
  for (std::size_t axis = 0; axis < lag.size(); ++axis) {
    const auto n = static_cast<long>(extents[axis]);
    long k = static_cast<long>(lag[axis]) % n;
    if (k < 0) k += n;
    if (2 * k > n) k -= n;
    out[axis] = static_cast<int>(k);
  }
  return out;
}

std::vector<int> negate(std::vector<int> lag) {
  for (auto& k : lag) k = -k;
  return lag;
}

bool same_value(double a, double b) {
  return std::abs(a - b) <= 1e-14 * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

double CouplingSpec::coefficient(std::span<const int> lag) const {
  if (lag.size() != static_cast<std::size_t>(dimension())) {
    throw Error(ErrorKind::InvalidArgument, "lag dimension mismatch");
  }
  const auto canon = canonical_lag(lag, extents());
  for (const auto& term : terms_) {
    if (term.lag == canon) return term.value;
  }
  return 0.0;
}

std::vector<double> CouplingSpec::coupling_row() const {
  std::vector<double> row(site_count(), 0.0);
  for (const auto& term : terms_) {
    row[lattice_.wrap(term.lag)] += term.value;
  }
  return row;
}

CouplingSpec build_coupling(int dimension, std::vector<std::size_t> extents,
                            std::span<const CouplingTerm> coefficients,
                            const Tolerances& tolerances) {
  if (dimension < 1 || extents.size() != static_cast<std::size_t>(dimension)) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("dimension {} does not match {} extents", dimension, extents.size()));
  }
  CouplingSpec spec;
  spec.lattice_ = Lattice(std::move(extents));
  const auto ext = spec.lattice_.extents();

  std::map<std::vector<int>, double> table;
  auto insert = [&](const std::vector<int>& lag, double value) {
    auto [it, inserted] = table.emplace(lag, value);
    if (!inserted && !same_value(it->second, value)) {
      throw Error(ErrorKind::NotSymmetric,
                  fmt::format("coefficient for lag [{}] given as {} and {}",
                              fmt::join(lag, ","), it->second, value));
    }
  };
  for (const auto& term : coefficients) {
    if (term.lag.size() != static_cast<std::size_t>(dimension)) {
      throw Error(ErrorKind::InvalidArgument,
                  fmt::format("lag [{}] has wrong dimension", fmt::join(term.lag, ",")));
    }
    if (!std::isfinite(term.value)) {
      throw Error(ErrorKind::InvalidArgument, "coefficient values must be finite");
    }
    const auto canon = canonical_lag(term.lag, ext);
    insert(canon, term.value);
  }
  // Symmetry completion; a conflicting explicit -k entry is rejected.
  const auto one_sided = table;
  for (const auto& [lag, value] : one_sided) {
    insert(canonical_lag(negate(lag), ext), value);
  }

  int range = 0;
  for (const auto& [lag, value] : table) {
    if (value == 0.0) continue;
    spec.terms_.push_back({lag, value});
    for (int k : lag) range = std::max(range, std::abs(k) + 1);
  }
  spec.range_ = std::max(range, 1);
  const std::size_t min_extent = *std::min_element(ext.begin(), ext.end());
  if (static_cast<std::size_t>(2 * spec.range_ - 1) > min_extent) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("range R={} needs 2R-1 <= min extent {}", spec.range_, min_extent));
  }

  // λ_j = Σ_k V_k cos(2π Σ_i j_i k_i / N_i); phases reduced exactly in integers.
  const auto& lattice = spec.lattice_;
  const std::size_t count = lattice.site_count();
  spec.eigenvalues_.resize(count);
  std::vector<std::size_t> mode(ext.size());
  for (std::size_t j = 0; j < count; ++j) {
    // λ_{-j} = λ_j; copying keeps the pair bitwise equal so the transforms
    // stay real even next to a near-zero mode.
    const std::size_t partner = lattice.negated(j);
    if (partner < j) {
      spec.eigenvalues_[j] = spec.eigenvalues_[partner];
      continue;
    }
    mode = lattice.coordinates(j);
    double lambda = 0.0;
    for (const auto& term : spec.terms_) {
      double phase = 0.0;
      for (std::size_t axis = 0; axis < ext.size(); ++axis) {
        const auto n = static_cast<long>(ext[axis]);
        long p = (static_cast<long>(mode[axis]) * term.lag[axis]) % n;
        if (p < 0) p += n;
        phase += static_cast<double>(p) / static_cast<double>(n);
      }
      lambda += term.value * std::cos(2.0 * std::numbers::pi * phase);
    }
    spec.eigenvalues_[j] = lambda;
  }
  const auto [min_it, max_it] =
      std::minmax_element(spec.eigenvalues_.begin(), spec.eigenvalues_.end());
  spec.min_eigenvalue_ = *min_it;
  spec.max_eigenvalue_ = *max_it;
  if (!(spec.max_eigenvalue_ > 0.0) ||
      spec.min_eigenvalue_ <= tolerances.positivity * spec.max_eigenvalue_) {
    const auto j = static_cast<std::size_t>(min_it - spec.eigenvalues_.begin());
    throw Error(ErrorKind::NotPositive,
                fmt::format("circulant eigenvalue λ_{} = {:.6g} is not positive "
                            "(max λ = {:.6g}); no normalizable ground state",
                            j, spec.min_eigenvalue_, spec.max_eigenvalue_),
                j);
  }
  return spec;
}

CouplingSpec with_extents(const CouplingSpec& spec, std::vector<std::size_t> extents,
                          const Tolerances& tolerances) {
  return build_coupling(spec.dimension(), std::move(extents), spec.terms(), tolerances);
}

std::vector<CouplingTerm> eta_chain_coefficients(double eta) {
  return {{{0}, 4.0 * eta * eta + 2.0}, {{1}, -4.0 * eta}, {{2}, 1.0}};
}

CouplingSpec build_eta_chain(const EtaChainParams& params, const Tolerances& tolerances) {
  if (!(params.eta >= 0.0) || !std::isfinite(params.eta)) {
    throw Error(ErrorKind::InvalidArgument, "eta must be a finite non-negative number");
  }
  if (params.n < 5) {
    throw Error(ErrorKind::InvalidArgument, "eta chain needs N >= 5");
  }
  const auto coefficients = eta_chain_coefficients(params.eta);
  return build_coupling(1, {params.n}, coefficients, tolerances);
}

CouplingSpec separable_coupling(const CouplingSpec& a, const CouplingSpec& b,
                                const Tolerances& tolerances) {
  if (a.dimension() != 1 || b.dimension() != 1) {
    throw Error(ErrorKind::InvalidArgument, "separable_coupling combines two 1D chains");
  }
  std::vector<CouplingTerm> terms;
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      terms.push_back({{ta.lag[0], tb.lag[0]}, ta.value * tb.value});
    }
  }
  return build_coupling(2, {a.site_count(), b.site_count()}, terms, tolerances);
}

Eigen::MatrixXd dense_potential(const CouplingSpec& spec, std::size_t cap) {
  const std::size_t n = spec.site_count();
  if (n > cap) {
    throw Error(ErrorKind::TooLarge, fmt::format("{} sites exceed the dense cap {}", n, cap));
  }
  const auto row = spec.coupling_row();
  const auto& lattice = spec.lattice();
  Eigen::MatrixXd v(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[lattice.lag_index(i, j)];
    }
  }
  return v;
}

}  // namespace harment
