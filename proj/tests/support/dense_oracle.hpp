#pragma once

// Test-only reference pipeline built purely from dense matrix functions.
// It shares nothing with the circulant path except the coupling spec.
// Matrix roots come from a dense symmetric eigendecomposition; μ comes from
// a nonsymmetric eigensolve of A·D.

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "harment/lattice.hpp"

namespace harment::oracle {

inline Eigen::MatrixXd assemble_potential(const CouplingSpec& spec) {
  const auto n = static_cast<Eigen::Index>(spec.site_count());
  const auto& lattice = spec.lattice();
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ci = lattice.coordinates(static_cast<std::size_t>(i));
    for (const auto& term : spec.terms()) {
      std::vector<std::size_t> cj(ci.size());
      for (std::size_t axis = 0; axis < ci.size(); ++axis) {
        const auto ext = static_cast<long>(lattice.extents()[axis]);
        long c = (static_cast<long>(ci[axis]) - term.lag[axis]) % ext;
        if (c < 0) c += ext;
        cj[axis] = static_cast<std::size_t>(c);
      }
      v(i, static_cast<Eigen::Index>(lattice.index(cj))) += term.value;
    }
  }
  return v;
}

struct DenseRoots {
  Eigen::MatrixXd sqrt;
  Eigen::MatrixXd inv_sqrt;
  Eigen::VectorXd eigenvalues;
};

inline DenseRoots matrix_roots(const Eigen::MatrixXd& v) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(v);
  const Eigen::VectorXd lam = es.eigenvalues();
  const Eigen::MatrixXd& u = es.eigenvectors();
  DenseRoots out;
  out.eigenvalues = lam;
  out.sqrt = u * lam.cwiseSqrt().asDiagonal() * u.transpose();
  out.inv_sqrt = u * lam.cwiseSqrt().cwiseInverse().asDiagonal() * u.transpose();
  return out;
}

inline double f(double x) {
  if (x <= 1.0 + 1e-15) return 0.0;
  return (x + 1) / 2 * std::log((x + 1) / 2) - (x - 1) / 2 * std::log((x - 1) / 2);
}

inline double log_abs_det(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const Eigen::MatrixXd& packed = lu.matrixLU();
  double s = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) s += std::log(std::abs(packed(i, i)));
  return s;
}

struct DenseResult {
  double entropy = 0.0;
  double mutual_information = 0.0;
  std::vector<double> mu;
  Eigen::MatrixXd a, c, d;
};

/// Entropy and mutual information for the inner sites `inner` (all other
/// sites form the outer part).
inline DenseResult entanglement(const CouplingSpec& spec, const std::vector<std::size_t>& inner) {
  const auto roots = matrix_roots(assemble_potential(spec));
  const auto n = spec.site_count();
  std::vector<bool> is_inner(n, false);
  for (auto s : inner) is_inner[s] = true;
  std::vector<Eigen::Index> in, out;
  for (std::size_t s = 0; s < n; ++s) {
    (is_inner[s] ? in : out).push_back(static_cast<Eigen::Index>(s));
  }
  auto pick = [](const Eigen::MatrixXd& m, const std::vector<Eigen::Index>& r,
                 const std::vector<Eigen::Index>& c) {
    Eigen::MatrixXd b(r.size(), c.size());
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j) b(i, j) = m(r[i], c[j]);
    return b;
  };
  DenseResult res;
  res.a = pick(roots.inv_sqrt, in, in);
  res.c = pick(roots.inv_sqrt, out, out);
  res.d = pick(roots.sqrt, in, in);
  Eigen::EigenSolver<Eigen::MatrixXd> es(res.a * res.d, false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double mu = es.eigenvalues()(i).real();
    res.mu.push_back(mu);
    res.entropy += f(std::sqrt(std::max(mu, 1.0)));
  }
  const double log_det_inv_sqrt = -0.5 * roots.eigenvalues.array().log().sum();
  res.mutual_information =
      0.5 * (log_abs_det(res.a) + log_abs_det(res.c) - log_det_inv_sqrt);
  return res;
}

inline std::vector<std::size_t> first_sites(std::size_t n1) {
  std::vector<std::size_t> s(n1);
  for (std::size_t i = 0; i < n1; ++i) s[i] = i;
  return s;
}

}  // namespace harment::oracle
