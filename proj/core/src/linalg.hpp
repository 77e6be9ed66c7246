#pragma once

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <fmt/format.h>

#include "harment/error.hpp"

namespace harment::detail {

/// ln det of a symmetric positive-definite matrix from its Cholesky diagonal.
inline double log_det_spd(const Eigen::MatrixXd& m, const char* name) {
  if (m.size() == 0) return 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericalIntegrity,
                fmt::format("block {} is not positive definite", name));
  }
  const auto& l = llt.matrixLLT();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) sum += std::log(l(i, i));
  return 2.0 * sum;
}

}  // namespace harment::detail
