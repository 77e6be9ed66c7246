#include "harment/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "harment/error.hpp"
#include "harment/fit.hpp"
#include "linalg.hpp"

namespace harment {

double mode_entropy(double x) {
  if (x <= 1.0) return 0.0;
  const double eps = x - 1.0;
  if (eps > 1e-8) {
    return std::log((x + 1.0) / 2.0) + (eps / 2.0) * std::log((x + 1.0) / eps);
  }
  // f(1 + 2u) = u - u ln u + u²/2 + O(u³); the u ln u term is not analytic.
  const double u = eps / 2.0;
  return u - u * std::log(u) + 0.5 * u * u;
}

using detail::log_det_spd;

EntropyResult entropy(const CirculantKernel& kernel, const Partition& partition,
                      const Tolerances& tolerances) {
  const auto blocks = extract_inner_blocks(kernel, partition);
  Eigen::LLT<Eigen::MatrixXd> llt(blocks.a);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericalIntegrity, "block A is not positive definite");
  }
  const Eigen::MatrixXd l = llt.matrixL();
  const Eigen::MatrixXd sym = l.transpose() * blocks.d * l;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NumericalIntegrity, "μ-spectrum eigensolver failed");
  }

  EntropyResult result;
  result.mu.assign(solver.eigenvalues().data(),
                   solver.eigenvalues().data() + solver.eigenvalues().size());
  // Eigenvalues carry an absolute error of order n ε ‖LᵀDL‖. Inside that band
  // μ is indistinguishable from 1, and f's u ln u shape would turn the noise
  // into spurious entropy.
  const double noise = 4.0 * static_cast<double>(result.mu.size()) *
                       std::numeric_limits<double>::epsilon() *
                       std::max(1.0, result.mu.empty() ? 1.0 : result.mu.back());
  for (auto& mu : result.mu) {
    if (mu < 1.0 - tolerances.mu_floor) {
      throw Error(ErrorKind::SpectrumBelowOne,
                  fmt::format("μ = {:.12g} below 1; kernel is inconsistent", mu));
    }
    if (mu <= 1.0 + noise) mu = 1.0;
    result.entropy += mode_entropy(std::sqrt(mu));
  }
  return result;
}

MutualInformation mutual_information(const CirculantKernel& kernel, const Partition& partition,
                                     const Tolerances& tolerances) {
  const auto blocks = extract_blocks(kernel, partition);
  const double ld_a = log_det_spd(blocks.a, "A");
  const double ld_c = log_det_spd(blocks.c, "C");
  const double ld_d = log_det_spd(blocks.d, "D");
  const double ld_f = log_det_spd(blocks.f, "F");
  const double ld_sqrt = kernel.log_det_sqrt();

  MutualInformation mi;
  mi.position_form = 0.5 * (ld_a + ld_c + ld_sqrt);
  mi.momentum_form = 0.5 * (ld_d + ld_f - ld_sqrt);
  mi.det_product_form = 0.5 * (ld_a + ld_d);

  const double scale = std::max(1.0, std::abs(mi.position_form));
  const double gap = std::max(std::abs(mi.position_form - mi.momentum_form),
                              std::abs(mi.position_form - mi.det_product_form));
  if (gap > tolerances.identity_agreement * scale) {
    throw Error(ErrorKind::NumericalIntegrity,
                fmt::format("mutual-information forms disagree: {:.12g} / {:.12g} / {:.12g}",
                            mi.position_form, mi.momentum_form, mi.det_product_form));
  }
  return mi;
}

double negativity_upper_bound(const CirculantKernel& kernel, const Partition& partition) {
  const auto& lattice = kernel.lattice();
  const auto inner = inner_sites(lattice, partition);
  const auto row = kernel.inv_sqrt_row();
  // Every site sees the same multiset of lags, so the inner-outer sum is the
  // full row sum per inner site minus the inner-inner part.
  double row_total = 0.0;
  for (double v : row) row_total += std::abs(v);
  double inner_inner = 0.0;
  for (auto i : inner) {
    for (auto j : inner) inner_inner += std::abs(row[lattice.lag_index(i, j)]);
  }
  const double cross = static_cast<double>(inner.size()) * row_total - inner_inner;
  return 4.0 * std::sqrt(kernel.spec().max_eigenvalue()) * std::max(cross, 0.0);
}

std::string_view to_string(DecayClass decay) {
  switch (decay) {
    case DecayClass::Exponential: return "Exponential";
    case DecayClass::PowerLaw: return "PowerLaw";
    case DecayClass::Zero: return "Zero";
  }
  return "Unknown";
}

CorrelationEstimate correlation_length(const CirculantKernel& kernel) {
  if (kernel.spec().dimension() != 1) {
    throw Error(ErrorKind::InvalidArgument, "correlation_length requires a 1D kernel");
  }
  const std::size_t n = kernel.spec().site_count();
  if (n < 64) {
    throw Error(ErrorKind::InvalidArgument, "correlation_length needs N >= 64");
  }
  const auto row = kernel.inv_sqrt_row();
  const double floor = 1e-13 * std::abs(row[0]);

  CorrelationEstimate est;
  bool any = false;
  for (std::size_t lag = 1; lag <= n / 2; ++lag) any = any || std::abs(row[lag]) >= floor;
  if (!any) {
    est.decay_class = DecayClass::Zero;
    return est;
  }

  std::vector<std::size_t> usable;
  for (std::size_t lag = 1; lag <= n / 4; ++lag) {
    if (std::abs(row[lag]) > floor) usable.push_back(lag);
  }
  std::vector<std::size_t> window;
  std::copy_if(usable.begin(), usable.end(), std::back_inserter(window),
               [&](std::size_t lag) { return lag >= n / 16; });
  if (window.size() < 8) {
    const std::size_t take = std::min(usable.size(), std::max<std::size_t>(8, usable.size() / 2));
    window.assign(usable.end() - static_cast<std::ptrdiff_t>(take), usable.end());
  }
  if (window.size() < 8) {
    throw Error(ErrorKind::InsufficientDecayData,
                fmt::format("only {} lags above the noise floor", window.size()));
  }

  std::vector<double> lags, log_lags, log_values;
  for (auto lag : window) {
    lags.push_back(static_cast<double>(lag));
    log_lags.push_back(std::log(static_cast<double>(lag)));
    log_values.push_back(std::log(std::abs(row[lag])));
  }
  const auto linear = fit_line(lags, log_values);
  const auto power = fit_line(log_lags, log_values);
  est.window_begin = window.front();
  est.window_end = window.back();
  if (linear.slope < 0.0 && linear.rms_residual <= 0.5 * power.rms_residual) {
    est.decay_class = DecayClass::Exponential;
    est.xi = -1.0 / linear.slope;
    est.fit_residual = linear.rms_residual;
    est.rate = -linear.slope;
    est.amplitude = std::exp(linear.intercept);
  } else {
    est.decay_class = DecayClass::PowerLaw;
    est.xi = std::numeric_limits<double>::infinity();
    est.fit_residual = power.rms_residual;
  }
  return est;
}

EntanglementReport entanglement_report(const CirculantKernel& kernel, const Partition& partition,
                                       const ReportOptions& options) {
  EntanglementReport report;
  const auto ext = kernel.lattice().extents();
  report.extents.assign(ext.begin(), ext.end());
  report.partition = partition;
  auto ent = entropy(kernel, partition, options.tolerances);
  report.mu = std::move(ent.mu);
  report.entropy = ent.entropy;
  const auto mi = mutual_information(kernel, partition, options.tolerances);
  report.mutual_information = mi.value();
  report.det_lower_bound = mi.det_product_form;
  report.negativity_upper_bound = negativity_upper_bound(kernel, partition);
  report.szego_lower_bound = options.szego_lower_bound;
  if (options.with_correlation && kernel.spec().dimension() == 1 &&
      kernel.spec().site_count() >= 64) {
    report.correlation = correlation_length(kernel);
  }
  return report;
}

}  // namespace harment
