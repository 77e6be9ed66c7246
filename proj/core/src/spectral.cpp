#include "harment/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "harment/error.hpp"
#include "harment/fit.hpp"

namespace harment {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Candidate window and clustering width for companion roots. A root of
// multiplicity p is perturbed by ~eps^{1/p}, so these are much looser than the
// final unit-circle test applied to the cluster centroid.
constexpr double kCandidateWindow = 1e-3;
constexpr double kClusterWidth = 1e-3;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  return a;
}

void require_1d(const CouplingSpec& spec, const char* what) {
  if (spec.dimension() != 1) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("{} requires a 1D spec", what));
  }
}

// z^{R-1} λ(z), ascending powers: p[n] = V_{n-(R-1)}.
std::vector<double> laurent_coefficients(const CouplingSpec& spec) {
  const int r = spec.range();
  std::vector<double> p(static_cast<std::size_t>(2 * (r - 1) + 1), 0.0);
  for (int n = 0; n <= 2 * (r - 1); ++n) {
    const int lag = n - (r - 1);
    p[static_cast<std::size_t>(n)] = spec.coefficient(std::span<const int>(&lag, 1));
  }
  return p;
}

std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& p) {
  const auto degree = static_cast<Eigen::Index>(p.size()) - 1;
  if (degree < 1) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
  for (Eigen::Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  const double lead = p.back();
  for (Eigen::Index i = 0; i < degree; ++i) {
    companion(i, degree - 1) = -p[static_cast<std::size_t>(i)] / lead;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::IllConditionedRoots, "companion eigenvalue solver did not converge");
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

// Scale of the n-th derivative: Σ |V_k| |k|^n.
double derivative_scale(const CouplingSpec& spec, int order) {
  double s = 0.0;
  for (const auto& term : spec.terms()) {
    s += std::abs(term.value) * std::pow(std::abs(static_cast<double>(term.lag[0])), order);
  }
  return s;
}

}  // namespace

double spectral_eval(const CouplingSpec& spec, std::span<const double> theta) {
  if (theta.size() != static_cast<std::size_t>(spec.dimension())) {
    throw Error(ErrorKind::InvalidArgument, "theta must have one angle per lattice axis");
  }
  double value = 0.0;
  for (const auto& term : spec.terms()) {
    double phase = 0.0;
    for (std::size_t axis = 0; axis < theta.size(); ++axis) {
      phase += term.lag[axis] * theta[axis];
    }
    value += term.value * std::cos(phase);
  }
  return value;
}

double spectral_eval(const CouplingSpec& spec, double theta) {
  return spectral_eval(spec, std::span<const double>(&theta, 1));
}

double spectral_derivative(const CouplingSpec& spec, double theta, int order) {
  require_1d(spec, "spectral_derivative");
  double value = 0.0;
  for (const auto& term : spec.terms()) {
    const double k = term.lag[0];
    value += term.value * std::pow(k, order) *
             std::cos(k * theta + order * std::numbers::pi / 2.0);
  }
  return value;
}

SpectralClassification classify(const CouplingSpec& spec, const Tolerances& tolerances) {
  require_1d(spec, "classify");
  SpectralClassification result;
  if (spec.range() <= 1) return result;

  const auto roots = polynomial_roots(laurent_coefficients(spec));

  struct Candidate {
    double angle;
    std::complex<double> z;
  };
  std::vector<Candidate> candidates;
  for (const auto& z : roots) {
    if (std::abs(std::abs(z) - 1.0) < kCandidateWindow) {
      candidates.push_back({wrap_angle(std::arg(z)), z});
    }
  }
  if (candidates.empty()) return result;
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) { return a.angle < b.angle; });

  std::vector<std::vector<Candidate>> clusters;
  for (const auto& c : candidates) {
    if (clusters.empty() || c.angle - clusters.back().back().angle > kClusterWidth) {
      clusters.push_back({c});
    } else {
      clusters.back().push_back(c);
    }
  }
  if (clusters.size() > 1 &&
      clusters.front().front().angle + kTwoPi - clusters.back().back().angle <= kClusterWidth) {
    clusters.front().insert(clusters.front().end(), clusters.back().begin(),
                            clusters.back().end());
    clusters.pop_back();
  }

  const double lambda_scale = derivative_scale(spec, 0);
  for (const auto& cluster : clusters) {
    std::complex<double> centroid = 0.0;
    for (const auto& c : cluster) centroid += c.z;
    centroid /= static_cast<double>(cluster.size());
    const double alpha = wrap_angle(std::arg(centroid));
    const double zero_level = tolerances.root * spec.max_eigenvalue();
    const bool on_circle = std::abs(std::abs(centroid) - 1.0) < tolerances.root &&
                           spectral_eval(spec, alpha) < zero_level;
    if (!on_circle) {
      // Members sitting on zeros of λ while the centroid is off the circle
      // means distinct zeros closer than the clustering width.
      for (const auto& c : cluster) {
        if (spectral_eval(spec, c.angle) < zero_level) {
          throw Error(ErrorKind::IllConditionedRoots,
                      fmt::format("unresolvable root cluster near angle {:.12g}", alpha));
        }
      }
      continue;
    }

    // Order of vanishing from exact derivatives of the trigonometric polynomial.
    const int max_order = 2 * (spec.range() - 1);
    int order = 0;
    for (int n = 1; n <= max_order; ++n) {
      const double scale = derivative_scale(spec, n);
      if (std::abs(spectral_derivative(spec, alpha, n)) > 1e-6 * std::max(scale, lambda_scale)) {
        order = n;
        break;
      }
    }
    if (order == 0 || order % 2 != 0 || static_cast<std::size_t>(order) != cluster.size()) {
      throw Error(ErrorKind::IllConditionedRoots,
                  fmt::format("root cluster at angle {:.12g} holds {} roots but λ vanishes "
                              "to order {}; tighten the root tolerance",
                              alpha, cluster.size(), order));
    }
    result.roots.push_back({alpha, order / 2});
  }

  std::sort(result.roots.begin(), result.roots.end(),
            [](const SpectralRoot& a, const SpectralRoot& b) { return a.angle < b.angle; });
  for (const auto& root : result.roots) {
    result.widom_coefficient += root.multiplicity * root.multiplicity / 4.0;
  }
  if (!result.roots.empty()) result.kind = SpectralKind::Singular;
  return result;
}

RegularPart::RegularPart(const CouplingSpec& spec, const SpectralClassification& classification) {
  require_1d(spec, "regular part");
  const auto p = laurent_coefficients(spec);
  deflated_.assign(p.begin(), p.end());
  int removed = 0;
  for (const auto& root : classification.roots) {
    const std::complex<double> a = std::polar(1.0, root.angle);
    for (int rep = 0; rep < 2 * root.multiplicity; ++rep) {
      // Synthetic division by (z - a); the remainder is discarded.
      const std::size_t degree = deflated_.size() - 1;
      std::vector<std::complex<double>> q(degree);
      q[degree - 1] = deflated_[degree];
      for (std::size_t i = degree - 1; i >= 1; --i) q[i - 1] = deflated_[i] + a * q[i];
      deflated_ = std::move(q);
    }
    // (z - a)(1/z - conj a) = -conj(a) (z - a)² / z on the unit circle.
    for (int rep = 0; rep < root.multiplicity; ++rep) scale_ /= -std::conj(a);
    removed += root.multiplicity;
  }
  shift_ = removed - (spec.range() - 1);
}

double RegularPart::operator()(double theta) const {
  const std::complex<double> z = std::polar(1.0, theta);
  std::complex<double> acc = 0.0;
  for (std::size_t i = deflated_.size(); i-- > 0;) acc = acc * z + deflated_[i];
  return (acc * std::pow(z, shift_) * scale_).real();
}

double regular_part_eval(const CouplingSpec& spec, const SpectralClassification& classification,
                         double theta) {
  return RegularPart(spec, classification)(theta);
}

SzegoCoefficients szego_coefficients(const CouplingSpec& spec, std::size_t order,
                                     const Tolerances& tolerances) {
  require_1d(spec, "szego_coefficients");
  const auto classification = classify(spec, tolerances);
  const RegularPart regular(spec, classification);

  const std::size_t m = std::max<std::size_t>(4096, 32 * order);
  std::vector<double> log_half(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double theta = kTwoPi * static_cast<double>(j) / static_cast<double>(m);
    log_half[j] = 0.5 * std::log(regular(theta));
  }
  std::vector<double> cosines(m);
  for (std::size_t p = 0; p < m; ++p) {
    cosines[p] = std::cos(kTwoPi * static_cast<double>(p) / static_cast<double>(m));
  }

  SzegoCoefficients out;
  out.order = order;
  out.singular = classification.singular();
  out.c.assign(order + 1, 0.0);
  for (std::size_t k = 0; k <= order; ++k) {
    double acc = 0.0;
    std::size_t phase = 0;
    for (std::size_t j = 0; j < m; ++j) {
      acc += log_half[j] * cosines[phase];
      phase = (phase + k) % m;
    }
    out.c[k] = acc / static_cast<double>(m);
    // ½ m_r ln(2 - 2cos(θ - α)) = -m_r Σ_{k≥1} cos(k(θ - α)) / k.
    if (k > 0) {
      for (const auto& root : classification.roots) {
        out.c[k] -= 0.5 * root.multiplicity * std::cos(static_cast<double>(k) * root.angle) /
                    static_cast<double>(k);
      }
    }
  }

  if (out.singular) {
    out.tail_estimate = std::numeric_limits<double>::infinity();
  } else if (order >= 2) {
    const auto decay = coefficient_decay(out, std::max<std::size_t>(1, order / 2), order);
    if (decay.amplitude == 0.0) {
      out.tail_estimate = 0.0;
    } else if (decay.rho >= 1.0) {
      out.tail_estimate = std::numeric_limits<double>::infinity();
    } else {
      // Σ_{k>K} k x^k = x^{K+1} ((K+1) - K x) / (1 - x)², x = ρ².
      const double x = decay.rho * decay.rho;
      const double kk = static_cast<double>(order);
      out.tail_estimate = decay.amplitude * decay.amplitude * std::pow(x, kk + 1.0) *
                          ((kk + 1.0) - kk * x) / ((1.0 - x) * (1.0 - x));
    }
  }
  return out;
}

double szego_lower_bound(const SzegoCoefficients& coefficients) {
  double sum = 0.0;
  for (std::size_t k = 1; k < coefficients.c.size(); ++k) {
    sum += static_cast<double>(k) * coefficients.c[k] * coefficients.c[k];
  }
  return sum + coefficients.tail_estimate;
}

GeometricDecay coefficient_decay(const SzegoCoefficients& coefficients, std::size_t from,
                                 std::size_t to) {
  to = std::min(to, coefficients.order);
  double peak = 0.0;
  for (double c : coefficients.c) peak = std::max(peak, std::abs(c));
  // Coefficients at the quadrature noise floor carry no decay information.
  const double floor = 1e-14 * std::max(peak, std::numeric_limits<double>::min());
  std::vector<double> ks, logs;
  for (std::size_t k = std::max<std::size_t>(from, 1); k <= to; ++k) {
    const double v = std::abs(coefficients.c[k]);
    if (v > floor) {
      ks.push_back(static_cast<double>(k));
      logs.push_back(std::log(v));
    }
  }
  GeometricDecay decay;
  if (ks.size() < 2) return decay;
  const auto fit = fit_line(ks, logs);
  decay.rho = std::exp(fit.slope);
  decay.amplitude = std::exp(fit.intercept);
  decay.r_squared = fit.r_squared;
  return decay;
}

}  // namespace harment
