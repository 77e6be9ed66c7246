#include "harment/scaling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iostream>
#include <mutex>
#include <numbers>
#include <optional>
#include <thread>

#include <fmt/format.h>

#include "harment/fit.hpp"
#include "harment/kernel.hpp"
#include "linalg.hpp"

namespace harment {

namespace {

// Runs body(i) for i in [0, count) on up to `threads` workers and rethrows
// the first exception.
template <class Body>
void parallel_for(std::size_t count, std::size_t threads, Body&& body) {
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

void default_skip(std::size_t size, const Error& error) {
  std::clog << fmt::format("skipping size {}: {}\n", size, error.what());
}

std::optional<CouplingSpec> try_build(const SpecBuilder& builder, std::size_t n,
                                      const std::function<void(std::size_t, const Error&)>& on_skip) {
  try {
    return builder(n);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotPositive) throw;
    (on_skip ? on_skip : default_skip)(n, e);
    return std::nullopt;
  }
}

}  // namespace

std::string_view to_string(FitModel model) {
  switch (model) {
    case FitModel::LogGrowth: return "LogGrowth";
    case FitModel::Saturation: return "Saturation";
    case FitModel::Linear: return "Linear";
  }
  return "Unknown";
}

ScalingFit fit_log_growth(std::span<const double> x, std::span<const double> y) {
  std::vector<double> logs(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0)) throw Error(ErrorKind::InvalidArgument, "log fit needs positive x");
    logs[i] = std::log(x[i]);
  }
  const auto line = fit_line(logs, y);
  ScalingFit fit;
  fit.model = FitModel::LogGrowth;
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.slope_stderr = line.slope_stderr;
  fit.r_squared = line.r_squared;
  fit.max_residual = line.max_residual;
  fit.x_min = *std::min_element(x.begin(), x.end());
  fit.x_max = *std::max_element(x.begin(), x.end());
  return fit;
}

ScalingFit fit_linear(std::span<const double> x, std::span<const double> y) {
  const auto line = fit_line(x, y);
  ScalingFit fit;
  fit.model = FitModel::Linear;
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.slope_stderr = line.slope_stderr;
  fit.r_squared = line.r_squared;
  fit.max_residual = line.max_residual;
  fit.x_min = *std::min_element(x.begin(), x.end());
  fit.x_max = *std::max_element(x.begin(), x.end());
  return fit;
}

ScalingFit fit_saturation(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || x.size() != y.size()) {
    throw Error(ErrorKind::InvalidArgument, "saturation fit needs matching non-empty data");
  }
  const auto last = static_cast<std::size_t>(std::max_element(x.begin(), x.end()) - x.begin());
  ScalingFit fit;
  fit.model = FitModel::Saturation;
  fit.saturation_value = y[last];
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double sse = 0.0, sst = 0.0;
  for (double v : y) {
    fit.max_residual = std::max(fit.max_residual, std::abs(v - fit.saturation_value));
    sse += (v - fit.saturation_value) * (v - fit.saturation_value);
    sst += (v - mean) * (v - mean);
  }
  fit.r_squared = sst > 0.0 ? std::clamp(1.0 - sse / sst, 0.0, 1.0) : 1.0;
  fit.x_min = *std::min_element(x.begin(), x.end());
  fit.x_max = x[last];
  return fit;
}

double ring_chord_length(std::size_t n1, std::size_t n) {
  const double nn = static_cast<double>(n);
  return nn / std::numbers::pi * std::sin(std::numbers::pi * static_cast<double>(n1) / nn);
}

std::size_t half_block(std::size_t n) { return n % 2 == 1 ? (n - 1) / 2 : n / 2; }

std::vector<EntanglementReport> entropy_sweep(const SpecBuilder& builder,
                                              std::span<const std::size_t> sizes,
                                              const PartitionRule& rule,
                                              const SweepOptions& options) {
  if (!std::is_sorted(sizes.begin(), sizes.end())) {
    throw Error(ErrorKind::InvalidArgument, "sweep sizes must be ascending");
  }

  // Specs are cheap to build; do it up front so skips are reported in order.
  struct Job {
    std::size_t kernel_slot;
    std::size_t block;
  };
  std::vector<CouplingSpec> specs;
  std::vector<Job> jobs;
  if (rule.kind == PartitionRule::Kind::FixedNVaryBlock) {
    specs.push_back(builder(rule.fixed_n));
    if (specs.front().dimension() != 1) {
      throw Error(ErrorKind::InvalidArgument, "block sweeps are defined for 1D rings");
    }
    for (auto n1 : sizes) jobs.push_back({0, n1});
  } else {
    for (auto n : sizes) {
      if (auto spec = try_build(builder, n, options.on_skip)) {
        if (spec->dimension() != 1) {
          throw Error(ErrorKind::InvalidArgument, "half/half sweeps are defined for 1D rings");
        }
        specs.push_back(std::move(*spec));
        jobs.push_back({specs.size() - 1, half_block(n)});
      }
    }
  }
  if (jobs.empty()) return {};

  std::optional<double> szego;
  if (options.with_szego) {
    const auto classification = classify(specs.front(), options.tolerances);
    if (!classification.singular()) {
      szego = szego_lower_bound(
          szego_coefficients(specs.front(), options.szego_order, options.tolerances));
    }
  }

  std::vector<std::optional<CirculantKernel>> kernels(specs.size());
  parallel_for(specs.size(), options.threads,
               [&](std::size_t i) { kernels[i] = build_kernel(specs[i], options.tolerances); });

  ReportOptions report_options;
  report_options.tolerances = options.tolerances;
  report_options.szego_lower_bound = szego;
  report_options.with_correlation = options.with_correlation;

  std::vector<std::optional<EntanglementReport>> reports(jobs.size());
  std::vector<bool> done(jobs.size(), false);
  std::size_t emitted = 0;
  std::mutex emit_mutex;
  parallel_for(jobs.size(), options.threads, [&](std::size_t i) {
    reports[i] = entanglement_report(*kernels[jobs[i].kernel_slot],
                                     Partition::block(jobs[i].block), report_options);
    std::lock_guard lock(emit_mutex);
    done[i] = true;
    while (emitted < jobs.size() && done[emitted]) {
      if (options.on_report) options.on_report(*reports[emitted]);
      ++emitted;
    }
  });

  std::vector<EntanglementReport> out;
  out.reserve(reports.size());
  for (auto& r : reports) out.push_back(std::move(*r));
  return out;
}

double root_grid_offset(std::size_t n, const SpectralClassification& classification) {
  double offset = 0.5;
  for (const auto& root : classification.roots) {
    const double x = root.angle * static_cast<double>(n) / (2.0 * std::numbers::pi);
    offset = std::min(offset, std::abs(x - std::round(x)));
  }
  return offset;
}

std::size_t off_resonant_size(std::size_t n, const SpectralClassification& classification,
                              double min_offset) {
  const std::size_t start = n % 2 == 1 ? n : n + 1;
  std::size_t best = start;
  double best_offset = root_grid_offset(start, classification);
  for (std::size_t d = 0; d <= n / 4; d += 2) {
    for (std::size_t candidate : {start + d, start >= d + 5 ? start - d : std::size_t{0}}) {
      if (candidate < 5) continue;
      const double offset = root_grid_offset(candidate, classification);
      if (offset >= min_offset) return candidate;
      if (offset > best_offset) {
        best = candidate;
        best_offset = offset;
      }
    }
  }
  return best;
}

WidomSlopeResult widom_slope(const SpecBuilder& builder, std::span<const std::size_t> sizes,
                             const WidomOptions& options) {
  if (sizes.size() < 6) {
    throw Error(ErrorKind::InvalidArgument, "widom_slope needs at least 6 sizes");
  }
  const auto [lo, hi] = std::minmax_element(sizes.begin(), sizes.end());
  if (*hi < 8 * *lo) {
    throw Error(ErrorKind::InvalidArgument, "widom_slope sizes must span a factor of 8");
  }

  WidomSlopeResult result;
  std::optional<CouplingSpec> probe;
  for (auto n : sizes) {
    if ((probe = try_build(builder, n, options.on_skip))) break;
  }
  if (!probe) throw Error(ErrorKind::NotPositive, "no size in the sweep yields a valid spec");
  result.classification = classify(*probe, options.tolerances);
  result.expected = result.classification.widom_coefficient;

  std::vector<std::size_t> targets;
  for (auto n : sizes) {
    std::size_t used = n;
    if (options.avoid_resonance) {
      used = off_resonant_size(n, result.classification, options.min_root_offset);
    } else if (n % 2 == 0) {
      throw Error(ErrorKind::InvalidArgument, "half/half Widom sweeps need odd N");
    }
    if (targets.empty() || used > targets.back()) targets.push_back(used);
  }

  std::vector<std::optional<double>> values(targets.size());
  std::vector<std::optional<CouplingSpec>> specs(targets.size());
  for (std::size_t i = 0; i < targets.size(); ++i) {
    specs[i] = try_build(builder, targets[i], options.on_skip);
  }
  parallel_for(targets.size(), options.threads, [&](std::size_t i) {
    if (!specs[i]) return;
    const auto kernel = build_kernel(*specs[i], options.tolerances);
    values[i] = mutual_information(kernel, Partition::block(half_block(targets[i])),
                                   options.tolerances)
                    .value();
  });

  std::vector<double> xs;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (!values[i]) continue;
    result.sizes.push_back(targets[i]);
    result.mutual_information.push_back(*values[i]);
    xs.push_back(static_cast<double>(targets[i]));
  }
  if (xs.size() < 2) throw Error(ErrorKind::InvalidArgument, "too few usable sizes to fit");
  result.fit = fit_log_growth(xs, result.mutual_information);
  return result;
}

namespace {

std::vector<double> det_excess(const CirculantKernel& kernel, std::span<const std::size_t> blocks,
                               double c0) {
  std::vector<double> excess;
  for (auto n1 : blocks) {
    const auto inner = inner_sites(kernel.lattice(), Partition::block(n1));
    const auto d = gather_block(kernel.lattice(), kernel.sqrt_row(), inner, inner);
    excess.push_back(detail::log_det_spd(d, "D") - c0 * static_cast<double>(n1));
  }
  return excess;
}

}  // namespace

DetCheckResult szego_det_check(const CouplingSpec& spec, std::span<const std::size_t> block_sizes,
                               std::size_t order, const Tolerances& tolerances) {
  if (block_sizes.empty()) throw Error(ErrorKind::InvalidArgument, "no block sizes given");
  const auto classification = classify(spec, tolerances);
  if (classification.singular()) {
    throw Error(ErrorKind::InvalidArgument, "szego_det_check requires a regular spectral function");
  }
  const auto coefficients = szego_coefficients(spec, order, tolerances);
  DetCheckResult result;
  result.c0 = coefficients.c[0];
  result.expected = szego_lower_bound(coefficients);
  result.block_sizes.assign(block_sizes.begin(), block_sizes.end());
  result.excess = det_excess(build_kernel(spec, tolerances), block_sizes, result.c0);
  std::vector<double> xs(block_sizes.begin(), block_sizes.end());
  result.fit = fit_saturation(xs, result.excess);
  return result;
}

DetCheckResult widom_det_check(const CouplingSpec& spec, std::span<const std::size_t> block_sizes,
                               const Tolerances& tolerances) {
  if (block_sizes.size() < 2) throw Error(ErrorKind::InvalidArgument, "need >= 2 block sizes");
  const auto max_block = *std::max_element(block_sizes.begin(), block_sizes.end());
  if (spec.dimension() != 1 || spec.site_count() < 8 * max_block) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("widom_det_check needs a 1D ring with N >= 8 * {}", max_block));
  }
  const auto classification = classify(spec, tolerances);
  DetCheckResult result;
  result.expected = classification.widom_coefficient;
  result.c0 = szego_coefficients(spec, 0, tolerances).c[0];
  result.block_sizes.assign(block_sizes.begin(), block_sizes.end());
  result.excess = det_excess(build_kernel(spec, tolerances), block_sizes, result.c0);

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < block_sizes.size(); ++i) {
    if (block_sizes[i] >= 8) {
      xs.push_back(static_cast<double>(block_sizes[i]));
      ys.push_back(result.excess[i]);
    }
  }
  if (xs.size() < 2) {
    xs.assign(block_sizes.begin(), block_sizes.end());
    ys = result.excess;
  }
  result.fit = fit_log_growth(xs, ys);
  return result;
}

AreaLawResult area_law_2d(const CouplingSpec& spec, std::span<const std::size_t> block_sizes,
                          std::size_t threads, const Tolerances& tolerances) {
  if (spec.dimension() != 2) {
    throw Error(ErrorKind::InvalidArgument, "area_law_2d requires a 2D spec");
  }
  for (auto n : block_sizes) {
    if (n == 0 || 4 * n > spec.extents()[0] || 4 * n > spec.extents()[1]) {
      throw Error(ErrorKind::InvalidArgument,
                  fmt::format("block {}x{} needs a torus of at least {} per axis", n, n, 4 * n));
    }
  }
  AreaLawResult result;
  constexpr int kGrid = 256;
  double min_lambda = std::numeric_limits<double>::infinity();
  double max_lambda = 0.0;
  for (int a = 0; a < kGrid; ++a) {
    for (int b = 0; b < kGrid; ++b) {
      const double theta[2] = {2.0 * std::numbers::pi * a / kGrid,
                               2.0 * std::numbers::pi * b / kGrid};
      const double value = spectral_eval(spec, theta);
      min_lambda = std::min(min_lambda, value);
      max_lambda = std::max(max_lambda, value);
    }
  }
  result.has_reference = min_lambda > tolerances.root * max_lambda;

  const auto kernel = build_kernel(spec, tolerances);
  result.rows.resize(block_sizes.size());
  parallel_for(block_sizes.size(), threads, [&](std::size_t i) {
    const auto n = block_sizes[i];
    const double s = entropy(kernel, Partition{{n, n}}, tolerances).entropy;
    result.rows[i] = {n, s, s / (4.0 * static_cast<double>(n))};
  });
  return result;
}

}  // namespace harment
