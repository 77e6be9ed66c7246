#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "harment/entanglement.hpp"
#include "harment/kernel.hpp"
#include "harment/lattice.hpp"
#include "harment/scaling.hpp"
#include "harment/spectral.hpp"

namespace harment {

inline constexpr std::string_view kVersion = "1.0.0";

// Coupling documents:
//   {"dimension": d, "extents": [N_1, ...],
//    "coefficients": [{"lag": [k_1, ...], "value": v}, ...]}
// Lags may be listed on one side only; symmetry completion happens on load.
CouplingSpec parse_coupling_json(std::string_view text, const Tolerances& tolerances = {});
CouplingSpec load_coupling_file(const std::filesystem::path& path,
                                const Tolerances& tolerances = {});
std::string coupling_to_json(const CouplingSpec& spec);

/// {"kind": "...", "roots": [{"angle": a, "multiplicity": m}], "widom_coefficient": w}
std::string classification_json(const SpectralClassification& classification);

std::string report_json(const EntanglementReport& report);
/// N,N1,S,I,lower,upper,xi,decay_class
std::string report_csv_header();
std::string report_csv_row(const EntanglementReport& report);

/// lag,sqrt_value,inv_sqrt_value (lag_0..lag_{d-1} for d > 1).
std::string kernel_csv(const CirculantKernel& kernel);

/// sweep_id,N,N1,eta_or_spec_hash,S,I,lower,upper
std::string sweep_csv_header();
std::string sweep_csv_row(std::string_view sweep_id, std::string_view spec_label,
                          const EntanglementReport& report);
std::string fit_json(const ScalingFit& fit);

/// 64-bit FNV-1a, printed as 16 hex digits.
std::uint64_t fnv1a(std::string_view text);
std::string hash_hex(std::string_view text);
std::string spec_hash(const CouplingSpec& spec);

/// "# harment <version> config=<hash>" line for CSV outputs.
std::string provenance_comment(std::string_view config);

/// Shortest round-trip-stable text for a double ("inf" / "nan" spelled out).
std::string format_number(double value);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Self-contained SVG line plot with a legend.
std::string svg_line_plot(const std::vector<PlotSeries>& series, std::string_view title,
                          std::string_view x_label, std::string_view y_label);

void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace harment
