#include "harment/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "harment/error.hpp"
#include <nlohmann/json.hpp>

namespace harment {

using nlohmann::json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json report_to_json(const EntanglementReport& report) {
  json j;
  j["extents"] = report.extents;
  j["block"] = report.partition.extents;
  j["mu_spectrum"] = report.mu;
  j["entropy"] = report.entropy;
  j["mutual_information"] = report.mutual_information;
  j["det_lower_bound"] = report.det_lower_bound;
  j["negativity_upper_bound"] = report.negativity_upper_bound;
  j["szego_lower_bound"] =
      report.szego_lower_bound ? number_or_null(*report.szego_lower_bound) : json(nullptr);
  if (report.correlation) {
    const auto& c = *report.correlation;
    j["correlation"] = {{"xi", number_or_null(c.xi)},
                        {"decay_class", std::string(to_string(c.decay_class))},
                        {"fit_window", {c.window_begin, c.window_end}},
                        {"fit_residual", c.fit_residual}};
  } else {
    j["correlation"] = nullptr;
  }
  return j;
}

}  // namespace

CouplingSpec parse_coupling_json(std::string_view text, const Tolerances& tolerances) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("malformed coupling JSON: {}", e.what()));
  }
  try {
    const int dimension = doc.at("dimension").get<int>();
    auto extents = doc.at("extents").get<std::vector<std::size_t>>();
    std::vector<CouplingTerm> terms;
    for (const auto& entry : doc.at("coefficients")) {
      terms.push_back({entry.at("lag").get<std::vector<int>>(), entry.at("value").get<double>()});
    }
    return build_coupling(dimension, std::move(extents), terms, tolerances);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("invalid coupling document: {}", e.what()));
  }
}

CouplingSpec load_coupling_file(const std::filesystem::path& path, const Tolerances& tolerances) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, fmt::format("cannot read {}", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_coupling_json(buffer.str(), tolerances);
}

std::string coupling_to_json(const CouplingSpec& spec) {
  json doc;
  doc["dimension"] = spec.dimension();
  doc["extents"] = std::vector<std::size_t>(spec.extents().begin(), spec.extents().end());
  doc["coefficients"] = json::array();
  for (const auto& term : spec.terms()) {
    doc["coefficients"].push_back({{"lag", term.lag}, {"value", term.value}});
  }
  return doc.dump();
}

std::string classification_json(const SpectralClassification& classification) {
  json doc;
  doc["kind"] = classification.singular() ? "Singular" : "Regular";
  doc["roots"] = json::array();
  for (const auto& root : classification.roots) {
    doc["roots"].push_back({{"angle", root.angle}, {"multiplicity", root.multiplicity}});
  }
  doc["widom_coefficient"] = classification.widom_coefficient;
  return doc.dump();
}

std::string report_json(const EntanglementReport& report) { return report_to_json(report).dump(); }

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return fmt::format("{:.12g}", value);
}

namespace {

std::string joined(const std::vector<std::size_t>& values, char sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(values[i]);
  }
  return out;
}

}  // namespace

std::string report_csv_header() { return "N,N1,S,I,lower,upper,xi,decay_class"; }

std::string report_csv_row(const EntanglementReport& report) {
  std::string xi = "nan";
  std::string decay = "NA";
  if (report.correlation) {
    xi = format_number(report.correlation->xi);
    decay = std::string(to_string(report.correlation->decay_class));
  }
  return fmt::format("{},{},{},{},{},{},{},{}", joined(report.extents, 'x'),
                     joined(report.partition.extents, 'x'), format_number(report.entropy),
                     format_number(report.mutual_information),
                     format_number(report.det_lower_bound),
                     format_number(report.negativity_upper_bound), xi, decay);
}

std::string kernel_csv(const CirculantKernel& kernel) {
  const auto& lattice = kernel.lattice();
  const int d = lattice.dimension();
  std::string out;
  if (d == 1) {
    out += "lag,sqrt_value,inv_sqrt_value\n";
  } else {
    for (int axis = 0; axis < d; ++axis) out += fmt::format("lag_{},", axis);
    out += "sqrt_value,inv_sqrt_value\n";
  }
  for (std::size_t k = 0; k < lattice.site_count(); ++k) {
    for (auto c : lattice.coordinates(k)) out += fmt::format("{},", c);
    out += fmt::format("{},{}\n", format_number(kernel.sqrt_row()[k]),
                       format_number(kernel.inv_sqrt_row()[k]));
  }
  return out;
}

std::string sweep_csv_header() { return "sweep_id,N,N1,eta_or_spec_hash,S,I,lower,upper"; }

std::string sweep_csv_row(std::string_view sweep_id, std::string_view spec_label,
                          const EntanglementReport& report) {
  return fmt::format("{},{},{},{},{},{},{},{}", sweep_id, joined(report.extents, 'x'),
                     joined(report.partition.extents, 'x'), spec_label,
                     format_number(report.entropy), format_number(report.mutual_information),
                     format_number(report.det_lower_bound),
                     format_number(report.negativity_upper_bound));
}

std::string fit_json(const ScalingFit& fit) {
  json doc;
  doc["model"] = std::string(to_string(fit.model));
  doc["slope"] = number_or_null(fit.slope);
  doc["intercept"] = number_or_null(fit.intercept);
  doc["slope_stderr"] = number_or_null(fit.slope_stderr);
  doc["saturation_value"] = number_or_null(fit.saturation_value);
  doc["r_squared"] = number_or_null(fit.r_squared);
  doc["max_residual"] = number_or_null(fit.max_residual);
  doc["x_range"] = {fit.x_min, fit.x_max};
  return doc.dump();
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hash_hex(std::string_view text) { return fmt::format("{:016x}", fnv1a(text)); }

std::string spec_hash(const CouplingSpec& spec) { return hash_hex(coupling_to_json(spec)); }

std::string provenance_comment(std::string_view config) {
  return fmt::format("# harment {} config={}", kVersion, hash_hex(config));
}

std::string svg_line_plot(const std::vector<PlotSeries>& series, std::string_view title,
                          std::string_view x_label, std::string_view y_label) {
  constexpr double kWidth = 640, kHeight = 420;
  constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 60;
  constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                     "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, s.y[i]);
      y_hi = std::max(y_hi, s.y[i]);
    }
  }
  if (!std::isfinite(x_lo)) x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  y_lo = std::min(y_lo, 0.0);
  if (x_hi <= x_lo) x_hi = x_lo + 1;
  if (y_hi <= y_lo) y_hi = y_lo + 1;

  const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * plot_w; };
  auto py = [&](double y) { return kTop + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h; };

  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{3}</text>\n",
      kWidth, kHeight, kLeft + plot_w / 2, title);
  out += fmt::format(
      "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n"
      "<line x1=\"{0}\" y1=\"{3}\" x2=\"{0}\" y2=\"{1}\" stroke=\"black\"/>\n",
      kLeft, kTop + plot_h, kLeft + plot_w, kTop);
  for (int t = 0; t <= 5; ++t) {
    const double xv = x_lo + (x_hi - x_lo) * t / 5.0;
    const double yv = y_lo + (y_hi - y_lo) * t / 5.0;
    out += fmt::format(
        "<line x1=\"{0:.2f}\" y1=\"{1}\" x2=\"{0:.2f}\" y2=\"{2}\" stroke=\"black\"/>"
        "<text x=\"{0:.2f}\" y=\"{3}\" text-anchor=\"middle\">{4:.3g}</text>\n",
        px(xv), kTop + plot_h, kTop + plot_h + 5, kTop + plot_h + 20, xv);
    out += fmt::format(
        "<line x1=\"{0}\" y1=\"{1:.2f}\" x2=\"{2}\" y2=\"{1:.2f}\" stroke=\"black\"/>"
        "<text x=\"{3}\" y=\"{4:.2f}\" text-anchor=\"end\">{5:.3g}</text>\n",
        kLeft - 5, py(yv), kLeft, kLeft - 8, py(yv) + 4, yv);
  }
  out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                     kLeft + plot_w / 2, kHeight - 15, x_label);
  out += fmt::format(
      "<text x=\"18\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0})\">{1}</text>\n",
      kTop + plot_h / 2, y_label);

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % std::size(kColors)];
    out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"", color);
    for (std::size_t i = 0; i < series[s].x.size(); ++i) {
      out += fmt::format("{}{:.2f},{:.2f}", i ? " " : "", px(series[s].x[i]), py(series[s].y[i]));
    }
    out += "\"/>\n";
    const double ly = kTop + 10 + 20.0 * static_cast<double>(s);
    out += fmt::format(
        "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>"
        "<text x=\"{4}\" y=\"{5}\">{6}</text>\n",
        kLeft + plot_w + 15, ly, kLeft + plot_w + 40, color, kLeft + plot_w + 45, ly + 4,
        series[s].label);
  }
  out += "</svg>\n";
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, fmt::format("cannot write {}", path.string()));
  out << text;
  if (!out) throw Error(ErrorKind::Io, fmt::format("write to {} failed", path.string()));
}

}  // namespace harment
