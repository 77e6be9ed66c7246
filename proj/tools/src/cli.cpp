#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <span>
#include <thread>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "harment/entanglement.hpp"
#include "harment/error.hpp"
#include "harment/io.hpp"
#include "harment/kernel.hpp"
#include "harment/lattice.hpp"
#include "harment/scaling.hpp"
#include "harment/spectral.hpp"
#include <nlohmann/json.hpp>

namespace harment::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr std::size_t kSzegoOrder = 200;
constexpr double kFitMinBlock = 8.0;

struct SpecSource {
  std::optional<double> eta;
  std::optional<std::size_t> n;
  std::string spec_path;
  std::vector<std::string> tol_overrides;
};

struct SizeRange {
  std::size_t first = 0, last = 0, step = 1;
  std::vector<std::size_t> values() const {
    std::vector<std::size_t> out;
    for (std::size_t v = first; v <= last; v += step) out.push_back(v);
    return out;
  }
};

SizeRange parse_sizes(const std::string& text) {
  SizeRange r;
  std::vector<std::size_t> parts;
  std::size_t pos = 0;
  try {
    while (pos <= text.size()) {
      const auto colon = text.find(':', pos);
      const auto piece = text.substr(pos, colon == std::string::npos ? std::string::npos : colon - pos);
      std::size_t used = 0;
      parts.push_back(std::stoul(piece, &used));
      if (used != piece.size()) throw std::invalid_argument(piece);
      if (colon == std::string::npos) break;
      pos = colon + 1;
    }
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("--sizes '{}' is not a:b[:step]", text));
  }
  if (parts.size() < 2 || parts.size() > 3 || parts[0] == 0 || parts[0] > parts[1] ||
      (parts.size() == 3 && parts[2] == 0)) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("--sizes '{}' is not a:b[:step]", text));
  }
  r.first = parts[0];
  r.last = parts[1];
  if (parts.size() == 3) r.step = parts[2];
  return r;
}

Tolerances parse_tolerances(const std::vector<std::string>& overrides) {
  Tolerances tol;
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::InvalidArgument,
                  fmt::format("--tol-override '{}' is not name=value", item));
    }
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::InvalidArgument,
                  fmt::format("--tol-override '{}' has a non-numeric value", item));
    }
    tol.set(item.substr(0, eq), value);
  }
  return tol;
}

void check_single_source(const SpecSource& src) {
  if (src.eta.has_value() == !src.spec_path.empty()) {
    throw Error(ErrorKind::InvalidArgument, "give exactly one of --eta or --spec");
  }
}

// Ring-size builder for either source; JSON specs must be 1D to be resized.
SpecBuilder make_builder(const SpecSource& src, const Tolerances& tol) {
  check_single_source(src);
  if (src.eta) {
    const double eta = *src.eta;
    return [eta, tol](std::size_t n) { return build_eta_chain({eta, n}, tol); };
  }
  const auto base = load_coupling_file(src.spec_path, tol);
  return [base, tol](std::size_t n) {
    if (base.dimension() != 1) {
      throw Error(ErrorKind::InvalidArgument, "only 1D JSON specs can be resized with --n/--sizes");
    }
    return with_extents(base, {n}, tol);
  };
}

CouplingSpec load_spec(const SpecSource& src, const Tolerances& tol) {
  check_single_source(src);
  if (src.eta) {
    if (!src.n) throw Error(ErrorKind::InvalidArgument, "--eta needs --n");
    return build_eta_chain({*src.eta, *src.n}, tol);
  }
  const auto spec = load_coupling_file(src.spec_path, tol);
  if (src.n) return make_builder(src, tol)(*src.n);
  return spec;
}

std::string source_label(const SpecSource& src, const CouplingSpec& spec) {
  return src.eta ? format_number(*src.eta) : spec_hash(spec);
}

std::size_t thread_budget() {
  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HARM_ENT_THREADS")) {
    try {
      const auto cap = std::stoul(env);
      if (cap > 0) threads = std::min<std::size_t>(threads, cap);
    } catch (const std::logic_error&) {
      // Unparseable cap: keep the hardware default.
    }
  }
  return threads;
}

Partition parse_block(const std::string& text, int dimension) {
  Partition p;
  std::size_t pos = 0;
  try {
    while (pos <= text.size()) {
      const auto sep = text.find_first_of("x,", pos);
      p.extents.push_back(std::stoul(text.substr(pos, sep == std::string::npos ? sep : sep - pos)));
      if (sep == std::string::npos) break;
      pos = sep + 1;
    }
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::InvalidArgument, fmt::format("--n1 '{}' is not a block size", text));
  }
  if (p.extents.size() == 1 && dimension > 1) p.extents.assign(dimension, p.extents.front());
  return p;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorKind::Io, fmt::format("cannot create output directory {}", dir.string()));
  }
}

// The config hash covers every argument except the output location, so a
// rerun into another directory yields byte-identical files.
std::string config_key(const std::vector<std::string>& args) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out") {
      ++i;
      continue;
    }
    if (args[i].starts_with("--out=")) continue;
    if (!out.empty()) out += ' ';
    out += args[i];
  }
  return out;
}

json parsed_fit(const ScalingFit& fit) { return json::parse(fit_json(fit)); }

std::optional<double> regular_szego_bound(const CouplingSpec& spec, const Tolerances& tol) {
  if (spec.dimension() != 1 || classify(spec, tol).singular()) return std::nullopt;
  return szego_lower_bound(szego_coefficients(spec, kSzegoOrder, tol));
}

int cmd_classify(const SpecSource& src, std::ostream& out) {
  const auto tol = parse_tolerances(src.tol_overrides);
  const auto spec = load_spec(src, tol);
  out << classification_json(classify(spec, tol)) << '\n';
  return kOk;
}

int cmd_report(const SpecSource& src, const std::string& n1, const std::string& out_dir, bool as_json,
               const std::string& config, std::ostream& out) {
  const auto tol = parse_tolerances(src.tol_overrides);
  const auto spec = load_spec(src, tol);
  const auto partition = parse_block(n1, spec.dimension());
  ReportOptions options;
  options.tolerances = tol;
  options.szego_lower_bound = regular_szego_bound(spec, tol);
  const auto report = entanglement_report(build_kernel(spec, tol), partition, options);

  const std::string csv = provenance_comment(config) + '\n' + report_csv_header() + '\n' +
                          report_csv_row(report) + '\n';
  const std::string doc = report_json(report) + '\n';
  out << (as_json ? doc : csv);
  if (!out_dir.empty()) {
    ensure_directory(out_dir);
    write_text_file(fs::path(out_dir) / "report.csv", csv);
    write_text_file(fs::path(out_dir) / "report.json", doc);
  }
  return kOk;
}

int cmd_kernel(const SpecSource& src, const std::string& out_dir, const std::string& config,
               std::ostream& out) {
  const auto tol = parse_tolerances(src.tol_overrides);
  const auto text = provenance_comment(config) + '\n' + kernel_csv(build_kernel(load_spec(src, tol), tol));
  if (out_dir.empty()) {
    out << text;
  } else {
    ensure_directory(out_dir);
    write_text_file(fs::path(out_dir) / "kernel.csv", text);
  }
  return kOk;
}

int cmd_sweep(const SpecSource& src, const std::string& sizes_text, const std::string& out_dir,
              const std::string& config, std::ostream& out, std::ostream& err) {
  const auto tol = parse_tolerances(src.tol_overrides);
  const auto builder = make_builder(src, tol);
  const auto sizes = parse_sizes(sizes_text).values();
  const bool fixed_ring = src.n.has_value();
  const auto rule = fixed_ring ? PartitionRule::vary_block(*src.n) : PartitionRule::half_half();

  SweepOptions options;
  options.threads = thread_budget();
  options.tolerances = tol;
  options.on_skip = [&err](std::size_t n, const Error& e) {
    err << fmt::format("skipping N={}: {}\n", n, e.what());
  };
  const auto reports = entropy_sweep(builder, sizes, rule, options);
  if (reports.empty()) throw Error(ErrorKind::InvalidArgument, "no usable sizes in the sweep");

  const std::string sweep_id = "sweep-" + hash_hex(config).substr(0, 8);
  const std::string label = source_label(src, builder(reports.front().extents[0]));
  std::string csv = provenance_comment(config) + '\n' + sweep_csv_header() + '\n';
  std::vector<double> x, s, mi;
  for (const auto& r : reports) {
    csv += sweep_csv_row(sweep_id, label, r) + '\n';
    x.push_back(fixed_ring ? ring_chord_length(r.partition.extents[0], r.extents[0])
                           : static_cast<double>(r.extents[0]));
    s.push_back(r.entropy);
    mi.push_back(r.mutual_information);
  }

  json fits;
  fits["sweep_id"] = sweep_id;
  fits["partition"] = fixed_ring ? "fixed_ring_vary_block" : "half_half";
  fits["x"] = fixed_ring ? "chord_length" : "N";
  if (x.size() >= 2) {
    fits["entropy_log_fit"] = parsed_fit(fit_log_growth(x, s));
    fits["mutual_information_log_fit"] = parsed_fit(fit_log_growth(x, mi));
    fits["entropy_saturation"] = parsed_fit(fit_saturation(x, s));
  }
  if (out_dir.empty()) {
    out << csv;
  } else {
    ensure_directory(out_dir);
    write_text_file(fs::path(out_dir) / "sweep.csv", csv);
    write_text_file(fs::path(out_dir) / "sweep_fit.json", fits.dump(2) + '\n');
    out << fmt::format("wrote {} rows to {}\n", reports.size(), (fs::path(out_dir) / "sweep.csv").string());
  }
  return kOk;
}

struct Fig1Curve {
  double eta;
  std::vector<EntanglementReport> reports;
};

int cmd_fig1(const std::vector<double>& etas, std::size_t n, const std::string& sizes_text,
             const std::string& out_dir, const std::vector<std::string>& tol_overrides,
             const std::string& config, std::ostream& out, std::ostream& err) {
  const auto tol = parse_tolerances(tol_overrides);
  const auto sizes = parse_sizes(sizes_text).values();
  ensure_directory(out_dir);

  SweepOptions options;
  options.threads = thread_budget();
  options.tolerances = tol;

  std::vector<Fig1Curve> curves;
  for (double eta : etas) {
    std::vector<EntanglementReport> reports;
    try {
      reports = entropy_sweep([&](std::size_t m) { return build_eta_chain({eta, m}, tol); }, sizes,
                              PartitionRule::vary_block(n), options);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotPositive) throw;
      err << fmt::format("skipping eta={}: {}\n", format_number(eta), e.what());
      continue;
    }
    curves.push_back({eta, std::move(reports)});
  }

  std::vector<PlotSeries> series;
  json fits = json::array();
  for (const auto& curve : curves) {
    const auto label = format_number(curve.eta);
    std::string csv = provenance_comment(config) + '\n' + sweep_csv_header() + '\n';
    PlotSeries ps{fmt::format("eta = {}", label), {}, {}};
    std::vector<double> chord;
    for (const auto& r : curve.reports) {
      csv += sweep_csv_row("fig1", label, r) + '\n';
      ps.x.push_back(static_cast<double>(r.partition.extents[0]));
      ps.y.push_back(r.entropy);
      chord.push_back(ring_chord_length(r.partition.extents[0], n));
    }
    write_text_file(fs::path(out_dir) / fmt::format("fig1_eta_{}.csv", label), csv);

    // Flags: strictly increasing everywhere; saturated when S barely moves
    // over the last three quarters of the block range.
    const auto& y = ps.y;
    bool increasing = y.size() >= 2;
    for (std::size_t i = 1; i < y.size(); ++i) increasing = increasing && y[i] > y[i - 1];
    const double top = ps.x.back();
    std::size_t quarter = 0;
    while (quarter + 1 < ps.x.size() && ps.x[quarter] < top / 4) ++quarter;
    const double spread = std::abs(y.back() - y[quarter]);
    const bool saturated = spread < 0.01;
    // Log fit skips the smallest blocks, where lattice-scale terms dominate.
    std::size_t fit_from = 0;
    while (fit_from < ps.x.size() && ps.x[fit_from] < kFitMinBlock) ++fit_from;
    if (ps.x.size() - fit_from < 3) fit_from = 0;
    const auto log_fit = fit_log_growth(std::span(chord).subspan(fit_from),
                                        std::span(y).subspan(fit_from));
    out << fmt::format("eta={} increasing={} saturated={} log_fit_r2={:.6f} S_max={:.9g}\n", label,
                       increasing, saturated, log_fit.r_squared, y.back());
    fits.push_back({{"eta", curve.eta},
                    {"increasing", increasing},
                    {"saturated", saturated},
                    {"saturation_spread", spread},
                    {"entropy_log_fit", parsed_fit(log_fit)}});
    series.push_back(std::move(ps));
  }
  write_text_file(fs::path(out_dir) / "fig1.svg",
                  svg_line_plot(series, fmt::format("Block entropy on a ring of N = {}", n),
                                "block size N1", "S (nats)"));
  write_text_file(fs::path(out_dir) / "fig1_fit.json", fits.dump(2) + '\n');
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement and criticality of harmonic lattices"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  SpecSource src;
  std::string n1, out_dir, sizes;
  bool as_json = false;

  auto add_source = [&](CLI::App* cmd) {
    cmd->add_option("--eta", src.eta, "η of the nearest-neighbour chain (V = TᵀT)");
    cmd->add_option("--n", src.n, "ring size");
    cmd->add_option("--spec", src.spec_path, "coupling JSON file");
    cmd->add_option("--tol-override", src.tol_overrides, "name=value, repeatable");
  };

  auto* classify_cmd = app.add_subcommand("classify", "regular/singular verdict as JSON");
  add_source(classify_cmd);

  auto* report_cmd = app.add_subcommand("report", "entanglement report for one block");
  add_source(report_cmd);
  report_cmd->add_option("--n1", n1, "block size (N1, or AxB for 2D)")->required();
  report_cmd->add_option("--out", out_dir, "also write report.csv and report.json here");
  report_cmd->add_flag("--json", as_json, "print JSON instead of CSV");

  auto* sweep_cmd = app.add_subcommand("sweep", "half/half sweep over ring sizes, or blocks at fixed --n");
  add_source(sweep_cmd);
  sweep_cmd->add_option("--sizes", sizes, "a:b[:step]")->required();
  sweep_cmd->add_option("--out", out_dir, "write sweep.csv and sweep_fit.json here");

  auto* kernel_cmd = app.add_subcommand("kernel", "first rows of V^{1/2} and V^{-1/2} as CSV");
  add_source(kernel_cmd);
  kernel_cmd->add_option("--out", out_dir, "write kernel.csv here");

  std::vector<double> fig_etas{0.2, 0.6, 1.2, 1.6};
  std::size_t fig_n = 512;
  std::string fig_sizes = "2:128";
  std::string fig_out = "fig1";
  auto* fig_cmd = app.add_subcommand("fig1", "S against block size for several η on one ring");
  fig_cmd->add_option("--eta", fig_etas, "η values")->capture_default_str();
  fig_cmd->add_option("--n", fig_n, "ring size")->capture_default_str();
  fig_cmd->add_option("--sizes", fig_sizes, "block sizes a:b[:step]")->capture_default_str();
  fig_cmd->add_option("--out", fig_out, "output directory")->capture_default_str();
  fig_cmd->add_option("--tol-override", src.tol_overrides, "name=value, repeatable");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kSpecError;
  }

  const std::string config = config_key(args);
  try {
    if (*classify_cmd) return cmd_classify(src, out);
    if (*report_cmd) return cmd_report(src, n1, out_dir, as_json, config, out);
    if (*sweep_cmd) return cmd_sweep(src, sizes, out_dir, config, out, err);
    if (*kernel_cmd) return cmd_kernel(src, out_dir, config, out);
    if (*fig_cmd) return cmd_fig1(fig_etas, fig_n, fig_sizes, fig_out, src.tol_overrides, config, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (e.kind() == ErrorKind::Io) return kIoError;
    return is_spec_error(e.kind()) ? kSpecError : kNumericalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalError;
  }
  return kSpecError;
}

}  // namespace harment::cli
