#include "dynnorm/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dynnorm/activations.hpp"
#include "dynnorm/errors.hpp"
#include "dynnorm/fitting.hpp"
#include "dynnorm/io.hpp"
#include "dynnorm/simulation.hpp"
#include "dynnorm/svg_plot.hpp"
#include "dynnorm/verification.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace dynnorm {

namespace {

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Collects emitted files and writes manifest.json after everything else.
class ArtifactWriter {
public:
  explicit ArtifactWriter(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_, ec)) {
      throw IoError("cannot create output directory '" + dir_.string() + "'" +
                    (ec ? ": " + ec.message() : ""));
    }
  }

  void write(const std::string& name, const std::string& contents) {
    const auto path = dir_ / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    f << contents;
    f.close();
    if (!f) throw IoError("failed writing '" + path.string() + "'");
    if (name != "manifest.json") artifacts_.push_back(path.string());
  }

  json finish(const std::string& command, json config, std::uint64_t seed) {
    json manifest = {{"command", command},
                     {"config", std::move(config)},
                     {"seed", seed},
                     {"artifacts", artifacts_},
                     {"tool_version", kToolVersion}};
    write("manifest.json", manifest.dump(2) + "\n");
    return manifest;
  }

private:
  fs::path dir_;
  std::vector<std::string> artifacts_;
};

struct GlobalOptions {
  std::uint64_t seed = 1;
  std::string out = "results";
  bool json = false;
  bool serial = false;
};

json to_json(const SimulationConfig& c) {
  return {{"channels", c.channels}, {"sigma", c.sigma}, {"mu", c.mu},
          {"step", c.step},         {"s_max", c.s_max}, {"seed", c.seed}};
}

std::vector<std::size_t> default_frames(std::size_t s_max) {
  std::set<std::size_t> frames{0};
  for (std::size_t s : {std::size_t{1}, std::size_t{2}, s_max}) {
    if (s <= s_max) frames.insert(s);
  }
  return {frames.begin(), frames.end()};
}

svg::Panel frame_panel(const OutlierScenario& scenario, std::size_t s) {
  const auto& frame = scenario.frames.at(s);
  const auto o = scenario.outlier_index;
  svg::Series regular{"channels", {}, {}, svg::Style::EmptyCircles, "#7f7f7f"};
  for (std::size_t k = 0; k < frame.x.size(); ++k) {
    if (s > 0 && k == o) continue;
    regular.x.push_back(frame.x[k]);
    regular.y.push_back(frame.y[k]);
  }
  svg::Panel panel{"Layer normalization, outlier step S=" + std::to_string(s), "x", "y", {}, {}};
  panel.series.push_back(std::move(regular));
  if (s > 0) {
    svg::Series outliers{"outliers S=1.." + std::to_string(s), {}, {}, svg::Style::FilledCircles, "#d62728"};
    for (std::size_t t = 1; t <= s; ++t) {
      outliers.x.push_back(scenario.frames[t].x[o]);
      outliers.y.push_back(scenario.frames[t].y[o]);
    }
    panel.series.push_back(std::move(outliers));
  }
  return panel;
}

// Fitted curves over the data plus a residual panel restricted to x >= 0.
std::vector<svg::Panel> fit_panels(const FitDataset& data, std::span<const FitResult> fits) {
  static const char* colors[] = {"#1f77b4", "#2ca02c"};
  double max_x = 0.0;
  for (const auto& p : data.points()) max_x = std::max(max_x, std::abs(p.x));
  if (max_x == 0.0) max_x = 1.0;

  svg::Panel top{"Fitted functions", "x", "y", {}, {}};
  svg::Series pts{"data", {}, {}, svg::Style::FilledCircles, "#d62728"};
  for (const auto& p : data.points()) {
    pts.x.push_back(p.x);
    pts.y.push_back(p.y);
  }
  top.series.push_back(std::move(pts));
  const auto xs = svg::curve_abscissae(-1.05 * max_x, 1.05 * max_x);
  svg::Panel bottom{"Residuals (x >= 0)", "x", "y - f(x)", {}, {0.0}};
  for (std::size_t k = 0; k < fits.size(); ++k) {
    const auto& f = fits[k];
    std::ostringstream label;
    label << to_string(f.function_kind) << (f.function_kind == FunctionKind::DyT ? " alpha=" : " beta=")
          << format_double(f.parameter);
    svg::Series curve{label.str(), xs, {}, svg::Style::Line, colors[k % 2]};
    for (double x : xs) curve.y.push_back(model_value(f.function_kind, f.parameter, data.channels(), x));
    top.series.push_back(std::move(curve));

    svg::Series res{to_string(f.function_kind), {}, {}, svg::Style::FilledCircles, colors[k % 2]};
    for (std::size_t j = 0; j < data.size(); ++j) {
      if (data.points()[j].x < 0.0) continue;
      res.x.push_back(data.points()[j].x);
      res.y.push_back(f.residuals[j]);
    }
    bottom.series.push_back(std::move(res));
  }
  return {std::move(top), std::move(bottom)};
}

std::string render(const std::vector<svg::Panel>& panels) { return svg::render(panels); }

// ---------------------------------------------------------------------------

int cmd_verify(const GlobalOptions& g, std::size_t trials, std::ostream& out) {
  VerificationConfig config;
  config.seed = g.seed;
  config.set_trials(trials);
  const auto report = run_verification(config, g.serial ? Execution::Serial : Execution::Parallel);
  const json doc = to_json(report);

  ArtifactWriter writer(g.out);
  writer.write("verification.json", doc.dump(2) + "\n");
  writer.finish("verify", {{"trials", trials}, {"seed", g.seed}}, g.seed);

  if (g.json) {
    out << doc.dump() << '\n';
  } else {
    for (const auto& c : report.checks) {
      out << (c.passed ? "PASS " : "FAIL ") << c.name << " trials=" << c.trials
          << " max_abs=" << c.max_abs_error << " max_rel=" << c.max_rel_error
          << " tol=" << c.tolerance << '\n';
    }
    out << "verdict: " << (report.verdict() ? "passed" : "failed") << '\n';
  }
  return report.verdict() ? exit_code::kOk : exit_code::kFailed;
}

void emit_scenario(ArtifactWriter& writer, const OutlierScenario& scenario,
                   const std::string& csv_name, const std::string& svg_prefix,
                   const std::vector<std::size_t>& frames) {
  std::ostringstream csv;
  write_scenario_csv(csv, scenario);
  writer.write(csv_name, csv.str());
  for (std::size_t s : frames) {
    writer.write(svg_prefix + std::to_string(s) + ".svg",
                 render(std::vector<svg::Panel>{frame_panel(scenario, s)}));
  }
}

int cmd_simulate(const GlobalOptions& g, SimulationConfig config, std::vector<std::size_t> frames,
                 std::ostream& out) {
  config.seed = g.seed;
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (frames.empty()) frames = default_frames(config.s_max);
  for (std::size_t s : frames) {
    if (s > config.s_max) throw UsageError("frame " + std::to_string(s) + " exceeds --s-max");
  }
  std::sort(frames.begin(), frames.end());
  frames.erase(std::unique(frames.begin(), frames.end()), frames.end());

  const auto scenario = run_scenario(config);
  ArtifactWriter writer(g.out);
  emit_scenario(writer, scenario, "scenario.csv", "frame_s", frames);
  auto cfg = to_json(config);
  cfg["frames"] = frames;
  const auto manifest = writer.finish("simulate", cfg, g.seed);

  if (g.json) {
    out << manifest.dump() << '\n';
  } else {
    out << "outlier channel " << scenario.outlier_index << ", " << scenario.frames.size()
        << " frames written to " << g.out << '\n';
  }
  return exit_code::kOk;
}

int cmd_fit(const GlobalOptions& g, const std::string& input, const std::string& kind_text,
            std::size_t channels_flag, bool no_mirror, std::ostream& out) {
  const FunctionKind kind = parse_function_kind(kind_text);
  std::ifstream in(input);
  if (!in) throw IoError("cannot open input '" + input + "'");
  const auto parsed = read_fit_csv(in);

  std::size_t channels = channels_flag;
  if (channels == 0) channels = parsed.channel_count >= 2 ? parsed.channel_count : 100;

  const auto data = [&] {
    try {
      return no_mirror ? FitDataset(parsed.points, channels) : mirror_augment(parsed.points, channels);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  if (data.size() < 2) throw UsageError("need at least 2 fit points after mirroring");

  const FitResult result = fit(data, kind);
  json doc = to_json(result);
  doc["channels"] = channels;

  ArtifactWriter writer(g.out);
  writer.write("fit.json", doc.dump(2) + "\n");
  writer.write("fit.svg", render(fit_panels(data, std::span<const FitResult>(&result, 1))));
  writer.finish("fit",
                {{"input", input}, {"kind", to_string(kind)}, {"channels", channels},
                 {"mirrored", !no_mirror}},
                g.seed);

  if (g.json) {
    out << doc.dump() << '\n';
  } else {
    const auto stats = residual_stats(result);
    out << to_string(kind) << (kind == FunctionKind::DyT ? " alpha = " : " beta = ")
        << format_double(result.parameter) << ", measured MAE = " << stats.mae
        << ", points = " << result.n_points << '\n';
  }
  return exit_code::kOk;
}

struct FigureOneSpec {
  std::size_t channels = 50;
  std::vector<double> alphas{0.05, 0.1, 0.2};
  std::vector<double> betas{25.0, 100.0, 400.0};
  double x_extent = 50.0;
};

int cmd_figures(const GlobalOptions& g, std::ostream& out) {
  ArtifactWriter writer(g.out);
  const FigureOneSpec f1;
  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c"};

  // Function families at C = 50 with their +-sqrt(C - 1) extrema.
  const auto xs = svg::curve_abscissae(-f1.x_extent, f1.x_extent);
  const double bound = channel_bound(f1.channels);
  std::vector<std::string> header{"x"};
  for (double a : f1.alphas) header.push_back("dyt_alpha_" + format_double(a));
  for (double b : f1.betas) header.push_back("dyisru_beta_" + format_double(b));
  std::vector<std::vector<double>> rows;
  for (double x : xs) {
    std::vector<double> row{x};
    for (double a : f1.alphas) row.push_back(scaled_dyt(x, DyTParams(a, f1.channels)));
    for (double b : f1.betas) row.push_back(dyisru(x, DyISRUParams(b, f1.channels)));
    rows.push_back(std::move(row));
  }
  std::ostringstream fig1_csv;
  write_table_csv(fig1_csv, header, rows);
  writer.write("fig1_functions.csv", fig1_csv.str());

  svg::Panel dyt_panel{"DyT, C=50", "x", "y", {}, {-bound, bound}};
  svg::Panel dyisru_panel{"DyISRU, C=50", "x", "y", {}, {-bound, bound}};
  for (std::size_t k = 0; k < f1.alphas.size(); ++k) {
    svg::Series s{"alpha=" + format_double(f1.alphas[k]), xs, {}, svg::Style::Line, colors[k % 3]};
    for (const auto& row : rows) s.y.push_back(row[1 + k]);
    dyt_panel.series.push_back(std::move(s));
  }
  for (std::size_t k = 0; k < f1.betas.size(); ++k) {
    svg::Series s{"beta=" + format_double(f1.betas[k]), xs, {}, svg::Style::Line, colors[k % 3]};
    for (const auto& row : rows) s.y.push_back(row[1 + f1.alphas.size() + k]);
    dyisru_panel.series.push_back(std::move(s));
  }
  writer.write("fig1_functions.svg", render({dyt_panel, dyisru_panel}));

  // Stepwise outlier simulation with the default configuration.
  SimulationConfig config;
  config.seed = g.seed;
  const auto scenario = run_scenario(config);
  emit_scenario(writer, scenario, "fig2_scenario.csv", "fig2_s", default_frames(config.s_max));

  // Fits on the mirrored outliers and their residuals.
  const auto data = outlier_dataset(scenario);
  const std::vector<FitResult> fits{fit_dyt(data), fit_dyisru(data)};
  std::vector<std::vector<double>> fit_rows;
  for (std::size_t j = 0; j < data.size(); ++j) {
    const auto& p = data.points()[j];
    fit_rows.push_back({p.x, p.y, fits[0].residuals[j], fits[1].residuals[j]});
  }
  std::ostringstream fig3_csv;
  write_table_csv(fig3_csv, {"x", "y", "dyt_residual", "dyisru_residual"}, fit_rows);
  writer.write("fig3_fit_points.csv", fig3_csv.str());

  std::vector<std::vector<double>> curve_rows;
  double max_x = 0.0;
  for (const auto& p : data.points()) max_x = std::max(max_x, std::abs(p.x));
  for (double x : svg::curve_abscissae(-1.05 * max_x, 1.05 * max_x)) {
    curve_rows.push_back({x, model_value(FunctionKind::DyT, fits[0].parameter, data.channels(), x),
                          model_value(FunctionKind::DyISRU, fits[1].parameter, data.channels(), x)});
  }
  std::ostringstream fig3_curves;
  write_table_csv(fig3_curves, {"x", "dyt", "dyisru"}, curve_rows);
  writer.write("fig3_fit_curves.csv", fig3_curves.str());

  auto panels = fit_panels(data, fits);
  // Non-outlier channels of the last frame as gray context.
  svg::Series context{"non-outliers", {}, {}, svg::Style::EmptyCircles, "#7f7f7f"};
  const auto& last = scenario.frames.back();
  for (std::size_t k = 0; k < last.x.size(); ++k) {
    if (k == scenario.outlier_index) continue;
    context.x.push_back(last.x[k]);
    context.y.push_back(last.y[k]);
  }
  panels.front().series.insert(panels.front().series.begin(), std::move(context));
  writer.write("fig3_fits.svg", render(panels));
  json fits_doc = {{"dyt", to_json(fits[0])}, {"dyisru", to_json(fits[1])}};
  writer.write("fig3_fits.json", fits_doc.dump(2) + "\n");

  auto cfg = to_json(config);
  cfg["fig1"] = {{"channels", f1.channels}, {"alphas", f1.alphas}, {"betas", f1.betas},
                 {"x_extent", f1.x_extent}};
  const auto manifest = writer.finish("figures", cfg, g.seed);

  if (g.json) {
    out << manifest.dump() << '\n';
  } else {
    out << "dyt alpha = " << format_double(fits[0].parameter)
        << ", dyisru beta = " << format_double(fits[1].parameter) << "; "
        << manifest["artifacts"].size() << " files written to " << g.out << '\n';
  }
  return exit_code::kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Layer normalization and dynamic activation toolkit", "dynnorm"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kToolVersion);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Seed for every random draw");
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_flag("--json", g.json, "Machine-readable output on stdout");
  app.add_flag("--serial", g.serial, "Use the serial reference kernels instead of OpenMP");

  std::size_t trials = 100;
  auto* verify = app.add_subcommand("verify", "Run the numerical identity checks");
  verify->add_option("--trials", trials, "Random trials per check")
      ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()))
      ->capture_default_str();

  SimulationConfig sim;
  std::vector<std::size_t> frames;
  auto* simulate = app.add_subcommand("simulate", "Stepwise outlier simulation");
  simulate->add_option("--channels", sim.channels, "Channel count C")
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()))
      ->capture_default_str();
  simulate->add_option("--sigma", sim.sigma)->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--mu", sim.mu)->capture_default_str();
  simulate->add_option("--step", sim.step)->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--s-max", sim.s_max)->capture_default_str();
  simulate->add_option("--frames", frames, "Frames to plot (default 0 1 2 s_max)");

  std::string input, kind;
  std::size_t channels = 0;
  bool no_mirror = false;
  auto* fitcmd = app.add_subcommand("fit", "Fit DyT or DyISRU to outlier data");
  fitcmd->add_option("--input", input, "x,y CSV or scenario CSV")->required();
  fitcmd->add_option("--kind", kind, "dyt or dyisru")
      ->required()
      ->transform(CLI::IsMember({"dyt", "dyisru"}, CLI::ignore_case));
  fitcmd->add_option("--channels", channels, "Channel count C (default: from CSV, else 100)")
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()));
  fitcmd->add_flag("--no-mirror", no_mirror, "Skip (-x, -y) augmentation");

  auto* figures = app.add_subcommand("figures", "Regenerate all figures as CSV and SVG");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::kOk : exit_code::kUsage;
  }

  try {
    if (*verify) return cmd_verify(g, trials, out);
    if (*simulate) return cmd_simulate(g, sim, frames, out);
    if (*fitcmd) return cmd_fit(g, input, kind, channels, no_mirror, out);
    if (*figures) return cmd_figures(g, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kUsage;
  } catch (const CsvError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kIo;
  } catch (const BracketFailure& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kFailed;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::kFailed;
  }
  return exit_code::kUsage;
}

}  // namespace dynnorm
