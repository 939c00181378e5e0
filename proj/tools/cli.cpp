#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "dbff/abstain.hpp"
#include "dbff/dataio.hpp"
#include "dbff/featsel.hpp"
#include "dbff/metrics.hpp"
#include "dbff/projection.hpp"
#include "dbff/synth.hpp"

namespace dbff::cli {

namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::InvalidSpec:
    case ErrorKind::KOutOfRange:
      return kExitUsage;
    case ErrorKind::MissingFile:
    case ErrorKind::IoFailure:
      return kExitIo;
    default:
      return kExitData;
  }
}

double parse_rate(const std::string& text) {
  std::string token = text;
  token.erase(0, token.find_first_not_of(" \t"));
  token.erase(token.find_last_not_of(" \t") + 1);
  bool percent = !token.empty() && token.back() == '%';
  if (percent) token.pop_back();
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    throw Error(ErrorKind::InvalidArgument, "cannot parse rate '" + text + "'");
  }
  if (percent) value /= 100.0;
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "rate '" + text + "' outside [0, 1]");
  }
  return value;
}

std::vector<double> parse_rates(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (piece.find_first_not_of(" \t") != std::string::npos) out.push_back(parse_rate(piece));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

namespace {

struct GlobalFlags {
  std::uint64_t seed = 0;
  bool force = false;
  std::string format;
  bool quiet = false;
};

struct PipelineFlags {
  std::optional<std::size_t> k;
  std::optional<double> eps;
  std::size_t min_pts = kDefaultMinPts;
  bool shift_min = false;

  FitOptions options() const { return {k, eps, min_pts, shift_min}; }
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& flags, bool with_k) {
  if (with_k) {
    cmd->add_option("--k", flags.k, "Keep the k features with the highest chi-square score");
  }
  cmd->add_option("--eps", flags.eps, "DBSCAN radius (default: k-distance suggestion)");
  cmd->add_option("--min-pts", flags.min_pts, "DBSCAN density threshold, self included")
      ->capture_default_str();
  cmd->add_flag("--shift-min", flags.shift_min,
                "Shift negative columns to start at 0 before chi-square scoring");
}

// Refuses to overwrite any input unless --force.
void check_clobber(const std::vector<std::string>& inputs, const std::vector<std::string>& outputs,
                   bool force) {
  if (force) return;
  for (const auto& o : outputs) {
    if (o.empty()) continue;
    const auto out_path = fs::weakly_canonical(o);
    for (const auto& i : inputs) {
      if (!i.empty() && fs::weakly_canonical(i) == out_path) {
        throw Error(ErrorKind::InvalidArgument,
                    "output '" + o + "' would overwrite an input; pass --force to allow");
      }
    }
    for (const auto& other : outputs) {
      if (&other != &o && !other.empty() && fs::weakly_canonical(other) == out_path) {
        throw Error(ErrorKind::InvalidArgument, "two outputs share the path '" + o + "'");
      }
    }
  }
}

std::string pct(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * *v);
  return buf;
}

void print_rows(std::ostream& out, const std::vector<SelectiveReport>& rows,
                const std::vector<std::string>& class_names) {
  char buf[64];
  out << "target    achieved  accuracy  caught   ";
  for (const auto& c : class_names) {
    std::snprintf(buf, sizeof buf, "%-10s", ("sens:" + c).c_str());
    out << buf;
  }
  for (const auto& c : class_names) {
    std::snprintf(buf, sizeof buf, "%-10s", ("ppv:" + c).c_str());
    out << buf;
  }
  out << '\n';
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-10s%-10s%-10s%-9s", pct(r.target_rate).c_str(),
                  pct(r.achieved_rate).c_str(), pct(r.retained_accuracy).c_str(),
                  pct(r.mistaken_caught_fraction).c_str());
    out << buf;
    for (const auto& c : r.per_class) {
      std::snprintf(buf, sizeof buf, "%-10s", pct(c.sensitivity).c_str());
      out << buf;
    }
    for (const auto& c : r.per_class) {
      std::snprintf(buf, sizeof buf, "%-10s", pct(c.ppv).c_str());
      out << buf;
    }
    out << '\n';
  }
}

MatrixFormat output_format(const GlobalFlags& g, const std::string& path) {
  if (g.format == "csv") return MatrixFormat::Csv;
  if (g.format == "fmx") return MatrixFormat::Binary;
  return format_for_path(path);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Density-based abstention for classifiers operating on feature embeddings",
               "dbff"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--seed", g.seed, "Seed for synthesis and projection start vectors")
      ->capture_default_str();
  app.add_flag("--force", g.force, "Allow outputs to overwrite inputs");
  app.add_option("--format", g.format, "Matrix output format (default: from extension)")
      ->check(CLI::IsMember({"csv", "fmx"}));
  app.add_flag("--quiet", g.quiet, "Suppress human-readable output");

  // synth
  SynthSpec spec;
  std::string synth_out;
  auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic feature matrix");
  synth->add_option("--classes", spec.class_count, "Number of classes")->capture_default_str();
  synth->add_option("--informative", spec.informative_dims, "Label-dependent columns")
      ->capture_default_str();
  synth->add_option("--noise", spec.noise_dims, "Label-independent columns (half constant)")
      ->capture_default_str();
  synth->add_option("--per-class", spec.samples_per_class, "Rows per class")
      ->capture_default_str();
  synth->add_option("--spread", spec.cluster_spread, "Per-class standard deviation")
      ->capture_default_str();
  synth->add_option("--separation", spec.centroid_separation, "Distance between class centers")
      ->capture_default_str();
  synth->add_option("-o,--output", synth_out, "Output matrix (.fmx or .csv)")->required();

  // select
  std::string select_in, select_out;
  std::optional<std::size_t> select_k;
  bool select_shift = false;
  auto* select = app.add_subcommand("select", "Score features with chi-square and keep the top k");
  select->add_option("input", select_in, "Feature matrix")->required();
  select->add_option("--k", select_k, "Features to keep (default 1024, clamped to d)");
  select->add_flag("--shift-min", select_shift,
                   "Shift negative columns to start at 0 before scoring");
  select->add_option("-o,--output", select_out, "Selector JSON (default: stdout)");

  // fit
  std::string fit_train, fit_calib, fit_out, fit_rate = "0.1";
  PipelineFlags fit_flags;
  auto* fit = app.add_subcommand("fit", "Fit centroids, calibrate eta and save a model");
  fit->add_option("train", fit_train, "Training matrix")->required();
  add_pipeline_flags(fit, fit_flags, true);
  fit->add_option("--calib", fit_calib, "Calibration matrix (default: the training matrix)");
  fit->add_option("--rate", fit_rate, "Target abstention rate, e.g. 0.1 or 10%")
      ->capture_default_str();
  fit->add_option("-o,--output", fit_out, "Model JSON")->required();

  // evaluate
  std::string eval_model, eval_test, eval_out, eval_csv;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate a saved model on a matrix");
  evaluate_cmd->add_option("model", eval_model, "Model JSON")->required();
  evaluate_cmd->add_option("test", eval_test, "Test matrix")->required();
  evaluate_cmd->add_option("-o,--output", eval_out, "Report JSON");
  evaluate_cmd->add_option("--csv", eval_csv, "Report CSV, one line per class");

  // sweep
  std::string sw_train, sw_calib, sw_test, sw_out, sw_csv;
  std::string sw_rates = "0,0.05,0.1,0.15,0.2,0.25,0.3";
  PipelineFlags sw_flags;
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate across abstention rates");
  sweep_cmd->add_option("train", sw_train, "Training matrix")->required();
  sweep_cmd->add_option("calib", sw_calib, "Calibration matrix")->required();
  sweep_cmd->add_option("test", sw_test, "Test matrix")->required();
  sweep_cmd->add_option("--rates", sw_rates, "Comma-separated rates, fractions or percents")
      ->capture_default_str();
  add_pipeline_flags(sweep_cmd, sw_flags, true);
  sweep_cmd->add_option("-o,--output", sw_out, "Report JSON");
  sweep_cmd->add_option("--csv", sw_csv, "Report CSV, one line per (rate, class)");

  // compare
  std::string cmp_train, cmp_calib, cmp_test, cmp_out;
  std::string cmp_rates = "0.1,0.2";
  std::optional<std::size_t> cmp_k;
  PipelineFlags cmp_flags;
  auto* compare = app.add_subcommand("compare", "Sweep with and without chi-square selection");
  compare->add_option("train", cmp_train, "Training matrix")->required();
  compare->add_option("calib", cmp_calib, "Calibration matrix")->required();
  compare->add_option("test", cmp_test, "Test matrix")->required();
  compare->add_option("--k", cmp_k, "Features to keep (default 1024, clamped to d)");
  compare->add_option("--rates", cmp_rates, "Comma-separated rates, fractions or percents")
      ->capture_default_str();
  add_pipeline_flags(compare, cmp_flags, false);
  compare->add_option("-o,--output", cmp_out, "Comparison JSON");

  // project
  std::string proj_in, proj_model, proj_out, proj_title;
  auto* project = app.add_subcommand("project", "Scatter plot of the top two principal directions");
  project->add_option("matrix", proj_in, "Feature matrix")->required();
  project->add_option("--model", proj_model, "Model JSON; abstained samples are drawn hollow");
  project->add_option("--title", proj_title, "Plot title");
  project->add_option("-o,--output", proj_out, "SVG file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  auto say = [&](const std::string& line) {
    if (!g.quiet) out << line << '\n';
  };

  try {
    if (synth->parsed()) {
      spec.seed = g.seed;
      const FeatureMatrix m = synthesize(spec);
      save_matrix(m, synth_out, output_format(g, synth_out));
      say("wrote " + std::to_string(m.rows()) + " x " + std::to_string(m.cols()) + " matrix to " +
          synth_out);
    } else if (select->parsed()) {
      check_clobber({select_in}, {select_out}, g.force);
      FeatureMatrix m = load_matrix(select_in);
      if (select_shift) m = shift_to_nonnegative(m);
      const std::size_t k = select_k.value_or(std::min(kDefaultSelectK, m.cols()));
      const std::string json = selector_to_json(fit_selector(m, k));
      if (select_out.empty()) {
        out << json;
      } else {
        write_file_text(select_out, json);
        say("kept " + std::to_string(k) + " of " + std::to_string(m.cols()) + " features");
      }
    } else if (fit->parsed()) {
      check_clobber({fit_train, fit_calib}, {fit_out}, g.force);
      const double rate = parse_rate(fit_rate);
      const FeatureMatrix train = load_matrix(fit_train);
      const FeatureMatrix calib = fit_calib.empty() ? train : load_matrix(fit_calib);
      AbstentionModel model = fit_model(train, fit_flags.options());
      const Calibration cal = calibrate_eta(model, calib, rate);
      model = model.with_eta(cal.eta);
      save_model(model, fit_out);
      char buf[160];
      std::snprintf(buf, sizeof buf, "eta %.17g, achieved abstention rate %s (%zu/%zu)", cal.eta,
                    pct(cal.achieved_rate()).c_str(), cal.abstained, cal.total);
      say(buf);
    } else if (evaluate_cmd->parsed()) {
      check_clobber({eval_model, eval_test}, {eval_out, eval_csv}, g.force);
      const AbstentionModel model = load_model(eval_model);
      const FeatureMatrix test = load_matrix(eval_test);
      const auto decisions = decide_batch(model, test);
      SelectiveReport report = evaluate(decisions, test.labels(), test.class_names());
      report.eta = model.eta();
      if (!g.quiet) print_rows(out, {report}, test.class_names());
      if (!eval_out.empty()) write_file_text(eval_out, report_to_json(report));
      if (!eval_csv.empty()) {
        write_file_text(eval_csv, report_to_csv(SweepReport{{report}, describe(test)}));
      }
    } else if (sweep_cmd->parsed()) {
      check_clobber({sw_train, sw_calib, sw_test}, {sw_out, sw_csv}, g.force);
      const auto rates = parse_rates(sw_rates);
      const FeatureMatrix train = load_matrix(sw_train);
      const FeatureMatrix calib = load_matrix(sw_calib);
      const FeatureMatrix test = load_matrix(sw_test);
      const AbstentionModel model = fit_model(train, sw_flags.options());
      const SweepReport report = sweep(model, calib, test, rates);
      if (!g.quiet) print_rows(out, report.rows, test.class_names());
      if (!sw_out.empty()) write_file_text(sw_out, report_to_json(report));
      if (!sw_csv.empty()) write_file_text(sw_csv, report_to_csv(report));
    } else if (compare->parsed()) {
      check_clobber({cmp_train, cmp_calib, cmp_test}, {cmp_out}, g.force);
      const auto rates = parse_rates(cmp_rates);
      const FeatureMatrix train = load_matrix(cmp_train);
      const FeatureMatrix calib = load_matrix(cmp_calib);
      const FeatureMatrix test = load_matrix(cmp_test);
      const std::size_t k = cmp_k.value_or(std::min(kDefaultSelectK, train.cols()));
      const SelectionComparison cmp =
          compare_selection(train, calib, test, k, rates, cmp_flags.options());
      if (!g.quiet) {
        out << "without feature selection (" << train.cols() << " features)\n";
        print_rows(out, cmp.without_selection.rows, test.class_names());
        out << "with feature selection (" << k << " features)\n";
        print_rows(out, cmp.with_selection.rows, test.class_names());
      }
      if (!cmp_out.empty()) write_file_text(cmp_out, report_to_json(cmp));
    } else if (project->parsed()) {
      check_clobber({proj_in, proj_model}, {proj_out}, g.force);
      const FeatureMatrix m = load_matrix(proj_in);
      std::optional<std::vector<bool>> abstained;
      if (!proj_model.empty()) {
        const AbstentionModel model = load_model(proj_model);
        abstained.emplace();
        for (const auto& d : decide_batch(model, m)) abstained->push_back(d.abstained);
      }
      PowerIterationOptions options;
      options.seed = g.seed;
      const Projection p = project_top2(m.to_dense(), options);
      if (p.degenerate) err << "warning: " << p.warning << '\n';
      const std::vector<ClassIndex> labels(m.labels().begin(), m.labels().end());
      write_file_text(proj_out, render_scatter_svg(p.coords, labels, m.class_names(), abstained,
                                                   {proj_title, 640, 480}));
      say("wrote " + proj_out);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace dbff::cli
