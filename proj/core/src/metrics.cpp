#include "dbff/metrics.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include <json.hpp>

#include "dbff/error.hpp"

namespace dbff {

namespace {

using Json = nlohmann::ordered_json;

std::optional<double> ratio(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

void put_optional(Json& j, const char* key, const std::optional<double>& v) {
  if (v) j[key] = *v;
}

Json to_json(const SelectiveReport& r) {
  Json j;
  put_optional(j, "target_rate", r.target_rate);
  put_optional(j, "eta", r.eta);
  put_optional(j, "calibration_rate", r.calibration_rate);
  j["achieved_rate"] = r.achieved_rate;
  j["total"] = r.total;
  j["retained"] = r.retained;
  put_optional(j, "retained_accuracy", r.retained_accuracy);
  auto& classes = j["per_class"] = Json::array();
  for (const auto& c : r.per_class) {
    Json cj;
    cj["class"] = c.name;
    put_optional(cj, "sensitivity", c.sensitivity);
    put_optional(cj, "ppv", c.ppv);
    cj["support_retained"] = c.support_retained;
    classes.push_back(std::move(cj));
  }
  put_optional(j, "mistaken_caught_fraction", r.mistaken_caught_fraction);
  j["abstained_indices"] = r.abstained_indices;
  return j;
}

Json to_json(const SweepReport& s) {
  Json j;
  auto& rows = j["rows"] = Json::array();
  for (const auto& r : s.rows) rows.push_back(to_json(r));
  auto& meta = j["dataset_meta"];
  meta["n"] = s.dataset.n;
  meta["d"] = s.dataset.d;
  auto& counts = meta["class_counts"] = Json::object();
  for (std::size_t c = 0; c < s.dataset.class_names.size(); ++c) {
    counts[s.dataset.class_names[c]] = s.dataset.class_counts[c];
  }
  return j;
}

std::string number(double v) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string number(const std::optional<double>& v) { return v ? number(*v) : std::string(); }

std::vector<double> normalized_rates(std::span<const double> rates) {
  std::vector<double> out(rates.begin(), rates.end());
  for (double r : out) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw Error(ErrorKind::InvalidArgument, "abstention rate " + number(r) + " outside [0, 1]");
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

SelectiveReport evaluate(std::span<const Decision> decisions, std::span<const ClassIndex> labels,
                         const std::vector<std::string>& class_names) {
  if (decisions.size() != labels.size()) {
    throw Error(ErrorKind::LengthMismatch, std::to_string(decisions.size()) + " decisions vs " +
                                               std::to_string(labels.size()) + " labels");
  }
  if (decisions.empty()) throw Error(ErrorKind::InvalidArgument, "nothing to evaluate");
  const std::size_t k = class_names.size();

  std::vector<std::size_t> tp(k, 0), truth(k, 0), predicted(k, 0);
  std::size_t correct = 0, errors = 0, caught = 0;
  SelectiveReport report;
  report.total = decisions.size();
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    const auto& d = decisions[i];
    if (labels[i] >= k || d.predicted_class >= k) {
      throw Error(ErrorKind::InvalidArgument, "class index out of range", i);
    }
    const bool wrong = d.predicted_class != labels[i];
    if (wrong) ++errors;
    if (d.abstained) {
      report.abstained_indices.push_back(i);
      if (wrong) ++caught;
      continue;
    }
    ++truth[labels[i]];
    ++predicted[d.predicted_class];
    if (!wrong) {
      ++correct;
      ++tp[labels[i]];
    }
  }
  report.retained = report.total - report.abstained_indices.size();
  report.achieved_rate =
      static_cast<double>(report.abstained_indices.size()) / static_cast<double>(report.total);
  report.retained_accuracy = ratio(correct, report.retained);
  report.mistaken_caught_fraction = ratio(caught, errors);
  for (std::size_t c = 0; c < k; ++c) {
    report.per_class.push_back({class_names[c], ratio(tp[c], truth[c]),
                                ratio(tp[c], predicted[c]), truth[c]});
  }
  return report;
}

DatasetMeta describe(const FeatureMatrix& m) {
  return {m.rows(), m.cols(), m.class_names(), m.class_counts()};
}

SweepReport sweep(const AbstentionModel& model, const FeatureMatrix& calibration,
                  const FeatureMatrix& test, std::span<const double> rates) {
  const auto targets = normalized_rates(rates);
  SweepReport out;
  out.dataset = describe(test);
  if (targets.empty()) return out;

  std::vector<double> calibration_gaps;
  for (const auto& d : decide_batch(model, calibration)) calibration_gaps.push_back(d.gap);
  const auto base = decide_batch(model, test);

  for (double rate : targets) {
    const Calibration cal = calibrate_from_gaps(calibration_gaps, rate);
    std::vector<Decision> decisions;
    decisions.reserve(base.size());
    for (const auto& d : base) decisions.push_back(with_tolerance(d, cal.eta));
    SelectiveReport row = evaluate(decisions, test.labels(), test.class_names());
    row.target_rate = rate;
    row.eta = cal.eta;
    row.calibration_rate = cal.achieved_rate();
    out.rows.push_back(std::move(row));
  }
  return out;
}

SelectionComparison compare_selection(const FeatureMatrix& train, const FeatureMatrix& calibration,
                                      const FeatureMatrix& test, std::size_t k,
                                      std::span<const double> rates, const FitOptions& options) {
  const DbscanParams params = resolve_params(train, options);
  FitOptions fixed = options;
  fixed.eps = params.eps;

  fixed.k.reset();
  const AbstentionModel raw = fit_model(train, fixed);
  fixed.k = k;
  const AbstentionModel reduced = fit_model(train, fixed);

  SelectionComparison out{sweep(raw, calibration, test, rates),
                          sweep(reduced, calibration, test, rates),
                          *reduced.selector(),
                          params,
                          {}};
  for (std::size_t r = 0; r < out.with_selection.rows.size(); ++r) {
    const auto& without = out.without_selection.rows[r];
    const auto& with = out.with_selection.rows[r];
    for (std::size_t c = 0; c < with.per_class.size(); ++c) {
      std::optional<double> delta;
      if (with.per_class[c].ppv && without.per_class[c].ppv) {
        delta = *with.per_class[c].ppv - *without.per_class[c].ppv;
      }
      out.ppv_deltas.push_back({*with.target_rate, with.per_class[c].name, delta});
    }
  }
  return out;
}

std::string report_to_json(const SelectiveReport& report) {
  return to_json(report).dump(2) + "\n";
}

std::string report_to_json(const SweepReport& report) { return to_json(report).dump(2) + "\n"; }

std::string report_to_json(const SelectionComparison& comparison) {
  Json j;
  j["dbscan"] = {{"eps", comparison.params.eps}, {"min_pts", comparison.params.min_pts}};
  j["selected_features"] = comparison.selector.retained_indices();
  j["without_selection"] = to_json(comparison.without_selection);
  j["with_selection"] = to_json(comparison.with_selection);
  auto& deltas = j["ppv_deltas"] = Json::array();
  for (const auto& d : comparison.ppv_deltas) {
    Json dj;
    dj["target_rate"] = d.target_rate;
    dj["class"] = d.class_name;
    put_optional(dj, "delta", d.delta);
    deltas.push_back(std::move(dj));
  }
  return j.dump(2) + "\n";
}

std::string report_to_csv(const SweepReport& report) {
  std::string out =
      "target_rate,achieved_rate,eta,retained_accuracy,class,sensitivity,ppv,support_retained\n";
  for (const auto& row : report.rows) {
    for (const auto& c : row.per_class) {
      out += number(row.target_rate) + ',' + number(row.achieved_rate) + ',' + number(row.eta) +
             ',' + number(row.retained_accuracy) + ',' + c.name + ',' + number(c.sensitivity) +
             ',' + number(c.ppv) + ',' + std::to_string(c.support_retained) + '\n';
    }
  }
  return out;
}

}  // namespace dbff
