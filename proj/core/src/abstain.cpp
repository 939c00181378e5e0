#include "dbff/abstain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "dbff/dataio.hpp"
#include "dbff/error.hpp"
#include "json_support.hpp"

namespace dbff {

AbstentionModel::AbstentionModel(CentroidSet centroids, std::optional<FeatureSelector> selector,
                                 double eta, DbscanParams params)
    : centroids_(std::move(centroids)),
      selector_(std::move(selector)),
      eta_(eta),
      params_(params) {
  if (!std::isfinite(eta_) || eta_ < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "eta must be finite and >= 0");
  }
  if (centroids_.class_count() < 2) {
    throw Error(ErrorKind::InvalidArgument, "the gap rule needs at least two classes");
  }
  if (selector_ && selector_->k() != centroids_.dim()) {
    throw Error(ErrorKind::InvalidArgument, "selector k " + std::to_string(selector_->k()) +
                                                " != centroid dimension " +
                                                std::to_string(centroids_.dim()));
  }
  params_.validate();
}

std::size_t AbstentionModel::input_dim() const noexcept {
  return selector_ ? selector_->d_original() : centroids_.dim();
}

AbstentionModel AbstentionModel::with_eta(double eta) const {
  return AbstentionModel(centroids_, selector_, eta, params_);
}

std::vector<double> distances(const AbstentionModel& model, std::span<const double> sample) {
  if (sample.size() != model.input_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "sample has " + std::to_string(sample.size()) +
                                                  " features, model expects " +
                                                  std::to_string(model.input_dim()));
  }
  for (std::size_t f = 0; f < sample.size(); ++f) {
    if (!std::isfinite(sample[f])) throw Error(ErrorKind::NonFiniteInput, "", std::nullopt, f);
  }
  std::vector<double> reduced;
  if (model.selector()) {
    reduced = apply_selector(*model.selector(), sample);
    sample = reduced;
  }
  const auto& cs = model.centroids();
  std::vector<double> out(cs.class_count());
  for (std::size_t c = 0; c < cs.class_count(); ++c) {
    const auto centroid = cs.centroid(c);
    double sum = 0.0;
    for (std::size_t i = 0; i < centroid.size(); ++i) {
      const double diff = sample[i] - centroid[i];
      sum += diff * diff;
    }
    out[c] = std::sqrt(sum);
  }
  return out;
}

std::vector<double> distances(const AbstentionModel& model, std::span<const float> sample) {
  const std::vector<double> wide(sample.begin(), sample.end());
  return distances(model, std::span<const double>(wide));
}

Decision with_tolerance(Decision decision, double eta) {
  decision.abstained = decision.gap < eta;
  return decision;
}

namespace {

Decision decide_from(std::vector<double> dist, double eta) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < dist.size(); ++c) {
    if (dist[c] < dist[best]) best = c;
  }
  double runner_up = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < dist.size(); ++c) {
    if (c != best) runner_up = std::min(runner_up, dist[c]);
  }
  Decision d;
  d.predicted_class = static_cast<ClassIndex>(best);
  d.gap = runner_up - dist[best];
  d.abstained = d.gap < eta;
  d.distances = std::move(dist);
  return d;
}

}  // namespace

Decision decide(const AbstentionModel& model, std::span<const double> sample) {
  return decide_from(distances(model, sample), model.eta());
}

Decision decide(const AbstentionModel& model, std::span<const float> sample) {
  return decide_from(distances(model, sample), model.eta());
}

std::vector<Decision> decide_batch(const AbstentionModel& model, const FeatureMatrix& m) {
  if (m.cols() != model.input_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "matrix has " + std::to_string(m.cols()) +
                                                  " features, model expects " +
                                                  std::to_string(model.input_dim()));
  }
  std::vector<Decision> out;
  out.reserve(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(decide(model, m.row(r)));
  return out;
}

Calibration calibrate_from_gaps(std::vector<double> gaps, double target_rate) {
  if (gaps.empty()) throw Error(ErrorKind::EmptyCalibrationSet, "no calibration samples");
  if (!(target_rate >= 0.0 && target_rate <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "target rate must lie in [0, 1]");
  }
  std::sort(gaps.begin(), gaps.end());
  const std::size_t n = gaps.size();
  const double total = static_cast<double>(n);

  // Largest i with i / n <= target, compared in the same arithmetic the
  // caller sees, so that e.g. target 0.29 with n = 100 yields 29.
  auto index = static_cast<std::size_t>(std::floor(target_rate * total));
  index = std::min(index, n);
  while (index < n && static_cast<double>(index + 1) / total <= target_rate) ++index;
  while (index > 0 && static_cast<double>(index) / total > target_rate) --index;

  Calibration cal;
  cal.total = n;
  if (index == 0) {
    cal.eta = 0.0;
  } else if (index == n) {
    const double top = gaps.back();
    cal.eta = std::max(top + 1.0, std::nextafter(top, std::numeric_limits<double>::infinity()));
  } else {
    cal.eta = gaps[index];
  }
  cal.abstained = static_cast<std::size_t>(
      std::lower_bound(gaps.begin(), gaps.end(), cal.eta) - gaps.begin());
  return cal;
}

Calibration calibrate_eta(const AbstentionModel& model, const FeatureMatrix& calibration,
                          double target_rate) {
  const auto decisions = decide_batch(model, calibration);
  std::vector<double> gaps;
  gaps.reserve(decisions.size());
  for (const auto& d : decisions) gaps.push_back(d.gap);
  return calibrate_from_gaps(std::move(gaps), target_rate);
}

std::string model_to_json(const AbstentionModel& model) {
  nlohmann::ordered_json j;
  j["format_version"] = AbstentionModel::kFormatVersion;
  j["class_names"] = model.centroids().class_names();
  j["centroids"] = model.centroids().centroids();
  j["eta"] = model.eta();
  j["dbscan"] = {{"eps", model.params().eps}, {"min_pts", model.params().min_pts}};
  if (model.selector()) j["selector"] = detail::selector_json(*model.selector());
  auto& meta = j["fit_meta"];
  meta["core_counts"] = nlohmann::ordered_json::array();
  meta["cluster_counts"] = nlohmann::ordered_json::array();
  meta["fallback"] = nlohmann::ordered_json::array();
  for (const auto& info : model.centroids().fit_meta()) {
    meta["core_counts"].push_back(info.core_count);
    meta["cluster_counts"].push_back(info.cluster_count);
    meta["fallback"].push_back(info.fallback);
  }
  return j.dump(2) + "\n";
}

AbstentionModel model_from_json(const std::string& text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::CorruptModel, e.what());
  }
  if (!j.is_object() || !j.contains("format_version") ||
      !j["format_version"].is_number_integer()) {
    throw Error(ErrorKind::CorruptModel, "missing integer format_version");
  }
  const auto version = j["format_version"].get<long long>();
  if (version != AbstentionModel::kFormatVersion) {
    throw Error(ErrorKind::SchemaVersionMismatch,
                "format_version " + std::to_string(version) + " is not supported");
  }
  try {
    auto names = j.at("class_names").get<std::vector<std::string>>();
    auto centroids = j.at("centroids").get<std::vector<std::vector<double>>>();
    const auto& meta = j.at("fit_meta");
    auto cores = meta.at("core_counts").get<std::vector<std::size_t>>();
    auto clusters = meta.at("cluster_counts").get<std::vector<std::size_t>>();
    auto fallback = meta.at("fallback").get<std::vector<bool>>();
    if (cores.size() != names.size() || clusters.size() != names.size() ||
        fallback.size() != names.size()) {
      throw Error(ErrorKind::CorruptModel, "fit_meta does not match class count");
    }
    std::vector<ClassFitInfo> info(names.size());
    for (std::size_t c = 0; c < names.size(); ++c) info[c] = {cores[c], clusters[c], fallback[c]};

    DbscanParams params;
    params.eps = j.at("dbscan").at("eps").get<double>();
    params.min_pts = j.at("dbscan").at("min_pts").get<std::size_t>();

    std::optional<FeatureSelector> selector;
    if (j.contains("selector")) selector = detail::selector_from(j["selector"]);

    return AbstentionModel(CentroidSet(std::move(centroids), std::move(names), std::move(info)),
                           std::move(selector), j.at("eta").get<double>(), params);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::CorruptModel, e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::CorruptModel) throw;
    throw Error(ErrorKind::CorruptModel, e.what());
  }
}

void save_model(const AbstentionModel& model, const std::filesystem::path& path) {
  write_file_text(path, model_to_json(model));
}

AbstentionModel load_model(const std::filesystem::path& path) {
  auto bytes = read_file_bytes(path);
  return model_from_json(std::string(bytes.begin(), bytes.end()));
}

DbscanParams resolve_params(const FeatureMatrix& space, const FitOptions& options) {
  DbscanParams params;
  params.min_pts = options.min_pts;
  if (options.eps) {
    params.eps = *options.eps;
  } else {
    params.eps = suggest_eps(space.to_dense(), options.min_pts);
    if (!(params.eps > 0.0)) {
      throw Error(ErrorKind::DegenerateEps,
                  "suggested eps is 0 (coincident points); pass an explicit eps");
    }
  }
  params.validate();
  return params;
}

AbstentionModel fit_model(const FeatureMatrix& train, const FitOptions& options) {
  std::optional<FeatureSelector> selector;
  if (options.k) {
    selector = options.shift_min ? fit_selector(shift_to_nonnegative(train), *options.k)
                                 : fit_selector(train, *options.k);
  }
  const FeatureMatrix space = selector ? apply_selector(*selector, train) : train;
  const DbscanParams params = resolve_params(space, options);
  return AbstentionModel(fit_centroids(space, params), std::move(selector), 0.0, params);
}

}  // namespace dbff
