#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dbff/cluster.hpp"
#include "dbff/feature_matrix.hpp"
#include "dbff/featsel.hpp"

namespace dbff {

/// Deployable selective classifier: class centroids, an optional feature
/// selector applied before every distance, and the gap tolerance eta.
///
/// Invariants (constructor throws Error{InvalidArgument}): eta finite and
/// >= 0; at least two classes; selector k equals the centroid dimension.
class AbstentionModel {
 public:
  static constexpr int kFormatVersion = 1;

  AbstentionModel(CentroidSet centroids, std::optional<FeatureSelector> selector, double eta,
                  DbscanParams params);

  const CentroidSet& centroids() const noexcept { return centroids_; }
  const std::optional<FeatureSelector>& selector() const noexcept { return selector_; }
  double eta() const noexcept { return eta_; }
  const DbscanParams& params() const noexcept { return params_; }
  std::size_t class_count() const noexcept { return centroids_.class_count(); }

  /// Dimensionality of raw samples fed to the model.
  std::size_t input_dim() const noexcept;

  AbstentionModel with_eta(double eta) const;

 private:
  CentroidSet centroids_;
  std::optional<FeatureSelector> selector_;
  double eta_;
  DbscanParams params_;
};

struct Decision {
  ClassIndex predicted_class = 0;
  double gap = 0.0;  // second smallest distance minus smallest
  bool abstained = false;
  std::vector<double> distances;  // one per class, class order
};

/// Euclidean distance from `sample` to every centroid, after the selector.
/// Throws Error{DimensionMismatch} or Error{NonFiniteInput}.
std::vector<double> distances(const AbstentionModel& model, std::span<const double> sample);
std::vector<double> distances(const AbstentionModel& model, std::span<const float> sample);

/// Nearest centroid (ties to the lower class index); abstains iff the gap to
/// the runner-up is strictly below eta, so eta = 0 never abstains.
Decision decide(const AbstentionModel& model, std::span<const double> sample);
Decision decide(const AbstentionModel& model, std::span<const float> sample);

/// Classifies a decision that already carries distances against a new eta.
Decision with_tolerance(Decision decision, double eta);

/// decide() over every row of `m`, in row order.
std::vector<Decision> decide_batch(const AbstentionModel& model, const FeatureMatrix& m);

struct Calibration {
  double eta = 0.0;
  std::size_t abstained = 0;
  std::size_t total = 0;
  double achieved_rate() const {
    return total == 0 ? 0.0 : static_cast<double>(abstained) / static_cast<double>(total);
  }
};

/// Quantile calibration over precomputed gaps. With sorted gaps g and i the
/// largest integer such that i/n <= target_rate, eta = g[i] (0 when i = 0,
/// just above max(g) when i = n). The achieved abstention count is the
/// number of gaps strictly below eta, which is the largest achievable count
/// not exceeding i. Throws Error{EmptyCalibrationSet} on no gaps and
/// Error{InvalidArgument} for a target outside [0, 1].
Calibration calibrate_from_gaps(std::vector<double> gaps, double target_rate);

/// Gaps of `calibration` under `model` (its eta is ignored), then
/// calibrate_from_gaps.
Calibration calibrate_eta(const AbstentionModel& model, const FeatureMatrix& calibration,
                          double target_rate);

std::string model_to_json(const AbstentionModel& model);
/// Throws Error{SchemaVersionMismatch} for an unknown format_version and
/// Error{CorruptModel} for anything else malformed.
AbstentionModel model_from_json(const std::string& text);
void save_model(const AbstentionModel& model, const std::filesystem::path& path);
AbstentionModel load_model(const std::filesystem::path& path);

struct FitOptions {
  std::optional<std::size_t> k;  // chi-square top-k selection when set
  std::optional<double> eps;     // suggested from the training data when unset
  std::size_t min_pts = kDefaultMinPts;
  bool shift_min = false;  // score chi-square on column-min-shifted values
};

/// DBSCAN parameters for clustering `space`: the explicit eps, or
/// suggest_eps over all rows. Throws Error{DegenerateEps} when the
/// suggestion is 0.
DbscanParams resolve_params(const FeatureMatrix& space, const FitOptions& options);

/// Selector (optional) -> per-class centroids. The result has eta = 0; run
/// calibrate_eta and with_eta to set the tolerance.
AbstentionModel fit_model(const FeatureMatrix& train, const FitOptions& options);

}  // namespace dbff
