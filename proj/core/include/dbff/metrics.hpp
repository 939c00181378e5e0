#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dbff/abstain.hpp"
#include "dbff/feature_matrix.hpp"

namespace dbff {

// Undefined quantities (no retained samples of a class, no baseline errors,
// nothing retained) are std::nullopt and are omitted from serialized
// reports, never written as 0.

struct ClassMetrics {
  std::string name;
  std::optional<double> sensitivity;  // TP / (TP + FN) over retained samples
  std::optional<double> ppv;          // TP / (TP + FP) over retained predictions
  std::size_t support_retained = 0;   // retained samples whose true class this is
};

struct SelectiveReport {
  std::optional<double> target_rate;
  std::optional<double> eta;
  std::optional<double> calibration_rate;  // achieved on the calibration split
  double achieved_rate = 0.0;
  std::size_t total = 0;
  std::size_t retained = 0;
  std::optional<double> retained_accuracy;
  std::vector<ClassMetrics> per_class;
  std::vector<std::size_t> abstained_indices;
  std::optional<double> mistaken_caught_fraction;  // abstained errors / all errors
};

struct DatasetMeta {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<std::string> class_names;
  std::vector<std::size_t> class_counts;
};

struct SweepReport {
  std::vector<SelectiveReport> rows;  // ascending target_rate
  DatasetMeta dataset;
};

struct PpvDelta {
  double target_rate = 0.0;
  std::string class_name;
  std::optional<double> delta;  // with-selection minus without
};

struct SelectionComparison {
  SweepReport without_selection;
  SweepReport with_selection;
  FeatureSelector selector;
  DbscanParams params;
  std::vector<PpvDelta> ppv_deltas;
};

/// Selective metrics over `decisions` against true `labels`. Throws
/// Error{LengthMismatch} when lengths differ and Error{InvalidArgument} on
/// an empty input or out-of-range class index.
SelectiveReport evaluate(std::span<const Decision> decisions, std::span<const ClassIndex> labels,
                         const std::vector<std::string>& class_names);

DatasetMeta describe(const FeatureMatrix& m);

/// Per distinct rate (ascending): calibrate eta on `calibration`, decide on
/// `test`, evaluate. The model's own eta is ignored. Throws
/// Error{InvalidArgument} for a rate outside [0, 1].
SweepReport sweep(const AbstentionModel& model, const FeatureMatrix& calibration,
                  const FeatureMatrix& test, std::span<const double> rates);

/// Fits the pipeline twice on `train` (all features, then chi-square top-k)
/// with the same DBSCAN parameters, resolved once on the raw training
/// features, and sweeps both.
SelectionComparison compare_selection(const FeatureMatrix& train, const FeatureMatrix& calibration,
                                      const FeatureMatrix& test, std::size_t k,
                                      std::span<const double> rates, const FitOptions& options);

std::string report_to_json(const SelectiveReport& report);
std::string report_to_json(const SweepReport& report);
std::string report_to_json(const SelectionComparison& comparison);

/// One line per (row, class): target_rate,achieved_rate,eta,
/// retained_accuracy,class,sensitivity,ppv,support_retained. Absent values
/// are empty fields.
std::string report_to_csv(const SweepReport& report);

}  // namespace dbff
