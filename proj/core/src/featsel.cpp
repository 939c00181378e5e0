#include "dbff/featsel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "dbff/error.hpp"
#include "json_support.hpp"

namespace dbff {

std::vector<double> chi_square_scores(const FeatureMatrix& m) {
  if (m.class_count() < 2) {
    throw Error(ErrorKind::SingleClass, "chi-square needs at least two classes");
  }
  const std::size_t n = m.rows();
  const std::size_t d = m.cols();
  const std::size_t k = m.class_count();
  const auto labels = m.labels();
  const auto counts = m.class_counts();

  // observed[f * k + c]
  std::vector<double> observed(d * k, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = m.row(r);
    const std::size_t c = labels[r];
    for (std::size_t f = 0; f < d; ++f) {
      if (row[f] < 0.0f) throw Error(ErrorKind::NegativeFeatureValue, "", r + 1, f);
      observed[f * k + c] += static_cast<double>(row[f]);
    }
  }

  std::vector<double> scores(d, 0.0);
  const double total_rows = static_cast<double>(n);
  for (std::size_t f = 0; f < d; ++f) {
    double total = 0.0;
    for (std::size_t c = 0; c < k; ++c) total += observed[f * k + c];
    if (total == 0.0) continue;
    double score = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      // (T * n_c) / n is exact for constant columns, keeping their score at 0.
      const double expected = total * static_cast<double>(counts[c]) / total_rows;
      const double diff = observed[f * k + c] - expected;
      score += diff * diff / expected;
    }
    scores[f] = score;
  }
  return scores;
}

FeatureSelector::FeatureSelector(std::vector<double> scores, std::vector<bool> mask)
    : scores_(std::move(scores)), mask_(std::move(mask)) {
  if (scores_.empty()) throw Error(ErrorKind::InvalidArgument, "selector needs d >= 1");
  if (mask_.size() != scores_.size()) {
    throw Error(ErrorKind::InvalidArgument, "mask and scores differ in length");
  }
  k_ = static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), true));
  if (k_ == 0) throw Error(ErrorKind::KOutOfRange, "selector retains no features");
  double lowest_kept = INFINITY;
  double highest_dropped = -INFINITY;
  for (std::size_t f = 0; f < scores_.size(); ++f) {
    if (!std::isfinite(scores_[f]) || scores_[f] < 0.0) {
      throw Error(ErrorKind::InvalidArgument, "scores must be finite and >= 0");
    }
    if (mask_[f]) {
      lowest_kept = std::min(lowest_kept, scores_[f]);
    } else {
      highest_dropped = std::max(highest_dropped, scores_[f]);
    }
  }
  if (highest_dropped > lowest_kept) {
    throw Error(ErrorKind::InvalidArgument, "a dropped feature outscores a retained one");
  }
}

std::vector<std::size_t> FeatureSelector::retained_indices() const {
  std::vector<std::size_t> out;
  out.reserve(k_);
  for (std::size_t f = 0; f < mask_.size(); ++f) {
    if (mask_[f]) out.push_back(f);
  }
  return out;
}

FeatureSelector select_top_k(std::vector<double> scores, std::size_t k) {
  const std::size_t d = scores.size();
  if (k < 1 || k > d) {
    throw Error(ErrorKind::KOutOfRange,
                "k = " + std::to_string(k) + " outside [1, " + std::to_string(d) + "]");
  }
  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<bool> mask(d, false);
  for (std::size_t i = 0; i < k; ++i) mask[order[i]] = true;
  return FeatureSelector(std::move(scores), std::move(mask));
}

FeatureSelector fit_selector(const FeatureMatrix& m, std::size_t k) {
  if (k < 1 || k > m.cols()) {
    throw Error(ErrorKind::KOutOfRange,
                "k = " + std::to_string(k) + " outside [1, " + std::to_string(m.cols()) + "]");
  }
  return select_top_k(chi_square_scores(m), k);
}

FeatureMatrix apply_selector(const FeatureSelector& sel, const FeatureMatrix& m) {
  if (m.cols() != sel.d_original()) {
    throw Error(ErrorKind::DimensionMismatch, "matrix has " + std::to_string(m.cols()) +
                                                  " columns, selector expects " +
                                                  std::to_string(sel.d_original()));
  }
  const auto keep = sel.retained_indices();
  std::vector<float> values;
  values.reserve(m.rows() * keep.size());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    for (auto f : keep) values.push_back(row[f]);
  }
  return FeatureMatrix(m.rows(), keep.size(), std::move(values),
                       std::vector<ClassIndex>(m.labels().begin(), m.labels().end()),
                       m.class_names());
}

std::vector<double> apply_selector(const FeatureSelector& sel, std::span<const double> sample) {
  if (sample.size() != sel.d_original()) {
    throw Error(ErrorKind::DimensionMismatch, "sample has " + std::to_string(sample.size()) +
                                                  " features, selector expects " +
                                                  std::to_string(sel.d_original()));
  }
  std::vector<double> out;
  out.reserve(sel.k());
  for (std::size_t f = 0; f < sample.size(); ++f) {
    if (sel.mask()[f]) out.push_back(sample[f]);
  }
  return out;
}

FeatureMatrix shift_to_nonnegative(const FeatureMatrix& m) {
  std::vector<float> lowest(m.cols(), 0.0f);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    for (std::size_t f = 0; f < m.cols(); ++f) lowest[f] = std::min(lowest[f], row[f]);
  }
  std::vector<float> values(m.values().begin(), m.values().end());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t f = 0; f < m.cols(); ++f) {
      // Clamp guards against float rounding leaving a tiny negative.
      auto& v = values[r * m.cols() + f];
      if (lowest[f] < 0.0f) v = std::max(0.0f, v - lowest[f]);
    }
  }
  return FeatureMatrix(m.rows(), m.cols(), std::move(values),
                       std::vector<ClassIndex>(m.labels().begin(), m.labels().end()),
                       m.class_names());
}

std::string selector_to_json(const FeatureSelector& sel) {
  return detail::selector_json(sel).dump(2) + "\n";
}

FeatureSelector selector_from_json(const std::string& text) {
  try {
    return detail::selector_from(nlohmann::ordered_json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::CorruptModel, e.what());
  }
}

namespace detail {

nlohmann::ordered_json selector_json(const FeatureSelector& sel) {
  nlohmann::ordered_json j;
  j["d"] = sel.d_original();
  j["k"] = sel.k();
  j["scores"] = sel.scores();
  auto& mask = j["mask"] = nlohmann::ordered_json::array();
  for (bool b : sel.mask()) mask.push_back(b);
  return j;
}

FeatureSelector selector_from(const nlohmann::ordered_json& j) {
  try {
    const auto d = j.at("d").get<std::size_t>();
    const auto k = j.at("k").get<std::size_t>();
    auto scores = j.at("scores").get<std::vector<double>>();
    auto mask = j.at("mask").get<std::vector<bool>>();
    if (scores.size() != d || mask.size() != d) {
      throw Error(ErrorKind::CorruptModel, "selector arrays disagree with d");
    }
    FeatureSelector sel(std::move(scores), std::move(mask));
    if (sel.k() != k) throw Error(ErrorKind::CorruptModel, "selector k disagrees with mask");
    return sel;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::CorruptModel, std::string("selector: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::CorruptModel) throw;
    throw Error(ErrorKind::CorruptModel, std::string("selector: ") + e.what());
  }
}

}  // namespace detail

}  // namespace dbff
