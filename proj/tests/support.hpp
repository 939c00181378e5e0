#pragma once

// Shared helpers for the unit and acceptance suites: random generators,
// bitwise comparisons, scratch directories and the seeded benchmarks.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "dbff/feature_matrix.hpp"
#include "dbff/synth.hpp"

namespace dbff::test {

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("dbff-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::size_t uniform_size(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random labeled matrix. Values are drawn from [lo, hi); some cells are
/// rounded to small integers so ties and exact zeros show up.
inline FeatureMatrix random_matrix(std::mt19937_64& rng, std::size_t n, std::size_t d,
                                   std::size_t classes, double lo = 0.0, double hi = 10.0) {
  std::vector<float> values(n * d);
  for (auto& v : values) {
    double x = uniform_real(rng, lo, hi);
    if (uniform_size(rng, 0, 4) == 0) x = std::round(x);
    v = static_cast<float>(x);
  }
  std::vector<ClassIndex> labels(n);
  for (std::size_t r = 0; r < n; ++r) {
    // First rows cover every class so none is empty.
    labels[r] = static_cast<ClassIndex>(r < classes ? r : uniform_size(rng, 0, classes - 1));
  }
  std::vector<std::string> names;
  for (std::size_t c = 0; c < classes; ++c) names.push_back("class-" + std::to_string(c));
  return FeatureMatrix(n, d, std::move(values), std::move(labels), std::move(names));
}

inline bool bitwise_equal(const FeatureMatrix& a, const FeatureMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.class_names() != b.class_names()) {
    return false;
  }
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    if (std::bit_cast<std::uint32_t>(a.values()[i]) != std::bit_cast<std::uint32_t>(b.values()[i])) {
      return false;
    }
  }
  return std::equal(a.labels().begin(), a.labels().end(), b.labels().begin());
}

struct Splits {
  FeatureMatrix train;
  FeatureMatrix calibration;
  FeatureMatrix test;
};

inline Splits make_splits(SynthSpec spec, std::uint64_t seed) {
  spec.seed = seed;
  FeatureMatrix train = synthesize(spec);
  spec.seed = seed + 1;
  FeatureMatrix calibration = synthesize(spec);
  spec.seed = seed + 2;
  FeatureMatrix test = synthesize(spec);
  return {std::move(train), std::move(calibration), std::move(test)};
}

/// Three overlapping 2-D Gaussians; nearest-centroid accuracy is ~0.9.
inline SynthSpec overlap_benchmark_spec() {
  SynthSpec spec;
  spec.class_count = 3;
  spec.informative_dims = 2;
  spec.noise_dims = 0;
  spec.samples_per_class = 300;
  spec.cluster_spread = 1.0;
  spec.centroid_separation = 3.1;
  return spec;
}
inline constexpr std::uint64_t kOverlapSeed = 11;

/// 8 informative + 8 label-independent columns (4 constant, 4 uniform).
inline SynthSpec noise_benchmark_spec() {
  SynthSpec spec;
  spec.class_count = 3;
  spec.informative_dims = 8;
  spec.noise_dims = 8;
  spec.samples_per_class = 200;
  spec.cluster_spread = 1.0;
  spec.centroid_separation = 4.0;
  return spec;
}
inline constexpr std::uint64_t kNoiseSeed = 21;

}  // namespace dbff::test
