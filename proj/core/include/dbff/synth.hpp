#pragma once

#include <cstddef>
#include <cstdint>

#include "dbff/feature_matrix.hpp"

namespace dbff {

/// Parameters of the synthetic labeled-embedding generator.
struct SynthSpec {
  std::size_t class_count = 3;
  std::size_t informative_dims = 8;
  std::size_t noise_dims = 0;
  std::size_t samples_per_class = 100;
  double cluster_spread = 1.0;       // isotropic per-class standard deviation, >= 0
  double centroid_separation = 10.0;  // pairwise distance between class centers, > 0
  std::uint64_t seed = 0;
};

/// Throws Error{InvalidSpec} when the spec is unusable.
void validate(const SynthSpec& spec);

/// Class centers over the informative columns, one row per class. When
/// class_count <= informative_dims + 1 the centers form a regular simplex
/// with edge length `centroid_separation`, oriented so every informative
/// column has the same between-class variance; otherwise they sit on an
/// integer grid with that spacing. Centers are offset so every coordinate is
/// >= 6 * spread.
DenseMatrix synth_centers(const SynthSpec& spec);

/// Column layout of a generated matrix: [0, informative) informative,
/// then floor(noise/2) constant columns, then the remaining uniform-noise
/// columns (label independent).
struct SynthLayout {
  std::size_t informative_end;
  std::size_t constant_end;
  std::size_t total;
};
SynthLayout synth_layout(const SynthSpec& spec);

/// Generates `samples_per_class` rows per class, class-major, class names
/// "c0", "c1", ... . Informative values are clamped at zero so the result is
/// always a valid chi-square input. Pure function of `spec`.
FeatureMatrix synthesize(const SynthSpec& spec);

}  // namespace dbff
