#include "dbff/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "dbff/error.hpp"

namespace dbff {

namespace {

// The standard distributions are implementation-defined; mt19937_64 output
// is not, so draws are derived from raw engine words to stay reproducible
// across standard libraries.
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in the open interval (0, 1).
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

// dims x m matrix with orthonormal columns and rows of equal norm (m <= dims),
// built from real Fourier vectors: cos/sin pairs first, then the constant
// and alternating vectors as needed.
DenseMatrix equal_norm_frame(std::size_t dims, std::size_t m) {
  DenseMatrix frame(dims, m);
  const double n = static_cast<double>(dims);
  const std::size_t pairs = (dims - 1) / 2;
  const bool odd = m % 2 == 1;
  std::size_t use_pairs = std::min(odd ? (m - 1) / 2 : m / 2, pairs);
  std::size_t col = 0;
  for (std::size_t k = 1; k <= use_pairs; ++k) {
    for (std::size_t i = 0; i < dims; ++i) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>(k * i) / n;
      frame(i, col) = std::sqrt(2.0 / n) * std::cos(angle);
      frame(i, col + 1) = std::sqrt(2.0 / n) * std::sin(angle);
    }
    col += 2;
  }
  if (col < m) {
    for (std::size_t i = 0; i < dims; ++i) frame(i, col) = 1.0 / std::sqrt(n);
    ++col;
  }
  if (col < m) {
    for (std::size_t i = 0; i < dims; ++i) {
      frame(i, col) = (i % 2 == 0 ? 1.0 : -1.0) / std::sqrt(n);
    }
    ++col;
  }
  return frame;
}

}  // namespace

void validate(const SynthSpec& spec) {
  if (spec.class_count < 1) throw Error(ErrorKind::InvalidSpec, "class_count must be >= 1");
  if (spec.class_count > 0xffffffffu) throw Error(ErrorKind::InvalidSpec, "class_count too large");
  if (spec.informative_dims < 1) throw Error(ErrorKind::InvalidSpec, "informative_dims must be >= 1");
  if (spec.samples_per_class < 1) {
    throw Error(ErrorKind::InvalidSpec, "samples_per_class must be >= 1");
  }
  if (!std::isfinite(spec.cluster_spread) || spec.cluster_spread < 0.0) {
    throw Error(ErrorKind::InvalidSpec, "cluster_spread must be finite and >= 0");
  }
  if (!std::isfinite(spec.centroid_separation) || spec.centroid_separation <= 0.0) {
    throw Error(ErrorKind::InvalidSpec, "centroid_separation must be finite and > 0");
  }
}

DenseMatrix synth_centers(const SynthSpec& spec) {
  validate(spec);
  const std::size_t classes = spec.class_count;
  const std::size_t dims = spec.informative_dims;
  const double sep = spec.centroid_separation;
  DenseMatrix centers(classes, dims);

  if (classes <= dims + 1) {
    // Regular simplex in R^(classes-1) via the Helmert basis, mapped into the
    // informative columns by an orthonormal frame whose rows all have equal
    // norm, so each column carries the same between-class variance.
    const std::size_t m = classes - 1;
    auto helmert = [](std::size_t j, std::size_t c) {  // j in [1, m]
      const double norm = std::sqrt(static_cast<double>(j * (j + 1)));
      if (c < j) return 1.0 / norm;
      if (c == j) return -static_cast<double>(j) / norm;
      return 0.0;
    };
    const auto frame = equal_norm_frame(dims, m);
    const double scale = sep / std::numbers::sqrt2;
    for (std::size_t c = 0; c < classes; ++c) {
      for (std::size_t i = 0; i < dims; ++i) {
        double v = 0.0;
        for (std::size_t j = 0; j < m; ++j) v += frame(i, j) * helmert(j + 1, c);
        centers(c, i) = scale * v;
      }
    }
  } else {
    std::size_t base = 2;
    while (std::pow(static_cast<double>(base), static_cast<double>(dims)) <
           static_cast<double>(classes)) {
      ++base;
    }
    for (std::size_t c = 0; c < classes; ++c) {
      std::size_t rest = c;
      for (std::size_t i = 0; i < dims; ++i) {
        centers(c, i) = sep * static_cast<double>(rest % base);
        rest /= base;
      }
    }
  }

  double lowest = 0.0;
  for (double v : centers.data()) lowest = std::min(lowest, v);
  const double shift = 6.0 * spec.cluster_spread - lowest;
  for (std::size_t c = 0; c < classes; ++c) {
    for (auto& v : centers.row(c)) v += shift;
  }
  return centers;
}

SynthLayout synth_layout(const SynthSpec& spec) {
  const std::size_t constant = spec.noise_dims / 2;
  return {spec.informative_dims, spec.informative_dims + constant,
          spec.informative_dims + spec.noise_dims};
}

FeatureMatrix synthesize(const SynthSpec& spec) {
  validate(spec);
  const DenseMatrix centers = synth_centers(spec);
  const SynthLayout layout = synth_layout(spec);
  const std::size_t n = spec.class_count * spec.samples_per_class;
  const std::size_t d = layout.total;

  double level = 0.0;
  for (double v : centers.data()) level += v;
  level /= static_cast<double>(centers.data().size());
  const double noise_level = std::max(level, spec.centroid_separation);

  PortableRng rng(spec.seed);
  std::vector<float> values;
  values.reserve(n * d);
  std::vector<ClassIndex> labels;
  labels.reserve(n);

  for (std::size_t c = 0; c < spec.class_count; ++c) {
    for (std::size_t s = 0; s < spec.samples_per_class; ++s) {
      for (std::size_t i = 0; i < layout.informative_end; ++i) {
        double v = centers(c, i) + spec.cluster_spread * rng.normal();
        values.push_back(static_cast<float>(std::max(0.0, v)));
      }
      for (std::size_t i = layout.informative_end; i < layout.constant_end; ++i) {
        values.push_back(static_cast<float>(noise_level));
      }
      for (std::size_t i = layout.constant_end; i < layout.total; ++i) {
        values.push_back(static_cast<float>(2.0 * noise_level * rng.uniform()));
      }
      labels.push_back(static_cast<ClassIndex>(c));
    }
  }

  std::vector<std::string> names;
  for (std::size_t c = 0; c < spec.class_count; ++c) names.push_back("c" + std::to_string(c));
  return FeatureMatrix(n, d, std::move(values), std::move(labels), std::move(names));
}

}  // namespace dbff
