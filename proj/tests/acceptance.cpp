// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "dbff/abstain.hpp"
#include "dbff/cluster.hpp"
#include "dbff/dataio.hpp"
#include "dbff/featsel.hpp"
#include "dbff/metrics.hpp"
#include "dbff/projection.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace dbff;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

DenseMatrix random_points(std::mt19937_64& rng, std::size_t n, std::size_t d, double span) {
  DenseMatrix p(n, d);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      double v = test::uniform_real(rng, 0.0, span);
      if (test::uniform_size(rng, 0, 3) == 0) v = std::round(v);
      p(r, c) = v;
    }
  }
  return p;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[200];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

Verdict chi_square_oracle() {
  Verdict v;
  FeatureMatrix hand(4, 1, {1, 1, 0, 0}, {0, 0, 1, 1}, {"a", "b"});
  v.require(chi_square_scores(hand)[0] == 2.0, "hand example is not exactly 2");
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = test::uniform_size(rng, 4, 64);
    const auto d = test::uniform_size(rng, 1, 16);
    const auto k = test::uniform_size(rng, 2, 4);
    auto m = test::random_matrix(rng, n, d, k);
    auto got = chi_square_scores(m);
    auto want = oracle::chi_square(m);
    for (std::size_t f = 0; f < d; ++f) {
      const double err = std::abs(got[f] - want[f]) / std::max(1.0, std::abs(want[f]));
      worst = std::max(worst, err);
    }
  }
  v.require(worst <= 1e-9, fmt("max relative deviation %.3g", worst));
  if (v.pass) v.detail = fmt("hand example 2.0 exact; max deviation %.3g over 50 matrices", worst);
  return v;
}

Verdict dbscan_oracle() {
  Verdict v;
  std::mt19937_64 rng(1002);
  for (int trial = 0; trial < 100 && v.pass; ++trial) {
    const auto n = test::uniform_size(rng, 1, 200);
    const auto d = test::uniform_size(rng, 1, 5);
    auto pts = random_points(rng, n, d, 10.0);
    const double eps = test::uniform_real(rng, 0.2, 4.0);
    const auto min_pts = test::uniform_size(rng, 1, 10);
    auto got = dbscan(pts, {eps, min_pts});
    auto want = oracle::dbscan(pts, eps, min_pts);
    for (std::size_t i = 0; i < n; ++i) {
      v.require(got.core_flags[i] == want.core[i], "core flag differs");
      v.require((got.assignment[i] != kNoise) == want.clustered[i], "noise split differs");
    }
    // Core points share a cluster id exactly when they share a component.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!want.core[i] || !want.core[j]) continue;
        v.require((got.assignment[i] == got.assignment[j]) ==
                      (want.component[i] == want.component[j]),
                  "core partition differs");
      }
    }
  }
  if (v.pass) v.detail = "100 point sets, core flags, noise split and core partition identical";
  return v;
}

Verdict median_oracle() {
  Verdict v;
  std::mt19937_64 rng(1003);
  std::size_t odd = 0, even = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto n = test::uniform_size(rng, 1, 60);
    if ((n % 2) != static_cast<std::size_t>(trial % 2)) ++n;
    (n % 2 ? odd : even)++;
    auto pts = random_points(rng, n, test::uniform_size(rng, 1, 6), 50.0);
    v.require(coordinate_median(pts) == oracle::median(pts), "median differs");
  }
  if (v.pass) {
    v.detail = std::to_string(odd) + " odd and " + std::to_string(even) + " even sets, exact";
  }
  return v;
}

Verdict calibration_exactness() {
  Verdict v;
  std::mt19937_64 rng(1004);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = test::uniform_size(rng, 1, 300);
    std::vector<double> gaps(n);
    for (std::size_t i = 0; i < n; ++i) gaps[i] = static_cast<double>(i) + test::uniform_real(rng, 0.0, 0.9);
    std::shuffle(gaps.begin(), gaps.end(), rng);
    const double target = test::uniform_real(rng, 0.0, 1.0);
    std::size_t expected = 0;
    while (expected < n && static_cast<double>(expected + 1) / static_cast<double>(n) <= target) {
      ++expected;
    }
    auto cal = calibrate_from_gaps(gaps, target);
    v.require(cal.abstained == expected, "distinct gaps: count differs from floor(target n)");
  }
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = test::uniform_size(rng, 1, 300);
    std::vector<double> gaps(n);
    const auto levels = test::uniform_size(rng, 1, 12);
    for (auto& g : gaps) g = static_cast<double>(test::uniform_size(rng, 0, levels)) * 0.25;
    const double target = test::uniform_real(rng, 0.0, 1.0);
    auto cal = calibrate_from_gaps(gaps, target);
    v.require(cal.abstained == oracle::best_abstention_count(gaps, target),
              "tied gaps: count is not the largest achievable");
    v.require(cal.achieved_rate() <= target, "tied gaps: achieved rate exceeds target");
  }
  if (v.pass) v.detail = "100 distinct and 100 tied gap sets exact";
  return v;
}

Verdict monotonicity() {
  Verdict v;
  std::mt19937_64 rng(1005);
  for (int trial = 0; trial < 100; ++trial) {
    const auto classes = test::uniform_size(rng, 2, 6);
    const auto d = test::uniform_size(rng, 1, 6);
    std::vector<std::vector<double>> c(classes, std::vector<double>(d));
    for (auto& row : c) {
      for (auto& x : row) x = test::uniform_real(rng, -5.0, 5.0);
    }
    std::vector<std::string> names;
    for (std::size_t i = 0; i < classes; ++i) names.push_back("c" + std::to_string(i));
    AbstentionModel model(CentroidSet(c, names, std::vector<ClassFitInfo>(classes)), std::nullopt,
                          0.0, {});
    double e1 = test::uniform_real(rng, 0.0, 4.0), e2 = test::uniform_real(rng, 0.0, 4.0);
    if (e1 > e2) std::swap(e1, e2);
    const auto lo = model.with_eta(e1), hi = model.with_eta(e2);
    for (int s = 0; s < 50; ++s) {
      std::vector<double> x(d);
      for (auto& t : x) t = test::uniform_real(rng, -8.0, 8.0);
      auto a = decide(lo, x), b = decide(hi, x);
      v.require(!a.abstained || b.abstained, "abstained set not nested");
      v.require(a.predicted_class == b.predicted_class, "prediction depends on eta");
    }
  }
  if (v.pass) v.detail = "100 models x 50 samples, nested and prediction-stable";
  return v;
}

SweepReport overlap_sweep() {
  auto splits = test::make_splits(test::overlap_benchmark_spec(), test::kOverlapSeed);
  auto model = fit_model(splits.train, {});
  const std::vector<double> rates{0.0, 0.1, 0.2, 0.3};
  return sweep(model, splits.calibration, splits.test, rates);
}

Verdict overlap_benchmark(const SweepReport& s) {
  Verdict v;
  std::vector<double> acc;
  for (const auto& r : s.rows) acc.push_back(r.retained_accuracy.value_or(-1.0));
  v.require(acc.size() == 4, "expected four sweep rows");
  if (!v.pass) return v;
  v.require(std::abs(acc[0] - 0.90) <= 0.03, fmt("baseline accuracy %.4f", acc[0]));
  for (std::size_t i = 1; i < acc.size(); ++i) {
    v.require(acc[i] >= acc[i - 1], fmt("accuracy drops from %.4f to %.4f", acc[i - 1], acc[i]));
  }
  v.require(acc[3] - acc[0] >= 0.03, fmt("gain at 0.3 is only %.4f", acc[3] - acc[0]));
  if (v.pass) {
    v.detail = fmt("accuracy %.4f -> %.4f -> %.4f", acc[0], acc[1], acc[2]) +
               fmt(" -> %.4f (gain %.4f)", acc[3], acc[3] - acc[0]);
  }
  return v;
}

Verdict noise_benchmark() {
  Verdict v;
  auto splits = test::make_splits(test::noise_benchmark_spec(), test::kNoiseSeed);
  const std::vector<double> rates{0.1};
  auto cmp = compare_selection(splits.train, splits.calibration, splits.test, 8, rates, {});
  std::size_t informative = 0;
  for (auto f : cmp.selector.retained_indices()) informative += f < 8;
  v.require(informative >= 7, std::to_string(informative) + " of 8 informative selected");
  const double without = cmp.without_selection.rows.at(0).retained_accuracy.value_or(-1.0);
  const double with = cmp.with_selection.rows.at(0).retained_accuracy.value_or(-1.0);
  v.require(with >= without, fmt("with %.4f < without %.4f", with, without));
  if (v.pass) {
    v.detail = std::to_string(informative) + "/8 informative kept; accuracy at 10% " +
               fmt("%.4f without, %.4f with", without, with);
  }
  return v;
}

Verdict mistaken_caught(const SweepReport& s) {
  Verdict v;
  const auto& row = s.rows.at(1);
  const double caught = row.mistaken_caught_fraction.value_or(-1.0);
  v.require(caught >= 0.10, fmt("caught fraction %.4f", caught));
  if (v.pass) v.detail = fmt("%.4f of baseline errors abstained at 10%%", caught);
  return v;
}

Verdict round_trips() {
  Verdict v;
  std::mt19937_64 rng(1009);
  test::TempDir dir;
  for (int trial = 0; trial < 100 && v.pass; ++trial) {
    const auto n = test::uniform_size(rng, 12, 60);
    const auto d = test::uniform_size(rng, 1, 8);
    auto m = test::random_matrix(rng, n, d, test::uniform_size(rng, 2, 4));
    FitOptions opts;
    if (trial % 2) opts.k = test::uniform_size(rng, 1, d);
    opts.eps = test::uniform_real(rng, 0.5, 8.0);
    opts.min_pts = test::uniform_size(rng, 1, 5);
    auto model = fit_model(m, opts);
    model = model.with_eta(calibrate_eta(model, m, test::uniform_real(rng, 0.0, 0.5)).eta);

    save_csv(m, dir / "m.csv");
    save_binary(m, dir / "m.fmx");
    save_model(model, dir / "model.json");
    const auto reloaded = load_model(dir / "model.json");
    const auto reference = decide_batch(model, m);
    for (const char* name : {"m.csv", "m.fmx"}) {
      const auto back = load_matrix(dir / name);
      v.require(test::bitwise_equal(back, m), std::string(name) + " values differ");
      const auto decisions = decide_batch(reloaded, back);
      for (std::size_t r = 0; r < n; ++r) {
        v.require(decisions[r].distances == reference[r].distances &&
                      decisions[r].gap == reference[r].gap &&
                      decisions[r].abstained == reference[r].abstained &&
                      decisions[r].predicted_class == reference[r].predicted_class,
                  std::string("decision differs after ") + name + " + model round trip");
      }
    }
  }
  if (v.pass) v.detail = "100 cases, CSV/binary/model JSON decisions bitwise equal";
  return v;
}

DenseMatrix eigengap_cloud(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::normal_distribution<double> normal;
  std::vector<std::vector<double>> basis(d, std::vector<double>(d));
  for (std::size_t i = 0; i < d; ++i) {
    for (auto& x : basis[i]) x = normal(rng);
    for (std::size_t j = 0; j < i; ++j) {
      double dot = 0.0;
      for (std::size_t t = 0; t < d; ++t) dot += basis[i][t] * basis[j][t];
      for (std::size_t t = 0; t < d; ++t) basis[i][t] -= dot * basis[j][t];
    }
    double norm = 0.0;
    for (double x : basis[i]) norm += x * x;
    for (auto& x : basis[i]) x /= std::sqrt(norm);
  }
  std::vector<double> offset(d);
  for (auto& x : offset) x = test::uniform_real(rng, 0.0, 20.0);
  DenseMatrix p(n, d);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t t = 0; t < d; ++t) p(r, t) = offset[t];
    for (std::size_t i = 0; i < d; ++i) {
      const double z = normal(rng) * std::ldexp(8.0, -static_cast<int>(i));
      for (std::size_t t = 0; t < d; ++t) p(r, t) += z * basis[i][t];
    }
  }
  return p;
}

Verdict projection_oracle() {
  Verdict v;
  std::mt19937_64 rng(1010);
  double worst = 1.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = test::uniform_size(rng, 2, 6);
    auto pts = eigengap_cloud(rng, 400, d);
    auto proj = project_top2(pts);
    auto want = oracle::covariance_eigen(pts);
    v.require(!proj.degenerate, "unexpected degenerate projection");
    for (int i = 0; i < 2; ++i) {
      double dot = 0.0;
      for (std::size_t t = 0; t < d; ++t) dot += proj.directions[i][t] * want.vectors[i][t];
      worst = std::min(worst, std::abs(dot));
    }
  }
  v.require(worst >= 1.0 - 1e-6, fmt("min |cosine| %.12f", worst));
  if (v.pass) v.detail = fmt("50 clouds, d in [2, 6], min |cosine| 1 - %.3g", 1.0 - worst);
  return v;
}

Verdict end_to_end_determinism() {
  Verdict v;
  auto pipeline = [&](const test::TempDir& dir) {
    std::ostringstream out, err;
    auto call = [&](std::vector<std::string> args) {
      const int code = cli::run(args, out, err);
      v.require(code == 0, "CLI exited " + std::to_string(code) + ": " + err.str());
    };
    auto p = [&](const char* name) { return (dir / name).string(); };
    const char* shape[] = {"--classes", "3", "--informative", "4", "--noise", "4",
                           "--per-class", "60", "--separation", "4"};
    const char* names[] = {"train.fmx", "calib.fmx", "test.fmx"};
    for (int i = 0; i < 3; ++i) {
      std::vector<std::string> args{"--quiet", "--seed", std::to_string(42 + i), "synth"};
      args.insert(args.end(), std::begin(shape), std::end(shape));
      args.insert(args.end(), {"-o", p(names[i])});
      call(args);
    }
    call({"--quiet", "fit", p("train.fmx"), "--k", "6", "--calib", p("calib.fmx"), "--rate",
          "10%", "-o", p("model.json")});
    call({"--quiet", "sweep", p("train.fmx"), p("calib.fmx"), p("test.fmx"), "--rates",
          "0,0.1,0.2,0.3", "-o", p("sweep.json"), "--csv", p("sweep.csv")});
    call({"--quiet", "--seed", "5", "project", p("test.fmx"), "--model", p("model.json"), "-o",
          p("plot.svg")});
  };
  test::TempDir a, b;
  pipeline(a);
  pipeline(b);
  const char* artifacts[] = {"train.fmx", "calib.fmx", "test.fmx", "model.json",
                             "sweep.json", "sweep.csv", "plot.svg"};
  for (const char* name : artifacts) {
    v.require(read_file_bytes(a / name) == read_file_bytes(b / name),
              std::string(name) + " differs between runs");
  }
  if (v.pass) v.detail = "7 artifacts byte-identical across two runs";
  return v;
}

}  // namespace

int main() {
  const SweepReport overlap = overlap_sweep();
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"chi-square matches contingency oracle", chi_square_oracle},
      {"DBSCAN matches brute-force oracle", dbscan_oracle},
      {"coordinate median matches sort oracle", median_oracle},
      {"calibration hits the exact achievable rate", calibration_exactness},
      {"abstention is monotone in eta", monotonicity},
      {"overlap benchmark accuracy rises with abstention", [&] { return overlap_benchmark(overlap); }},
      {"feature selection recovers informative dims and helps", noise_benchmark},
      {"abstention catches errors better than random removal",
       [&] { return mistaken_caught(overlap); }},
      {"CSV, binary and model round trips preserve decisions", round_trips},
      {"projection matches dense eigendecomposition", projection_oracle},
      {"synth -> fit -> sweep -> project is deterministic", end_to_end_determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("[%s] %2zu. %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                v.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failures),
              criteria.size());
  return failures == 0 ? 0 : 1;
}
