#include "dbff/projection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "dbff/error.hpp"

namespace dbff {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double normalize(std::vector<double>& v) {
  const double norm = std::sqrt(dot(v, v));
  if (norm > 0.0) {
    for (auto& x : v) x /= norm;
  }
  return norm;
}

std::vector<double> multiply(const DenseMatrix& m, const std::vector<double>& v) {
  std::vector<double> out(m.rows(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    for (std::size_t c = 0; c < v.size(); ++c) out[r] += row[c] * v[c];
  }
  return out;
}

void orthogonalize(std::vector<double>& v, const std::vector<std::vector<double>>& basis) {
  for (const auto& b : basis) {
    const double proj = dot(v, b);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= proj * b[i];
  }
}

void fix_sign(std::vector<double>& v) {
  std::size_t arg = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[arg])) arg = i;
  }
  if (v[arg] < 0.0) {
    for (auto& x : v) x = -x;
  }
}

// Dominant eigenvector of `m` restricted to the complement of `basis`.
std::vector<double> dominant(const DenseMatrix& m, const std::vector<std::vector<double>>& basis,
                             std::mt19937_64& rng, const PowerIterationOptions& options) {
  const std::size_t d = m.rows();
  std::vector<double> v(d);
  for (auto& x : v) x = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
  orthogonalize(v, basis);
  if (normalize(v) == 0.0) {
    v.assign(d, 0.0);
    v[basis.size() % d] = 1.0;
    orthogonalize(v, basis);
    normalize(v);
  }
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    auto w = multiply(m, v);
    orthogonalize(w, basis);
    if (normalize(w) == 0.0) break;
    double delta = 0.0;
    for (std::size_t i = 0; i < d; ++i) delta += (w[i] - v[i]) * (w[i] - v[i]);
    v = std::move(w);
    if (std::sqrt(delta) < options.tolerance) break;
  }
  return v;
}

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

DenseMatrix covariance(const DenseMatrix& points) {
  const std::size_t n = points.rows();
  const std::size_t d = points.cols();
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "covariance needs at least two rows");
  std::vector<double> mean(d, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) mean[c] += points(r, c);
  }
  for (auto& m : mean) m /= static_cast<double>(n);
  DenseMatrix cov(d, d);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < d; ++i) {
      const double di = points(r, i) - mean[i];
      for (std::size_t j = i; j < d; ++j) cov(i, j) += di * (points(r, j) - mean[j]);
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      cov(i, j) /= static_cast<double>(n - 1);
      cov(j, i) = cov(i, j);
    }
  }
  return cov;
}

Projection project_top2(const DenseMatrix& points, const PowerIterationOptions& options) {
  if (points.rows() < 3 || points.cols() < 2) {
    throw Error(ErrorKind::InvalidArgument, "projection needs n >= 3 and d >= 2");
  }
  const std::size_t d = points.cols();
  DenseMatrix cov = covariance(points);
  double trace = 0.0;
  for (std::size_t i = 0; i < d; ++i) trace += cov(i, i);

  Projection out;
  std::mt19937_64 rng(options.seed);
  std::vector<std::vector<double>> basis;
  for (std::size_t k = 0; k < 2 && trace > 0.0; ++k) {
    auto v = dominant(cov, basis, rng, options);
    const double lambda = dot(v, multiply(cov, v));
    if (!(lambda > 1e-12 * trace)) break;
    fix_sign(v);
    out.variances[k] = lambda;
    // Deflate so the next pass finds the runner-up eigenpair.
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) cov(i, j) -= lambda * v[i] * v[j];
    }
    basis.push_back(std::move(v));
  }

  if (basis.size() < 2) {
    out.degenerate = true;
    out.warning = "covariance rank < 2; plotting raw coordinates 0 and 1";
    out.variances = {0.0, 0.0};
    for (std::size_t k = 0; k < 2; ++k) {
      out.directions[k].assign(d, 0.0);
      out.directions[k][k] = 1.0;
    }
  } else {
    out.directions = {basis[0], basis[1]};
  }

  out.coords = DenseMatrix(points.rows(), 2);
  for (std::size_t r = 0; r < points.rows(); ++r) {
    const std::vector<double> x(points.row(r).begin(), points.row(r).end());
    out.coords(r, 0) = dot(x, out.directions[0]);
    out.coords(r, 1) = dot(x, out.directions[1]);
  }
  return out;
}

std::string render_scatter_svg(const DenseMatrix& coords, const std::vector<ClassIndex>& labels,
                               const std::vector<std::string>& class_names,
                               const std::optional<std::vector<bool>>& abstained,
                               const ScatterStyle& style) {
  if (coords.cols() != 2 || labels.size() != coords.rows() ||
      (abstained && abstained->size() != coords.rows())) {
    throw Error(ErrorKind::InvalidArgument, "scatter inputs disagree in shape");
  }
  const double margin = 40.0;
  const double w = style.width;
  const double h = style.height;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (std::size_t r = 0; r < coords.rows(); ++r) {
    xmin = std::min(xmin, coords(r, 0));
    xmax = std::max(xmax, coords(r, 0));
    ymin = std::min(ymin, coords(r, 1));
    ymax = std::max(ymax, coords(r, 1));
  }
  auto map = [&](double v, double lo, double hi, double out_lo, double out_hi) {
    if (!(hi > lo)) return 0.5 * (out_lo + out_hi);
    return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo);
  };

  std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(style.width) +
         "\" height=\"" + std::to_string(style.height) + "\" viewBox=\"0 0 " +
         std::to_string(style.width) + " " + std::to_string(style.height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!style.title.empty()) {
    svg += "<text x=\"" + fixed2(w / 2) + "\" y=\"20\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"14\">" + escape_xml(style.title) + "</text>\n";
  }
  svg += "<rect x=\"" + fixed2(margin) + "\" y=\"" + fixed2(margin) + "\" width=\"" +
         fixed2(w - 2 * margin) + "\" height=\"" + fixed2(h - 2 * margin) +
         "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
  svg += "<g>\n";
  for (std::size_t r = 0; r < coords.rows(); ++r) {
    const char* color = kPalette[labels[r] % std::size(kPalette)];
    const double cx = map(coords(r, 0), xmin, xmax, margin, w - margin);
    const double cy = map(coords(r, 1), ymin, ymax, h - margin, margin);
    svg += "<circle cx=\"" + fixed2(cx) + "\" cy=\"" + fixed2(cy) + "\" r=\"3\" ";
    if (abstained && (*abstained)[r]) {
      svg += "fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1\"/>\n";
    } else {
      svg += "fill=\"" + std::string(color) + "\" fill-opacity=\"0.8\"/>\n";
    }
  }
  svg += "</g>\n<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t c = 0; c < class_names.size(); ++c) {
    const double y = margin + 14.0 * static_cast<double>(c) + 10.0;
    svg += "<circle cx=\"" + fixed2(w - margin - 90) + "\" cy=\"" + fixed2(y - 4) +
           "\" r=\"4\" fill=\"" + kPalette[c % std::size(kPalette)] + "\"/>\n";
    svg += "<text x=\"" + fixed2(w - margin - 80) + "\" y=\"" + fixed2(y) + "\">" +
           escape_xml(class_names[c]) + "</text>\n";
  }
  if (abstained) {
    const double y = margin + 14.0 * static_cast<double>(class_names.size()) + 10.0;
    svg += "<circle cx=\"" + fixed2(w - margin - 90) + "\" cy=\"" + fixed2(y - 4) +
           "\" r=\"4\" fill=\"none\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fixed2(w - margin - 80) + "\" y=\"" + fixed2(y) + "\">abstained</text>\n";
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

}  // namespace dbff
