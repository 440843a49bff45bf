#include "eit/projection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "eit/csv.hpp"
#include "eit/error.hpp"
#include "eit/random.hpp"

namespace eit {

namespace {

constexpr double kProbabilityFloor = 1e-12;
constexpr double kDuplicateJitter = 1e-10;
constexpr int kMaxBisectionSteps = 64;

}  // namespace

double effective_perplexity(double requested, std::size_t n) {
  const double cap = (static_cast<double>(n) - 1.0) / 3.0;
  return std::min(requested, cap);
}

Matrix pairwise_squared_distances(const Matrix& x) {
  const std::size_t n = x.rows();
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = squared_euclidean(x.row(i), x.row(j));
      d(i, j) = v;
      d(j, i) = v;
    }
  }
  return d;
}

ConditionalAffinities conditional_affinities(const Matrix& squared_distances, double perplexity, double tolerance) {
  const std::size_t n = squared_distances.rows();
  if (n < 2) throw InvalidArgument("conditional_affinities: need at least two points");
  if (!(perplexity > 0.0)) throw InvalidArgument("perplexity must be positive");

  double max_d = 0.0;
  for (double v : squared_distances.data()) max_d = std::max(max_d, v);
  const double scale = max_d > 0.0 ? 1.0 / max_d : 1.0;

  ConditionalAffinities out{Matrix(n, n), std::vector<double>(n), std::vector<double>(n)};
  const double log_target = std::log(perplexity);
  std::vector<double> shifted(n);
  std::vector<double> row(n);

  for (std::size_t i = 0; i < n; ++i) {
    double min_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) min_d = std::min(min_d, squared_distances(i, j) * scale);
    for (std::size_t j = 0; j < n; ++j) shifted[j] = j == i ? 0.0 : squared_distances(i, j) * scale - min_d;

    // Entropy of the row at precision beta; shifting distances leaves it unchanged.
    auto evaluate = [&](double beta) {
      double sum = 0.0, weighted = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        row[j] = j == i ? 0.0 : std::exp(-beta * shifted[j]);
        sum += row[j];
        weighted += row[j] * shifted[j];
      }
      return std::log(sum) + beta * weighted / sum;
    };

    double beta = 1.0;
    double lo = -1.0, hi = -1.0;  // negative: bound not yet found
    double best_beta = beta, best_err = std::numeric_limits<double>::infinity();
    for (int step = 0; step < kMaxBisectionSteps; ++step) {
      const double entropy = evaluate(beta);
      const double err = std::abs(std::exp(entropy) - perplexity);
      if (err < best_err) best_err = err, best_beta = beta;
      if (err < tolerance) break;
      if (entropy > log_target) {
        lo = beta;
        beta = hi < 0.0 ? beta * 2.0 : 0.5 * (beta + hi);
      } else {
        hi = beta;
        beta = lo < 0.0 ? beta * 0.5 : 0.5 * (beta + lo);
      }
    }
    const double entropy = evaluate(best_beta);
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += row[j];
    for (std::size_t j = 0; j < n; ++j) out.p(i, j) = row[j] / sum;
    out.beta[i] = best_beta;
    out.perplexity[i] = std::exp(entropy);
  }
  return out;
}

Matrix joint_affinities(const Matrix& conditional) {
  const std::size_t n = conditional.rows();
  Matrix p(n, n);
  const double denom = 2.0 * static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) p(i, j) = (conditional(i, j) + conditional(j, i)) / denom;
  return p;
}

namespace {

/// Student-t kernel w_ij = 1 / (1 + |y_i - y_j|^2) and its off-diagonal sum.
double student_kernel(const Matrix& y, Matrix& w) {
  const std::size_t n = y.rows();
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w(i, i) = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = 1.0 / (1.0 + squared_euclidean(y.row(i), y.row(j)));
      w(i, j) = v;
      w(j, i) = v;
      z += 2.0 * v;
    }
  }
  return z;
}

}  // namespace

double kl_divergence(const Matrix& joint_p, const Matrix& y) {
  const std::size_t n = y.rows();
  Matrix w(n, n);
  const double z = student_kernel(y, w);
  double kl = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double p = joint_p(i, j);
      if (i == j || p <= 0.0) continue;
      const double q = w(i, j) / z;
      kl += p * std::log(std::max(p, kProbabilityFloor) / std::max(q, kProbabilityFloor));
    }
  }
  return kl;
}

Matrix kl_gradient(const Matrix& joint_p, const Matrix& y, double exaggeration) {
  const std::size_t n = y.rows();
  const std::size_t dims = y.cols();
  Matrix w(n, n);
  const double z = student_kernel(y, w);
  Matrix grad(n, dims);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double mult = (exaggeration * joint_p(i, j) - w(i, j) / z) * w(i, j);
      for (std::size_t d = 0; d < dims; ++d) grad(i, d) += 4.0 * mult * (y(i, d) - y(j, d));
    }
  }
  return grad;
}

Matrix principal_components_2d(const Matrix& x) {
  const std::size_t n = x.rows();
  const std::size_t dims = x.cols();
  Matrix centered = x;
  const auto mean = [&] {
    std::vector<double> m(dims, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t d = 0; d < dims; ++d) m[d] += x(i, d);
    for (double& v : m) v /= static_cast<double>(n);
    return m;
  }();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 0; d < dims; ++d) centered(i, d) -= mean[d];

  std::vector<std::vector<double>> components;
  for (int c = 0; c < 2; ++c) {
    std::vector<double> v(dims);
    for (std::size_t d = 0; d < dims; ++d) v[d] = 1.0 + 0.01 * static_cast<double>((d * 7 + c * 3) % 11);
    for (int iter = 0; iter < 500; ++iter) {
      std::vector<double> xv(n, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 0; d < dims; ++d) xv[i] += centered(i, d) * v[d];
      std::vector<double> next(dims, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 0; d < dims; ++d) next[d] += centered(i, d) * xv[i];
      for (const auto& prev : components) {
        double dot = 0.0;
        for (std::size_t d = 0; d < dims; ++d) dot += next[d] * prev[d];
        for (std::size_t d = 0; d < dims; ++d) next[d] -= dot * prev[d];
      }
      const double norm = l2_norm(next);
      if (norm == 0.0) break;
      double change = 0.0;
      for (std::size_t d = 0; d < dims; ++d) {
        next[d] /= norm;
        change = std::max(change, std::abs(next[d] - v[d]));
      }
      v = std::move(next);
      if (change < 1e-12) break;
    }
    // Sign convention: the largest-magnitude loading is positive.
    const auto big = std::max_element(v.begin(), v.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
    if (big != v.end() && *big < 0.0)
      for (double& e : v) e = -e;
    components.push_back(std::move(v));
  }

  Matrix out(n, 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < 2; ++c)
      for (std::size_t d = 0; d < dims; ++d) out(i, c) += centered(i, d) * components[c][d];
  return out;
}

TsneResult tsne(const Matrix& x, const TsneConfig& config) {
  const std::size_t n = x.rows();
  if (n < 4) throw InvalidArgument("t-SNE needs at least 4 points");
  if (config.iterations < 1) throw InvalidArgument("iterations must be at least 1");
  if (!(config.perplexity > 0.0)) throw InvalidArgument("perplexity must be positive");
  if (!(config.learning_rate > 0.0)) throw InvalidArgument("learning_rate must be positive");
  for (double v : x.data())
    if (!std::isfinite(v)) throw InvalidArgument("t-SNE input contains non-finite values");

  Matrix input = x;
  {
    Rng jitter(splitmix64(config.seed ^ 0x6a09e667f3bcc908ULL));
    std::set<std::vector<double>> seen;
    for (std::size_t i = 0; i < n; ++i) {
      const auto r = x.row(i);
      if (seen.emplace(r.begin(), r.end()).second) continue;
      for (double& v : input.row(i)) v += kDuplicateJitter * jitter.normal();
    }
  }

  TsneResult result;
  result.perplexity = effective_perplexity(config.perplexity, n);
  const auto cond = conditional_affinities(pairwise_squared_distances(input), result.perplexity);
  const Matrix p = joint_affinities(cond.p);

  Matrix y(n, 2);
  if (config.init == TsneInit::first_two_principal_components) {
    y = principal_components_2d(input);
    double mean = 0.0, var = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += y(i, 0);
    mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) var += (y(i, 0) - mean) * (y(i, 0) - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    const double s = sd > 0.0 ? 1e-4 / sd : 1.0;
    for (double& v : y.data()) v *= s;
  } else {
    Rng rng(config.seed);
    for (double& v : y.data()) v = 1e-4 * rng.normal();
  }

  Matrix velocity(n, 2), gains(n, 2, 1.0);
  result.kl_trace.reserve(static_cast<std::size_t>(config.iterations) + 1);
  result.kl_trace.push_back(kl_divergence(p, y));
  for (int iter = 0; iter < config.iterations; ++iter) {
    const double exaggeration = iter < config.exaggeration_iterations ? config.early_exaggeration : 1.0;
    const double momentum = iter < config.momentum_switch_iteration ? config.initial_momentum : config.final_momentum;
    const Matrix grad = kl_gradient(p, y, exaggeration);
    for (std::size_t k = 0; k < n * 2; ++k) {
      const double g = grad.data()[k];
      double& gain = gains.data()[k];
      double& vel = velocity.data()[k];
      gain = (g > 0.0) != (vel > 0.0) ? gain + 0.2 : gain * 0.8;
      gain = std::max(gain, 0.01);
      vel = momentum * vel - config.learning_rate * gain * g;
      y.data()[k] += vel;
    }
    for (std::size_t d = 0; d < 2; ++d) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += y(i, d);
      mean /= static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) y(i, d) -= mean;
    }
    result.kl_trace.push_back(kl_divergence(p, y));
  }
  for (double v : y.data())
    if (!std::isfinite(v)) throw Error("t-SNE diverged to non-finite coordinates");
  result.coordinates = std::move(y);
  return result;
}

namespace {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string class_name(const std::optional<EarnestClass>& c) {
  return c ? std::string(to_string(*c)) : std::string("unlabeled");
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(ch);
    }
  }
  return out;
}

struct ClassStyle {
  const char* name;
  const char* color;
};

constexpr ClassStyle kStyles[] = {
    {"non_earnest", "#d62728"}, {"neutral", "#7f7f7f"}, {"earnest", "#1f77b4"}, {"unlabeled", "#bcbd22"}};

const char* color_of(const std::string& name) {
  for (const auto& s : kStyles)
    if (name == s.name) return s.color;
  return "#000000";
}

}  // namespace

void write_scatter_csv(std::ostream& out, std::span<const ProjectedPoint> points) {
  csv::write_row(out, {"text", "x", "y", "class"});
  for (const auto& p : points) csv::write_row(out, {p.normalized_text, format_g17(p.x), format_g17(p.y), class_name(p.class_hint)});
}

std::vector<ProjectedPoint> read_scatter_csv(std::istream& in) {
  std::vector<ProjectedPoint> out;
  const auto records = csv::read_all(in);
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& f = records[i].fields;
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != 4) throw DataError("scatter csv line " + std::to_string(records[i].line) + ": expected 4 fields");
    ProjectedPoint p;
    p.normalized_text = f[0];
    p.x = std::strtod(f[1].c_str(), nullptr);
    p.y = std::strtod(f[2].c_str(), nullptr);
    if (f[3] != "unlabeled") p.class_hint = parse_class(f[3]);
    out.push_back(std::move(p));
  }
  return out;
}

void write_scatter_svg(std::ostream& out, std::span<const ProjectedPoint> points) {
  constexpr double width = 640, height = 480, margin = 40, legend_width = 140;
  double min_x = points.front().x, max_x = min_x, min_y = points.front().y, max_y = min_y;
  for (const auto& p : points) {
    min_x = std::min(min_x, p.x), max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y), max_y = std::max(max_y, p.y);
  }
  const double span_x = max_x > min_x ? max_x - min_x : 1.0;
  const double span_y = max_y > min_y ? max_y - min_y : 1.0;
  const double plot_w = width - 2 * margin - legend_width;
  const double plot_h = height - 2 * margin;

  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"#ffffff\"/>\n";
  out << "<g class=\"points\">\n";
  std::set<std::string> present;
  for (const auto& p : points) {
    const auto name = class_name(p.class_hint);
    present.insert(name);
    const double px = margin + (p.x - min_x) / span_x * plot_w;
    const double py = height - margin - (p.y - min_y) / span_y * plot_h;
    std::snprintf(buf, sizeof buf, "<circle class=\"marker %s\" cx=\"%.3f\" cy=\"%.3f\" r=\"3\" fill=\"%s\">",
                  name.c_str(), px, py, color_of(name));
    out << buf << "<title>" << xml_escape(p.normalized_text) << "</title></circle>\n";
  }
  out << "</g>\n<g class=\"legend\">\n";
  double ly = margin;
  for (const auto& style : kStyles) {
    if (!present.contains(style.name)) continue;
    std::snprintf(buf, sizeof buf,
                  "<g class=\"legend-entry\"><circle cx=\"%.1f\" cy=\"%.1f\" r=\"5\" fill=\"%s\"/>"
                  "<text x=\"%.1f\" y=\"%.1f\" font-size=\"12\">%s</text></g>\n",
                  width - legend_width + 10, ly, style.color, width - legend_width + 20, ly + 4, style.name);
    out << buf;
    ly += 20;
  }
  out << "</g>\n</svg>\n";
}

void export_scatter(std::span<const ProjectedPoint> points, const std::string& path, ScatterFormat format) {
  if (points.empty()) throw InvalidArgument("export_scatter: no points");
  for (const auto& p : points)
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw InvalidArgument("export_scatter: non-finite coordinate");
  std::ostringstream ss;
  if (format == ScatterFormat::csv) {
    write_scatter_csv(ss, points);
  } else {
    write_scatter_svg(ss, points);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  out << ss.str();
  if (!out) throw DataError("failed writing " + path);
}

}  // namespace eit
