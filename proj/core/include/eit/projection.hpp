#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eit/annotation.hpp"
#include "eit/matrix.hpp"

namespace eit {

enum class TsneInit { seeded_gaussian, first_two_principal_components };

struct TsneConfig {
  double perplexity = 30.0;
  int iterations = 1000;
  double learning_rate = 200.0;
  double early_exaggeration = 12.0;
  int exaggeration_iterations = 250;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  int momentum_switch_iteration = 250;
  std::uint64_t seed = 42;
  TsneInit init = TsneInit::seeded_gaussian;
};

/// Perplexity actually used for n points: min(perplexity, (n - 1) / 3).
double effective_perplexity(double requested, std::size_t n);

/// Per-point Gaussian conditionals p_{j|i} (rows sum to 1, zero diagonal).
struct ConditionalAffinities {
  Matrix p;
  std::vector<double> beta;        // 1 / (2 sigma^2), in units of the scaled distances
  std::vector<double> perplexity;  // achieved exp(H(P_i))
};

/// Squared Euclidean distances between rows.
Matrix pairwise_squared_distances(const Matrix& x);

/// Bisection on each row's precision until exp(H) is within `tolerance` of
/// `perplexity` (at most 64 steps). Distances are scaled by their maximum.
ConditionalAffinities conditional_affinities(const Matrix& squared_distances, double perplexity,
                                             double tolerance = 1e-5);

/// (P + P^T) / 2n: symmetric, zero diagonal, entries sum to 1.
Matrix joint_affinities(const Matrix& conditional);

/// KL(P || Q) for 2-D coordinates `y`. Probabilities are floored at 1e-12 inside the logarithm.
double kl_divergence(const Matrix& joint_p, const Matrix& y);

/// Gradient of the KL cost with P scaled by `exaggeration`.
Matrix kl_gradient(const Matrix& joint_p, const Matrix& y, double exaggeration = 1.0);

struct TsneResult {
  Matrix coordinates;            // n x 2
  std::vector<double> kl_trace;  // KL before the first step, then after each iteration
  double perplexity = 0.0;       // after clamping
};

/// Exact t-SNE of the rows of `x` into two dimensions. Rows identical to an
/// earlier row are jittered by seeded noise of magnitude 1e-10 first.
/// Throws InvalidArgument for fewer than 4 rows, non-finite input or an
/// invalid configuration.
TsneResult tsne(const Matrix& x, const TsneConfig& config);

/// Projection onto the two leading principal components (power iteration).
Matrix principal_components_2d(const Matrix& x);

struct ProjectedPoint {
  std::string normalized_text;
  double x = 0.0;
  double y = 0.0;
  std::optional<EarnestClass> class_hint;
};

enum class ScatterFormat { csv, svg };

/// CSV columns text,x,y,class (17 significant digits) or an SVG scatter with
/// one circle per point colored by class and a legend of the classes present.
/// Throws InvalidArgument for no points and DataError when `path` cannot be written.
void export_scatter(std::span<const ProjectedPoint> points, const std::string& path, ScatterFormat format);
void write_scatter_csv(std::ostream& out, std::span<const ProjectedPoint> points);
void write_scatter_svg(std::ostream& out, std::span<const ProjectedPoint> points);
std::vector<ProjectedPoint> read_scatter_csv(std::istream& in);

}  // namespace eit
