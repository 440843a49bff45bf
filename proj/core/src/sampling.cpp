#include "eit/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "eit/classifier.hpp"
#include "eit/csv.hpp"
#include "eit/error.hpp"
#include "eit/random.hpp"

namespace eit {

void SamplerConfig::validate() const {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw InvalidArgument("tail_fraction must be in (0, 1]");
  if (!(per_metric_fraction > 0.0 && per_metric_fraction <= 1.0))
    throw InvalidArgument("per_metric_fraction must be in (0, 1]");
  if (target_n < 1) throw InvalidArgument("target_n must be at least 1");
}

SampleResult rule_based_sample(std::span<const FeatureRow> rows, const SamplerConfig& config) {
  config.validate();
  if (rows.empty()) throw InvalidArgument("rule_based_sample: no unique responses");
  const std::size_t u = rows.size();
  const std::size_t tail_size = std::max<std::size_t>(1, fraction_count(config.tail_fraction, u));
  const std::size_t draw_size = std::max<std::size_t>(1, fraction_count(config.per_metric_fraction, u));
  const std::size_t rest_size = u - tail_size;

  Rng rng(config.seed);
  SampleResult result;
  std::vector<std::size_t> union_order;
  std::map<std::size_t, std::vector<Metric>> provenance;

  for (std::size_t m = 0; m < kAllMetrics.size(); ++m) {
    MetricDraw& draw = result.draws[m];
    draw.metric = kAllMetrics[m];
    const auto order = non_earnest_order(draw.metric, rows);
    draw.tail.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(tail_size));
    // Equal total mass for T and R; with an empty R every row weighs the same.
    draw.tail_weight = rest_size == 0 ? 1 : rest_size;
    draw.rest_weight = tail_size;

    std::vector<std::uint64_t> weights(u, draw.rest_weight);
    for (auto i : draw.tail) weights[i] = draw.tail_weight;
    draw.drawn = weighted_sample_without_replacement(weights, draw_size, rng);
    for (auto i : draw.drawn) {
      auto& metrics = provenance[i];
      if (metrics.empty()) union_order.push_back(i);
      metrics.push_back(draw.metric);
    }
  }

  result.union_size = union_order.size();
  std::vector<std::size_t> chosen = union_order;
  if (union_order.size() > config.target_n) {
    auto positions = uniform_sample_without_replacement(union_order.size(), config.target_n, rng);
    std::sort(positions.begin(), positions.end());  // keep union order
    chosen.clear();
    for (auto pos : positions) chosen.push_back(union_order[pos]);
  }
  for (auto i : chosen) result.items.push_back({rows[i].normalized_text, provenance[i]});
  return result;
}

void write_sample_file(std::ostream& out, const SampleResult& sample) {
  csv::write_row(out, {"normalized_text", "metrics"});
  for (const auto& item : sample.items) {
    std::string metrics;
    for (auto m : item.metrics) {
      if (!metrics.empty()) metrics += ';';
      metrics += to_string(m);
    }
    csv::write_row(out, {item.normalized_text, metrics});
  }
}

}  // namespace eit
