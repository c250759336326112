#pragma once

#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbfs/generators.hpp"
#include "bbfs/io.hpp"
#include "bbfs/search.hpp"

namespace bbfs {

struct ModelConfig {
  Model model = Model::chung_lu;
  double tau = 2.5;
  std::optional<double> alpha;
  std::optional<int> dim;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

enum class PairPolicy { uniform, giant };

struct RunPlan {
  std::vector<ModelConfig> models;
  std::vector<std::size_t> sizes;  // target vertex counts
  std::size_t graphs_per_config = 3;
  std::size_t pairs_per_graph = 100;
  std::vector<Algorithm> algorithms{Algorithm::vba, Algorithm::vbe, Algorithm::lb,
                                    Algorithm::lbes};
  PairPolicy pair_policy = PairPolicy::uniform;
  std::uint64_t master_seed = 1;
  double target_avg_degree = 10.0;
  /// A sampled graph is accepted once its giant component covers this
  /// fraction of vertices; otherwise the next derived seed is tried.
  double connect_threshold = 0.99;
  std::size_t connect_attempts = 20;
  std::size_t threads = 1;

  /// Throws std::invalid_argument when a count is zero or a model is invalid.
  void validate() const;
  std::size_t config_count() const noexcept { return models.size() * sizes.size(); }
};

class PlanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses the line-oriented plan grammar (see README). Throws PlanError with
/// the offending line number.
RunPlan parse_plan(std::istream& in);

/// Vertex count giving `edges` expected edges at the given average degree.
std::size_t vertices_for_edges(double edges, double avg_degree);

/// Runs every (config, graph, pair, algorithm) combination in that order.
/// Generation failures skip the config and are reported to `log`.
std::vector<ExperimentRecord> run_plan(const RunPlan& plan, std::ostream* log = nullptr);

/// Lower median (element (k-1)/2 of the sorted values); values must be nonempty.
template <class T>
T lower_median(std::span<const T> values) {
  std::vector<T> sorted(values.begin(), values.end());
  const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>((sorted.size() - 1) / 2);
  std::nth_element(sorted.begin(), mid, sorted.end());
  return *mid;
}

struct ExponentSummary {
  ModelConfig config;
  std::uint64_t n = 0;
  std::string algorithm;
  std::size_t runs = 0;
  std::uint64_t median_cost = 0;
  std::uint64_t m = 0;
  double rho = 0.0;
  std::optional<double> theory_rho;
  bool degenerate = false;
};

/// Theory exponent for an algorithm at a given tau, if one is known.
std::optional<double> theory_exponent(const std::string& algorithm, double tau);

/// rho = ln(median cost) / ln(m) for records of one config and algorithm.
ExponentSummary fit_point_exponent(std::span<const ExperimentRecord> records);

struct ScalingPoint {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t median_cost = 0;
};

struct ScalingSummary {
  ModelConfig config;
  std::string algorithm;
  std::vector<ScalingPoint> points;
  double slope = 0.0;
};

/// Least-squares slope of ln(median cost) on ln(m) across at least three
/// sizes. Throws std::invalid_argument otherwise.
ScalingSummary fit_scaling_slope(std::span<const ExperimentRecord> records);

struct RatioSummary {
  ModelConfig config;
  std::uint64_t n = 0;
  std::string algorithm;
  std::size_t runs = 0;  // records with positive cost
  double median_max_ratio = 0.0;
  double median_final_ratio = 0.0;
  bool degenerate = false;
};

/// Median of max_expanded_degree / total_cost and final_expanded_degree /
/// total_cost over records with positive cost.
RatioSummary degree_cost_ratio(std::span<const ExperimentRecord> records);

/// Groups records by (config, n, algorithm) in first-appearance order.
std::vector<std::vector<ExperimentRecord>> group_by_run_config(
    std::span<const ExperimentRecord> records, bool include_size = true);

std::vector<ExponentSummary> summarize_exponents(std::span<const ExperimentRecord> records);
std::vector<ScalingSummary> summarize_scaling(std::span<const ExperimentRecord> records);
std::vector<RatioSummary> summarize_ratios(std::span<const ExperimentRecord> records);

void write_exponent_csv(std::span<const ExponentSummary> rows, std::ostream& out);
void write_scaling_csv(std::span<const ScalingSummary> rows, std::ostream& out);
void write_ratio_csv(std::span<const RatioSummary> rows, std::ostream& out);

ModelConfig config_of(const ExperimentRecord& r);

}  // namespace bbfs
