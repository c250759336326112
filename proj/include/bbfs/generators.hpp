#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbfs/graph.hpp"
#include "bbfs/rng.hpp"

namespace bbfs {

/// Pareto weight law with density (tau - 1) * w^(-tau) on [1, inf).
struct PowerLawSpec {
  double tau = 2.5;
  double lower_bound = 1.0;

  /// Throws std::invalid_argument unless tau > 2 and lower_bound == 1.
  void validate() const;
};

enum class Model { chung_lu, girg };

const char* model_name(Model m) noexcept;
/// Accepts "chung-lu" / "girg"; throws std::invalid_argument otherwise.
Model parse_model(const std::string& name);

struct Provenance {
  Model model = Model::chung_lu;
  double tau = 0.0;
  std::optional<double> alpha;  // GIRG only
  std::optional<int> dim;       // GIRG only
  double target_avg_degree = 0.0;
  double constant = 0.0;        // calibrated c
  std::uint64_t seed = 0;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// A sampled graph together with the hidden variables that produced it.
struct WeightedInstance {
  Graph graph;
  std::vector<double> weights;
  /// Row-major n x dim torus coordinates in [0, 1); empty for Chung-Lu.
  std::vector<double> positions;
  Provenance provenance;

  std::size_t dimension() const noexcept { return provenance.dim.value_or(0); }
  std::span<const double> position(VertexId v) const noexcept {
    const std::size_t d = dimension();
    return {positions.data() + v * d, d};
  }

  friend bool operator==(const WeightedInstance&, const WeightedInstance&) = default;
};

/// Raised when the connection constant cannot be bracketed or does not converge.
class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inverse CDF of the weight law: u in (0, 1] maps to u^(-1/(tau-1)).
double pareto_weight(double tau, double u) noexcept;

std::vector<double> sample_weights(const PowerLawSpec& spec, std::size_t n, Rng& rng);

/// Maximum-norm distance on the unit torus.
double torus_distance(std::span<const double> a, std::span<const double> b) noexcept;

double chung_lu_probability(double wu, double wv, double constant, std::size_t n) noexcept;

/// min{c * wu * wv / (n * dist^dim), 1}^alpha; coincident points connect surely.
double girg_probability(double wu, double wv, double dist, double constant, std::size_t n,
                        double alpha, int dim) noexcept;

/// Chung-Lu constant solving sum_{u<v} min{c W_u W_v / n, 1} = target * n / 2.
/// The sum is evaluated exactly in O(n) per bisection step from sorted weights.
double calibrate_chung_lu(std::span<const double> weights, double target_avg_degree);

/// Expected edge count of a Chung-Lu graph with the given weights and constant.
double chung_lu_expected_edges(std::span<const double> weights, double constant);

/// GIRG constant matching the expected average degree, with positions
/// integrated out analytically and weights summed over a log-bucketed
/// histogram.
double calibrate_girg(std::span<const double> weights, double alpha, int dim,
                      double target_avg_degree);

/// Expected edge count of a GIRG with the given weights, averaged over positions.
double girg_expected_edges(std::span<const double> weights, double constant, double alpha,
                           int dim);

/// Skip-sampling Chung-Lu edges for fixed weights; expected O(n + m) work.
Graph sample_chung_lu(std::span<const double> weights, double constant, std::uint64_t seed);

/// Cell-partitioned GIRG edge sampler for fixed weights and positions.
Graph sample_girg(std::span<const double> weights, std::span<const double> positions, int dim,
                  double alpha, double constant, std::uint64_t seed);

WeightedInstance generate_chung_lu(std::size_t n, const PowerLawSpec& spec,
                                   double target_avg_degree, std::uint64_t seed);

WeightedInstance generate_girg(std::size_t n, const PowerLawSpec& spec, double alpha, int dim,
                               double target_avg_degree, std::uint64_t seed);

}  // namespace bbfs
