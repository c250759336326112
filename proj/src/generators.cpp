#include "bbfs/generators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

namespace bbfs {

namespace {

constexpr int kMaxBisectionSteps = 64;
constexpr double kBisectionTolerance = 1e-6;
constexpr int kMaxBracketDoublings = 200;

void check_target(double target_avg_degree, std::size_t n) {
  if (!(target_avg_degree > 0.0)) {
    throw std::invalid_argument("target average degree must be positive");
  }
  if (n < 2) throw std::invalid_argument("need at least two vertices");
}

void check_girg_params(double alpha, int dim) {
  if (!(alpha > 1.0)) throw std::invalid_argument("GIRG alpha must be > 1");
  if (dim < 1 || dim > 3) throw std::invalid_argument("GIRG dimension must be 1, 2 or 3");
}

/// Solves expected_edges(c) = goal for a nondecreasing expected_edges.
template <class ExpectedEdges>
double bisect_constant(ExpectedEdges&& expected_edges, double goal, double initial_guess,
                       double max_edges) {
  if (goal > max_edges) {
    std::ostringstream msg;
    msg << "target of " << goal << " expected edges exceeds the " << max_edges
        << " available vertex pairs";
    throw CalibrationError(msg.str());
  }
  double lo = 0.0;
  double hi = initial_guess > 0.0 ? initial_guess : 1.0;
  int doublings = 0;
  while (expected_edges(hi) < goal) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > kMaxBracketDoublings) {
      std::ostringstream msg;
      msg << "could not bracket the connection constant: E[m](" << hi
          << ") = " << expected_edges(hi) << " < " << goal;
      throw CalibrationError(msg.str());
    }
  }
  for (int step = 0; step < kMaxBisectionSteps; ++step) {
    if (hi - lo <= kBisectionTolerance * hi) return 0.5 * (lo + hi);
    const double mid = 0.5 * (lo + hi);
    if (expected_edges(mid) < goal) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (hi - lo <= kBisectionTolerance * hi) return 0.5 * (lo + hi);
  std::ostringstream msg;
  msg << "connection constant did not converge in " << kMaxBisectionSteps
      << " bisection steps; interval [" << lo << ", " << hi << "]";
  throw CalibrationError(msg.str());
}

/// Expected connection probability of a GIRG pair once the position is
/// integrated out. With the maximum norm the volume of a ball of radius
/// r <= 1/2 is (2r)^d, so with a = c*wu*wv*2^d/n the average of
/// min{a/V, 1}^alpha over V ~ U[0, 1] is closed-form.
double girg_mean_probability(double a, double alpha) noexcept {
  if (a >= 1.0) return 1.0;
  return (alpha * a - std::pow(a, alpha)) / (alpha - 1.0);
}

// Morton interleaving for up to three dimensions.
using Coords = std::array<std::uint32_t, 3>;

std::uint64_t morton_encode(const Coords& c, int dim, int bits) noexcept {
  std::uint64_t code = 0;
  for (int b = 0; b < bits; ++b) {
    for (int t = 0; t < dim; ++t) {
      code |= static_cast<std::uint64_t>((c[t] >> b) & 1U) << (b * dim + t);
    }
  }
  return code;
}

Coords morton_decode(std::uint64_t code, int dim, int bits) noexcept {
  Coords c{0, 0, 0};
  for (int b = 0; b < bits; ++b) {
    for (int t = 0; t < dim; ++t) {
      c[t] |= static_cast<std::uint32_t>((code >> (b * dim + t)) & 1U) << b;
    }
  }
  return c;
}

/// Distinct torus neighbours (including the cell itself) of a cell at a level
/// with `side` cells per dimension.
std::vector<Coords> neighbor_cells(const Coords& cell, int dim, std::uint32_t side) {
  std::array<std::array<std::uint32_t, 3>, 3> options{};
  std::array<int, 3> option_count{1, 1, 1};
  for (int t = 0; t < dim; ++t) {
    const std::uint32_t x = cell[t];
    std::array<std::uint32_t, 3> cand{x, (x + side - 1) % side, (x + 1) % side};
    int k = 0;
    for (std::uint32_t v : cand) {
      if (std::find(options[t].begin(), options[t].begin() + k, v) == options[t].begin() + k) {
        options[t][k++] = v;
      }
    }
    option_count[t] = k;
  }
  std::vector<Coords> out;
  for (int a = 0; a < option_count[0]; ++a) {
    for (int b = 0; b < (dim > 1 ? option_count[1] : 1); ++b) {
      for (int c = 0; c < (dim > 2 ? option_count[2] : 1); ++c) {
        out.push_back({options[0][a], dim > 1 ? options[1][b] : 0U, dim > 2 ? options[2][c] : 0U});
      }
    }
  }
  return out;
}

std::uint32_t torus_index_gap(std::uint32_t a, std::uint32_t b, std::uint32_t side) noexcept {
  const std::uint32_t diff = a > b ? a - b : b - a;
  return std::min(diff, side - diff);
}

bool cells_touch(const Coords& a, const Coords& b, int dim, std::uint32_t side) noexcept {
  for (int t = 0; t < dim; ++t) {
    if (torus_index_gap(a[t], b[t], side) > 1) return false;
  }
  return true;
}

/// Lower bound on the torus distance between points of two cells.
double cell_min_distance(const Coords& a, const Coords& b, int dim, std::uint32_t side) noexcept {
  std::uint32_t gap = 0;
  for (int t = 0; t < dim; ++t) gap = std::max(gap, torus_index_gap(a[t], b[t], side));
  return gap == 0 ? 0.0 : static_cast<double>(gap - 1) / side;
}

class GirgSampler {
 public:
  GirgSampler(std::span<const double> weights, std::span<const double> positions, int dim,
              double alpha, double constant, std::uint64_t seed)
      : weights_(weights), positions_(positions), dim_(dim), alpha_(alpha),
        constant_(constant), seed_(seed), n_(weights.size()) {
    deepest_ = 0;
    while (deepest_ + 1 <= 62 / dim_ && (std::size_t{1} << ((deepest_ + 1) * dim_)) <= n_) {
      ++deepest_;
    }
    bucket_vertices();
  }

  std::vector<Edge> run() {
    for (std::size_t i = 0; i < layers_.size(); ++i) {
      if (layers_[i].vertices.empty()) continue;
      for (std::size_t j = i; j < layers_.size(); ++j) {
        if (layers_[j].vertices.empty()) continue;
        sample_layer_pair(i, j);
      }
    }
    return std::move(edges_);
  }

 private:
  struct Layer {
    std::vector<VertexId> vertices;     // sorted by deepest-level cell code
    std::vector<std::uint64_t> codes;   // parallel to vertices
    double max_weight = 0.0;
  };

  struct Range {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const noexcept { return end - begin; }
  };

  void bucket_vertices() {
    const auto side = static_cast<double>(std::uint64_t{1} << deepest_);
    std::vector<std::uint64_t> code(n_);
    for (std::size_t v = 0; v < n_; ++v) {
      Coords c{0, 0, 0};
      for (int t = 0; t < dim_; ++t) {
        const double x = positions_[v * dim_ + t];
        c[t] = std::min(static_cast<std::uint32_t>(x * side),
                        static_cast<std::uint32_t>(side) - 1);
      }
      code[v] = morton_encode(c, dim_, deepest_);
      const auto layer = static_cast<std::size_t>(std::floor(std::log2(weights_[v])));
      if (layer >= layers_.size()) layers_.resize(layer + 1);
      layers_[layer].vertices.push_back(static_cast<VertexId>(v));
      layers_[layer].max_weight = std::max(layers_[layer].max_weight, weights_[v]);
    }
    for (auto& layer : layers_) {
      std::stable_sort(layer.vertices.begin(), layer.vertices.end(),
                       [&](VertexId a, VertexId b) { return code[a] < code[b]; });
      layer.codes.reserve(layer.vertices.size());
      for (VertexId v : layer.vertices) layer.codes.push_back(code[v]);
    }
  }

  int shift_for(int level) const noexcept { return (deepest_ - level) * dim_; }

  Range cell_range(const Layer& layer, std::uint64_t cell_code, int level) const {
    const int shift = shift_for(level);
    const std::uint64_t lo = cell_code << shift;
    const std::uint64_t hi = (cell_code + 1) << shift;
    const auto first = std::lower_bound(layer.codes.begin(), layer.codes.end(), lo);
    const auto last = std::lower_bound(first, layer.codes.end(), hi);
    return {static_cast<std::size_t>(first - layer.codes.begin()),
            static_cast<std::size_t>(last - layer.codes.begin())};
  }

  /// Calls f(cell_code, range) for every occupied cell of a layer at a level.
  template <class F>
  void for_each_cell(const Layer& layer, int level, F&& f) const {
    const int shift = shift_for(level);
    std::size_t begin = 0;
    while (begin < layer.codes.size()) {
      const std::uint64_t cell = layer.codes[begin] >> shift;
      std::size_t end = begin + 1;
      while (end < layer.codes.size() && (layer.codes[end] >> shift) == cell) ++end;
      f(cell, Range{begin, end});
      begin = end;
    }
  }

  double probability(VertexId u, VertexId v) const noexcept {
    const double dist = torus_distance(positions_.subspan(u * dim_, dim_),
                                       positions_.subspan(v * dim_, dim_));
    return girg_probability(weights_[u], weights_[v], dist, constant_, n_, alpha_, dim_);
  }

  void emit(VertexId u, VertexId v) { edges_.emplace_back(std::min(u, v), std::max(u, v)); }

  void sample_layer_pair(std::size_t i, std::size_t j) {
    const Layer& li = layers_[i];
    const Layer& lj = layers_[j];
    const bool same = i == j;
    // Cells at the chosen level are at least as wide as the clamp radius of
    // the heaviest pair, so non-touching cells bound probabilities below 1.
    const double clamp_volume = constant_ * li.max_weight * lj.max_weight / static_cast<double>(n_);
    const double clamp_radius = std::pow(clamp_volume, 1.0 / dim_);
    int level = 0;
    while (level < deepest_ && std::ldexp(1.0, -(level + 1)) >= clamp_radius) ++level;

    // Touching cells at the chosen level: test every pair exactly.
    {
      const std::uint32_t side = std::uint32_t{1} << level;
      for_each_cell(li, level, [&](std::uint64_t cell_a, Range ra) {
        Rng rng(derive_seed(seed_, {tag(Purpose::girg_cells), i, j,
                                    static_cast<std::uint64_t>(level), cell_a, 0}));
        const Coords ca = morton_decode(cell_a, dim_, level);
        for (const Coords& cb : neighbor_cells(ca, dim_, side)) {
          const std::uint64_t cell_b = morton_encode(cb, dim_, level);
          if (same && cell_b < cell_a) continue;
          const Range rb = cell_range(lj, cell_b, level);
          for (std::size_t a = ra.begin; a < ra.end; ++a) {
            const VertexId u = li.vertices[a];
            const std::size_t b_begin = (same && cell_b == cell_a) ? a + 1 : rb.begin;
            for (std::size_t b = b_begin; b < rb.end; ++b) {
              const VertexId v = lj.vertices[b];
              if (rng.uniform() < probability(u, v)) emit(u, v);
            }
          }
        }
      });
    }

    // Cells that are disjoint at level k but whose parents touch: bound the
    // probability by the cell distance, skip-sample, then thin by the ratio.
    for (int k = 1; k <= level; ++k) {
      const std::uint32_t side = std::uint32_t{1} << k;
      for_each_cell(li, k, [&](std::uint64_t cell_a, Range ra) {
        Rng rng(derive_seed(seed_, {tag(Purpose::girg_cells), i, j,
                                    static_cast<std::uint64_t>(k), cell_a, 1}));
        const Coords ca = morton_decode(cell_a, dim_, k);
        Coords parent{ca[0] >> 1, ca[1] >> 1, ca[2] >> 1};
        for (const Coords& pn : neighbor_cells(parent, dim_, side >> 1)) {
          for (std::uint32_t child = 0; child < (1U << dim_); ++child) {
            Coords cb{0, 0, 0};
            for (int t = 0; t < dim_; ++t) cb[t] = (pn[t] << 1) | ((child >> t) & 1U);
            if (cells_touch(ca, cb, dim_, side)) continue;
            const std::uint64_t cell_b = morton_encode(cb, dim_, k);
            if (same && cell_b < cell_a) continue;
            const Range rb = cell_range(lj, cell_b, k);
            if (rb.size() == 0) continue;
            const double bound =
                girg_probability(li.max_weight, lj.max_weight, cell_min_distance(ca, cb, dim_, side),
                                 constant_, n_, alpha_, dim_);
            sample_product(ra, rb, li, lj, bound, rng);
          }
        }
      });
    }
  }

  void sample_product(Range ra, Range rb, const Layer& li, const Layer& lj, double bound,
                      Rng& rng) {
    const std::uint64_t total = static_cast<std::uint64_t>(ra.size()) * rb.size();
    std::uint64_t index = 0;
    while (true) {
      const std::uint64_t skip = rng.geometric_skip(bound);
      if (skip >= total - index) return;
      index += skip;
      const VertexId u = li.vertices[ra.begin + index / rb.size()];
      const VertexId v = lj.vertices[rb.begin + index % rb.size()];
      if (rng.uniform() * bound < probability(u, v)) emit(u, v);
      if (++index >= total) return;
    }
  }

  std::span<const double> weights_;
  std::span<const double> positions_;
  int dim_;
  double alpha_;
  double constant_;
  std::uint64_t seed_;
  std::size_t n_;
  int deepest_ = 0;
  std::vector<Layer> layers_;
  std::vector<Edge> edges_;
};

}  // namespace

void PowerLawSpec::validate() const {
  if (!(tau > 2.0)) {
    throw std::invalid_argument("power-law exponent tau must be > 2, got " + std::to_string(tau));
  }
  if (lower_bound != 1.0) throw std::invalid_argument("weight lower bound is fixed at 1");
}

const char* model_name(Model m) noexcept {
  return m == Model::chung_lu ? "chung-lu" : "girg";
}

Model parse_model(const std::string& name) {
  if (name == "chung-lu") return Model::chung_lu;
  if (name == "girg") return Model::girg;
  throw std::invalid_argument("unknown model '" + name + "' (expected chung-lu or girg)");
}

double pareto_weight(double tau, double u) noexcept { return std::pow(u, -1.0 / (tau - 1.0)); }

std::vector<double> sample_weights(const PowerLawSpec& spec, std::size_t n, Rng& rng) {
  spec.validate();
  if (n == 0) throw std::invalid_argument("need at least one weight");
  std::vector<double> weights(n);
  for (auto& w : weights) w = pareto_weight(spec.tau, rng.uniform_open_closed());
  return weights;
}

double torus_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double dist = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const double diff = std::abs(a[t] - b[t]);
    dist = std::max(dist, std::min(diff, 1.0 - diff));
  }
  return dist;
}

double chung_lu_probability(double wu, double wv, double constant, std::size_t n) noexcept {
  return std::min(constant * wu * wv / static_cast<double>(n), 1.0);
}

double girg_probability(double wu, double wv, double dist, double constant, std::size_t n,
                        double alpha, int dim) noexcept {
  const double numerator = constant * wu * wv / static_cast<double>(n);
  const double denominator = std::pow(dist, dim);
  if (numerator >= denominator) return 1.0;
  return std::pow(numerator / denominator, alpha);
}

double chung_lu_expected_edges(std::span<const double> weights, double constant) {
  std::vector<double> sorted(weights.begin(), weights.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  const std::size_t n = sorted.size();
  const auto nd = static_cast<double>(n);
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + sorted[i];

  // Ordered pairs including u = v; clamped partners of u form a prefix whose
  // length shrinks as w_u decreases.
  double ordered = 0.0;
  double diagonal = 0.0;
  std::size_t clamped = n;
  for (std::size_t i = 0; i < n; ++i) {
    const double wu = sorted[i];
    while (clamped > 0 && constant * wu * sorted[clamped - 1] < nd) --clamped;
    ordered += static_cast<double>(clamped) + constant * wu / nd * (prefix[n] - prefix[clamped]);
    diagonal += std::min(constant * wu * wu / nd, 1.0);
  }
  return 0.5 * (ordered - diagonal);
}

double calibrate_chung_lu(std::span<const double> weights, double target_avg_degree) {
  const std::size_t n = weights.size();
  check_target(target_avg_degree, n);
  const auto nd = static_cast<double>(n);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double w : weights) {
    sum += w;
    sum_sq += w * w;
  }
  const double goal = target_avg_degree * nd / 2.0;
  const double unclamped_guess = goal * 2.0 * nd / (sum * sum - sum_sq);
  return bisect_constant([&](double c) { return chung_lu_expected_edges(weights, c); }, goal,
                         unclamped_guess, nd * (nd - 1.0) / 2.0);
}

namespace {

struct WeightHistogram {
  std::vector<double> mean;
  std::vector<double> count;
};

WeightHistogram bucket_weights(std::span<const double> weights) {
  constexpr double kBucketRatio = 1.02;
  const double log_ratio = std::log(kBucketRatio);
  std::vector<double> sum;
  std::vector<double> count;
  for (double w : weights) {
    const auto b = static_cast<std::size_t>(std::max(0.0, std::log(w) / log_ratio));
    if (b >= sum.size()) {
      sum.resize(b + 1, 0.0);
      count.resize(b + 1, 0.0);
    }
    sum[b] += w;
    count[b] += 1.0;
  }
  WeightHistogram h;
  for (std::size_t b = 0; b < sum.size(); ++b) {
    if (count[b] == 0.0) continue;
    h.mean.push_back(sum[b] / count[b]);
    h.count.push_back(count[b]);
  }
  return h;
}

double girg_histogram_edges(const WeightHistogram& h, std::size_t n, double constant,
                            double alpha, int dim) {
  const double scale = constant * std::ldexp(1.0, dim) / static_cast<double>(n);
  double total = 0.0;
  for (std::size_t a = 0; a < h.mean.size(); ++a) {
    total += 0.5 * h.count[a] * (h.count[a] - 1.0) *
             girg_mean_probability(scale * h.mean[a] * h.mean[a], alpha);
    for (std::size_t b = a + 1; b < h.mean.size(); ++b) {
      total += h.count[a] * h.count[b] *
               girg_mean_probability(scale * h.mean[a] * h.mean[b], alpha);
    }
  }
  return total;
}

}  // namespace

double girg_expected_edges(std::span<const double> weights, double constant, double alpha,
                           int dim) {
  check_girg_params(alpha, dim);
  return girg_histogram_edges(bucket_weights(weights), weights.size(), constant, alpha, dim);
}

double calibrate_girg(std::span<const double> weights, double alpha, int dim,
                      double target_avg_degree) {
  check_girg_params(alpha, dim);
  const std::size_t n = weights.size();
  check_target(target_avg_degree, n);
  const auto nd = static_cast<double>(n);
  const WeightHistogram h = bucket_weights(weights);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double w : weights) {
    sum += w;
    sum_sq += w * w;
  }
  const double goal = target_avg_degree * nd / 2.0;
  // Without clamping the mean probability is alpha/(alpha-1) * c*W*W'*2^d/n.
  const double unclamped_guess = goal * nd * (alpha - 1.0) /
                                 (alpha * std::ldexp(1.0, dim) * 0.5 * (sum * sum - sum_sq));
  return bisect_constant(
      [&](double c) { return girg_histogram_edges(h, n, c, alpha, dim); }, goal,
      unclamped_guess, nd * (nd - 1.0) / 2.0);
}

Graph sample_chung_lu(std::span<const double> weights, double constant, std::uint64_t seed) {
  const std::size_t n = weights.size();
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), VertexId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](VertexId a, VertexId b) { return weights[a] > weights[b]; });

  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const VertexId u = order[i];
    Rng rng(derive_seed(seed, {tag(Purpose::chung_lu_edges), i}));
    // Partner probabilities are nonincreasing along the order; skip with the
    // current one as an upper bound and thin by the ratio.
    std::size_t j = i + 1;
    double bound = chung_lu_probability(weights[u], weights[order[j]], constant, n);
    while (j < n && bound > 0.0) {
      const std::uint64_t skip = rng.geometric_skip(bound);
      if (skip >= n - j) break;
      j += skip;
      const VertexId v = order[j];
      const double p = chung_lu_probability(weights[u], weights[v], constant, n);
      if (rng.uniform() * bound < p) edges.emplace_back(std::min(u, v), std::max(u, v));
      bound = p;
      ++j;
    }
  }
  return build_graph(n, edges);
}

Graph sample_girg(std::span<const double> weights, std::span<const double> positions, int dim,
                  double alpha, double constant, std::uint64_t seed) {
  check_girg_params(alpha, dim);
  if (positions.size() != weights.size() * static_cast<std::size_t>(dim)) {
    throw std::invalid_argument("positions must hold n * dim coordinates");
  }
  std::vector<Edge> edges = GirgSampler(weights, positions, dim, alpha, constant, seed).run();
  return build_graph(weights.size(), edges);
}

WeightedInstance generate_chung_lu(std::size_t n, const PowerLawSpec& spec,
                                   double target_avg_degree, std::uint64_t seed) {
  spec.validate();
  check_target(target_avg_degree, n);
  WeightedInstance inst;
  Rng weight_rng(derive_seed(seed, {tag(Purpose::weights)}));
  inst.weights = sample_weights(spec, n, weight_rng);
  const double c = calibrate_chung_lu(inst.weights, target_avg_degree);
  inst.graph = sample_chung_lu(inst.weights, c, seed);
  inst.provenance = {Model::chung_lu, spec.tau, std::nullopt, std::nullopt, target_avg_degree, c,
                     seed};
  return inst;
}

WeightedInstance generate_girg(std::size_t n, const PowerLawSpec& spec, double alpha, int dim,
                               double target_avg_degree, std::uint64_t seed) {
  spec.validate();
  check_girg_params(alpha, dim);
  check_target(target_avg_degree, n);
  WeightedInstance inst;
  Rng weight_rng(derive_seed(seed, {tag(Purpose::weights)}));
  inst.weights = sample_weights(spec, n, weight_rng);
  Rng position_rng(derive_seed(seed, {tag(Purpose::positions)}));
  inst.positions.resize(n * static_cast<std::size_t>(dim));
  for (auto& x : inst.positions) x = position_rng.uniform();
  const double c = calibrate_girg(inst.weights, alpha, dim, target_avg_degree);
  inst.graph = sample_girg(inst.weights, inst.positions, dim, alpha, c, seed);
  inst.provenance = {Model::girg, spec.tau, alpha, dim, target_avg_degree, c, seed};
  return inst;
}

}  // namespace bbfs
