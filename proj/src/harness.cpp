#include "bbfs/harness.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace bbfs {

void RunPlan::validate() const {
  if (models.empty()) throw std::invalid_argument("plan has no model configs");
  if (sizes.empty()) throw std::invalid_argument("plan has no sizes");
  if (graphs_per_config == 0 || pairs_per_graph == 0) {
    throw std::invalid_argument("graphs_per_config and pairs_per_graph must be >= 1");
  }
  if (algorithms.empty()) throw std::invalid_argument("plan has no algorithms");
  if (connect_attempts == 0) throw std::invalid_argument("connect_attempts must be >= 1");
  if (!(target_avg_degree > 0.0)) throw std::invalid_argument("avg_deg must be positive");
  for (std::size_t n : sizes) {
    if (n < 2) throw std::invalid_argument("sizes must be >= 2");
  }
  for (const auto& mc : models) {
    PowerLawSpec{mc.tau}.validate();
    if (mc.model == Model::girg) {
      if (!mc.alpha || !(*mc.alpha > 1.0)) throw std::invalid_argument("GIRG config needs alpha > 1");
      if (!mc.dim || *mc.dim < 1 || *mc.dim > 3) {
        throw std::invalid_argument("GIRG config needs dim in {1, 2, 3}");
      }
    }
  }
}

std::size_t vertices_for_edges(double edges, double avg_degree) {
  return static_cast<std::size_t>(std::llround(2.0 * edges / avg_degree));
}

// ---------------------------------------------------------------------------
// Plan grammar

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

struct ConfigBlock {
  std::size_t line = 0;
  std::optional<Model> model;
  std::vector<double> taus;
  std::vector<double> alphas;
  std::optional<int> dim;
};

}  // namespace

RunPlan parse_plan(std::istream& in) {
  RunPlan plan;
  plan.models.clear();
  std::vector<ConfigBlock> blocks;
  std::vector<double> size_edges;
  bool sizes_given = false;
  std::string raw;
  std::size_t line_number = 0;

  auto fail = [&](const std::string& what) {
    throw PlanError("plan line " + std::to_string(line_number) + ": " + what);
  };
  auto as_double = [&](const std::string& v) {
    try {
      std::size_t used = 0;
      const double x = std::stod(v, &used);
      if (used != v.size()) fail("bad number '" + v + "'");
      return x;
    } catch (const std::logic_error&) {
      fail("bad number '" + v + "'");
    }
    return 0.0;
  };
  auto as_count = [&](const std::string& v) -> std::uint64_t {
    if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
      fail("bad integer '" + v + "'");
    }
    try {
      return std::stoull(v);
    } catch (const std::logic_error&) {
      fail("integer out of range '" + v + "'");
    }
    return 0;
  };

  while (std::getline(in, raw)) {
    ++line_number;
    std::string line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    if (line == "config") {
      blocks.push_back({line_number, {}, {}, {}, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value' or 'config'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) fail("missing value for '" + key + "'");

    if (key == "model" || key == "tau" || key == "alpha" || key == "dim") {
      if (blocks.empty()) fail("'" + key + "' outside a config block");
      ConfigBlock& block = blocks.back();
      if (key == "model") {
        try {
          block.model = parse_model(value);
        } catch (const std::invalid_argument& e) {
          fail(e.what());
        }
      } else if (key == "tau") {
        for (const auto& item : split_list(value)) block.taus.push_back(as_double(item));
      } else if (key == "alpha") {
        for (const auto& item : split_list(value)) block.alphas.push_back(as_double(item));
      } else {
        block.dim = static_cast<int>(as_count(value));
      }
    } else if (key == "master_seed" || key == "seed") {
      plan.master_seed = as_count(value);
    } else if (key == "sizes") {
      plan.sizes.clear();
      for (const auto& item : split_list(value)) plan.sizes.push_back(as_count(item));
      sizes_given = true;
    } else if (key == "sizes_m") {
      size_edges.clear();
      for (const auto& item : split_list(value)) size_edges.push_back(as_double(item));
      sizes_given = true;
    } else if (key == "graphs_per_config") {
      plan.graphs_per_config = as_count(value);
    } else if (key == "pairs_per_graph") {
      plan.pairs_per_graph = as_count(value);
    } else if (key == "algorithms") {
      plan.algorithms.clear();
      for (const auto& item : split_list(value)) {
        try {
          plan.algorithms.push_back(parse_algorithm(item));
        } catch (const std::invalid_argument& e) {
          fail(e.what());
        }
      }
    } else if (key == "pair_policy") {
      if (value == "uniform") {
        plan.pair_policy = PairPolicy::uniform;
      } else if (value == "giant") {
        plan.pair_policy = PairPolicy::giant;
      } else {
        fail("pair_policy must be 'uniform' or 'giant'");
      }
    } else if (key == "avg_deg") {
      plan.target_avg_degree = as_double(value);
    } else if (key == "connect_threshold") {
      plan.connect_threshold = as_double(value);
    } else if (key == "connect_attempts") {
      plan.connect_attempts = as_count(value);
    } else if (key == "threads") {
      plan.threads = as_count(value);
    } else {
      fail("unknown key '" + key + "'");
    }
  }

  if (!sizes_given) throw PlanError("plan does not set 'sizes' or 'sizes_m'");
  for (double m : size_edges) plan.sizes.push_back(vertices_for_edges(m, plan.target_avg_degree));
  if (blocks.empty()) throw PlanError("plan has no config block");
  for (const auto& block : blocks) {
    line_number = block.line;
    if (!block.model) fail("config block without 'model'");
    if (block.taus.empty()) fail("config block without 'tau'");
    if (*block.model == Model::girg && (block.alphas.empty() || !block.dim)) {
      fail("girg config needs 'alpha' and 'dim'");
    }
    if (*block.model == Model::chung_lu && (!block.alphas.empty() || block.dim)) {
      fail("chung-lu config takes no 'alpha' or 'dim'");
    }
    const std::vector<std::optional<double>> alphas =
        block.alphas.empty() ? std::vector<std::optional<double>>{std::nullopt}
                             : std::vector<std::optional<double>>(block.alphas.begin(),
                                                                  block.alphas.end());
    for (double tau : block.taus) {
      for (const auto& alpha : alphas) plan.models.push_back({*block.model, tau, alpha, block.dim});
    }
  }
  try {
    plan.validate();
  } catch (const std::invalid_argument& e) {
    throw PlanError(std::string("invalid plan: ") + e.what());
  }
  return plan;
}

// ---------------------------------------------------------------------------
// Sweep execution

namespace {

/// Seed key from a config's content, so reordering plan entries leaves every
/// run's randomness unchanged.
std::uint64_t config_key(const ModelConfig& mc, std::size_t n) {
  return derive_seed(0, {static_cast<std::uint64_t>(mc.model), std::bit_cast<std::uint64_t>(mc.tau),
                         std::bit_cast<std::uint64_t>(mc.alpha.value_or(0.0)),
                         static_cast<std::uint64_t>(mc.dim.value_or(0)), n});
}

WeightedInstance generate(const ModelConfig& mc, std::size_t n, double avg_degree,
                          std::uint64_t seed) {
  const PowerLawSpec spec{mc.tau};
  if (mc.model == Model::chung_lu) return generate_chung_lu(n, spec, avg_degree, seed);
  return generate_girg(n, spec, *mc.alpha, *mc.dim, avg_degree, seed);
}

void run_graph(const RunPlan& plan, const ExperimentRecord& base, const Graph& g,
               std::span<const std::pair<VertexId, VertexId>> pairs, std::uint64_t key,
               std::size_t graph_index, std::span<ExperimentRecord> out) {
  const std::size_t algos = plan.algorithms.size();
  std::atomic<std::size_t> next_pair{0};
  auto worker = [&] {
    BidirectionalSearch search(g);
    for (std::size_t p = next_pair++; p < pairs.size(); p = next_pair++) {
      const auto [s0, s1] = pairs[p];
      const auto oracle = bfs_distance(g, s0, s1);
      for (std::size_t a = 0; a < algos; ++a) {
        const Algorithm algorithm = plan.algorithms[a];
        const std::uint64_t run_seed =
            derive_seed(plan.master_seed, {tag(Purpose::search), key, graph_index, p,
                                           static_cast<std::uint64_t>(algorithm)});
        Rng rng(run_seed);
        const SearchOutcome outcome = search.run(algorithm, s0, s1, rng);
        ExperimentRecord& r = out[p * algos + a];
        r = base;
        r.run_seed = run_seed;
        r.s0 = s0;
        r.s1 = s1;
        r.algorithm = algorithm_name(algorithm);
        r.total_cost = outcome.total_cost;
        r.cost_s0 = outcome.cost_s0;
        r.cost_s1 = outcome.cost_s1;
        r.rounds = outcome.rounds;
        r.max_expanded_degree = outcome.max_expanded_degree;
        r.final_expanded_degree = outcome.final_expanded_degree;
        r.path_len = outcome.path_length();
        r.oracle_dist = oracle ? static_cast<std::int64_t>(*oracle) : -1;
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(plan.threads, pairs.size()));
  if (threads == 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
}

}  // namespace

std::vector<ExperimentRecord> run_plan(const RunPlan& plan, std::ostream* log) {
  plan.validate();
  std::vector<ExperimentRecord> records;
  const std::size_t algos = plan.algorithms.size();
  for (const ModelConfig& mc : plan.models) {
    for (std::size_t n : plan.sizes) {
      const std::uint64_t key = config_key(mc, n);
      const std::size_t config_start = records.size();
      try {
        for (std::size_t gi = 0; gi < plan.graphs_per_config; ++gi) {
          std::optional<WeightedInstance> best;
          std::optional<ComponentLabels> best_labels;
          std::uint64_t best_seed = 0;
          for (std::size_t attempt = 0; attempt < plan.connect_attempts; ++attempt) {
            const std::uint64_t seed =
                derive_seed(plan.master_seed, {tag(Purpose::graph), key, gi, attempt});
            WeightedInstance inst = generate(mc, n, plan.target_avg_degree, seed);
            ComponentLabels labels = components(inst.graph);
            if (!best || labels.giant_size() > best_labels->giant_size()) {
              best = std::move(inst);
              best_labels = std::move(labels);
              best_seed = seed;
            }
            if (static_cast<double>(best_labels->giant_size()) >=
                plan.connect_threshold * static_cast<double>(n)) {
              break;
            }
          }
          if (log && static_cast<double>(best_labels->giant_size()) <
                         plan.connect_threshold * static_cast<double>(n)) {
            *log << "note: " << model_name(mc.model) << " tau=" << mc.tau << " n=" << n
                 << " graph " << gi << ": giant component covers "
                 << best_labels->giant_size() << "/" << n << " vertices after "
                 << plan.connect_attempts << " attempts; using the largest\n";
          }
          const Graph& g = best->graph;

          std::vector<VertexId> giant;
          if (plan.pair_policy == PairPolicy::giant) {
            for (VertexId v = 0; v < n; ++v) {
              if (best_labels->label[v] == best_labels->giant_id) giant.push_back(v);
            }
          }
          Rng pair_rng(derive_seed(plan.master_seed, {tag(Purpose::pairs), key, gi}));
          std::vector<std::pair<VertexId, VertexId>> pairs(plan.pairs_per_graph);
          for (auto& [s0, s1] : pairs) {
            if (plan.pair_policy == PairPolicy::giant) {
              s0 = giant[pair_rng.below(giant.size())];
              s1 = giant[pair_rng.below(giant.size())];
            } else {
              s0 = static_cast<VertexId>(pair_rng.below(n));
              s1 = static_cast<VertexId>(pair_rng.below(n));
            }
          }

          ExperimentRecord base;
          base.model = model_name(mc.model);
          base.tau = mc.tau;
          base.alpha = mc.alpha;
          base.dim = mc.dim;
          base.n = n;
          base.m = g.edge_count();
          base.graph_seed = best_seed;
          const std::size_t offset = records.size();
          records.resize(offset + pairs.size() * algos);
          run_graph(plan, base, g, pairs, key, gi,
                    std::span<ExperimentRecord>(records).subspan(offset));
        }
      } catch (const std::exception& e) {
        records.resize(config_start);
        if (log) {
          *log << "error: skipping " << model_name(mc.model) << " tau=" << mc.tau
               << " n=" << n << ": " << e.what() << "\n";
        }
      }
    }
  }
  return records;
}

// ---------------------------------------------------------------------------
// Summaries

ModelConfig config_of(const ExperimentRecord& r) {
  return {parse_model(r.model), r.tau, r.alpha, r.dim};
}

std::optional<double> theory_exponent(const std::string& algorithm, double tau) {
  if (algorithm == "vba") return (tau - 2.0) / (tau - 1.0);
  if (algorithm == "vbe") return 0.5;
  if (algorithm == "lb" || algorithm == "lbes") return (4.0 - tau) / 2.0;
  return std::nullopt;
}

ExponentSummary fit_point_exponent(std::span<const ExperimentRecord> records) {
  if (records.empty()) throw std::invalid_argument("no records to fit");
  std::vector<std::uint64_t> costs;
  std::vector<std::uint64_t> edges;
  for (const auto& r : records) {
    costs.push_back(r.total_cost);
    edges.push_back(r.m);
  }
  ExponentSummary s;
  s.config = config_of(records.front());
  s.n = records.front().n;
  s.algorithm = records.front().algorithm;
  s.runs = records.size();
  s.median_cost = lower_median<std::uint64_t>(costs);
  s.m = lower_median<std::uint64_t>(edges);
  if (s.m <= 1) throw std::invalid_argument("exponent fit needs m > 1");
  s.theory_rho = theory_exponent(s.algorithm, s.config.tau);
  if (s.median_cost == 0) {
    s.degenerate = true;
    s.rho = 0.0;
  } else {
    s.rho = std::log(static_cast<double>(s.median_cost)) / std::log(static_cast<double>(s.m));
  }
  return s;
}

ScalingSummary fit_scaling_slope(std::span<const ExperimentRecord> records) {
  if (records.empty()) throw std::invalid_argument("no records to fit");
  std::map<std::uint64_t, std::vector<const ExperimentRecord*>> by_size;
  for (const auto& r : records) by_size[r.n].push_back(&r);
  if (by_size.size() < 3) {
    throw std::invalid_argument("scaling fit needs at least 3 distinct sizes, got " +
                                std::to_string(by_size.size()));
  }
  ScalingSummary s;
  s.config = config_of(records.front());
  s.algorithm = records.front().algorithm;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [n, rows] : by_size) {
    std::vector<std::uint64_t> costs;
    std::vector<std::uint64_t> edges;
    for (const auto* r : rows) {
      costs.push_back(r->total_cost);
      edges.push_back(r->m);
    }
    ScalingPoint point{n, lower_median<std::uint64_t>(edges), lower_median<std::uint64_t>(costs)};
    if (point.median_cost == 0 || point.m == 0) {
      throw std::invalid_argument("scaling fit needs positive median cost and m at every size");
    }
    s.points.push_back(point);
    const double x = std::log(static_cast<double>(point.m));
    const double y = std::log(static_cast<double>(point.median_cost));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const auto k = static_cast<double>(s.points.size());
  const double denom = k * sxx - sx * sx;
  if (denom <= 0.0) throw std::invalid_argument("scaling fit needs distinct edge counts");
  s.slope = (k * sxy - sx * sy) / denom;
  return s;
}

RatioSummary degree_cost_ratio(std::span<const ExperimentRecord> records) {
  if (records.empty()) throw std::invalid_argument("no records for ratio");
  RatioSummary s;
  s.config = config_of(records.front());
  s.n = records.front().n;
  s.algorithm = records.front().algorithm;
  std::vector<double> max_ratio;
  std::vector<double> final_ratio;
  for (const auto& r : records) {
    if (r.total_cost == 0) continue;
    const auto cost = static_cast<double>(r.total_cost);
    max_ratio.push_back(static_cast<double>(r.max_expanded_degree) / cost);
    final_ratio.push_back(static_cast<double>(r.final_expanded_degree) / cost);
  }
  s.runs = max_ratio.size();
  if (max_ratio.empty()) {
    s.degenerate = true;
    return s;
  }
  s.median_max_ratio = lower_median<double>(max_ratio);
  s.median_final_ratio = lower_median<double>(final_ratio);
  return s;
}

std::vector<std::vector<ExperimentRecord>> group_by_run_config(
    std::span<const ExperimentRecord> records, bool include_size) {
  std::vector<std::vector<ExperimentRecord>> groups;
  std::vector<std::tuple<std::string, double, std::optional<double>, std::optional<int>,
                         std::uint64_t, std::string>>
      keys;
  for (const auto& r : records) {
    auto key = std::make_tuple(r.model, r.tau, r.alpha, r.dim, include_size ? r.n : 0, r.algorithm);
    const auto it = std::find(keys.begin(), keys.end(), key);
    if (it == keys.end()) {
      keys.push_back(std::move(key));
      groups.push_back({r});
    } else {
      groups[static_cast<std::size_t>(it - keys.begin())].push_back(r);
    }
  }
  return groups;
}

std::vector<ExponentSummary> summarize_exponents(std::span<const ExperimentRecord> records) {
  std::vector<ExponentSummary> out;
  for (const auto& group : group_by_run_config(records)) out.push_back(fit_point_exponent(group));
  return out;
}

std::vector<ScalingSummary> summarize_scaling(std::span<const ExperimentRecord> records) {
  std::vector<ScalingSummary> out;
  for (const auto& group : group_by_run_config(records, false)) {
    out.push_back(fit_scaling_slope(group));
  }
  return out;
}

std::vector<RatioSummary> summarize_ratios(std::span<const ExperimentRecord> records) {
  std::vector<RatioSummary> out;
  for (const auto& group : group_by_run_config(records)) out.push_back(degree_cost_ratio(group));
  return out;
}

namespace {

std::string opt(const std::optional<double>& x) { return x ? format_double(*x) : std::string{}; }
std::string opt(const std::optional<int>& x) { return x ? std::to_string(*x) : std::string{}; }

void write_config(std::ostream& out, const ModelConfig& c) {
  out << model_name(c.model) << ',' << format_double(c.tau) << ',' << opt(c.alpha) << ','
      << opt(c.dim);
}

void check(std::ostream& out) {
  if (!out) throw std::ios_base::failure("failed to write summary CSV");
}

}  // namespace

void write_exponent_csv(std::span<const ExponentSummary> rows, std::ostream& out) {
  out << "model,tau,alpha,dim,n,algorithm,runs,median_cost,m,rho,theory_rho,degenerate\n";
  for (const auto& r : rows) {
    write_config(out, r.config);
    out << ',' << r.n << ',' << r.algorithm << ',' << r.runs << ',' << r.median_cost << ','
        << r.m << ',' << format_double(r.rho) << ',' << opt(r.theory_rho) << ','
        << (r.degenerate ? 1 : 0) << '\n';
  }
  check(out);
}

void write_scaling_csv(std::span<const ScalingSummary> rows, std::ostream& out) {
  out << "model,tau,alpha,dim,algorithm,n,m,median_cost,slope\n";
  for (const auto& r : rows) {
    for (const auto& p : r.points) {
      write_config(out, r.config);
      out << ',' << r.algorithm << ',' << p.n << ',' << p.m << ',' << p.median_cost << ','
          << format_double(r.slope) << '\n';
    }
  }
  check(out);
}

void write_ratio_csv(std::span<const RatioSummary> rows, std::ostream& out) {
  out << "model,tau,alpha,dim,n,algorithm,runs,median_max_degree_ratio,"
         "median_final_degree_ratio,degenerate\n";
  for (const auto& r : rows) {
    write_config(out, r.config);
    out << ',' << r.n << ',' << r.algorithm << ',' << r.runs << ','
        << format_double(r.median_max_ratio) << ',' << format_double(r.median_final_ratio) << ','
        << (r.degenerate ? 1 : 0) << '\n';
  }
  check(out);
}

}  // namespace bbfs
