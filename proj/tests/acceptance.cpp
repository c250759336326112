// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bbfs/generators.hpp"
#include "bbfs/graph.hpp"
#include "bbfs/harness.hpp"
#include "bbfs/io.hpp"
#include "bbfs/search.hpp"

using namespace bbfs;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::cout << (pass ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
}

std::string fmt(double x, int digits = 3) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << x;
  return s.str();
}

std::size_t worker_count() { return std::max(1U, std::thread::hardware_concurrency()); }

// ---------------------------------------------------------------------------

Graph uniform_random_graph(std::size_t n, Rng& rng) {
  const double p = (0.5 + 3.0 * rng.uniform()) / static_cast<double>(n);
  std::vector<Edge> edges;
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      if (rng.uniform() < p) edges.emplace_back(u, v);
    }
  }
  return build_graph(n, edges);
}

bool path_valid(const Graph& g, const std::vector<VertexId>& path, VertexId s0, VertexId s1) {
  if (path.empty() || path.front() != s0 || path.back() != s1) return false;
  std::vector<VertexId> sorted = path;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (!g.has_edge(path[i - 1], path[i])) return false;
  }
  return true;
}

void oracle_equivalence() {
  const auto start = Clock::now();
  Rng rng(derive_seed(2024, {1}));
  const std::size_t instances = 1200;
  const int pairs_per_instance = 20;
  std::size_t checks = 0;
  std::size_t violations = 0;
  std::string first;
  for (std::size_t i = 0; i < instances; ++i) {
    const std::size_t n = 2 + rng.below(199);
    const double avg = 1.0 + 4.0 * rng.uniform();
    const std::uint64_t seed = rng.below(std::uint64_t{1} << 40);
    Graph g;
    std::string kind;
    switch (i % 6) {
      case 0:
      case 1:
      case 2: {
        const double tau = std::array{2.2, 2.5, 2.8}[i % 3];
        kind = "chung-lu tau " + fmt(tau, 1);
        g = generate_chung_lu(n, PowerLawSpec{tau}, std::min(avg, n - 1.0), seed).graph;
        break;
      }
      case 3:
      case 4: {
        const double alpha = i % 6 == 3 ? 1.5 : 5.0;
        kind = "girg alpha " + fmt(alpha, 1);
        g = generate_girg(n, PowerLawSpec{2.5}, alpha, 2, std::min(avg, n - 1.0), seed).graph;
        break;
      }
      default:
        kind = "uniform";
        g = uniform_random_graph(n, rng);
    }
    BidirectionalSearch search(g);
    for (int p = 0; p < pairs_per_instance; ++p) {
      const auto s0 = static_cast<VertexId>(rng.below(n));
      const auto s1 = static_cast<VertexId>(rng.below(n));
      const auto d = bfs_distance(g, s0, s1);
      for (Algorithm a : kAllAlgorithms) {
        const auto out = search.run(a, s0, s1, rng);
        ++checks;
        bool ok = out.path.has_value() == d.has_value();
        if (ok && d) {
          const auto len = static_cast<std::size_t>(out.path_length());
          ok = path_valid(g, *out.path, s0, s1) &&
               (is_exact(a) ? len == *d : (len == *d || len == *d + 1));
        }
        if (!ok) {
          ++violations;
          if (first.empty()) {
            first = std::string(algorithm_name(a)) + " on " + kind + " n=" + std::to_string(n) +
                    " pair " + std::to_string(s0) + "," + std::to_string(s1);
          }
        }
      }
    }
  }
  const double secs = seconds_since(start);
  report("oracle-equivalence", violations == 0 && secs < 120.0,
         std::to_string(instances) + " instances, " + std::to_string(checks) + " searches, " +
             std::to_string(violations) + " violations" + (first.empty() ? "" : " (first: " + first + ")") +
             ", " + fmt(secs, 1) + " s (limit 120 s)");
}

// ---------------------------------------------------------------------------

void balance_invariants() {
  const auto inst = generate_chung_lu(20000, PowerLawSpec{2.5}, 10.0, 31);
  BidirectionalSearch search(inst.graph);
  Rng rng(derive_seed(2024, {2}));
  SearchTrace trace;
  std::size_t eba_rounds = 0;
  std::size_t eba_violations = 0;
  for (int run = 0; run < 100; ++run) {
    trace.clear();
    const auto out = search.eba(static_cast<VertexId>(rng.below(20000)),
                                static_cast<VertexId>(rng.below(20000)), rng, &trace);
    for (std::size_t r = 0; r < trace.explored_edges.size(); ++r) {
      const auto [a, b] = trace.explored_edges[r];
      if ((r + 1) % 2 == 0 && a != b) ++eba_violations;
    }
    const auto diff = out.cost_s0 > out.cost_s1 ? out.cost_s0 - out.cost_s1 : out.cost_s1 - out.cost_s0;
    if (diff > 1) ++eba_violations;
    eba_rounds += trace.explored_edges.size();
  }
  std::size_t expansions = 0;
  std::size_t vb_violations = 0;
  for (Algorithm a : {Algorithm::vba, Algorithm::vbe}) {
    for (int run = 0; run < 100; ++run) {
      trace.clear();
      search.run(a, static_cast<VertexId>(rng.below(20000)), static_cast<VertexId>(rng.below(20000)),
                 rng, &trace);
      for (const auto& e : trace.expansions) {
        if (e.emptying) continue;
        ++expansions;
        if (e.side != (e.discovered[0] <= e.discovered[1] ? 0 : 1)) ++vb_violations;
      }
    }
  }
  report("balance-invariants", eba_violations == 0 && vb_violations == 0,
         "eba: 100 runs, " + std::to_string(eba_rounds) + " rounds, " +
             std::to_string(eba_violations) + " violations; vba/vbe: 200 runs, " +
             std::to_string(expansions) + " expansions, " + std::to_string(vb_violations) +
             " violations");
}

// ---------------------------------------------------------------------------

/// Least-squares slope of ln P(D >= k) on ln k over log-spaced k in [lo, hi].
double tail_slope(const Graph& g, double lo, double hi) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> at_least(g.max_degree() + 2, 0);
  for (VertexId v = 0; v < n; ++v) ++at_least[g.degree(v)];
  for (std::size_t k = at_least.size() - 1; k-- > 0;) at_least[k] += at_least[k + 1];
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int points = 0;
  double last = -1.0;
  for (double x = std::log(lo); x <= std::log(hi) + 1e-12; x += 0.1) {
    const auto k = static_cast<std::size_t>(std::lround(std::exp(x)));
    if (static_cast<double>(k) == last || k >= at_least.size() || at_least[k] == 0) continue;
    last = static_cast<double>(k);
    const double lx = std::log(static_cast<double>(k));
    const double ly = std::log(static_cast<double>(at_least[k]) / static_cast<double>(n));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++points;
  }
  return (points * sxy - sx * sy) / (points * sxx - sx * sx);
}

void generator_statistics() {
  const auto start = Clock::now();
  const std::size_t n = 50000;
  const double tau = 2.5;
  const double ln_n = std::log(static_cast<double>(n));
  const double cutoff = std::pow(static_cast<double>(n), 1.0 / (tau - 1.0));
  const double tail_hi = std::pow(static_cast<double>(n), 2.0 / 3.0) / 10.0;
  bool pass = true;
  std::string detail;
  for (Model model : {Model::chung_lu, Model::girg}) {
    std::vector<std::string> notes;
    int dmax_ok = 0;
    bool model_ok = true;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto inst = model == Model::chung_lu
                            ? generate_chung_lu(n, PowerLawSpec{tau}, 10.0, seed)
                            : generate_girg(n, PowerLawSpec{tau}, 1.5, 2, 10.0, seed);
      const Graph& g = inst.graph;
      const double avg = 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(n);
      const double slope = tail_slope(g, 10.0, tail_hi);
      const auto dmax = static_cast<double>(g.max_degree());
      const auto comps = components(g);
      const double giant = static_cast<double>(comps.giant_size()) / static_cast<double>(n);
      const auto second = static_cast<double>(comps.second_size());
      if (dmax <= cutoff * ln_n * ln_n && dmax >= cutoff / (ln_n * ln_n)) ++dmax_ok;
      const bool ok = avg >= 9.0 && avg <= 11.0 && std::abs(slope + (tau - 1.0)) <= 0.25 &&
                      giant > 0.5 && second < std::pow(ln_n, 3.0);
      model_ok = model_ok && ok;
      notes.push_back("avg " + fmt(avg, 2) + " slope " + fmt(slope, 2) + " dmax " +
                      std::to_string(g.max_degree()) + " giant " + fmt(giant, 3) + " second " +
                      std::to_string(comps.second_size()));
    }
    model_ok = model_ok && dmax_ok >= 4;
    pass = pass && model_ok;
    detail += std::string(detail.empty() ? "" : "; ") + model_name(model) + " [" +
              std::to_string(dmax_ok) + "/5 dmax in band";
    for (const auto& note : notes) detail += " | " + note;
    detail += "]";
  }
  const double secs = seconds_since(start);
  report("generator-statistics", pass && secs < 180.0,
         detail + "; " + fmt(secs, 1) + " s (limit 180 s)");
}

// ---------------------------------------------------------------------------

RunPlan chung_lu_plan(std::vector<double> taus) {
  RunPlan plan;
  for (double tau : taus) plan.models.push_back({Model::chung_lu, tau, std::nullopt, std::nullopt});
  plan.graphs_per_config = 3;
  plan.pairs_per_graph = 100;
  plan.pair_policy = PairPolicy::giant;
  plan.master_seed = 20240601;
  plan.target_avg_degree = 10.0;
  plan.threads = worker_count();
  return plan;
}

void exponent_ordering() {
  const auto start = Clock::now();
  RunPlan plan = chung_lu_plan({2.3, 2.5, 2.7});
  plan.sizes = {30000};
  plan.algorithms = {Algorithm::vba, Algorithm::vbe, Algorithm::lb};
  const auto records = run_plan(plan);
  std::map<std::pair<double, std::string>, double> rho;
  for (const auto& s : summarize_exponents(records)) rho[{s.config.tau, s.algorithm}] = s.rho;
  const double secs = seconds_since(start);
  for (double tau : {2.3, 2.5, 2.7}) {
    const double vba = rho[{tau, "vba"}];
    const double vbe = rho[{tau, "vbe"}];
    const double lb = rho[{tau, "lb"}];
    const double centre = (4.0 - tau) / 2.0;
    const std::string label = "tau " + fmt(tau, 1) + " (rho vba " + fmt(vba) + ", vbe " +
                              fmt(vbe) + ", lb " + fmt(lb) + ")";
    report("exponent-ordering vba<=vbe+0.05", vba <= vbe + 0.05, label);
    report("exponent-ordering vbe<=lb-0.05", vbe <= lb - 0.05, label);
    report("exponent-ordering lb-band", std::abs(lb - centre) <= 0.15,
           label + ", band [" + fmt(centre - 0.15, 2) + ", " + fmt(centre + 0.15, 2) + "]");
  }
  report("exponent-ordering runtime", secs < 600.0, fmt(secs, 1) + " s (limit 600 s)");
}

void scaling_slope() {
  const auto start = Clock::now();
  RunPlan plan = chung_lu_plan({2.7});
  for (double m : {2e4, 6e4, 2e5, 6e5}) {
    plan.sizes.push_back(vertices_for_edges(m, plan.target_avg_degree));
  }
  plan.algorithms = {Algorithm::vba, Algorithm::vbe};
  const auto records = run_plan(plan);
  std::map<std::string, double> slope;
  for (const auto& s : summarize_scaling(records)) slope[s.algorithm] = s.slope;
  const double secs = seconds_since(start);
  report("scaling-slope vbe<=0.60", slope["vbe"] <= 0.60, "slope vbe " + fmt(slope["vbe"]));
  report("scaling-slope vba<=vbe+0.05", slope["vba"] <= slope["vbe"] + 0.05,
         "slope vba " + fmt(slope["vba"]) + ", vbe " + fmt(slope["vbe"]));
  report("scaling-slope runtime", secs < 600.0, fmt(secs, 1) + " s (limit 600 s)");
}

void degree_cost_ratio_check() {
  RunPlan plan = chung_lu_plan({2.5});
  plan.sizes = {50000};
  plan.algorithms = {Algorithm::vba, Algorithm::vbe};
  const auto records = run_plan(plan);
  for (const auto& s : summarize_ratios(records)) {
    report("degree-cost-ratio " + s.algorithm, !s.degenerate && s.runs >= 300 && s.median_max_ratio >= 0.1,
           std::to_string(s.runs) + " runs, median max-degree/cost " + fmt(s.median_max_ratio) +
               " (floor 0.1), median final-degree/cost " + fmt(s.median_final_ratio));
  }
}

// ---------------------------------------------------------------------------

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("bbfs_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::ofstream(dir / "plan.txt") << "master_seed = 99\n"
                                     "sizes = 2000, 5000\n"
                                     "graphs_per_config = 2\n"
                                     "pairs_per_graph = 50\n"
                                     "algorithms = vba, vbe, eba, lb, lbes\n"
                                     "config\n"
                                     "model = chung-lu\n"
                                     "tau = 2.3, 2.7\n"
                                     "config\n"
                                     "model = girg\n"
                                     "tau = 2.5\n"
                                     "alpha = 1.5, 5\n"
                                     "dim = 2\n";
  auto sweep = [&](const std::string& out, const std::string& threads) {
    const std::string command = "'" BBFS_CLI_PATH "' sweep --plan '" + (dir / "plan.txt").string() +
                                "' --out '" + (dir / out).string() + "' --threads " + threads +
                                " 2>/dev/null";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  const int a = sweep("a.csv", "1");
  const int b = sweep("b.csv", "1");
  const int c = sweep("c.csv", std::to_string(std::max<std::size_t>(2, worker_count())));
  const std::string first = slurp(dir / "a.csv");
  const bool same = !first.empty() && first == slurp(dir / "b.csv") && first == slurp(dir / "c.csv");
  fs::remove_all(dir);
  report("determinism", a == 0 && b == 0 && c == 0 && same,
         "three sweeps of one plan (exit " + std::to_string(a) + "," + std::to_string(b) + "," +
             std::to_string(c) + "), " + std::to_string(first.size()) + " bytes, " +
             (same ? "byte-identical" : "differ"));
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void()>>> criteria{
      {"oracle-equivalence", oracle_equivalence},
      {"balance-invariants", balance_invariants},
      {"generator-statistics", generator_statistics},
      {"exponent-ordering", exponent_ordering},
      {"scaling-slope", scaling_slope},
      {"degree-cost-ratio", degree_cost_ratio_check},
      {"determinism", determinism},
  };
  for (const auto& [name, check] : criteria) {
    try {
      check();
    } catch (const std::exception& e) {
      report(name, false, std::string("threw: ") + e.what());
    }
  }
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAIL") << std::endl;
  return failures == 0 ? 0 : 1;
}
