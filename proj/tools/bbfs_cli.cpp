// Command-line front end: instance generation, single searches, plan sweeps
// and summary fits. Machine-readable CSV goes to stdout, diagnostics to stderr.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "bbfs/generators.hpp"
#include "bbfs/harness.hpp"
#include "bbfs/io.hpp"
#include "bbfs/search.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kNoPath = 3,
  kIoFailure = 4,
  kGenerationFailure = 5,
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenerateArgs {
  std::string model = "chung-lu";
  std::size_t n = 0;
  double tau = 0.0;
  double alpha = 0.0;
  int dim = 0;
  double avg_deg = 10.0;
  std::uint64_t seed = 1;
  std::string out;
};

struct SearchArgs {
  std::string graph;
  std::string edge_list;
  std::string algo;
  std::uint64_t s = 0;
  std::uint64_t t = 0;
  std::uint64_t seed = 1;
};

struct SweepArgs {
  std::string plan;
  std::string out;
  std::size_t threads = 0;
};

struct SummaryArgs {
  std::string in;
  std::string out;
};

struct LoadArgs {
  std::string edge_list;
  std::string instance;
  std::string edges_out;
};

/// BBFS_SEED overrides --seed when set.
std::uint64_t effective_seed(std::uint64_t flag_seed) {
  if (const char* env = std::getenv("BBFS_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const std::uint64_t seed = std::stoull(env, &used);
      if (used == std::string(env).size()) return seed;
    } catch (const std::logic_error&) {
    }
    throw UsageError(std::string("BBFS_SEED is not an unsigned integer: ") + env);
  }
  return flag_seed;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot open " + path + " for writing");
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  return in;
}

int cmd_generate(const GenerateArgs& a) {
  const bbfs::Model model = [&] {
    try {
      return bbfs::parse_model(a.model);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  const bbfs::PowerLawSpec spec{a.tau};
  try {
    spec.validate();
    if (a.n < 2) throw std::invalid_argument("--n must be at least 2");
    if (!(a.avg_deg > 0.0)) throw std::invalid_argument("--avg-deg must be positive");
    if (model == bbfs::Model::girg) {
      if (!(a.alpha > 1.0)) throw std::invalid_argument("--alpha must be > 1 for girg");
      if (a.dim < 1 || a.dim > 3) throw std::invalid_argument("--dim must be 1, 2 or 3 for girg");
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const std::uint64_t seed = effective_seed(a.seed);
  bbfs::WeightedInstance inst;
  try {
    inst = model == bbfs::Model::chung_lu
               ? bbfs::generate_chung_lu(a.n, spec, a.avg_deg, seed)
               : bbfs::generate_girg(a.n, spec, a.alpha, a.dim, a.avg_deg, seed);
  } catch (const std::exception& e) {
    std::cerr << "generation failed: " << e.what() << "\n";
    return kGenerationFailure;
  }
  bbfs::save_instance_file(inst, a.out);
  const auto& g = inst.graph;
  const double avg = 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.vertex_count());
  std::cout << g.vertex_count() << ',' << g.edge_count() << ',' << bbfs::format_double(avg) << ','
            << g.max_degree() << '\n';
  std::cerr << "wrote " << a.out << " (n, m, avg_degree, max_degree on stdout)\n";
  return kOk;
}

int cmd_search(const SearchArgs& a) {
  if (a.graph.empty() == a.edge_list.empty()) {
    throw UsageError("give exactly one of --graph or --edge-list");
  }
  const bbfs::Algorithm algorithm = [&] {
    try {
      return bbfs::parse_algorithm(a.algo);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  bbfs::ExperimentRecord record;
  bbfs::Graph graph;
  if (!a.graph.empty()) {
    bbfs::WeightedInstance inst = bbfs::load_instance_file(a.graph);
    record.model = bbfs::model_name(inst.provenance.model);
    record.tau = inst.provenance.tau;
    record.alpha = inst.provenance.alpha;
    record.dim = inst.provenance.dim;
    record.graph_seed = inst.provenance.seed;
    graph = std::move(inst.graph);
  } else {
    auto in = open_input(a.edge_list);
    graph = bbfs::load_edge_list(in).graph;
    record.model = "edge-list";
  }
  if (a.s >= graph.vertex_count() || a.t >= graph.vertex_count()) {
    throw UsageError("--s and --t must be below n = " + std::to_string(graph.vertex_count()));
  }
  const auto s0 = static_cast<bbfs::VertexId>(a.s);
  const auto s1 = static_cast<bbfs::VertexId>(a.t);
  const std::uint64_t seed = effective_seed(a.seed);
  bbfs::Rng rng(seed);
  bbfs::BidirectionalSearch search(graph);
  const bbfs::SearchOutcome outcome = search.run(algorithm, s0, s1, rng);
  const auto oracle = bbfs::bfs_distance(graph, s0, s1);

  record.n = graph.vertex_count();
  record.m = graph.edge_count();
  record.run_seed = seed;
  record.s0 = s0;
  record.s1 = s1;
  record.algorithm = bbfs::algorithm_name(algorithm);
  record.total_cost = outcome.total_cost;
  record.cost_s0 = outcome.cost_s0;
  record.cost_s1 = outcome.cost_s1;
  record.rounds = outcome.rounds;
  record.max_expanded_degree = outcome.max_expanded_degree;
  record.final_expanded_degree = outcome.final_expanded_degree;
  record.path_len = outcome.path_length();
  record.oracle_dist = oracle ? static_cast<std::int64_t>(*oracle) : -1;
  bbfs::write_records(std::span(&record, 1), std::cout);
  if (outcome.path) {
    std::cerr << "path:";
    for (bbfs::VertexId v : *outcome.path) std::cerr << ' ' << v;
    std::cerr << '\n';
    return kOk;
  }
  std::cerr << "no path between " << s0 << " and " << s1 << "\n";
  return kNoPath;
}

int cmd_sweep(const SweepArgs& a) {
  auto in = open_input(a.plan);
  bbfs::RunPlan plan;
  try {
    plan = bbfs::parse_plan(in);
  } catch (const bbfs::PlanError& e) {
    throw UsageError(e.what());
  }
  if (a.threads > 0) plan.threads = a.threads;
  const auto records = bbfs::run_plan(plan, &std::cerr);
  auto out = open_output(a.out);
  const std::size_t bytes = bbfs::write_records(records, out);
  std::cerr << "wrote " << records.size() << " records (" << bytes << " bytes) to " << a.out
            << "\n";
  return kOk;
}

template <class Summarize, class Write>
int cmd_summary(const SummaryArgs& a, Summarize summarize, Write write) {
  auto in = open_input(a.in);
  const auto records = bbfs::read_records(in);
  const auto rows = [&] {
    try {
      return summarize(records);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  if (a.out.empty()) {
    write(rows, std::cout);
  } else {
    auto out = open_output(a.out);
    write(rows, out);
  }
  return kOk;
}

int cmd_load(const LoadArgs& a) {
  if (a.edge_list.empty() == a.instance.empty()) {
    throw UsageError("give exactly one of --edge-list or --instance");
  }
  bbfs::Graph graph;
  if (!a.edge_list.empty()) {
    auto in = open_input(a.edge_list);
    graph = bbfs::load_edge_list(in).graph;
  } else {
    graph = bbfs::load_instance_file(a.instance).graph;
  }
  if (!a.edges_out.empty()) {
    auto out = open_output(a.edges_out);
    bbfs::write_edge_list(graph, out);
  }
  const auto labels = bbfs::components(graph);
  const double avg =
      2.0 * static_cast<double>(graph.edge_count()) / static_cast<double>(graph.vertex_count());
  std::cout << graph.vertex_count() << ',' << graph.edge_count() << ',' << bbfs::format_double(avg)
            << ',' << graph.max_degree() << ',' << labels.giant_size() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Balanced bidirectional BFS: generators, searches and cost sweeps"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Sample a Chung-Lu or GIRG instance");
  generate->add_option("--model", gen.model, "chung-lu or girg")->required();
  generate->add_option("--n", gen.n, "Vertex count")->required();
  generate->add_option("--tau", gen.tau, "Power-law exponent (> 2)")->required();
  generate->add_option("--alpha", gen.alpha, "GIRG decay exponent (> 1)");
  generate->add_option("--dim", gen.dim, "GIRG torus dimension (1-3)");
  generate->add_option("--avg-deg", gen.avg_deg, "Target average degree")->required();
  generate->add_option("--seed", gen.seed, "Seed (BBFS_SEED overrides)")->required();
  generate->add_option("--out", gen.out, "Output instance file")->required();

  SearchArgs srch;
  auto* search = app.add_subcommand("search", "Run one bidirectional search");
  search->add_option("--graph", srch.graph, "Binary instance file");
  search->add_option("--edge-list", srch.edge_list, "Whitespace edge list");
  search->add_option("--algo", srch.algo, "vba, vbe, eba, lb or lbes")->required();
  search->add_option("--s", srch.s, "Source vertex")->required();
  search->add_option("--t", srch.t, "Target vertex")->required();
  search->add_option("--seed", srch.seed, "Seed (BBFS_SEED overrides)");

  SweepArgs swp;
  auto* sweep = app.add_subcommand("sweep", "Run a plan file and write the record CSV");
  sweep->add_option("--plan", swp.plan, "Plan file")->required();
  sweep->add_option("--out", swp.out, "Record CSV output")->required();
  sweep->add_option("--threads", swp.threads, "Worker threads (default: hardware)");

  SummaryArgs expo, scal, rat;
  auto* exponent = app.add_subcommand("exponent", "Per-config runtime exponent rho");
  exponent->add_option("--in", expo.in, "Record CSV")->required();
  exponent->add_option("--out", expo.out, "Summary CSV (default stdout)");
  auto* scaling = app.add_subcommand("scaling", "Log-log slope of cost across sizes");
  scaling->add_option("--in", scal.in, "Record CSV")->required();
  scaling->add_option("--out", scal.out, "Summary CSV (default stdout)");
  auto* ratio = app.add_subcommand("ratio", "Median expanded-degree / cost ratios");
  ratio->add_option("--in", rat.in, "Record CSV")->required();
  ratio->add_option("--out", rat.out, "Summary CSV (default stdout)");

  LoadArgs ld;
  auto* load = app.add_subcommand("load", "Load a graph and print n,m,avg_degree,max_degree,giant");
  load->add_option("--edge-list", ld.edge_list, "Whitespace edge list");
  load->add_option("--instance", ld.instance, "Binary instance file");
  load->add_option("--edges-out", ld.edges_out, "Write the canonical edge list here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cerr << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  if (swp.threads == 0) swp.threads = std::max(1U, std::thread::hardware_concurrency());

  try {
    if (*generate) return cmd_generate(gen);
    if (*search) return cmd_search(srch);
    if (*sweep) return cmd_sweep(swp);
    if (*exponent) {
      return cmd_summary(expo, [](const auto& r) { return bbfs::summarize_exponents(r); },
                         [](const auto& rows, std::ostream& out) { bbfs::write_exponent_csv(rows, out); });
    }
    if (*scaling) {
      return cmd_summary(scal, [](const auto& r) { return bbfs::summarize_scaling(r); },
                         [](const auto& rows, std::ostream& out) { bbfs::write_scaling_csv(rows, out); });
    }
    if (*ratio) {
      return cmd_summary(rat, [](const auto& r) { return bbfs::summarize_ratios(r); },
                         [](const auto& rows, std::ostream& out) { bbfs::write_ratio_csv(rows, out); });
    }
    if (*load) return cmd_load(ld);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  } catch (const bbfs::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kGenerationFailure;
  }
  return kUsage;
}
