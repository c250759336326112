#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbfs/generators.hpp"
#include "bbfs/graph.hpp"

namespace bbfs {

/// Malformed input: bad edge-list line, bad CSV row, corrupt instance file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EdgeListDialect {
  std::string comment_prefixes = "#%";
  bool undirected = true;  // directed inputs are symmetrised either way
};

struct LoadedEdgeList {
  Graph graph;
  /// Original label of each dense vertex id, in first-appearance order.
  std::vector<std::string> labels;
};

/// Parses whitespace-separated "u v" lines. Labels are arbitrary tokens and
/// are remapped to dense ids in order of first appearance.
LoadedEdgeList load_edge_list(std::istream& in, const EdgeListDialect& dialect = {});

/// Writes one "u v" line per edge with u < v, in sorted order.
void write_edge_list(const Graph& g, std::ostream& out);

/// One CSV row of the experiment log.
struct ExperimentRecord {
  std::string model;
  double tau = 0.0;
  std::optional<double> alpha;
  std::optional<int> dim;
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  std::uint64_t graph_seed = 0;
  std::uint64_t run_seed = 0;
  std::uint64_t s0 = 0;
  std::uint64_t s1 = 0;
  std::string algorithm;
  std::uint64_t total_cost = 0;
  std::uint64_t cost_s0 = 0;
  std::uint64_t cost_s1 = 0;
  std::uint64_t rounds = 0;
  std::uint64_t max_expanded_degree = 0;
  std::uint64_t final_expanded_degree = 0;
  std::int64_t path_len = -1;
  std::int64_t oracle_dist = -1;

  friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

/// Column order of the record CSV.
extern const std::vector<std::string> kRecordHeader;

/// Writes the header and one row per record (LF endings). Returns bytes
/// written; throws std::ios_base::failure if the stream goes bad.
std::size_t write_records(std::span<const ExperimentRecord> records, std::ostream& out);

/// Parses a record CSV produced by write_records. Throws FormatError with
/// the line number on malformed rows or an unexpected header.
std::vector<ExperimentRecord> read_records(std::istream& in);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

/// Splits one CSV line (RFC 4180 quoting) into fields.
std::vector<std::string> split_csv_line(const std::string& line);

/// Binary instance format: "BBFS1", provenance block, weights, positions,
/// edges; all integers and doubles little-endian, every block length-prefixed.
void save_instance(const WeightedInstance& inst, std::ostream& out);
WeightedInstance load_instance(std::istream& in);

void save_instance_file(const WeightedInstance& inst, const std::string& path);
WeightedInstance load_instance_file(const std::string& path);

}  // namespace bbfs
