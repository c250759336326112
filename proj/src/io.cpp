#include "bbfs/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace bbfs {

namespace {

bool is_comment_or_blank(const std::string& line, const std::string& prefixes) {
  const auto first = line.find_first_not_of(" \t\r");
  if (first == std::string::npos) return true;
  return prefixes.find(line[first]) != std::string::npos;
}

}  // namespace

LoadedEdgeList load_edge_list(std::istream& in, const EdgeListDialect& dialect) {
  if (dialect.comment_prefixes.empty()) {
    throw std::invalid_argument("edge-list dialect needs at least one comment prefix");
  }
  LoadedEdgeList result;
  std::unordered_map<std::string, VertexId> ids;
  std::vector<Edge> edges;
  auto intern = [&](const std::string& label) {
    const auto [it, inserted] = ids.try_emplace(label, static_cast<VertexId>(result.labels.size()));
    if (inserted) result.labels.push_back(label);
    return it->second;
  };

  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (is_comment_or_blank(line, dialect.comment_prefixes)) continue;
    std::istringstream tokens(line);
    std::vector<std::string> fields;
    for (std::string tok; tokens >> tok;) fields.push_back(tok);
    if (fields.size() != 2) {
      throw FormatError("line " + std::to_string(line_number) + ": expected 2 tokens, found " +
                        std::to_string(fields.size()));
    }
    const VertexId u = intern(fields[0]);
    const VertexId v = intern(fields[1]);
    edges.emplace_back(u, v);
  }
  if (result.labels.empty()) throw FormatError("edge list contains no edges");
  result.graph = build_graph(result.labels.size(), edges);
  return result;
}

void write_edge_list(const Graph& g, std::ostream& out) {
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

const std::vector<std::string> kRecordHeader{
    "model",       "tau",      "alpha",   "dim",        "n",
    "m",           "graph_seed", "run_seed", "s0",       "s1",
    "algorithm",   "total_cost", "cost_s0", "cost_s1",  "rounds",
    "max_expanded_degree", "final_expanded_degree", "path_len", "oracle_dist"};

std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), end);
}

namespace {

std::string quote_csv(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

template <class T>
T parse_number(const std::string& text, std::size_t line, const char* column) {
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    throw FormatError("line " + std::to_string(line) + ": bad " + column + " value '" + text + "'");
  }
  return value;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

std::size_t write_records(std::span<const ExperimentRecord> records, std::ostream& out) {
  std::string text;
  for (std::size_t i = 0; i < kRecordHeader.size(); ++i) {
    if (i) text += ',';
    text += kRecordHeader[i];
  }
  text += '\n';
  for (const auto& r : records) {
    const std::array<std::string, 19> row{
        quote_csv(r.model),
        format_double(r.tau),
        r.alpha ? format_double(*r.alpha) : std::string{},
        r.dim ? std::to_string(*r.dim) : std::string{},
        std::to_string(r.n),
        std::to_string(r.m),
        std::to_string(r.graph_seed),
        std::to_string(r.run_seed),
        std::to_string(r.s0),
        std::to_string(r.s1),
        quote_csv(r.algorithm),
        std::to_string(r.total_cost),
        std::to_string(r.cost_s0),
        std::to_string(r.cost_s1),
        std::to_string(r.rounds),
        std::to_string(r.max_expanded_degree),
        std::to_string(r.final_expanded_degree),
        std::to_string(r.path_len),
        std::to_string(r.oracle_dist)};
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) text += ',';
      text += row[i];
    }
    text += '\n';
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::ios_base::failure("failed to write record CSV");
  return text.size();
}

std::vector<ExperimentRecord> read_records(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("line 1: missing CSV header");
  if (split_csv_line(line) != kRecordHeader) throw FormatError("line 1: unexpected CSV header");
  std::vector<ExperimentRecord> records;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != kRecordHeader.size()) {
      throw FormatError("line " + std::to_string(line_number) + ": expected " +
                        std::to_string(kRecordHeader.size()) + " fields, found " +
                        std::to_string(f.size()));
    }
    const std::size_t ln = line_number;
    ExperimentRecord r;
    r.model = f[0];
    r.tau = parse_number<double>(f[1], ln, "tau");
    if (!f[2].empty()) r.alpha = parse_number<double>(f[2], ln, "alpha");
    if (!f[3].empty()) r.dim = parse_number<int>(f[3], ln, "dim");
    r.n = parse_number<std::uint64_t>(f[4], ln, "n");
    r.m = parse_number<std::uint64_t>(f[5], ln, "m");
    r.graph_seed = parse_number<std::uint64_t>(f[6], ln, "graph_seed");
    r.run_seed = parse_number<std::uint64_t>(f[7], ln, "run_seed");
    r.s0 = parse_number<std::uint64_t>(f[8], ln, "s0");
    r.s1 = parse_number<std::uint64_t>(f[9], ln, "s1");
    r.algorithm = f[10];
    r.total_cost = parse_number<std::uint64_t>(f[11], ln, "total_cost");
    r.cost_s0 = parse_number<std::uint64_t>(f[12], ln, "cost_s0");
    r.cost_s1 = parse_number<std::uint64_t>(f[13], ln, "cost_s1");
    r.rounds = parse_number<std::uint64_t>(f[14], ln, "rounds");
    r.max_expanded_degree = parse_number<std::uint64_t>(f[15], ln, "max_expanded_degree");
    r.final_expanded_degree = parse_number<std::uint64_t>(f[16], ln, "final_expanded_degree");
    r.path_len = parse_number<std::int64_t>(f[17], ln, "path_len");
    r.oracle_dist = parse_number<std::int64_t>(f[18], ln, "oracle_dist");
    records.push_back(std::move(r));
  }
  return records;
}

namespace {

constexpr std::array<char, 5> kMagic{'B', 'B', 'F', 'S', '1'};

class ByteWriter {
 public:
  explicit ByteWriter(std::ostream& out) : out_(out) {}

  void u8(std::uint8_t v) { put(&v, 1); }
  void u32(std::uint32_t v) { little_endian(v); }
  void u64(std::uint64_t v) { little_endian(v); }
  void i32(std::int32_t v) { u32(static_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void raw(const char* data, std::size_t size) { put(data, size); }

 private:
  template <class T>
  void little_endian(T v) {
    std::array<unsigned char, sizeof(T)> bytes{};
    for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>(v >> (8 * i));
    put(bytes.data(), bytes.size());
  }
  void put(const void* data, std::size_t size) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out_) throw std::ios_base::failure("failed to write instance");
  }

  std::ostream& out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::istream& in) : in_(in) {}

  std::uint8_t u8() {
    std::uint8_t v = 0;
    get(&v, 1);
    return v;
  }
  std::uint32_t u32() { return little_endian<std::uint32_t>(); }
  std::uint64_t u64() { return little_endian<std::uint64_t>(); }
  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  void raw(char* data, std::size_t size) { get(data, size); }
  bool at_end() { return in_.peek() == std::char_traits<char>::eof(); }

 private:
  template <class T>
  T little_endian() {
    std::array<unsigned char, sizeof(T)> bytes{};
    get(bytes.data(), bytes.size());
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(bytes[i]) << (8 * i);
    return v;
  }
  void get(void* data, std::size_t size) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(size));
    if (in_.gcount() != static_cast<std::streamsize>(size)) {
      throw FormatError("instance file is truncated");
    }
  }

  std::istream& in_;
};

constexpr std::uint32_t kProvenanceBytes = 1 + 8 + 1 + 8 + 1 + 4 + 8 + 8 + 8;

}  // namespace

void save_instance(const WeightedInstance& inst, std::ostream& out) {
  ByteWriter w(out);
  const Provenance& p = inst.provenance;
  w.raw(kMagic.data(), kMagic.size());
  w.u32(kProvenanceBytes);
  w.u8(p.model == Model::chung_lu ? 0 : 1);
  w.f64(p.tau);
  w.u8(p.alpha ? 1 : 0);
  w.f64(p.alpha.value_or(0.0));
  w.u8(p.dim ? 1 : 0);
  w.i32(p.dim.value_or(0));
  w.f64(p.target_avg_degree);
  w.f64(p.constant);
  w.u64(p.seed);

  w.u64(inst.weights.size());
  for (double x : inst.weights) w.f64(x);
  w.u64(inst.positions.size());
  for (double x : inst.positions) w.f64(x);
  const auto edges = inst.graph.edges();
  w.u64(edges.size());
  for (const auto& [u, v] : edges) {
    w.u32(u);
    w.u32(v);
  }
}

WeightedInstance load_instance(std::istream& in) {
  ByteReader r(in);
  std::array<char, 5> magic{};
  r.raw(magic.data(), magic.size());
  if (magic != kMagic) throw FormatError("bad magic: not a BBFS1 instance file");
  if (r.u32() != kProvenanceBytes) throw FormatError("unsupported provenance block length");

  WeightedInstance inst;
  Provenance& p = inst.provenance;
  const std::uint8_t model = r.u8();
  if (model > 1) throw FormatError("unknown model tag " + std::to_string(model));
  p.model = model == 0 ? Model::chung_lu : Model::girg;
  p.tau = r.f64();
  const bool has_alpha = r.u8() != 0;
  const double alpha = r.f64();
  if (has_alpha) p.alpha = alpha;
  const bool has_dim = r.u8() != 0;
  const std::int32_t dim = r.i32();
  if (has_dim) p.dim = dim;
  p.target_avg_degree = r.f64();
  p.constant = r.f64();
  p.seed = r.u64();

  const std::uint64_t n = r.u64();
  if (n > (std::uint64_t{1} << 31)) throw FormatError("vertex count out of range");
  // Blocks grow as they are read so a corrupt count cannot force a huge allocation.
  for (std::uint64_t i = 0; i < n; ++i) inst.weights.push_back(r.f64());
  const std::uint64_t coords = r.u64();
  if (coords != 0 && (!has_dim || dim < 1 || coords != n * static_cast<std::uint64_t>(dim))) {
    throw FormatError("position block does not match n * dim");
  }
  for (std::uint64_t i = 0; i < coords; ++i) inst.positions.push_back(r.f64());
  const std::uint64_t m = r.u64();
  if (n > 0 && m > n * (n - 1) / 2) throw FormatError("edge count out of range");
  std::vector<Edge> edges;
  for (std::uint64_t i = 0; i < m; ++i) {
    const VertexId u = r.u32();
    const VertexId v = r.u32();
    if (u >= v || v >= n) throw FormatError("edge is not a sorted in-range pair");
    edges.emplace_back(u, v);
  }
  if (!r.at_end()) throw FormatError("trailing bytes after edge block");
  inst.graph = build_graph(n, edges);
  return inst;
}

void save_instance_file(const WeightedInstance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::ios_base::failure("cannot open " + path + " for writing");
  save_instance(inst, out);
}

WeightedInstance load_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  return load_instance(in);
}

}  // namespace bbfs
