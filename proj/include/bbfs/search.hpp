#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bbfs/graph.hpp"
#include "bbfs/rng.hpp"

namespace bbfs {

enum class Algorithm { vba, vbe, eba, lb, lbes };

inline constexpr std::array<Algorithm, 5> kAllAlgorithms{Algorithm::vba, Algorithm::vbe,
                                                         Algorithm::eba, Algorithm::lb,
                                                         Algorithm::lbes};

const char* algorithm_name(Algorithm a) noexcept;
/// Throws std::invalid_argument for unknown names.
Algorithm parse_algorithm(const std::string& name);
/// True for algorithms that always return a shortest path (vbe, lb).
bool is_exact(Algorithm a) noexcept;

struct SearchOutcome {
  std::optional<std::vector<VertexId>> path;  // s0 ... s1
  std::uint64_t cost_s0 = 0;
  std::uint64_t cost_s1 = 0;
  std::uint64_t total_cost = 0;
  std::uint64_t rounds = 0;  // explored edges; edge-balanced search only
  std::uint64_t max_expanded_degree = 0;
  std::uint64_t final_expanded_degree = 0;
  bool met = false;

  /// Hop count of the path, or -1 when none was found.
  std::int64_t path_length() const noexcept {
    return path ? static_cast<std::int64_t>(path->size()) - 1 : -1;
  }

  friend bool operator==(const SearchOutcome&, const SearchOutcome&) = default;
};

/// One vertex expansion as seen by an instrumented search.
struct ExpansionEvent {
  int side = 0;
  VertexId vertex = 0;
  std::uint32_t layer = 0;  // hop distance from the side's source
  std::uint64_t degree = 0;
  std::array<std::size_t, 2> discovered{};  // |S_s0|, |S_s1| when the side was chosen
  bool emptying = false;                    // exact search's final layer drain
};

/// Optional observer filled by the searches; used by tests and debugging.
struct SearchTrace {
  std::vector<ExpansionEvent> expansions;
  /// Edge-balanced search: explored-edge counts per side after every round.
  std::vector<std::array<std::uint64_t, 2>> explored_edges;

  void clear() {
    expansions.clear();
    explored_edges.clear();
  }
};

/// Parent lookup for one side's search tree: the parent of a discovered
/// vertex, the vertex itself for the root, std::nullopt if undiscovered.
using ParentLookup = std::function<std::optional<VertexId>(VertexId)>;

/// Joins the tree path root0 -> meet with meet -> root1. Throws
/// std::logic_error if meet is not discovered on both sides.
std::vector<VertexId> reconstruct_path(VertexId meet, const ParentLookup& side0,
                                       const ParentLookup& side1);

/// Reusable search state bound to one graph. Membership arrays are
/// run-stamped, so a search costs time proportional to what it touches.
/// Not thread-safe; use one instance per thread.
class BidirectionalSearch {
 public:
  explicit BidirectionalSearch(const Graph& g);

  SearchOutcome run(Algorithm algorithm, VertexId s0, VertexId s1, Rng& rng,
                    SearchTrace* trace = nullptr);

  SearchOutcome vba(VertexId s0, VertexId s1, Rng& rng, SearchTrace* trace = nullptr);
  SearchOutcome vbe(VertexId s0, VertexId s1, Rng& rng, SearchTrace* trace = nullptr);
  SearchOutcome eba(VertexId s0, VertexId s1, Rng& rng, SearchTrace* trace = nullptr);
  SearchOutcome lb(VertexId s0, VertexId s1, SearchTrace* trace = nullptr);
  SearchOutcome lbes(VertexId s0, VertexId s1, Rng& rng, SearchTrace* trace = nullptr);

  const Graph& graph() const noexcept { return *graph_; }

 private:
  struct Side {
    VertexId source = 0;
    std::vector<VertexId> current;  // Q^- is current[head..]
    std::size_t head = 0;
    std::vector<VertexId> next;     // Q^+
    std::size_t discovered = 0;
    std::uint32_t depth = 0;        // layer index of Q^-
    std::uint64_t cost = 0;
    std::uint64_t frontier_degree = 0;  // degree sum of Q^-
    std::uint64_t next_degree = 0;      // degree sum of Q^+

    bool frontier_empty() const noexcept { return head == current.size(); }
    std::size_t frontier_size() const noexcept { return current.size() - head; }
  };

  template <bool Exact>
  SearchOutcome vertex_balanced(VertexId s0, VertexId s1, Rng& rng, SearchTrace* trace);
  template <bool EarlyStop>
  SearchOutcome layer_balanced(VertexId s0, VertexId s1, Rng* rng, SearchTrace* trace);

  void check_vertices(VertexId s0, VertexId s1) const;
  void begin(VertexId s0, VertexId s1);
  bool seen(int side, VertexId v) const noexcept { return seen_[side][v] == stamp_; }
  bool in_frontier(int side, VertexId v) const noexcept;
  void discover(int side, VertexId v, VertexId parent);
  VertexId pop(int side, bool emptying, SearchTrace* trace);
  void roll(int side);
  std::vector<VertexId> join(int side, VertexId near, VertexId far) const;
  std::vector<VertexId> meet_path(VertexId meet) const { return join(0, meet, meet); }
  SearchOutcome finish(std::optional<std::vector<VertexId>> path) const;

  const Graph* graph_;
  std::uint32_t stamp_ = 0;
  std::array<std::vector<std::uint32_t>, 2> seen_;
  std::array<std::vector<std::uint32_t>, 2> popped_;
  std::array<std::vector<VertexId>, 2> parent_;
  std::array<std::vector<std::uint32_t>, 2> dist_;
  std::array<Side, 2> sides_;
  std::uint64_t max_degree_ = 0;
  std::uint64_t final_degree_ = 0;
  std::uint64_t rounds_ = 0;
  std::vector<VertexId> scratch_;
};

SearchOutcome vba_search(const Graph& g, VertexId s0, VertexId s1, Rng& rng,
                         SearchTrace* trace = nullptr);
SearchOutcome vbe_search(const Graph& g, VertexId s0, VertexId s1, Rng& rng,
                         SearchTrace* trace = nullptr);
SearchOutcome eba_search(const Graph& g, VertexId s0, VertexId s1, Rng& rng,
                         SearchTrace* trace = nullptr);
SearchOutcome lb_search(const Graph& g, VertexId s0, VertexId s1, SearchTrace* trace = nullptr);
SearchOutcome lbes_search(const Graph& g, VertexId s0, VertexId s1, Rng& rng,
                          SearchTrace* trace = nullptr);

}  // namespace bbfs
