#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace bbfs {

using VertexId = std::uint32_t;
using Edge = std::pair<VertexId, VertexId>;

/// Immutable undirected simple graph in compressed-sparse-row form.
///
/// Every undirected edge {u, v} is stored twice, once in each endpoint's
/// neighbor slice. Slices are strictly increasing, contain no self-loops, and
/// are built only through build_graph().
class Graph {
 public:
  Graph() = default;

  std::size_t vertex_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }

  std::span<const VertexId> neighbors(VertexId v) const noexcept {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }

  std::size_t degree(VertexId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  bool has_edge(VertexId u, VertexId v) const noexcept;

  /// Edges as sorted (u, v) pairs with u < v.
  std::vector<Edge> edges() const;

  std::size_t max_degree() const noexcept;

  friend bool operator==(const Graph&, const Graph&) = default;

  friend Graph build_graph(std::size_t n, std::span<const Edge> edges);

 private:
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> neighbors_;
};

/// Builds a Graph from an arbitrary edge sequence. Self-loops and duplicate
/// pairs (in either orientation) are dropped. Throws std::out_of_range naming
/// the offending pair if an endpoint is not in [0, n).
Graph build_graph(std::size_t n, std::span<const Edge> edges);

struct ComponentLabels {
  std::vector<std::uint32_t> label;            // component id per vertex
  std::vector<std::size_t> component_sizes;    // indexed by component id
  std::uint32_t giant_id = 0;                  // largest, smallest id on ties

  std::size_t giant_size() const noexcept {
    return component_sizes.empty() ? 0 : component_sizes[giant_id];
  }
  /// Size of the second-largest component, 0 if there is only one.
  std::size_t second_size() const noexcept;
  bool connected(VertexId u, VertexId v) const noexcept { return label[u] == label[v]; }
};

/// Component ids are assigned in order of each component's smallest vertex.
ComponentLabels components(const Graph& g);

/// Unidirectional BFS hop distance; std::nullopt when s and t are disconnected.
std::optional<std::uint32_t> bfs_distance(const Graph& g, VertexId s, VertexId t);

/// Hop distances from s to every vertex; unreachable vertices get kUnreachable.
inline constexpr std::uint32_t kUnreachable = ~std::uint32_t{0};
std::vector<std::uint32_t> bfs_distances(const Graph& g, VertexId s);

}  // namespace bbfs
