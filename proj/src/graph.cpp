#include "bbfs/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace bbfs {

bool Graph::has_edge(VertexId u, VertexId v) const noexcept {
  if (u >= vertex_count() || v >= vertex_count()) return false;
  const auto adj = neighbors(u);
  return std::binary_search(adj.begin(), adj.end(), v);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (VertexId u = 0; u < vertex_count(); ++u) {
    for (VertexId v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

std::size_t Graph::max_degree() const noexcept {
  std::size_t best = 0;
  for (VertexId v = 0; v < vertex_count(); ++v) best = std::max(best, degree(v));
  return best;
}

Graph build_graph(std::size_t n, std::span<const Edge> edges) {
  Graph g;
  g.offsets_.assign(n + 1, 0);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) {
      throw std::out_of_range("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                              ") has an endpoint outside [0, " + std::to_string(n) + ")");
    }
    if (u == v) continue;
    ++g.offsets_[u + 1];
    ++g.offsets_[v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];

  std::vector<VertexId> slots(g.offsets_[n]);
  std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& [u, v] : edges) {
    if (u == v) continue;
    slots[cursor[u]++] = v;
    slots[cursor[v]++] = u;
  }

  // Sort and deduplicate each slice, compacting in place.
  std::size_t write = 0;
  std::vector<std::size_t> offsets(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    const auto first = slots.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
    const auto last = slots.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
    std::sort(first, last);
    const auto unique_end = std::unique(first, last);
    offsets[v] = write;
    for (auto it = first; it != unique_end; ++it) slots[write++] = *it;
  }
  offsets[n] = write;
  slots.resize(write);
  slots.shrink_to_fit();
  g.offsets_ = std::move(offsets);
  g.neighbors_ = std::move(slots);
  return g;
}

std::size_t ComponentLabels::second_size() const noexcept {
  std::size_t second = 0;
  for (std::size_t id = 0; id < component_sizes.size(); ++id) {
    if (id != giant_id) second = std::max(second, component_sizes[id]);
  }
  return second;
}

ComponentLabels components(const Graph& g) {
  const std::size_t n = g.vertex_count();
  constexpr std::uint32_t kUnset = ~std::uint32_t{0};
  ComponentLabels result;
  result.label.assign(n, kUnset);
  std::vector<VertexId> stack;
  for (VertexId root = 0; root < n; ++root) {
    if (result.label[root] != kUnset) continue;
    const auto id = static_cast<std::uint32_t>(result.component_sizes.size());
    std::size_t size = 0;
    result.label[root] = id;
    stack.push_back(root);
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      ++size;
      for (VertexId w : g.neighbors(v)) {
        if (result.label[w] == kUnset) {
          result.label[w] = id;
          stack.push_back(w);
        }
      }
    }
    result.component_sizes.push_back(size);
    if (size > result.component_sizes[result.giant_id]) result.giant_id = id;
  }
  return result;
}

std::vector<std::uint32_t> bfs_distances(const Graph& g, VertexId s) {
  std::vector<std::uint32_t> dist(g.vertex_count(), kUnreachable);
  std::vector<VertexId> queue;
  queue.reserve(g.vertex_count());
  dist[s] = 0;
  queue.push_back(s);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId v = queue[head];
    for (VertexId w : g.neighbors(v)) {
      if (dist[w] == kUnreachable) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

std::optional<std::uint32_t> bfs_distance(const Graph& g, VertexId s, VertexId t) {
  if (s == t) return 0;
  std::vector<std::uint32_t> dist(g.vertex_count(), kUnreachable);
  std::vector<VertexId> queue;
  dist[s] = 0;
  queue.push_back(s);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const VertexId v = queue[head];
    for (VertexId w : g.neighbors(v)) {
      if (dist[w] != kUnreachable) continue;
      dist[w] = dist[v] + 1;
      if (w == t) return dist[w];
      queue.push_back(w);
    }
  }
  return std::nullopt;
}

}  // namespace bbfs
