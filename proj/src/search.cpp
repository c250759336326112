#include "bbfs/search.hpp"

#include <algorithm>
#include <span>
#include <stdexcept>

namespace bbfs {

namespace {

constexpr VertexId kNoParent = ~VertexId{0};

SearchOutcome identity_outcome(VertexId s) {
  SearchOutcome out;
  out.path = std::vector<VertexId>{s};
  out.met = true;
  return out;
}

}  // namespace

const char* algorithm_name(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::vba: return "vba";
    case Algorithm::vbe: return "vbe";
    case Algorithm::eba: return "eba";
    case Algorithm::lb: return "lb";
    case Algorithm::lbes: return "lbes";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& name) {
  for (Algorithm a : kAllAlgorithms) {
    if (name == algorithm_name(a)) return a;
  }
  throw std::invalid_argument("unknown algorithm '" + name + "' (expected vba, vbe, eba, lb or lbes)");
}

bool is_exact(Algorithm a) noexcept { return a == Algorithm::vbe || a == Algorithm::lb; }

std::vector<VertexId> reconstruct_path(VertexId meet, const ParentLookup& side0,
                                       const ParentLookup& side1) {
  auto walk = [meet](const ParentLookup& parent_of, int side) {
    std::vector<VertexId> chain;
    VertexId v = meet;
    while (true) {
      const auto parent = parent_of(v);
      if (!parent) {
        throw std::logic_error("vertex " + std::to_string(v) + " is not discovered on side " +
                               std::to_string(side));
      }
      chain.push_back(v);
      if (*parent == v) break;
      v = *parent;
    }
    return chain;
  };
  std::vector<VertexId> path = walk(side0, 0);
  std::reverse(path.begin(), path.end());
  const std::vector<VertexId> tail = walk(side1, 1);
  path.insert(path.end(), tail.begin() + 1, tail.end());
  return path;
}

BidirectionalSearch::BidirectionalSearch(const Graph& g) : graph_(&g) {
  const std::size_t n = g.vertex_count();
  for (int s = 0; s < 2; ++s) {
    seen_[s].assign(n, 0);
    popped_[s].assign(n, 0);
    parent_[s].assign(n, kNoParent);
    dist_[s].assign(n, 0);
  }
}

void BidirectionalSearch::check_vertices(VertexId s0, VertexId s1) const {
  const std::size_t n = graph_->vertex_count();
  if (s0 >= n || s1 >= n) {
    throw std::out_of_range("search endpoints (" + std::to_string(s0) + ", " +
                            std::to_string(s1) + ") outside [0, " + std::to_string(n) + ")");
  }
}

void BidirectionalSearch::begin(VertexId s0, VertexId s1) {
  if (++stamp_ == 0) {
    for (int s = 0; s < 2; ++s) {
      std::fill(seen_[s].begin(), seen_[s].end(), 0);
      std::fill(popped_[s].begin(), popped_[s].end(), 0);
    }
    stamp_ = 1;
  }
  const std::array<VertexId, 2> sources{s0, s1};
  for (int s = 0; s < 2; ++s) {
    Side& side = sides_[s];
    side.source = sources[s];
    side.current.assign(1, sources[s]);
    side.head = 0;
    side.next.clear();
    side.discovered = 1;
    side.depth = 0;
    side.cost = 0;
    side.frontier_degree = graph_->degree(sources[s]);
    side.next_degree = 0;
    seen_[s][sources[s]] = stamp_;
    parent_[s][sources[s]] = sources[s];
    dist_[s][sources[s]] = 0;
  }
  max_degree_ = 0;
  final_degree_ = 0;
  rounds_ = 0;
}

bool BidirectionalSearch::in_frontier(int side, VertexId v) const noexcept {
  return seen(side, v) && dist_[side][v] == sides_[side].depth && popped_[side][v] != stamp_;
}

void BidirectionalSearch::discover(int side, VertexId v, VertexId parent) {
  seen_[side][v] = stamp_;
  parent_[side][v] = parent;
  dist_[side][v] = dist_[side][parent] + 1;
  sides_[side].next.push_back(v);
  sides_[side].next_degree += graph_->degree(v);
  ++sides_[side].discovered;
}

VertexId BidirectionalSearch::pop(int side, bool emptying, SearchTrace* trace) {
  Side& s = sides_[side];
  const VertexId v = s.current[s.head++];
  popped_[side][v] = stamp_;
  const std::uint64_t degree = graph_->degree(v);
  s.frontier_degree -= degree;
  max_degree_ = std::max(max_degree_, degree);
  final_degree_ = degree;
  if (trace) {
    trace->expansions.push_back({side, v, dist_[side][v], degree,
                                 {sides_[0].discovered, sides_[1].discovered}, emptying});
  }
  return v;
}

void BidirectionalSearch::roll(int side) {
  Side& s = sides_[side];
  std::swap(s.current, s.next);
  s.next.clear();
  s.head = 0;
  s.frontier_degree = s.next_degree;
  s.next_degree = 0;
  ++s.depth;
}

std::vector<VertexId> BidirectionalSearch::join(int side, VertexId near, VertexId far) const {
  auto chain = [this](int s, VertexId v) {
    std::vector<VertexId> out;
    while (true) {
      out.push_back(v);
      const VertexId p = parent_[s][v];
      if (p == v) break;
      v = p;
    }
    return out;
  };
  std::vector<VertexId> head = chain(side, near);  // near ... root_side
  std::vector<VertexId> tail = chain(1 - side, far);  // far ... root_other
  std::reverse(head.begin(), head.end());
  if (near == far) tail.erase(tail.begin());
  head.insert(head.end(), tail.begin(), tail.end());
  if (side == 1) std::reverse(head.begin(), head.end());
  return head;
}

SearchOutcome BidirectionalSearch::finish(std::optional<std::vector<VertexId>> path) const {
  SearchOutcome out;
  out.met = path.has_value();
  out.path = std::move(path);
  out.cost_s0 = sides_[0].cost;
  out.cost_s1 = sides_[1].cost;
  out.total_cost = out.cost_s0 + out.cost_s1;
  out.max_expanded_degree = max_degree_;
  out.final_expanded_degree = final_degree_;
  return out;
}

template <bool Exact>
SearchOutcome BidirectionalSearch::vertex_balanced(VertexId s0, VertexId s1, Rng& rng,
                                                   SearchTrace* trace) {
  check_vertices(s0, s1);
  if (s0 == s1) return identity_outcome(s0);
  begin(s0, s1);
  while (!sides_[0].frontier_empty() && !sides_[1].frontier_empty()) {
    const int s = sides_[0].discovered <= sides_[1].discovered ? 0 : 1;
    const int other = 1 - s;
    Side& side = sides_[s];
    const VertexId v = pop(s, false, trace);
    side.cost += graph_->degree(v);

    const std::size_t appended_from = side.next.size();
    std::optional<VertexId> meet;
    for (VertexId w : graph_->neighbors(v)) {
      if (!seen(s, w)) discover(s, w, v);
      if (!meet && seen(other, w)) meet = w;
    }
    rng.shuffle(std::span<VertexId>(side.next).subspan(appended_from));

    if (meet) {
      if constexpr (!Exact) {
        return finish(meet_path(*meet));
      } else {
        for (VertexId w : graph_->neighbors(v)) {
          if (in_frontier(other, w)) return finish(join(s, v, w));
        }
        const int p = sides_[0].frontier_size() <= sides_[1].frontier_size() ? 0 : 1;
        while (!sides_[p].frontier_empty()) {
          const VertexId drained = pop(p, true, trace);
          sides_[p].cost += graph_->degree(drained);
          for (VertexId w : graph_->neighbors(drained)) {
            if (in_frontier(1 - p, w)) return finish(join(p, drained, w));
          }
        }
        return finish(meet_path(*meet));
      }
    }
    if (side.frontier_empty()) roll(s);
  }
  return finish(std::nullopt);
}

SearchOutcome BidirectionalSearch::vba(VertexId s0, VertexId s1, Rng& rng, SearchTrace* trace) {
  return vertex_balanced<false>(s0, s1, rng, trace);
}

SearchOutcome BidirectionalSearch::vbe(VertexId s0, VertexId s1, Rng& rng, SearchTrace* trace) {
  return vertex_balanced<true>(s0, s1, rng, trace);
}

SearchOutcome BidirectionalSearch::eba(VertexId s0, VertexId s1, Rng& rng, SearchTrace* trace) {
  check_vertices(s0, s1);
  if (s0 == s1) return identity_outcome(s0);
  if (graph_->degree(s0) == 0 || graph_->degree(s1) == 0) return SearchOutcome{};
  begin(s0, s1);

  // Per side: the vertex being expanded and a copy of its neighbour slice
  // whose first `explored` entries are the edges drawn so far.
  std::array<std::optional<VertexId>, 2> current{};
  std::array<std::vector<VertexId>, 2> incident;
  std::array<std::size_t, 2> explored{0, 0};
  auto exhausted = [&](int s) { return !current[s] || explored[s] == incident[s].size(); };
  auto alive = [&](int s) { return !exhausted(s) || !sides_[s].frontier_empty(); };

  int s = 0;
  while (alive(0) && alive(1)) {
    const int other = 1 - s;
    if (exhausted(s)) {
      const VertexId v = pop(s, false, trace);
      current[s] = v;
      const auto adj = graph_->neighbors(v);
      incident[s].assign(adj.begin(), adj.end());
      explored[s] = 0;
    }
    const VertexId v = *current[s];
    auto& slice = incident[s];
    const std::size_t pick = explored[s] + rng.below(slice.size() - explored[s]);
    std::swap(slice[explored[s]], slice[pick]);
    const VertexId u = slice[explored[s]++];
    ++sides_[s].cost;
    ++rounds_;

    if (!seen(s, u)) discover(s, u, v);
    if (seen(other, u)) {
      if (trace) trace->explored_edges.push_back({sides_[0].cost, sides_[1].cost});
      SearchOutcome out = finish(meet_path(u));
      out.rounds = rounds_;
      return out;
    }
    if (sides_[s].frontier_empty() && exhausted(s)) roll(s);
    if (trace) trace->explored_edges.push_back({sides_[0].cost, sides_[1].cost});
    s = other;
  }
  SearchOutcome out = finish(std::nullopt);
  out.rounds = rounds_;
  return out;
}

template <bool EarlyStop>
SearchOutcome BidirectionalSearch::layer_balanced(VertexId s0, VertexId s1, Rng* rng,
                                                  SearchTrace* trace) {
  check_vertices(s0, s1);
  if (s0 == s1) return identity_outcome(s0);
  begin(s0, s1);
  while (!sides_[0].frontier_empty() && !sides_[1].frontier_empty()) {
    const int s = sides_[0].frontier_degree <= sides_[1].frontier_degree ? 0 : 1;
    const int other = 1 - s;
    Side& side = sides_[s];
    if constexpr (EarlyStop) {
      rng->shuffle(std::span<VertexId>(side.current).subspan(side.head));
    }
    std::optional<std::pair<VertexId, VertexId>> meet;
    while (!side.frontier_empty()) {
      const VertexId v = pop(s, false, trace);
      side.cost += graph_->degree(v);
      for (VertexId w : graph_->neighbors(v)) {
        if (!seen(s, w)) discover(s, w, v);
        if (seen(other, w) && (!meet || dist_[other][w] < dist_[other][meet->second])) {
          meet.emplace(v, w);
        }
      }
      if (EarlyStop && meet) break;
    }
    if (meet) return finish(join(s, meet->first, meet->second));
    roll(s);
  }
  return finish(std::nullopt);
}

SearchOutcome BidirectionalSearch::lb(VertexId s0, VertexId s1, SearchTrace* trace) {
  return layer_balanced<false>(s0, s1, nullptr, trace);
}

SearchOutcome BidirectionalSearch::lbes(VertexId s0, VertexId s1, Rng& rng, SearchTrace* trace) {
  return layer_balanced<true>(s0, s1, &rng, trace);
}

SearchOutcome BidirectionalSearch::run(Algorithm algorithm, VertexId s0, VertexId s1, Rng& rng,
                                       SearchTrace* trace) {
  switch (algorithm) {
    case Algorithm::vba: return vba(s0, s1, rng, trace);
    case Algorithm::vbe: return vbe(s0, s1, rng, trace);
    case Algorithm::eba: return eba(s0, s1, rng, trace);
    case Algorithm::lb: return lb(s0, s1, trace);
    case Algorithm::lbes: return lbes(s0, s1, rng, trace);
  }
  throw std::invalid_argument("unknown algorithm");
}

SearchOutcome vba_search(const Graph& g, VertexId s0, VertexId s1, Rng& rng, SearchTrace* trace) {
  return BidirectionalSearch(g).vba(s0, s1, rng, trace);
}

SearchOutcome vbe_search(const Graph& g, VertexId s0, VertexId s1, Rng& rng, SearchTrace* trace) {
  return BidirectionalSearch(g).vbe(s0, s1, rng, trace);
}

SearchOutcome eba_search(const Graph& g, VertexId s0, VertexId s1, Rng& rng, SearchTrace* trace) {
  return BidirectionalSearch(g).eba(s0, s1, rng, trace);
}

SearchOutcome lb_search(const Graph& g, VertexId s0, VertexId s1, SearchTrace* trace) {
  return BidirectionalSearch(g).lb(s0, s1, trace);
}

SearchOutcome lbes_search(const Graph& g, VertexId s0, VertexId s1, Rng& rng, SearchTrace* trace) {
  return BidirectionalSearch(g).lbes(s0, s1, rng, trace);
}

}  // namespace bbfs
