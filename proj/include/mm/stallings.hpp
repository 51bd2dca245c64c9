#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "mm/word.hpp"

namespace mm {

/// Basepointed labelled graph with no two equally labelled edges leaving or
/// entering any vertex. Vertex 0 is the basepoint; every vertex is reachable.
class FoldedGraph {
 public:
  struct Edge {
    std::size_t from;
    std::size_t generator;
    std::size_t to;
    auto operator<=>(const Edge&) const = default;
  };

  /// Wedge of petals, one per generator word, folded.
  static FoldedGraph from_generators(std::span<const Word> generators) {
    std::size_t vertices = 1;
    std::vector<Edge> edges;
    for (const Word& w : generators) {
      if (w.empty()) continue;
      std::size_t at = 0;
      for (std::size_t i = 0; i < w.size(); ++i) {
        std::size_t next = (i + 1 == w.size()) ? 0 : vertices++;
        if (w[i] > 0) {
          edges.push_back({at, generator_of(w[i]), next});
        } else {
          edges.push_back({next, generator_of(w[i]), at});
        }
        at = next;
      }
    }
    return FoldedGraph(vertices, std::move(edges));
  }

  std::size_t vertex_count() const { return out_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Rank of the fundamental group, i.e. of the subgroup the graph carries.
  std::size_t rank() const { return edges_.size() + 1 - vertex_count(); }

  std::optional<std::size_t> step(std::size_t v, Letter l) const {
    const auto& table = l > 0 ? out_[v] : in_[v];
    auto it = table.find(generator_of(l));
    if (it == table.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::size_t> trace(const Word& w) const {
    std::size_t v = 0;
    for (Letter l : w) {
      auto next = step(v, l);
      if (!next) return std::nullopt;
      v = *next;
    }
    return v;
  }

  bool accepts(const Word& w) const {
    auto end = trace(w);
    return end && *end == 0;
  }

  /// Core of the fibre product, restricted to the component of (0,0).
  /// Carries the intersection of the two subgroups.
  static FoldedGraph pullback(const FoldedGraph& a, const FoldedGraph& b) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> id;
    std::vector<std::pair<std::size_t, std::size_t>> order;
    std::vector<Edge> edges;
    id[{0, 0}] = 0;
    order.push_back({0, 0});
    for (std::size_t k = 0; k < order.size(); ++k) {
      auto [va, vb] = order[k];
      auto visit = [&](const auto& ta, const auto& tb, bool outgoing) {
        for (auto [g, ua] : ta) {
          auto it = tb.find(g);
          if (it == tb.end()) continue;
          std::pair<std::size_t, std::size_t> key{ua, it->second};
          auto [pos, inserted] = id.emplace(key, order.size());
          if (inserted) order.push_back(key);
          if (outgoing) edges.push_back({k, g, pos->second});
          else edges.push_back({pos->second, g, k});
        }
      };
      visit(a.out_[va], b.out_[vb], true);
      visit(a.in_[va], b.in_[vb], false);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return FoldedGraph(order.size(), std::move(edges));
  }

  /// Free basis read from a spanning tree: one word per non-tree edge.
  std::vector<Word> basis() const {
    std::vector<std::optional<Word>> path(vertex_count());
    std::vector<bool> tree_edge(edges_.size(), false);
    path[0] = Word{};
    std::queue<std::size_t> todo;
    todo.push(0);
    while (!todo.empty()) {
      std::size_t v = todo.front();
      todo.pop();
      for (std::size_t e = 0; e < edges_.size(); ++e) {
        const Edge& ed = edges_[e];
        if (ed.from == v && !path[ed.to]) {
          path[ed.to] = *path[v] * Word::generator(ed.generator, 1);
          tree_edge[e] = true;
          todo.push(ed.to);
        } else if (ed.to == v && !path[ed.from]) {
          path[ed.from] = *path[v] * Word::generator(ed.generator, -1);
          tree_edge[e] = true;
          todo.push(ed.from);
        }
      }
    }
    std::vector<Word> out;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      if (tree_edge[e]) continue;
      const Edge& ed = edges_[e];
      out.push_back(*path[ed.from] * Word::generator(ed.generator, 1) * path[ed.to]->inverse());
    }
    return out;
  }

 private:
  FoldedGraph(std::size_t vertices, std::vector<Edge> edges) {
    fold(vertices, std::move(edges));
  }

  void fold(std::size_t vertices, std::vector<Edge> edges) {
    std::vector<std::size_t> parent(vertices);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    auto unite = [&](std::size_t x, std::size_t y) {
      x = find(x);
      y = find(y);
      if (x == y) return false;
      if (y < x) std::swap(x, y);
      parent[y] = x;
      return true;
    };
    bool changed = true;
    while (changed) {
      changed = false;
      std::map<std::pair<std::size_t, std::size_t>, std::size_t> out, in;
      for (auto& e : edges) {
        e.from = find(e.from);
        e.to = find(e.to);
        auto [o, fresh_o] = out.emplace(std::make_pair(e.from, e.generator), e.to);
        if (!fresh_o && find(o->second) != find(e.to)) changed |= unite(o->second, e.to);
        auto [i, fresh_i] = in.emplace(std::make_pair(e.to, e.generator), e.from);
        if (!fresh_i && find(i->second) != find(e.from)) changed |= unite(i->second, e.from);
      }
      for (auto& e : edges) {
        e.from = find(e.from);
        e.to = find(e.to);
      }
      std::sort(edges.begin(), edges.end());
      edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    }
    // renumber reachable vertices in BFS order from the basepoint
    std::vector<std::size_t> number(vertices, SIZE_MAX);
    std::vector<std::size_t> order{find(0)};
    number[find(0)] = 0;
    for (std::size_t k = 0; k < order.size(); ++k) {
      for (const auto& e : edges) {
        std::size_t other = e.from == order[k] ? e.to : (e.to == order[k] ? e.from : SIZE_MAX);
        if (other != SIZE_MAX && number[other] == SIZE_MAX) {
          number[other] = order.size();
          order.push_back(other);
        }
      }
    }
    out_.assign(order.size(), {});
    in_.assign(order.size(), {});
    edges_.clear();
    for (const auto& e : edges) {
      if (number[e.from] == SIZE_MAX) continue;
      Edge r{number[e.from], e.generator, number[e.to]};
      edges_.push_back(r);
      out_[r.from][r.generator] = r.to;
      in_[r.to][r.generator] = r.from;
    }
    std::sort(edges_.begin(), edges_.end());
  }

  std::vector<Edge> edges_;
  std::vector<std::map<std::size_t, std::size_t>> out_, in_;
};

inline bool stallings_membership(std::span<const Word> generators, const Word& w) {
  return FoldedGraph::from_generators(generators).accepts(w);
}

}  // namespace mm
