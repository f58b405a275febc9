#include "efp/ef_unlimited.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "efp/envy_check.hpp"
#include "efp/errors.hpp"

namespace efp {

int GraphH::position(int i, int j) const {
  auto it = position_[i].find(j);
  return it == position_[i].end() ? 0 : it->second;
}

bool GraphH::vertex_covers_component(int i, int k, int j) const {
  int pos = position(i, j);
  return pos != 0 && pos < k;
}

int GraphH::total_vertices() const {
  int n = 0;
  for (const Component& c : components) n += static_cast<int>(c.weights.size());
  return n;
}

GraphH build_graph_h(const Instance& inst) {
  if (!inst.unlimited())
    throw UsageError("graph H is defined for unlimited supply only");
  const int m = inst.num_agents();
  GraphH h;
  h.components.resize(m);
  h.position_.resize(m);
  for (int i = 0; i < m; ++i) {
    GraphH::Component& comp = h.components[i];
    comp.agent = i;
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      if (inst.agents[i].bundle.subset_of(inst.agents[j].bundle) &&
          inst.agents[j].valuation < inst.agents[i].valuation)
        comp.dominated.push_back(j);
    }
    std::sort(comp.dominated.begin(), comp.dominated.end(), [&](int a, int b) {
      if (inst.agents[a].valuation != inst.agents[b].valuation)
        return inst.agents[a].valuation < inst.agents[b].valuation;
      return a < b;
    });
    Rat prev(0);
    for (size_t k = 0; k < comp.dominated.size(); ++k) {
      Rat v = inst.agents[comp.dominated[k]].valuation;
      comp.weights.push_back(v - prev);
      prev = v;
      h.position_[i][comp.dominated[k]] = static_cast<int>(k) + 1;
    }
    comp.weights.push_back(inst.agents[i].valuation - prev);
  }
  return h;
}

namespace {

// Minimum flow with per-vertex lower bounds over the antichain network:
//   s -> u_in, split u_in -> u_out (lower bound = vertex weight),
//   u_out -> v_in for every oriented H edge u -> v, u_out -> t.
// All capacities are infinite, so a feasible flow is immediate (w(u) along
// s -> u_in -> u_out -> t per vertex) and minimization is one max-flow from t
// to s in the residual graph. The antichain is read off the induced cut:
// vertices whose split arc crosses from the t-unreachable side.
struct MinFlowAntichain {
  struct Arc {
    int from;
    int to;
    Rat lower;
    Rat flow;
  };
  int nodes = 0;
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> touching;  // arc ids incident to a node

  int add_node() {
    touching.emplace_back();
    return nodes++;
  }
  int add_arc(int from, int to, Rat lower, Rat flow) {
    int id = static_cast<int>(arcs.size());
    arcs.push_back({from, to, lower, flow});
    touching[from].push_back(id);
    touching[to].push_back(id);
    return id;
  }

  // Residual moves: forward along any arc (infinite capacity), backward along
  // an arc while flow > lower.
  bool bfs_path(int src, int dst, std::vector<std::pair<int, int>>& parent) {
    parent.assign(nodes, {-1, 0});
    parent[src] = {src, 0};
    std::deque<int> queue{src};
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop_front();
      if (x == dst) return true;
      for (int id : touching[x]) {
        const Arc& a = arcs[id];
        if (a.from == x && parent[a.to].first < 0) {
          parent[a.to] = {x, id + 1};
          queue.push_back(a.to);
        } else if (a.to == x && a.flow > a.lower && parent[a.from].first < 0) {
          parent[a.from] = {x, -(id + 1)};
          queue.push_back(a.from);
        }
      }
    }
    return false;
  }

  void minimize(int s, int t) {
    std::vector<std::pair<int, int>> parent;
    while (bfs_path(t, s, parent)) {
      // Bottleneck over backward moves; forward moves are unbounded.
      std::optional<Rat> delta;
      for (int x = s; x != t;) {
        auto [prev, enc] = parent[x];
        if (enc < 0) {
          const Arc& a = arcs[-enc - 1];
          Rat slack = a.flow - a.lower;
          if (!delta || slack < *delta) delta = slack;
        }
        x = prev;
      }
      for (int x = s; x != t;) {
        auto [prev, enc] = parent[x];
        if (enc > 0) arcs[enc - 1].flow += *delta;
        else arcs[-enc - 1].flow -= *delta;
        x = prev;
      }
    }
  }

  // Nodes reachable from t in the final residual graph.
  std::vector<char> reachable_from(int t) {
    std::vector<char> seen(nodes, 0);
    seen[t] = 1;
    std::deque<int> queue{t};
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop_front();
      for (int id : touching[x]) {
        const Arc& a = arcs[id];
        if (a.from == x && !seen[a.to]) {
          seen[a.to] = 1;
          queue.push_back(a.to);
        } else if (a.to == x && a.flow > a.lower && !seen[a.from]) {
          seen[a.from] = 1;
          queue.push_back(a.from);
        }
      }
    }
    return seen;
  }
};

}  // namespace

AntichainSolution max_weight_antichain(const GraphH& h) {
  const int m = static_cast<int>(h.components.size());
  // Node layout: s, t, then (in, out) per H vertex.
  MinFlowAntichain net;
  int s = net.add_node();
  int t = net.add_node();
  std::vector<std::vector<int>> vin(m), vout(m);
  for (int i = 0; i < m; ++i) {
    size_t sz = h.components[i].weights.size();
    vin[i].resize(sz);
    vout[i].resize(sz);
    for (size_t k = 0; k < sz; ++k) {
      vin[i][k] = net.add_node();
      vout[i][k] = net.add_node();
    }
  }
  std::vector<std::vector<int>> split(m);
  for (int i = 0; i < m; ++i) {
    const auto& weights = h.components[i].weights;
    split[i].resize(weights.size());
    for (size_t k = 0; k < weights.size(); ++k) {
      net.add_arc(s, vin[i][k], Rat(0), weights[k]);
      split[i][k] = net.add_arc(vin[i][k], vout[i][k], weights[k], weights[k]);
      net.add_arc(vout[i][k], t, Rat(0), weights[k]);
    }
  }
  // Order arcs: vertex (i,k) dominates every vertex of T(j) when j sits
  // before position k in pi_i. The orientation is transitively closed, so
  // chains of the poset are exactly directed paths.
  for (int i = 0; i < m; ++i) {
    const auto& comp = h.components[i];
    for (size_t k = 1; k <= comp.weights.size(); ++k) {
      for (int j : comp.dominated) {
        if (!h.vertex_covers_component(i, static_cast<int>(k), j)) continue;
        for (size_t l = 0; l < h.components[j].weights.size(); ++l)
          net.add_arc(vout[i][k - 1], vin[j][l], Rat(0), Rat(0));
      }
    }
  }

  net.minimize(s, t);
  std::vector<char> reach = net.reachable_from(t);

  AntichainSolution sol;
  for (int i = 0; i < m; ++i) {
    for (size_t k = 0; k < h.components[i].weights.size(); ++k) {
      if (h.components[i].weights[k] == Rat(0)) continue;
      if (!reach[vin[i][k]] && reach[vout[i][k]]) {
        sol.vertices.push_back({i, static_cast<int>(k) + 1});
        sol.total_weight += h.components[i].weights[k];
      }
    }
  }
  std::sort(sol.vertices.begin(), sol.vertices.end());
  return sol;
}

AllocationPricing extract_pricing(const Instance& inst, const GraphH& h,
                                  const AntichainSolution& sol) {
  const int m = inst.num_agents();
  std::vector<int> prefix(m, 0);  // highest chosen vertex index per component
  for (auto [agent, k] : sol.vertices) prefix[agent] = std::max(prefix[agent], k);
  // Normalize to prefixes: any skipped earlier vertex must be weightless, or
  // the antichain was not maximum.
  for (int i = 0; i < m; ++i) {
    if (prefix[i] == 0) continue;
    std::vector<char> chosen(h.components[i].weights.size() + 1, 0);
    for (auto [agent, k] : sol.vertices)
      if (agent == i) chosen[k] = 1;
    for (int k = 1; k <= prefix[i]; ++k)
      if (!chosen[k] && h.components[i].weights[k - 1] != Rat(0))
        throw InternalCheckError("NotPrefix: component " + std::to_string(i) +
                                 " skips a weighted vertex");
  }
  AllocationPricing ap;
  ap.agents.resize(m);
  for (int i = 0; i < m; ++i) {
    if (prefix[i] == 0) continue;
    Rat price(0);
    for (int k = 1; k <= prefix[i]; ++k) price += h.components[i].weights[k - 1];
    ap.agents[i] = {true, price};
  }
  return ap;
}

namespace {

// Revenue-neutral sweep: a loser may win at price 0 iff every winner inside
// its bundle is priced 0 and every remaining loser inside its bundle has
// valuation 0.
void add_free_winners(const Instance& inst, AllocationPricing& ap) {
  const int m = inst.num_agents();
  for (int i = 0; i < m; ++i) {
    if (ap.agents[i].win) continue;
    bool ok = true;
    for (int j = 0; j < m && ok; ++j) {
      if (j == i) continue;
      if (ap.agents[j].win) {
        if (inst.agents[j].bundle.subset_of(inst.agents[i].bundle) &&
            ap.agents[j].price > Rat(0))
          ok = false;
      } else {
        if (inst.agents[j].bundle.subset_of(inst.agents[i].bundle) &&
            inst.agents[j].valuation > Rat(0))
          ok = false;
      }
    }
    if (ok) ap.agents[i] = {true, Rat(0)};
  }
}

}  // namespace

AllocationPricing solve_ef_unlimited(const Instance& inst) {
  if (!inst.unlimited())
    throw UsageError("solve_ef_unlimited requires unlimited supply");
  GraphH h = build_graph_h(inst);
  AntichainSolution sol = max_weight_antichain(h);
  AllocationPricing ap = extract_pricing(inst, h, sol);
  add_free_winners(inst, ap);
  if (revenue(ap) != sol.total_weight)
    throw InternalCheckError("antichain weight " + rat_to_string(sol.total_weight) +
                             " != extracted revenue " + rat_to_string(revenue(ap)));
  if (auto bad = check_envy_free(inst, ap))
    throw InternalCheckError("EF optimum fails its own check at agent " +
                             std::to_string(bad->agent));
  return ap;
}

}  // namespace efp
