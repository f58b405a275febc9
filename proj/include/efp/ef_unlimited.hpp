#pragma once

#include <unordered_map>
#include <vector>

#include "efp/model.hpp"

namespace efp {

// Weighted dependency graph for the unlimited-supply EF optimum. Agent i owns
// a component T(i) of n_i + 1 vertices whose weights are the consecutive
// valuation differences over A(i) = { j : S_i subset of S_j and v_j < v_i },
// sorted by non-decreasing valuation (ties by agent id). Vertex k of T(i) is
// adjacent to the whole component of every A(i)-member at position < k; the
// i -> A(i) orientation of those edges is transitive, so independent sets are
// antichains of the induced partial order.
struct GraphH {
  struct Component {
    int agent = -1;
    std::vector<int> dominated;  // A(i) in pi_i order
    std::vector<Rat> weights;    // size dominated.size() + 1; sums to v_i
  };
  std::vector<Component> components;  // index == agent id

  // 1-based position of agent j in pi_i, 0 when j is not in A(i).
  int position(int i, int j) const;
  // True iff vertex k of T(i) (1-based) is adjacent to all of T(j).
  bool vertex_covers_component(int i, int k, int j) const;
  // True iff some edge joins T(i) and T(j); orientation is i -> j iff j in A(i).
  int total_vertices() const;

private:
  friend GraphH build_graph_h(const Instance& inst);
  std::vector<std::unordered_map<int, int>> position_;
};

struct AntichainSolution {
  // Chosen (agent, vertex index 1..n_i+1) pairs; per component a prefix.
  std::vector<std::pair<int, int>> vertices;
  Rat total_weight = Rat(0);
};

GraphH build_graph_h(const Instance& inst);

// Maximum-weight independent set of H, via minimum flow with per-vertex lower
// bounds on the transitive orientation. Exact over rationals; zero-weight
// vertices are dropped from the answer.
AntichainSolution max_weight_antichain(const GraphH& h);

// Winners are the agents with a chosen vertex; each pays its prefix-weight
// sum. Requires a maximum (not merely maximal) antichain.
AllocationPricing extract_pricing(const Instance& inst, const GraphH& h,
                                  const AntichainSolution& sol);

// build_graph_h + max_weight_antichain + extract_pricing, plus a revenue-free
// sweep that lets agents win at price 0 when that violates no EF condition.
// Post-checked with check_envy_free on every call.
AllocationPricing solve_ef_unlimited(const Instance& inst);

}  // namespace efp
