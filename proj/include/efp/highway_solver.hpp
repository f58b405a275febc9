#pragma once

#include "efp/model.hpp"

namespace efp {

struct SolverLimits {
  int max_capacity = 3;  // refuse the layered DPs above this C
};

// Optimal winner-multi-envy-free allocation/pricing for a capacity-bounded
// highway: longest path over a layered DAG whose nodes are (winner subset at
// the item, price/cheapest-cover matrix). Winners never envy covers formed by
// other winners; losers may still envy. Requires integer valuations.
AllocationPricing solve_winner_mef_dp(const Instance& inst, const SolverLimits& limits = {});

// Repairs a winner-MEF allocation/pricing into a fully multi-envy-free one
// with at least the same revenue: prices are raised to their greatest feasible
// fixpoint, then each envious loser is swapped in for its cheapest-by-
// valuation cover, whose members leave at their full valuations.
AllocationPricing winner_mef_to_mef(const Instance& inst, const AllocationPricing& ap);

// Exact MEF revenue maximization: solve_winner_mef_dp then winner_mef_to_mef.
AllocationPricing solve_mef_exact(const Instance& inst, const SolverLimits& limits = {});

// (1 - eps)-approximate MEF revenue maximization: valuations are rounded down
// in units of K = eps*B/(m(n+1)), the exact DP runs on the rounded instance,
// prices scale back by K (possibly non-integer), and the repair step restores
// full multi-envy-freeness.
AllocationPricing solve_mef_fptas(const Instance& inst, const Rat& eps,
                                  const SolverLimits& limits = {});

// Optimal envy-free allocation/pricing for a capacity-bounded highway via the
// simpler layered DAG whose nodes carry prices drawn from the valuation set.
AllocationPricing solve_ef_highway(const Instance& inst, const SolverLimits& limits = {});

}  // namespace efp
