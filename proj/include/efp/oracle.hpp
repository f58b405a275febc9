#pragma once

#include <optional>
#include <vector>

#include "efp/model.hpp"

namespace efp {

// Brute-force reference solvers. These share no code with the solvers they
// validate: agents are grouped by identical bundle and winner profiles are
// enumerated exhaustively, so they only run at desk scale (guarded).

// Exact EF revenue maximum for unlimited or limited supply. Each distinct
// bundle either loses or takes a price from the set of all agent valuations;
// candidate allocations are filtered by the envy-freeness conditions including
// capacities. Throws TooLarge beyond the guard sizes.
AllocationPricing brute_force_ef_opt(const Instance& inst);

// Exact MEF revenue maximum: enumerate capacity-feasible winner profiles,
// price each by max_prices_fixed_winners, reject profiles where some loser
// sees a winner-cover strictly below its valuation.
AllocationPricing brute_force_mef_opt(const Instance& inst);

// Coordinatewise-greatest prices with p_i <= v_i and p_i <= cheapest cover of
// S_i by the other winners: start at the valuations and lower any violated
// coordinate to its current cover minimum until stable. Losers carry 0;
// nullopt when W is capacity-infeasible.
std::optional<std::vector<Rat>> max_prices_fixed_winners(const Instance& inst,
                                                         const std::vector<int>& winners);

struct ItemPricingOpt {
  Rat revenue = Rat(0);
  std::vector<long long> item_prices;
  AllocationPricing allocation;
};

// Exact optimum over integer item-price vectors in {0..B}^n for a highway
// instance: agents priced strictly below valuation must win, ties may be
// excluded when supply binds, winners pay their bundle's price sum.
ItemPricingOpt brute_force_item_pricing_opt(const Instance& inst);

}  // namespace efp
