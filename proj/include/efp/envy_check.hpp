#pragma once

#include <optional>
#include <vector>

#include "efp/model.hpp"

namespace efp {

struct CheckOptions {
  int winner_guard = 20;  // exact exponential cover search refuses above this
};

enum class CoverMethod { Auto, General, Highway };

// A set of winners whose bundles jointly cover a target, with its total weight.
struct Cover {
  Rat total = Rat(0);
  std::vector<int> winners;  // ascending agent ids
};

// One weighted participant in a cover search.
struct CoverCandidate {
  int agent = -1;
  Rat weight = Rat(0);
};

// Shortest-path cover graph for a highway query window [lo+1, hi]. Nodes are
// the boundary positions lo..hi; each candidate whose interval meets the
// window contributes one arc spanning its clamped boundary range.
struct CoverGraph {
  int lo = 0;
  int hi = 0;
  struct Arc {
    int from;
    int to;
    int agent;
    Rat weight;
  };
  std::vector<Arc> arcs;
};

CoverGraph build_cover_graph(const std::vector<CoverCandidate>& candidates,
                             const Instance& inst, int window_l, int window_r,
                             std::optional<int> exclude);

// Minimum-weight cover of `target` by a subset of `candidates` (minus
// `exclude`), nullopt when no cover exists. Ties prefer the lexicographically
// smallest winner list. The highway variant requires interval bundles and runs
// one forward relaxation pass over the cover graph; the general variant is an
// exact branch-and-bound over at most `guard` candidates.
std::optional<Cover> min_weight_cover_general(const Instance& inst,
                                              const std::vector<CoverCandidate>& candidates,
                                              const Bundle& target, std::optional<int> exclude,
                                              int guard);
std::optional<Cover> min_weight_cover_highway(const Instance& inst,
                                              const std::vector<CoverCandidate>& candidates,
                                              const Bundle& target, std::optional<int> exclude);

// Spec-facing wrappers: candidates are the winners of `ap` at their prices.
std::optional<Cover> min_cover_price_general(const Instance& inst, const AllocationPricing& ap,
                                             const Bundle& target, std::optional<int> exclude,
                                             const CheckOptions& opts = {});
std::optional<Cover> min_cover_price_highway(const Instance& inst, const AllocationPricing& ap,
                                             const Bundle& target, std::optional<int> exclude);

// Envy-freeness for single-minded bidders: winners with nested bundles have
// ordered prices and no loser sees a cheaper winning superset. Returns the
// violation with the lowest envious agent (then lowest witness), nullopt = Ok.
std::optional<Violation> check_envy_free(const Instance& inst, const AllocationPricing& ap);

// Winner condition of multi-envy-freeness only: no winner's bundle is covered
// by other winners at a strictly smaller total price. Losers are ignored.
std::optional<Violation> check_winner_multi_envy_free(const Instance& inst,
                                                      const AllocationPricing& ap,
                                                      CoverMethod method = CoverMethod::Auto,
                                                      const CheckOptions& opts = {});

// Full multi-envy-freeness: envy-freeness plus cover conditions for winners
// and losers. Dispatches to the highway or general cover routine by instance
// kind unless forced.
std::optional<Violation> check_multi_envy_free(const Instance& inst, const AllocationPricing& ap,
                                               CoverMethod method = CoverMethod::Auto,
                                               const CheckOptions& opts = {});

}  // namespace efp
