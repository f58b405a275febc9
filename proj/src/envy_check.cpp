#include "efp/envy_check.hpp"

#include <algorithm>
#include <limits>

#include "efp/errors.hpp"

namespace efp {
namespace {

std::vector<CoverCandidate> winners_at_prices(const AllocationPricing& ap) {
  std::vector<CoverCandidate> out;
  for (int i = 0; i < static_cast<int>(ap.agents.size()); ++i)
    if (ap.agents[i].win) out.push_back({i, ap.agents[i].price});
  return out;
}

bool lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

CoverGraph build_cover_graph(const std::vector<CoverCandidate>& candidates,
                             const Instance& inst, int window_l, int window_r,
                             std::optional<int> exclude) {
  CoverGraph g;
  g.lo = window_l - 1;
  g.hi = window_r;
  for (const CoverCandidate& c : candidates) {
    if (exclude && *exclude == c.agent) continue;
    const Bundle& b = inst.agents[c.agent].bundle;
    if (b.last() < window_l || b.first() > window_r) continue;
    // Clamp the interval to the window; the arc spans exactly the boundary
    // positions the winner can pay for inside the query.
    int from = std::max(b.first() - 1, window_l - 1);
    int to = std::min(b.last(), window_r);
    g.arcs.push_back({from, to, c.agent, c.weight});
  }
  return g;
}

std::optional<Cover> min_weight_cover_highway(const Instance& inst,
                                              const std::vector<CoverCandidate>& candidates,
                                              const Bundle& target, std::optional<int> exclude) {
  if (!target.is_contiguous())
    throw UsageError("highway cover query needs an interval target");
  const int lo = target.first() - 1;
  const int hi = target.last();
  CoverGraph g = build_cover_graph(candidates, inst, target.first(), target.last(), exclude);
  std::sort(g.arcs.begin(), g.arcs.end(),
            [](const CoverGraph::Arc& a, const CoverGraph::Arc& b) { return a.agent < b.agent; });

  // dist[x] = cheapest cover of items lo+1 .. x. An arc (u, v) is usable from
  // any boundary position in [u, v): the winner's span absorbs the overlap, so
  // dist[x] = min over arcs with u < x <= v of dist[u] + w. Arcs strictly
  // increase node index, hence one left-to-right pass suffices.
  const int n = hi - lo + 1;
  std::vector<std::optional<Rat>> dist(n);
  std::vector<std::vector<int>> wit(n);
  dist[0] = Rat(0);
  for (int x = 1; x < n; ++x) {
    for (const CoverGraph::Arc& a : g.arcs) {
      int u = a.from - lo;
      int v = a.to - lo;
      if (!(u < x && x <= v) || !dist[u]) continue;
      Rat cand = *dist[u] + a.weight;
      std::vector<int> cand_wit = wit[u];
      cand_wit.insert(std::lower_bound(cand_wit.begin(), cand_wit.end(), a.agent), a.agent);
      if (!dist[x] || cand < *dist[x] || (cand == *dist[x] && lex_less(cand_wit, wit[x]))) {
        dist[x] = cand;
        wit[x] = std::move(cand_wit);
      }
    }
  }
  if (!dist[n - 1]) return std::nullopt;
  return Cover{*dist[n - 1], wit[n - 1]};
}

std::optional<Cover> min_weight_cover_general(const Instance& inst,
                                              const std::vector<CoverCandidate>& candidates,
                                              const Bundle& target, std::optional<int> exclude,
                                              int guard) {
  std::vector<CoverCandidate> pool;
  for (const CoverCandidate& c : candidates) {
    if (exclude && *exclude == c.agent) continue;
    if (inst.agents[c.agent].bundle.intersects(target)) pool.push_back(c);
  }
  {
    int total = 0;
    for (const CoverCandidate& c : candidates)
      if (!exclude || *exclude != c.agent) ++total;
    if (total > guard)
      throw GuardExceeded(std::to_string(total) + " winners exceed the exact-search guard of " +
                          std::to_string(guard));
  }

  // Bitmask positions over the target's items.
  const int t = static_cast<int>(target.items.size());
  auto mask_of = [&](const Bundle& b) {
    std::vector<uint64_t> m((t + 63) / 64, 0);
    for (int k = 0; k < t; ++k)
      if (b.contains(target.items[k])) m[k / 64] |= uint64_t(1) << (k % 64);
    return m;
  };
  std::vector<uint64_t> full((t + 63) / 64, 0);
  for (int k = 0; k < t; ++k) full[k / 64] |= uint64_t(1) << (k % 64);

  const int p = static_cast<int>(pool.size());
  std::vector<std::vector<uint64_t>> mask(p);
  for (int k = 0; k < p; ++k) mask[k] = mask_of(inst.agents[pool[k].agent].bundle);
  // Suffix unions for the infeasibility cutoff.
  std::vector<std::vector<uint64_t>> suffix(p + 1, std::vector<uint64_t>(full.size(), 0));
  for (int k = p - 1; k >= 0; --k) {
    suffix[k] = suffix[k + 1];
    for (size_t w = 0; w < full.size(); ++w) suffix[k][w] |= mask[k][w];
  }
  auto covers_full = [&](const std::vector<uint64_t>& m) {
    for (size_t w = 0; w < full.size(); ++w)
      if ((m[w] & full[w]) != full[w]) return false;
    return true;
  };

  std::optional<Cover> best;
  std::vector<int> chosen;
  std::vector<uint64_t> acc(full.size(), 0);

  // Depth-first inclusion/exclusion, include-first so lexicographically small
  // witnesses are met early; prune on weight (strictly) and on infeasibility.
  auto rec = [&](auto&& self, int idx, Rat total) -> void {
    if (covers_full(acc)) {
      if (!best || total < best->total ||
          (total == best->total && lex_less(chosen, best->winners)))
        best = Cover{total, chosen};
      return;
    }
    if (idx == p) return;
    if (best && total > best->total) return;
    {
      std::vector<uint64_t> reach = acc;
      for (size_t w = 0; w < full.size(); ++w) reach[w] |= suffix[idx][w];
      if (!covers_full(reach)) return;
    }
    std::vector<uint64_t> saved = acc;
    for (size_t w = 0; w < full.size(); ++w) acc[w] |= mask[idx][w];
    chosen.push_back(pool[idx].agent);
    self(self, idx + 1, total + pool[idx].weight);
    chosen.pop_back();
    acc = saved;
    self(self, idx + 1, total);
  };
  rec(rec, 0, Rat(0));
  return best;
}

std::optional<Cover> min_cover_price_general(const Instance& inst, const AllocationPricing& ap,
                                             const Bundle& target, std::optional<int> exclude,
                                             const CheckOptions& opts) {
  return min_weight_cover_general(inst, winners_at_prices(ap), target, exclude,
                                  opts.winner_guard);
}

std::optional<Cover> min_cover_price_highway(const Instance& inst, const AllocationPricing& ap,
                                             const Bundle& target, std::optional<int> exclude) {
  return min_weight_cover_highway(inst, winners_at_prices(ap), target, exclude);
}

std::optional<Violation> check_envy_free(const Instance& inst, const AllocationPricing& ap) {
  const int m = inst.num_agents();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      if (j == i || !ap.agents[j].win) continue;
      if (!inst.agents[i].bundle.subset_of(inst.agents[j].bundle)) continue;
      if (ap.agents[i].win) {
        if (ap.agents[i].price > ap.agents[j].price)
          return Violation{ViolationKind::PriceOrder, i, {j}, ap.agents[j].price};
      } else {
        if (inst.agents[i].valuation > ap.agents[j].price)
          return Violation{ViolationKind::LoserEnvy, i, {j}, ap.agents[j].price};
      }
    }
  }
  return std::nullopt;
}

namespace {

// Shared scan for the two multi-envy checks. Agents are examined in index
// order; per agent the single-witness conditions come before cover envy, so
// one-element covers surface as PriceOrder/LoserEnvy.
std::optional<Violation> check_multi(const Instance& inst, const AllocationPricing& ap,
                                     CoverMethod method, const CheckOptions& opts,
                                     bool include_losers) {
  bool highway = method == CoverMethod::Highway ||
                 (method == CoverMethod::Auto && inst.is_highway());
  std::vector<CoverCandidate> winners = winners_at_prices(ap);
  auto min_cover = [&](const Bundle& target,
                       std::optional<int> exclude) -> std::optional<Cover> {
    if (highway) return min_weight_cover_highway(inst, winners, target, exclude);
    return min_weight_cover_general(inst, winners, target, exclude, opts.winner_guard);
  };

  const int m = inst.num_agents();
  for (int i = 0; i < m; ++i) {
    const Bundle& bi = inst.agents[i].bundle;
    if (ap.agents[i].win) {
      for (int j = 0; j < m; ++j) {
        if (j == i || !ap.agents[j].win) continue;
        if (bi.subset_of(inst.agents[j].bundle) && ap.agents[i].price > ap.agents[j].price)
          return Violation{ViolationKind::PriceOrder, i, {j}, ap.agents[j].price};
      }
      if (auto cover = min_cover(bi, i); cover && cover->total < ap.agents[i].price)
        return Violation{ViolationKind::CoverEnvy, i, cover->winners, cover->total};
    } else if (include_losers) {
      for (int j = 0; j < m; ++j) {
        if (!ap.agents[j].win) continue;
        if (bi.subset_of(inst.agents[j].bundle) &&
            inst.agents[i].valuation > ap.agents[j].price)
          return Violation{ViolationKind::LoserEnvy, i, {j}, ap.agents[j].price};
      }
      if (auto cover = min_cover(bi, std::nullopt);
          cover && cover->total < inst.agents[i].valuation)
        return Violation{ViolationKind::CoverEnvy, i, cover->winners, cover->total};
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Violation> check_winner_multi_envy_free(const Instance& inst,
                                                      const AllocationPricing& ap,
                                                      CoverMethod method,
                                                      const CheckOptions& opts) {
  return check_multi(inst, ap, method, opts, /*include_losers=*/false);
}

std::optional<Violation> check_multi_envy_free(const Instance& inst, const AllocationPricing& ap,
                                               CoverMethod method, const CheckOptions& opts) {
  return check_multi(inst, ap, method, opts, /*include_losers=*/true);
}

}  // namespace efp
