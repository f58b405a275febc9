#include <algorithm>
#include <cstdint>
#include <unordered_map>

#include "efp/envy_check.hpp"
#include "efp/errors.hpp"
#include "efp/highway_solver.hpp"

namespace efp {
namespace {

void require_bounded_highway(const Instance& inst, const SolverLimits& limits,
                             bool need_integer_valuations) {
  if (!inst.is_highway()) throw UsageError("solver requires a highway instance");
  if (inst.unlimited()) throw UsageError("solver requires limited supply");
  if (inst.max_capacity() > limits.max_capacity)
    throw CapacityTooLarge("C = " + std::to_string(inst.max_capacity()) +
                           " exceeds the configured bound of " +
                           std::to_string(limits.max_capacity));
  if (need_integer_valuations)
    for (int i = 0; i < inst.num_agents(); ++i)
      if (!is_integer(inst.agents[i].valuation))
        throw UsageError("ValuationNotInteger: agent " + std::to_string(i));
}

// ---------------------------------------------------------------------------
// Winner-MEF dynamic program.
//
// A layer-e node is (U, H): U the winners served by item e, H a |U| x |U|
// matrix with h_ii = price of i and h_ij = cheapest winner-chain covering
// first(S_i)..e whose last member is j. Matrix entries live in {0..B} plus
// kNoChain ("no chain yet", distinct from price 0) and kSaturated (any value
// above B behaves identically in every later comparison, so sums clamp).
// ---------------------------------------------------------------------------

constexpr int kNoChain = -1;

struct MefState {
  std::vector<int> members;  // ascending agent ids
  std::vector<int> mat;      // k*k row-major

  bool operator==(const MefState&) const = default;
  bool operator<(const MefState& o) const {
    if (members != o.members) return members < o.members;
    return mat < o.mat;
  }
};

struct Layer {
  std::vector<MefState> states;
  std::vector<long long> dist;
  std::vector<int> parent;  // index into the previous layer, -1 for layer 1
};

struct MefDp {
  const Instance& inst;
  int n;
  long long b_max;
  int saturated;
  std::vector<std::vector<int>> alive;    // agents whose span contains item e
  std::vector<std::vector<int>> started;  // agents whose span starts at item e

  explicit MefDp(const Instance& instance) : inst(instance), n(instance.items) {
    b_max = floor_to_int(inst.max_valuation());
    saturated = static_cast<int>(b_max) + 1;
    alive.assign(n + 2, {});
    started.assign(n + 2, {});
    for (int i = 0; i < inst.num_agents(); ++i) {
      const Bundle& b = inst.agents[i].bundle;
      for (int e = b.first(); e <= b.last(); ++e) alive[e].push_back(i);
      started[b.first()].push_back(i);
    }
  }

  int clamp(int value) const { return value > b_max ? saturated : value; }

  // True when every agent whose bundle ends at `e` tolerates its matrix row:
  // chains ending at e cover the whole bundle, so h_ij < h_ii certifies envy.
  bool last_layer_ok(int e, const MefState& s) const {
    const int k = static_cast<int>(s.members.size());
    for (int a = 0; a < k; ++a) {
      if (inst.agents[s.members[a]].bundle.last() != e) continue;
      for (int b = 0; b < k; ++b) {
        int h = s.mat[a * k + b];
        if (h != kNoChain && h < s.mat[a * k + a]) return false;
      }
    }
    return true;
  }

  // Appends (U', H') successors of `from` at layer e+1 into `sink`.
  template <typename Sink>
  void expand(int e, const MefState& from, Sink&& sink) const {
    const int next = e + 1;
    std::vector<int> carried;
    for (int id : from.members)
      if (inst.agents[id].bundle.last() >= next) carried.push_back(id);
    const int cap = inst.capacity(next);
    if (static_cast<int>(carried.size()) > cap) return;

    const std::vector<int>& fresh = started[next];
    const int fcount = static_cast<int>(fresh.size());
    const int k_old = static_cast<int>(from.members.size());
    auto old_index = [&](int id) {
      auto it = std::lower_bound(from.members.begin(), from.members.end(), id);
      return it != from.members.end() && *it == id
                 ? static_cast<int>(it - from.members.begin())
                 : -1;
    };

    for (uint32_t pick = 0; pick < (uint32_t(1) << fcount); ++pick) {
      std::vector<int> joining;
      for (int f = 0; f < fcount; ++f)
        if (pick & (uint32_t(1) << f)) joining.push_back(fresh[f]);
      if (static_cast<int>(carried.size() + joining.size()) > cap) continue;

      std::vector<int> members = carried;
      members.insert(members.end(), joining.begin(), joining.end());
      std::sort(members.begin(), members.end());
      const int k = static_cast<int>(members.size());

      // Enumerate integer prices 0..v for each joining agent.
      std::vector<long long> price_cap(joining.size());
      for (size_t j = 0; j < joining.size(); ++j)
        price_cap[j] = floor_to_int(inst.agents[joining[j]].valuation);
      std::vector<long long> price(joining.size(), 0);
      while (true) {
        MefState state;
        state.members = members;
        state.mat.assign(static_cast<size_t>(k) * k, kNoChain);
        long long weight = 0;
        for (size_t j = 0; j < joining.size(); ++j) weight += price[j];

        auto price_of_new = [&](int id) {
          for (size_t j = 0; j < joining.size(); ++j)
            if (joining[j] == id) return price[j];
          return 0LL;
        };
        for (int a = 0; a < k; ++a) {
          int ia = members[a];
          int oa = old_index(ia);
          for (int b = 0; b < k; ++b) {
            int ib = members[b];
            int ob = old_index(ib);
            int value;
            if (oa >= 0 && ob >= 0) {
              value = from.mat[oa * k_old + ob];  // carried pair, carried value
            } else if (ob >= 0) {
              // i new, j carried: j alone covers i's first (= only) item so far.
              value = from.mat[ob * k_old + ob];
            } else {
              // j new: price of j plus the cheapest chain of i up to layer e
              // (zero when i is new as well).
              long long base = static_cast<long long>(price_of_new(ib));
              if (a == b) {
                value = static_cast<int>(base);
              } else if (oa >= 0) {
                int best = kNoChain;
                for (int d = 0; d < k_old; ++d) {
                  int hd = from.mat[oa * k_old + d];
                  if (hd == kNoChain) continue;
                  if (best == kNoChain || hd < best) best = hd;
                }
                value = best == kNoChain ? kNoChain
                                         : clamp(static_cast<int>(base + best));
              } else {
                value = clamp(static_cast<int>(base));
              }
            }
            state.mat[a * k + b] = value;
          }
        }
        if (last_layer_ok(next, state)) sink(std::move(state), weight);

        // Odometer over joining prices.
        size_t j = 0;
        for (; j < joining.size(); ++j) {
          if (price[j] < price_cap[j]) {
            ++price[j];
            std::fill(price.begin(), price.begin() + j, 0);
            break;
          }
        }
        if (j == joining.size()) break;
      }
    }
  }
};

// Deduplicates candidate states (keeping the best distance; first parent on
// ties) and prunes dominated ones: with equal members and diagonal, a state
// whose distance and off-diagonal entries (kNoChain as top) are all >= those
// of another can stand in for it in any completion.
Layer consolidate(std::vector<MefState>&& states, std::vector<long long>&& dist,
                  std::vector<int>&& parent) {
  const size_t count = states.size();
  auto diag_of = [](const MefState& s) {
    int k = static_cast<int>(s.members.size());
    std::vector<int> d(k);
    for (int i = 0; i < k; ++i) d[i] = s.mat[i * k + i];
    return d;
  };
  // Order by (members, diagonal, rest) so states sharing members and prices
  // sit adjacently for the dominance pass below.
  std::vector<size_t> order(count);
  for (size_t i = 0; i < count; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (states[a].members != states[b].members) return states[a].members < states[b].members;
    auto da = diag_of(states[a]);
    auto db = diag_of(states[b]);
    if (da != db) return da < db;
    if (states[a].mat != states[b].mat) return states[a].mat < states[b].mat;
    if (dist[a] != dist[b]) return dist[a] > dist[b];
    return parent[a] < parent[b];
  });

  Layer out;
  for (size_t idx : order) {
    if (!out.states.empty() && out.states.back() == states[idx]) continue;
    out.states.push_back(std::move(states[idx]));
    out.dist.push_back(dist[idx]);
    out.parent.push_back(parent[idx]);
  }

  auto rank = [](int v) { return v == kNoChain ? INT32_MAX : v; };
  auto same_diag = [&](const MefState& a, const MefState& b) {
    if (a.members != b.members) return false;
    int k = static_cast<int>(a.members.size());
    for (int i = 0; i < k; ++i)
      if (a.mat[i * k + i] != b.mat[i * k + i]) return false;
    return true;
  };
  auto dominates = [&](size_t x, size_t y) {
    if (out.dist[x] < out.dist[y]) return false;
    const auto& mx = out.states[x].mat;
    const auto& my = out.states[y].mat;
    for (size_t c = 0; c < mx.size(); ++c)
      if (rank(mx[c]) < rank(my[c])) return false;
    return true;
  };

  std::vector<char> dead(out.states.size(), 0);
  size_t group_begin = 0;
  for (size_t i = 1; i <= out.states.size(); ++i) {
    if (i < out.states.size() && same_diag(out.states[group_begin], out.states[i])) continue;
    for (size_t x = group_begin; x < i; ++x) {
      if (dead[x]) continue;
      for (size_t y = group_begin; y < i; ++y) {
        if (x == y || dead[y]) continue;
        if (dominates(x, y)) dead[y] = 1;
      }
    }
    group_begin = i;
  }

  Layer filtered;
  for (size_t i = 0; i < out.states.size(); ++i) {
    if (dead[i]) continue;
    filtered.states.push_back(std::move(out.states[i]));
    filtered.dist.push_back(out.dist[i]);
    filtered.parent.push_back(out.parent[i]);
  }
  return filtered;
}

}  // namespace

AllocationPricing solve_winner_mef_dp(const Instance& inst, const SolverLimits& limits) {
  require_bounded_highway(inst, limits, /*need_integer_valuations=*/true);
  const int m = inst.num_agents();
  AllocationPricing ap;
  ap.agents.resize(m);
  if (inst.items == 0 || m == 0) return ap;

  MefDp dp(inst);
  std::vector<Layer> layers(inst.items + 1);

  {
    // Layer 1 from the virtual source: every admissible (U, H) over starters.
    std::vector<MefState> states;
    std::vector<long long> dist;
    std::vector<int> parent;
    MefState source;  // empty state "before item 1"
    // Reuse expand() with e = 0: alive[1] agents all start at 1.
    dp.expand(0, source, [&](MefState&& s, long long w) {
      states.push_back(std::move(s));
      dist.push_back(w);
      parent.push_back(-1);
    });
    layers[1] = consolidate(std::move(states), std::move(dist), std::move(parent));
  }

  for (int e = 1; e < inst.items; ++e) {
    std::vector<MefState> states;
    std::vector<long long> dist;
    std::vector<int> parent;
    for (size_t idx = 0; idx < layers[e].states.size(); ++idx) {
      dp.expand(e, layers[e].states[idx], [&](MefState&& s, long long w) {
        states.push_back(std::move(s));
        dist.push_back(layers[e].dist[idx] + w);
        parent.push_back(static_cast<int>(idx));
      });
    }
    layers[e + 1] = consolidate(std::move(states), std::move(dist), std::move(parent));
    if (layers[e + 1].states.empty())
      throw InternalCheckError("winner-MEF DP layer " + std::to_string(e + 1) +
                               " has no states");
  }

  // Best sink, then backtrack; among equal-revenue sinks prefer the smallest
  // reconstructed (winner set, price vector).
  const Layer& last = layers[inst.items];
  long long best = *std::max_element(last.dist.begin(), last.dist.end());

  auto reconstruct = [&](size_t sink) {
    std::vector<long long> prices(m, -1);
    size_t idx = sink;
    for (int e = inst.items; e >= 1; --e) {
      const MefState& s = layers[e].states[idx];
      int k = static_cast<int>(s.members.size());
      for (int a = 0; a < k; ++a) prices[s.members[a]] = s.mat[a * k + a];
      int p = layers[e].parent[idx];
      if (p < 0) break;
      idx = static_cast<size_t>(p);
    }
    return prices;
  };

  std::optional<std::vector<long long>> chosen;
  for (size_t i = 0; i < last.states.size(); ++i) {
    if (last.dist[i] != best) continue;
    std::vector<long long> prices = reconstruct(i);
    std::vector<std::pair<int, long long>> key;
    for (int a = 0; a < m; ++a)
      if (prices[a] >= 0) key.push_back({a, prices[a]});
    if (!chosen) {
      chosen = prices;
    } else {
      std::vector<std::pair<int, long long>> cur;
      for (int a = 0; a < m; ++a)
        if ((*chosen)[a] >= 0) cur.push_back({a, (*chosen)[a]});
      if (key < cur) chosen = prices;
    }
  }

  long long total = 0;
  for (int a = 0; a < m; ++a) {
    if ((*chosen)[a] >= 0) {
      ap.agents[a] = {true, Rat((*chosen)[a])};
      total += (*chosen)[a];
    }
  }
  if (total != best)
    throw InternalCheckError("winner-MEF DP reconstruction lost revenue");
  if (auto bad = check_winner_multi_envy_free(inst, ap))
    throw InternalCheckError("winner-MEF DP output fails its check at agent " +
                             std::to_string(bad->agent));
  return ap;
}

// ---------------------------------------------------------------------------
// Lemma-LOCAL repair.
// ---------------------------------------------------------------------------

namespace {

std::vector<CoverCandidate> candidates_at(const Instance& inst, const AllocationPricing& ap,
                                          bool by_valuation) {
  std::vector<CoverCandidate> out;
  for (int i = 0; i < inst.num_agents(); ++i)
    if (ap.agents[i].win)
      out.push_back({i, by_valuation ? inst.agents[i].valuation : ap.agents[i].price});
  return out;
}

// Greatest winner-MEF price vector for the current winner set: start every
// winner at its valuation and repeatedly lower any price above its cheapest
// cover by the other winners. The feasible set is closed under coordinatewise
// max, so this fixpoint dominates every feasible vector, in particular the
// incoming prices; revenue never drops.
void raise_to_fixpoint(const Instance& inst, AllocationPricing& ap) {
  for (int i = 0; i < inst.num_agents(); ++i)
    if (ap.agents[i].win) ap.agents[i].price = inst.agents[i].valuation;
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<CoverCandidate> winners = candidates_at(inst, ap, /*by_valuation=*/false);
    for (int i = 0; i < inst.num_agents(); ++i) {
      if (!ap.agents[i].win) continue;
      auto cover = min_weight_cover_highway(inst, winners, inst.agents[i].bundle, i);
      if (cover && cover->total < ap.agents[i].price) {
        ap.agents[i].price = cover->total;
        changed = true;
        winners = candidates_at(inst, ap, /*by_valuation=*/false);
      }
    }
  }
}

}  // namespace

AllocationPricing winner_mef_to_mef(const Instance& inst, const AllocationPricing& ap_in) {
  if (!inst.is_highway()) throw UsageError("winner_mef_to_mef requires a highway instance");
  if (!check_multi_envy_free(inst, ap_in, CoverMethod::Highway)) return ap_in;

  AllocationPricing ap = ap_in;
  const int m = inst.num_agents();
  // The loop admits one swap per envious loser; each swap settles that loser
  // for good, so m + 1 rounds must reach a fixpoint.
  for (int round = 0; round <= m + 1; ++round) {
    raise_to_fixpoint(inst, ap);
    std::vector<CoverCandidate> priced = candidates_at(inst, ap, /*by_valuation=*/false);

    int envious = -1;
    std::optional<Cover> price_cover;
    for (int i = 0; i < m && envious < 0; ++i) {
      if (ap.agents[i].win) continue;
      auto cover = min_weight_cover_highway(inst, priced, inst.agents[i].bundle, std::nullopt);
      if (cover && cover->total < inst.agents[i].valuation) {
        envious = i;
        price_cover = cover;
      }
    }
    if (envious < 0) break;
    if (round == m + 1)
      throw InternalCheckError("loser repair did not settle within its round bound");

    // At the raised fixpoint every cheapest price cover is at least as costly
    // as the cheapest valuation cover, so the valuation cover is also below
    // the loser's valuation and the swap applies: its members leave at full
    // valuation (hence without envy) and the loser takes their place.
    std::vector<CoverCandidate> valued = candidates_at(inst, ap, /*by_valuation=*/true);
    auto val_cover =
        min_weight_cover_highway(inst, valued, inst.agents[envious].bundle, std::nullopt);
    if (!val_cover || val_cover->total >= inst.agents[envious].valuation)
      throw InternalCheckError("valuation cover missing while loser " +
                               std::to_string(envious) + " is envious");
    for (int j : val_cover->winners) ap.agents[j] = {false, Rat(0)};
    ap.agents[envious] = {true, val_cover->total};
  }

  if (auto bad = check_multi_envy_free(inst, ap, CoverMethod::Highway))
    throw InternalCheckError("repair output fails MEF at agent " + std::to_string(bad->agent));
  if (revenue(ap) < revenue(ap_in))
    throw InternalCheckError("repair lost revenue");
  return ap;
}

AllocationPricing solve_mef_exact(const Instance& inst, const SolverLimits& limits) {
  AllocationPricing winner_mef = solve_winner_mef_dp(inst, limits);
  return winner_mef_to_mef(inst, winner_mef);
}

AllocationPricing solve_mef_fptas(const Instance& inst, const Rat& eps,
                                  const SolverLimits& limits) {
  if (eps <= Rat(0) || eps >= Rat(1)) throw UsageError("epsilon must lie in (0, 1)");
  require_bounded_highway(inst, limits, /*need_integer_valuations=*/true);
  const Rat big_b = inst.max_valuation();
  if (big_b == Rat(0)) return solve_mef_exact(inst, limits);

  const int m = inst.num_agents();
  const Rat unit = eps * big_b / Rat(static_cast<long long>(m) * (inst.items + 1));
  Instance rounded = inst;
  for (Agent& a : rounded.agents) a.valuation = Rat(floor_to_int(a.valuation / unit));

  AllocationPricing coarse = solve_winner_mef_dp(rounded, limits);
  AllocationPricing scaled;
  scaled.agents.resize(m);
  for (int i = 0; i < m; ++i)
    if (coarse.agents[i].win) scaled.agents[i] = {true, coarse.agents[i].price * unit};
  validate_result(inst, scaled);
  return winner_mef_to_mef(inst, scaled);
}

}  // namespace efp
