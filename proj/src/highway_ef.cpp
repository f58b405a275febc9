#include <algorithm>
#include <cstdint>
#include <optional>

#include "efp/envy_check.hpp"
#include "efp/errors.hpp"
#include "efp/highway_solver.hpp"

namespace efp {
namespace {

// Envy-free highway DP. Nodes are (winners at the item, their prices); some
// optimal EF pricing only uses prices equal to agent valuations, so prices
// are indices into the sorted distinct valuation list. All conditions are
// local to a node: capacity, individual rationality, price order on nested
// winners, and the loser rule for agents skipped at their first item (every
// superset bundle is alive there, so one check per loser suffices).
struct EfState {
  std::vector<int> members;    // ascending agent ids
  std::vector<int> price_idx;  // parallel to members

  bool operator==(const EfState&) const = default;
  bool operator<(const EfState& o) const {
    if (members != o.members) return members < o.members;
    return price_idx < o.price_idx;
  }
};

struct EfLayer {
  std::vector<EfState> states;
  std::vector<Rat> dist;
  std::vector<int> parent;
};

struct EfDp {
  const Instance& inst;
  std::vector<Rat> price_pool;  // sorted distinct valuations
  std::vector<std::vector<int>> started;

  explicit EfDp(const Instance& instance) : inst(instance) {
    for (const Agent& a : inst.agents) price_pool.push_back(a.valuation);
    std::sort(price_pool.begin(), price_pool.end());
    price_pool.erase(std::unique(price_pool.begin(), price_pool.end()), price_pool.end());
    started.assign(inst.items + 2, {});
    for (int i = 0; i < inst.num_agents(); ++i)
      started[inst.agents[i].bundle.first()].push_back(i);
  }

  bool node_valid(int e, const EfState& s) const {
    const int k = static_cast<int>(s.members.size());
    for (int a = 0; a < k; ++a) {
      if (price_pool[s.price_idx[a]] > inst.agents[s.members[a]].valuation) return false;
      for (int b = 0; b < k; ++b) {
        if (a == b) continue;
        if (inst.agents[s.members[a]].bundle.subset_of(inst.agents[s.members[b]].bundle) &&
            price_pool[s.price_idx[a]] > price_pool[s.price_idx[b]])
          return false;
      }
    }
    for (int loser : started[e]) {
      if (std::binary_search(s.members.begin(), s.members.end(), loser)) continue;
      for (int a = 0; a < k; ++a) {
        if (inst.agents[loser].bundle.subset_of(inst.agents[s.members[a]].bundle) &&
            price_pool[s.price_idx[a]] < inst.agents[loser].valuation)
          return false;
      }
    }
    return true;
  }

  template <typename Sink>
  void expand(int e, const EfState& from, Sink&& sink) const {
    const int next = e + 1;
    std::vector<int> carried_members;
    std::vector<int> carried_prices;
    for (size_t a = 0; a < from.members.size(); ++a) {
      if (inst.agents[from.members[a]].bundle.last() >= next) {
        carried_members.push_back(from.members[a]);
        carried_prices.push_back(from.price_idx[a]);
      }
    }
    const int cap = inst.capacity(next);
    if (static_cast<int>(carried_members.size()) > cap) return;

    const std::vector<int>& fresh = started[next];
    const int fcount = static_cast<int>(fresh.size());
    for (uint32_t pick = 0; pick < (uint32_t(1) << fcount); ++pick) {
      std::vector<int> joining;
      for (int f = 0; f < fcount; ++f)
        if (pick & (uint32_t(1) << f)) joining.push_back(fresh[f]);
      if (static_cast<int>(carried_members.size() + joining.size()) > cap) continue;

      std::vector<int> choice_count(joining.size());
      for (size_t j = 0; j < joining.size(); ++j) {
        int count = 0;
        while (count < static_cast<int>(price_pool.size()) &&
               price_pool[count] <= inst.agents[joining[j]].valuation)
          ++count;
        choice_count[j] = count;  // admissible price indices are 0..count-1
      }
      std::vector<int> choice(joining.size(), 0);
      while (true) {
        EfState state;
        Rat weight(0);
        {
          std::vector<std::pair<int, int>> entries;
          for (size_t a = 0; a < carried_members.size(); ++a)
            entries.push_back({carried_members[a], carried_prices[a]});
          for (size_t j = 0; j < joining.size(); ++j) {
            entries.push_back({joining[j], choice[j]});
            weight += price_pool[choice[j]];
          }
          std::sort(entries.begin(), entries.end());
          for (auto [id, p] : entries) {
            state.members.push_back(id);
            state.price_idx.push_back(p);
          }
        }
        if (node_valid(next, state)) sink(std::move(state), weight);

        size_t j = 0;
        for (; j < joining.size(); ++j) {
          if (choice[j] + 1 < choice_count[j]) {
            ++choice[j];
            std::fill(choice.begin(), choice.begin() + j, 0);
            break;
          }
        }
        if (j == joining.size()) break;
      }
    }
  }
};

EfLayer consolidate(std::vector<EfState>&& states, std::vector<Rat>&& dist,
                    std::vector<int>&& parent) {
  std::vector<size_t> order(states.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (!(states[a] == states[b])) return states[a] < states[b];
    if (dist[a] != dist[b]) return dist[a] > dist[b];
    return parent[a] < parent[b];
  });
  EfLayer out;
  for (size_t idx : order) {
    if (!out.states.empty() && out.states.back() == states[idx]) continue;
    out.states.push_back(std::move(states[idx]));
    out.dist.push_back(dist[idx]);
    out.parent.push_back(parent[idx]);
  }
  return out;
}

}  // namespace

AllocationPricing solve_ef_highway(const Instance& inst, const SolverLimits& limits) {
  if (!inst.is_highway()) throw UsageError("solve_ef_highway requires a highway instance");
  if (inst.unlimited()) throw UsageError("solve_ef_highway requires limited supply");
  if (inst.max_capacity() > limits.max_capacity)
    throw CapacityTooLarge("C = " + std::to_string(inst.max_capacity()) +
                           " exceeds the configured bound of " +
                           std::to_string(limits.max_capacity));

  const int m = inst.num_agents();
  AllocationPricing ap;
  ap.agents.resize(m);
  if (inst.items == 0 || m == 0) return ap;

  EfDp dp(inst);
  std::vector<EfLayer> layers(inst.items + 1);
  {
    std::vector<EfState> states;
    std::vector<Rat> dist;
    std::vector<int> parent;
    EfState source;
    dp.expand(0, source, [&](EfState&& s, Rat w) {
      states.push_back(std::move(s));
      dist.push_back(w);
      parent.push_back(-1);
    });
    layers[1] = consolidate(std::move(states), std::move(dist), std::move(parent));
  }
  for (int e = 1; e < inst.items; ++e) {
    std::vector<EfState> states;
    std::vector<Rat> dist;
    std::vector<int> parent;
    for (size_t idx = 0; idx < layers[e].states.size(); ++idx) {
      dp.expand(e, layers[e].states[idx], [&](EfState&& s, Rat w) {
        states.push_back(std::move(s));
        dist.push_back(layers[e].dist[idx] + w);
        parent.push_back(static_cast<int>(idx));
      });
    }
    layers[e + 1] = consolidate(std::move(states), std::move(dist), std::move(parent));
    if (layers[e + 1].states.empty())
      throw InternalCheckError("EF DP layer " + std::to_string(e + 1) + " has no states");
  }

  const EfLayer& last = layers[inst.items];
  Rat best = *std::max_element(last.dist.begin(), last.dist.end());

  auto reconstruct = [&](size_t sink) {
    std::vector<std::optional<Rat>> prices(m);
    size_t idx = sink;
    for (int e = inst.items; e >= 1; --e) {
      const EfState& s = layers[e].states[idx];
      for (size_t a = 0; a < s.members.size(); ++a)
        prices[s.members[a]] = dp.price_pool[s.price_idx[a]];
      int p = layers[e].parent[idx];
      if (p < 0) break;
      idx = static_cast<size_t>(p);
    }
    return prices;
  };

  std::optional<std::vector<std::optional<Rat>>> chosen;
  auto key_of = [&](const std::vector<std::optional<Rat>>& prices) {
    std::vector<std::pair<int, Rat>> key;
    for (int a = 0; a < m; ++a)
      if (prices[a]) key.push_back({a, *prices[a]});
    return key;
  };
  for (size_t i = 0; i < last.states.size(); ++i) {
    if (last.dist[i] != best) continue;
    auto prices = reconstruct(i);
    if (!chosen || key_of(prices) < key_of(*chosen)) chosen = std::move(prices);
  }

  Rat total(0);
  for (int a = 0; a < m; ++a) {
    if ((*chosen)[a]) {
      ap.agents[a] = {true, *(*chosen)[a]};
      total += *(*chosen)[a];
    }
  }
  if (total != best) throw InternalCheckError("EF DP reconstruction lost revenue");
  validate_result(inst, ap);
  if (auto bad = check_envy_free(inst, ap))
    throw InternalCheckError("EF DP output fails its check at agent " +
                             std::to_string(bad->agent));
  return ap;
}

}  // namespace efp
