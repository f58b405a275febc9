#pragma once

#include <optional>
#include <string>
#include <vector>

#include "efp/rational.hpp"

namespace efp {

// A single-minded request: either an arbitrary item set or a highway interval.
// Items are 1-based. `interval_form` records how the bundle was spelled in the
// source file so that serialization round-trips; semantics depend only on the
// item set.
struct Bundle {
  std::vector<int> items;  // strictly increasing, nonempty
  bool interval_form = false;

  static Bundle set(std::vector<int> items);
  static Bundle interval(int l, int r);

  bool is_contiguous() const;
  int first() const { return items.front(); }
  int last() const { return items.back(); }
  bool contains(int item) const;
  bool subset_of(const Bundle& other) const;
  bool intersects(const Bundle& other) const;

  bool operator==(const Bundle& other) const { return items == other.items; }
};

struct Agent {
  Bundle bundle;
  Rat valuation;  // >= 0; integral in stored instances
};

struct Instance {
  int items = 0;
  std::vector<int> capacities;  // empty = unlimited supply, else size == items
  std::vector<Agent> agents;

  bool unlimited() const { return capacities.empty(); }
  // Highway iff every bundle is (equivalent to) an interval.
  bool is_highway() const;
  int num_agents() const { return static_cast<int>(agents.size()); }
  int capacity(int item) const;  // 1-based; huge value when unlimited
  int max_capacity() const;      // C; 0 for unlimited/no items
  Rat max_valuation() const;     // B; 0 when there are no agents
};

struct AgentResult {
  bool win = false;
  Rat price = Rat(0);  // losers carry price 0
};

struct AllocationPricing {
  std::vector<AgentResult> agents;

  bool operator==(const AllocationPricing&) const = default;
};

Rat revenue(const AllocationPricing& ap);

enum class ViolationKind { PriceOrder, LoserEnvy, CoverEnvy };

// Certificate of (multi-)envy: `agent` prefers the witness. For PriceOrder and
// LoserEnvy the witness is one winner; for CoverEnvy it is a set of winners
// whose bundles jointly cover the agent's bundle at total price strictly below
// the agent's price (winner) or valuation (loser).
struct Violation {
  ViolationKind kind;
  int agent = -1;
  std::vector<int> witness;
  Rat witness_total = Rat(0);
};

const char* to_string(ViolationKind kind);

// Returns the instance iff all invariants hold; throws ValidationError with
// codes EmptyBundle, IndexOutOfRange, NegativeValuation, BadCapacity.
Instance validate_instance(Instance inst);

// Checks an allocation/pricing against its instance: entry count, nonnegative
// prices, losers at price 0, individual rationality, per-item capacities.
void validate_result(const Instance& inst, const AllocationPricing& ap);

}  // namespace efp
