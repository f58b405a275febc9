#include "efp/model.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

#include "efp/errors.hpp"

namespace efp {

std::string rat_to_string(const Rat& x) {
  return std::to_string(x.numerator()) + "/" + std::to_string(x.denominator());
}

Rat rat_from_string(std::string_view text) {
  auto parse_ll = [](std::string_view s) {
    long long value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw ParseError("bad rational component '" + std::string(s) + "'");
    return value;
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rat(parse_ll(text));
  long long num = parse_ll(text.substr(0, slash));
  long long den = parse_ll(text.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  return Rat(num, den);
}

Bundle Bundle::set(std::vector<int> items) {
  Bundle b;
  b.items = std::move(items);
  std::sort(b.items.begin(), b.items.end());
  b.items.erase(std::unique(b.items.begin(), b.items.end()), b.items.end());
  b.interval_form = false;
  return b;
}

Bundle Bundle::interval(int l, int r) {
  Bundle b;
  for (int i = l; i <= r; ++i) b.items.push_back(i);
  b.interval_form = true;
  return b;
}

bool Bundle::is_contiguous() const {
  if (items.empty()) return false;
  return items.back() - items.front() + 1 == static_cast<int>(items.size());
}

bool Bundle::contains(int item) const {
  return std::binary_search(items.begin(), items.end(), item);
}

bool Bundle::subset_of(const Bundle& other) const {
  return std::includes(other.items.begin(), other.items.end(), items.begin(), items.end());
}

bool Bundle::intersects(const Bundle& other) const {
  auto a = items.begin();
  auto b = other.items.begin();
  while (a != items.end() && b != other.items.end()) {
    if (*a == *b) return true;
    if (*a < *b) ++a;
    else ++b;
  }
  return false;
}

bool Instance::is_highway() const {
  return std::all_of(agents.begin(), agents.end(),
                     [](const Agent& a) { return a.bundle.is_contiguous(); });
}

int Instance::capacity(int item) const {
  if (unlimited()) return std::numeric_limits<int>::max();
  return capacities[static_cast<size_t>(item) - 1];
}

int Instance::max_capacity() const {
  int c = 0;
  for (int cap : capacities) c = std::max(c, cap);
  return c;
}

Rat Instance::max_valuation() const {
  Rat b(0);
  for (const Agent& a : agents) b = std::max(b, a.valuation);
  return b;
}

Rat revenue(const AllocationPricing& ap) {
  Rat total(0);
  for (const AgentResult& r : ap.agents)
    if (r.win) total += r.price;
  return total;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::PriceOrder: return "PriceOrder";
    case ViolationKind::LoserEnvy: return "LoserEnvy";
    case ViolationKind::CoverEnvy: return "CoverEnvy";
  }
  return "?";
}

Instance validate_instance(Instance inst) {
  if (inst.items < 0) throw ValidationError("BadItemCount", "negative item count");
  if (!inst.capacities.empty()) {
    if (static_cast<int>(inst.capacities.size()) != inst.items)
      throw ValidationError("BadCapacity", "capacities list has " +
                                               std::to_string(inst.capacities.size()) +
                                               " entries for " + std::to_string(inst.items) +
                                               " items");
    for (int e = 1; e <= inst.items; ++e)
      if (inst.capacities[e - 1] < 1)
        throw ValidationError("BadCapacity", "item " + std::to_string(e) +
                                                 " has capacity " +
                                                 std::to_string(inst.capacities[e - 1]));
  }
  for (int i = 0; i < inst.num_agents(); ++i) {
    const Agent& a = inst.agents[i];
    if (a.bundle.items.empty())
      throw ValidationError("EmptyBundle", "agent " + std::to_string(i));
    for (size_t k = 0; k < a.bundle.items.size(); ++k) {
      int item = a.bundle.items[k];
      if (item < 1 || item > inst.items)
        throw ValidationError("IndexOutOfRange", "agent " + std::to_string(i) + " item " +
                                                     std::to_string(item));
      if (k > 0 && a.bundle.items[k - 1] >= item)
        throw ValidationError("IndexOutOfRange",
                              "agent " + std::to_string(i) + " bundle not strictly sorted");
    }
    if (a.valuation < Rat(0))
      throw ValidationError("NegativeValuation", "agent " + std::to_string(i));
  }
  return inst;
}

void validate_result(const Instance& inst, const AllocationPricing& ap) {
  if (ap.agents.size() != inst.agents.size())
    throw ValidationError("CountMismatch",
                          "result has " + std::to_string(ap.agents.size()) + " entries for " +
                              std::to_string(inst.agents.size()) + " agents");
  for (int i = 0; i < inst.num_agents(); ++i) {
    const AgentResult& r = ap.agents[i];
    if (r.price < Rat(0))
      throw ValidationError("NegativePrice", "agent " + std::to_string(i));
    if (!r.win && r.price != Rat(0))
      throw ValidationError("LoserPriced", "agent " + std::to_string(i));
    if (r.win && r.price > inst.agents[i].valuation)
      throw ValidationError("PriceAboveValuation", "agent " + std::to_string(i));
  }
  if (!inst.unlimited()) {
    for (int e = 1; e <= inst.items; ++e) {
      int used = 0;
      for (int i = 0; i < inst.num_agents(); ++i)
        if (ap.agents[i].win && inst.agents[i].bundle.contains(e)) ++used;
      if (used > inst.capacity(e))
        throw ValidationError("CapacityExceeded", "item " + std::to_string(e) + " serves " +
                                                      std::to_string(used) + " > " +
                                                      std::to_string(inst.capacity(e)));
    }
  }
}

}  // namespace efp
