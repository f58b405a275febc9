#include "efp/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "efp/errors.hpp"

namespace efp {
namespace {

using Json = nlohmann::ordered_json;

// Line number of a byte offset, for parse diagnostics.
int line_of(const std::string& text, size_t byte) {
  int line = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
}

const Json& field(const Json& obj, const char* name, const std::string& where) {
  if (!obj.is_object() || !obj.contains(name))
    throw ParseError(where + ": missing field \"" + name + "\"");
  return obj.at(name);
}

long long int_field(const Json& value, const std::string& where) {
  if (!value.is_number_integer())
    throw ParseError(where + ": expected an integer");
  return value.get<long long>();
}

}  // namespace

Instance load_instance(const std::string& text) {
  Json j = parse_text(text);
  Instance inst;
  inst.items = static_cast<int>(int_field(field(j, "items", "instance"), "items"));

  const Json& supply = field(j, "supply", "instance");
  if (supply.is_string()) {
    if (supply.get<std::string>() != "unlimited")
      throw ParseError("supply: expected \"unlimited\" or a capacity list");
  } else if (supply.is_array()) {
    for (size_t e = 0; e < supply.size(); ++e)
      inst.capacities.push_back(
          static_cast<int>(int_field(supply[e], "supply[" + std::to_string(e) + "]")));
    if (static_cast<int>(inst.capacities.size()) != inst.items)
      throw ParseError("supply: " + std::to_string(inst.capacities.size()) +
                       " capacities for " + std::to_string(inst.items) + " items");
  } else {
    throw ParseError("supply: expected \"unlimited\" or a capacity list");
  }

  const Json& agents = field(j, "agents", "instance");
  if (!agents.is_array()) throw ParseError("agents: expected an array");
  for (size_t i = 0; i < agents.size(); ++i) {
    const std::string where = "agents[" + std::to_string(i) + "]";
    const Json& ja = agents[i];
    Agent a;
    const Json& jb = field(ja, "bundle", where);
    if (jb.is_array()) {
      std::vector<int> items;
      for (const Json& it : jb)
        items.push_back(static_cast<int>(int_field(it, where + ".bundle")));
      a.bundle = Bundle::set(std::move(items));
      if (static_cast<size_t>(jb.size()) != a.bundle.items.size())
        throw ParseError(where + ".bundle: duplicate or unsorted items");
    } else if (jb.is_object()) {
      const Json& iv = field(jb, "interval", where + ".bundle");
      if (!iv.is_array() || iv.size() != 2)
        throw ParseError(where + ".bundle.interval: expected [l, r]");
      int l = static_cast<int>(int_field(iv[0], where + ".bundle.interval"));
      int r = static_cast<int>(int_field(iv[1], where + ".bundle.interval"));
      if (l > r) throw ParseError(where + ".bundle.interval: l > r");
      a.bundle = Bundle::interval(l, r);
    } else {
      throw ParseError(where + ".bundle: expected item list or {\"interval\":[l,r]}");
    }
    a.valuation = Rat(int_field(field(ja, "valuation", where), where + ".valuation"));
    inst.agents.push_back(std::move(a));
  }
  try {
    return validate_instance(std::move(inst));
  } catch (const ValidationError& e) {
    throw ParseError(e.what());
  }
}

std::string save_instance(const Instance& inst) {
  Json j;
  j["items"] = inst.items;
  if (inst.unlimited()) {
    j["supply"] = "unlimited";
  } else {
    j["supply"] = inst.capacities;
  }
  Json agents = Json::array();
  for (const Agent& a : inst.agents) {
    Json ja;
    if (a.bundle.interval_form && a.bundle.is_contiguous()) {
      ja["bundle"] = Json{{"interval", {a.bundle.first(), a.bundle.last()}}};
    } else {
      ja["bundle"] = a.bundle.items;
    }
    if (!is_integer(a.valuation))
      throw ValidationError("NonIntegerValuation", "stored instances use integer valuations");
    ja["valuation"] = a.valuation.numerator();
    agents.push_back(std::move(ja));
  }
  j["agents"] = std::move(agents);
  return j.dump(2) + "\n";
}

AllocationPricing load_result(const std::string& text) {
  Json j = parse_text(text);
  AllocationPricing ap;
  Rat declared = [&] {
    const Json& r = field(j, "revenue", "result");
    if (!r.is_string()) throw ParseError("revenue: expected \"num/den\" string");
    return rat_from_string(r.get<std::string>());
  }();
  const Json& agents = field(j, "agents", "result");
  if (!agents.is_array()) throw ParseError("agents: expected an array");
  for (size_t i = 0; i < agents.size(); ++i) {
    const std::string where = "agents[" + std::to_string(i) + "]";
    const Json& ja = agents[i];
    AgentResult r;
    const Json& win = field(ja, "win", where);
    if (!win.is_boolean()) throw ParseError(where + ".win: expected a boolean");
    r.win = win.get<bool>();
    const Json& price = field(ja, "price", where);
    if (!price.is_string()) throw ParseError(where + ".price: expected \"num/den\" string");
    r.price = rat_from_string(price.get<std::string>());
    if (r.price < Rat(0)) throw ParseError(where + ".price: negative");
    ap.agents.push_back(r);
  }
  if (revenue(ap) != declared)
    throw ParseError("revenue: declared " + rat_to_string(declared) +
                     " but prices sum to " + rat_to_string(revenue(ap)));
  return ap;
}

std::string save_result(const AllocationPricing& ap) {
  Json j;
  j["revenue"] = rat_to_string(revenue(ap));
  Json agents = Json::array();
  for (const AgentResult& r : ap.agents)
    agents.push_back(Json{{"win", r.win}, {"price", rat_to_string(r.price)}});
  j["agents"] = std::move(agents);
  return j.dump(2) + "\n";
}

std::string violation_to_json(const Violation& v) {
  Json j;
  j["kind"] = to_string(v.kind);
  j["agent"] = v.agent;
  j["witness"] = v.witness;
  j["witness_total"] = rat_to_string(v.witness_total);
  return j.dump() + "\n";
}

namespace {
std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

Instance load_instance_file(const std::string& path) { return load_instance(read_file(path)); }

AllocationPricing load_result_file(const std::string& path) {
  return load_result(read_file(path));
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << content;
}

}  // namespace efp
