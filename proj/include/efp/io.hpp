#pragma once

#include <string>

#include "efp/model.hpp"

namespace efp {

// JSON wire formats. Instance:
//   {"items": n, "supply": "unlimited" | [c_1,...,c_n],
//    "agents": [{"bundle": [i,...] | {"interval":[l,r]}, "valuation": int}, ...]}
// Result:
//   {"revenue": "num/den", "agents": [{"win": bool, "price": "num/den"}, ...]}
// Field order is fixed as listed; prices serialize as "num/den" strings.

Instance load_instance(const std::string& text);
std::string save_instance(const Instance& inst);

AllocationPricing load_result(const std::string& text);
std::string save_result(const AllocationPricing& ap);

std::string violation_to_json(const Violation& v);

Instance load_instance_file(const std::string& path);
AllocationPricing load_result_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace efp
