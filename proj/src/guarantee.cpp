#include "coarse/guarantee.hpp"

#include <algorithm>
#include <cmath>

namespace coarse {

bool all_pass(const Certificate& c) {
  return std::all_of(c.begin(), c.end(), [](const Guarantee& g) { return g.pass; });
}

Json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

Json to_json(const Guarantee& g) {
  Json j;
  j["name"] = g.name;
  j["claimed"] = g.claimed;
  j["measured"] = g.measured;
  j["pass"] = g.pass;
  j["witness"] = g.witness;
  return j;
}

Json to_json(const Certificate& c) {
  Json arr = Json::array();
  for (const auto& g : c) arr.push_back(to_json(g));
  return arr;
}

Guarantee check_le(std::string name, double measured, double bound, double slack) {
  return {std::move(name), Json{{"le", number(bound)}}, number(measured), measured <= bound + slack, nullptr};
}

Guarantee check_ge(std::string name, double measured, double bound, double slack) {
  return {std::move(name), Json{{"ge", number(bound)}}, number(measured), measured >= bound - slack, nullptr};
}

Guarantee check_eq(std::string name, long long measured, long long expected) {
  return {std::move(name), Json{{"eq", expected}}, measured, measured == expected, nullptr};
}

Guarantee check_true(std::string name, bool ok, Json witness) {
  return {std::move(name), true, ok, ok, ok ? Json(nullptr) : std::move(witness)};
}

}  // namespace coarse
