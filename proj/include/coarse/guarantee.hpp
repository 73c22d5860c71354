#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace coarse {

using Json = nlohmann::ordered_json;

// One verified claim of a construction: what was promised, what was measured
// and, on failure, a witness.
struct Guarantee {
  std::string name;
  Json claimed;
  Json measured;
  bool pass = false;
  Json witness;  // null when there is nothing to show
};

using Certificate = std::vector<Guarantee>;

bool all_pass(const Certificate& c);
Json to_json(const Guarantee& g);
Json to_json(const Certificate& c);

// Convenience constructors for the common comparison shapes.
Guarantee check_le(std::string name, double measured, double bound, double slack = 0.0);
Guarantee check_ge(std::string name, double measured, double bound, double slack = 0.0);
Guarantee check_eq(std::string name, long long measured, long long expected);
Guarantee check_true(std::string name, bool ok, Json witness = nullptr);

// Doubles that may be infinite are emitted as the string "inf".
Json number(double v);

}  // namespace coarse
