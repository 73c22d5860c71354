#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coarse/guarantee.hpp"

namespace coarse {

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

struct Report {
  std::vector<std::string> command;
  Json inputs = Json::object();  // path -> "fnv1a64:<hex>"
  Json result = Json::object();
  Certificate guarantees;
  std::optional<double> wall_seconds;

  void add_input(const std::string& path, std::string_view contents);
  // Appends guarantees with names prefixed by "stage/".
  void absorb(const std::string& stage, const Certificate& c);
  bool pass() const { return all_pass(guarantees); }
};

// Throws InternalError when a guarantee name repeats.
Json report_json(const Report& r);
// One line per guarantee plus a verdict line.
std::string report_summary(const Report& r);

}  // namespace coarse
