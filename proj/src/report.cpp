#include "coarse/report.hpp"

#include <cstdio>
#include <set>
#include <sstream>

#include "coarse/errors.hpp"

namespace coarse {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void Report::add_input(const std::string& path, std::string_view contents) {
  inputs[path] = "fnv1a64:" + hex64(fnv1a64(contents));
}

void Report::absorb(const std::string& stage, const Certificate& c) {
  for (Guarantee g : c) {
    g.name = stage + "/" + g.name;
    guarantees.push_back(std::move(g));
  }
}

Json report_json(const Report& r) {
  std::set<std::string> seen;
  for (const auto& g : r.guarantees)
    if (!seen.insert(g.name).second) throw InternalError("guarantee '" + g.name + "' reported twice");
  Json j;
  j["command"] = r.command;
  j["inputs"] = r.inputs;
  j["result"] = r.result;
  j["guarantees"] = to_json(r.guarantees);
  j["pass"] = r.pass();
  if (r.wall_seconds) j["wall_seconds"] = *r.wall_seconds;
  return j;
}

std::string report_summary(const Report& r) {
  std::ostringstream out;
  for (const auto& g : r.guarantees) {
    out << (g.pass ? "PASS " : "FAIL ") << g.name << "  measured=" << g.measured.dump()
        << "  claimed=" << g.claimed.dump() << '\n';
  }
  out << (r.pass() ? "ok" : "FAILED") << ": " << r.guarantees.size() << " guarantees";
  if (r.wall_seconds) out << ", " << *r.wall_seconds << " s";
  out << '\n';
  return out.str();
}

}  // namespace coarse
