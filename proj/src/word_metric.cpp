#include "coarse/word_metric.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <string>

#include "coarse/errors.hpp"

namespace coarse {

namespace {

constexpr std::size_t kBallCap = 2'000'000;

void check_element(GroupModel m, unsigned rank, const GroupElement& g) {
  if (m == GroupModel::free_abelian) {
    if (g.size() != rank) throw InvalidInput("Z^" + std::to_string(rank) + " element has wrong length");
    return;
  }
  for (int l : g)
    if (l == 0 || unsigned(std::abs(l)) > rank) throw InvalidInput("free-group letter out of range");
}

// Breadth-first search from the identity; returns element -> word length.
std::map<GroupElement, unsigned> bfs(GroupModel m, unsigned rank, const std::vector<GroupElement>& gens,
                                     unsigned radius, std::vector<GroupElement>* order) {
  std::map<GroupElement, unsigned> seen;
  std::vector<GroupElement> frontier{group_identity(m, rank)};
  seen.emplace(frontier.front(), 0);
  if (order) order->push_back(frontier.front());
  for (unsigned len = 1; len <= radius && !frontier.empty(); ++len) {
    std::vector<GroupElement> next;
    for (const auto& g : frontier)
      for (const auto& s : gens) {
        GroupElement h = group_multiply(m, g, s);
        if (seen.emplace(h, len).second) {
          next.push_back(h);
          if (order) order->push_back(h);
        }
      }
    if (seen.size() > kBallCap) throw ResourceLimit("word-metric ball exceeds " + std::to_string(kBallCap) + " elements");
    frontier = std::move(next);
  }
  return seen;
}

}  // namespace

GroupElement group_identity(GroupModel m, unsigned rank) {
  return m == GroupModel::free_abelian ? GroupElement(rank, 0) : GroupElement{};
}

GroupElement group_multiply(GroupModel m, const GroupElement& a, const GroupElement& b) {
  if (m == GroupModel::free_abelian) {
    GroupElement c(a);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += b[i];
    return c;
  }
  GroupElement c(a);
  for (int l : b) {
    if (!c.empty() && c.back() == -l)
      c.pop_back();
    else
      c.push_back(l);
  }
  return c;
}

GroupElement group_inverse(GroupModel m, const GroupElement& a) {
  GroupElement c(a);
  if (m == GroupModel::free_abelian) {
    for (int& v : c) v = -v;
    return c;
  }
  std::reverse(c.begin(), c.end());
  for (int& v : c) v = -v;
  return c;
}

WordBall word_metric_ball(GroupModel model, unsigned rank, const std::vector<GroupElement>& generators,
                          unsigned radius) {
  if (generators.empty()) throw InvalidInput("word metric needs a non-empty generating set");
  std::vector<GroupElement> gens;
  for (const auto& g : generators) {
    check_element(model, rank, g);
    // Normalize free-group input words before use.
    GroupElement r = group_multiply(model, group_identity(model, rank), g);
    if (r == group_identity(model, rank)) continue;
    gens.push_back(r);
    gens.push_back(group_inverse(model, r));
  }
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  if (gens.empty()) throw InvalidInput("generating set contains only the identity");

  WordBall out;
  auto lengths = bfs(model, rank, gens, radius, &out.elements);
  // Any |g^{-1}h| for g,h in the ball is at most 2*radius.
  auto wide = bfs(model, rank, gens, 2 * radius, nullptr);
  const std::size_t n = out.elements.size();
  out.length.resize(n);
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  std::vector<GroupElement> inv(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.length[i] = lengths.at(out.elements[i]);
    inv[i] = group_inverse(model, out.elements[i]);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      auto it = wide.find(group_multiply(model, inv[i], out.elements[j]));
      if (it == wide.end()) throw InternalError("word distance exceeds twice the ball radius");
      d[i][j] = d[j][i] = double(it->second);
    }
  out.space = std::make_shared<MatrixSpace>(std::move(d));
  return out;
}

}  // namespace coarse
