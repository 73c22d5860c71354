#include "coarse/cover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "coarse/errors.hpp"
#include "coarse/parallel.hpp"

namespace coarse {

IndexSet Cover::domain_points() const {
  if (domain) return *domain;
  IndexSet all(space->size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = Index(i);
  return all;
}

std::vector<std::vector<std::size_t>> Cover::incidence() const {
  std::vector<std::vector<std::size_t>> inc(space->size());
  for (std::size_t s = 0; s < sets.size(); ++s)
    for (Index p : sets[s]) inc[p].push_back(s);
  return inc;
}

Cover colored_cover(SpacePtr space, const std::vector<std::vector<IndexSet>>& families) {
  Cover c;
  c.space = std::move(space);
  c.families.emplace();
  for (const auto& fam : families) {
    std::vector<std::size_t> ids;
    for (const auto& s : fam) {
      ids.push_back(c.sets.size());
      c.sets.push_back(s);
      normalize(c.sets.back());
    }
    c.families->push_back(std::move(ids));
  }
  return c;
}

std::vector<IndexSet> family_sets(const Cover& c, std::size_t f) {
  std::vector<IndexSet> out;
  if (!c.families || f >= c.families->size()) return out;
  for (std::size_t s : (*c.families)[f]) out.push_back(c.sets[s]);
  return out;
}

void check_well_formed(const Cover& c) {
  if (!c.space) throw InvalidInput("cover without a space");
  for (const auto& s : c.sets) {
    if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end())
      throw InvalidInput("cover set is not sorted and duplicate-free");
    if (!s.empty()) c.space->check_index(s.back());
  }
  if (c.domain) {
    if (!c.domain->empty()) c.space->check_index(c.domain->back());
    for (const auto& s : c.sets)
      if (!is_subset(s, *c.domain)) throw InvalidInput("cover set leaves the cover's domain");
  }
  if (c.families) {
    std::vector<int> owner(c.sets.size(), 0);
    for (const auto& fam : *c.families)
      for (std::size_t s : fam) {
        if (s >= c.sets.size()) throw InvalidInput("family refers to set " + std::to_string(s) + " which does not exist");
        ++owner[s];
      }
    for (std::size_t s = 0; s < owner.size(); ++s)
      if (owner[s] != 1) throw InvalidInput("set " + std::to_string(s) + " must belong to exactly one family");
    // Sets of one family are pairwise disjoint; equal copies count as one set.
    std::vector<std::ptrdiff_t> holder(c.space->size(), -1);
    for (std::size_t f = 0; f < c.families->size(); ++f) {
      for (std::size_t s : (*c.families)[f])
        for (Index p : c.sets[s]) {
          const std::ptrdiff_t h = holder[p];
          if (h >= 0 && c.sets[std::size_t(h)] != c.sets[s])
            throw InvalidInput("sets " + std::to_string(h) + " and " + std::to_string(s) + " of family " +
                               std::to_string(f) + " share point " + std::to_string(p));
          holder[p] = std::ptrdiff_t(s);
        }
      for (std::size_t s : (*c.families)[f])
        for (Index p : c.sets[s]) holder[p] = -1;
    }
  }
}

std::optional<Index> uncovered_point(const Cover& c) {
  std::vector<char> hit(c.space->size(), 0);
  for (const auto& s : c.sets)
    for (Index p : s) hit[p] = 1;
  for (Index p : c.domain_points())
    if (!hit[p]) return p;
  return std::nullopt;
}

std::size_t empty_set_count(const Cover& c) {
  return std::size_t(std::count_if(c.sets.begin(), c.sets.end(), [](const IndexSet& s) { return s.empty(); }));
}

std::optional<DisjointnessWitness> disjointness_violation(const Cover& c, const Entourage& l) {
  if (!c.families) return std::nullopt;
  if (l.space() != c.space) throw InvalidInput("entourage and cover live over different spaces");
  const std::size_t n = c.space->size();
  for (std::size_t f = 0; f < c.families->size(); ++f) {
    const auto& fam = (*c.families)[f];
    std::map<IndexSet, std::size_t> content;
    std::vector<std::size_t> cid(fam.size());
    for (std::size_t k = 0; k < fam.size(); ++k)
      cid[k] = content.emplace(c.sets[fam[k]], content.size()).first->second;
    std::vector<std::vector<std::size_t>> owner(n);
    for (std::size_t k = 0; k < fam.size(); ++k)
      for (Index p : c.sets[fam[k]]) owner[p].push_back(k);
    for (std::size_t k = 0; k < fam.size(); ++k)
      for (Index a : c.sets[fam[k]])
        for (Index b : l.of(a))
          for (std::size_t other : owner[b])
            if (cid[other] != cid[k]) return DisjointnessWitness{f, fam[other], fam[k], b, a};
  }
  return std::nullopt;
}

namespace {

// Content ids for sets; equal sets share an id.
std::vector<std::size_t> content_ids(const Cover& c) {
  std::map<IndexSet, std::size_t> ids;
  std::vector<std::size_t> out(c.sets.size());
  for (std::size_t s = 0; s < c.sets.size(); ++s) out[s] = ids.emplace(c.sets[s], ids.size()).first->second;
  return out;
}

std::vector<std::size_t> distinct_counts(const Cover& c) {
  auto ids = content_ids(c);
  std::vector<std::vector<std::size_t>> at(c.space->size());
  for (std::size_t s = 0; s < c.sets.size(); ++s)
    for (Index p : c.sets[s]) at[p].push_back(ids[s]);
  std::vector<std::size_t> count(at.size());
  for (std::size_t p = 0; p < at.size(); ++p) {
    std::sort(at[p].begin(), at[p].end());
    count[p] = std::size_t(std::unique(at[p].begin(), at[p].end()) - at[p].begin());
  }
  return count;
}

}  // namespace

std::size_t multiplicity(const Cover& c) {
  auto count = distinct_counts(c);
  return count.empty() ? 0 : *std::max_element(count.begin(), count.end());
}

Index multiplicity_point(const Cover& c) {
  auto count = distinct_counts(c);
  if (count.empty()) throw InvalidInput("multiplicity point of an empty space");
  return Index(std::max_element(count.begin(), count.end()) - count.begin());
}

double mesh(const Cover& c) {
  std::vector<double> diam(c.sets.size());
  parallel_for(c.sets.size(), [&](std::size_t s) { diam[s] = c.space->diameter(c.sets[s]); });
  return diam.empty() ? 0.0 : *std::max_element(diam.begin(), diam.end());
}

double lebesgue_number(const Cover& c) {
  const IndexSet dom = c.domain_points();
  const double inf = std::numeric_limits<double>::infinity();
  for (const auto& s : c.sets)
    if (s.size() == dom.size() && is_subset(dom, s)) return inf;
  const auto inc = c.incidence();
  // Membership bitmaps over domain positions, one per set.
  std::vector<std::vector<char>> member(c.sets.size(), std::vector<char>(dom.size(), 0));
  for (std::size_t j = 0; j < dom.size(); ++j)
    for (std::size_t s : inc[dom[j]]) member[s][j] = 1;
  std::vector<double> best(dom.size(), 0.0);
  parallel_for(dom.size(), [&](std::size_t k) {
    const Index x = dom[k];
    const auto& mine = inc[x];
    std::vector<double> m(mine.size(), inf);
    for (std::size_t j = 0; j < dom.size(); ++j) {
      const double d = c.space->dist(x, dom[j]);
      for (std::size_t t = 0; t < mine.size(); ++t)
        if (d < m[t] && !member[mine[t]][j]) m[t] = d;
    }
    double b = 0.0;
    for (double v : m) b = std::max(b, v);
    best[k] = b;
  });
  return best.empty() ? inf : *std::min_element(best.begin(), best.end());
}

std::optional<Index> appetite_violation(const Cover& c, const Entourage& l) {
  if (l.space() != c.space) throw InvalidInput("entourage and cover live over different spaces");
  const IndexSet dom = c.domain_points();
  const auto inc = c.incidence();
  std::vector<char> bad(dom.size(), 0);
  parallel_for(dom.size(), [&](std::size_t k) {
    IndexSet nb = l.of(dom[k]);
    if (c.domain) nb = set_intersection(nb, *c.domain);
    if (nb.empty()) return;
    for (std::size_t s : inc[nb.front()])
      if (is_subset(nb, c.sets[s])) return;
    bad[k] = 1;
  });
  for (std::size_t k = 0; k < dom.size(); ++k)
    if (bad[k]) return dom[k];
  return std::nullopt;
}

bool has_appetite(const Cover& c, const Entourage& l) { return !appetite_violation(c, l); }

Entourage cover_entourage(const Cover& c) {
  const auto inc = c.incidence();
  std::vector<IndexSet> nb(c.space->size());
  std::size_t count = 0;
  for (std::size_t p = 0; p < nb.size(); ++p) {
    for (std::size_t s : inc[p]) nb[p].insert(nb[p].end(), c.sets[s].begin(), c.sets[s].end());
    normalize(nb[p]);
    count += nb[p].size();
    if (count > kMaterializationCap)
      throw ResourceLimit("cover entourage exceeds the materialization cap of " + std::to_string(kMaterializationCap) +
                          " pairs");
  }
  return Entourage::from_neighbourhoods(c.space, std::move(nb));
}

Cover canonical(const Cover& c) {
  Cover out;
  out.space = c.space;
  out.domain = c.domain;
  if (!c.families) {
    out.sets = c.sets;
    std::sort(out.sets.begin(), out.sets.end());
    return out;
  }
  out.families.emplace();
  for (const auto& fam : *c.families) {
    std::vector<IndexSet> fs;
    for (std::size_t s : fam) fs.push_back(c.sets[s]);
    std::sort(fs.begin(), fs.end());
    std::vector<std::size_t> ids;
    for (auto& s : fs) {
      ids.push_back(out.sets.size());
      out.sets.push_back(std::move(s));
    }
    out.families->push_back(std::move(ids));
  }
  return out;
}

}  // namespace coarse
