#include "coarse/transforms.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "coarse/errors.hpp"

namespace coarse {

IndexSet interior(const IndexSet& u, const Entourage& e, const IndexSet* domain) {
  IndexSet out;
  const std::size_t n = e.space()->size();
  auto inside = [&](Index x) {
    IndexSet nb = e.of(x);
    if (domain) nb = set_intersection(nb, *domain);
    return is_subset(nb, u);
  };
  for (std::size_t i = 0; i < n; ++i) {
    const Index x = Index(i);
    if (domain && !contains(*domain, x)) continue;
    // A point outside U that is its own neighbour can never be interior.
    if (!contains(u, x) && e.contains(x, x)) continue;
    if (inside(x)) out.push_back(x);
  }
  return out;
}

PowerTable::PowerTable(Entourage l) { powers_.push_back(std::move(l)); }

const Entourage& PowerTable::operator[](unsigned k) {
  if (k == 0) throw InvalidInput("entourage power index starts at 1");
  while (powers_.size() < k) powers_.push_back(compose(powers_.back(), powers_.front()));
  return powers_[k - 1];
}

std::vector<IndexSet> k_fold_intersections(const Cover& c, std::size_t k) {
  std::vector<IndexSet> out;
  if (k == 0) return out;
  // Distinct set contents first, so "pairwise distinct" means distinct as sets.
  std::map<IndexSet, std::size_t> ids;
  std::vector<const IndexSet*> uniq;
  for (const auto& s : c.sets)
    if (!s.empty() && ids.emplace(s, uniq.size()).second) uniq.push_back(&s);
  std::vector<std::vector<std::size_t>> inc(c.space->size());
  for (std::size_t s = 0; s < uniq.size(); ++s)
    for (Index p : *uniq[s]) inc[p].push_back(s);

  std::set<std::vector<std::size_t>> tuples;
  std::vector<std::size_t> pick;
  for (const auto& at : inc) {
    if (at.size() < k) continue;
    // All k-subsets of the sets through this point.
    std::vector<bool> mask(at.size(), false);
    std::fill(mask.begin(), mask.begin() + std::ptrdiff_t(k), true);
    do {
      pick.clear();
      for (std::size_t t = 0; t < at.size(); ++t)
        if (mask[t]) pick.push_back(at[t]);
      tuples.insert(pick);
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }
  std::set<IndexSet> seen;
  for (const auto& t : tuples) {
    IndexSet acc = *uniq[t[0]];
    for (std::size_t q = 1; q < t.size() && !acc.empty(); ++q) acc = set_intersection(acc, *uniq[t[q]]);
    if (!acc.empty() && seen.insert(acc).second) out.push_back(std::move(acc));
  }
  return out;
}

Json witness_json(const DisjointnessWitness& w) {
  return Json{{"family", w.family}, {"sets", {w.set_a, w.set_b}}, {"pair", {w.a, w.b}}};
}

namespace {

void require_symmetric_reflexive(const Entourage& l, const char* what) {
  if (!l.contains_diagonal()) throw ContractViolation(std::string(what) + ": entourage must contain the diagonal");
  if (!l.is_symmetric()) throw ContractViolation(std::string(what) + ": entourage must be symmetric");
}

// Index of some set of c containing w, if any.
std::optional<std::size_t> containing_set(const Cover& c, const std::vector<std::vector<std::size_t>>& inc,
                                          const IndexSet& w) {
  if (w.empty()) return std::nullopt;
  for (std::size_t s : inc[w.front()])
    if (is_subset(w, c.sets[s])) return s;
  return std::nullopt;
}

Guarantee families_disjoint(const Cover& c, const Entourage& l, const std::string& name) {
  auto v = disjointness_violation(c, l);
  return check_true(name, !v, v ? witness_json(*v) : Json(nullptr));
}

Guarantee covers(const Cover& c) {
  auto p = uncovered_point(c);
  return check_true("covers", !p, p ? Json{{"point", *p}} : Json(nullptr));
}

void dedupe_nonempty(std::vector<IndexSet>& fam) {
  std::set<IndexSet> seen;
  std::vector<IndexSet> out;
  for (auto& s : fam)
    if (!s.empty() && seen.insert(s).second) out.push_back(std::move(s));
  fam = std::move(out);
}

}  // namespace

TransformResult colorize(const Cover& c, const Entourage& l, unsigned n) {
  check_well_formed(c);
  if (l.space() != c.space) throw InvalidInput("colorize: entourage and cover live over different spaces");
  require_symmetric_reflexive(l, "colorize");
  const std::size_t mult = multiplicity(c);
  if (mult > n + 1)
    throw ContractViolation("colorize: multiplicity " + std::to_string(mult) + " exceeds n+1 = " +
                            std::to_string(n + 1) + " at point " + std::to_string(multiplicity_point(c)));
  PowerTable pow(l);
  if (auto x = appetite_violation(c, pow[n + 1]))
    throw ContractViolation("colorize: cover lacks appetite L^" + std::to_string(n + 1) + "; no set contains L^" +
                            std::to_string(n + 1) + "(x) for x = " + std::to_string(*x));

  const IndexSet* dom = c.domain ? &*c.domain : nullptr;
  const std::size_t npts = c.space->size();
  std::vector<std::vector<IndexSet>> families(n + 1);
  std::vector<char> s_next(npts, 0);  // S_{i+1}
  for (unsigned i = n + 1; i >= 1; --i) {
    const unsigned power = n + 2 - i;
    std::vector<char> s_here(npts, 0);
    for (const auto& u : k_fold_intersections(c, i)) {
      IndexSet in = interior(u, pow[power], dom);
      IndexSet v;
      for (Index x : in) {
        s_here[x] = 1;
        if (!s_next[x]) v.push_back(x);
      }
      families[i - 1].push_back(std::move(v));
    }
    dedupe_nonempty(families[i - 1]);
    s_next = std::move(s_here);
  }

  TransformResult r;
  r.cover = canonical(colored_cover(c.space, families));
  r.cover.domain = c.domain;
  const auto inc = c.incidence();
  Json bad = nullptr;
  for (std::size_t s = 0; s < r.cover.sets.size() && bad.is_null(); ++s)
    if (!r.cover.sets[s].empty() && !containing_set(c, inc, r.cover.sets[s])) bad = Json{{"set", s}};
  r.certificate.push_back(check_eq("family_count", (long long)r.cover.family_count(), n + 1));
  r.certificate.push_back(families_disjoint(r.cover, l, "families_L_disjoint"));
  r.certificate.push_back(covers(r.cover));
  r.certificate.push_back(check_true("refines_input", bad.is_null(), bad));
  r.certificate.push_back(check_le("multiplicity", double(multiplicity(r.cover)), double(n + 1)));
  return r;
}

TransformResult expand(const Cover& c, const Entourage& l) {
  check_well_formed(c);
  if (!c.families) throw InvalidInput("expand needs a coloured cover");
  if (l.space() != c.space) throw InvalidInput("expand: entourage and cover live over different spaces");
  require_symmetric_reflexive(l, "expand");
  const Entourage l2 = compose(l, l);
  if (auto w = disjointness_violation(c, l2))
    throw ContractViolation("expand: family " + std::to_string(w->family) + " is not L^2-disjoint; sets " +
                            std::to_string(w->set_a) + " and " + std::to_string(w->set_b) + " via pair (" +
                            std::to_string(w->a) + "," + std::to_string(w->b) + ")");
  TransformResult r;
  r.cover = c;
  for (auto& s : r.cover.sets) {
    s = l.image(s);
    if (c.domain) s = set_intersection(s, *c.domain);
  }
  r.cover = canonical(r.cover);
  r.certificate.push_back(families_disjoint(r.cover, Entourage::diagonal(c.space), "families_disjoint"));
  r.certificate.push_back(covers(r.cover));
  auto a = appetite_violation(r.cover, l);
  r.certificate.push_back(check_true("appetite_L", !a, a ? Json{{"point", *a}} : Json(nullptr)));
  const Entourage bound = compose(compose(l, cover_entourage(c)), inverse(l));
  r.certificate.push_back(check_true("bounded_by_L_DeltaC_Linv", cover_entourage(r.cover).subset_of(bound)));
  return r;
}

TransformResult merge_union(const Cover& a, const Cover& b, const Entourage& l) {
  check_well_formed(a);
  check_well_formed(b);
  if (a.space != b.space || l.space() != a.space) throw InvalidInput("merge_union: inputs live over different spaces");
  if (b.sets.empty()) return {a, {covers(a)}};
  if (a.sets.empty()) return {b, {covers(b)}};
  if (!a.families || !b.families) throw InvalidInput("merge_union needs coloured covers");
  if (a.family_count() != b.family_count())
    throw InvalidInput("merge_union: family counts differ (" + std::to_string(a.family_count()) + " vs " +
                       std::to_string(b.family_count()) + ")");
  require_symmetric_reflexive(l, "merge_union");
  if (auto w = disjointness_violation(a, l))
    throw ContractViolation("merge_union: family " + std::to_string(w->family) + " of the A cover is not L-disjoint");
  // D_A only covers A's points; B's points need the diagonal for chains to pass through them.
  const Entourage da = cover_entourage(a);
  const Entourage da_refl = unite(da, Entourage::diagonal(a.space));
  const Entourage chain = compose(compose(compose(compose(l, da_refl), l), da_refl), l);
  if (auto w = disjointness_violation(b, chain))
    throw ContractViolation("merge_union: family " + std::to_string(w->family) +
                            " of the B cover is not (L D_A L D_A L)-disjoint; sets " + std::to_string(w->set_a) +
                            " and " + std::to_string(w->set_b));

  const std::size_t fams = a.family_count();
  std::vector<std::vector<IndexSet>> out(fams);
  for (std::size_t i = 0; i < fams; ++i) {
    const auto us = family_sets(a, i);
    const auto vs = family_sets(b, i);
    std::vector<IndexSet> merged = vs;
    std::vector<std::ptrdiff_t> owner(us.size(), -1);
    for (std::size_t v = 0; v < vs.size(); ++v) {
      const IndexSet reach = l.image(vs[v]);
      for (std::size_t u = 0; u < us.size(); ++u) {
        if (!intersects(reach, us[u])) continue;
        if (owner[u] >= 0 && owner[u] != std::ptrdiff_t(v))
          throw ContractViolation("merge_union: set " + std::to_string(u) + " of family " + std::to_string(i) +
                                  " touches two B sets (" + std::to_string(owner[u]) + " and " + std::to_string(v) +
                                  ")");
        owner[u] = std::ptrdiff_t(v);
        merged[v] = set_union(merged[v], us[u]);
      }
    }
    for (std::size_t u = 0; u < us.size(); ++u)
      if (owner[u] < 0) merged.push_back(us[u]);
    dedupe_nonempty(merged);
    out[i] = std::move(merged);
  }

  TransformResult r;
  r.cover = canonical(colored_cover(a.space, out));
  r.cover.domain = set_union(a.domain_points(), b.domain_points());
  if (r.cover.domain->size() == a.space->size()) r.cover.domain.reset();
  r.certificate.push_back(check_eq("family_count", (long long)r.cover.family_count(), (long long)fams));
  r.certificate.push_back(families_disjoint(r.cover, l, "families_L_disjoint"));
  r.certificate.push_back(covers(r.cover));
  const Entourage db = cover_entourage(b);
  const Entourage bound = unite(compose(compose(compose(compose(da_refl, l), db), l), da_refl), da);
  r.certificate.push_back(check_true("bounded_by_DA_L_DB_L_DA", cover_entourage(r.cover).subset_of(bound)));
  return r;
}

Cover product_cover(const Cover& u, const Cover& v, SpacePtr product_space) {
  auto ps = std::dynamic_pointer_cast<const ProductSpace>(product_space);
  if (!ps || ps->first() != u.space || ps->second() != v.space)
    throw InvalidInput("product cover needs the product of the two covers' spaces");
  Cover out;
  out.space = product_space;
  for (const auto& a : u.sets)
    for (const auto& b : v.sets) {
      IndexSet s;
      for (Index x : a)
        for (Index y : b) s.push_back(ps->pair_index(x, y));
      out.sets.push_back(std::move(s));
    }
  return out;
}

TransformResult product_refine(const Cover& u, const Cover& v, SpacePtr product_space, const Entourage& ex,
                               const Entourage& ey, unsigned n, unsigned m) {
  check_well_formed(u);
  check_well_formed(v);
  if (u.domain || v.domain) throw InvalidInput("product_refine needs covers of whole spaces");
  auto ps = std::dynamic_pointer_cast<const ProductSpace>(product_space);
  if (!ps || ps->first() != u.space || ps->second() != v.space)
    throw InvalidInput("product_refine needs the product of the two covers' spaces");
  if (ex.space() != u.space || ey.space() != v.space)
    throw InvalidInput("product_refine: factor entourages live over the wrong spaces");
  require_symmetric_reflexive(ex, "product_refine (E_X)");
  require_symmetric_reflexive(ey, "product_refine (E_Y)");
  const unsigned top = n + m + 1;
  if (std::size_t mu = multiplicity(u); mu > n + 1)
    throw ContractViolation("product_refine: X cover has multiplicity " + std::to_string(mu) + " > n+1 at point " +
                            std::to_string(multiplicity_point(u)));
  if (std::size_t mv = multiplicity(v); mv > m + 1)
    throw ContractViolation("product_refine: Y cover has multiplicity " + std::to_string(mv) + " > m+1 at point " +
                            std::to_string(multiplicity_point(v)));
  PowerTable px(ex), py(ey);
  if (auto x = appetite_violation(u, px[top]))
    throw ContractViolation("product_refine: X cover lacks appetite E_X^" + std::to_string(top) + " at point " +
                            std::to_string(*x));
  if (auto y = appetite_violation(v, py[top]))
    throw ContractViolation("product_refine: Y cover lacks appetite E_Y^" + std::to_string(top) + " at point " +
                            std::to_string(*y));

  std::vector<std::vector<IndexSet>> iu(n + 2), iv(m + 2);
  for (unsigned p = 1; p <= n + 1; ++p) iu[p] = k_fold_intersections(u, p);
  for (unsigned q = 1; q <= m + 1; ++q) iv[q] = k_fold_intersections(v, q);

  const std::size_t npts = ps->size();
  std::vector<std::vector<IndexSet>> families(top);
  std::vector<char> b_next(npts, 0);  // B_{k+1}
  for (unsigned k = n + m + 2; k >= 2; --k) {
    const unsigned power = n + m + 3 - k;
    // Interiors per factor are shared across all products using them.
    std::map<std::pair<unsigned, std::size_t>, IndexSet> int_u, int_v;
    std::vector<char> b_here(npts, 0);
    std::vector<IndexSet> fam;
    for (unsigned p = 1; p < k; ++p) {
      const unsigned q = k - p;
      if (p > n + 1 || q > m + 1) continue;
      for (std::size_t a = 0; a < iu[p].size(); ++a) {
        auto ia = int_u.find({p, a});
        if (ia == int_u.end()) ia = int_u.emplace(std::pair{p, a}, interior(iu[p][a], px[power])).first;
        if (ia->second.empty()) continue;
        for (std::size_t b = 0; b < iv[q].size(); ++b) {
          auto ib = int_v.find({q, b});
          if (ib == int_v.end()) ib = int_v.emplace(std::pair{q, b}, interior(iv[q][b], py[power])).first;
          IndexSet w;
          for (Index x : ia->second)
            for (Index y : ib->second) {
              const Index z = ps->pair_index(x, y);
              b_here[z] = 1;
              if (!b_next[z]) w.push_back(z);
            }
          fam.push_back(std::move(w));
        }
      }
    }
    dedupe_nonempty(fam);
    families[k - 2] = std::move(fam);
    b_next = std::move(b_here);
  }

  TransformResult r;
  r.cover = canonical(colored_cover(product_space, families));
  const Entourage e = Entourage::product(product_space, ex, ey);
  r.certificate.push_back(check_eq("family_count", (long long)r.cover.family_count(), top));
  r.certificate.push_back(families_disjoint(r.cover, e, "families_E_disjoint"));
  r.certificate.push_back(covers(r.cover));
  r.certificate.push_back(check_le("multiplicity", double(multiplicity(r.cover)), double(top)));
  return r;
}

}  // namespace coarse
