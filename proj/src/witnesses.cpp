#include "coarse/witnesses.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>

#include "coarse/errors.hpp"

namespace coarse {

TransformResult cube_cover(const std::shared_ptr<const GridSpace>& grid, double a) {
  if (!grid) throw InvalidInput("cube cover needs a grid");
  if (!(a > 0)) throw InvalidInput("cube edge must be positive");
  const std::size_t n = grid->dim();
  const double lebesgue_bound = a / (2.0 * double(n + 1));
  if (grid->step() > lebesgue_bound + 1e-12)
    throw InvalidInput("grid step " + std::to_string(grid->step()) + " exceeds a/(2(n+1)) = " +
                       std::to_string(lebesgue_bound));
  const double half = a / 2 - 1e-9 * std::max(1.0, a);
  std::vector<std::map<std::vector<long>, IndexSet>> cubes(n + 1);
  std::vector<long> z(n);
  for (std::size_t p = 0; p < grid->size(); ++p) {
    const auto x = grid->coord(Index(p));
    for (std::size_t i = 0; i <= n; ++i) {
      const double shift = double(i) / double(n + 1);
      bool inside = true;
      for (std::size_t j = 0; j < n && inside; ++j) {
        z[j] = std::lround(x[j] / a - shift);
        inside = std::abs(x[j] - a * (double(z[j]) + shift)) < half;
      }
      if (inside) cubes[i][z].push_back(Index(p));
    }
  }
  std::vector<std::vector<IndexSet>> families(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    for (auto& [key, set] : cubes[i]) families[i].push_back(std::move(set));

  TransformResult r;
  r.cover = canonical(colored_cover(grid, families));
  auto unc = uncovered_point(r.cover);
  auto dis = disjointness_violation(r.cover, Entourage::diagonal(grid));
  r.certificate.push_back(check_eq("family_count", (long long)r.cover.family_count(), (long long)n + 1));
  r.certificate.push_back(check_true("covers", !unc, unc ? Json{{"point", *unc}} : Json(nullptr)));
  r.certificate.push_back(check_true("families_disjoint", !dis, dis ? witness_json(*dis) : Json(nullptr)));
  r.certificate.push_back(check_le("multiplicity", double(multiplicity(r.cover)), double(n + 1)));
  r.certificate.push_back(check_le("mesh", mesh(r.cover), a * std::sqrt(double(n)), 1e-9));
  r.certificate.push_back(check_ge("lebesgue", lebesgue_number(r.cover), lebesgue_bound - grid->step(), 1e-9));
  return r;
}

// ---------------------------------------------------------------------------

TreeCover tree_cover(const SpacePtr& tree, double l, Index root) {
  auto t = std::dynamic_pointer_cast<const TreeSpace>(tree);
  if (!t) throw InvalidInput("tree cover needs a tree-backed space");
  if (!(l > 0)) throw InvalidInput("tree cover needs L > 0");
  t->check_index(root);
  TreeCover out;
  out.l_prime = unsigned(std::floor(2 * l)) + 1;
  const unsigned lp = out.l_prime;
  const std::size_t n = t->size();

  // Parent pointers towards the root.
  std::vector<Index> parent(n, root);
  std::vector<unsigned> depth(n, 0);
  {
    std::vector<Index> queue{root};
    std::vector<char> seen(n, 0);
    seen[root] = 1;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      Index v = queue[h];
      for (Index w : t->adjacency()[v])
        if (!seen[w]) {
          seen[w] = 1;
          parent[w] = v;
          depth[w] = depth[v] + 1;
          queue.push_back(w);
        }
    }
  }
  // Class key: level f and the ancestor at depth ceil(L'(f - 1/2)).
  std::map<std::pair<unsigned, Index>, IndexSet> classes;
  std::vector<std::pair<unsigned, Index>> key(n);
  for (std::size_t v = 0; v < n; ++v) {
    const unsigned f = depth[v] / lp;
    const long tau2 = long(lp) * (2 * long(f) - 1);  // 2 * tau
    const long cut = tau2 <= 0 ? 0 : (tau2 + 1) / 2;
    Index a = Index(v);
    while (long(depth[a]) > cut) a = parent[a];
    key[v] = {f, a};
    classes[key[v]].push_back(Index(v));
  }
  // Open L-neighbourhoods: tree distances are integers, so d < L means d <= ceil(L) - 1.
  const unsigned reach = unsigned(std::ceil(l - 1e-12)) - 1;
  std::vector<std::vector<IndexSet>> families(2);
  std::vector<unsigned> dist(n);
  for (const auto& [k, members] : classes) {
    const unsigned unreached = ~0u;
    std::fill(dist.begin(), dist.end(), unreached);
    std::vector<Index> queue(members.begin(), members.end());
    for (Index m : members) dist[m] = 0;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      Index v = queue[h];
      if (dist[v] == reach) continue;
      for (Index w : t->adjacency()[v])
        if (dist[w] == unreached) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
    }
    normalize(queue);
    families[k.first % 2].push_back(std::move(queue));
  }

  TransformResult& r = out.result;
  r.cover = canonical(colored_cover(tree, families));
  // Separation of distinct classes of equal parity.
  double sep = std::numeric_limits<double>::infinity();
  Json sep_witness = nullptr;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v)
      if (key[u] != key[v] && key[u].first % 2 == key[v].first % 2) {
        double d = t->dist(Index(u), Index(v));
        if (d < sep) {
          sep = d;
          sep_witness = Json{{"pair", {u, v}}};
        }
      }
  auto unc = uncovered_point(r.cover);
  auto dis = disjointness_violation(r.cover, Entourage::diagonal(tree));
  auto app = appetite_violation(r.cover, Entourage::radius(tree, l));
  r.certificate.push_back(check_true("covers", !unc, unc ? Json{{"point", *unc}} : Json(nullptr)));
  r.certificate.push_back(check_true("families_disjoint", !dis, dis ? witness_json(*dis) : Json(nullptr)));
  r.certificate.push_back(check_le("multiplicity", double(multiplicity(r.cover)), 2));
  r.certificate.push_back(check_le("mesh", mesh(r.cover), 3.0 * lp + 2 * l));
  Guarantee g = check_ge("class_separation", sep, double(lp));
  if (!g.pass) g.witness = sep_witness;
  r.certificate.push_back(std::move(g));
  r.certificate.push_back(check_true("appetite_L", !app, app ? Json{{"point", *app}} : Json(nullptr)));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::shared_ptr<const GridSpace> ray_sample(const Entourage& e) {
  auto g = std::dynamic_pointer_cast<const GridSpace>(e.space());
  if (!g || g->dim() != 1 || std::abs(g->min()[0]) > 1e-12)
    throw InvalidInput("ray entourage must live on a 1-D grid starting at 0");
  return g;
}

}  // namespace

Entourage interval_completion(const Entourage& m) {
  ray_sample(m);
  const auto& nb = m.neighbourhoods();
  const std::size_t n = nb.size();
  // Indices of a 1-D grid are ordered like the coordinates.
  std::vector<long> lo(n, long(n)), hi(n, -1);
  for (std::size_t a = 0; a < n; ++a)
    for (Index x : nb[a]) {
      // Pair (x, a): x <= u <= v <= a, or a <= v <= u <= x.
      if (x <= a) {
        for (std::size_t v = x; v <= a; ++v) lo[v] = std::min(lo[v], long(x));
      } else {
        for (std::size_t v = a; v <= x; ++v) hi[v] = std::max(hi[v], long(x));
      }
    }
  std::vector<IndexSet> out(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (lo[v] <= long(v))
      for (long u = lo[v]; u <= long(v); ++u) out[v].push_back(Index(u));
    if (hi[v] >= long(v))
      for (long u = long(v); u <= hi[v]; ++u) out[v].push_back(Index(u));
  }
  return Entourage::from_neighbourhoods(m.space(), std::move(out));
}

RayCellCover ray_cell_cover(unsigned n, const Entourage& e, double region) {
  auto line = ray_sample(e);
  if (!(region >= 0) || region > line->max()[0] + 1e-9)
    throw InvalidInput("region bound must lie within the 1-D sample");
  RayCellCover out;
  const Entourage augmented = unite(symmetrize(e), Entourage::radius(line, 1.0, true));
  out.e_tilde = interval_completion(augmented);
  const double step = line->step();
  const std::size_t top = std::size_t(std::floor(region / step + 1e-9));  // last 1-D index in the region

  // Shells.
  out.shell.assign(line->size(), ~0u);
  IndexSet k_set{0};
  out.shell[0] = 0;
  out.kappa.push_back(0.0);
  std::size_t reached = 1;
  for (unsigned i = 1; reached <= top || out.shell[top] == ~0u; ++i) {
    IndexSet next = out.e_tilde.image(k_set);
    if (next.size() == k_set.size())
      throw ResourceLimit("ray shells stop growing before covering the region (K_" + std::to_string(i) + ")");
    for (Index p : next)
      if (out.shell[p] == ~0u) {
        out.shell[p] = i;
        if (p <= top) ++reached;
      }
    k_set = std::move(next);
    out.kappa.push_back(line->coord(k_set.back())[0]);
    if (reached > top) break;
  }

  const unsigned dims = std::max(1u, n);
  out.space = std::make_shared<GridSpace>(std::vector<double>(dims, 0.0), std::vector<double>(dims, double(top) * step),
                                          step);
  const auto& grid = *out.space;
  std::vector<std::vector<IndexSet>> families;
  if (n == 0) {
    std::map<unsigned, IndexSet> bands;
    for (std::size_t p = 0; p <= top; ++p) bands[out.shell[p]].push_back(Index(p));
    families.emplace_back();
    for (auto& [s, set] : bands) families[0].push_back(std::move(set));
  } else {
    std::vector<std::map<std::vector<unsigned>, IndexSet>> cells(n + 1);
    std::vector<unsigned> js(n);
    for (std::size_t p = 0; p < grid.size(); ++p) {
      const auto k = grid.lattice(Index(p));
      for (unsigned f = 0; f <= n; ++f) {
        bool ok = true;
        for (unsigned c = 0; c < n && ok; ++c) {
          // The point lies in U_j for j in [s, s+n-1]; pick the one with j = f mod n+1.
          const unsigned s = out.shell[k[c]];
          const unsigned j = s + (f + (n + 1) - s % (n + 1)) % (n + 1);
          ok = j <= s + n - 1;
          js[c] = j;
        }
        if (ok) cells[f][js].push_back(Index(p));
      }
    }
    families.resize(n + 1);
    for (unsigned f = 0; f <= n; ++f)
      for (auto& [key, set] : cells[f]) families[f].push_back(std::move(set));
  }

  TransformResult& r = out.result;
  r.cover = canonical(colored_cover(out.space, families));
  auto unc = uncovered_point(r.cover);
  r.certificate.push_back(check_eq("family_count", (long long)r.cover.family_count(), n == 0 ? 1 : n + 1));
  r.certificate.push_back(check_true("covers", !unc, unc ? Json{{"point", *unc}} : Json(nullptr)));
  r.certificate.push_back(check_le("multiplicity", double(multiplicity(r.cover)), double(n == 0 ? 1 : n + 1)));
  if (n == 0) return out;

  // Families against E~ x ... x E~ on the cell sample.
  const auto& nb1 = out.e_tilde.neighbourhoods();
  std::vector<IndexSet> nb(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const auto k = grid.lattice(Index(p));
    std::vector<std::vector<Index>> factors(n);
    for (unsigned c = 0; c < n; ++c)
      for (Index u : nb1[k[c]])
        if (u <= top) factors[c].push_back(u);
    std::vector<std::size_t> pos(n, 0);
    std::vector<std::size_t> lat(n);
    bool empty = std::any_of(factors.begin(), factors.end(), [](const auto& f) { return f.empty(); });
    while (!empty) {
      for (unsigned c = 0; c < n; ++c) lat[c] = factors[c][pos[c]];
      nb[p].push_back(grid.index_of(lat));
      unsigned c = n;
      while (c-- > 0) {
        if (++pos[c] < factors[c].size()) break;
        pos[c] = 0;
      }
      if (c == ~0u) break;
    }
  }
  const Entourage product = Entourage::from_neighbourhoods(out.space, std::move(nb));
  auto dis = disjointness_violation(r.cover, product);
  r.certificate.push_back(check_true("families_disjoint_product", !dis, dis ? witness_json(*dis) : Json(nullptr)));

  // Each set is a product, so its square lies in (E~^{x n})^{3n+6} iff every
  // coordinate projection squared lies in E~^{3n+6}.
  const Entourage bound = power(out.e_tilde, 3 * n + 6);
  Json bad = nullptr;
  for (std::size_t s = 0; s < r.cover.sets.size() && bad.is_null(); ++s) {
    for (unsigned c = 0; c < n && bad.is_null(); ++c) {
      IndexSet proj;
      for (Index p : r.cover.sets[s]) proj.push_back(Index(grid.lattice(p)[c]));
      normalize(proj);
      for (Index u : proj)
        if (!is_subset(proj, bound.of(u))) {
          bad = Json{{"set", s}, {"coordinate", c}};
          break;
        }
    }
  }
  r.certificate.push_back(check_true("bounded_by_power_3n_plus_6", bad.is_null(), bad));
  return out;
}

// ---------------------------------------------------------------------------

unsigned SimplicialComplex::dimension() const {
  unsigned d = 0;
  for (const auto& s : simplices) d = std::max(d, unsigned(s.size()) - 1);
  return d;
}

namespace {

std::vector<std::vector<Index>> all_faces(const SimplicialComplex& k, std::size_t size) {
  std::set<std::vector<Index>> faces;
  for (auto s : k.simplices) {
    std::sort(s.begin(), s.end());
    if (s.size() < size) continue;
    std::vector<bool> mask(s.size(), false);
    std::fill(mask.begin(), mask.begin() + std::ptrdiff_t(size), true);
    do {
      std::vector<Index> f;
      for (std::size_t t = 0; t < s.size(); ++t)
        if (mask[t]) f.push_back(s[t]);
      faces.insert(f);
    } while (std::prev_permutation(mask.begin(), mask.end()));
  }
  return {faces.begin(), faces.end()};
}

}  // namespace

unsigned SimplicialComplex::stability() const {
  for (unsigned k = dimension(); k >= 1; --k) {
    const auto faces = all_faces(*this, k + 1);
    for (std::size_t a = 0; a < faces.size(); ++a)
      for (std::size_t b = a + 1; b < faces.size(); ++b)
        if (set_intersection(faces[a], faces[b]).size() == k) return k;
  }
  return 0;
}

double star_lambda(unsigned k) {
  if (k == 0) throw InvalidInput("star Lebesgue bound needs k >= 1");
  return 1.0 / std::sqrt(2.0 * k * (k + 1.0));
}

StarCover star_cover(const SimplicialComplex& k, unsigned declared_stability, unsigned resolution) {
  if (k.simplices.empty() || k.vertex_count == 0) throw InvalidInput("star cover needs a non-empty complex");
  if (resolution == 0) throw InvalidInput("sample resolution must be positive");
  for (const auto& s : k.simplices) {
    if (s.empty()) throw InvalidInput("empty simplex");
    for (Index v : s)
      if (v >= k.vertex_count) throw InvalidInput("simplex vertex out of range");
    std::vector<Index> t(s);
    normalize(t);
    if (t.size() != s.size()) throw InvalidInput("simplex repeats a vertex");
  }
  StarCover out;
  const unsigned dim = k.dimension();
  const unsigned computed = k.stability();
  const unsigned effective = computed >= 1 ? computed : dim;
  if (declared_stability != effective) {
    std::string msg = "declared stability " + std::to_string(declared_stability) + " but the complex has " +
                      std::to_string(effective);
    // Name a pair of (declared)-simplices meeting in a (declared-1)-face when one exists.
    if (declared_stability >= 1 && declared_stability <= dim) {
      const auto faces = all_faces(k, declared_stability + 1);
      bool found = false;
      for (std::size_t a = 0; a < faces.size() && !found; ++a)
        for (std::size_t b = a + 1; b < faces.size() && !found; ++b)
          if (set_intersection(faces[a], faces[b]).size() == declared_stability) found = true;
      if (!found) msg += "; no two " + std::to_string(declared_stability) + "-simplices share a facet";
    }
    throw ContractViolation(msg);
  }
  out.stability = effective;
  out.lambda = star_lambda(std::max(1u, dim));

  // Barycentric lattice of each maximal simplex, shared faces merged.
  std::map<std::vector<std::pair<Index, unsigned>>, std::size_t> index;
  std::vector<std::vector<double>> coords;
  for (const auto& s : k.simplices) {
    const std::size_t d = s.size();
    std::vector<unsigned> c(d, 0);
    std::function<void(std::size_t, unsigned)> fill = [&](std::size_t t, unsigned left) {
      if (t + 1 == d) {
        c[t] = left;
        std::vector<std::pair<Index, unsigned>> key;
        for (std::size_t u = 0; u < d; ++u)
          if (c[u]) key.emplace_back(s[u], c[u]);
        std::sort(key.begin(), key.end());
        if (index.emplace(key, coords.size()).second) {
          std::vector<double> lam(k.vertex_count, 0.0);
          for (auto [v, w] : key) lam[v] = double(w) / resolution;
          coords.push_back(std::move(lam));
        }
        return;
      }
      for (unsigned w = 0; w <= left; ++w) {
        c[t] = w;
        fill(t + 1, left - w);
      }
    };
    fill(0, resolution);
  }
  out.barycentric = coords;
  std::vector<std::vector<double>> scaled = coords;
  for (auto& p : scaled)
    for (double& x : p) x /= std::sqrt(2.0);
  out.space = std::make_shared<EuclideanSpace>(std::move(scaled));

  std::vector<IndexSet> stars(k.vertex_count);
  for (std::size_t p = 0; p < out.barycentric.size(); ++p)
    for (std::size_t v = 0; v < k.vertex_count; ++v)
      if (out.barycentric[p][v] > 0) stars[v].push_back(Index(p));
  TransformResult& r = out.result;
  r.cover.space = out.space;
  for (auto& s : stars)
    if (!s.empty()) r.cover.sets.push_back(std::move(s));
  auto unc = uncovered_point(r.cover);
  r.certificate.push_back(check_true("covers", !unc, unc ? Json{{"point", *unc}} : Json(nullptr)));
  r.certificate.push_back(check_eq("multiplicity", (long long)multiplicity(r.cover), dim + 1));
  r.certificate.push_back(check_le("mesh", mesh(r.cover), 2.0));
  r.certificate.push_back(check_ge("lebesgue", lebesgue_number(r.cover), out.lambda, 1e-9));
  return out;
}

}  // namespace coarse
