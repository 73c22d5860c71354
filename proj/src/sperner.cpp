#include "coarse/sperner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "coarse/errors.hpp"

namespace coarse {

SimplexGrid::SimplexGrid(unsigned n, unsigned q) : n_(n), q_(q) {
  if (n == 0) throw InvalidInput("simplex grid needs dimension >= 1");
  if (q == 0) throw InvalidInput("simplex grid needs resolution >= 1");
  // Non-increasing sequences q >= y_1 >= ... >= y_n >= 0.
  std::vector<int> y(n);
  auto rec = [&](auto&& self, unsigned t, int cap) -> void {
    if (t == n_) {
      index_.emplace(y, vertices_.size());
      vertices_.push_back(y);
      return;
    }
    for (int v = cap; v >= 0; --v) {
      y[t] = v;
      self(self, t + 1, v);
    }
  };
  rec(rec, 0, int(q));
  std::sort(vertices_.begin(), vertices_.end());
  index_.clear();
  for (std::size_t i = 0; i < vertices_.size(); ++i) index_.emplace(vertices_[i], i);

  std::vector<unsigned> perm(n);
  for (const auto& b : vertices_) {
    std::iota(perm.begin(), perm.end(), 0u);
    do {
      std::vector<std::size_t> cell{index_.at(b)};
      std::vector<int> cur = b;
      bool ok = true;
      for (unsigned p : perm) {
        ++cur[p];
        auto it = index_.find(cur);
        if (it == index_.end()) {
          ok = false;
          break;
        }
        cell.push_back(it->second);
      }
      if (ok) cells_.push_back(std::move(cell));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}

std::optional<std::size_t> SimplexGrid::find(const std::vector<int>& y) const {
  auto it = index_.find(y);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<int> SimplexGrid::barycentric(std::size_t i) const {
  const auto& y = vertices_[i];
  std::vector<int> lam(n_ + 1);
  lam[0] = int(q_) - y[0];
  for (unsigned k = 1; k < n_; ++k) lam[k] = y[k - 1] - y[k];
  lam[n_] = y[n_ - 1];
  return lam;
}

void SimplexGrid::set_labels(std::vector<unsigned> labels) {
  if (labels.size() != vertices_.size()) throw InvalidInput("label count does not match the vertex count");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] > n_) throw InvalidInput("label out of range at vertex " + std::to_string(i));
    if (barycentric(i)[labels[i]] == 0)
      throw InvalidInput("labelling is not Sperner-admissible at vertex " + std::to_string(i) + " (label " +
                         std::to_string(labels[i]) + " names a vertex outside its carrier face)");
  }
  labels_ = std::move(labels);
}

SpernerResult sperner_find(const SimplexGrid& g) {
  if (g.labels().size() != g.vertex_count()) throw InvalidInput("simplex grid has no labels");
  SpernerResult r;
  std::vector<char> seen(g.n() + 1);
  for (const auto& cell : g.cells()) {
    std::fill(seen.begin(), seen.end(), 0);
    for (std::size_t v : cell) seen[g.labels()[v]] = 1;
    if (std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; })) {
      if (r.fully_labelled == 0) r.cell = cell;
      ++r.fully_labelled;
    }
  }
  if (r.fully_labelled == 0) throw InternalError("no fully labelled cell under an admissible labelling");
  return r;
}

// ---------------------------------------------------------------------------

std::optional<Index> PnSample::find(const std::vector<long>& y) const {
  auto it = index.find(y);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

PnSample pn_sample(unsigned n, double window, unsigned m) {
  if (n == 0) throw InvalidInput("P_n sample needs n >= 1");
  if (m == 0 || !(window > 0)) throw InvalidInput("P_n sample needs m >= 1 and a positive window");
  PnSample s;
  s.n = n;
  s.m = m;
  s.window = window;
  const long top = long(std::floor(window * m + 1e-9));
  std::vector<long> y(n);
  // x_n = y_n/m in (0, window], 0 <= x_i <= x_n.
  auto rec = [&](auto&& self, unsigned t) -> void {
    if (t + 1 == n) {
      s.index.emplace(y, Index(s.lattice.size()));
      s.lattice.push_back(y);
      return;
    }
    for (long v = 0; v <= y[n - 1]; ++v) {
      y[t] = v;
      self(self, t + 1);
    }
  };
  for (long last = 1; last <= top; ++last) {
    y[n - 1] = last;
    rec(rec, 0);
  }
  std::vector<std::vector<double>> coords;
  coords.reserve(s.lattice.size());
  for (const auto& l : s.lattice) {
    std::vector<double> c(n);
    for (unsigned k = 0; k < n; ++k) c[k] = double(l[k]) / m;
    coords.push_back(std::move(c));
  }
  s.space = std::make_shared<EuclideanSpace>(std::move(coords));
  return s;
}

namespace {

long floor_div(long a, long b) {
  long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

LowerBoundCertificate simplex_lower_bound_check(const Cover& c, const PnSample& sample) {
  check_well_formed(c);
  if (c.space != sample.space) throw InvalidInput("cover does not live over the P_n sample");
  const unsigned n = sample.n;
  const long m = sample.m;
  if (double(m) <= std::sqrt(double(n))) throw InvalidInput("P_n sample step must be below 1/sqrt(n)");
  if (auto x = uncovered_point(c)) throw ContractViolation("cover misses point " + std::to_string(*x));
  if (auto x = appetite_violation(c, Entourage::radius(sample.space, 1.0, true)))
    throw ContractViolation("cover lacks appetite {d <= 1} at point " + std::to_string(*x));

  // Coordinate projections of every set, in lattice units.
  std::vector<std::vector<std::vector<long>>> proj(c.sets.size(), std::vector<std::vector<long>>(n));
  for (std::size_t s = 0; s < c.sets.size(); ++s) {
    for (Index p : c.sets[s])
      for (unsigned k = 0; k < n; ++k) proj[s][k].push_back(sample.lattice[p][k]);
    for (auto& v : proj[s]) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
  }
  // E_k[A] with E_k the k-th coordinate projection of the cover entourage.
  auto step = [&](unsigned k, const std::set<long>& a) {
    std::set<long> out;
    for (std::size_t s = 0; s < c.sets.size(); ++s) {
      const auto& pk = proj[s][k];
      if (std::any_of(pk.begin(), pk.end(), [&](long v) { return a.count(v) != 0; })) out.insert(pk.begin(), pk.end());
    }
    return out;
  };
  std::set<long> chain{0};
  for (unsigned k = 0; k + 1 < n; ++k) chain = step(k, chain);
  std::set<long> widened;
  for (long v : chain)
    for (long d = -m; d <= m; ++d)
      if (v + d >= 0) widened.insert(v + d);
  chain = step(n - 1, widened);
  const long top = chain.empty() ? 0 : *chain.rbegin();
  long r = std::max<long>(2, floor_div(top, m) + 1);  // r > top/m
  if (double(r) > sample.window + 1e-9)
    throw ContractViolation("cover is not uniformly bounded inside the sample window: the simplex needs r = " +
                            std::to_string(r) + " > window " + std::to_string(sample.window));

  // Face conditions in lattice units (x_0 := 0):
  //   F_0: x_1 = 0 (n >= 2); F_j: x_j = x_{j+1}; F_{n-1}: 0 <= x_n - x_{n-1} <= 1; F_n: x_n = r.
  auto on_face = [&](const std::vector<long>& x, unsigned i) {
    if (i == n) return x[n - 1] == r * m;
    if (i == n - 1) {
      long prev = n >= 2 ? x[n - 2] : 0;
      return x[n - 1] - prev >= 0 && x[n - 1] - prev <= m;
    }
    if (i == 0) return x[0] == 0;
    return x[i - 1] == x[i];
  };
  std::vector<unsigned> g(c.sets.size());
  for (std::size_t s = 0; s < c.sets.size(); ++s) {
    unsigned choice = n + 1;
    for (unsigned i = 0; i <= n && choice > n; ++i) {
      bool meets = false;
      for (Index p : c.sets[s])
        if (on_face(sample.lattice[p], i)) {
          meets = true;
          break;
        }
      if (!meets) choice = i;
    }
    if (choice > n)
      throw InternalError("set " + std::to_string(s) + " meets every face of the simplex (r = " + std::to_string(r) +
                          ")");
    g[s] = choice;
  }

  // Kuhn resolution so that snapped cell vertices stay within distance 1.
  const double slack = 1.0 - std::sqrt(double(n)) / double(m);
  const unsigned q = unsigned(std::ceil(double(r) * std::sqrt(double(n)) / slack - 1e-12));
  SimplexGrid grid(n, std::max(1u, q));
  // Simplex vertices in lattice units: a_j = (0 x j, r, ..., r), a_n = (0, ..., 0, 1).
  std::vector<std::vector<long>> a(n + 1, std::vector<long>(n, 0));
  for (unsigned j = 0; j < n; ++j)
    for (unsigned k = j; k < n; ++k) a[j][k] = r * m;
  a[n][n - 1] = m;
  const auto ball = Entourage::radius(sample.space, 1.0, true);
  const auto inc = c.incidence();
  std::vector<Index> snapped(grid.vertex_count());
  std::vector<std::size_t> owner(grid.vertex_count());
  std::vector<unsigned> labels(grid.vertex_count());
  for (std::size_t v = 0; v < grid.vertex_count(); ++v) {
    const auto beta = grid.barycentric(v);
    std::vector<long> x(n, 0);
    for (unsigned k = 0; k < n; ++k) {
      long acc = 0;
      for (unsigned j = 0; j <= n; ++j) acc += long(beta[j]) * a[j][k];
      x[k] = floor_div(acc, long(grid.q()));
    }
    auto p = sample.find(x);
    if (!p) throw InternalError("snapped simplex vertex is not a sample point");
    snapped[v] = *p;
    const IndexSet nb = ball.of(*p);
    std::optional<std::size_t> u;
    for (std::size_t s : inc[*p])
      if (is_subset(nb, c.sets[s])) {
        u = s;
        break;
      }
    if (!u) throw ContractViolation("cover lacks appetite {d <= 1} at point " + std::to_string(*p));
    owner[v] = *u;
    labels[v] = g[*u];
  }
  try {
    grid.set_labels(labels);
  } catch (const InvalidInput& e) {
    throw InternalError(std::string("face-avoiding labels are not admissible: ") + e.what());
  }
  const SpernerResult found = sperner_find(grid);

  LowerBoundCertificate cert;
  cert.point = snapped[found.cell.front()];
  for (std::size_t v : found.cell) cert.sets.push_back(owner[v]);
  std::sort(cert.sets.begin(), cert.sets.end());
  cert.r = r;
  cert.resolution = grid.q();
  cert.fully_labelled = found.fully_labelled;
  const bool ok = verify_lower_bound(c, cert, n);
  cert.checks.push_back(check_true("point_in_n_plus_1_sets", ok, Json{{"point", cert.point}, {"sets", cert.sets}}));
  cert.checks.push_back(check_true("fully_labelled_count_odd", found.fully_labelled % 2 == 1,
                                   Json{{"count", found.fully_labelled}}));
  return cert;
}

bool verify_lower_bound(const Cover& c, const LowerBoundCertificate& cert, unsigned n) {
  std::set<IndexSet> distinct;
  for (std::size_t s : cert.sets) {
    if (s >= c.sets.size() || !contains(c.sets[s], cert.point)) return false;
    distinct.insert(c.sets[s]);
  }
  return distinct.size() >= n + 1;
}

}  // namespace coarse
