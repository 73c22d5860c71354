#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace oracle {

namespace {

Sets distinct(const Sets& sets) {
  std::set<std::vector<Index>> seen;
  for (auto s : sets) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    if (!s.empty()) seen.insert(s);
  }
  return Sets(seen.begin(), seen.end());
}

bool holds(const std::vector<Index>& s, Index p) { return std::find(s.begin(), s.end(), p) != s.end(); }

}  // namespace

std::size_t multiplicity(const Sets& sets, std::size_t n) {
  const Sets u = distinct(sets);
  std::size_t best = 0;
  for (Index p = 0; p < n; ++p) {
    std::size_t k = 0;
    for (const auto& s : u) k += holds(s, p);
    best = std::max(best, k);
  }
  return best;
}

std::size_t multiplicity_by_subfamilies(const Sets& sets) {
  const Sets u = distinct(sets);
  std::size_t best = 0;
  for (std::size_t mask = 1; mask < (std::size_t(1) << u.size()); ++mask) {
    std::vector<Index> common;
    bool first = true;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (!(mask >> i & 1)) continue;
      if (first) {
        common = u[i];
        first = false;
        continue;
      }
      std::vector<Index> next;
      for (Index p : common)
        if (holds(u[i], p)) next.push_back(p);
      common = next;
    }
    if (!common.empty()) best = std::max<std::size_t>(best, __builtin_popcountll(mask));
  }
  return best;
}

double mesh(const Sets& sets, const Dist& d) {
  double best = 0;
  for (const auto& s : sets)
    for (Index a : s)
      for (Index b : s) best = std::max(best, d(a, b));
  return best;
}

double lebesgue(const Sets& sets, std::size_t n, const Dist& d) {
  double worst = std::numeric_limits<double>::infinity();
  for (Index x = 0; x < n; ++x) {
    double here = 0;
    for (const auto& s : sets) {
      if (!holds(s, x)) continue;
      double gap = std::numeric_limits<double>::infinity();
      for (Index y = 0; y < n; ++y)
        if (!holds(s, y)) gap = std::min(gap, d(x, y));
      here = std::max(here, gap);
    }
    worst = std::min(worst, here);
  }
  return worst;
}

bool covers(const Sets& sets, std::size_t n) {
  std::vector<bool> hit(n, false);
  for (const auto& s : sets)
    for (Index p : s) hit[p] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

bool appetite(const Sets& sets, std::size_t n, const Dist& d, double r, bool closed) {
  for (Index x = 0; x < n; ++x) {
    bool ok = false;
    for (const auto& s : sets) {
      bool inside = true;
      for (Index y = 0; y < n && inside; ++y) {
        const double e = d(x, y);
        const bool in_ball = closed ? e <= r + 1e-12 : e < r - 1e-12;
        if (in_ball && !holds(s, y)) inside = false;
      }
      if (inside) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

bool separated(const Sets& family, const Dist& d, double r, bool closed) {
  const Sets u = distinct(family);
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = i + 1; j < u.size(); ++j)
      for (Index a : u[i])
        for (Index b : u[j]) {
          const double e = d(a, b);
          if (closed ? e <= r + 1e-12 : e < r - 1e-12) return false;
        }
  return true;
}

Relation compose(const Relation& a, const Relation& b) {
  Relation out;
  for (auto [x, y] : a)
    for (auto [y2, z] : b)
      if (y == y2) out.emplace(x, z);
  return out;
}

Relation inverse(const Relation& a) {
  Relation out;
  for (auto [x, y] : a) out.emplace(y, x);
  return out;
}

double hyperbolic_cosh_law(double r1, double phi1, double r2, double phi2) {
  const double c = std::cosh(r1) * std::cosh(r2) - std::sinh(r1) * std::sinh(r2) * std::cos(phi1 - phi2);
  return std::acosh(std::max(1.0, c));
}

double centroid_facet_distance(unsigned k) {
  const std::size_t dim = k + 1;
  std::vector<std::vector<double>> v(dim, std::vector<double>(dim, 0.0));
  for (std::size_t i = 0; i < dim; ++i) v[i][i] = 1.0 / std::sqrt(2.0);
  std::vector<double> c(dim, 0.0);
  for (const auto& p : v)
    for (std::size_t i = 0; i < dim; ++i) c[i] += p[i] / double(dim);
  // Facet opposite vertex 0: affine hull of v[1..k]. Gram-Schmidt on v[j]-v[1].
  std::vector<std::vector<double>> basis;
  for (std::size_t j = 2; j < dim; ++j) {
    std::vector<double> w(dim);
    for (std::size_t i = 0; i < dim; ++i) w[i] = v[j][i] - v[1][i];
    for (const auto& b : basis) {
      double dot = 0;
      for (std::size_t i = 0; i < dim; ++i) dot += w[i] * b[i];
      for (std::size_t i = 0; i < dim; ++i) w[i] -= dot * b[i];
    }
    double nrm = 0;
    for (double x : w) nrm += x * x;
    nrm = std::sqrt(nrm);
    for (double& x : w) x /= nrm;
    basis.push_back(w);
  }
  std::vector<double> off(dim);
  for (std::size_t i = 0; i < dim; ++i) off[i] = c[i] - v[1][i];
  for (const auto& b : basis) {
    double dot = 0;
    for (std::size_t i = 0; i < dim; ++i) dot += off[i] * b[i];
    for (std::size_t i = 0; i < dim; ++i) off[i] -= dot * b[i];
  }
  double nrm = 0;
  for (double x : off) nrm += x * x;
  return std::sqrt(nrm);
}

std::size_t sperner_cells(unsigned n, unsigned q, const std::function<unsigned(const std::vector<int>&)>& label) {
  std::size_t count = 0;
  auto full = [&](const std::vector<std::vector<int>>& cell) {
    std::set<unsigned> seen;
    for (const auto& p : cell) seen.insert(label(p));
    return seen.size() == n + 1;
  };
  const int Q = int(q);
  if (n == 1) {
    for (int a = 0; a < Q; ++a) count += full({{Q - a, a}, {Q - a - 1, a + 1}});
  } else if (n == 2) {
    // Points (l0, l1, l2) with l1 = i, l2 = j; upward and downward triangles.
    for (int i = 0; i < Q; ++i)
      for (int j = 0; i + j < Q; ++j) {
        count += full({{Q - i - j, i, j}, {Q - i - j - 1, i + 1, j}, {Q - i - j - 1, i, j + 1}});
        if (i + j + 2 <= Q)
          count += full({{Q - i - j - 1, i + 1, j}, {Q - i - j - 1, i, j + 1}, {Q - i - j - 2, i + 1, j + 1}});
      }
  }
  return count;
}

Relation block_support(const CMatrix& m, const std::vector<std::size_t>& dims, double tol) {
  std::vector<std::size_t> off(dims.size() + 1, 0);
  for (std::size_t b = 0; b < dims.size(); ++b) off[b + 1] = off[b] + dims[b];
  Relation out;
  for (std::size_t b1 = 0; b1 < dims.size(); ++b1)
    for (std::size_t b2 = 0; b2 < dims.size(); ++b2) {
      double s = 0;
      for (std::size_t i = off[b1]; i < off[b1 + 1]; ++i)
        for (std::size_t j = off[b2]; j < off[b2 + 1]; ++j) s += std::norm(m[i][j]);
      if (std::sqrt(s) > tol) out.emplace(Index(b1), Index(b2));
    }
  return out;
}

}  // namespace oracle
