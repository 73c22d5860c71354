#include "coarse/fixtures.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "coarse/errors.hpp"

namespace coarse {

std::shared_ptr<const EuclideanSpace> random_points(Rng& rng, std::size_t count, std::size_t dim, double extent) {
  std::vector<std::vector<double>> pts(count, std::vector<double>(dim));
  for (auto& p : pts)
    for (auto& c : p) c = rng.uniform(0.0, extent);
  return std::make_shared<EuclideanSpace>(std::move(pts));
}

Cover shifted_cube_cover(const std::shared_ptr<const EuclideanSpace>& space, double a,
                         const std::vector<double>& shift) {
  const std::size_t n = space->dim();
  if (shift.size() != n) throw InvalidInput("shift dimension does not match the space");
  if (!(a > 0)) throw InvalidInput("cube edge must be positive");
  std::vector<std::vector<IndexSet>> fams(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double off = double(i) / double(n + 1);
    std::map<std::vector<long>, IndexSet> cubes;
    for (Index p = 0; p < space->size(); ++p) {
      const auto& x = space->coord(p);
      std::vector<long> z(n);
      bool inside = true;
      for (std::size_t c = 0; c < n && inside; ++c) {
        const double t = (x[c] - shift[c]) / a - off;
        z[c] = std::lround(t);
        inside = std::abs(t - double(z[c])) < 0.5;
      }
      if (inside) cubes[z].push_back(p);
    }
    for (auto& [z, s] : cubes) fams[i].push_back(std::move(s));
  }
  return colored_cover(space, fams);
}

AppetiteFixture random_appetite_fixture(Rng& rng, unsigned n, std::size_t count, double r) {
  if (n == 0) throw InvalidInput("appetite fixture needs n >= 1");
  AppetiteFixture f;
  f.n = n;
  f.r = r;
  const double a = 2.0 * (n + 1) * (n + 1) * r * rng.uniform(1.1, 1.6);
  f.space = random_points(rng, count, n, a * rng.uniform(1.5, 3.0));
  std::vector<double> shift(n);
  for (auto& s : shift) s = rng.uniform(0.0, a);
  f.cover = shifted_cube_cover(f.space, a, shift);
  return f;
}

UnionFixture random_union_fixture(Rng& rng) {
  const bool planar = rng.chance(0.5);
  const std::size_t width = 30 + rng.below(31);
  const std::size_t height = planar ? 3 + rng.below(6) : 1;
  const std::size_t split = width / 3 + rng.below(width / 3);
  const std::size_t s = 2 + rng.below(4);
  const std::size_t t = 2 * s + 1 + rng.below(3);

  std::vector<double> lo{0.0}, hi{double(width - 1)};
  if (planar) {
    lo.push_back(0.0);
    hi.push_back(double(height - 1));
  }
  auto grid = std::make_shared<GridSpace>(lo, hi, 1.0);
  auto column = [&](std::size_t x) {
    IndexSet out;
    for (std::size_t y = 0; y < height; ++y)
      out.push_back(planar ? grid->index_of({x, y}) : grid->index_of({x}));
    return out;
  };
  auto stripes = [&](std::size_t from, std::size_t to, std::size_t w) {
    std::vector<std::vector<IndexSet>> fams(2);
    IndexSet domain;
    for (std::size_t x0 = from, k = 0; x0 < to; x0 += w, ++k) {
      IndexSet set;
      for (std::size_t x = x0; x < std::min(to, x0 + w); ++x) {
        const IndexSet col = column(x);
        set.insert(set.end(), col.begin(), col.end());
      }
      normalize(set);
      domain.insert(domain.end(), set.begin(), set.end());
      fams[k % 2].push_back(std::move(set));
    }
    normalize(domain);
    Cover c = colored_cover(grid, fams);
    c.domain = std::move(domain);
    return c;
  };

  UnionFixture f;
  f.space = grid;
  f.a = stripes(0, split, s);
  f.b = stripes(split, width, t);
  f.l = Entourage::radius(grid, 1.0, true);
  return f;
}

std::shared_ptr<const TreeSpace> random_tree(Rng& rng, std::size_t nodes) {
  std::vector<std::pair<Index, Index>> edges;
  for (std::size_t v = 1; v < nodes; ++v) edges.emplace_back(Index(rng.below(v)), Index(v));
  return std::make_shared<TreeSpace>(std::move(edges), nodes);
}

Decomposition random_decomposition(Rng& rng, std::size_t blocks, std::size_t max_dim, bool allow_empty) {
  if (blocks == 0 || max_dim == 0) throw InvalidInput("decomposition needs at least one block and dimension");
  std::vector<IndexSet> bs(blocks);
  std::vector<std::size_t> dims(blocks, 0);
  Index next = 0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const bool empty = allow_empty && b > 0 && rng.chance(0.2);
    if (empty) continue;
    const std::size_t pts = 1 + rng.below(3);
    for (std::size_t k = 0; k < pts; ++k) bs[b].push_back(next++);
    dims[b] = 1 + rng.below(max_dim);
  }
  std::vector<std::vector<double>> coords;
  for (Index p = 0; p < next; ++p) coords.push_back({double(p)});
  return Decomposition(std::make_shared<EuclideanSpace>(std::move(coords)), std::move(bs), std::move(dims));
}

Matrix random_operator(Rng& rng, const Decomposition& d, std::size_t band, double density) {
  const auto total = Eigen::Index(d.total_dim());
  Matrix m = Matrix::Zero(total, total);
  for (std::size_t b1 = 0; b1 < d.block_count(); ++b1)
    for (std::size_t b2 = 0; b2 < d.block_count(); ++b2) {
      const std::size_t gap = b1 > b2 ? b1 - b2 : b2 - b1;
      if (gap > band || !rng.chance(density)) continue;
      for (std::size_t i = 0; i < d.dim(b1); ++i)
        for (std::size_t j = 0; j < d.dim(b2); ++j)
          m(Eigen::Index(d.offset(b1) + i), Eigen::Index(d.offset(b2) + j)) =
              std::complex<double>(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    }
  return m;
}

Vector random_vector(Rng& rng, const Decomposition& d, double density) {
  Vector v = Vector::Zero(Eigen::Index(d.total_dim()));
  for (std::size_t b = 0; b < d.block_count(); ++b) {
    if (!rng.chance(density)) continue;
    for (std::size_t i = 0; i < d.dim(b); ++i)
      v(Eigen::Index(d.offset(b) + i)) = std::complex<double>(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  }
  return v;
}

AdjointFixture random_adjoint_fixture(Rng& rng, std::size_t blocks) {
  Decomposition source = random_decomposition(rng, blocks, 3);
  const std::size_t tb = 1 + rng.below(blocks);
  std::vector<Index> f(blocks);
  for (auto& c : f) c = Index(rng.below(tb));
  std::vector<std::size_t> need(tb, 0), dims(tb);
  for (std::size_t b = 0; b < blocks; ++b) need[f[b]] += source.dim(b);
  std::vector<IndexSet> tblocks(tb);
  std::vector<std::vector<double>> coords;
  for (std::size_t c = 0; c < tb; ++c) {
    dims[c] = std::max<std::size_t>(1, need[c] + rng.below(2));
    tblocks[c] = {Index(c)};
    coords.push_back({double(c)});
  }
  Decomposition target(std::make_shared<EuclideanSpace>(std::move(coords)), std::move(tblocks), dims);

  Matrix phi = Matrix::Zero(Eigen::Index(target.total_dim()), Eigen::Index(source.total_dim()));
  for (std::size_t c = 0; c < tb; ++c) {
    if (need[c] == 0) continue;
    const auto rows = Eigen::Index(dims[c]), cols = Eigen::Index(need[c]);
    Matrix g(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = std::complex<double>(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
    Eigen::HouseholderQR<Matrix> qr(g);
    const Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
    Eigen::Index col = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
      if (f[b] != c) continue;
      const auto w = Eigen::Index(source.dim(b));
      if (!rng.chance(0.2))
        phi.block(Eigen::Index(target.offset(c)), Eigen::Index(source.offset(b)), rows, w) = q.middleCols(col, w);
      col += w;
    }
  }
  Matrix t = random_operator(rng, source, 1);
  return AdjointFixture{std::move(source), std::move(target), std::move(f), std::move(phi), std::move(t)};
}

std::shared_ptr<const HyperbolicSpace> hyperbolic_disk_sample(Rng& rng, double kappa, double radius,
                                                              std::size_t count, std::size_t clustered) {
  if (!(kappa < 0)) throw InvalidInput("hyperbolic sample needs kappa < 0");
  const double s = std::sqrt(-kappa);
  const double top = std::cosh(s * radius) - 1.0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < count; ++k)
    pts.emplace_back(std::acosh(1.0 + rng.uniform() * top) / s, rng.uniform(0.0, 2.0 * std::numbers::pi));
  for (std::size_t k = 0; k < clustered && count > 0; ++k) {
    const auto [r0, phi0] = pts[rng.below(count)];
    const double r = std::clamp(r0 + rng.uniform(-0.3, 0.3), 0.0, radius);
    const double spread = 0.3 / (std::sinh(s * std::max(r, 1e-9)) / s + 1.0);
    double phi = phi0 + rng.uniform(-spread, spread);
    phi = std::fmod(phi + 2.0 * std::numbers::pi, 2.0 * std::numbers::pi);
    pts.emplace_back(r, phi);
  }
  return std::make_shared<HyperbolicSpace>(kappa, std::move(pts));
}

}  // namespace coarse
