#include <catch_amalgamated.hpp>

#include <cmath>

#include "coarse/errors.hpp"
#include "coarse/fixtures.hpp"
#include "coarse/transforms.hpp"
#include "coarse/witnesses.hpp"
#include "oracles.hpp"

using namespace coarse;

namespace {

std::shared_ptr<GridSpace> line(double lo, double hi, double step = 1.0) {
  return std::make_shared<GridSpace>(std::vector<double>{lo}, std::vector<double>{hi}, step);
}

std::shared_ptr<GridSpace> square(double hi, double step = 1.0) {
  return std::make_shared<GridSpace>(std::vector<double>{0, 0}, std::vector<double>{hi, hi}, step);
}

IndexSet all_points(const Space& s) {
  IndexSet out(s.size());
  for (Index i = 0; i < s.size(); ++i) out[i] = i;
  return out;
}

oracle::Dist dist_of(const SpacePtr& s) {
  return [s](Index a, Index b) { return s->dist(a, b); };
}

bool refines(const Cover& fine, const Cover& coarse_cover) {
  for (const auto& v : fine.sets) {
    bool inside = false;
    for (const auto& u : coarse_cover.sets)
      if (is_subset(v, u)) inside = true;
    if (!inside) return false;
  }
  return true;
}

// Blocks [4k, 4k+3] of a line sample, alternating between two families.
Cover blocks_of_four(const std::shared_ptr<GridSpace>& g) {
  std::vector<std::vector<IndexSet>> fams(2);
  for (Index start = 0, k = 0; start < g->size(); start += 4, ++k) {
    IndexSet b;
    for (Index p = start; p < std::min<Index>(start + 4, Index(g->size())); ++p) b.push_back(p);
    fams[k % 2].push_back(b);
  }
  return colored_cover(g, fams);
}

}  // namespace

TEST_CASE("interior of the whole space and under the diagonal") {
  auto g = square(5);
  IndexSet all = all_points(*g);
  CHECK(interior(all, Entourage::radius(g, 2.0)) == all);
  IndexSet u{0, 3, 7, 8, 20};
  CHECK(interior(u, Entourage::diagonal(g)) == u);
}

TEST_CASE("interior of an interval under an open 2-ball") {
  auto g = line(-5, 15, 0.5);
  IndexSet u;
  for (Index i = 0; i < g->size(); ++i)
    if (g->coord(i)[0] >= 0 && g->coord(i)[0] <= 10) u.push_back(i);
  IndexSet got = interior(u, Entourage::radius(g, 2.0));
  IndexSet want;
  for (Index i = 0; i < g->size(); ++i) {
    bool inside = true;
    for (Index j = 0; j < g->size(); ++j)
      if (g->dist(i, j) < 2.0 && !contains(u, j)) inside = false;
    if (inside) want.push_back(i);
  }
  CHECK(got == want);
  REQUIRE(!got.empty());
  // The (2,8) band, up to one grid step at each end.
  CHECK(std::abs(g->coord(got.front())[0] - 2.0) <= 0.5);
  CHECK(std::abs(g->coord(got.back())[0] - 8.0) <= 0.5);
}

TEST_CASE("expand of the singleton partition under the diagonal is unchanged") {
  auto g = line(0, 9);
  std::vector<IndexSet> singles;
  for (Index i = 0; i < g->size(); ++i) singles.push_back({i});
  Cover c = colored_cover(g, {singles});
  TransformResult r = expand(c, Entourage::diagonal(g));
  CHECK(canonical(r.cover).sets == canonical(c).sets);
  CHECK(all_pass(r.certificate));
}

TEST_CASE("expand of alternating blocks gains appetite") {
  auto g = line(0, 40);
  Cover c = blocks_of_four(g);
  const Entourage l = Entourage::radius(g, 1.0, true);
  TransformResult r = expand(c, l);
  CHECK(all_pass(r.certificate));
  CHECK(has_appetite(r.cover, l));
  CHECK(oracle::appetite(r.cover.sets, g->size(), dist_of(g), 1.0, true));
  CHECK(r.cover.family_count() == 2);
}

TEST_CASE("expand rejects families that are not L^2-disjoint") {
  auto g = line(0, 20);
  Cover c = colored_cover(g, {{{0, 1, 2}, {4, 5}}, {{3}}});
  CHECK_THROWS_AS(expand(c, Entourage::radius(g, 1.0, true)), ContractViolation);
}

TEST_CASE("colorize of the one-set cover with n = 0") {
  auto g = square(4);
  Cover c;
  c.space = g;
  c.sets = {all_points(*g)};
  TransformResult r = colorize(c, Entourage::radius(g, 1.0, true), 0);
  REQUIRE(r.cover.family_count() == 1);
  CHECK(r.cover.sets == c.sets);
}

TEST_CASE("colorize of a cube cover of Z^2 gives three L-disjoint families") {
  auto g = square(40);
  TransformResult cube = cube_cover(g, 30.0);
  const Entourage l = Entourage::radius(g, 1.0, true);
  REQUIRE(has_appetite(cube.cover, power(l, 3)));
  TransformResult r = colorize(cube.cover, l, 2);
  CHECK(all_pass(r.certificate));
  REQUIRE(r.cover.family_count() == 3);
  auto d = dist_of(g);
  for (std::size_t f = 0; f < 3; ++f) CHECK(oracle::separated(family_sets(r.cover, f), d, 1.0, true));
  CHECK(oracle::covers(r.cover.sets, g->size()));
  CHECK(refines(r.cover, cube.cover));
}

TEST_CASE("colorize of two overlapping intervals on a path") {
  auto g = line(0, 20);
  Cover c;
  c.space = g;
  IndexSet a, b;
  for (Index i = 0; i <= 12; ++i) a.push_back(i);
  for (Index i = 8; i <= 20; ++i) b.push_back(i);
  c.sets = {a, b};
  const Entourage l = Entourage::radius(g, 1.0, true);
  TransformResult r = colorize(c, l, 1);
  CHECK(all_pass(r.certificate));
  REQUIRE(r.cover.family_count() == 2);
  for (std::size_t f = 0; f < 2; ++f) CHECK(oracle::separated(family_sets(r.cover, f), dist_of(g), 1.0, true));
  CHECK(refines(r.cover, c));
}

TEST_CASE("colorize reports a point without appetite") {
  auto g = line(0, 20);
  Cover c;
  c.space = g;
  IndexSet a, b;
  for (Index i = 0; i <= 10; ++i) a.push_back(i);
  for (Index i = 11; i <= 20; ++i) b.push_back(i);
  c.sets = {a, b};
  CHECK_THROWS_AS(colorize(c, Entourage::radius(g, 1.0, true), 1), ContractViolation);
}

TEST_CASE("colorize on random appetite fixtures refines and separates") {
  Rng rng(31);
  for (int trial = 0; trial < 8; ++trial) {
    const unsigned n = 1 + unsigned(trial % 2);
    AppetiteFixture f = random_appetite_fixture(rng, n, 120, 1.0);
    const Entourage l = Entourage::radius(f.space, f.r, true);
    TransformResult r = colorize(f.cover, l, n);
    CHECK(all_pass(r.certificate));
    CHECK(r.cover.family_count() == n + 1);
    CHECK(oracle::covers(r.cover.sets, f.space->size()));
    CHECK(refines(r.cover, f.cover));
    for (std::size_t k = 0; k <= n; ++k)
      CHECK(oracle::separated(family_sets(r.cover, k), dist_of(f.space), f.r, true));
  }
}

TEST_CASE("colorize then expand keeps a Lebesgue number of L/(2n+2)") {
  for (unsigned n : {1u, 2u}) {
    auto g = n == 1 ? line(0, 80) : square(40);
    TransformResult cube = cube_cover(g, n == 1 ? 24.0 : 30.0);
    const double lam = lebesgue_number(cube.cover);
    const double rho = (lam - 1e-6) / (n + 1);
    TransformResult col = colorize(cube.cover, Entourage::radius(g, rho, true), n);
    TransformResult ex = expand(col.cover, Entourage::radius(g, rho / 2, true));
    CHECK(all_pass(col.certificate));
    CHECK(all_pass(ex.certificate));
    CHECK(lebesgue_number(ex.cover) >= lam / (2 * n + 2) - 1e-6);
  }
}

TEST_CASE("merge_union of block covers of two halves of a line") {
  auto g = line(0, 100);
  auto half = [&](Index from, Index to) {
    std::vector<std::vector<IndexSet>> fams(2);
    IndexSet dom;
    for (Index s = from, k = 0; s <= to; s += 5, ++k) {
      IndexSet b;
      for (Index p = s; p <= std::min<Index>(s + 4, to); ++p) b.push_back(p);
      dom.insert(dom.end(), b.begin(), b.end());
      fams[k % 2].push_back(b);
    }
    Cover c = colored_cover(g, fams);
    c.domain = dom;
    return c;
  };
  // B blocks of width 12 keep same-family gaps beyond the L D_A L D_A L reach.
  Cover a = half(0, 49);
  std::vector<std::vector<IndexSet>> bf(2);
  IndexSet bdom;
  for (Index s = 50, k = 0; s <= 100; s += 12, ++k) {
    IndexSet b;
    for (Index p = s; p <= std::min<Index>(s + 11, 100); ++p) b.push_back(p);
    bdom.insert(bdom.end(), b.begin(), b.end());
    bf[k % 2].push_back(b);
  }
  Cover b = colored_cover(g, bf);
  b.domain = bdom;
  const Entourage l = Entourage::radius(g, 1.0, true);
  TransformResult r = merge_union(a, b, l);
  CHECK(all_pass(r.certificate));
  CHECK(r.cover.family_count() == 2);
  CHECK(oracle::covers(r.cover.sets, g->size()));
  for (std::size_t f = 0; f < 2; ++f) CHECK(oracle::separated(family_sets(r.cover, f), dist_of(g), 1.0, true));
  // Narrow B blocks put same-family sets within reach of L D_A L D_A L.
  std::vector<std::vector<IndexSet>> nf(2);
  IndexSet ndom;
  for (Index s = 50, k = 0; s <= 100; s += 2, ++k) {
    IndexSet blk{s};
    if (s + 1 <= 100) blk.push_back(s + 1);
    ndom.insert(ndom.end(), blk.begin(), blk.end());
    nf[k % 2].push_back(blk);
  }
  Cover narrow = colored_cover(g, nf);
  narrow.domain = ndom;
  CHECK_THROWS_AS(merge_union(a, narrow, l), ContractViolation);
}

TEST_CASE("merge_union with an empty second piece returns the first") {
  auto g = line(0, 20);
  Cover a = blocks_of_four(g);
  Cover empty;
  empty.space = g;
  empty.families = std::vector<std::vector<std::size_t>>{};
  empty.domain = IndexSet{};
  TransformResult r = merge_union(a, empty, Entourage::radius(g, 1.0, true));
  CHECK(r.cover.sets == a.sets);
}

TEST_CASE("merge_union of half-plane stripe covers of Z^2") {
  Rng rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    UnionFixture f = random_union_fixture(rng);
    TransformResult r = merge_union(f.a, f.b, f.l);
    CHECK(all_pass(r.certificate));
    CHECK(r.cover.family_count() == std::max(f.a.family_count(), f.b.family_count()));
    CHECK(oracle::multiplicity(r.cover.sets, f.space->size()) <= r.cover.family_count());
    CHECK(oracle::covers(r.cover.sets, f.space->size()));
    // Restricted to A, output sets lie in the (D_A L)-fattening of A's sets.
    const Entourage fat = compose(cover_entourage(f.a), f.l);
    const IndexSet adom = f.a.domain_points();
    for (const auto& w : r.cover.sets) {
      IndexSet wa = set_intersection(w, adom);
      if (wa.empty()) continue;
      bool inside = false;
      for (const auto& u : f.a.sets)
        if (is_subset(wa, fat.image(u))) inside = true;
      CHECK(inside);
    }
  }
}

TEST_CASE("merge_union rejects mismatched family counts") {
  auto g = line(0, 20);
  Cover a = blocks_of_four(g);
  Cover b = colored_cover(g, {{{0, 1}}, {{5, 6}}, {{10}}});
  CHECK_THROWS_AS(merge_union(a, b, Entourage::radius(g, 1.0, true)), InvalidInput);
}

TEST_CASE("product_refine of singleton covers") {
  auto x = line(0, 4), y = line(0, 3);
  auto singles = [](const std::shared_ptr<GridSpace>& s) {
    Cover c;
    c.space = s;
    for (Index i = 0; i < s->size(); ++i) c.sets.push_back({i});
    return c;
  };
  auto ps = std::make_shared<ProductSpace>(x, y, ProductSpace::Metric::max);
  TransformResult r = product_refine(singles(x), singles(y), ps, Entourage::diagonal(x), Entourage::diagonal(y), 0, 0);
  CHECK(all_pass(r.certificate));
  CHECK(r.cover.family_count() == 1);
  CHECK(r.cover.sets.size() == ps->size());
  for (const auto& s : r.cover.sets) CHECK(s.size() == 1);
}

TEST_CASE("product_refine of interval covers beats the naive product") {
  auto x = line(0, 30), y = line(0, 30);
  TransformResult u = cube_cover(x, 20.0), v = cube_cover(y, 20.0);
  auto ps = std::make_shared<ProductSpace>(x, y, ProductSpace::Metric::max);
  const Entourage ex = Entourage::radius(x, 1.0, true), ey = Entourage::radius(y, 1.0, true);
  TransformResult r = product_refine(u.cover, v.cover, ps, ex, ey, 1, 1);
  CHECK(all_pass(r.certificate));
  CHECK(r.cover.family_count() == 3);
  const std::size_t m = oracle::multiplicity(r.cover.sets, ps->size());
  CHECK(m == multiplicity(r.cover));
  CHECK(m <= 3);
  CHECK(oracle::multiplicity(product_cover(u.cover, v.cover, ps).sets, ps->size()) == 4);
  // E-disjointness of each family, pair-exhaustively.
  const Entourage e = Entourage::product(ps, ex, ey);
  for (std::size_t f = 0; f < 3; ++f) {
    auto sets = family_sets(r.cover, f);
    for (std::size_t i = 0; i < sets.size(); ++i)
      for (std::size_t j = i + 1; j < sets.size(); ++j)
        for (Index a : sets[i])
          for (Index b : sets[j]) CHECK_FALSE(e.contains(a, b));
  }
}

TEST_CASE("product_refine of a 1-D and a 2-D cube cover") {
  auto x = line(0, 8), y = square(12);
  TransformResult u = cube_cover(x, 24.0), v = cube_cover(y, 36.0);
  auto ps = std::make_shared<ProductSpace>(x, y, ProductSpace::Metric::max);
  TransformResult r = product_refine(u.cover, v.cover, ps, Entourage::radius(x, 1.0, true),
                                     Entourage::radius(y, 1.0, true), 1, 2);
  CHECK(all_pass(r.certificate));
  CHECK(r.cover.family_count() == 4);
  CHECK(oracle::multiplicity(r.cover.sets, ps->size()) <= 4);
  CHECK(oracle::covers(r.cover.sets, ps->size()));
}

TEST_CASE("product_refine checks the appetite precondition") {
  auto x = line(0, 10), y = line(0, 10);
  TransformResult u = cube_cover(x, 4.0), v = cube_cover(y, 4.0);
  auto ps = std::make_shared<ProductSpace>(x, y, ProductSpace::Metric::max);
  CHECK_THROWS_AS(product_refine(u.cover, v.cover, ps, Entourage::radius(x, 1.0, true),
                                 Entourage::radius(y, 1.0, true), 1, 1),
                  ContractViolation);
}
