#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <numbers>

#include "coarse/errors.hpp"
#include "coarse/fixtures.hpp"
#include "coarse/hyperbolic.hpp"
#include "coarse/sperner.hpp"
#include "coarse/witnesses.hpp"
#include "oracles.hpp"

using namespace coarse;
using Catch::Approx;

namespace {

oracle::Dist dist_of(const SpacePtr& s) {
  return [s](Index a, Index b) { return s->dist(a, b); };
}

std::shared_ptr<GridSpace> grid(unsigned dim, double hi, double step) {
  return std::make_shared<GridSpace>(std::vector<double>(dim, 0.0), std::vector<double>(dim, hi), step);
}

std::shared_ptr<TreeSpace> path(std::size_t n) {
  std::vector<std::pair<Index, Index>> e;
  for (Index v = 1; v < n; ++v) e.emplace_back(v - 1, v);
  return std::make_shared<TreeSpace>(e, n);
}

// Labels of a simplex grid looked up by integer barycentric coordinates.
std::function<unsigned(const std::vector<int>&)> label_lookup(const SimplexGrid& g) {
  auto table = std::make_shared<std::map<std::vector<int>, unsigned>>();
  for (std::size_t i = 0; i < g.vertex_count(); ++i) (*table)[g.barycentric(i)] = g.labels()[i];
  return [table](const std::vector<int>& b) { return table->at(b); };
}

}  // namespace

TEST_CASE("cube cover in one dimension alternates intervals") {
  auto g = grid(1, 20, 0.5);
  TransformResult r = cube_cover(g, 2.0);
  CHECK(all_pass(r.certificate));
  CHECK(r.cover.family_count() == 2);
  CHECK(oracle::multiplicity(r.cover.sets, g->size()) == 2);
  CHECK(oracle::lebesgue(r.cover.sets, g->size(), dist_of(g)) >= 2.0 / 4 - 0.5);
}

TEST_CASE("cube cover in two dimensions") {
  auto g = grid(2, 20, 0.5);
  TransformResult r = cube_cover(g, 6.0);
  CHECK(all_pass(r.certificate));
  CHECK(oracle::multiplicity(r.cover.sets, g->size()) == 3);
  CHECK(oracle::lebesgue(r.cover.sets, g->size(), dist_of(g)) >= 1.0);
  const double m = oracle::mesh(r.cover.sets, dist_of(g));
  // Open cubes lose one grid step at each end of every axis.
  CHECK(m <= 6.0 * std::sqrt(2.0));
  CHECK(m >= (6.0 - 2 * 0.5) * std::sqrt(2.0) - 1e-9);
}

TEST_CASE("cube cover rejects a coarse grid") {
  CHECK_THROWS_AS(cube_cover(grid(2, 10, 1.0), 4.0), InvalidInput);
}

TEST_CASE("tree cover of a path") {
  auto t = path(20);
  TreeCover tc = tree_cover(t, 2.0, 0);
  CHECK(tc.l_prime == 5);
  CHECK(all_pass(tc.result.certificate));
  const auto& c = tc.result.cover;
  CHECK(oracle::covers(c.sets, t->size()));
  CHECK(oracle::multiplicity(c.sets, t->size()) <= 2);
  CHECK(oracle::mesh(c.sets, dist_of(t)) <= 3 * 5 + 2 * 2.0);
  CHECK(oracle::appetite(c.sets, t->size(), dist_of(t), 2.0, false));
}

TEST_CASE("tree cover of a single vertex") {
  auto t = std::make_shared<TreeSpace>(std::vector<std::pair<Index, Index>>{}, 1);
  TreeCover tc = tree_cover(t, 1.0, 0);
  REQUIRE(tc.result.cover.sets.size() == 1);
  CHECK(tc.result.cover.sets[0] == IndexSet{0});
}

TEST_CASE("tree cover of a three-legged star") {
  std::vector<std::pair<Index, Index>> e;
  Index next = 1;
  for (int leg = 0; leg < 3; ++leg) {
    Index prev = 0;
    for (int s = 0; s < 10; ++s) {
      e.emplace_back(prev, next);
      prev = next++;
    }
  }
  auto t = std::make_shared<TreeSpace>(e, next);
  TreeCover tc = tree_cover(t, 1.0, 0);
  CHECK(all_pass(tc.result.certificate));
  CHECK(oracle::multiplicity(tc.result.cover.sets, t->size()) <= 2);
  // Beyond the first band the classes split per leg.
  std::size_t far_sets = 0;
  for (const auto& s : tc.result.cover.sets)
    if (t->dist(0, s.front()) > 3) ++far_sets;
  CHECK(far_sets >= 3);
}

TEST_CASE("tree cover on random trees meets its bounds") {
  Rng rng(41);
  for (int trial = 0; trial < 15; ++trial) {
    auto t = random_tree(rng, 30 + rng.below(60));
    const double l = rng.uniform(0.5, 3.0);
    TreeCover tc = tree_cover(t, l, Index(rng.below(t->size())));
    CHECK(all_pass(tc.result.certificate));
    const auto& sets = tc.result.cover.sets;
    CHECK(oracle::covers(sets, t->size()));
    CHECK(oracle::multiplicity(sets, t->size()) <= 2);
    CHECK(oracle::mesh(sets, dist_of(t)) <= 3.0 * tc.l_prime + 2 * l + 1e-9);
    CHECK(oracle::appetite(sets, t->size(), dist_of(t), l, false));
  }
}

TEST_CASE("tree cover rejects other spaces") {
  CHECK_THROWS_AS(tree_cover(grid(1, 5, 1), 1.0, 0), InvalidInput);
}

TEST_CASE("ray cell cover in one dimension") {
  auto line = grid(1, 60, 1.0);
  RayCellCover rc = ray_cell_cover(1, Entourage::radius(line, 1.0, true), 30);
  CHECK(all_pass(rc.result.certificate));
  CHECK(rc.result.cover.family_count() == 2);
  for (std::size_t i = 0; i < rc.kappa.size(); ++i) CHECK(rc.kappa[i] == Approx(double(i)));
  const auto& sets = rc.result.cover.sets;
  CHECK(oracle::covers(sets, rc.space->size()));
  for (const auto& s : sets) CHECK(oracle::mesh({s}, dist_of(rc.space)) <= 2.0);
  for (std::size_t f = 0; f < 2; ++f)
    CHECK(oracle::separated(family_sets(rc.result.cover, f), dist_of(rc.space), 1.0, true));
}

TEST_CASE("ray cell cover in two dimensions") {
  auto line = grid(1, 120, 1.0);
  RayCellCover rc = ray_cell_cover(2, Entourage::radius(line, 1.0, true), 59);
  CHECK(rc.space->size() == 60 * 60);
  CHECK(all_pass(rc.result.certificate));
  CHECK(oracle::covers(rc.result.cover.sets, rc.space->size()));
  CHECK(oracle::multiplicity(rc.result.cover.sets, rc.space->size()) <= 3);
}

TEST_CASE("ray cell cover with n = 0 partitions the ray") {
  auto line = grid(1, 40, 1.0);
  RayCellCover rc = ray_cell_cover(0, Entourage::radius(line, 2.0, true), 20);
  const auto& sets = rc.result.cover.sets;
  CHECK(oracle::multiplicity(sets, rc.space->size()) == 1);
  CHECK(oracle::covers(sets, rc.space->size()));
  for (const auto& s : sets) CHECK(s.back() - s.front() + 1 == s.size());
}

TEST_CASE("ray cell cover stops when shells cannot grow") {
  auto line = grid(1, 10, 1.0);
  CHECK_THROWS_AS(ray_cell_cover(1, Entourage::radius(line, 1.0, true), 20), InvalidInput);
}

TEST_CASE("hyperbolic parameters") {
  HyperbolicParams p = hyperbolic_params(-1, 0.2, 1, 5, 2);
  CHECK(p.rho == Approx(10.01).margin(1e-9));
  CHECK(p.N == 2);
  CHECK(lipschitz_gap(-1, 0.5) == Approx(2 * std::log(4.0)).margin(1e-12));
  CHECK(lipschitz_gap(-1, 0.5) == Approx(2.773).margin(5e-4));
  // Strong curvature leaves rho > 2L as the binding bound.
  HyperbolicParams q = hyperbolic_params(-1e6, 0.2, 1, 5, 2);
  CHECK(q.rho == Approx(10.01).margin(1e-9));
}

TEST_CASE("hyperbolic distance agrees with the cosine law") {
  Rng rng(42);
  for (int i = 0; i < 500; ++i) {
    const double r1 = rng.uniform(0, 6), r2 = rng.uniform(0, 6);
    const double p1 = rng.uniform(0, 2 * std::numbers::pi), p2 = rng.uniform(0, 2 * std::numbers::pi);
    const double want = oracle::hyperbolic_cosh_law(r1, p1, r2, p2);
    CHECK(hyperbolic_distance(-1, r1, p1, r2, p2) == Approx(want).margin(1e-7));
  }
}

TEST_CASE("radial projection keeps the angle and contracts") {
  Polar y = radial_projection({5.0, 1.2}, 1, 3.0);
  CHECK(y.first == Approx(3.0));
  CHECK(y.second == Approx(1.2));
  CHECK_THROWS_AS(radial_projection({2.0, 0.3}, 1, 3.0), InvalidInput);

  Rng rng(43);
  for (int i = 0; i < 2000; ++i) {
    const double r1 = rng.uniform(3, 12), r2 = rng.uniform(3, 12);
    const double p1 = rng.uniform(0, 2 * std::numbers::pi), p2 = p1 + rng.uniform(-0.5, 0.5);
    Polar a = radial_projection({r1, p1}, 1, 3.0), b = radial_projection({r2, p2}, 1, 3.0);
    CHECK(oracle::hyperbolic_cosh_law(a.first, a.second, b.first, b.second) <=
          oracle::hyperbolic_cosh_law(r1, p1, r2, p2) + 1e-9);
  }
  Rng rng2(44);
  CHECK(contraction_check(-1, 3.0, 20.0, 5000, rng2).pass);
  CHECK(lipschitz_check(-1, 3.0, 0.5, 4, 5000, rng2).pass);
}

TEST_CASE("sphere cover lift on a sampled disk") {
  const double l = 1.0;
  HyperbolicParams p = hyperbolic_params(-1, 0.2, 1, l, 2);
  SphereAtlas atlas(-1, p.rho, 0.2, 1, 2);
  Rng rng(45);
  auto sample = hyperbolic_disk_sample(rng, -1, 3 * p.rho + 2, 600, 400);
  LiftCover lift = sphere_cover_lift(atlas, sample, p.N, l);
  CHECK(all_pass(lift.result.certificate));
  const auto& sets = lift.result.cover.sets;
  CHECK(oracle::covers(sets, sample->size()));
  CHECK(oracle::multiplicity(sets, sample->size()) <= 3);
  CHECK(oracle::mesh(sets, dist_of(sample)) <= 2 * (p.N + 4) * p.rho + 1 + 1e-9);
  CHECK(std::count(lift.labels.begin(), lift.labels.end(), "core") == 1);
}

TEST_CASE("sphere cover lift at the example parameters keeps the core whole") {
  HyperbolicParams p = hyperbolic_params(-1, 0.2, 1, 5, 2);
  SphereAtlas atlas(-1, p.rho, 0.2, 1, 2);
  Rng rng(46);
  auto sample = hyperbolic_disk_sample(rng, -1, 30, 400);
  LiftCover lift = sphere_cover_lift(atlas, sample, p.N, 5);
  CHECK(all_pass(lift.result.certificate));
  CHECK(oracle::multiplicity(lift.result.cover.sets, sample->size()) <= 3);
  CHECK(oracle::lebesgue(lift.result.cover.sets, sample->size(), dist_of(sample)) >= 5);
}

TEST_CASE("star covers of small complexes") {
  CHECK(star_lambda(1) == Approx(0.5));
  CHECK(star_lambda(2) == Approx(1 / std::sqrt(12.0)));
  CHECK(star_lambda(2) == Approx(oracle::centroid_facet_distance(2)).margin(1e-12));
  CHECK(star_lambda(3) == Approx(oracle::centroid_facet_distance(3)).margin(1e-12));

  struct Case {
    SimplicialComplex k;
    unsigned stability;
    double lambda;
  };
  std::vector<Case> cases{
      {{2, {{0, 1}}}, 1, 0.5},
      {{3, {{0, 1}, {1, 2}}}, 1, 0.5},
      // A lone triangle has stability 1 (edges meet in vertices); the bound follows its dimension.
      {{3, {{0, 1, 2}}}, 1, 1 / std::sqrt(12.0)},
      {{4, {{0, 1, 2}, {1, 2, 3}}}, 2, 1 / std::sqrt(12.0)},
  };
  for (const auto& c : cases) {
    StarCover sc = star_cover(c.k, c.stability, 12);
    CHECK(all_pass(sc.result.certificate));
    CHECK(sc.lambda == Approx(c.lambda));
    const auto& sets = sc.result.cover.sets;
    const std::size_t n = sc.space->size();
    CHECK(oracle::multiplicity(sets, n) == c.k.dimension() + 1);
    CHECK(oracle::mesh(sets, dist_of(sc.space)) <= 2.0);
    CHECK(oracle::lebesgue(sets, n, dist_of(sc.space)) >= c.lambda - 1e-9);
  }
  CHECK_THROWS_AS(star_cover({3, {{0, 1, 2}}}, 2, 12), ContractViolation);
  CHECK_THROWS_AS(star_cover({4, {{0, 1, 2}, {1, 2, 3}}}, 1, 12), ContractViolation);
}

TEST_CASE("sperner on a subdivided segment") {
  SimplexGrid g(1, 2);
  std::vector<unsigned> labels(g.vertex_count());
  for (std::size_t i = 0; i < g.vertex_count(); ++i) labels[i] = g.vertex(i)[0] == 0 ? 0 : 1;
  g.set_labels(labels);
  SpernerResult r = sperner_find(g);
  CHECK(r.fully_labelled == 1);
  std::vector<int> ys;
  for (std::size_t v : r.cell) ys.push_back(g.vertex(v)[0]);
  std::sort(ys.begin(), ys.end());
  CHECK(ys == std::vector<int>{0, 1});
}

TEST_CASE("sperner counts match the oracle and are odd") {
  Rng rng(47);
  for (unsigned n : {1u, 2u})
    for (unsigned q = 1; q <= 6; ++q)
      for (int trial = 0; trial < 10; ++trial) {
        SimplexGrid g(n, q);
        std::vector<unsigned> labels(g.vertex_count());
        for (std::size_t i = 0; i < g.vertex_count(); ++i) {
          const auto b = g.barycentric(i);
          std::vector<unsigned> support;
          for (unsigned j = 0; j <= n; ++j)
            if (b[j] > 0) support.push_back(j);
          if (trial == 0) {
            labels[i] = unsigned(std::max_element(b.begin(), b.end()) - b.begin());
          } else if (trial == 1 && support.size() == n + 1) {
            labels[i] = 0;  // constant interior
          } else {
            labels[i] = support[rng.below(support.size())];
          }
        }
        g.set_labels(labels);
        SpernerResult r = sperner_find(g);
        CHECK(r.fully_labelled % 2 == 1);
        CHECK(r.fully_labelled == oracle::sperner_cells(n, q, label_lookup(g)));
        std::vector<bool> seen(n + 1, false);
        for (std::size_t v : r.cell) seen[labels[v]] = true;
        CHECK(std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }));
      }
}

TEST_CASE("sperner rejects inadmissible labels") {
  SimplexGrid g(2, 3);
  std::vector<unsigned> labels(g.vertex_count(), 2);
  CHECK_THROWS_AS(g.set_labels(labels), InvalidInput);
}

TEST_CASE("lower-bound certificates are reverified from raw data") {
  for (unsigned n : {1u, 2u}) {
    PnSample s = pn_sample(n, n == 1 ? 12.0 : 18.0, 4);
    const double a = 2.0 * (n + 1) * 1.5;
    Cover c = shifted_cube_cover(s.space, a, std::vector<double>(n, 0.3));
    LowerBoundCertificate cert = simplex_lower_bound_check(c, s);
    CHECK(all_pass(cert.checks));
    CHECK(cert.fully_labelled % 2 == 1);
    CHECK(verify_lower_bound(c, cert, n));
    std::set<IndexSet> distinct;
    for (std::size_t k : cert.sets) {
      REQUIRE(k < c.sets.size());
      CHECK(contains(c.sets[k], cert.point));
      distinct.insert(c.sets[k]);
    }
    CHECK(distinct.size() >= n + 1);
    CHECK(oracle::multiplicity(c.sets, s.space->size()) >= n + 1);
  }
}

TEST_CASE("lower-bound check rejects covers outside its preconditions") {
  PnSample s = pn_sample(1, 12.0, 4);
  Cover singletons;
  singletons.space = s.space;
  for (Index i = 0; i < s.space->size(); ++i) singletons.sets.push_back({i});
  CHECK_THROWS_AS(simplex_lower_bound_check(singletons, s), ContractViolation);

  Cover whole;
  whole.space = s.space;
  IndexSet all;
  for (Index i = 0; i < s.space->size(); ++i) all.push_back(i);
  whole.sets = {all};
  CHECK_THROWS_AS(simplex_lower_bound_check(whole, s), ContractViolation);
}
