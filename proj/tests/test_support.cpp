#include <catch_amalgamated.hpp>

#include "coarse/errors.hpp"
#include "coarse/fixtures.hpp"
#include "coarse/support.hpp"
#include "oracles.hpp"

using namespace coarse;

namespace {

std::shared_ptr<GridSpace> line(std::size_t n) {
  return std::make_shared<GridSpace>(std::vector<double>{0}, std::vector<double>{double(n - 1)}, 1.0);
}

// Singleton blocks over a line of n points, each of dimension dim.
Decomposition singletons(std::size_t n, std::size_t dim = 1) {
  std::vector<IndexSet> blocks;
  for (Index i = 0; i < n; ++i) blocks.push_back({i});
  return Decomposition(line(n), blocks, std::vector<std::size_t>(n, dim));
}

oracle::CMatrix raw(const Matrix& m) {
  oracle::CMatrix out(std::size_t(m.rows()), std::vector<std::complex<double>>(std::size_t(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out[std::size_t(i)][std::size_t(j)] = m(i, j);
  return out;
}

oracle::Relation relation(const std::vector<std::pair<Index, Index>>& pairs) {
  return oracle::Relation(pairs.begin(), pairs.end());
}

bool subset(const oracle::Relation& a, const oracle::Relation& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

TEST_CASE("projection of the empty set and of the whole space") {
  Decomposition d(line(6), {{0, 1}, {2}, {3, 4, 5}}, {2, 1, 3});
  CHECK(pvm_projection(d, {}).isZero());
  CHECK(pvm_projection(d, {0, 1, 2, 3, 4, 5}) == Eigen::VectorXd::Ones(6));
  Eigen::VectorXd mid = pvm_projection(d, {2});
  CHECK(mid.sum() == 1.0);
  CHECK(mid(2) == 1.0);
  CHECK_THROWS_AS(pvm_projection(d, {0}), InvalidInput);
}

TEST_CASE("projections multiply like intersections") {
  Decomposition d(line(7), {{0}, {1, 2}, {3}, {4, 5}, {6}}, {1, 2, 1, 3, 2});
  const std::size_t b = d.block_count();
  for (unsigned x = 0; x < (1u << b); ++x)
    for (unsigned y = 0; y < (1u << b); ++y) {
      IndexSet xs, ys, both;
      for (Index k = 0; k < b; ++k) {
        if (x >> k & 1) xs.push_back(k);
        if (y >> k & 1) ys.push_back(k);
        if ((x & y) >> k & 1) both.push_back(k);
      }
      Eigen::VectorXd px = pvm_projection_blocks(d, xs), py = pvm_projection_blocks(d, ys);
      CHECK(px.cwiseProduct(py) == pvm_projection_blocks(d, both));
    }
  CHECK(all_pass(pvm_axioms(d)));
}

TEST_CASE("pvm axioms refuse large decompositions") {
  CHECK_THROWS_AS(pvm_axioms(singletons(11)), ResourceLimit);
}

TEST_CASE("support of vectors") {
  Decomposition d(line(4), {{0}, {1, 2}, {3}}, {2, 2, 1});
  CHECK(support_vector(Vector::Zero(5), d).empty());
  for (Index b = 0; b < 3; ++b) {
    Vector e = Vector::Zero(5);
    e(Eigen::Index(d.offset(b))) = 1.0;
    CHECK(support_vector(e, d) == IndexSet{b});
  }
  Rng rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    Vector u = random_vector(rng, d), v = random_vector(rng, d);
    CHECK(is_subset(support_vector(u + v, d), set_union(support_vector(u, d), support_vector(v, d))));
  }
}

TEST_CASE("support of operators") {
  Decomposition d = singletons(3);
  auto id = support_operator(Matrix::Identity(3, 3), d);
  CHECK(relation(id.pairs) == oracle::Relation{{0, 0}, {1, 1}, {2, 2}});
  Matrix one = Matrix::Zero(3, 3);
  one(0, 1) = 2.5;
  CHECK(relation(support_operator(one, d).pairs) == oracle::Relation{{0, 1}});

  Rng rng(52);
  for (int trial = 0; trial < 40; ++trial) {
    Decomposition r = random_decomposition(rng, 2 + rng.below(5), 4, true);
    Matrix t = random_operator(rng, r, 1 + rng.below(3));
    const auto got = relation(support_operator(t, r).pairs);
    CHECK(got == oracle::block_support(raw(t), r.dims(), kSupportTolerance));
    CHECK(relation(support_operator(t.adjoint(), r).pairs) == oracle::inverse(got));
  }
}

TEST_CASE("support calculus on identities") {
  Decomposition d(line(4), {{0, 1}, {2, 3}}, {2, 2});
  Vector e = Vector::Zero(4);
  e(0) = 1.0;
  CalculusReport rep = check_calculus(Matrix::Identity(4, 4), Matrix::Identity(4, 4), e, d);
  CHECK(rep.inclusions.size() == 5);
  CHECK(all_pass(rep.inclusions));
  CHECK(rep.tolerance == kSupportTolerance);
}

TEST_CASE("support calculus on random 12x12 operators over four blocks") {
  Decomposition d(line(4), {{0}, {1}, {2}, {3}}, {3, 3, 3, 3});
  Rng rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix s = random_operator(rng, d, 1), t = random_operator(rng, d, 2);
    Vector u = random_vector(rng, d), v = random_vector(rng, d);
    CalculusReport rep = check_calculus(s, t, u, d, kSupportTolerance, &v);
    CHECK(all_pass(rep.inclusions));
    // Supp(ST) against the composed oracle relation.
    const auto ss = oracle::block_support(raw(s), d.dims(), kSupportTolerance);
    const auto st = oracle::block_support(raw(t), d.dims(), kSupportTolerance);
    CHECK(subset(oracle::block_support(raw(s * t), d.dims(), kSupportTolerance), oracle::compose(ss, st)));
  }
}

TEST_CASE("support calculus across random seeds") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    Decomposition d = random_decomposition(rng, 1 + rng.below(6), 4, true);
    Matrix s = random_operator(rng, d, rng.below(3)), t = random_operator(rng, d, rng.below(3));
    Vector u = random_vector(rng, d);
    CHECK(all_pass(check_calculus(s, t, u, d).inclusions));
  }
}

TEST_CASE("near-zero blocks are flagged as tolerance-sensitive") {
  Decomposition d = singletons(3, 2);
  Matrix t = Matrix::Identity(6, 6);
  t(0, 2) = 5e-12;  // block (0, 1), just above the cutoff
  t(4, 0) = 5e-13;  // block (2, 0), just below
  SupportRelation r = support_operator(t, d);
  CHECK(relation(r.pairs).count({0, 1}) == 1);
  CHECK(relation(r.pairs).count({2, 0}) == 0);
  CHECK(relation(r.sensitive) == oracle::Relation{{0, 1}, {2, 0}});
  CalculusReport rep = check_calculus(t, t, Vector::Ones(6), d);
  CHECK_FALSE(rep.sensitive.empty());
}

TEST_CASE("calculus rejects mismatched dimensions") {
  Decomposition d = singletons(3);
  CHECK_THROWS_AS(check_calculus(Matrix::Identity(4, 4), Matrix::Identity(3, 3), Vector::Zero(3), d), InvalidInput);
  CHECK_THROWS_AS(check_calculus(Matrix::Identity(3, 3), Matrix::Identity(3, 3), Vector::Zero(5), d), InvalidInput);
}

TEST_CASE("controlled operators") {
  Decomposition d = singletons(4);
  const auto& q = d.quotient();
  CHECK(is_controlled(Matrix::Identity(4, 4), d, Entourage::diagonal(q)));
  CHECK_FALSE(is_controlled(Matrix::Ones(4, 4), d, Entourage::diagonal(q)));

  Rng rng(54);
  for (int trial = 0; trial < 30; ++trial) {
    Decomposition r = random_decomposition(rng, 3 + rng.below(4), 3);
    const auto& rq = r.quotient();
    const Entourage e = Entourage::radius(rq, 1.0, true);
    Matrix s = random_operator(rng, r, 1), t = random_operator(rng, r, 1);
    REQUIRE(is_controlled(s, r, e));
    REQUIRE(is_controlled(t, r, e));
    CHECK(is_controlled(s * t, r, compose(e, e)));
    // Monotone in the entourage.
    CHECK(is_controlled(s, r, Entourage::radius(rq, 3.0, true)));
  }
}

TEST_CASE("induced adjoint by the identity returns the operator") {
  Decomposition d(line(3), {{0}, {1}, {2}}, {2, 1, 2});
  Rng rng(55);
  Matrix t = random_operator(rng, d, 2, 1.0);
  AdjointResult r = induce_adjoint(d, d, {0, 1, 2}, Matrix::Identity(5, 5), t);
  CHECK(all_pass(r.certificate));
  CHECK((r.op - t).norm() < 1e-12);
}

TEST_CASE("induced adjoint collapsing two blocks") {
  Decomposition src = singletons(3);
  Decomposition dst(line(2), {{0}, {1}}, {2, 1});
  // Blocks 0 and 1 go isometrically into the 2-dimensional target block 0.
  Matrix phi = Matrix::Zero(3, 3);
  phi(0, 0) = 1;
  phi(1, 1) = 1;
  phi(2, 2) = 1;
  Matrix t = Matrix::Zero(3, 3);
  t(0, 0) = 1;
  t(1, 1) = 2;
  t(2, 2) = 3;
  AdjointResult r = induce_adjoint(src, dst, {0, 0, 1}, phi, t);
  CHECK(all_pass(r.certificate));
  CHECK(relation(support_operator(r.op, dst).pairs) == oracle::Relation{{0, 0}, {1, 1}});
}

TEST_CASE("induced adjoint support stays inside the image relation") {
  Rng rng(56);
  for (int trial = 0; trial < 10; ++trial) {
    AdjointFixture f = random_adjoint_fixture(rng, 3 + rng.below(4));
    AdjointResult r = induce_adjoint(f.source, f.target, f.f, f.phi, f.t);
    CHECK(all_pass(r.certificate));
    oracle::Relation image;
    for (const auto& [a, b] : oracle::block_support(raw(f.t), f.source.dims(), kSupportTolerance))
      image.insert({f.f[a], f.f[b]});
    CHECK(subset(oracle::block_support(raw(r.op), f.target.dims(), kSupportTolerance), image));
    CHECK((r.op - f.phi * f.t * f.phi.adjoint()).norm() < 1e-9);
  }
}

TEST_CASE("induced adjoint rejects phi leaving the image block") {
  Decomposition src = singletons(2), dst = singletons(2);
  Matrix phi = Matrix::Zero(2, 2);
  phi(1, 0) = 1;  // block 0 lands in target block 1
  phi(0, 1) = 1;
  CHECK_THROWS_AS(induce_adjoint(src, dst, {0, 1}, phi, Matrix::Identity(2, 2)), ContractViolation);
  Matrix scaled = 2 * Matrix::Identity(2, 2);
  CHECK_THROWS_AS(induce_adjoint(src, dst, {0, 1}, scaled, Matrix::Identity(2, 2)), ContractViolation);
}

TEST_CASE("decompositions validate their blocks") {
  CHECK_THROWS_AS(Decomposition(line(3), {{0, 1}}, {1}), InvalidInput);
  CHECK_THROWS_AS(Decomposition(line(3), {{0, 1}, {1, 2}}, {1, 1}), InvalidInput);
  CHECK_THROWS_AS(Decomposition(line(3), {{0, 1}, {2}}, {1, 0}), InvalidInput);
  CHECK_THROWS_AS(Decomposition(line(3), {{0, 2}, {1}}, {1, 1}, 1.0), InvalidInput);
}
