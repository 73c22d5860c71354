#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "coarse/hyperbolic.hpp"
#include "coarse/rng.hpp"
#include "coarse/support.hpp"
#include "coarse/transforms.hpp"

namespace coarse {

// Seeded generators shared by the CLI pipelines and the tests.

std::shared_ptr<const EuclideanSpace> random_points(Rng& rng, std::size_t count, std::size_t dim, double extent);

// n+1 families of open cubes of edge a centred at shift + a(z + i/(n+1)(1,...,1)),
// restricted to the sample (n = dimension). Lebesgue number in the sup
// metric is a/(2(n+1)) up to boundary effects of the sample.
Cover shifted_cube_cover(const std::shared_ptr<const EuclideanSpace>& space, double a,
                         const std::vector<double>& shift);

struct AppetiteFixture {
  std::shared_ptr<const EuclideanSpace> space;
  Cover cover;  // multiplicity <= n+1, closed (n+1)r-balls inside some set
  double r = 0.0;
  unsigned n = 0;
};

// Random points in [0,extent]^n with a randomly shifted and scaled cube cover
// whose sets swallow every closed ball of radius (n+1) r around a sample point.
AppetiteFixture random_appetite_fixture(Rng& rng, unsigned n, std::size_t count, double r);

struct UnionFixture {
  SpacePtr space;
  Cover a, b;  // coloured covers of the two pieces, domains set
  Entourage l;
};

// Integer grid (1-D or 2-D) split along the first axis into A and B, each
// covered by alternating stripes in two families; the B stripes are wide
// enough for the merge precondition.
UnionFixture random_union_fixture(Rng& rng);

// Random recursive tree on `nodes` vertices.
std::shared_ptr<const TreeSpace> random_tree(Rng& rng, std::size_t nodes);

// Points on a line, split into contiguous blocks of random dimension 1..max_dim;
// with allow_empty some blocks are empty (dimension 0).
Decomposition random_decomposition(Rng& rng, std::size_t blocks, std::size_t max_dim, bool allow_empty = false);

// Complex matrix supported on block pairs within `band` of each other, each
// such pair switched on with probability density.
Matrix random_operator(Rng& rng, const Decomposition& d, std::size_t band, double density = 0.7);
Vector random_vector(Rng& rng, const Decomposition& d, double density = 0.5);

struct AdjointFixture {
  Decomposition source, target;
  std::vector<Index> f;  // source block -> target block
  Matrix phi;            // partial isometry H_source -> H_target covering f
  Matrix t;              // operator on H_source
};

// Random block map with a partial isometry phi whose columns for block b
// lie in block f[b]; some source blocks are dropped (phi zero there).
AdjointFixture random_adjoint_fixture(Rng& rng, std::size_t blocks);

// Area-uniform sample of the hyperbolic disk of the given radius about the
// base point, plus `clustered` points placed in tight groups so that the
// sample has nontrivial small-scale structure.
std::shared_ptr<const HyperbolicSpace> hyperbolic_disk_sample(Rng& rng, double kappa, double radius,
                                                              std::size_t count, std::size_t clustered = 0);

}  // namespace coarse
