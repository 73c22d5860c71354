#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "coarse/transforms.hpp"

namespace coarse {

// Cover of a grid sample of R^n by the n+1 families of open cubes of edge a
// centred at a*(z + i/(n+1)*(1,...,1)), z in Z^n. Throws InvalidInput when the
// grid step exceeds a/(2(n+1)).
TransformResult cube_cover(const std::shared_ptr<const GridSpace>& grid, double a);

struct TreeCover {
  TransformResult result;
  unsigned l_prime = 0;  // smallest natural number > 2L
};

// Two families (even and odd levels of floor(d(root,x)/L')) of open
// L-neighbourhoods of the geodesic classes of a tree.
TreeCover tree_cover(const SpacePtr& tree, double l, Index root);

struct RayCellCover {
  TransformResult result;
  std::shared_ptr<const GridSpace> space;  // n-dimensional grid [0,region]^n
  Entourage e_tilde;                       // interval completion over the 1-D sample
  std::vector<double> kappa;               // sup K_i
  std::vector<unsigned> shell;             // 1-D point -> smallest i with the point in K_i
};

// M^{interval}: all (u,v) with x <= u <= v <= y or y <= v <= u <= x for some
// (x,y) in M, over a 1-D grid sample.
Entourage interval_completion(const Entourage& m);

// Cover of the sampled cell [0,region]^n by products of the shells
// K_i \ K_{i-n}, K_0 = {0}, K_{i+1} = E~[K_i], in n+1 families. e lives on a
// 1-D grid sample of the ray starting at 0. n = 0 gives the partition of the
// ray into the shells K_i \ K_{i-1} as a single family.
RayCellCover ray_cell_cover(unsigned n, const Entourage& e, double region);

// Finite simplicial complex given by its maximal simplices over vertices
// 0..vertex_count-1.
struct SimplicialComplex {
  std::size_t vertex_count = 0;
  std::vector<std::vector<Index>> simplices;

  unsigned dimension() const;
  // Largest k >= 1 with two distinct k-simplices meeting in a (k-1)-simplex;
  // 0 when there is none.
  unsigned stability() const;
};

struct StarCover {
  TransformResult result;
  std::shared_ptr<const Space> space;
  std::vector<std::vector<double>> barycentric;  // sample point -> coordinates over all vertices
  unsigned stability = 0;
  double lambda = 0.0;  // certified Lebesgue lower bound
};

// 1/sqrt(2k(k+1)): distance from the centre of a k-simplex to a facet when
// vertices sit at pairwise distance 1.
double star_lambda(unsigned k);

// Open-star cover of the barycentric lattice sample (resolution q) of |K| in
// the affine metric with vertices at delta_v/sqrt(2). The declared stability
// is checked against the complex.
StarCover star_cover(const SimplicialComplex& k, unsigned declared_stability, unsigned resolution = 12);

}  // namespace coarse
