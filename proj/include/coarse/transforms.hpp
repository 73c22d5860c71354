#pragma once

#include <cstddef>
#include <vector>

#include "coarse/cover.hpp"
#include "coarse/guarantee.hpp"

namespace coarse {

// {x : E(x) subset of U}.
// Restricted to domain when given: {x in D : E(x) n D subset of U}.
IndexSet interior(const IndexSet& u, const Entourage& e, const IndexSet* domain = nullptr);

// Memoized powers L^1, L^2, ... of one entourage.
class PowerTable {
 public:
  explicit PowerTable(Entourage l);
  const Entourage& operator[](unsigned k);  // k >= 1
  const Entourage& base() const { return powers_.front(); }

 private:
  std::vector<Entourage> powers_;
};

struct TransformResult {
  Cover cover;
  Certificate certificate;
};

// Distinct non-empty intersections of exactly k pairwise distinct sets of c,
// enumerated over point incidence.
std::vector<IndexSet> k_fold_intersections(const Cover& c, std::size_t k);

// Witness text for a disjointness failure.
Json witness_json(const DisjointnessWitness& w);

// Turns a cover of multiplicity <= n+1 and appetite L^{n+1} into n+1
// L-disjoint families refining it. L must be symmetric and contain the
// diagonal.
TransformResult colorize(const Cover& c, const Entourage& l, unsigned n);

// {L[U]} with the family structure of c; needs (L L)-disjoint families.
TransformResult expand(const Cover& c, const Entourage& l);

// Combines coloured covers of A = domain(a) and B = domain(b) into a
// coloured cover of A u B with L-disjoint families.
TransformResult merge_union(const Cover& a, const Cover& b, const Entourage& l);

// Cover of X x Y by n+m+1 (E_X x E_Y)-disjoint families from covers of X and
// Y with multiplicities n+1 and m+1. product_space must be a ProductSpace
// over the two covers' spaces.
TransformResult product_refine(const Cover& u, const Cover& v, SpacePtr product_space, const Entourage& ex,
                               const Entourage& ey, unsigned n, unsigned m);

// Cover {U x V} of the product.
Cover product_cover(const Cover& u, const Cover& v, SpacePtr product_space);

}  // namespace coarse
