#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "coarse/entourage.hpp"

namespace coarse {

// Family of point sets over a space, optionally partitioned into families
// ("colours") of pairwise disjoint sets. The cover is expected to cover
// domain() which defaults to every point of the space.
struct Cover {
  SpacePtr space;
  std::vector<IndexSet> sets;
  std::optional<std::vector<std::vector<std::size_t>>> families;  // indices into sets
  std::optional<IndexSet> domain;

  std::size_t family_count() const { return families ? families->size() : 0; }
  IndexSet domain_points() const;
  // point -> indices of sets containing it
  std::vector<std::vector<std::size_t>> incidence() const;
};

// Builds a coloured cover from a list of families of sets.
Cover colored_cover(SpacePtr space, const std::vector<std::vector<IndexSet>>& families);
// Sets of family f.
std::vector<IndexSet> family_sets(const Cover& c, std::size_t f);

// Index range, normalization and partition checks; throws InvalidInput.
void check_well_formed(const Cover& c);
// First domain point lying in no set.
std::optional<Index> uncovered_point(const Cover& c);
std::size_t empty_set_count(const Cover& c);

struct DisjointnessWitness {
  std::size_t family;
  std::size_t set_a, set_b;  // indices into sets
  Index a, b;                // (a,b) in L with a in set_a, b in set_b
};

// First pair of distinct sets A, B in one family with (A x B) meeting L.
// Sets with equal content in one family count as one set.
std::optional<DisjointnessWitness> disjointness_violation(const Cover& c, const Entourage& l);

// Max number of distinct (by content) sets sharing a point.
std::size_t multiplicity(const Cover& c);
// Point realizing the multiplicity.
Index multiplicity_point(const Cover& c);
double mesh(const Cover& c);
// min over domain points x of max over sets U containing x of the distance
// from x to the nearest domain point outside U; +inf when a set holds the
// whole domain.
double lebesgue_number(const Cover& c);
// First domain point x whose neighbourhood L(x), restricted to the domain, lies
// in no set.
std::optional<Index> appetite_violation(const Cover& c, const Entourage& l);
bool has_appetite(const Cover& c, const Entourage& l);
// Union of U x U over the sets.
Entourage cover_entourage(const Cover& c);

// Sorted sets, sorted families, set order following families. Deterministic
// output independent of construction order.
Cover canonical(const Cover& c);

}  // namespace coarse
