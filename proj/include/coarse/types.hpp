#pragma once

#include <cstdint>
#include <vector>

namespace coarse {

using Index = std::uint32_t;

// Sorted, duplicate-free list of point indices.
using IndexSet = std::vector<Index>;

// Numeric slack used when comparing floating point distances.
inline constexpr double kDistanceTolerance = 1e-12;

// Sorts and deduplicates in place.
void normalize(IndexSet& s);

IndexSet set_union(const IndexSet& a, const IndexSet& b);
IndexSet set_intersection(const IndexSet& a, const IndexSet& b);
IndexSet set_difference(const IndexSet& a, const IndexSet& b);
bool is_subset(const IndexSet& a, const IndexSet& b);
bool intersects(const IndexSet& a, const IndexSet& b);
bool contains(const IndexSet& s, Index x);

}  // namespace coarse
