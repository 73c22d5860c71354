#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "coarse/space.hpp"

namespace coarse {

// Pair-count bound for explicit materialization.
inline constexpr std::size_t kMaterializationCap = 10'000'000;

// Relation E on the points of a space. Stored as neighbourhoods
// E(a) = {x : (x,a) in E}, so that E[A] is the union of E(a) over a in A.
class Entourage {
 public:
  enum class Kind { radius, pairs, product };

  // Unbound handle; assign before use.
  Entourage() = default;

  // Delta_r = {(x,y) : d(x,y) < r}; closed selects d(x,y) <= r.
  static Entourage radius(SpacePtr space, double r, bool closed = false);
  static Entourage diagonal(SpacePtr space);
  // Raw pair list; symmetric_closure adds (j,i) for each (i,j).
  static Entourage from_pairs(SpacePtr space, const std::vector<std::pair<Index, Index>>& pairs,
                              bool symmetric_closure = false);
  static Entourage from_neighbourhoods(SpacePtr space, std::vector<IndexSet> nb);
  // E_X x E_Y on a ProductSpace: ((x,y),(x',y')) in it iff (x,x') in E_X and (y,y') in E_Y.
  static Entourage product(SpacePtr product_space, const Entourage& ex, const Entourage& ey);

  Kind kind() const { return kind_; }
  const SpacePtr& space() const { return space_; }
  double r() const { return r_; }
  bool closed() const { return closed_; }

  bool contains(Index x, Index y) const;
  // E(a) = {x : (x,a) in E}.
  IndexSet of(Index a) const;
  // E[A] = {x : (x,a) in E for some a in A}.
  IndexSet image(const IndexSet& a) const;

  // Explicit neighbourhoods; radius and product kinds are computed once and
  // cached. Throws ResourceLimit beyond kMaterializationCap pairs.
  const std::vector<IndexSet>& neighbourhoods() const;
  std::size_t pair_count() const;
  std::vector<std::pair<Index, Index>> pairs() const;
  bool is_symmetric() const;
  bool subset_of(const Entourage& other) const;
  bool contains_diagonal() const;

  const Entourage& product_first() const { return *ex_; }
  const Entourage& product_second() const { return *ey_; }

 private:
  struct Cache;

  Kind kind_ = Kind::pairs;
  SpacePtr space_;
  double r_ = 0.0;
  bool closed_ = false;
  std::shared_ptr<const Entourage> ex_, ey_;
  std::shared_ptr<Cache> cache_;
};

// {(x,z) : (x,y) in E1, (y,z) in E2 for some y}. Throws InvalidInput for
// entourages over different spaces.
Entourage compose(const Entourage& e1, const Entourage& e2);
// E composed with itself k times (k >= 1).
Entourage power(const Entourage& e, unsigned k);
Entourage inverse(const Entourage& e);
Entourage unite(const Entourage& e1, const Entourage& e2);
// E union E^{-1}.
Entourage symmetrize(const Entourage& e);

struct PointMap {
  SpacePtr source;
  SpacePtr target;
  std::vector<Index> table;

  // Throws InvalidInput unless the table is total with in-range values.
  void validate() const;
  Index operator()(Index i) const { return table[i]; }
};

PointMap identity_map(SpacePtr s);

enum class Direction { push, pull };

// push: (f x f)(E) over the target. pull: (f x f)^{-1}(E) over the source.
Entourage transport(const PointMap& f, const Entourage& e, Direction dir);

struct UniformityReport {
  std::vector<std::pair<double, double>> modulus;  // (r, s(r))
  std::optional<double> closeness;                 // max_x d(f x, g x)
};

// s(r) = max over d(x1,x2) <= r of d(f x1, f x2).
UniformityReport uniformity_modulus(const PointMap& f, const std::vector<double>& radii,
                                    const PointMap* g = nullptr);

}  // namespace coarse
