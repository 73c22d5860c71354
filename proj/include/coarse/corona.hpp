#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "coarse/transforms.hpp"

namespace coarse {

// Sample of a metrisable compactification hX: ambient points split into the
// corona sample and the interior sample, with the filtration
// X_i = {x interior : d(x, corona) >= 1/i}. Level comparisons use
// kDistanceTolerance as slack.
class CompactificationModel {
 public:
  // Throws InvalidInput for an empty corona or interior, or an interior point
  // at distance 0 from the corona.
  CompactificationModel(SpacePtr ambient, IndexSet corona);

  const SpacePtr& ambient() const { return ambient_; }
  const IndexSet& corona() const { return corona_; }
  const IndexSet& interior() const { return interior_; }
  bool is_corona(Index p) const { return contains(corona_, p); }

  double corona_distance(Index p) const { return dc_[p]; }
  // Nearest corona point, lowest index on ties.
  Index nearest_corona(Index p) const { return nearest_[p]; }
  // Smallest i >= 1 with p in X_i (interior points only).
  unsigned level(Index p) const;
  bool in_level(Index p, unsigned i) const;
  // Largest level over the interior sample.
  unsigned depth() const { return depth_; }
  IndexSet level_points(unsigned i) const;
  // a_i = max over corona points of d(X_i, corona point); +inf for empty X_i.
  double a(unsigned i) const;
  // max{n : a_i < 1/n}; nullopt when a_i >= 1, UINT_MAX when a_i = 0.
  std::optional<unsigned> n_of(unsigned i) const;

 private:
  SpacePtr ambient_;
  IndexSet corona_, interior_;
  std::vector<double> dc_;
  std::vector<Index> nearest_;
  std::vector<unsigned> level_;
  unsigned depth_ = 0;
};

// [0,1] sampled at step 1/steps; corona {1}.
CompactificationModel interval_model(std::size_t steps);
// Closed unit disk: centre plus `rings` circles of radius j/rings with
// `per_ring` points at common angles; the outer circle is the corona.
CompactificationModel disk_model(std::size_t rings, std::size_t per_ring);

// f(c, n): point of X_n nearest to corona point c, lowest index on ties.
// Throws InvalidInput for an empty X_n or a non-corona c.
Index map_f(const CompactificationModel& m, Index c, unsigned n);
// g(x) = (nearest corona point, level of x). Throws InvalidInput for a corona point.
std::pair<Index, unsigned> map_g(const CompactificationModel& m, Index x);

struct EquivalenceReport {
  Certificate certificate;
  Json f_table;  // [[c, k, f(c,k)], ...]
  Json g_table;  // [[x, c, i], ...]
};

// d(f(g(x)), x) <= 2/(i-1) for interior x of level i >= 2, and for every
// corona point c and level k with a_k < 1: n_k + 1 <= k~ <= k and
// d(c, c~) <= 2 a_k where (c~, k~) = g(f(c, k)).
EquivalenceReport check_equivalence(const CompactificationModel& m);

struct CcVerdict {
  bool controlled = false;
  std::vector<double> rho;  // rho[i-1] = max d(x,y) over pairs of E not in X_i^2
  double c = 1.0;
  unsigned tail_start = 1;
  std::optional<unsigned> failing_level;
};

// rho_i for i = 1..depth; controlled iff rho_i <= c/i on the tail
// i >= ceil(depth/2). Throws InvalidInput for pairs touching the corona.
CcVerdict check_cc_entourage(const CompactificationModel& m, const Entourage& e, double c = 1.0);

// Covers V_k of the corona sample with mesh <= 1/k in n disjoint families.
class CoronaCoverSchedule {
 public:
  using Generator = std::function<Cover(unsigned k)>;
  CoronaCoverSchedule(SpacePtr corona, unsigned n, Generator gen);

  const SpacePtr& space() const { return space_; }
  unsigned n() const { return n_; }
  // Generated and verified on first use; throws ContractViolation naming k
  // when the cover misses a point, has more than n families, a non-disjoint
  // family or mesh above 1/k.
  const Cover& cover(unsigned k) const;
  double lebesgue(unsigned k) const;

 private:
  SpacePtr space_;
  unsigned n_;
  Generator gen_;
  std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();  // keeps the schedule movable
  mutable std::map<unsigned, std::pair<std::shared_ptr<const Cover>, double>> cache_;
};

// Unit circle sampled at `points` (even) angles, chord metric, two families
// of runs of consecutive points.
CoronaCoverSchedule circle_schedule(std::size_t points);
// Single corona point, one family.
CoronaCoverSchedule point_schedule();

struct DimCover {
  TransformResult result;
  std::shared_ptr<const ProductSpace> space;  // corona x {0..depth}, max metric
  std::vector<unsigned> l;                    // l_0, l_1, ...
  std::vector<long> k;                        // k_{-1}, k_0, ... (k[i+1] = k_i)
  std::vector<unsigned> shell;                // m -> smallest k with m in K_k
  std::vector<double> d;                      // d_m bookkeeping
  std::vector<long> b;                        // min-index bounds of the projected Delta_U
  Entourage e;                                // reconstructed appetite entourage
};

// Cover of corona x {0..depth} with multiplicity <= n+1 and appetite
// E = {((x,m),(x',m')) : m = m' or (m,m') in e_n, d(x,x') < delta[max(m,m')]}
// plus the diagonal. delta must be non-increasing, one value per m; e_n lives on a
// grid {0..depth}. Conditions on m are evaluated on the sampled window.
DimCover corona_dim_cover(const CoronaCoverSchedule& s, const std::vector<double>& delta, const Entourage& e_n,
                          unsigned depth);

}  // namespace coarse
