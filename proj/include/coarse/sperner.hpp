#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "coarse/cover.hpp"
#include "coarse/guarantee.hpp"

namespace coarse {

// Kuhn (Freudenthal) subdivision of the standard n-simplex at resolution q.
// Vertices are integer points y with q >= y_1 >= ... >= y_n >= 0; the
// barycentric coordinates are lambda_0 = (q - y_1)/q, lambda_i = (y_i -
// y_{i+1})/q and lambda_n = y_n/q. A cell is a base point b plus a
// permutation: b, b + e_{p1}, b + e_{p1} + e_{p2}, ...
class SimplexGrid {
 public:
  SimplexGrid(unsigned n, unsigned q);

  unsigned n() const { return n_; }
  unsigned q() const { return q_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  const std::vector<int>& vertex(std::size_t i) const { return vertices_[i]; }
  std::optional<std::size_t> find(const std::vector<int>& y) const;
  // Barycentric coordinates scaled by q.
  std::vector<int> barycentric(std::size_t i) const;
  // Cells as lists of n+1 vertex indices.
  const std::vector<std::vector<std::size_t>>& cells() const { return cells_; }

  // Labels are simplex vertices 0..n; throws InvalidInput unless every
  // vertex carries a label from the support of its barycentric coordinates.
  void set_labels(std::vector<unsigned> labels);
  const std::vector<unsigned>& labels() const { return labels_; }

 private:
  unsigned n_, q_;
  std::vector<std::vector<int>> vertices_;
  std::map<std::vector<int>, std::size_t> index_;
  std::vector<std::vector<std::size_t>> cells_;
  std::vector<unsigned> labels_;
};

struct SpernerResult {
  std::vector<std::size_t> cell;  // vertex indices of the first fully labelled cell
  std::size_t fully_labelled = 0;  // number of fully labelled cells
};

// Exhaustive scan for fully labelled cells; labels must be set.
SpernerResult sperner_find(const SimplexGrid& g);

// Lattice sample of P_n = {x : x_n > 0, x_i <= x_n} inside [0,window]^n with
// step 1/m.
struct PnSample {
  unsigned n = 0;
  unsigned m = 1;
  double window = 0.0;
  std::shared_ptr<const EuclideanSpace> space;
  std::vector<std::vector<long>> lattice;  // m * coordinates
  std::map<std::vector<long>, Index> index;

  std::optional<Index> find(const std::vector<long>& y) const;
};

PnSample pn_sample(unsigned n, double window, unsigned m);

struct LowerBoundCertificate {
  Index point = 0;
  std::vector<std::size_t> sets;  // n+1 distinct covering sets containing point
  long r = 0;                     // simplex size
  unsigned resolution = 0;        // Kuhn resolution used
  std::size_t fully_labelled = 0;
  Certificate checks;
};

// Certificate that a cover of the P_n sample with appetite {d <= 1} has a
// point in n+1 distinct sets. Throws ContractViolation when the cover lacks
// the appetite or is too large for the sample window.
LowerBoundCertificate simplex_lower_bound_check(const Cover& c, const PnSample& sample);

// Recomputes the certificate from raw cover data.
bool verify_lower_bound(const Cover& c, const LowerBoundCertificate& cert, unsigned n);

}  // namespace coarse
