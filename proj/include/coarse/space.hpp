#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "coarse/types.hpp"

namespace coarse {

// Finite pseudometric space. Points are the indices 0..size()-1.
class Space {
 public:
  virtual ~Space() = default;

  virtual std::size_t size() const = 0;
  virtual double dist(Index i, Index j) const = 0;
  virtual std::string kind() const = 0;

  // Points at distance < r from i (or <= r when closed), tolerance
  // kDistanceTolerance applied on the boundary.
  virtual IndexSet ball(Index i, double r, bool closed = false) const;

  double diameter(const IndexSet& s) const;
  // max_{a in A, b in B} d(a,b) and min_{a,b} d(a,b); +inf for min over empty input.
  double max_dist(const IndexSet& a, const IndexSet& b) const;
  double min_dist(const IndexSet& a, const IndexSet& b) const;
  // max deviation from symmetry, zero diagonal and the triangle inequality
  // over all triples. O(n^3); intended for small samples and tests.
  double pseudometric_defect() const;

  void check_index(Index i) const;
};

using SpacePtr = std::shared_ptr<const Space>;

// Explicit symmetric distance matrix.
class MatrixSpace : public Space {
 public:
  explicit MatrixSpace(std::vector<std::vector<double>> dist);
  std::size_t size() const override { return n_; }
  double dist(Index i, Index j) const override { return d_[std::size_t(i) * n_ + j]; }
  std::string kind() const override { return "matrix"; }
  const std::vector<double>& data() const { return d_; }

 private:
  std::size_t n_;
  std::vector<double> d_;
};

// Points given by Euclidean coordinates, l2 distance.
class EuclideanSpace : public Space {
 public:
  explicit EuclideanSpace(std::vector<std::vector<double>> coords);
  std::size_t size() const override { return coords_.size(); }
  double dist(Index i, Index j) const override;
  std::string kind() const override { return "euclidean"; }
  std::size_t dim() const { return dim_; }
  const std::vector<double>& coord(Index i) const { return coords_[i]; }

 private:
  std::size_t dim_;
  std::vector<std::vector<double>> coords_;
};

// Axis-aligned lattice min + k*step inside [min,max], lexicographic order with
// the last axis varying fastest.
class GridSpace : public Space {
 public:
  GridSpace(std::vector<double> min, std::vector<double> max, double step);
  std::size_t size() const override { return total_; }
  double dist(Index i, Index j) const override;
  std::string kind() const override { return "grid"; }
  IndexSet ball(Index i, double r, bool closed = false) const override;

  std::size_t dim() const { return min_.size(); }
  double step() const { return step_; }
  const std::vector<double>& min() const { return min_; }
  const std::vector<double>& max() const { return max_; }
  const std::vector<std::size_t>& counts() const { return counts_; }
  std::vector<std::size_t> lattice(Index i) const;
  Index index_of(const std::vector<std::size_t>& k) const;
  std::vector<double> coord(Index i) const;

 private:
  std::vector<double> min_, max_;
  double step_;
  std::vector<std::size_t> counts_;
  std::size_t total_;
  std::vector<std::int32_t> cache_;  // lattice coordinates, row-major; empty for huge grids
};

// Graph metric of a finite tree (unit edge lengths).
class TreeSpace : public Space {
 public:
  // Nodes are 0..n-1 with n = 1 + max index in edges (or n_nodes if larger).
  explicit TreeSpace(std::vector<std::pair<Index, Index>> edges, std::size_t n_nodes = 0);
  std::size_t size() const override { return n_; }
  double dist(Index i, Index j) const override { return d_[std::size_t(i) * n_ + j]; }
  std::string kind() const override { return "tree"; }
  const std::vector<std::pair<Index, Index>>& edges() const { return edges_; }
  const std::vector<IndexSet>& adjacency() const { return adj_; }
  // Vertex sequence of the unique geodesic from a to b.
  std::vector<Index> geodesic(Index a, Index b) const;

 private:
  std::size_t n_;
  std::vector<std::pair<Index, Index>> edges_;
  std::vector<IndexSet> adj_;
  std::vector<std::uint32_t> d_;
};

// Sample of the model plane of constant curvature kappa < 0 in geodesic polar
// coordinates (r, phi) about a base point.
class HyperbolicSpace : public Space {
 public:
  HyperbolicSpace(double kappa, std::vector<std::pair<double, double>> points);
  std::size_t size() const override { return pts_.size(); }
  double dist(Index i, Index j) const override;
  std::string kind() const override { return "hyperbolic_polar"; }
  double kappa() const { return kappa_; }
  const std::pair<double, double>& polar(Index i) const { return pts_[i]; }
  const std::vector<std::pair<double, double>>& points() const { return pts_; }

 private:
  double kappa_;
  std::vector<std::pair<double, double>> pts_;
};

// Distance between polar points in curvature kappa < 0.
double hyperbolic_distance(double kappa, double r1, double phi1, double r2, double phi2);

// Cartesian product X x Y; index = ix * |Y| + iy. Metric is the l1 sum
// (default) or the max of the factor metrics.
class ProductSpace : public Space {
 public:
  enum class Metric { sum, max };
  ProductSpace(SpacePtr x, SpacePtr y, Metric m = Metric::sum);
  std::size_t size() const override { return x_->size() * y_->size(); }
  double dist(Index i, Index j) const override;
  std::string kind() const override { return "product"; }
  const SpacePtr& first() const { return x_; }
  const SpacePtr& second() const { return y_; }
  Index first_index(Index i) const { return Index(i / y_->size()); }
  Index second_index(Index i) const { return Index(i % y_->size()); }
  Index pair_index(Index ix, Index iy) const { return Index(ix * y_->size() + iy); }

 private:
  SpacePtr x_, y_;
  Metric metric_;
};

// Restriction of a space to a subset of its points; index k maps to points()[k].
class SubSpace : public Space {
 public:
  SubSpace(SpacePtr parent, IndexSet points);
  std::size_t size() const override { return pts_.size(); }
  double dist(Index i, Index j) const override { return parent_->dist(pts_[i], pts_[j]); }
  std::string kind() const override { return "subspace"; }
  const SpacePtr& parent() const { return parent_; }
  const IndexSet& points() const { return pts_; }

 private:
  SpacePtr parent_;
  IndexSet pts_;
};

// Distance given by a callback; used for derived spaces such as block
// quotients and compactification samples.
class FunctionSpace : public Space {
 public:
  FunctionSpace(std::size_t n, std::function<double(Index, Index)> d, std::string kind = "function");
  std::size_t size() const override { return n_; }
  double dist(Index i, Index j) const override { return d_(i, j); }
  std::string kind() const override { return kind_; }

 private:
  std::size_t n_;
  std::function<double(Index, Index)> d_;
  std::string kind_;
};

// Materializes the distance matrix of any space.
std::shared_ptr<MatrixSpace> to_matrix(const Space& s);

}  // namespace coarse
