#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "coarse/entourage.hpp"
#include "coarse/guarantee.hpp"

namespace coarse {

inline constexpr double kSupportTolerance = 1e-12;

// Partition of the points of a space into blocks, block b carrying a Hilbert
// space of dimension dims[b]. Matrix indices of block b are
// [offset(b), offset(b) + dims[b]).
class Decomposition {
 public:
  // Throws InvalidInput unless blocks partition 0..space->size()-1 and
  // dims[b] == 0 exactly for empty blocks. With a mesh bound, every block
  // must have diameter <= bound.
  Decomposition(SpacePtr space, std::vector<IndexSet> blocks, std::vector<std::size_t> dims,
                std::optional<double> mesh_bound = std::nullopt);

  const SpacePtr& space() const { return space_; }
  std::size_t block_count() const { return blocks_.size(); }
  const IndexSet& block(std::size_t b) const { return blocks_[b]; }
  std::size_t dim(std::size_t b) const { return dims_[b]; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t offset(std::size_t b) const { return offsets_[b]; }
  std::size_t total_dim() const { return total_; }
  std::size_t block_of_point(Index p) const { return point_block_[p]; }
  // Space whose points are the blocks; relations between blocks live here.
  const SpacePtr& quotient() const { return quotient_; }

 private:
  SpacePtr space_;
  std::vector<IndexSet> blocks_;
  std::vector<std::size_t> dims_, offsets_, point_block_;
  std::size_t total_ = 0;
  SpacePtr quotient_;
};

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// 0/1 diagonal of lambda(A). Throws InvalidInput unless A is a union of blocks.
Eigen::VectorXd pvm_projection(const Decomposition& d, const IndexSet& points);
// Same, for a set of block indices.
Eigen::VectorXd pvm_projection_blocks(const Decomposition& d, const IndexSet& blocks);

// Exhaustive check over all pairs of block unions A, B (as point sets):
// lambda(empty) = 0, lambda(X) = id, lambda(A u B) = lambda(A) + lambda(B) for
// disjoint A, B, and lambda(A) lambda(B) = lambda(B) lambda(A) = lambda(A n B).
// Throws ResourceLimit above 10 blocks.
Certificate pvm_axioms(const Decomposition& d);

// Blocks on which u has a component of norm > tol.
IndexSet support_vector(const Vector& u, const Decomposition& d, double tol = kSupportTolerance);

struct SupportRelation {
  std::vector<std::pair<Index, Index>> pairs;      // (row block, column block)
  std::vector<std::pair<Index, Index>> sensitive;  // block norms within a factor 100 of tol
};

// {(b1,b2) : ||lambda(b1) T lambda(b2)||_F > tol}.
SupportRelation support_operator(const Matrix& t, const Decomposition& d, double tol = kSupportTolerance);
// The support as an entourage over the block quotient.
Entourage support_entourage(const Matrix& t, const Decomposition& d, double tol = kSupportTolerance);

struct CalculusReport {
  Certificate inclusions;  // one entry per rule of the support calculus
  double tolerance = kSupportTolerance;
  std::vector<std::pair<Index, Index>> sensitive;
};

// Supp(u+v) in Supp(u) u Supp(v), Supp(S+T) in Supp(S) u Supp(T),
// Supp(Tu) in Supp(T)[Supp(u)], Supp(ST) in Supp(S) Supp(T),
// Supp(T*) = Supp(T)^{-1}; all relations are taken on the block quotient,
// where Delta_U is the diagonal. v defaults to u.
CalculusReport check_calculus(const Matrix& s, const Matrix& t, const Vector& u, const Decomposition& d,
                              double tol = kSupportTolerance, const Vector* v = nullptr);

// Supp(T) contained in E, E over the block quotient.
bool is_controlled(const Matrix& t, const Decomposition& d, const Entourage& e, double tol = kSupportTolerance);

struct AdjointResult {
  Matrix op;
  Certificate certificate;
};

// phi T phi* for phi : H_source -> H_target mapping block b into block f[b].
// Throws ContractViolation when phi has mass outside the f-image blocks or
// phi* phi is not a projection.
AdjointResult induce_adjoint(const Decomposition& source, const Decomposition& target, const std::vector<Index>& f,
                             const Matrix& phi, const Matrix& t, double tol = kSupportTolerance);

}  // namespace coarse
