#include "coarse/support.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "coarse/cover.hpp"
#include "coarse/errors.hpp"

namespace coarse {

namespace {

void require_square(const Matrix& m, const Decomposition& d, const char* what) {
  if (m.rows() != Eigen::Index(d.total_dim()) || m.cols() != Eigen::Index(d.total_dim()))
    throw InvalidInput(std::string(what) + " has shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                       ", decomposition needs " + std::to_string(d.total_dim()));
}

Json pair_list(const std::vector<std::pair<Index, Index>>& v) {
  Json out = Json::array();
  for (auto [a, b] : v) out.push_back({a, b});
  return out;
}

// First pair of `inner` missing from `outer`, as a witness.
Guarantee inclusion(std::string name, const Entourage& inner, const Entourage& outer) {
  for (auto [x, y] : inner.pairs())
    if (!outer.contains(x, y)) return check_true(std::move(name), false, Json{{"pair", {x, y}}});
  return check_true(std::move(name), true);
}

}  // namespace

Decomposition::Decomposition(SpacePtr space, std::vector<IndexSet> blocks, std::vector<std::size_t> dims,
                             std::optional<double> mesh_bound)
    : space_(std::move(space)), blocks_(std::move(blocks)), dims_(std::move(dims)) {
  if (!space_) throw InvalidInput("decomposition needs a space");
  if (dims_.size() != blocks_.size()) throw InvalidInput("decomposition needs one dimension per block");
  point_block_.assign(space_->size(), std::size_t(-1));
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    normalize(blocks_[b]);
    if (blocks_[b].empty() != (dims_[b] == 0))
      throw InvalidInput("block " + std::to_string(b) + " must have dimension 0 exactly when empty");
    for (Index p : blocks_[b]) {
      space_->check_index(p);
      if (point_block_[p] != std::size_t(-1))
        throw InvalidInput("point " + std::to_string(p) + " lies in two blocks");
      point_block_[p] = b;
    }
    offsets_.push_back(total_);
    total_ += dims_[b];
  }
  for (std::size_t p = 0; p < point_block_.size(); ++p)
    if (point_block_[p] == std::size_t(-1)) throw InvalidInput("point " + std::to_string(p) + " lies in no block");
  if (mesh_bound) {
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      if (space_->diameter(blocks_[b]) > *mesh_bound + kDistanceTolerance)
        throw InvalidInput("block " + std::to_string(b) + " exceeds the declared diameter bound");
  }
  quotient_ = std::make_shared<FunctionSpace>(
      blocks_.size(), [](Index a, Index b) { return a == b ? 0.0 : 1.0; }, "block_quotient");
}

Eigen::VectorXd pvm_projection_blocks(const Decomposition& d, const IndexSet& blocks) {
  Eigen::VectorXd mask = Eigen::VectorXd::Zero(Eigen::Index(d.total_dim()));
  for (Index b : blocks) {
    if (b >= d.block_count()) throw InvalidInput("block " + std::to_string(b) + " out of range");
    mask.segment(Eigen::Index(d.offset(b)), Eigen::Index(d.dim(b))).setOnes();
  }
  return mask;
}

Eigen::VectorXd pvm_projection(const Decomposition& d, const IndexSet& points) {
  IndexSet blocks;
  for (Index p : points) {
    d.space()->check_index(p);
    blocks.push_back(Index(d.block_of_point(p)));
  }
  normalize(blocks);
  for (Index b : blocks)
    if (!is_subset(d.block(b), points))
      throw InvalidInput("set is not a union of blocks: it cuts block " + std::to_string(b));
  return pvm_projection_blocks(d, blocks);
}

Certificate pvm_axioms(const Decomposition& d) {
  const std::size_t nb = d.block_count();
  if (nb > 10) throw ResourceLimit("exhaustive PVM check limited to 10 blocks");
  const std::size_t subsets = std::size_t(1) << nb;
  std::vector<Matrix> lam(subsets);
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    IndexSet points;
    for (std::size_t b = 0; b < nb; ++b)
      if (mask >> b & 1) points.insert(points.end(), d.block(b).begin(), d.block(b).end());
    normalize(points);
    lam[mask] = pvm_projection(d, points).cast<std::complex<double>>().asDiagonal();
  }
  const auto n = Eigen::Index(d.total_dim());
  const double empty = lam[0].norm();
  const double whole = (lam[subsets - 1] - Matrix::Identity(n, n)).norm();
  double additive = 0.0, commute = 0.0;
  Json add_w = nullptr, com_w = nullptr;
  for (std::size_t a = 0; a < subsets; ++a)
    for (std::size_t b = 0; b < subsets; ++b) {
      if ((a & b) == 0) {
        const double e = (lam[a | b] - lam[a] - lam[b]).norm();
        if (e > additive) {
          additive = e;
          add_w = Json{{"a", a}, {"b", b}};
        }
      }
      const Matrix ab = lam[a] * lam[b];
      const double e = std::max((ab - lam[b] * lam[a]).norm(), (ab - lam[a & b]).norm());
      if (e > commute) {
        commute = e;
        com_w = Json{{"a", a}, {"b", b}};
      }
    }
  Certificate c;
  c.push_back(check_le("lambda_empty_zero", empty, 0.0));
  c.push_back(check_le("lambda_whole_identity", whole, 0.0));
  c.push_back(check_le("lambda_additive", additive, 0.0));
  c.push_back(check_le("lambda_commute_intersection", commute, 0.0));
  if (!c[2].pass) c[2].witness = add_w;
  if (!c[3].pass) c[3].witness = com_w;
  return c;
}

IndexSet support_vector(const Vector& u, const Decomposition& d, double tol) {
  if (u.size() != Eigen::Index(d.total_dim())) throw InvalidInput("vector length does not match the decomposition");
  IndexSet out;
  for (std::size_t b = 0; b < d.block_count(); ++b)
    if (d.dim(b) > 0 && u.segment(Eigen::Index(d.offset(b)), Eigen::Index(d.dim(b))).norm() > tol)
      out.push_back(Index(b));
  return out;
}

SupportRelation support_operator(const Matrix& t, const Decomposition& d, double tol) {
  require_square(t, d, "operator");
  SupportRelation r;
  for (std::size_t a = 0; a < d.block_count(); ++a)
    for (std::size_t b = 0; b < d.block_count(); ++b) {
      if (d.dim(a) == 0 || d.dim(b) == 0) continue;
      const double nrm = t.block(Eigen::Index(d.offset(a)), Eigen::Index(d.offset(b)), Eigen::Index(d.dim(a)),
                                 Eigen::Index(d.dim(b)))
                             .norm();
      if (nrm > tol) r.pairs.emplace_back(Index(a), Index(b));
      if (nrm >= tol / 100.0 && nrm <= tol * 100.0) r.sensitive.emplace_back(Index(a), Index(b));
    }
  return r;
}

Entourage support_entourage(const Matrix& t, const Decomposition& d, double tol) {
  return Entourage::from_pairs(d.quotient(), support_operator(t, d, tol).pairs);
}

CalculusReport check_calculus(const Matrix& s, const Matrix& t, const Vector& u, const Decomposition& d, double tol,
                              const Vector* v) {
  require_square(s, d, "S");
  require_square(t, d, "T");
  const Vector& w = v ? *v : u;
  if (u.size() != Eigen::Index(d.total_dim()) || w.size() != Eigen::Index(d.total_dim()))
    throw InvalidInput("vector length does not match the decomposition");
  CalculusReport rep;
  rep.tolerance = tol;
  const auto& q = d.quotient();
  const Entourage diag = Entourage::diagonal(q);
  const Entourage supp_s = support_entourage(s, d, tol);
  const Entourage supp_t = support_entourage(t, d, tol);

  const IndexSet su = support_vector(u, d, tol), sw = support_vector(w, d, tol);
  const IndexSet s_sum = support_vector(u + w, d, tol);
  const IndexSet bound_sum = set_union(su, sw);
  if (auto bad = set_difference(s_sum, bound_sum); !bad.empty())
    rep.inclusions.push_back(check_true("supp_vector_sum", false, Json{{"block", bad.front()}}));
  else
    rep.inclusions.push_back(check_true("supp_vector_sum", true));

  rep.inclusions.push_back(inclusion("supp_operator_sum", support_entourage(s + t, d, tol), unite(supp_s, supp_t)));

  const IndexSet s_tu = support_vector(t * u, d, tol);
  const IndexSet bound_tu = compose(compose(diag, supp_t), diag).image(su);
  if (auto bad = set_difference(s_tu, bound_tu); !bad.empty())
    rep.inclusions.push_back(check_true("supp_apply", false, Json{{"block", bad.front()}}));
  else
    rep.inclusions.push_back(check_true("supp_apply", true));

  const Entourage bound_st = compose(compose(compose(compose(diag, supp_s), diag), supp_t), diag);
  rep.inclusions.push_back(inclusion("supp_product", support_entourage(s * t, d, tol), bound_st));

  const Entourage adj = support_entourage(t.adjoint(), d, tol);
  const Entourage inv = inverse(supp_t);
  Guarantee g = inclusion("supp_adjoint", adj, inv);
  if (g.pass) g = inclusion("supp_adjoint", inv, adj);
  rep.inclusions.push_back(std::move(g));

  std::set<std::pair<Index, Index>> sens;
  for (const Matrix* m : {&s, &t}) {
    const auto r = support_operator(*m, d, tol);
    sens.insert(r.sensitive.begin(), r.sensitive.end());
  }
  rep.sensitive.assign(sens.begin(), sens.end());
  for (auto& inc : rep.inclusions) inc.claimed = Json{{"tolerance", tol}};
  if (!rep.sensitive.empty())
    for (auto& inc : rep.inclusions) inc.measured = Json{{"tolerance_sensitive_pairs", pair_list(rep.sensitive)}};
  return rep;
}

bool is_controlled(const Matrix& t, const Decomposition& d, const Entourage& e, double tol) {
  if (e.space() != d.quotient() && e.space()->size() != d.block_count())
    throw InvalidInput("entourage does not live on the block quotient");
  for (auto [a, b] : support_operator(t, d, tol).pairs)
    if (!e.contains(a, b)) return false;
  return true;
}

AdjointResult induce_adjoint(const Decomposition& source, const Decomposition& target, const std::vector<Index>& f,
                             const Matrix& phi, const Matrix& t, double tol) {
  require_square(t, source, "T");
  if (f.size() != source.block_count()) throw InvalidInput("block map needs one image per source block");
  for (Index c : f)
    if (c >= target.block_count()) throw InvalidInput("block map image out of range");
  if (phi.rows() != Eigen::Index(target.total_dim()) || phi.cols() != Eigen::Index(source.total_dim()))
    throw InvalidInput("phi has the wrong shape");
  for (std::size_t b = 0; b < source.block_count(); ++b) {
    if (source.dim(b) == 0) continue;
    for (std::size_t c = 0; c < target.block_count(); ++c) {
      if (c == f[b] || target.dim(c) == 0) continue;
      const double nrm = phi.block(Eigen::Index(target.offset(c)), Eigen::Index(source.offset(b)),
                                   Eigen::Index(target.dim(c)), Eigen::Index(source.dim(b)))
                             .norm();
      if (nrm > tol)
        throw ContractViolation("phi maps source block " + std::to_string(b) + " into target block " +
                                std::to_string(c) + " instead of " + std::to_string(f[b]));
    }
  }
  const Matrix p = phi.adjoint() * phi;
  if ((p * p - p).norm() > 1e-9) throw ContractViolation("phi* phi is not a projection");

  AdjointResult out;
  out.op = phi * t * phi.adjoint();
  std::vector<std::pair<Index, Index>> image;
  for (auto [a, b] : support_operator(t, source, tol).pairs) image.emplace_back(f[a], f[b]);
  const Entourage bound = Entourage::from_pairs(target.quotient(), image);
  // Entries of phi T phi* are sums of products, so allow the tolerance to
  // scale with the operator norms involved.
  const double scaled = tol * std::max(1.0, phi.norm() * phi.norm() * t.norm());
  out.certificate.push_back(
      inclusion("support_in_image_relation", support_entourage(out.op, target, scaled), bound));
  return out;
}

}  // namespace coarse
