#include "coarse/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "coarse/errors.hpp"

namespace coarse {

IndexSet Space::ball(Index i, double r, bool closed) const {
  check_index(i);
  IndexSet out;
  const std::size_t n = size();
  for (std::size_t j = 0; j < n; ++j) {
    double d = dist(i, Index(j));
    if (closed ? d <= r + kDistanceTolerance : d < r - kDistanceTolerance) out.push_back(Index(j));
  }
  return out;
}

double Space::diameter(const IndexSet& s) const {
  double m = 0.0;
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = a + 1; b < s.size(); ++b) m = std::max(m, dist(s[a], s[b]));
  return m;
}

double Space::max_dist(const IndexSet& a, const IndexSet& b) const {
  double m = 0.0;
  for (Index x : a)
    for (Index y : b) m = std::max(m, dist(x, y));
  return m;
}

double Space::min_dist(const IndexSet& a, const IndexSet& b) const {
  double m = std::numeric_limits<double>::infinity();
  for (Index x : a)
    for (Index y : b) m = std::min(m, dist(x, y));
  return m;
}

double Space::pseudometric_defect() const {
  const std::size_t n = size();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    worst = std::max(worst, std::abs(dist(Index(i), Index(i))));
    for (std::size_t j = 0; j < n; ++j) {
      double dij = dist(Index(i), Index(j));
      worst = std::max(worst, std::abs(dij - dist(Index(j), Index(i))));
      worst = std::max(worst, -dij);
      for (std::size_t k = 0; k < n; ++k)
        worst = std::max(worst, dij - dist(Index(i), Index(k)) - dist(Index(k), Index(j)));
    }
  }
  return worst;
}

void Space::check_index(Index i) const {
  if (i >= size())
    throw InvalidInput("point index " + std::to_string(i) + " out of range (size " + std::to_string(size()) + ")");
}

// ---------------------------------------------------------------------------

MatrixSpace::MatrixSpace(std::vector<std::vector<double>> dist) : n_(dist.size()) {
  d_.resize(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i) {
    if (dist[i].size() != n_) throw InvalidInput("distance matrix is not square");
    for (std::size_t j = 0; j < n_; ++j) {
      double v = dist[i][j];
      if (!std::isfinite(v) || v < 0) throw InvalidInput("distance matrix entry must be finite and non-negative");
      d_[i * n_ + j] = v;
    }
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (d_[i * n_ + i] != 0.0) throw InvalidInput("distance matrix has non-zero diagonal at " + std::to_string(i));
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(d_[i * n_ + j] - d_[j * n_ + i]) > 1e-9)
        throw InvalidInput("distance matrix is not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
  }
}

EuclideanSpace::EuclideanSpace(std::vector<std::vector<double>> coords)
    : dim_(coords.empty() ? 0 : coords.front().size()), coords_(std::move(coords)) {
  for (const auto& c : coords_)
    if (c.size() != dim_) throw InvalidInput("coordinate vectors differ in length");
}

double EuclideanSpace::dist(Index i, Index j) const {
  const auto& a = coords_[i];
  const auto& b = coords_[j];
  double s = 0.0;
  for (std::size_t k = 0; k < dim_; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

GridSpace::GridSpace(std::vector<double> min, std::vector<double> max, double step)
    : min_(std::move(min)), max_(std::move(max)), step_(step), total_(1) {
  if (min_.size() != max_.size() || min_.empty()) throw InvalidInput("grid min/max must be non-empty and equal length");
  if (!(step_ > 0)) throw InvalidInput("grid step must be positive");
  for (std::size_t k = 0; k < min_.size(); ++k) {
    if (max_[k] < min_[k]) throw InvalidInput("grid max below min on axis " + std::to_string(k));
    auto c = std::size_t(std::floor((max_[k] - min_[k]) / step_ + 1e-9)) + 1;
    counts_.push_back(c);
    total_ *= c;
    if (total_ > std::numeric_limits<Index>::max()) throw ResourceLimit("grid has too many points");
  }
  if (total_ * dim() <= (std::size_t(1) << 24)) {
    cache_.resize(total_ * dim());
    for (std::size_t i = 0; i < total_; ++i) {
      auto k = lattice(Index(i));
      for (std::size_t a = 0; a < dim(); ++a) cache_[i * dim() + a] = std::int32_t(k[a]);
    }
  }
}

std::vector<std::size_t> GridSpace::lattice(Index i) const {
  std::vector<std::size_t> k(dim());
  std::size_t rem = i;
  for (std::size_t a = dim(); a-- > 0;) {
    k[a] = rem % counts_[a];
    rem /= counts_[a];
  }
  return k;
}

Index GridSpace::index_of(const std::vector<std::size_t>& k) const {
  std::size_t idx = 0;
  for (std::size_t a = 0; a < dim(); ++a) idx = idx * counts_[a] + k[a];
  return Index(idx);
}

std::vector<double> GridSpace::coord(Index i) const {
  auto k = lattice(i);
  std::vector<double> c(dim());
  for (std::size_t a = 0; a < dim(); ++a) c[a] = min_[a] + double(k[a]) * step_;
  return c;
}

double GridSpace::dist(Index i, Index j) const {
  if (!cache_.empty()) {
    const std::size_t n = dim();
    const std::int32_t* a = &cache_[std::size_t(i) * n];
    const std::int32_t* b = &cache_[std::size_t(j) * n];
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double d = double(a[k] - b[k]);
      s += d * d;
    }
    return step_ * std::sqrt(s);
  }
  std::size_t ri = i, rj = j;
  double s = 0.0;
  for (std::size_t a = dim(); a-- > 0;) {
    double d = double(ri % counts_[a]) - double(rj % counts_[a]);
    s += d * d;
    ri /= counts_[a];
    rj /= counts_[a];
  }
  return step_ * std::sqrt(s);
}

IndexSet GridSpace::ball(Index i, double r, bool closed) const {
  check_index(i);
  const auto center = lattice(i);
  const auto reach = std::size_t(std::max(0.0, std::ceil(r / step_ + 1e-9)));
  std::vector<std::size_t> lo(dim()), hi(dim());
  for (std::size_t a = 0; a < dim(); ++a) {
    lo[a] = center[a] >= reach ? center[a] - reach : 0;
    hi[a] = std::min(counts_[a] - 1, center[a] + reach);
  }
  IndexSet out;
  std::vector<std::size_t> k = lo;
  while (true) {
    Index j = index_of(k);
    double d = dist(i, j);
    if (closed ? d <= r + kDistanceTolerance : d < r - kDistanceTolerance) out.push_back(j);
    std::size_t a = dim();
    while (a-- > 0) {
      if (k[a] < hi[a]) {
        ++k[a];
        break;
      }
      k[a] = lo[a];
    }
    if (a == std::size_t(-1)) break;
  }
  return out;  // lexicographic enumeration is already sorted
}

// ---------------------------------------------------------------------------

TreeSpace::TreeSpace(std::vector<std::pair<Index, Index>> edges, std::size_t n_nodes) : edges_(std::move(edges)) {
  n_ = std::max<std::size_t>(n_nodes, edges_.empty() ? 1 : 0);
  for (auto [a, b] : edges_) n_ = std::max<std::size_t>(n_, std::size_t(std::max(a, b)) + 1);
  if (edges_.size() + 1 != n_) throw InvalidInput("tree on " + std::to_string(n_) + " nodes needs " + std::to_string(n_ - 1) + " edges");
  adj_.assign(n_, {});
  for (auto [a, b] : edges_) {
    if (a == b) throw InvalidInput("tree edge is a loop at " + std::to_string(a));
    adj_[a].push_back(b);
    adj_[b].push_back(a);
  }
  for (auto& s : adj_) normalize(s);
  const auto unreached = std::numeric_limits<std::uint32_t>::max();
  d_.assign(n_ * n_, unreached);
  std::vector<Index> queue(n_);
  for (std::size_t s = 0; s < n_; ++s) {
    std::uint32_t* row = &d_[s * n_];
    std::size_t head = 0, tail = 0;
    row[s] = 0;
    queue[tail++] = Index(s);
    while (head < tail) {
      Index v = queue[head++];
      for (Index w : adj_[v])
        if (row[w] == unreached) {
          row[w] = row[v] + 1;
          queue[tail++] = w;
        }
    }
    if (tail != n_) throw InvalidInput("tree edges do not form a connected graph");
  }
}

std::vector<Index> TreeSpace::geodesic(Index a, Index b) const {
  check_index(a);
  check_index(b);
  std::vector<Index> path{a};
  Index v = a;
  while (v != b) {
    for (Index w : adj_[v])
      if (dist(w, b) + 1 == dist(v, b)) {
        v = w;
        break;
      }
    path.push_back(v);
  }
  return path;
}

// ---------------------------------------------------------------------------

double hyperbolic_distance(double kappa, double r1, double phi1, double r2, double phi2) {
  const double s = std::sqrt(-kappa);
  const double a = std::sinh(s * (r1 - r2) / 2);
  const double h = std::sin((phi1 - phi2) / 2);
  const double q = a * a + std::sinh(s * r1) * std::sinh(s * r2) * h * h;
  return 2.0 / s * std::asinh(std::sqrt(q));
}

HyperbolicSpace::HyperbolicSpace(double kappa, std::vector<std::pair<double, double>> points)
    : kappa_(kappa), pts_(std::move(points)) {
  if (!(kappa_ < 0)) throw InvalidInput("hyperbolic space needs kappa < 0");
  for (const auto& [r, phi] : pts_)
    if (!(r >= 0) || !std::isfinite(phi)) throw InvalidInput("polar point needs r >= 0 and finite angle");
}

double HyperbolicSpace::dist(Index i, Index j) const {
  return hyperbolic_distance(kappa_, pts_[i].first, pts_[i].second, pts_[j].first, pts_[j].second);
}

// ---------------------------------------------------------------------------

ProductSpace::ProductSpace(SpacePtr x, SpacePtr y, Metric m) : x_(std::move(x)), y_(std::move(y)), metric_(m) {
  if (!x_ || !y_) throw InvalidInput("product of null spaces");
}

double ProductSpace::dist(Index i, Index j) const {
  double a = x_->dist(first_index(i), first_index(j));
  double b = y_->dist(second_index(i), second_index(j));
  return metric_ == Metric::sum ? a + b : std::max(a, b);
}

SubSpace::SubSpace(SpacePtr parent, IndexSet points) : parent_(std::move(parent)), pts_(std::move(points)) {
  normalize(pts_);
  for (Index p : pts_) parent_->check_index(p);
}

FunctionSpace::FunctionSpace(std::size_t n, std::function<double(Index, Index)> d, std::string kind)
    : n_(n), d_(std::move(d)), kind_(std::move(kind)) {}

std::shared_ptr<MatrixSpace> to_matrix(const Space& s) {
  const std::size_t n = s.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i][j] = s.dist(Index(i), Index(j));
  return std::make_shared<MatrixSpace>(std::move(d));
}

}  // namespace coarse
