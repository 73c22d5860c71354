#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coarse/rng.hpp"
#include "coarse/transforms.hpp"

namespace coarse {

struct HyperbolicParams {
  double rho = 0.0;
  unsigned N = 0;
};

// Smallest rho on the 0.01 lattice and smallest N with
//   rho*n > D, rho*n > (2/s) max(1, log(2D/lambda)), rho > 2L,
//   (N-1) rho > 2L, (N-1) rho > (2/s) max(1, log(2L/lambda)),  s = sqrt(-kappa).
HyperbolicParams hyperbolic_params(double kappa, double lambda, double d, double l, unsigned n);

// Radial gap a beyond which theta_k is delta-Lipschitz on sets of diameter < a
// on S_{k rho + a}: (2/s) max(1, log(2/delta)).
double lipschitz_gap(double kappa, double delta);

using Polar = std::pair<double, double>;  // (r, phi)

// Point of S_{k rho} on the ray through x. Throws InvalidInput when r(x) < k rho.
Polar radial_projection(const Polar& x, unsigned k, double rho);

// Largest d(theta_k x, theta_k y) - d(x, y) over `pairs` random pairs with
// k rho <= r(x), r(y) <= max_radius; checked against 1e-9.
Guarantee contraction_check(double kappa, double rho, double max_radius, std::size_t pairs, Rng& rng);

// Samples pairs x, y on S_{k rho + a} with a drawn from [gap, 1.5 gap] for
// gap = lipschitz_gap(kappa, delta) and keeps those with d(x, y) < a; the
// largest ratio d(theta_k x, theta_k y) / d(x, y) must stay <= delta.
Guarantee lipschitz_check(double kappa, double rho, double delta, unsigned max_k, std::size_t pairs, Rng& rng);

// Angular half-width of the open hyperbolic ball of radius t around a point of
// the circle of radius r (pi when the ball is the whole circle).
double circle_ball_halfwidth(double kappa, double r, double t);

// Arc covers of the circles S_{k rho}: on each circle m equally spaced
// half-open arcs [c - w/2, c + w/2), arc j in family j mod n. S_0 carries the
// single set {x0}.
class SphereAtlas {
 public:
  struct Sphere {
    double radius = 0.0;
    bool whole = false;  // one arc covering the circle
    std::size_t m = 1;   // arc count
    double spacing = 0.0;
    double width = 0.0;
  };

  // Throws ContractViolation when no equally spaced arc layout achieves
  // Lebesgue lambda and mesh D with n colours on some circle.
  SphereAtlas(double kappa, double rho, double lambda, double d, unsigned n_colors);

  double kappa() const { return kappa_; }
  double rho() const { return rho_; }
  double lambda() const { return lambda_; }
  double mesh_bound() const { return d_; }
  unsigned n_colors() const { return n_; }

  Sphere sphere(unsigned k) const;
  // Family (0-based) of arc j.
  unsigned family(std::size_t j) const { return unsigned(j % n_); }
  // Start angle of arc j, in [0, 2pi).
  double arc_start(unsigned k, std::size_t j) const;
  bool arc_contains(unsigned k, std::size_t j, double phi) const;
  // Per family, the arc containing angle phi (arcs of one family are disjoint).
  std::vector<std::optional<std::size_t>> arcs_at(unsigned k, double phi) const;
  // Arc on S_k containing theta_k(V) for V = arc j of S_{k+n}, chosen as the
  // first arc containing the lambda-ball around the projected midpoint.
  // Throws ContractViolation naming the sphere and arc when none contains the
  // whole projected arc.
  std::size_t theta_choice(unsigned k, std::size_t j) const;

 private:
  double kappa_, rho_, lambda_, d_;
  unsigned n_;
  mutable std::mutex mu_;
  mutable std::vector<std::optional<Sphere>> spheres_;
};

// Colored cover of `count` equally spaced points on S_{k rho} by the atlas arcs.
Cover sphere_sample_cover(const SphereAtlas& atlas, unsigned k, std::size_t count);

struct LiftCover {
  TransformResult result;
  std::vector<std::string> labels;  // "k:arc" of the generating sphere set, "core" for D_{N+n}
};

// Cover M_{rho,N} restricted to a sample of the hyperbolic plane: the sets
// U^# for U on the spheres S_k, k a multiple of n. Certificate checks
// multiplicity <= n+1, mesh <= 2(N+2n) rho + D and Lebesgue >= L.
LiftCover sphere_cover_lift(const SphereAtlas& atlas, const std::shared_ptr<const HyperbolicSpace>& sample,
                            unsigned big_n, double l);

}  // namespace coarse
