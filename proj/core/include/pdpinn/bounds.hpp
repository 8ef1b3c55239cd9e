#pragma once

// Sup-norm error bounds for Poisson problems and the estimators they need.
//
// All sup quantities here are sampled estimates (max over dense samples
// plus a local refinement around the arg-max), not certificates.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pdpinn/model.hpp"
#include "pdpinn/problems.hpp"
#include "pdpinn/sampling.hpp"

namespace pdpinn {

struct Deltas {
  double delta1_sup = 0.0;  // sup over the boundary of |F - u~|
  double delta2_sup = 0.0;  // sup over Omega of |L[F] - q|
  double delta1_exp = 0.0;  // mean over the boundary of |F - u~|
  double delta2_exp = 0.0;  // mean over Omega of |L[F] - q|
};

Deltas estimate_sup_deltas(const Problem& p, const Field& f, int n_interior, int n_boundary,
                           Rng& rng);

// delta1 + (e^d - 1) delta2.
double poisson_bound(double delta1, double delta2, double slab_width);

struct DomainDescriptor {
  enum class Kind { interval, box, disk };
  Kind kind = Kind::interval;
  std::vector<double> lo;  // interval / box corners
  std::vector<double> hi;
  std::vector<double> center;  // disk
  double radius = 1.0;

  static DomainDescriptor interval(double lo, double hi);
  static DomainDescriptor box(std::vector<double> lo, std::vector<double> hi);
  static DomainDescriptor disk(double cx, double cy, double radius);
  // "interval", "square", "cube", "disk" (unit sizes), or
  // "interval:a,b", "box:a1,b1,a2,b2[,a3,b3]", "disk:cx,cy,r".
  static DomainDescriptor parse(const std::string& text);

  int dim() const;
  double measure() const;
  std::string to_string() const;
};

// Volume of the ball of radius r in R^dim.
double ball_volume(int dim, double r);

// |B(x, r) n Omega|. Exact for intervals and disks; boxes use a midpoint
// rule on `resolution` cells over the ball's shadow, integrating the exact
// chord length along the last axis.
double ball_intersection(const DomainDescriptor& domain, std::span<const double> center, double r,
                         int resolution = 100000);

// min over a grid of centers (grid points per axis, closure included) and
// radii of |B(x,r) n Omega| / min(|Omega|, |B(x,r)|).
double estimate_regularity(const DomainDescriptor& domain, int resolution = 100000, int grid = 11);

// Largest gradient norm over n uniform samples of the box, refined around
// the arg-max. A lower estimate of the Lipschitz constant.
double estimate_lipschitz(const Field& f, const std::vector<Interval>& box, int n, Rng& rng);
// Same, for a value-only function; gradients by central differences.
double estimate_lipschitz(const std::function<double(std::span<const double>)>& f,
                          const std::vector<Interval>& box, int n, Rng& rng);

// max{ 2 delta / R, 2 l (delta |S| Gamma(dim/2 + 1) / (l R pi^(dim/2)))^(1/(dim+1)) }
double tilde_delta(double delta, double l, double R, double measure, int dim);

struct BoundReport {
  std::string problem;
  double delta1_sup = 0.0;
  double delta2_sup = 0.0;
  double delta1_exp = 0.0;
  double delta2_exp = 0.0;
  double delta1_tilde = 0.0;
  double delta2_tilde = 0.0;
  double lipschitz_l = 0.0;
  double regularity_R = 0.0;
  double regularity_boundary_R = 0.0;
  double slab_width = 0.0;
  double bound_sup = 0.0;
  double bound_exp = 0.0;
  double observed_sup_error = 0.0;
  bool holds_sup = false;
  bool holds_exp = false;
};

struct BoundOptions {
  int n_interior = 10000;
  int n_boundary = 1000;
  int n_lipschitz = 10000;
  std::uint64_t seed = 2024;
  bool warn = true;  // print a warning to stderr when a bound is violated
};

// Poisson problems only (poisson1d, poisson2d).
BoundReport verify_bound(const Problem& p, const Field& f, const BoundOptions& opts = {});
BoundReport verify_bound(const Model& model, const BoundOptions& opts = {});

nlohmann::json to_json(const BoundReport& r);
BoundReport bound_report_from_json(const nlohmann::json& j);
std::string format_table(const BoundReport& r);

}  // namespace pdpinn
