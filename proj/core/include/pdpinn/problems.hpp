#pragma once

// The four benchmark problems L[u] = q on Omega, u = u~ on the boundary:
//
//   poisson1d  u_xx = q on [-10, 10]
//   poisson2d  u_xx + u_yy = q on [-10, 10]^2
//   sphere     Laplace-Beltrami in (theta, phi), anchored at one point
//   diffusion  u_xx - u_t = q on [-10, 10] x [0, 1]
//
// All share g(x) = sin(0.7x) + cos(1.5x) - 0.1x except the sphere.

#include <array>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdpinn/dictionary.hpp"
#include "pdpinn/jet.hpp"

namespace pdpinn {

enum class ProblemId { poisson1d, poisson2d, sphere, diffusion };

inline constexpr double kPoleGuard = 0.01;
inline constexpr int kSphereOrder = 7;

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

// Coefficients of L[u] = sum_i second[i] u_ii + first[i] u_i + zeroth u at
// one point.
struct OperatorCoeffs {
  int dim = 0;
  std::array<double, kMaxJetDim> second{};
  std::array<double, kMaxJetDim> first{};
  double zeroth = 0.0;
};

// A boundary component: a single point when start == end, otherwise the
// straight segment between them.
struct BoundaryPiece {
  std::vector<double> start;
  std::vector<double> end;

  bool is_point() const { return start == end; }
  double length() const;
  std::vector<double> at(double s) const;  // s in [0, 1]
};

struct ProblemDefaults {
  DictionarySpec dictionary;
  bool lift = false;
  int n_pde = 0;
  int n_bc = 0;
  int iterations = 0;
};

using Field = std::function<Jet2(std::span<const double>)>;

class Problem {
 public:
  explicit Problem(ProblemId id);
  // Accepts poisson1d, poisson2d, sphere, diffusion (alias diffusion1d).
  static Problem from_name(const std::string& name);

  ProblemId id() const { return id_; }
  std::string name() const;
  int dim() const { return static_cast<int>(bounds_.size()); }

  // Coordinate box of the sampled region. For the sphere, theta excludes
  // the pole caps of width kPoleGuard.
  const std::vector<Interval>& bounds() const { return bounds_; }
  // Lebesgue measure of Omega (area for the sphere).
  double measure() const;
  // Width of the thinnest slab containing Omega.
  double slab_width() const;

  bool contains(std::span<const double> x) const;
  bool on_boundary(std::span<const double> x, double tol = 1e-9) const;

  double ground_truth(std::span<const double> x) const;
  Jet2 ground_truth_jet(std::span<const double> x) const;
  double rhs(std::span<const double> x) const;
  double boundary_value(std::span<const double> x) const;

  OperatorCoeffs operator_at(std::span<const double> x) const;

  template <typename T>
  T apply_operator(const BasicJet<T>& f, std::span<const double> x) const {
    const OperatorCoeffs c = operator_at(x);
    if (f.dim != c.dim) {
      throw std::invalid_argument("apply_operator: jet dimension does not match problem");
    }
    T acc(0.0);
    bool started = false;
    auto add = [&](double coef, const T& term) {
      if (coef == 0.0) return;
      const T v = coef == 1.0 ? term : T(coef * term);
      acc = started ? T(acc + v) : v;
      started = true;
    };
    for (int i = 0; i < c.dim; ++i) {
      const auto k = static_cast<std::size_t>(i);
      add(c.second[k], f.d2[k]);
      add(c.first[k], f.d1[k]);
    }
    add(c.zeroth, f.value);
    return acc;
  }

  const std::vector<BoundaryPiece>& boundary() const { return boundary_; }
  // Total length of the boundary segments, or the point count when the
  // boundary is a finite set of points.
  double boundary_measure() const;

  ProblemDefaults defaults() const;

  // Jets of the coordinates themselves at x.
  std::vector<Jet2> coordinate_jets(std::span<const double> x) const;

 private:
  void require_closure(std::span<const double> x, const char* what) const;

  ProblemId id_;
  std::vector<Interval> bounds_;
  std::vector<BoundaryPiece> boundary_;
};

std::string problem_name(ProblemId id);

// g(x) = sin(0.7x) + cos(1.5x) - 0.1x and g''(x).
double g_profile(double x);
double g_profile_d2(double x);

Field ground_truth_field(const Problem& p);

}  // namespace pdpinn
