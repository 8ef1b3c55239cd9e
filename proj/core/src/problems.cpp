#include "pdpinn/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pdpinn {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kClosureSlack = 1e-12;

template <typename T>
BasicJet<T> g_jet(const BasicJet<T>& x) {
  return (sin(0.7 * x) + cos(1.5 * x)) - 0.1 * x;
}

double sphere_truth(double theta, double phi) {
  const int m = kSphereOrder;
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  return ct * std::pow(st, m) * std::cos(m * phi) -
         ct * std::pow(st, m - 1) * std::cos((m - 1) * phi);
}

}  // namespace

double BoundaryPiece::length() const {
  double s = 0.0;
  for (std::size_t i = 0; i < start.size(); ++i) {
    const double d = end[i] - start[i];
    s += d * d;
  }
  return std::sqrt(s);
}

std::vector<double> BoundaryPiece::at(double s) const {
  std::vector<double> p(start.size());
  for (std::size_t i = 0; i < start.size(); ++i) p[i] = start[i] + s * (end[i] - start[i]);
  return p;
}

double g_profile(double x) { return std::sin(0.7 * x) + std::cos(1.5 * x) - 0.1 * x; }

double g_profile_d2(double x) { return -0.49 * std::sin(0.7 * x) - 2.25 * std::cos(1.5 * x); }

std::string problem_name(ProblemId id) {
  switch (id) {
    case ProblemId::poisson1d:
      return "poisson1d";
    case ProblemId::poisson2d:
      return "poisson2d";
    case ProblemId::sphere:
      return "sphere";
    case ProblemId::diffusion:
      return "diffusion";
  }
  return "?";
}

Problem::Problem(ProblemId id) : id_(id) {
  switch (id) {
    case ProblemId::poisson1d:
      bounds_ = {{-10.0, 10.0}};
      boundary_ = {{{-10.0}, {-10.0}}, {{10.0}, {10.0}}};
      break;
    case ProblemId::poisson2d:
      bounds_ = {{-10.0, 10.0}, {-10.0, 10.0}};
      boundary_ = {{{-10.0, -10.0}, {10.0, -10.0}},
                   {{10.0, -10.0}, {10.0, 10.0}},
                   {{10.0, 10.0}, {-10.0, 10.0}},
                   {{-10.0, 10.0}, {-10.0, -10.0}}};
      break;
    case ProblemId::sphere:
      bounds_ = {{kPoleGuard, kPi - kPoleGuard}, {0.0, 2.0 * kPi}};
      boundary_ = {{{1.0, 1.0}, {1.0, 1.0}}};
      break;
    case ProblemId::diffusion:
      bounds_ = {{-10.0, 10.0}, {0.0, 1.0}};
      boundary_ = {{{-10.0, 0.0}, {10.0, 0.0}},
                   {{-10.0, 0.0}, {-10.0, 1.0}},
                   {{10.0, 0.0}, {10.0, 1.0}}};
      break;
  }
}

Problem Problem::from_name(const std::string& name) {
  if (name == "poisson1d") return Problem(ProblemId::poisson1d);
  if (name == "poisson2d") return Problem(ProblemId::poisson2d);
  if (name == "sphere") return Problem(ProblemId::sphere);
  if (name == "diffusion" || name == "diffusion1d") return Problem(ProblemId::diffusion);
  throw std::invalid_argument("unknown problem id '" + name + "'");
}

std::string Problem::name() const { return problem_name(id_); }

double Problem::measure() const {
  if (id_ == ProblemId::sphere) {
    // area of the unit sphere between the pole caps
    return 2.0 * kPi * (std::cos(bounds_[0].lo) - std::cos(bounds_[0].hi));
  }
  double v = 1.0;
  for (const Interval& b : bounds_) v *= b.length();
  return v;
}

double Problem::slab_width() const {
  if (id_ == ProblemId::sphere) return 2.0;
  double w = bounds_[0].length();
  for (const Interval& b : bounds_) w = std::min(w, b.length());
  return w;
}

bool Problem::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  if (id_ == ProblemId::sphere) {
    // closed sphere; phi is periodic
    return x[0] >= -kClosureSlack && x[0] <= kPi + kClosureSlack && std::isfinite(x[1]);
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= bounds_[i].lo - kClosureSlack && x[i] <= bounds_[i].hi + kClosureSlack)) {
      return false;
    }
  }
  return true;
}

void Problem::require_closure(std::span<const double> x, const char* what) const {
  if (static_cast<int>(x.size()) != dim()) {
    throw std::invalid_argument(std::string(what) + ": " + name() + " expects " +
                                std::to_string(dim()) + " coordinates");
  }
  if (!contains(x)) {
    throw DomainError(std::string(what) + ": point outside the " + name() + " domain");
  }
}

bool Problem::on_boundary(std::span<const double> x, double tol) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (const BoundaryPiece& piece : boundary_) {
    if (piece.is_point()) {
      double d = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - piece.start[i]));
      if (d <= tol) return true;
      continue;
    }
    // distance to the segment
    const double len = piece.length();
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      s += (x[i] - piece.start[i]) * (piece.end[i] - piece.start[i]);
    }
    s = std::clamp(s / (len * len), 0.0, 1.0);
    const auto p = piece.at(s);
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - p[i]));
    if (d <= tol) return true;
  }
  return false;
}

double Problem::ground_truth(std::span<const double> x) const {
  require_closure(x, "ground_truth");
  switch (id_) {
    case ProblemId::poisson1d:
      return g_profile(x[0]);
    case ProblemId::poisson2d:
      return g_profile(x[0]) * std::sin((x[1] + 10.0) * kPi / 20.0);
    case ProblemId::sphere:
      return sphere_truth(x[0], x[1]);
    case ProblemId::diffusion:
      return g_profile(x[0]) * x[1];
  }
  return 0.0;
}

std::vector<Jet2> Problem::coordinate_jets(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) {
    throw std::invalid_argument("coordinate_jets: wrong coordinate count");
  }
  std::vector<Jet2> out;
  out.reserve(x.size());
  for (int i = 0; i < dim(); ++i) out.push_back(Jet2::variable(x[static_cast<std::size_t>(i)], dim(), i));
  return out;
}

Jet2 Problem::ground_truth_jet(std::span<const double> x) const {
  require_closure(x, "ground_truth_jet");
  const auto c = coordinate_jets(x);
  switch (id_) {
    case ProblemId::poisson1d:
      return g_jet(c[0]);
    case ProblemId::poisson2d:
      return g_jet(c[0]) * sin((kPi / 20.0) * (c[1] + 10.0));
    case ProblemId::sphere: {
      const int m = kSphereOrder;
      const Jet2 ct = cos(c[0]);
      const Jet2 st = sin(c[0]);
      return ct * pow_int(st, m) * cos(static_cast<double>(m) * c[1]) -
             ct * pow_int(st, m - 1) * cos(static_cast<double>(m - 1) * c[1]);
    }
    case ProblemId::diffusion:
      return g_jet(c[0]) * c[1];
  }
  return {};
}

double Problem::rhs(std::span<const double> x) const {
  require_closure(x, "rhs_q");
  switch (id_) {
    case ProblemId::poisson1d:
      return -0.49 * std::sin(0.7 * x[0]) - 2.25 * std::cos(1.5 * x[0]);
    case ProblemId::poisson2d: {
      const double sy = std::sin((x[1] + 10.0) / 20.0 * kPi);
      return -sy * (0.49 * std::sin(0.7 * x[0]) + 2.25 * std::cos(1.5 * x[0])) -
             g_profile(x[0]) * sy * (kPi * kPi) / 400.0;
    }
    case ProblemId::sphere: {
      const double m = kSphereOrder;
      const double ct = std::cos(x[0]);
      const double st = std::sin(x[0]);
      return -(m + 1.0) * (m + 2.0) * ct * std::pow(st, m) * std::cos(m * x[1]) +
             m * (m + 1.0) * ct * std::pow(st, m - 1.0) * std::cos((m - 1.0) * x[1]);
    }
    case ProblemId::diffusion:
      return g_profile_d2(x[0]) * x[1] - g_profile(x[0]);
  }
  return 0.0;
}

double Problem::boundary_value(std::span<const double> x) const {
  if (!on_boundary(x)) {
    throw DomainError("boundary_value: point is not on the " + name() + " boundary");
  }
  switch (id_) {
    case ProblemId::poisson1d:
    case ProblemId::sphere:
      return ground_truth(x);
    case ProblemId::poisson2d:
      if (std::abs(std::abs(x[1]) - 10.0) <= 1e-9) return 0.0;
      return ground_truth(x);
    case ProblemId::diffusion:
      if (std::abs(x[1]) <= 1e-9) return 0.0;
      return ground_truth(x);
  }
  return 0.0;
}

OperatorCoeffs Problem::operator_at(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim()) {
    throw std::invalid_argument("operator_at: wrong coordinate count");
  }
  OperatorCoeffs c;
  c.dim = dim();
  switch (id_) {
    case ProblemId::poisson1d:
      c.second[0] = 1.0;
      break;
    case ProblemId::poisson2d:
      c.second[0] = 1.0;
      c.second[1] = 1.0;
      break;
    case ProblemId::sphere: {
      const double theta = x[0];
      if (!(theta >= kPoleGuard - kClosureSlack && theta <= kPi - kPoleGuard + kClosureSlack)) {
        throw DomainError("sphere operator evaluated within " + std::to_string(kPoleGuard) +
                          " rad of a pole (theta = " + std::to_string(theta) + ")");
      }
      const double st = std::sin(theta);
      c.second[0] = 1.0;
      c.first[0] = std::cos(theta) / st;
      c.second[1] = 1.0 / (st * st);
      break;
    }
    case ProblemId::diffusion:
      c.second[0] = 1.0;
      c.first[1] = -1.0;
      break;
  }
  return c;
}

double Problem::boundary_measure() const {
  double total = 0.0;
  bool all_points = true;
  for (const BoundaryPiece& p : boundary_) {
    if (!p.is_point()) {
      all_points = false;
      total += p.length();
    }
  }
  return all_points ? static_cast<double>(boundary_.size()) : total;
}

ProblemDefaults Problem::defaults() const {
  switch (id_) {
    case ProblemId::poisson1d:
      return {DictionarySpec::fourier1d(8), false, 100, 2, 1000};
    case ProblemId::poisson2d:
      return {DictionarySpec::fourier2d(5, 5), false, 1000, 400, 1000};
    case ProblemId::sphere:
      return {DictionarySpec::spherical_harmonics(3), true, 200, 1, 2000};
    case ProblemId::diffusion:
      return {DictionarySpec::diffusion_fourier(10), false, 1000, 300, 2000};
  }
  return {};
}

Field ground_truth_field(const Problem& p) {
  return [p](std::span<const double> x) { return p.ground_truth_jet(x); };
}

}  // namespace pdpinn
