#include "pdpinn/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/algorithm/string.hpp>
#include <nlohmann/json.hpp>

namespace pdpinn {

namespace {

using Score = std::function<double(std::span<const double>)>;

constexpr int kRefinePoints = 1000;
constexpr double kRefineScale = 0.01;

struct Best {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<double> point;

  void offer(double v, std::span<const double> x) {
    if (v > value) {
      value = v;
      point.assign(x.begin(), x.end());
    }
  }
};

// Evaluate `score` on a regular local grid of about kRefinePoints points
// centred at `best.point`, spanning kRefineScale of each box side.
void refine_in_box(const Score& score, const std::vector<Interval>& box, Best& best) {
  if (best.point.empty()) return;
  const int dim = static_cast<int>(box.size());
  const int per_axis = std::max(2, static_cast<int>(std::lround(std::pow(kRefinePoints, 1.0 / dim))));
  const std::vector<double> centre = best.point;
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  std::vector<double> x(static_cast<std::size_t>(dim));
  while (true) {
    for (int k = 0; k < dim; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      const double half = 0.5 * kRefineScale * box[kk].length();
      const double t = static_cast<double>(idx[kk]) / (per_axis - 1);
      x[kk] = std::clamp(centre[kk] - half + 2.0 * half * t, box[kk].lo, box[kk].hi);
    }
    best.offer(score(x), x);
    int k = 0;
    while (k < dim && ++idx[static_cast<std::size_t>(k)] == per_axis) {
      idx[static_cast<std::size_t>(k)] = 0;
      ++k;
    }
    if (k == dim) break;
  }
}

// Index of the boundary segment nearest to x.
std::size_t nearest_piece(const std::vector<BoundaryPiece>& pieces, std::span<const double> x) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const auto& a = pieces[k].start;
    const auto& b = pieces[k].end;
    double ab2 = 0.0;
    double ax_ab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      ab2 += (b[i] - a[i]) * (b[i] - a[i]);
      ax_ab += (x[i] - a[i]) * (b[i] - a[i]);
    }
    const double s = ab2 > 0.0 ? std::clamp(ax_ab / ab2, 0.0, 1.0) : 0.0;
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double p = a[i] + s * (b[i] - a[i]);
      d2 += (x[i] - p) * (x[i] - p);
    }
    if (d2 < best_d) {
      best_d = d2;
      best = k;
    }
  }
  return best;
}

double segment_parameter(const BoundaryPiece& piece, std::span<const double> x) {
  double ab2 = 0.0;
  double ax_ab = 0.0;
  for (std::size_t i = 0; i < piece.start.size(); ++i) {
    const double d = piece.end[i] - piece.start[i];
    ab2 += d * d;
    ax_ab += (x[i] - piece.start[i]) * d;
  }
  return ab2 > 0.0 ? std::clamp(ax_ab / ab2, 0.0, 1.0) : 0.0;
}

void refine_on_boundary(const Score& score, const std::vector<BoundaryPiece>& pieces, Best& best) {
  if (best.point.empty()) return;
  const BoundaryPiece& piece = pieces[nearest_piece(pieces, best.point)];
  if (piece.is_point()) return;
  const double s0 = segment_parameter(piece, best.point);
  for (int i = 0; i < kRefinePoints; ++i) {
    const double t = static_cast<double>(i) / (kRefinePoints - 1);
    const double s = std::clamp(s0 - 0.5 * kRefineScale + kRefineScale * t, 0.0, 1.0);
    const auto x = piece.at(s);
    best.offer(score(x), x);
  }
}

// Sup of `score` over uniform interior samples, refined.
double sup_interior(const Score& score, const SampleBatch& samples, const std::vector<Interval>& box,
                    double* mean) {
  Best best;
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto x = samples.point(i);
    const double v = score(x);
    sum += v;
    best.offer(v, x);
  }
  if (mean) *mean = sum / static_cast<double>(samples.size());
  refine_in_box(score, box, best);
  return best.value;
}

double sup_boundary(const Score& score, const SampleBatch& samples,
                    const std::vector<BoundaryPiece>& pieces, double* mean) {
  Best best;
  double sum = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto x = samples.point(i);
    const double v = score(x);
    sum += v;
    best.offer(v, x);
  }
  if (mean) *mean = sum / static_cast<double>(samples.size());
  refine_on_boundary(score, pieces, best);
  return best.value;
}

double interval_overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

// Area of the intersection of two disks with radii r1, r2 and centre
// distance d.
double lens_area(double r1, double r2, double d) {
  if (d >= r1 + r2) return 0.0;
  const double rmin = std::min(r1, r2);
  if (d <= std::abs(r1 - r2)) return std::numbers::pi * rmin * rmin;
  const double a1 = std::acos(std::clamp((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1), -1.0, 1.0));
  const double a2 = std::acos(std::clamp((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2), -1.0, 1.0));
  const double k = std::sqrt(std::max(0.0, (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2)));
  return r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * k;
}

double box_intersection(const DomainDescriptor& box, std::span<const double> c, double r,
                        int resolution) {
  const int dim = box.dim();
  if (dim == 1) return interval_overlap(c[0] - r, c[0] + r, box.lo[0], box.hi[0]);
  const int last = dim - 1;
  const auto lz = static_cast<std::size_t>(last);
  auto chord = [&](double rho2) {
    const double h2 = r * r - rho2;
    if (h2 <= 0.0) return 0.0;
    const double h = std::sqrt(h2);
    return interval_overlap(c[lz] - h, c[lz] + h, box.lo[lz], box.hi[lz]);
  };
  if (dim == 2) {
    const double a = std::max(box.lo[0], c[0] - r);
    const double b = std::min(box.hi[0], c[0] + r);
    if (b <= a) return 0.0;
    const int n = std::max(16, resolution);
    const double w = (b - a) / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double dx = a + (i + 0.5) * w - c[0];
      sum += chord(dx * dx);
    }
    return sum * w;
  }
  const double ax = std::max(box.lo[0], c[0] - r);
  const double bx = std::min(box.hi[0], c[0] + r);
  const double ay = std::max(box.lo[1], c[1] - r);
  const double by = std::min(box.hi[1], c[1] + r);
  if (bx <= ax || by <= ay) return 0.0;
  const int n = std::max(16, static_cast<int>(std::lround(std::sqrt(static_cast<double>(resolution)))));
  const double wx = (bx - ax) / n;
  const double wy = (by - ay) / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double dx = ax + (i + 0.5) * wx - c[0];
    for (int j = 0; j < n; ++j) {
      const double dy = ay + (j + 0.5) * wy - c[1];
      sum += chord(dx * dx + dy * dy);
    }
  }
  return sum * wx * wy;
}

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(","));
  std::vector<double> out;
  for (auto& p : parts) {
    boost::trim(p);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(p, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != p.size()) throw std::invalid_argument("not a number: '" + p + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

Deltas estimate_sup_deltas(const Problem& p, const Field& f, int n_interior, int n_boundary,
                           Rng& rng) {
  if (n_interior < 1 || n_boundary < 1) {
    throw std::invalid_argument("estimate_sup_deltas: sample counts must be >= 1");
  }
  const SampleBatch interior = sample_interior(p, n_interior, rng);
  const SampleBatch boundary = sample_boundary(p, n_boundary, rng);
  const Score pde = [&](std::span<const double> x) {
    return std::abs(p.apply_operator(f(x), x) - p.rhs(x));
  };
  const Score bc = [&](std::span<const double> x) {
    return std::abs(f(x).value - p.boundary_value(x));
  };
  Deltas d;
  d.delta2_sup = sup_interior(pde, interior, p.bounds(), &d.delta2_exp);
  d.delta1_sup = sup_boundary(bc, boundary, p.boundary(), &d.delta1_exp);
  return d;
}

double poisson_bound(double delta1, double delta2, double slab_width) {
  if (!(slab_width > 0.0)) throw std::invalid_argument("poisson_bound: slab width must be > 0");
  return delta1 + std::expm1(slab_width) * delta2;
}

DomainDescriptor DomainDescriptor::interval(double lo, double hi) {
  if (!(hi > lo)) throw std::invalid_argument("interval: need lo < hi");
  DomainDescriptor d;
  d.kind = Kind::interval;
  d.lo = {lo};
  d.hi = {hi};
  return d;
}

DomainDescriptor DomainDescriptor::box(std::vector<double> lo, std::vector<double> hi) {
  if (lo.size() != hi.size() || lo.size() < 2 || lo.size() > 3) {
    throw std::invalid_argument("box: need 2 or 3 matching corner coordinates");
  }
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(hi[i] > lo[i])) throw std::invalid_argument("box: need lo < hi on every axis");
  }
  DomainDescriptor d;
  d.kind = Kind::box;
  d.lo = std::move(lo);
  d.hi = std::move(hi);
  return d;
}

DomainDescriptor DomainDescriptor::disk(double cx, double cy, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("disk: radius must be > 0");
  DomainDescriptor d;
  d.kind = Kind::disk;
  d.center = {cx, cy};
  d.radius = radius;
  return d;
}

DomainDescriptor DomainDescriptor::parse(const std::string& text) {
  std::string name = text;
  std::string args;
  if (const auto colon = text.find(':'); colon != std::string::npos) {
    name = text.substr(0, colon);
    args = text.substr(colon + 1);
  }
  boost::trim(name);
  boost::to_lower(name);
  const auto nums = args.empty() ? std::vector<double>{} : parse_numbers(args);
  if (name == "interval") {
    if (nums.empty()) return interval(0.0, 1.0);
    if (nums.size() == 2) return interval(nums[0], nums[1]);
  } else if (name == "square" && nums.empty()) {
    return box({0.0, 0.0}, {1.0, 1.0});
  } else if (name == "cube" && nums.empty()) {
    return box({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});
  } else if (name == "box" && (nums.size() == 4 || nums.size() == 6)) {
    std::vector<double> lo;
    std::vector<double> hi;
    for (std::size_t i = 0; i < nums.size(); i += 2) {
      lo.push_back(nums[i]);
      hi.push_back(nums[i + 1]);
    }
    return box(lo, hi);
  } else if (name == "disk") {
    if (nums.empty()) return disk(0.0, 0.0, 1.0);
    if (nums.size() == 3) return disk(nums[0], nums[1], nums[2]);
  } else if (name != "square" && name != "cube" && name != "box") {
    throw std::invalid_argument("unsupported domain '" + name +
                                "' (expected interval, square, cube, box or disk)");
  }
  throw std::invalid_argument("wrong number of parameters for domain '" + text + "'");
}

int DomainDescriptor::dim() const {
  return kind == Kind::disk ? 2 : static_cast<int>(lo.size());
}

double DomainDescriptor::measure() const {
  if (kind == Kind::disk) return std::numbers::pi * radius * radius;
  double m = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) m *= hi[i] - lo[i];
  return m;
}

std::string DomainDescriptor::to_string() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::interval:
      os << "interval:" << lo[0] << ',' << hi[0];
      break;
    case Kind::box:
      os << "box:";
      for (std::size_t i = 0; i < lo.size(); ++i) os << (i ? "," : "") << lo[i] << ',' << hi[i];
      break;
    case Kind::disk:
      os << "disk:" << center[0] << ',' << center[1] << ',' << radius;
      break;
  }
  return os.str();
}

double ball_volume(int dim, double r) {
  const double h = 0.5 * dim;
  return std::pow(std::numbers::pi, h) * std::pow(r, dim) / std::tgamma(h + 1.0);
}

double ball_intersection(const DomainDescriptor& domain, std::span<const double> center, double r,
                         int resolution) {
  if (static_cast<int>(center.size()) != domain.dim()) {
    throw std::invalid_argument("ball_intersection: centre dimension mismatch");
  }
  if (!(r > 0.0)) return 0.0;
  switch (domain.kind) {
    case DomainDescriptor::Kind::interval:
      return interval_overlap(center[0] - r, center[0] + r, domain.lo[0], domain.hi[0]);
    case DomainDescriptor::Kind::disk: {
      const double d = std::hypot(center[0] - domain.center[0], center[1] - domain.center[1]);
      return lens_area(domain.radius, r, d);
    }
    case DomainDescriptor::Kind::box:
      return box_intersection(domain, center, r, resolution);
  }
  throw std::logic_error("unreachable");
}

double estimate_regularity(const DomainDescriptor& domain, int resolution, int grid) {
  if (grid < 2) throw std::invalid_argument("estimate_regularity: grid must be >= 2");
  if (resolution < 1) throw std::invalid_argument("estimate_regularity: resolution must be >= 1");
  const int dim = domain.dim();
  std::vector<Interval> box;
  if (domain.kind == DomainDescriptor::Kind::disk) {
    for (int k = 0; k < 2; ++k) {
      box.push_back({domain.center[static_cast<std::size_t>(k)] - domain.radius,
                     domain.center[static_cast<std::size_t>(k)] + domain.radius});
    }
  } else {
    for (std::size_t k = 0; k < domain.lo.size(); ++k) box.push_back({domain.lo[k], domain.hi[k]});
  }
  double diameter2 = 0.0;
  for (const Interval& iv : box) diameter2 += iv.length() * iv.length();
  const double diameter = std::sqrt(diameter2);
  const double total = domain.measure();

  constexpr int kRadii = 32;
  std::vector<double> radii;
  for (int i = 0; i < kRadii; ++i) {
    radii.push_back(diameter * std::pow(1e-3, 1.0 - static_cast<double>(i) / (kRadii - 1)));
  }

  double best = std::numeric_limits<double>::infinity();
  std::vector<int> idx(static_cast<std::size_t>(dim), 0);
  std::vector<double> x(static_cast<std::size_t>(dim));
  while (true) {
    for (int k = 0; k < dim; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      x[kk] = box[kk].lo + box[kk].length() * idx[kk] / (grid - 1);
    }
    bool inside = true;
    if (domain.kind == DomainDescriptor::Kind::disk) {
      inside = std::hypot(x[0] - domain.center[0], x[1] - domain.center[1]) <=
               domain.radius * (1.0 + 1e-12);
    }
    if (inside) {
      for (double r : radii) {
        const double ratio =
            ball_intersection(domain, x, r, resolution) / std::min(total, ball_volume(dim, r));
        best = std::min(best, ratio);
      }
    }
    int k = 0;
    while (k < dim && ++idx[static_cast<std::size_t>(k)] == grid) {
      idx[static_cast<std::size_t>(k)] = 0;
      ++k;
    }
    if (k == dim) break;
  }
  return std::min(best, 1.0);
}

double estimate_lipschitz(const Field& f, const std::vector<Interval>& box, int n, Rng& rng) {
  const Score score = [&](std::span<const double> x) {
    const Jet2 j = f(x);
    double s = 0.0;
    for (int k = 0; k < j.dim; ++k) s += j.d1[static_cast<std::size_t>(k)] * j.d1[static_cast<std::size_t>(k)];
    return std::sqrt(s);
  };
  if (n < 1) throw std::invalid_argument("estimate_lipschitz: n must be >= 1");
  SampleBatch samples;
  samples.dim = static_cast<int>(box.size());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> x(box.size());
  for (int i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < box.size(); ++k) x[k] = box[k].lo + box[k].length() * unit(rng);
    samples.push_back(x);
  }
  return sup_interior(score, samples, box, nullptr);
}

double estimate_lipschitz(const std::function<double(std::span<const double>)>& f,
                          const std::vector<Interval>& box, int n, Rng& rng) {
  const Field jet = [&](std::span<const double> x) {
    const int dim = static_cast<int>(x.size());
    Jet2 j = Jet2::constant(f(x), dim);
    std::vector<double> c(x.begin(), x.end());
    for (int k = 0; k < dim; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      const double h = 1e-5 * std::max(1.0, box[kk].length());
      // keep the stencil inside the box
      const double centre = std::clamp(x[kk], box[kk].lo + h, box[kk].hi - h);
      std::vector<double> xp = c;
      std::vector<double> xm = c;
      xp[kk] = centre + h;
      xm[kk] = centre - h;
      j.d1[kk] = (f(xp) - f(xm)) / (2.0 * h);
    }
    return j;
  };
  return estimate_lipschitz(jet, box, n, rng);
}

double tilde_delta(double delta, double l, double R, double measure, int dim) {
  if (!(l > 0.0)) throw std::invalid_argument("tilde_delta: l must be > 0");
  if (!(R > 0.0)) throw std::invalid_argument("tilde_delta: R must be > 0");
  if (!(measure > 0.0)) throw std::invalid_argument("tilde_delta: measure must be > 0");
  if (dim < 1) throw std::invalid_argument("tilde_delta: dim must be >= 1");
  if (delta < 0.0) throw std::invalid_argument("tilde_delta: delta must be >= 0");
  const double h = 0.5 * dim;
  const double first = 2.0 * delta / R;
  const double inner = delta * measure * std::tgamma(h + 1.0) / (l * R * std::pow(std::numbers::pi, h));
  const double second = 2.0 * l * std::pow(inner, 1.0 / (dim + 1));
  return std::max(first, second);
}

BoundReport verify_bound(const Problem& p, const Field& f, const BoundOptions& opts) {
  if (p.id() != ProblemId::poisson1d && p.id() != ProblemId::poisson2d) {
    throw std::invalid_argument("error bounds are only available for poisson1d and poisson2d, not " +
                                p.name());
  }
  Rng rng(opts.seed);
  BoundReport r;
  r.problem = p.name();
  const Deltas d = estimate_sup_deltas(p, f, opts.n_interior, opts.n_boundary, rng);
  r.delta1_sup = d.delta1_sup;
  r.delta2_sup = d.delta2_sup;
  r.delta1_exp = d.delta1_exp;
  r.delta2_exp = d.delta2_exp;

  const SampleBatch interior = sample_interior(p, opts.n_interior, rng);
  const SampleBatch boundary = sample_boundary(p, opts.n_boundary, rng);
  const Score err = [&](std::span<const double> x) {
    return std::abs(f(x).value - p.ground_truth(x));
  };
  r.observed_sup_error = std::max(sup_interior(err, interior, p.bounds(), nullptr),
                                  sup_boundary(err, boundary, p.boundary(), nullptr));

  const auto& box = p.bounds();
  const Field truth = ground_truth_field(p);
  const auto op_value = [&](std::span<const double> x) { return p.apply_operator(f(x), x); };
  const auto q_value = [&](std::span<const double> x) { return p.rhs(x); };
  const double lf = estimate_lipschitz(f, box, opts.n_lipschitz, rng);
  const double lu = estimate_lipschitz(truth, box, opts.n_lipschitz, rng);
  const double llf = estimate_lipschitz(op_value, box, opts.n_lipschitz, rng);
  const double lq = estimate_lipschitz(q_value, box, opts.n_lipschitz, rng);
  r.lipschitz_l = 2.0 * std::max({lf, lu, llf, lq});

  std::vector<double> lo;
  std::vector<double> hi;
  for (const Interval& iv : box) {
    lo.push_back(iv.lo);
    hi.push_back(iv.hi);
  }
  const DomainDescriptor domain =
      lo.size() == 1 ? DomainDescriptor::interval(lo[0], hi[0]) : DomainDescriptor::box(lo, hi);
  r.regularity_R = estimate_regularity(domain);
  // The boundary (two points under counting measure, or the square's
  // perimeter under arc length) meets every small ball in at least a full
  // one-dimensional ball's worth of measure.
  r.regularity_boundary_R = 1.0;
  r.slab_width = p.slab_width();

  r.bound_sup = poisson_bound(r.delta1_sup, r.delta2_sup, r.slab_width);
  const double l = std::max(r.lipschitz_l, std::numeric_limits<double>::min());
  r.delta1_tilde = tilde_delta(r.delta1_exp, l, r.regularity_boundary_R, p.boundary_measure(), p.dim());
  r.delta2_tilde = tilde_delta(r.delta2_exp, l, r.regularity_R, p.measure(), p.dim());
  r.bound_exp = poisson_bound(r.delta1_tilde, r.delta2_tilde, r.slab_width);

  // Allow for rounding in the sampled sup estimates only.
  auto within = [&](double bound) {
    return r.observed_sup_error <= bound * (1.0 + 1e-12) + 4.0 * std::numeric_limits<double>::epsilon();
  };
  r.holds_sup = within(r.bound_sup);
  r.holds_exp = within(r.bound_exp);
  if (opts.warn && (!r.holds_sup || !r.holds_exp)) {
    std::cerr << "WARNING: error bound violated on " << r.problem
              << ": observed sup error " << r.observed_sup_error << " vs bound_sup "
              << r.bound_sup << ", bound_exp " << r.bound_exp << '\n';
  }
  return r;
}

BoundReport verify_bound(const Model& model, const BoundOptions& opts) {
  return verify_bound(model.problem(), model.field(), opts);
}

nlohmann::json to_json(const BoundReport& r) {
  return nlohmann::json{
      {"problem", r.problem},
      {"delta1_sup", r.delta1_sup},
      {"delta2_sup", r.delta2_sup},
      {"delta1_exp", r.delta1_exp},
      {"delta2_exp", r.delta2_exp},
      {"delta1_tilde", r.delta1_tilde},
      {"delta2_tilde", r.delta2_tilde},
      {"lipschitz_l", r.lipschitz_l},
      {"regularity_R", r.regularity_R},
      {"regularity_boundary_R", r.regularity_boundary_R},
      {"slab_width", r.slab_width},
      {"bound_sup", r.bound_sup},
      {"bound_exp", r.bound_exp},
      {"observed_sup_error", r.observed_sup_error},
      {"holds_sup", r.holds_sup},
      {"holds_exp", r.holds_exp},
  };
}

BoundReport bound_report_from_json(const nlohmann::json& j) {
  BoundReport r;
  r.problem = j.at("problem").get<std::string>();
  r.delta1_sup = j.at("delta1_sup").get<double>();
  r.delta2_sup = j.at("delta2_sup").get<double>();
  r.delta1_exp = j.at("delta1_exp").get<double>();
  r.delta2_exp = j.at("delta2_exp").get<double>();
  r.delta1_tilde = j.at("delta1_tilde").get<double>();
  r.delta2_tilde = j.at("delta2_tilde").get<double>();
  r.lipschitz_l = j.at("lipschitz_l").get<double>();
  r.regularity_R = j.at("regularity_R").get<double>();
  r.regularity_boundary_R = j.at("regularity_boundary_R").get<double>();
  r.slab_width = j.at("slab_width").get<double>();
  r.bound_sup = j.at("bound_sup").get<double>();
  r.bound_exp = j.at("bound_exp").get<double>();
  r.observed_sup_error = j.at("observed_sup_error").get<double>();
  r.holds_sup = j.at("holds_sup").get<bool>();
  r.holds_exp = j.at("holds_exp").get<bool>();
  return r;
}

std::string format_table(const BoundReport& r) {
  std::ostringstream os;
  char line[128];
  auto row = [&](const char* name, double v) {
    std::snprintf(line, sizeof line, "  %-28s %.6e\n", name, v);
    os << line;
  };
  os << "error bound report: " << r.problem << '\n';
  row("delta1 (sup, boundary)", r.delta1_sup);
  row("delta2 (sup, interior)", r.delta2_sup);
  row("delta1 (mean, boundary)", r.delta1_exp);
  row("delta2 (mean, interior)", r.delta2_exp);
  row("delta1~", r.delta1_tilde);
  row("delta2~", r.delta2_tilde);
  row("Lipschitz l (estimate)", r.lipschitz_l);
  row("regularity R", r.regularity_R);
  row("boundary regularity R", r.regularity_boundary_R);
  row("slab width d", r.slab_width);
  row("observed sup error", r.observed_sup_error);
  row("bound (sup deltas)", r.bound_sup);
  row("bound (mean deltas)", r.bound_exp);
  os << "  sup bound:  " << (r.holds_sup ? "holds" : "VIOLATED") << '\n';
  os << "  mean bound: " << (r.holds_exp ? "holds" : "VIOLATED") << '\n';
  return os.str();
}

}  // namespace pdpinn
