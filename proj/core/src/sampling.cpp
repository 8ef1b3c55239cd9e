#include "pdpinn/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pdpinn {

void SampleBatch::push_back(std::span<const double> p) {
  if (static_cast<int>(p.size()) != dim) {
    throw std::invalid_argument("SampleBatch::push_back: wrong point dimension");
  }
  coords.insert(coords.end(), p.begin(), p.end());
}

SampleBatch sample_interior(const Problem& p, int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_interior: n must be >= 1");
  SampleBatch batch;
  batch.region = Region::interior;
  batch.dim = p.dim();
  batch.coords.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(p.dim()));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto& b = p.bounds();

  if (p.id() == ProblemId::sphere) {
    const double zmin = std::cos(b[0].hi);
    const double zmax = std::cos(b[0].lo);
    for (int i = 0; i < n; ++i) {
      const double z = zmin + (zmax - zmin) * unit(rng);
      double theta = std::acos(z);
      theta = std::clamp(theta, b[0].lo, b[0].hi);
      const double phi = b[1].lo + b[1].length() * unit(rng);
      batch.coords.push_back(theta);
      batch.coords.push_back(phi);
    }
    return batch;
  }

  for (int i = 0; i < n; ++i) {
    for (const Interval& iv : b) batch.coords.push_back(iv.lo + iv.length() * unit(rng));
  }
  return batch;
}

SampleBatch sample_boundary(const Problem& p, int n, Rng& rng) {
  SampleBatch batch;
  batch.region = Region::boundary;
  batch.dim = p.dim();
  const auto& pieces = p.boundary();

  bool all_points = true;
  for (const BoundaryPiece& piece : pieces) all_points = all_points && piece.is_point();
  if (all_points) {
    for (const BoundaryPiece& piece : pieces) batch.push_back(piece.start);
    return batch;
  }

  if (n < 1) throw std::invalid_argument("sample_boundary: n must be >= 1");
  std::vector<double> cumulative;
  double total = 0.0;
  for (const BoundaryPiece& piece : pieces) {
    total += piece.length();
    cumulative.push_back(total);
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  batch.coords.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(p.dim()));
  for (int i = 0; i < n; ++i) {
    // arc-length position along the concatenated boundary
    const double u = total * unit(rng);
    std::size_t k = 0;
    while (k + 1 < cumulative.size() && u >= cumulative[k]) ++k;
    const double before = k == 0 ? 0.0 : cumulative[k - 1];
    const double s = std::clamp((u - before) / pieces[k].length(), 0.0, 1.0);
    batch.push_back(pieces[k].at(s));
  }
  return batch;
}

}  // namespace pdpinn
