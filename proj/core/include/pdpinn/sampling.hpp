#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "pdpinn/problems.hpp"

namespace pdpinn {

using Rng = std::mt19937_64;

enum class Region { interior, boundary };

struct SampleBatch {
  Region region = Region::interior;
  int dim = 0;
  std::vector<double> coords;  // row-major, dim values per point

  std::size_t size() const { return dim == 0 ? 0 : coords.size() / static_cast<std::size_t>(dim); }
  std::span<const double> point(std::size_t i) const {
    return std::span<const double>(coords).subspan(i * static_cast<std::size_t>(dim),
                                                   static_cast<std::size_t>(dim));
  }
  void push_back(std::span<const double> p);
};

// n i.i.d. points uniform on Omega. The sphere is sampled uniformly by area
// (phi uniform, cos(theta) uniform) between the pole caps.
SampleBatch sample_interior(const Problem& p, int n, Rng& rng);

// Points on the boundary. Problems whose boundary is a finite set of points
// return every point each call and ignore n; otherwise n i.i.d. points
// uniform with respect to boundary length.
SampleBatch sample_boundary(const Problem& p, int n, Rng& rng);

}  // namespace pdpinn
