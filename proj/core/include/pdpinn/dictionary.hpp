#pragma once

// Prior dictionaries D(x) = [f_1(x) ... f_N(x)] and their fusion with the
// network output, F(x) = <D(x), N(x)>.

#include <array>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdpinn/jet.hpp"

namespace pdpinn {

enum class DictionaryKind {
  none,               // D = [1]: plain PINN
  fourier1d,          // [1, cos x, sin x, ..., cos kx, sin kx]
  fourier2d,          // tensor products of sine ladders in normalized x, y
  diffusion_fourier,  // fourier1d on the first coordinate, constant in t
  spherical_harmonics // real orthonormal Y_l^m, l <= l_max
};

struct DictionarySpec {
  DictionaryKind kind = DictionaryKind::none;
  int k = 0;      // fourier1d, diffusion_fourier
  int k1 = 0;     // fourier2d
  int k2 = 0;     // fourier2d
  int l_max = 0;  // spherical_harmonics
  // fourier2d maps each coordinate from [lo, hi] onto [0, 1] before
  // evaluating the words.
  std::array<double, 2> normalize_lo{-10.0, -10.0};
  std::array<double, 2> normalize_hi{10.0, 10.0};

  static DictionarySpec none() { return {}; }
  static DictionarySpec fourier1d(int k);
  static DictionarySpec fourier2d(int k1, int k2);
  static DictionarySpec diffusion_fourier(int k);
  static DictionarySpec spherical_harmonics(int l_max);

  int word_count() const;
  // Number of problem coordinates the dictionary reads.
  int input_dim() const;
  void validate() const;

  // "none", "fourier1d:8", "fourier2d:5,5", "diffusion-fourier:10",
  // "spherical-harmonics:3"
  std::string to_string() const;
  static DictionarySpec parse(const std::string& text);

  bool operator==(const DictionarySpec&) const = default;
};

std::string kind_name(DictionaryKind kind);
DictionaryKind parse_dictionary_kind(const std::string& name);

// Associated Legendre function P_l^m(t) without the Condon-Shortley phase,
// together with its first and second derivatives in t.
struct LegendreValue {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

// Requires 0 <= m <= l and |t| <= 1. The derivatives of odd-m functions are
// unbounded at t = +-1; asking for them there is a domain error.
LegendreValue assoc_legendre(int l, int m, double t);

// Orthonormal constant of the real harmonic of degree l and order m:
// sqrt((2 - delta_m0) (2l+1)/(4 pi) (l-|m|)!/(l+|m|)!).
double sh_normalization(int l, int m);

std::vector<Jet2> eval_fourier1d(int k, const Jet2& x);

// x and y are normalized coordinates in [0, 1]. Word (i, j) sits at index
// i * k2 + j and equals s_i(x) s_j(y), with s_0 = 1, s_n(u) = sin(n pi u)/n.
std::vector<Jet2> eval_fourier2d(int k1, int k2, const Jet2& x, const Jet2& y);

// (theta, phi) -> (sin(theta) sin(phi), sin(theta) cos(phi), cos(theta))
std::array<Jet2, 3> lift_sphere(const Jet2& theta, const Jet2& phi);

// Words ordered by degree l, then order m = -l..l. m > 0 uses cos(m phi),
// m < 0 uses sin(|m| phi).
std::vector<Jet2> eval_spherical_harmonics(int l_max, const Jet2& theta, const Jet2& phi);

// Evaluates the dictionary on jets of the problem coordinates.
std::vector<Jet2> eval_dictionary(const DictionarySpec& spec, std::span<const Jet2> coords);

// <D, N> with the full product rule per coordinate.
template <typename T>
BasicJet<T> fuse(std::span<const Jet2> dict, std::span<const BasicJet<T>> net) {
  if (dict.size() != net.size()) {
    throw std::invalid_argument("fuse: dictionary has " + std::to_string(dict.size()) +
                                " words but network has " + std::to_string(net.size()) +
                                " outputs");
  }
  if (dict.empty()) {
    throw std::invalid_argument("fuse: empty dictionary");
  }
  BasicJet<T> acc = promote<T>(dict[0]) * net[0];
  for (std::size_t n = 1; n < dict.size(); ++n) {
    acc = acc + promote<T>(dict[n]) * net[n];
  }
  return acc;
}

}  // namespace pdpinn
