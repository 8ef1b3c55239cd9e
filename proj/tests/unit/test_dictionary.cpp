#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "finite_difference.hpp"
#include "pdpinn/dictionary.hpp"
#include "pdpinn/sampling.hpp"
#include "quadrature.hpp"

namespace pdpinn {
namespace {

using testing::rel_error;
constexpr double kPi = std::numbers::pi;

TEST(AssocLegendre, ClosedFormValue) {
  // P_3^2(t) = 15 t (1 - t^2) without the Condon-Shortley phase
  const double t = 0.5;
  EXPECT_NEAR(assoc_legendre(3, 2, t).value, 15.0 * t * (1.0 - t * t), 1e-13);
  EXPECT_NEAR(assoc_legendre(3, 2, t).value, 5.625, 1e-13);
  // P_2^1(t) = 3 t sqrt(1 - t^2)
  EXPECT_NEAR(assoc_legendre(2, 1, 0.3).value, 3.0 * 0.3 * std::sqrt(1.0 - 0.09), 1e-13);
  EXPECT_NEAR(assoc_legendre(0, 0, -0.7).value, 1.0, 0.0);
}

TEST(AssocLegendre, DerivativesMatchFiniteDifferences) {
  Rng rng(4);
  std::uniform_real_distribution<double> u(-0.95, 0.95);
  for (int l = 0; l <= 6; ++l) {
    for (int m = 0; m <= l; ++m) {
      for (int trial = 0; trial < 10; ++trial) {
        const std::vector<double> t{u(rng)};
        const testing::ScalarFn f = [&](std::span<const double> s) {
          return assoc_legendre(l, m, s[0]).value;
        };
        const LegendreValue v = assoc_legendre(l, m, t[0]);
        EXPECT_LT(rel_error(v.d1, testing::fd_first(f, t, 0, 1e-3)), 1e-6) << l << ' ' << m;
        EXPECT_LT(rel_error(v.d2, testing::fd_second(f, t, 0, 1e-3)), 1e-6) << l << ' ' << m;
      }
    }
  }
}

TEST(AssocLegendre, Errors) {
  EXPECT_THROW(assoc_legendre(2, 1, 1.5), std::domain_error);
  EXPECT_THROW(assoc_legendre(2, 1, 1.0), std::domain_error);
  EXPECT_THROW(assoc_legendre(2, 3, 0.1), std::invalid_argument);
  EXPECT_NO_THROW(assoc_legendre(2, 2, 1.0));
  EXPECT_NO_THROW(assoc_legendre(3, 0, -1.0));
}

TEST(SphericalHarmonics, NormalizationConstant) {
  EXPECT_NEAR(sh_normalization(0, 0), 1.0 / std::sqrt(4.0 * kPi), 1e-15);
  // (2)(5)/(4 pi) * 1!/3! under the square root
  EXPECT_NEAR(sh_normalization(2, 1), std::sqrt(2.0 * 5.0 / (4.0 * kPi) / 6.0), 1e-15);
}

TEST(SphericalHarmonics, GramMatrixIsIdentity) {
  const int l_max = 4;
  const int words = (l_max + 1) * (l_max + 1);
  const auto [nodes, weights] = testing::gauss_legendre(24);
  const int n_phi = 32;
  std::vector<double> gram(static_cast<std::size_t>(words * words), 0.0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double theta = std::acos(nodes[i]);
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * kPi * j / n_phi;
      const auto y = eval_spherical_harmonics(l_max, Jet2::constant(theta, 2), Jet2::constant(phi, 2));
      const double w = weights[i] * 2.0 * kPi / n_phi;
      for (int a = 0; a < words; ++a) {
        for (int b = 0; b < words; ++b) {
          gram[static_cast<std::size_t>(a * words + b)] +=
              w * y[static_cast<std::size_t>(a)].value * y[static_cast<std::size_t>(b)].value;
        }
      }
    }
  }
  for (int a = 0; a < words; ++a) {
    for (int b = 0; b < words; ++b) {
      EXPECT_NEAR(gram[static_cast<std::size_t>(a * words + b)], a == b ? 1.0 : 0.0, 1e-12)
          << a << ' ' << b;
    }
  }
}

TEST(SphericalHarmonics, LaplaceBeltramiEigenvalue) {
  const int l_max = 5;
  Rng rng(6);
  std::uniform_real_distribution<double> th(0.05, kPi - 0.05);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * kPi);
  for (int trial = 0; trial < 100; ++trial) {
    const double theta = th(rng);
    const double phi = ph(rng);
    const auto y = eval_spherical_harmonics(l_max, Jet2::variable(theta, 2, 0), Jet2::variable(phi, 2, 1));
    int idx = 0;
    for (int l = 0; l <= l_max; ++l) {
      for (int m = -l; m <= l; ++m, ++idx) {
        const Jet2& j = y[static_cast<std::size_t>(idx)];
        const double s = std::sin(theta);
        const double lap = j.d2[0] + std::cos(theta) / s * j.d1[0] + j.d2[1] / (s * s);
        const double want = -l * (l + 1.0) * j.value;
        EXPECT_LE(std::abs(lap - want), 1e-8 * std::max(1.0, std::abs(want)))
            << "l=" << l << " m=" << m;
      }
    }
  }
}

TEST(SphericalHarmonics, OrderingAndPhiDependence) {
  const double theta = 0.8;
  const double phi = 0.3;
  const auto y = eval_spherical_harmonics(1, Jet2::constant(theta, 2), Jet2::constant(phi, 2));
  ASSERT_EQ(y.size(), 4u);
  const double c = std::sqrt(3.0 / (4.0 * kPi));
  EXPECT_NEAR(y[0].value, 1.0 / std::sqrt(4.0 * kPi), 1e-15);
  EXPECT_NEAR(y[1].value, c * std::sin(theta) * std::sin(phi), 1e-15);  // m = -1
  EXPECT_NEAR(y[2].value, c * std::cos(theta), 1e-15);                  // m = 0
  EXPECT_NEAR(y[3].value, c * std::sin(theta) * std::cos(phi), 1e-15);  // m = 1
}

TEST(SphericalHarmonics, JetsMatchFiniteDifferences) {
  Rng rng(12);
  std::uniform_real_distribution<double> th(0.1, kPi - 0.1);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * kPi);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> x{th(rng), ph(rng)};
    const auto y = eval_spherical_harmonics(3, Jet2::variable(x[0], 2, 0), Jet2::variable(x[1], 2, 1));
    for (std::size_t w = 0; w < y.size(); ++w) {
      const testing::ScalarFn f = [&](std::span<const double> p) {
        return eval_spherical_harmonics(3, Jet2::constant(p[0], 2), Jet2::constant(p[1], 2))[w].value;
      };
      for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_LT(rel_error(y[w].d1[k], testing::fd_first(f, x, k, 1e-3)), 1e-6);
        EXPECT_LT(rel_error(y[w].d2[k], testing::fd_second(f, x, k, 1e-3)), 1e-6);
      }
    }
  }
}

TEST(Fourier1d, WordsAndGram) {
  const int k = 5;
  const auto w = eval_fourier1d(k, Jet2::constant(0.4, 1));
  ASSERT_EQ(w.size(), 11u);
  EXPECT_EQ(w[0].value, 1.0);
  EXPECT_NEAR(w[3].value, std::cos(2 * 0.4), 1e-15);
  EXPECT_NEAR(w[4].value, std::sin(2 * 0.4), 1e-15);

  // trapezoid rule over a period is exact for these trigonometric products
  const int n = 64;
  std::vector<double> gram(121, 0.0);
  for (int i = 0; i < n; ++i) {
    const double x = -kPi + 2.0 * kPi * i / n;
    const auto v = eval_fourier1d(k, Jet2::constant(x, 1));
    for (int a = 0; a < 11; ++a) {
      for (int b = 0; b < 11; ++b) {
        gram[static_cast<std::size_t>(a * 11 + b)] +=
            2.0 * kPi / n * v[static_cast<std::size_t>(a)].value * v[static_cast<std::size_t>(b)].value;
      }
    }
  }
  for (int a = 0; a < 11; ++a) {
    for (int b = 0; b < 11; ++b) {
      const double want = a != b ? 0.0 : (a == 0 ? 2.0 * kPi : kPi);
      EXPECT_NEAR(gram[static_cast<std::size_t>(a * 11 + b)], want, 1e-12);
    }
  }
}

TEST(Fourier1d, DerivativesAreExact) {
  const auto w = eval_fourier1d(3, Jet2::variable(0.9, 1, 0));
  EXPECT_NEAR(w[5].d1[0], -3.0 * std::sin(2.7), 1e-14);  // cos(3x)
  EXPECT_NEAR(w[5].d2[0], -9.0 * std::cos(2.7), 1e-14);
  EXPECT_NEAR(w[6].d2[0], -9.0 * std::sin(2.7), 1e-14);  // sin(3x)
}

TEST(Fourier2d, LayoutAndBoundaryBehaviour) {
  const DictionarySpec spec = DictionarySpec::fourier2d(3, 4);
  EXPECT_EQ(spec.word_count(), 12);
  const double x = 3.0;
  const double y = -4.0;
  const std::vector<Jet2> c{Jet2::variable(x, 2, 0), Jet2::variable(y, 2, 1)};
  const auto w = eval_dictionary(spec, c);
  const double xh = (x + 10.0) / 20.0;
  const double yh = (y + 10.0) / 20.0;
  // word (i, j) at i * k2 + j
  EXPECT_NEAR(w[2 * 4 + 3].value, std::sin(2 * kPi * xh) / 2.0 * std::sin(3 * kPi * yh) / 3.0, 1e-15);
  // the y-factor of the 2-D ground truth is word (0, 1)
  EXPECT_NEAR(w[1].value, std::sin((y + 10.0) / 20.0 * kPi), 1e-15);
  EXPECT_NEAR(w[1].d2[1], -std::pow(kPi / 20.0, 2) * std::sin((y + 10.0) / 20.0 * kPi), 1e-15);

  for (double edge : {-10.0, 10.0}) {
    const std::vector<Jet2> e{Jet2::variable(1.5, 2, 0), Jet2::variable(edge, 2, 1)};
    const auto we = eval_dictionary(spec, e);
    for (int i = 0; i < 3; ++i) {
      for (int j = 1; j < 4; ++j) EXPECT_NEAR(we[static_cast<std::size_t>(i * 4 + j)].value, 0.0, 1e-15);
    }
  }
}

TEST(Fourier2d, SineWordsAreOrthogonal) {
  const int k = 4;
  const auto [nodes, weights] = testing::gauss_legendre(30);
  std::vector<double> gram(static_cast<std::size_t>(k * k), 0.0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double u = 0.5 * (nodes[i] + 1.0);
    const auto w = eval_fourier2d(1, k, Jet2::constant(0.0, 2), Jet2::constant(u, 2));
    for (int a = 1; a < k; ++a) {
      for (int b = 1; b < k; ++b) {
        gram[static_cast<std::size_t>(a * k + b)] +=
            0.5 * weights[i] * w[static_cast<std::size_t>(a)].value * w[static_cast<std::size_t>(b)].value;
      }
    }
  }
  for (int a = 1; a < k; ++a) {
    for (int b = 1; b < k; ++b) {
      EXPECT_NEAR(gram[static_cast<std::size_t>(a * k + b)], a == b ? 0.5 / (a * a) : 0.0, 1e-13);
    }
  }
}

TEST(DiffusionFourier, ConstantInTime) {
  const DictionarySpec spec = DictionarySpec::diffusion_fourier(2);
  const std::vector<Jet2> c{Jet2::variable(1.1, 2, 0), Jet2::variable(0.4, 2, 1)};
  const auto w = eval_dictionary(spec, c);
  ASSERT_EQ(w.size(), 5u);
  for (const Jet2& j : w) {
    EXPECT_EQ(j.d1[1], 0.0);
    EXPECT_EQ(j.d2[1], 0.0);
  }
  EXPECT_NEAR(w[4].value, std::sin(2.2), 1e-15);
}

TEST(LiftSphere, ValueAtOneOne) {
  const auto p = lift_sphere(Jet2::variable(1.0, 2, 0), Jet2::variable(1.0, 2, 1));
  const double s = std::sin(1.0);
  const double c = std::cos(1.0);
  EXPECT_NEAR(p[0].value, s * s, 1e-15);
  EXPECT_NEAR(p[1].value, s * c, 1e-15);
  EXPECT_NEAR(p[2].value, c, 1e-15);
  EXPECT_NEAR(p[0].value, 0.7081, 1e-4);
  EXPECT_NEAR(p[1].value, 0.4546, 1e-4);
  EXPECT_NEAR(p[2].value, 0.5403, 1e-4);
  // d/dtheta of sin(theta) sin(phi)
  EXPECT_NEAR(p[0].d1[0], c * s, 1e-15);
  EXPECT_NEAR(p[2].d2[0], -c, 1e-15);
}

TEST(Fuse, IsBilinear) {
  Rng rng(15);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto random_jets = [&](int n) {
    std::vector<Jet2> v;
    for (int i = 0; i < n; ++i) {
      Jet2 j = Jet2::constant(u(rng), 2);
      for (std::size_t k = 0; k < 2; ++k) {
        j.d1[k] = u(rng);
        j.d2[k] = u(rng);
      }
      v.push_back(j);
    }
    return v;
  };
  const int n = 6;
  for (int trial = 0; trial < 50; ++trial) {
    const auto d1 = random_jets(n);
    const auto d2 = random_jets(n);
    const auto net = random_jets(n);
    const double a = u(rng);
    const double b = u(rng);
    std::vector<Jet2> mix;
    for (int i = 0; i < n; ++i) mix.push_back(a * d1[static_cast<std::size_t>(i)] + b * d2[static_cast<std::size_t>(i)]);
    const Jet2 lhs = fuse<double>(mix, net);
    const Jet2 rhs = a * fuse<double>(d1, net) + b * fuse<double>(d2, net);
    EXPECT_NEAR(lhs.value, rhs.value, 1e-13);
    for (std::size_t k = 0; k < 2; ++k) {
      EXPECT_NEAR(lhs.d1[k], rhs.d1[k], 1e-13);
      EXPECT_NEAR(lhs.d2[k], rhs.d2[k], 1e-13);
    }
    // and in the network argument
    const Jet2 l2 = fuse<double>(d1, mix);
    const Jet2 r2 = a * fuse<double>(d1, d1) + b * fuse<double>(d1, d2);
    EXPECT_NEAR(l2.value, r2.value, 1e-13);
    EXPECT_NEAR(l2.d2[1], r2.d2[1], 1e-13);
  }
}

TEST(Fuse, LengthMismatch) {
  const std::vector<Jet2> a(3, Jet2::constant(1.0, 1));
  const std::vector<Jet2> b(2, Jet2::constant(1.0, 1));
  EXPECT_THROW(fuse<double>(a, b), std::invalid_argument);
}

TEST(DictionarySpec, ParseRoundTrip) {
  for (const char* text : {"none", "fourier1d:8", "fourier2d:5,5", "diffusion-fourier:10",
                           "spherical-harmonics:3"}) {
    EXPECT_EQ(DictionarySpec::parse(text).to_string(), text);
  }
  EXPECT_EQ(DictionarySpec::parse("fourier1d:8").word_count(), 17);
  EXPECT_EQ(DictionarySpec::parse("fourier2d:5,5").word_count(), 25);
  EXPECT_EQ(DictionarySpec::parse("diffusion-fourier:10").word_count(), 21);
  EXPECT_EQ(DictionarySpec::parse("spherical-harmonics:3").word_count(), 16);
  EXPECT_EQ(DictionarySpec::parse("none").word_count(), 1);
  EXPECT_THROW(DictionarySpec::parse("wavelets:3"), std::invalid_argument);
  EXPECT_THROW(DictionarySpec::parse("fourier1d:x"), std::invalid_argument);
  EXPECT_THROW(DictionarySpec::parse("fourier2d:5"), std::invalid_argument);
  EXPECT_THROW(DictionarySpec::fourier1d(0).validate(), std::invalid_argument);
  EXPECT_THROW(DictionarySpec::spherical_harmonics(-1).validate(), std::invalid_argument);
}

}  // namespace
}  // namespace pdpinn
