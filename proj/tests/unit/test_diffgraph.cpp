#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "finite_difference.hpp"
#include "pdpinn/jet.hpp"
#include "pdpinn/model.hpp"
#include "pdpinn/sampling.hpp"
#include "pdpinn/tape.hpp"

namespace pdpinn {
namespace {

using testing::rel_error;

// A composed expression touching every primitive.
template <typename J>
J expression(const std::vector<J>& x) {
  J acc = sin(x[0]) * exp(0.3 * x[0]);
  for (std::size_t i = 1; i < x.size(); ++i) {
    acc = acc + tanh(x[i] * x[0]) / (2.0 + cos(x[i])) - pow_int(x[i], 3);
  }
  return acc;
}

double expression_value(std::span<const double> x) {
  std::vector<double> v(x.begin(), x.end());
  double acc = std::sin(v[0]) * std::exp(0.3 * v[0]);
  for (std::size_t i = 1; i < v.size(); ++i) {
    acc += std::tanh(v[i] * v[0]) / (2.0 + std::cos(v[i])) - v[i] * v[i] * v[i];
  }
  return acc;
}

TEST(Jet, ComposedExpressionMatchesFiniteDifferences) {
  Rng rng(1);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int dim = 1; dim <= kMaxJetDim; ++dim) {
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> x(static_cast<std::size_t>(dim));
      for (auto& v : x) v = u(rng);
      std::vector<Jet2> jets;
      for (int i = 0; i < dim; ++i) jets.push_back(Jet2::variable(x[static_cast<std::size_t>(i)], dim, i));
      const Jet2 f = expression(jets);
      EXPECT_NEAR(f.value, expression_value(x), 1e-13);
      for (int i = 0; i < dim; ++i) {
        const auto k = static_cast<std::size_t>(i);
        EXPECT_LT(rel_error(f.d1[k], testing::fd_first(expression_value, x, k, 1e-3)), 1e-5);
        EXPECT_LT(rel_error(f.d2[k], testing::fd_second(expression_value, x, k, 1e-3)), 1e-5);
      }
    }
  }
}

TEST(Jet, ProductIsBitwiseSymmetric) {
  Rng rng(2);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    Jet2 f = Jet2::variable(u(rng), 2, 0);
    Jet2 g = sin(Jet2::variable(u(rng), 2, 1)) * u(rng);
    f = f * f + g;
    const Jet2 a = f * g;
    const Jet2 b = g * f;
    EXPECT_EQ(std::bit_cast<std::uint64_t>(a.value), std::bit_cast<std::uint64_t>(b.value));
    for (std::size_t k = 0; k < 2; ++k) {
      EXPECT_EQ(std::bit_cast<std::uint64_t>(a.d1[k]), std::bit_cast<std::uint64_t>(b.d1[k]));
      EXPECT_EQ(std::bit_cast<std::uint64_t>(a.d2[k]), std::bit_cast<std::uint64_t>(b.d2[k]));
    }
  }
}

TEST(Jet, ConstantsHaveZeroDerivatives) {
  const Jet2 c = Jet2::constant(4.0, 3);
  const Jet2 f = sin(c) * c + 1.0;
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(f.d1[k], 0.0);
    EXPECT_EQ(f.d2[k], 0.0);
  }
}

TEST(Jet, PowIntSpecialCases) {
  const Jet2 zero = Jet2::variable(0.0, 1, 0);
  const Jet2 p1 = pow_int(zero, 1);
  EXPECT_EQ(p1.d1[0], 1.0);
  EXPECT_EQ(p1.d2[0], 0.0);
  const Jet2 p0 = pow_int(Jet2::variable(3.0, 1, 0), 0);
  EXPECT_EQ(p0.value, 1.0);
  EXPECT_EQ(p0.d1[0], 0.0);
  EXPECT_THROW(pow_int(zero, -2), JetDomainError);
  const Jet2 p = pow_int(Jet2::variable(2.0, 1, 0), -2);
  EXPECT_DOUBLE_EQ(p.value, 0.25);
  EXPECT_DOUBLE_EQ(p.d1[0], -0.25);
  EXPECT_DOUBLE_EQ(p.d2[0], 6.0 / 16.0);
}

TEST(Jet, Errors) {
  EXPECT_THROW(Jet2::constant(1.0, kMaxJetDim + 1), std::invalid_argument);
  EXPECT_THROW(Jet2::variable(1.0, 2, 2), std::invalid_argument);
  EXPECT_THROW(Jet2::variable(1.0, 1, 0) + Jet2::variable(1.0, 2, 0), std::invalid_argument);
  EXPECT_THROW(Jet2::variable(1.0, 1, 0) / Jet2::constant(0.0, 1), JetDomainError);
  EXPECT_THROW(Jet2::variable(1.0, 1, 0) / 0.0, JetDomainError);
}

TEST(Jet, FiniteForFiniteInputs) {
  Rng rng(3);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const Jet2 x = Jet2::variable(u(rng), 1, 0);
    EXPECT_TRUE(is_finite(tanh(x) * sin(x) + cos(x)));
  }
}

TEST(Tape, GradientOfSimpleExpression) {
  Tape tape;
  const Var a = tape.variable(0.7);
  const Var b = tape.variable(-1.3);
  const Var f = sin(a) * b + exp(a * b) / (1.0 + tanh(b) * tanh(b));
  const std::array<Var, 2> wrt{a, b};
  const GradVector g = tape.gradient(f, wrt);
  const testing::ScalarFn value = [](std::span<const double> v) {
    const double t = std::tanh(v[1]);
    return std::sin(v[0]) * v[1] + std::exp(v[0] * v[1]) / (1.0 + t * t);
  };
  const std::vector<double> x{0.7, -1.3};
  EXPECT_NEAR(f.value(), value(x), 1e-15);
  EXPECT_LT(rel_error(g[0], testing::fd_first(value, x, 0, 1e-3)), 1e-9);
  EXPECT_LT(rel_error(g[1], testing::fd_first(value, x, 1, 1e-3)), 1e-9);
}

TEST(Tape, UnusedVariableHasZeroGradient) {
  Tape tape;
  const Var a = tape.variable(2.0);
  const Var b = tape.variable(5.0);
  const std::array<Var, 2> wrt{a, b};
  const GradVector g = tape.gradient(a * a, wrt);
  EXPECT_DOUBLE_EQ(g[0], 4.0);
  EXPECT_EQ(g[1], 0.0);
}

TEST(Tape, NonFiniteNodeIsReported) {
  Tape tape;
  const Var a = tape.variable(1000.0);
  const Var big = exp(a);
  const Var f = big * 2.0;
  const std::array<Var, 1> wrt{a};
  try {
    (void)tape.gradient(f, wrt);
    FAIL() << "expected NonFiniteError";
  } catch (const NonFiniteError& e) {
    EXPECT_EQ(e.node(), static_cast<std::size_t>(big.index()));
    EXPECT_EQ(e.op(), "exp");
  }
}

TEST(Tape, DivisionByZeroThrows) {
  Tape tape;
  const Var a = tape.variable(1.0);
  EXPECT_THROW(a / Var(0.0), std::domain_error);
}

// Empirical PDE loss of the 1-D Poisson problem at a single sample point,
// differentiated through the tape.
TEST(Tape, SinglePointPdeLossMatchesFiniteDifferences) {
  const Model model =
      Model::initialize(Problem(ProblemId::poisson1d), DictionarySpec::fourier1d(8), false, {50, 50, 50}, 7);
  const std::vector<double> x{1.234};
  const Problem& p = model.problem();
  const std::vector<double> theta(model.params().flat().begin(), model.params().flat().end());
  const GradVector g = loss_parameter_gradient(theta, [&](Tape&, std::span<const Var> vars) {
    const BasicJet<Var> f = model.evaluate<Var>(x, vars);
    const Var r = p.apply_operator(f, x) - p.rhs(x);
    return r * r;
  });
  const testing::ScalarFn loss = [&](std::span<const double> t) {
    const Jet2 f = model.evaluate<double>(x, t);
    const double r = p.apply_operator(f, x) - p.rhs(x);
    return r * r;
  };
  Rng rng(9);
  std::uniform_int_distribution<std::size_t> pick(0, theta.size() - 1);
  for (int k = 0; k < 20; ++k) {
    const std::size_t i = pick(rng);
    EXPECT_LT(rel_error(g[i], testing::fd_first(loss, theta, i, 1e-4)), 1e-5) << "param " << i;
  }
}

}  // namespace
}  // namespace pdpinn
