#pragma once

// Second-order forward-mode jets.
//
// A jet carries a scalar value together with its first and second partial
// derivatives with respect to each input coordinate. Only the diagonal of
// the Hessian is propagated: every operator in this project is a sum of
// d^2/dx_i^2, d/dx_i and identity terms, so mixed partials never appear.
//
// BasicJet<T> is generic over the scalar so the same expressions can be
// evaluated on plain doubles (Jet2) or recorded on a reverse-mode tape
// (BasicJet<Var>, see tape.hpp) to obtain exact parameter gradients.

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

namespace pdpinn {

inline constexpr int kMaxJetDim = 3;

class JetDomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline double primal(double v) { return v; }

template <typename T>
struct BasicJet {
  T value{};
  std::array<T, kMaxJetDim> d1{};
  std::array<T, kMaxJetDim> d2{};
  int dim = 0;

  static BasicJet constant(T v, int dim) {
    check_dim(dim);
    BasicJet j;
    j.value = v;
    j.dim = dim;
    return j;
  }

  // The coordinate `axis` itself: unit first derivative along that axis.
  static BasicJet variable(T v, int dim, int axis) {
    BasicJet j = constant(v, dim);
    if (axis < 0 || axis >= dim) {
      throw std::invalid_argument("jet axis out of range");
    }
    j.d1[static_cast<std::size_t>(axis)] = T(1.0);
    return j;
  }

  static void check_dim(int dim) {
    if (dim < 0 || dim > kMaxJetDim) {
      throw std::invalid_argument("jet dimension must be in [0, " +
                                  std::to_string(kMaxJetDim) + "]");
    }
  }
};

using Jet2 = BasicJet<double>;

namespace detail {

template <typename T>
void require_same_dim(const BasicJet<T>& a, const BasicJet<T>& b) {
  if (a.dim != b.dim) {
    throw std::invalid_argument("jet dimension mismatch");
  }
}

}  // namespace detail

// Applies a univariate function given its value f0 and derivatives f1, f2 at
// x.value:  h'_i = f1 x'_i,  h''_i = f2 (x'_i)^2 + f1 x''_i.
template <typename T>
BasicJet<T> chain(const BasicJet<T>& x, const T& f0, const T& f1, const T& f2) {
  BasicJet<T> r;
  r.dim = x.dim;
  r.value = f0;
  for (int i = 0; i < x.dim; ++i) {
    const auto k = static_cast<std::size_t>(i);
    r.d1[k] = f1 * x.d1[k];
    r.d2[k] = f2 * (x.d1[k] * x.d1[k]) + f1 * x.d2[k];
  }
  return r;
}

template <typename T>
BasicJet<T> operator+(const BasicJet<T>& a, const BasicJet<T>& b) {
  detail::require_same_dim(a, b);
  BasicJet<T> r;
  r.dim = a.dim;
  r.value = a.value + b.value;
  for (std::size_t k = 0; k < static_cast<std::size_t>(a.dim); ++k) {
    r.d1[k] = a.d1[k] + b.d1[k];
    r.d2[k] = a.d2[k] + b.d2[k];
  }
  return r;
}

template <typename T>
BasicJet<T> operator-(const BasicJet<T>& a, const BasicJet<T>& b) {
  detail::require_same_dim(a, b);
  BasicJet<T> r;
  r.dim = a.dim;
  r.value = a.value - b.value;
  for (std::size_t k = 0; k < static_cast<std::size_t>(a.dim); ++k) {
    r.d1[k] = a.d1[k] - b.d1[k];
    r.d2[k] = a.d2[k] - b.d2[k];
  }
  return r;
}

template <typename T>
BasicJet<T> operator-(const BasicJet<T>& a) {
  BasicJet<T> r;
  r.dim = a.dim;
  r.value = -a.value;
  for (std::size_t k = 0; k < static_cast<std::size_t>(a.dim); ++k) {
    r.d1[k] = -a.d1[k];
    r.d2[k] = -a.d2[k];
  }
  return r;
}

// Product rule. The second derivative is summed as (f''g + fg'') + 2f'g' so
// that f*g and g*f agree bit for bit.
template <typename T>
BasicJet<T> operator*(const BasicJet<T>& f, const BasicJet<T>& g) {
  detail::require_same_dim(f, g);
  BasicJet<T> r;
  r.dim = f.dim;
  r.value = f.value * g.value;
  for (std::size_t k = 0; k < static_cast<std::size_t>(f.dim); ++k) {
    r.d1[k] = f.d1[k] * g.value + f.value * g.d1[k];
    r.d2[k] = (f.d2[k] * g.value + f.value * g.d2[k]) + 2.0 * (f.d1[k] * g.d1[k]);
  }
  return r;
}

template <typename T>
BasicJet<T> reciprocal(const BasicJet<T>& x) {
  if (primal(x.value) == 0.0) {
    throw JetDomainError("jet division by zero");
  }
  const T inv = T(1.0) / x.value;
  const T inv2 = inv * inv;
  return chain(x, inv, -inv2, 2.0 * (inv2 * inv));
}

template <typename T>
BasicJet<T> operator/(const BasicJet<T>& f, const BasicJet<T>& g) {
  return f * reciprocal(g);
}

// Scalar (constant) operands.
template <typename T>
BasicJet<T> operator*(double s, const BasicJet<T>& a) {
  BasicJet<T> r;
  r.dim = a.dim;
  r.value = s * a.value;
  for (std::size_t k = 0; k < static_cast<std::size_t>(a.dim); ++k) {
    r.d1[k] = s * a.d1[k];
    r.d2[k] = s * a.d2[k];
  }
  return r;
}

template <typename T>
BasicJet<T> operator*(const BasicJet<T>& a, double s) {
  return s * a;
}

template <typename T>
BasicJet<T> operator+(const BasicJet<T>& a, double s) {
  BasicJet<T> r = a;
  r.value = a.value + s;
  return r;
}

template <typename T>
BasicJet<T> operator+(double s, const BasicJet<T>& a) {
  return a + s;
}

template <typename T>
BasicJet<T> operator-(const BasicJet<T>& a, double s) {
  return a + (-s);
}

template <typename T>
BasicJet<T> operator-(double s, const BasicJet<T>& a) {
  return (-a) + s;
}

template <typename T>
BasicJet<T> operator/(const BasicJet<T>& a, double s) {
  if (s == 0.0) {
    throw JetDomainError("jet division by zero");
  }
  return (1.0 / s) * a;
}

template <typename T>
BasicJet<T> sin(const BasicJet<T>& x) {
  using std::cos;
  using std::sin;
  const T s = sin(x.value);
  return chain(x, s, T(cos(x.value)), -s);
}

template <typename T>
BasicJet<T> cos(const BasicJet<T>& x) {
  using std::cos;
  using std::sin;
  const T c = cos(x.value);
  return chain(x, c, -T(sin(x.value)), -c);
}

template <typename T>
BasicJet<T> tanh(const BasicJet<T>& x) {
  using std::tanh;
  const T t = tanh(x.value);
  const T s = T(1.0) - t * t;
  return chain(x, t, s, -2.0 * (t * s));
}

template <typename T>
BasicJet<T> exp(const BasicJet<T>& x) {
  using std::exp;
  const T e = exp(x.value);
  return chain(x, e, e, e);
}

template <typename T>
BasicJet<T> pow_int(const BasicJet<T>& x, int n) {
  if (n == 0) {
    return BasicJet<T>::constant(T(1.0), x.dim);
  }
  if (n < 0 && primal(x.value) == 0.0) {
    throw JetDomainError("negative integer power of zero");
  }
  auto ipow = [](const T& base, int e) {
    T acc(1.0);
    const bool neg = e < 0;
    for (int i = 0; i < (neg ? -e : e); ++i) acc = acc * base;
    return neg ? T(1.0) / acc : acc;
  };
  const T f0 = ipow(x.value, n);
  const T f1 = static_cast<double>(n) * ipow(x.value, n - 1);
  const T f2 = n == 1 ? T(0.0)
                      : static_cast<double>(n) * static_cast<double>(n - 1) * ipow(x.value, n - 2);
  return chain(x, f0, f1, f2);
}

// sum_j weights[j] * xs[j] + bias
template <typename T, typename W>
BasicJet<T> affine(std::span<const W> weights, std::span<const BasicJet<T>> xs, const W& bias) {
  if (weights.size() != xs.size()) {
    throw std::invalid_argument("affine: weight/argument count mismatch");
  }
  if (xs.empty()) {
    throw std::invalid_argument("affine: no arguments");
  }
  BasicJet<T> r;
  r.dim = xs[0].dim;
  r.value = T(bias);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    detail::require_same_dim(r, xs[j]);
    r.value = r.value + weights[j] * xs[j].value;
    for (std::size_t k = 0; k < static_cast<std::size_t>(r.dim); ++k) {
      r.d1[k] = r.d1[k] + weights[j] * xs[j].d1[k];
      r.d2[k] = r.d2[k] + weights[j] * xs[j].d2[k];
    }
  }
  return r;
}

// Lifts a Jet2 of constants into the scalar type T (e.g. a tape variable).
template <typename T>
BasicJet<T> promote(const Jet2& j) {
  BasicJet<T> r;
  r.dim = j.dim;
  r.value = T(j.value);
  for (std::size_t k = 0; k < static_cast<std::size_t>(j.dim); ++k) {
    r.d1[k] = T(j.d1[k]);
    r.d2[k] = T(j.d2[k]);
  }
  return r;
}

inline bool is_finite(const Jet2& j) {
  if (!std::isfinite(j.value)) return false;
  for (std::size_t k = 0; k < static_cast<std::size_t>(j.dim); ++k) {
    if (!std::isfinite(j.d1[k]) || !std::isfinite(j.d2[k])) return false;
  }
  return true;
}

}  // namespace pdpinn
