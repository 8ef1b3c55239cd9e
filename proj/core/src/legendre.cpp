#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pdpinn/dictionary.hpp"

namespace pdpinn {

LegendreValue assoc_legendre(int l, int m, double t) {
  if (m < 0 || l < m) {
    throw std::invalid_argument("assoc_legendre: need 0 <= m <= l, got l=" + std::to_string(l) +
                                ", m=" + std::to_string(m));
  }
  if (!(std::abs(t) <= 1.0)) {
    throw std::domain_error("assoc_legendre: |t| > 1");
  }
  const double s = 1.0 - t * t;
  if (s == 0.0 && (m % 2) == 1) {
    throw std::domain_error("assoc_legendre: derivative of odd-order P_l^m is unbounded at |t| = 1");
  }

  // Seed P_m^m = (2m-1)!! (1-t^2)^{m/2}.
  double c = 1.0;
  for (int i = 1; i <= m; ++i) c *= static_cast<double>(2 * i - 1);
  LegendreValue mm;
  if (m == 0) {
    mm = {1.0, 0.0, 0.0};
  } else if (m == 2) {
    mm = {c * s, -2.0 * c * t, -2.0 * c};
  } else {
    const double md = static_cast<double>(m);
    mm.value = c * std::pow(s, 0.5 * md);
    mm.d1 = -c * md * t * std::pow(s, 0.5 * (md - 2.0));
    mm.d2 = -c * md * std::pow(s, 0.5 * (md - 4.0)) * (1.0 - (md - 1.0) * t * t);
  }
  if (l == m) return mm;

  // P_{m+1}^m = (2m+1) t P_m^m
  const double a = static_cast<double>(2 * m + 1);
  LegendreValue prev = mm;
  LegendreValue cur{a * t * mm.value, a * (mm.value + t * mm.d1), a * (2.0 * mm.d1 + t * mm.d2)};

  // (l-m) P_l^m = (2l-1) t P_{l-1}^m - (l+m-1) P_{l-2}^m
  for (int ll = m + 2; ll <= l; ++ll) {
    const double p = static_cast<double>(2 * ll - 1);
    const double q = static_cast<double>(ll + m - 1);
    const double inv = 1.0 / static_cast<double>(ll - m);
    LegendreValue next;
    next.value = (p * t * cur.value - q * prev.value) * inv;
    next.d1 = (p * (cur.value + t * cur.d1) - q * prev.d1) * inv;
    next.d2 = (p * (2.0 * cur.d1 + t * cur.d2) - q * prev.d2) * inv;
    prev = cur;
    cur = next;
  }
  return cur;
}

double sh_normalization(int l, int m) {
  const int am = m < 0 ? -m : m;
  if (l < 0 || am > l) {
    throw std::invalid_argument("sh_normalization: need |m| <= l");
  }
  // (l-|m|)! / (l+|m|)!
  double ratio = 1.0;
  for (int i = l - am + 1; i <= l + am; ++i) ratio /= static_cast<double>(i);
  const double base = static_cast<double>(2 * l + 1) / (4.0 * std::numbers::pi) * ratio;
  return std::sqrt(am == 0 ? base : 2.0 * base);
}

}  // namespace pdpinn
