#include "pdpinn/dictionary.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace pdpinn {

DictionarySpec DictionarySpec::fourier1d(int k) {
  DictionarySpec s;
  s.kind = DictionaryKind::fourier1d;
  s.k = k;
  s.validate();
  return s;
}

DictionarySpec DictionarySpec::fourier2d(int k1, int k2) {
  DictionarySpec s;
  s.kind = DictionaryKind::fourier2d;
  s.k1 = k1;
  s.k2 = k2;
  s.validate();
  return s;
}

DictionarySpec DictionarySpec::diffusion_fourier(int k) {
  DictionarySpec s;
  s.kind = DictionaryKind::diffusion_fourier;
  s.k = k;
  s.validate();
  return s;
}

DictionarySpec DictionarySpec::spherical_harmonics(int l_max) {
  DictionarySpec s;
  s.kind = DictionaryKind::spherical_harmonics;
  s.l_max = l_max;
  s.validate();
  return s;
}

int DictionarySpec::word_count() const {
  switch (kind) {
    case DictionaryKind::none:
      return 1;
    case DictionaryKind::fourier1d:
    case DictionaryKind::diffusion_fourier:
      return 2 * k + 1;
    case DictionaryKind::fourier2d:
      return k1 * k2;
    case DictionaryKind::spherical_harmonics:
      return (l_max + 1) * (l_max + 1);
  }
  return 0;
}

int DictionarySpec::input_dim() const {
  switch (kind) {
    case DictionaryKind::none:
      return 0;
    case DictionaryKind::fourier1d:
      return 1;
    case DictionaryKind::fourier2d:
    case DictionaryKind::diffusion_fourier:
    case DictionaryKind::spherical_harmonics:
      return 2;
  }
  return 0;
}

void DictionarySpec::validate() const {
  switch (kind) {
    case DictionaryKind::none:
      return;
    case DictionaryKind::fourier1d:
    case DictionaryKind::diffusion_fourier:
      if (k < 1) throw std::invalid_argument(kind_name(kind) + ": k must be >= 1");
      return;
    case DictionaryKind::fourier2d:
      if (k1 < 1 || k2 < 1) throw std::invalid_argument("fourier2d: k1 and k2 must be >= 1");
      for (int i = 0; i < 2; ++i) {
        if (!(normalize_hi[static_cast<std::size_t>(i)] > normalize_lo[static_cast<std::size_t>(i)])) {
          throw std::invalid_argument("fourier2d: empty normalization range");
        }
      }
      return;
    case DictionaryKind::spherical_harmonics:
      if (l_max < 0) throw std::invalid_argument("spherical-harmonics: l_max must be >= 0");
      return;
  }
}

std::string kind_name(DictionaryKind kind) {
  switch (kind) {
    case DictionaryKind::none:
      return "none";
    case DictionaryKind::fourier1d:
      return "fourier1d";
    case DictionaryKind::fourier2d:
      return "fourier2d";
    case DictionaryKind::diffusion_fourier:
      return "diffusion-fourier";
    case DictionaryKind::spherical_harmonics:
      return "spherical-harmonics";
  }
  return "?";
}

DictionaryKind parse_dictionary_kind(const std::string& name) {
  if (name == "none") return DictionaryKind::none;
  if (name == "fourier1d") return DictionaryKind::fourier1d;
  if (name == "fourier2d") return DictionaryKind::fourier2d;
  if (name == "diffusion-fourier" || name == "diffusion1d-fourier") {
    return DictionaryKind::diffusion_fourier;
  }
  if (name == "spherical-harmonics") return DictionaryKind::spherical_harmonics;
  throw std::invalid_argument("unknown dictionary kind '" + name + "'");
}

std::string DictionarySpec::to_string() const {
  std::ostringstream os;
  os << kind_name(kind);
  switch (kind) {
    case DictionaryKind::none:
      break;
    case DictionaryKind::fourier1d:
    case DictionaryKind::diffusion_fourier:
      os << ':' << k;
      break;
    case DictionaryKind::fourier2d:
      os << ':' << k1 << ',' << k2;
      break;
    case DictionaryKind::spherical_harmonics:
      os << ':' << l_max;
      break;
  }
  return os.str();
}

DictionarySpec DictionarySpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  DictionarySpec s;
  s.kind = parse_dictionary_kind(text.substr(0, colon));
  const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  auto to_int = [&](const std::string& v) {
    std::size_t used = 0;
    int out = 0;
    try {
      out = std::stoi(v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != v.size() || v.empty()) {
      throw std::invalid_argument("malformed dictionary parameter '" + v + "' in '" + text + "'");
    }
    return out;
  };
  switch (s.kind) {
    case DictionaryKind::none:
      if (!args.empty()) throw std::invalid_argument("dictionary 'none' takes no parameters");
      break;
    case DictionaryKind::fourier1d:
    case DictionaryKind::diffusion_fourier:
      s.k = to_int(args);
      break;
    case DictionaryKind::fourier2d: {
      const auto comma = args.find(',');
      if (comma == std::string::npos) {
        throw std::invalid_argument("fourier2d needs two parameters 'k1,k2'");
      }
      s.k1 = to_int(args.substr(0, comma));
      s.k2 = to_int(args.substr(comma + 1));
      break;
    }
    case DictionaryKind::spherical_harmonics:
      s.l_max = to_int(args);
      break;
  }
  s.validate();
  return s;
}

std::vector<Jet2> eval_fourier1d(int k, const Jet2& x) {
  if (k < 1) throw std::invalid_argument("eval_fourier1d: k must be >= 1");
  std::vector<Jet2> words;
  words.reserve(static_cast<std::size_t>(2 * k + 1));
  words.push_back(Jet2::constant(1.0, x.dim));
  for (int n = 1; n <= k; ++n) {
    const Jet2 nx = static_cast<double>(n) * x;
    words.push_back(cos(nx));
    words.push_back(sin(nx));
  }
  return words;
}

namespace {

// 1, sin(pi u), sin(2 pi u)/2, ..., sin((k-1) pi u)/(k-1)
std::vector<Jet2> sine_ladder(int k, const Jet2& u) {
  std::vector<Jet2> out;
  out.reserve(static_cast<std::size_t>(k));
  out.push_back(Jet2::constant(1.0, u.dim));
  for (int n = 1; n < k; ++n) {
    out.push_back(sin((static_cast<double>(n) * std::numbers::pi) * u) / static_cast<double>(n));
  }
  return out;
}

}  // namespace

std::vector<Jet2> eval_fourier2d(int k1, int k2, const Jet2& x, const Jet2& y) {
  if (k1 < 1 || k2 < 1) throw std::invalid_argument("eval_fourier2d: k1, k2 must be >= 1");
  const auto fx = sine_ladder(k1, x);
  const auto fy = sine_ladder(k2, y);
  std::vector<Jet2> words;
  words.reserve(static_cast<std::size_t>(k1 * k2));
  for (const Jet2& a : fx) {
    for (const Jet2& b : fy) words.push_back(a * b);
  }
  return words;
}

std::array<Jet2, 3> lift_sphere(const Jet2& theta, const Jet2& phi) {
  const Jet2 st = sin(theta);
  return {st * sin(phi), st * cos(phi), cos(theta)};
}

std::vector<Jet2> eval_spherical_harmonics(int l_max, const Jet2& theta, const Jet2& phi) {
  if (l_max < 0) throw std::invalid_argument("eval_spherical_harmonics: l_max must be >= 0");
  const double ct = std::cos(theta.value);
  const double st = std::sin(theta.value);
  std::vector<Jet2> words;
  words.reserve(static_cast<std::size_t>((l_max + 1) * (l_max + 1)));
  for (int l = 0; l <= l_max; ++l) {
    for (int m = -l; m <= l; ++m) {
      const int am = m < 0 ? -m : m;
      const double norm = sh_normalization(l, m);
      // u(theta) = P(cos theta): u' = -sin(theta) P', u'' = sin^2 P'' - cos P'
      const LegendreValue p = assoc_legendre(l, am, ct);
      const Jet2 polar = chain(theta, norm * p.value, norm * (-st * p.d1),
                               norm * (st * st * p.d2 - ct * p.d1));
      if (m == 0) {
        words.push_back(polar);
      } else {
        const Jet2 mphi = static_cast<double>(am) * phi;
        words.push_back(polar * (m > 0 ? cos(mphi) : sin(mphi)));
      }
    }
  }
  return words;
}

std::vector<Jet2> eval_dictionary(const DictionarySpec& spec, std::span<const Jet2> coords) {
  if (coords.empty()) throw std::invalid_argument("eval_dictionary: no coordinates");
  if (static_cast<int>(coords.size()) < spec.input_dim()) {
    throw std::invalid_argument("eval_dictionary: " + spec.to_string() + " needs " +
                                std::to_string(spec.input_dim()) + " coordinates");
  }
  switch (spec.kind) {
    case DictionaryKind::none:
      return {Jet2::constant(1.0, coords[0].dim)};
    case DictionaryKind::fourier1d:
    case DictionaryKind::diffusion_fourier:
      return eval_fourier1d(spec.k, coords[0]);
    case DictionaryKind::fourier2d: {
      const auto& lo = spec.normalize_lo;
      const auto& hi = spec.normalize_hi;
      const Jet2 x = (coords[0] - lo[0]) / (hi[0] - lo[0]);
      const Jet2 y = (coords[1] - lo[1]) / (hi[1] - lo[1]);
      return eval_fourier2d(spec.k1, spec.k2, x, y);
    }
    case DictionaryKind::spherical_harmonics:
      return eval_spherical_harmonics(spec.l_max, coords[0], coords[1]);
  }
  return {};
}

}  // namespace pdpinn
