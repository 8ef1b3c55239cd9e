#include "pdpinn/tape.hpp"

#include <cmath>

namespace pdpinn {

namespace {

Tape* common_tape(const Var& a, const Var& b) {
  if (a.tape() && b.tape() && a.tape() != b.tape()) {
    throw std::invalid_argument("cannot combine variables from different tapes");
  }
  return a.tape() ? a.tape() : b.tape();
}

}  // namespace

Var Tape::variable(double v) {
  nodes_.push_back(Node{v, {-1, -1}, {0.0, 0.0}, "leaf"});
  return Var(v, static_cast<int>(nodes_.size() - 1), this);
}

Var Tape::unary(const char* op, const Var& a, double value, double da) {
  nodes_.push_back(Node{value, {a.index(), -1}, {da, 0.0}, op});
  return Var(value, static_cast<int>(nodes_.size() - 1), this);
}

Var Tape::binary(const char* op, const Var& a, const Var& b, double value, double da, double db) {
  nodes_.push_back(Node{value, {a.index(), b.index()}, {da, db}, op});
  return Var(value, static_cast<int>(nodes_.size() - 1), this);
}

GradVector Tape::gradient(const Var& output, std::span<const Var> wrt) const {
  GradVector result(wrt.size(), 0.0);
  if (output.is_constant()) {
    return result;
  }
  if (output.tape() != this) {
    throw std::invalid_argument("output does not belong to this tape");
  }
  const auto last = static_cast<std::size_t>(output.index());
  for (std::size_t i = 0; i <= last; ++i) {
    const Node& n = nodes_[i];
    if (!std::isfinite(n.value) || !std::isfinite(n.partial[0]) || !std::isfinite(n.partial[1])) {
      throw NonFiniteError(i, n.op);
    }
  }

  std::vector<double> adjoint(last + 1, 0.0);
  adjoint[last] = 1.0;
  for (std::size_t i = last + 1; i-- > 0;) {
    const double a = adjoint[i];
    if (a == 0.0) continue;
    const Node& n = nodes_[i];
    for (int p = 0; p < 2; ++p) {
      if (n.parent[p] >= 0) {
        adjoint[static_cast<std::size_t>(n.parent[p])] += a * n.partial[p];
      }
    }
  }

  for (std::size_t k = 0; k < wrt.size(); ++k) {
    const Var& w = wrt[k];
    if (w.is_constant()) continue;
    if (w.tape() != this) {
      throw std::invalid_argument("gradient target does not belong to this tape");
    }
    const auto idx = static_cast<std::size_t>(w.index());
    if (idx <= last) result[k] = adjoint[idx];
  }
  return result;
}

Var operator+(const Var& a, const Var& b) {
  Tape* t = common_tape(a, b);
  const double v = a.value() + b.value();
  return t ? t->binary("add", a, b, v, 1.0, 1.0) : Var(v);
}

Var operator-(const Var& a, const Var& b) {
  Tape* t = common_tape(a, b);
  const double v = a.value() - b.value();
  return t ? t->binary("sub", a, b, v, 1.0, -1.0) : Var(v);
}

Var operator*(const Var& a, const Var& b) {
  Tape* t = common_tape(a, b);
  const double v = a.value() * b.value();
  return t ? t->binary("mul", a, b, v, b.value(), a.value()) : Var(v);
}

Var operator/(const Var& a, const Var& b) {
  if (b.value() == 0.0) {
    throw std::domain_error("division by zero on tape");
  }
  Tape* t = common_tape(a, b);
  const double inv = 1.0 / b.value();
  const double v = a.value() * inv;
  return t ? t->binary("div", a, b, v, inv, -v * inv) : Var(v);
}

Var operator-(const Var& a) {
  return a.tape() ? a.tape()->unary("neg", a, -a.value(), -1.0) : Var(-a.value());
}

Var sin(const Var& a) {
  const double v = std::sin(a.value());
  return a.tape() ? a.tape()->unary("sin", a, v, std::cos(a.value())) : Var(v);
}

Var cos(const Var& a) {
  const double v = std::cos(a.value());
  return a.tape() ? a.tape()->unary("cos", a, v, -std::sin(a.value())) : Var(v);
}

Var tanh(const Var& a) {
  const double v = std::tanh(a.value());
  return a.tape() ? a.tape()->unary("tanh", a, v, 1.0 - v * v) : Var(v);
}

Var exp(const Var& a) {
  const double v = std::exp(a.value());
  return a.tape() ? a.tape()->unary("exp", a, v, v) : Var(v);
}

GradVector loss_parameter_gradient(std::span<const double> parameters, const TapedLoss& loss) {
  Tape tape;
  std::vector<Var> leaves;
  leaves.reserve(parameters.size());
  for (double p : parameters) leaves.push_back(tape.variable(p));
  const Var out = loss(tape, leaves);
  return tape.gradient(out, leaves);
}

}  // namespace pdpinn
