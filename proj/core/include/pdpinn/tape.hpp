#pragma once

// Scalar reverse-mode tape.
//
// Every arithmetic operation on a Var that belongs to a tape appends one
// node holding the result value and the local partials to (at most) two
// parents. A reverse sweep over the nodes yields d(output)/d(leaf) for all
// leaves at once. Var values without a tape act as constants.

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdpinn {

using GradVector = std::vector<double>;

class Tape;

class Var {
 public:
  Var() = default;
  Var(double v) : value_(v) {}  // NOLINT(google-explicit-constructor): constants mix freely

  double value() const { return value_; }
  int index() const { return index_; }
  Tape* tape() const { return tape_; }
  bool is_constant() const { return tape_ == nullptr; }

 private:
  friend class Tape;
  Var(double v, int index, Tape* tape) : value_(v), index_(index), tape_(tape) {}

  double value_ = 0.0;
  int index_ = -1;
  Tape* tape_ = nullptr;
};

inline double primal(const Var& v) { return v.value(); }

class NonFiniteError : public std::runtime_error {
 public:
  NonFiniteError(std::size_t node, std::string op)
      : std::runtime_error("non-finite value at tape node " + std::to_string(node) +
                           " (" + op + ")"),
        node_(node),
        op_(std::move(op)) {}

  std::size_t node() const { return node_; }
  const std::string& op() const { return op_; }

 private:
  std::size_t node_;
  std::string op_;
};

class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var variable(double v);

  Var unary(const char* op, const Var& a, double value, double da);
  Var binary(const char* op, const Var& a, const Var& b, double value, double da, double db);

  std::size_t size() const { return nodes_.size(); }
  void clear() { nodes_.clear(); }

  // d(output)/d(w) for each w in `wrt`. Throws NonFiniteError naming the
  // first recorded node whose value or local partial is not finite.
  GradVector gradient(const Var& output, std::span<const Var> wrt) const;

 private:
  struct Node {
    double value;
    int parent[2];
    double partial[2];
    const char* op;
  };

  std::vector<Node> nodes_;
};

Var operator+(const Var& a, const Var& b);
Var operator-(const Var& a, const Var& b);
Var operator*(const Var& a, const Var& b);
Var operator/(const Var& a, const Var& b);
Var operator-(const Var& a);

inline Var operator+(double a, const Var& b) { return Var(a) + b; }
inline Var operator+(const Var& a, double b) { return a + Var(b); }
inline Var operator-(double a, const Var& b) { return Var(a) - b; }
inline Var operator-(const Var& a, double b) { return a - Var(b); }
inline Var operator*(double a, const Var& b) { return Var(a) * b; }
inline Var operator*(const Var& a, double b) { return a * Var(b); }
inline Var operator/(double a, const Var& b) { return Var(a) / b; }
inline Var operator/(const Var& a, double b) { return a / Var(b); }

Var sin(const Var& a);
Var cos(const Var& a);
Var tanh(const Var& a);
Var exp(const Var& a);

// Gradient of a scalar loss with respect to every entry of `parameters`.
// The callback receives the parameters as tape leaves, in the same order.
using TapedLoss = std::function<Var(Tape&, std::span<const Var>)>;
GradVector loss_parameter_gradient(std::span<const double> parameters, const TapedLoss& loss);

}  // namespace pdpinn
