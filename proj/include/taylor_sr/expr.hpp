#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tsr {

// Node kinds. Asin and Pow are evaluation-only: benchmark ground truths may
// use them, the search grammar never does.
enum class Op : std::uint8_t {
  Add, Sub, Mul, Div,
  Sin, Cos, Log, Exp, Sqrt,
  Asin, Pow,
  Var, Const
};

inline int arity_of(Op op) {
  switch (op) {
    case Op::Add: case Op::Sub: case Op::Mul: case Op::Div: case Op::Pow:
      return 2;
    case Op::Sin: case Op::Cos: case Op::Log: case Op::Exp: case Op::Sqrt:
    case Op::Asin:
      return 1;
    default:
      return 0;
  }
}

inline bool is_search_op(Op op) { return op != Op::Asin && op != Op::Pow; }

enum class Parity { Odd, Even, None };
enum class Monotonicity { Increasing, Decreasing, None };

const char* to_string(Parity p);
const char* to_string(Monotonicity m);

// Immutable expression tree with shared structure. Copying is a pointer copy.
class Expr {
 public:
  Expr() = default;

  static Expr variable(int index);
  static Expr constant(double value);
  static Expr make(Op op, Expr a);
  static Expr make(Op op, Expr a, Expr b);

  explicit operator bool() const { return n_ != nullptr; }

  Op op() const { return n_->op; }
  int var_index() const { return n_->var; }
  double value() const { return n_->value; }
  int arity() const { return arity_of(n_->op); }
  Expr child(int i) const { return Expr(n_->kids[i]); }

  int node_count() const { return n_->count; }
  int depth() const { return n_->depth; }
  // Largest variable index referenced, or -1 for a constant tree.
  int max_var() const { return n_->max_var; }

  double eval(const Eigen::VectorXd& point) const;
  Eigen::ArrayXd eval_batch(const Eigen::MatrixXd& X) const;

 private:
  struct Node {
    Op op;
    int var = 0;
    double value = 0.0;
    std::shared_ptr<const Node> kids[2];
    int count = 1;
    int depth = 1;
    int max_var = -1;
  };
  explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

// Terse constructors so trees read like formulas.
inline Expr var(int i) { return Expr::variable(i); }
inline Expr cnst(double v) { return Expr::constant(v); }
inline Expr add(Expr a, Expr b) { return Expr::make(Op::Add, std::move(a), std::move(b)); }
inline Expr sub(Expr a, Expr b) { return Expr::make(Op::Sub, std::move(a), std::move(b)); }
inline Expr mul(Expr a, Expr b) { return Expr::make(Op::Mul, std::move(a), std::move(b)); }
inline Expr div(Expr a, Expr b) { return Expr::make(Op::Div, std::move(a), std::move(b)); }
inline Expr sin(Expr a) { return Expr::make(Op::Sin, std::move(a)); }
inline Expr cos(Expr a) { return Expr::make(Op::Cos, std::move(a)); }
inline Expr log(Expr a) { return Expr::make(Op::Log, std::move(a)); }
inline Expr exp(Expr a) { return Expr::make(Op::Exp, std::move(a)); }
inline Expr sqrt(Expr a) { return Expr::make(Op::Sqrt, std::move(a)); }

// Partial derivative with respect to one variable. Standard rules; literal
// zero/one factors are folded away, nothing more.
Expr differentiate(const Expr& e, int variable);

// Replace every occurrence of variable `index` with `replacement`.
Expr substitute(const Expr& e, int index, const Expr& replacement);

struct Interval;  // interval.hpp

// Sampled point test: draws `samples` points in the (symmetrized) domain and
// compares f(x) against f(-x). Any non-finite sample classifies None.
Parity parity_of(const Expr& e, const std::vector<Interval>& domain,
                 std::mt19937_64& rng, int samples = 64, double tau = 1e-8);

std::string format(const Expr& e);

struct ParseError : std::runtime_error {
  ParseError(std::size_t pos, const std::string& what)
      : std::runtime_error("parse error at position " + std::to_string(pos) +
                           ": " + what),
        position(pos) {}
  std::size_t position;
};

// Infix grammar over the function set, variables x0..x{d-1}, decimal or
// scientific literals. Also accepts asin/pow/pi for benchmark ground truths.
Expr parse(std::string_view text);

}  // namespace tsr
