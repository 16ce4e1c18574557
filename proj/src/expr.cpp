#include "taylor_sr/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "taylor_sr/interval.hpp"

namespace tsr {

const char* to_string(Parity p) {
  switch (p) {
    case Parity::Odd: return "odd";
    case Parity::Even: return "even";
    default: return "none";
  }
}

const char* to_string(Monotonicity m) {
  switch (m) {
    case Monotonicity::Increasing: return "increasing";
    case Monotonicity::Decreasing: return "decreasing";
    default: return "none";
  }
}

Expr Expr::variable(int index) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->var = index;
  n->max_var = index;
  return Expr(std::move(n));
}

Expr Expr::constant(double v) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = v;
  return Expr(std::move(n));
}

Expr Expr::make(Op op, Expr a) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->count = 1 + a.node_count();
  n->depth = 1 + a.depth();
  n->max_var = a.max_var();
  n->kids[0] = std::move(a.n_);
  return Expr(std::move(n));
}

Expr Expr::make(Op op, Expr a, Expr b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->count = 1 + a.node_count() + b.node_count();
  n->depth = 1 + std::max(a.depth(), b.depth());
  n->max_var = std::max(a.max_var(), b.max_var());
  n->kids[0] = std::move(a.n_);
  n->kids[1] = std::move(b.n_);
  return Expr(std::move(n));
}

double Expr::eval(const Eigen::VectorXd& point) const {
  switch (n_->op) {
    case Op::Const: return n_->value;
    case Op::Var: return point(n_->var);
    case Op::Add: return child(0).eval(point) + child(1).eval(point);
    case Op::Sub: return child(0).eval(point) - child(1).eval(point);
    case Op::Mul: return child(0).eval(point) * child(1).eval(point);
    case Op::Div: return child(0).eval(point) / child(1).eval(point);
    case Op::Sin: return std::sin(child(0).eval(point));
    case Op::Cos: return std::cos(child(0).eval(point));
    case Op::Log: return std::log(std::abs(child(0).eval(point)));
    case Op::Exp: return std::exp(child(0).eval(point));
    case Op::Sqrt: return std::sqrt(child(0).eval(point));
    case Op::Asin: return std::asin(child(0).eval(point));
    case Op::Pow:
      return std::pow(child(0).eval(point), child(1).eval(point));
  }
  return std::numeric_limits<double>::quiet_NaN();
}

Eigen::ArrayXd Expr::eval_batch(const Eigen::MatrixXd& X) const {
  const auto n = X.rows();
  switch (n_->op) {
    case Op::Const: return Eigen::ArrayXd::Constant(n, n_->value);
    case Op::Var: return X.col(n_->var).array();
    case Op::Add: return child(0).eval_batch(X) + child(1).eval_batch(X);
    case Op::Sub: return child(0).eval_batch(X) - child(1).eval_batch(X);
    case Op::Mul: return child(0).eval_batch(X) * child(1).eval_batch(X);
    case Op::Div: return child(0).eval_batch(X) / child(1).eval_batch(X);
    case Op::Sin: return child(0).eval_batch(X).sin();
    case Op::Cos: return child(0).eval_batch(X).cos();
    case Op::Log: return child(0).eval_batch(X).abs().log();
    case Op::Exp: return child(0).eval_batch(X).exp();
    case Op::Sqrt: return child(0).eval_batch(X).sqrt();
    case Op::Asin: return child(0).eval_batch(X).asin();
    case Op::Pow:
      return child(0).eval_batch(X).pow(child(1).eval_batch(X));
  }
  return Eigen::ArrayXd::Constant(n, std::numeric_limits<double>::quiet_NaN());
}

namespace {

bool is_const(const Expr& e, double v) {
  return e.op() == Op::Const && e.value() == v;
}

// add/sub/mul with literal 0/1 folding.
Expr s_add(Expr a, Expr b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return add(std::move(a), std::move(b));
}
Expr s_sub(Expr a, Expr b) {
  if (is_const(b, 0.0)) return a;
  return sub(std::move(a), std::move(b));
}
Expr s_mul(Expr a, Expr b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return cnst(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  return mul(std::move(a), std::move(b));
}

}  // namespace

Expr differentiate(const Expr& e, int v) {
  switch (e.op()) {
    case Op::Const: return cnst(0.0);
    case Op::Var: return cnst(e.var_index() == v ? 1.0 : 0.0);
    case Op::Add:
      return s_add(differentiate(e.child(0), v), differentiate(e.child(1), v));
    case Op::Sub:
      return s_sub(differentiate(e.child(0), v), differentiate(e.child(1), v));
    case Op::Mul:
      return s_add(s_mul(differentiate(e.child(0), v), e.child(1)),
                   s_mul(e.child(0), differentiate(e.child(1), v)));
    case Op::Div:
      return div(s_sub(s_mul(differentiate(e.child(0), v), e.child(1)),
                       s_mul(e.child(0), differentiate(e.child(1), v))),
                 mul(e.child(1), e.child(1)));
    case Op::Sin:
      return s_mul(cos(e.child(0)), differentiate(e.child(0), v));
    case Op::Cos:
      return s_mul(sub(cnst(0.0), sin(e.child(0))),
                   differentiate(e.child(0), v));
    case Op::Log:
      return s_mul(div(cnst(1.0), e.child(0)), differentiate(e.child(0), v));
    case Op::Exp:
      return s_mul(exp(e.child(0)), differentiate(e.child(0), v));
    case Op::Sqrt:
      return s_mul(div(cnst(1.0), mul(cnst(2.0), sqrt(e.child(0)))),
                   differentiate(e.child(0), v));
    default:
      throw std::invalid_argument(
          "differentiate: expression uses an operator outside the function set");
  }
}

Expr substitute(const Expr& e, int index, const Expr& replacement) {
  switch (e.arity()) {
    case 0:
      if (e.op() == Op::Var && e.var_index() == index) return replacement;
      return e;
    case 1:
      return Expr::make(e.op(), substitute(e.child(0), index, replacement));
    default:
      return Expr::make(e.op(), substitute(e.child(0), index, replacement),
                        substitute(e.child(1), index, replacement));
  }
}

Parity parity_of(const Expr& e, const std::vector<Interval>& domain,
                 std::mt19937_64& rng, int samples, double tau) {
  const int d = std::max(e.max_var() + 1, 1);
  Eigen::VectorXd x(d), nx(d);
  double max_abs = 0.0, max_odd = 0.0, max_even = 0.0;
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    for (int t = 0; t < d; ++t) {
      Interval dom = t < static_cast<int>(domain.size()) ? domain[t]
                                                         : Interval{-1.0, 1.0};
      // Symmetrize about the origin so -x stays inside.
      double r = std::max(std::abs(dom.lo), std::abs(dom.hi));
      if (!std::isfinite(r) || r == 0.0) r = 1.0;
      x(t) = (2.0 * u01(rng) - 1.0) * r;
      nx(t) = -x(t);
    }
    const double f = e.eval(x);
    const double g = e.eval(nx);
    if (!std::isfinite(f) || !std::isfinite(g)) return Parity::None;
    max_abs = std::max({max_abs, std::abs(f), std::abs(g)});
    max_odd = std::max(max_odd, std::abs(f + g));
    max_even = std::max(max_even, std::abs(f - g));
  }
  const double tol = tau * std::max(1.0, max_abs);
  if (max_odd <= tol) return Parity::Odd;
  if (max_even <= tol) return Parity::Even;
  return Parity::None;
}

namespace {

int precedence(Op op) {
  switch (op) {
    case Op::Add: case Op::Sub: return 1;
    case Op::Mul: case Op::Div: return 2;
    default: return 3;
  }
}

void format_rec(const Expr& e, std::ostringstream& out) {
  switch (e.op()) {
    case Op::Const: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", e.value());
      out << buf;
      return;
    }
    case Op::Var:
      out << 'x' << e.var_index();
      return;
    case Op::Sin: case Op::Cos: case Op::Log: case Op::Exp: case Op::Sqrt:
    case Op::Asin: {
      static const char* names[] = {"sin", "cos", "log", "exp", "sqrt", "asin"};
      out << names[static_cast<int>(e.op()) - static_cast<int>(Op::Sin)] << '(';
      format_rec(e.child(0), out);
      out << ')';
      return;
    }
    case Op::Pow:
      out << "pow(";
      format_rec(e.child(0), out);
      out << ", ";
      format_rec(e.child(1), out);
      out << ')';
      return;
    default: {
      static const char* ops[] = {" + ", " - ", " * ", " / "};
      const int p = precedence(e.op());
      auto emit = [&](const Expr& c, bool right) {
        const bool paren =
            arity_of(c.op()) == 2 &&
            (precedence(c.op()) < p || (right && precedence(c.op()) == p));
        if (paren) out << '(';
        format_rec(c, out);
        if (paren) out << ')';
      };
      emit(e.child(0), false);
      out << ops[static_cast<int>(e.op())];
      emit(e.child(1), true);
      return;
    }
  }
}

struct Parser {
  std::string_view s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw ParseError(pos, pos >= s.size()
                              ? what + " at end of input"
                              : what + " near '" + std::string(1, s[pos]) + "'");
  }

  Expr expression() {
    Expr lhs = term();
    for (;;) {
      skip_ws();
      if (eat('+')) lhs = add(std::move(lhs), term());
      else if (eat('-')) lhs = sub(std::move(lhs), term());
      else return lhs;
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      skip_ws();
      if (eat('*')) lhs = mul(std::move(lhs), unary());
      else if (eat('/')) lhs = div(std::move(lhs), unary());
      else return lhs;
    }
  }

  Expr unary() {
    skip_ws();
    if (eat('-')) return sub(cnst(0.0), unary());
    if (eat('+')) return unary();
    return primary();
  }

  Expr primary() {
    skip_ws();
    if (pos >= s.size()) fail("expected expression");
    const char c = s[pos];
    if (eat('(')) {
      Expr e = expression();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    fail("unexpected token");
  }

  Expr number() {
    const char* begin = s.data() + pos;
    const char* end = s.data() + s.size();
    double v = 0.0;
    auto [p, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc()) fail("malformed number");
    pos = static_cast<std::size_t>(p - s.data());
    return cnst(v);
  }

  Expr identifier() {
    std::size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    std::string_view name = s.substr(start, pos - start);
    if (name.size() >= 2 && name[0] == 'x' &&
        std::isdigit(static_cast<unsigned char>(name[1]))) {
      int idx = 0;
      auto [p, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
      if (ec == std::errc() && p == name.data() + name.size())
        return var(idx);
    }
    if (name == "pi") return cnst(M_PI);
    Op op;
    if (name == "sin") op = Op::Sin;
    else if (name == "cos") op = Op::Cos;
    else if (name == "log" || name == "ln") op = Op::Log;
    else if (name == "exp") op = Op::Exp;
    else if (name == "sqrt") op = Op::Sqrt;
    else if (name == "asin" || name == "arcsin") op = Op::Asin;
    else if (name == "pow") {
      if (!eat('(')) fail("expected '(' after pow");
      Expr a = expression();
      if (!eat(',')) fail("expected ',' in pow");
      Expr b = expression();
      if (!eat(')')) fail("expected ')'");
      return Expr::make(Op::Pow, std::move(a), std::move(b));
    } else {
      pos = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }
    if (!eat('(')) fail("expected '(' after function name");
    Expr a = expression();
    if (!eat(')')) fail("expected ')'");
    return Expr::make(op, std::move(a));
  }
};

}  // namespace

std::string format(const Expr& e) {
  std::ostringstream out;
  format_rec(e, out);
  return out.str();
}

Expr parse(std::string_view text) {
  Parser p{text};
  Expr e = p.expression();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return e;
}

}  // namespace tsr
