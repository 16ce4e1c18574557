#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "taylor_sr/expr.hpp"
#include "taylor_sr/interval.hpp"
#include "taylor_sr/rng.hpp"
#include "taylor_sr/subspace.hpp"

using namespace tsr;

namespace {

Eigen::VectorXd point1(double x) {
  Eigen::VectorXd p(1);
  p << x;
  return p;
}

Eigen::VectorXd point2(double x, double y) {
  Eigen::VectorXd p(2);
  p << x, y;
  return p;
}

}  // namespace

TEST_CASE("eval basics") {
  CHECK(cnst(3.7).eval(point1(0.0)) == 3.7);
  CHECK(add(var(0), cnst(1.0)).eval(point1(2.0)) == 3.0);
  // 2^3 through the exp(log) identity
  CHECK(exp(mul(log(var(0)), var(1))).eval(point2(2.0, 3.0)) ==
        doctest::Approx(8.0).epsilon(1e-12));
  // protected log takes |.|
  CHECK(log(cnst(-std::exp(1.0))).eval(point1(0.0)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // division by zero is in-band non-finite
  CHECK(!std::isfinite(div(cnst(1.0), var(0)).eval(point1(0.0))));
  CHECK(!std::isfinite(sqrt(cnst(-1.0)).eval(point1(0.0))));
}

TEST_CASE("eval_batch matches eval") {
  Eigen::MatrixXd X(5, 1);
  X << -2, -1, 0, 1, 3;
  SUBCASE("constant") {
    const auto out = cnst(2.0).eval_batch(X);
    REQUIRE(out.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(out(i) == 2.0);
  }
  SUBCASE("variable column") {
    const auto out = var(0).eval_batch(X);
    for (int i = 0; i < 5; ++i) CHECK(out(i) == X(i, 0));
  }
  SUBCASE("division by zero row") {
    const auto out = div(cnst(1.0), var(0)).eval_batch(X);
    CHECK(!std::isfinite(out(2)));
    CHECK(std::isfinite(out(0)));
  }
  SUBCASE("random trees agree pointwise") {
    auto rng = make_rng(11);
    for (int t = 0; t < 50; ++t) {
      const Expr e = random_expr(1, 5, {-5, 5}, rng);
      const auto out = e.eval_batch(X);
      for (int i = 0; i < 5; ++i) {
        const double v = e.eval(X.row(i).transpose());
        if (std::isfinite(v))
          CHECK(out(i) == doctest::Approx(v).epsilon(1e-12));
        else
          CHECK(!std::isfinite(out(i)));
      }
    }
  }
}

TEST_CASE("node_count and depth") {
  CHECK(cnst(5.0).node_count() == 1);
  CHECK(add(var(0), cnst(1.0)).node_count() == 3);
  // ((2*x)+(2*sin x))+(x+(x*(x*x)))
  const Expr e =
      add(add(mul(cnst(2), var(0)), mul(cnst(2), sin(var(0)))),
          add(var(0), mul(var(0), mul(var(0), var(0)))));
  CHECK(e.node_count() == 16);
  CHECK(cnst(1.0).depth() == 1);
  CHECK(sin(var(0)).depth() == 2);
}

TEST_CASE("differentiate worked examples") {
  Eigen::VectorXd x = point1(0.7);
  SUBCASE("c + x + sin(x) -> 1 + cos(x)") {
    const Expr e = add(add(cnst(2.5), var(0)), sin(var(0)));
    const Expr d = differentiate(e, 0);
    CHECK(d.eval(x) == doctest::Approx(1.0 + std::cos(0.7)).epsilon(1e-12));
  }
  SUBCASE("constant -> 0") {
    const Expr d = differentiate(cnst(4.0), 0);
    CHECK(d.eval(x) == 0.0);
  }
  SUBCASE("x*x -> 2x") {
    const Expr d = differentiate(mul(var(0), var(0)), 0);
    CHECK(d.eval(x) == doctest::Approx(1.4).epsilon(1e-12));
  }
}

TEST_CASE("derivative matches finite differences on random trees") {
  auto rng = make_rng(42);
  std::uniform_real_distribution<double> pick(-2.0, 2.0);
  int checked = 0;
  for (int t = 0; t < 200; ++t) {
    const Expr e = random_expr(2, 6, {-5, 5}, rng);
    const Expr d = differentiate(e, 0);
    Eigen::VectorXd x = point2(pick(rng), pick(rng));
    const double h = 1e-6 * std::max(1.0, std::abs(x(0)));
    Eigen::VectorXd xp = x, xm = x;
    xp(0) += h;
    xm(0) -= h;
    const double fd = (e.eval(xp) - e.eval(xm)) / (2 * h);
    const double sym = d.eval(x);
    if (!std::isfinite(fd) || !std::isfinite(sym)) continue;
    const double scale = std::max({1.0, std::abs(fd), std::abs(sym)});
    if (std::abs(fd) > 1e8) continue;  // fd itself unreliable near poles
    CHECK(std::abs(fd - sym) / scale < 1e-4);
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("substitute replaces a variable everywhere") {
  const Expr e = add(var(0), mul(var(0), var(1)));
  const Expr s = substitute(e, 0, cnst(2.0));
  CHECK(s.eval(point2(99.0, 3.0)) == doctest::Approx(8.0));
}

TEST_CASE("parity_of") {
  auto rng = make_rng(7);
  const std::vector<Interval> dom{{-2.0, 2.0}};
  CHECK(parity_of(sin(var(0)), dom, rng) == Parity::Odd);
  CHECK(parity_of(cos(var(0)), dom, rng) == Parity::Even);
  const Expr mixed = add(add(cnst(1.5), var(0)), sin(var(0)));
  CHECK(parity_of(mixed, dom, rng) == Parity::None);
  // -e(-x) of an odd e is odd again
  const Expr neg = mul(cnst(-1.0), substitute(sin(var(0)), 0,
                                              mul(cnst(-1.0), var(0))));
  CHECK(parity_of(neg, dom, rng) == Parity::Odd);
}

TEST_CASE("format and parse") {
  CHECK(format(add(var(0), cnst(1.0))) == "x0 + 1");
  const Expr p = parse("sin(x0)*x1");
  CHECK(p.op() == Op::Mul);
  CHECK(p.child(0).op() == Op::Sin);
  CHECK(p.child(1).op() == Op::Var);

  SUBCASE("round trip preserves evaluation") {
    auto rng = make_rng(3);
    for (int t = 0; t < 100; ++t) {
      const Expr e = random_expr(3, 5, {-5, 5}, rng);
      const Expr back = parse(format(e));
      Eigen::VectorXd x(3);
      std::uniform_real_distribution<double> pick(-3.0, 3.0);
      x << pick(rng), pick(rng), pick(rng);
      const double a = e.eval(x), b = back.eval(x);
      if (std::isfinite(a))
        CHECK(a == doctest::Approx(b).epsilon(1e-14));
      else
        CHECK(!std::isfinite(b));
    }
  }
  SUBCASE("errors carry a position") {
    CHECK_THROWS_AS(parse("x0 +"), ParseError);
    CHECK_THROWS_AS(parse("sin(x0"), ParseError);
    CHECK_THROWS_AS(parse("2 ** 3"), ParseError);
    try {
      parse("x0 +");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("end of input") != std::string::npos);
    }
  }
}
