#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "taylor_sr/rng.hpp"
#include "taylor_sr/subspace.hpp"

using namespace tsr;

TEST_CASE("enumerate_subspaces counts") {
  SUBCASE("depth 1 terminals") {
    // depth-1 "trees" are the terminals themselves; enumerate_subspaces
    // starts from them
    const auto s = enumerate_subspaces(1, 1);
    CHECK(s.size() == 2);  // {x, c}
  }
  SUBCASE("d=1 h=2 full function set -> 26") {
    const auto s = enumerate_subspaces(1, 2);
    CHECK(s.size() == 26);  // 4*2*2 binary + 5*2 unary
  }
  SUBCASE("duplicate-free against a format oracle") {
    const auto s = enumerate_subspaces(2, 2);
    std::set<std::string> seen;
    for (const auto& e : s) {
      CHECK(e.depth() == 2);
      seen.insert(format(e));
    }
    CHECK(seen.size() == s.size());
    CHECK(s.size() == 51);  // 4*3*3 + 5*3
  }
  SUBCASE("restricted set {+, sin} includes the worked templates") {
    // the three illustration templates mix effective depths: "sin + x c"
    // sits at depth 3, "+ + sin c x x" and "+ sin sin x x" at depth 4
    const auto s3 = enumerate_subspaces(1, 3, {Op::Add, Op::Sin});
    std::set<std::string> seen3;
    for (const auto& e : s3) seen3.insert(format(e));
    CHECK(seen3.count(format(sin(add(var(0), placeholder())))) == 1);

    const auto s4 = enumerate_subspaces(1, 4, {Op::Add, Op::Sin});
    std::set<std::string> seen4;
    for (const auto& e : s4) seen4.insert(format(e));
    const Expr t1 = add(add(sin(placeholder()), var(0)), var(0));
    const Expr t2 = add(sin(sin(var(0))), var(0));
    CHECK(seen4.count(format(t1)) == 1);
    CHECK(seen4.count(format(t2)) == 1);
  }
  SUBCASE("the cap raises") {
    CHECK_THROWS_AS(enumerate_subspaces(8, 4, {}, 1000), EnumerationError);
  }
}

TEST_CASE("placeholders") {
  CHECK(is_placeholder(placeholder()));
  CHECK(!is_placeholder(cnst(1.0)));
  const Expr t = add(placeholder(), var(0));
  const Expr inst = instantiate(t, 2.5);
  Eigen::VectorXd x(1);
  x << 1.0;
  CHECK(inst.eval(x) == 3.5);
  auto rng = make_rng(1);
  const Expr drawn = instantiate(t, {-5.0, 5.0}, rng);
  CHECK(drawn.child(0).value() >= -5.0);
  CHECK(drawn.child(0).value() <= 5.0);
}

TEST_CASE("unbound path detection") {
  // c + x + sin(x): the path through x -> + -> + is all unbound
  const Expr t1 = add(add(sin(var(0)), placeholder()), var(0));
  CHECK(has_unbound_path(t1));
  // sin(sin(x)) + sin(x): no such path
  const Expr t2 = add(sin(sin(var(0))), sin(var(0)));
  CHECK(!has_unbound_path(t2));
  CHECK(has_unbound_path(exp(var(0))));
  CHECK(!has_unbound_path(sin(var(0))));
  CHECK(!has_unbound_path(cnst(2.0)));
}

TEST_CASE("evaluate_subspace on the worked example") {
  auto rng = make_rng(17);
  const std::vector<Interval> dom{{-2.0, 2.0}};
  // c + x + sin(x)
  const Expr t = add(add(sin(var(0)), placeholder()), var(0));
  const auto f = evaluate_subspace(t, dom, {-5.0, 5.0}, rng);
  CHECK(f.unbound);
  CHECK(f.boundary.lo == -std::numeric_limits<double>::infinity());
  CHECK(f.boundary.hi == std::numeric_limits<double>::infinity());
  CHECK(f.monotonicity == Monotonicity::Increasing);  // 1 + cos(x) >= 0
  CHECK(f.parity == Parity::None);

  const auto g = evaluate_subspace(sin(var(0)), dom, {-5.0, 5.0}, rng);
  CHECK(!g.unbound);
  CHECK(g.boundary.lo >= -1.0 - 1e-12);
  CHECK(g.boundary.hi <= 1.0 + 1e-12);
  CHECK(g.parity == Parity::Odd);
}

TEST_CASE("unbound shortcut widens the boundary, bounded templates enclose") {
  auto rng = make_rng(23);
  const std::vector<Interval> dom{{-3.0, 3.0}, {-3.0, 3.0}};
  Interval erc{-5.0, 5.0};
  const auto templates = enumerate_subspaces(2, 2);
  std::uniform_real_distribution<double> ux(-3.0, 3.0), uc(-5.0, 5.0);
  for (const auto& t : templates) {
    const auto f = evaluate_subspace(t, dom, erc, rng);
    CHECK(f.unbound == has_unbound_path(t));
    if (f.unbound) {
      CHECK(f.boundary.lo == -std::numeric_limits<double>::infinity());
      CHECK(f.boundary.hi == std::numeric_limits<double>::infinity());
      continue;
    }
    // sampled instantiations stay inside the reported boundary
    for (int s = 0; s < 20; ++s) {
      const Expr inst = instantiate(t, uc(rng));
      Eigen::VectorXd p(2);
      p << ux(rng), ux(rng);
      const double v = inst.eval(p);
      if (std::isfinite(v)) {
        CHECK(v >= f.boundary.lo - 1e-9);
        CHECK(v <= f.boundary.hi + 1e-9);
      }
    }
  }
}

TEST_CASE("monotone-by-derivative is conservative") {
  auto rng = make_rng(29);
  const std::vector<Interval> dom{{0.5, 2.0}};
  const auto templates = enumerate_subspaces(1, 2);
  std::uniform_real_distribution<double> u(dom[0].lo, dom[0].hi);
  for (const auto& t : templates) {
    const auto f = evaluate_subspace(t, dom, {1.0, 1.0}, rng);
    if (f.monotonicity != Monotonicity::Increasing) continue;
    const Expr inst = instantiate(t, 1.0);
    std::vector<double> xs(1000);
    for (auto& x : xs) x = u(rng);
    std::sort(xs.begin(), xs.end());
    Eigen::VectorXd p(1);
    double prev = -std::numeric_limits<double>::infinity();
    for (double x : xs) {
      p << x;
      const double v = inst.eval(p);
      if (!std::isfinite(v)) continue;
      CHECK(v >= prev - 1e-9);
      prev = v;
    }
  }
}

TEST_CASE("SubspaceIndex admissibility") {
  auto rng = make_rng(31);
  const std::vector<Interval> dom{{-1.0, 1.0}};
  const auto idx = SubspaceIndex::build(1, 2, dom, {-5.0, 5.0}, rng);
  // depth-1 terminals are included on top of the depth-2 templates
  CHECK(idx.all().size() == 28);

  // a [-inf,inf] requirement admits only unbound subspaces
  const auto adm_all = idx.admissible(Interval::whole());
  for (std::size_t i : adm_all)
    CHECK(iv_contains(idx.all()[i].features.boundary, Interval::whole()));
  CHECK(!adm_all.empty());

  // a tight requirement admits at least the unbound ones
  const auto adm = idx.admissible({-0.5, 0.5});
  CHECK(adm.size() >= adm_all.size());
}
