#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "taylor_sr/metrics.hpp"
#include "taylor_sr/rng.hpp"
#include "taylor_sr/taylor_poly.hpp"

using namespace tsr;

namespace {

Dataset sample_fn(int d, int n, double lo, double hi,
                  const std::function<double(const Eigen::VectorXd&)>& f,
                  std::mt19937_64& rng) {
  Dataset out;
  out.X.resize(n, d);
  out.Y.resize(n);
  std::uniform_real_distribution<double> u(lo, hi);
  for (int i = 0; i < n; ++i) {
    for (int t = 0; t < d; ++t) out.X(i, t) = u(rng);
    out.Y(i) = f(out.X.row(i).transpose());
  }
  return out;
}

}  // namespace

TEST_CASE("taylor_term_count and choose_order") {
  CHECK(taylor_term_count(1, 4) == 5);
  CHECK(taylor_term_count(2, 3) == 10);
  CHECK(taylor_term_count(3, 2) == 10);
  FitConfig cfg;
  CHECK(cfg.k_max(1) == 18);
  CHECK(cfg.k_max(2) == 8);
  CHECK(cfg.k_max(3) == 8);
  CHECK(cfg.k_max(4) == 4);
  CHECK(cfg.k_max(9) == 2);
  CHECK(choose_order(1, 20, cfg) == 18);
  CHECK(choose_order(2, 400, cfg) == 8);
  CHECK(choose_order(2, 10, cfg) == 3);  // C(5,2)=10 fits exactly
  CHECK_THROWS_AS(choose_order(3, 2, cfg), FitError);
}

TEST_CASE("monomials_up_to is complete and grlex ordered") {
  const auto m = monomials_up_to(2, 3);
  CHECK(m.size() == 9);  // C(5,2)-1
  for (std::size_t i = 1; i < m.size(); ++i)
    CHECK(GrlexLess{}(m[i - 1], m[i]));
}

TEST_CASE("center is the sample nearest the median") {
  Dataset d;
  d.X.resize(5, 1);
  d.X << 10, 1, 3, 2, 100;
  d.Y.resize(5);
  d.Y << 0, 0, 0, 0, 0;
  const auto sel = select_center_and_neighborhood(d, 3);
  CHECK(sel.center_row == 2);  // median 3
  REQUIRE(sel.neighborhood.size() == 3);
  CHECK(sel.neighborhood[0] == 3);  // |2-3|=1
  CHECK(sel.neighborhood[1] == 1);  // |1-3|=2
  CHECK(sel.neighborhood[2] == 0);  // |10-3|=7
}

TEST_CASE("fit recovers random polynomials exactly") {
  auto rng = make_rng(2024);
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  std::uniform_int_distribution<int> dim(1, 3), deg(1, 4);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = dim(rng), k = deg(rng);
    TaylorPoly truth;
    truth.center = Eigen::VectorXd::Zero(d);
    truth.order = k;
    truth.coeffs[Monomial(static_cast<std::size_t>(d), 0)] = coef(rng);
    for (const auto& m : monomials_up_to(d, k)) truth.coeffs[m] = coef(rng);
    const int n = static_cast<int>(3 * taylor_term_count(d, k));
    const Dataset data = sample_fn(
        d, n, -1.0, 1.0, [&](const Eigen::VectorXd& x) { return truth(x); },
        rng);
    const TaylorPoly fitted =
        truncate(recenter_to_origin(fit_taylor(data)), 1e-6);
    for (const auto& [m, c] : truth.coeffs) {
      const auto it = fitted.coeffs.find(m);
      const double got = it == fitted.coeffs.end() ? 0.0 : it->second;
      CHECK(std::abs(got - c) < 1e-6);
    }
    for (const auto& [m, c] : fitted.coeffs)
      CHECK(truth.coeffs.count(m) == 1);
  }
}

TEST_CASE("recenter_to_origin is an exact re-expression") {
  auto rng = make_rng(31);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  TaylorPoly p;
  p.center = Eigen::VectorXd(2);
  p.center << 0.7, -1.3;
  p.order = 3;
  p.coeffs[{0, 0}] = 1.5;
  p.coeffs[{2, 1}] = -0.4;
  p.coeffs[{1, 0}] = 2.0;
  p.coeffs[{0, 3}] = 0.25;
  const TaylorPoly q = recenter_to_origin(p);
  CHECK(q.center.isZero());
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd x(2);
    x << u(rng), u(rng);
    CHECK(p(x) == doctest::Approx(q(x)).epsilon(1e-12));
  }
}

TEST_CASE("refit_coefficients") {
  auto rng = make_rng(8);
  const Dataset data = sample_fn(
      1, 50, -2.0, 2.0,
      [](const Eigen::VectorXd& x) {
        return -3.7 + 1.1 * x(0) + 0.2 * x(0) * x(0);
      },
      rng);
  std::set<Monomial, GrlexLess> support{{0}, {1}, {2}};
  const TaylorPoly p = refit_coefficients(support, data);
  CHECK(p.coeffs.at({0}) == doctest::Approx(-3.7).epsilon(1e-10));
  CHECK(p.coeffs.at({1}) == doctest::Approx(1.1).epsilon(1e-10));
  CHECK(p.coeffs.at({2}) == doctest::Approx(0.2).epsilon(1e-10));

  // support larger than the dataset
  Dataset tiny = data;
  tiny.X.conservativeResize(2, 1);
  tiny.Y.conservativeResize(2);
  CHECK_THROWS_AS(refit_coefficients(support, tiny), FitError);

  // singular design: duplicated rows cannot identify 3 coefficients
  Dataset dup;
  dup.X = Eigen::MatrixXd::Ones(6, 1);
  dup.Y = Eigen::VectorXd::Ones(6);
  CHECK_THROWS_AS(refit_coefficients(support, dup), FitError);
}

TEST_CASE("poly_bounds golden: [-4.8, -2.4]") {
  TaylorPoly p;
  p.center = Eigen::VectorXd::Zero(1);
  p.order = 2;
  p.coeffs[{0}] = -3.7;
  p.coeffs[{1}] = 1.1;
  p.coeffs[{2}] = 0.2;
  const Interval b = poly_bounds(p, {{-1.0, 1.0}});
  CHECK(b.lo == doctest::Approx(-4.8).epsilon(1e-12));
  CHECK(b.hi == doctest::Approx(-2.4).epsilon(1e-12));
}

TEST_CASE("poly_to_expr") {
  TaylorPoly zero;
  zero.center = Eigen::VectorXd::Zero(2);
  const Expr z = poly_to_expr(zero);
  CHECK(z.op() == Op::Const);
  CHECK(z.value() == 0.0);

  TaylorPoly p;
  p.center = Eigen::VectorXd::Zero(2);
  p.order = 3;
  p.coeffs[{1, 2}] = 0.5;
  const Expr e = poly_to_expr(p);
  Eigen::VectorXd x(2);
  x << 3.0, 2.0;
  CHECK(e.eval(x) == doctest::Approx(6.0).epsilon(1e-12));

  // recentering happens before emission
  TaylorPoly off;
  off.center = Eigen::VectorXd::Ones(1);
  off.order = 2;
  off.coeffs[{2}] = 1.0;
  const Expr oe = poly_to_expr(off);
  Eigen::VectorXd y(1);
  y << 4.0;
  CHECK(oe.eval(y) == doctest::Approx(9.0).epsilon(1e-12));
}
