#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "taylor_sr/dataset.hpp"
#include "taylor_sr/features.hpp"
#include "taylor_sr/rng.hpp"

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

TEST_CASE("is_low_order accepts polynomial targets") {
  auto rng = make_rng(10);
  SUBCASE("1.1x + 0.2x^2 - 3.7") {
    const Dataset data = sample_fn(
        1, 40, -1.0, 1.0,
        [](const Eigen::VectorXd& x) {
          return 1.1 * x(0) + 0.2 * x(0) * x(0) - 3.7;
        },
        rng);
    const TaylorPoly p = fit_taylor(data);
    const auto hit = is_low_order(p, data, 1e-4, 1e-5);
    REQUIRE(hit.has_value());
    CHECK(hit->degree == 2);
    const TaylorPoly q = recenter_to_origin(hit->refit);
    CHECK(q.coeffs.at({0}) == doctest::Approx(-3.7).epsilon(1e-8));
    CHECK(q.coeffs.at({1}) == doctest::Approx(1.1).epsilon(1e-8));
    CHECK(q.coeffs.at({2}) == doctest::Approx(0.2).epsilon(1e-8));
    CHECK(hit->rmse < 1e-5);
  }
  SUBCASE("F28: single monomial 0.5*x0*x1^2 at degree 3") {
    auto brng = make_rng(5);
    const Dataset data = sample_uniform(builtin(28), brng);
    const TaylorPoly p = fit_taylor(data);
    const auto hit = is_low_order(p, data, 1e-4, 1e-5);
    REQUIRE(hit.has_value());
    CHECK(hit->degree == 3);
    const TaylorPoly q = truncate(recenter_to_origin(hit->refit), 1e-4);
    REQUIRE(q.coeffs.size() == 1);
    CHECK(q.coeffs.at({1, 2}) == doctest::Approx(0.5).epsilon(1e-8));
  }
  SUBCASE("1.5 sin(x) stays non-polynomial") {
    const Dataset data = sample_fn(
        1, 200, -3.0, 3.0,
        [](const Eigen::VectorXd& x) { return 1.5 * std::sin(x(0)); }, rng);
    const TaylorPoly p = fit_taylor(data);
    CHECK(!is_low_order(p, data, 1e-4, 1e-5).has_value());
  }
}

TEST_CASE("additive_partition") {
  SUBCASE("the Fig. 1 style polynomial splits x | y") {
    TaylorPoly p;
    p.center = Eigen::VectorXd::Zero(2);
    p.order = 5;
    p.coeffs[{1, 0}] = 1.1;
    p.coeffs[{2, 0}] = 0.2;
    p.coeffs[{0, 0}] = -3.7;
    p.coeffs[{0, 1}] = 1.5;
    p.coeffs[{0, 3}] = -0.25;
    p.coeffs[{0, 5}] = 0.0125;
    const auto g = additive_partition(p, 1e-4);
    REQUIRE(g.size() == 2);
    CHECK(g[0] == std::vector<int>{0});
    CHECK(g[1] == std::vector<int>{1});
  }
  SUBCASE("a cross monomial merges the variables") {
    TaylorPoly p;
    p.center = Eigen::VectorXd::Zero(2);
    p.order = 2;
    p.coeffs[{1, 1}] = 1.0;
    const auto g = additive_partition(p, 1e-4);
    REQUIRE(g.size() == 1);
    CHECK(g[0] == std::vector<int>{0, 1});
  }
  SUBCASE("univariate is a single group") {
    TaylorPoly p;
    p.center = Eigen::VectorXd::Zero(1);
    p.coeffs[{1}] = 2.0;
    CHECK(additive_partition(p, 1e-4).size() == 1);
  }
  SUBCASE("partition refines as eps grows") {
    TaylorPoly p;
    p.center = Eigen::VectorXd::Zero(3);
    p.order = 2;
    p.coeffs[{1, 1, 0}] = 1e-3;
    p.coeffs[{0, 1, 1}] = 10.0;
    CHECK(additive_partition(p, 1e-4).size() == 1);
    CHECK(additive_partition(p, 1e-2).size() == 2);
    CHECK(additive_partition(p, 1e9).size() == 3);
  }
}

TEST_CASE("multiplicative_partition") {
  auto rng = make_rng(21);
  SUBCASE("(x0^2)(sin x1 + 2), all positive") {
    const Dataset data = sample_fn(
        2, 400, 1.0, 3.0,
        [](const Eigen::VectorXd& x) {
          return x(0) * x(0) * (std::sin(x(1)) + 2.0);
        },
        rng);
    const auto split = multiplicative_partition(data, {});
    REQUIRE(split.has_value());
    REQUIRE(split->groups.size() == 2);
    CHECK(split->groups[0] == std::vector<int>{0});
    CHECK(split->groups[1] == std::vector<int>{1});
    CHECK(split->sign == 1.0);
  }
  SUBCASE("x0^x1 is not log-separable") {
    auto brng = make_rng(3);
    const Dataset data = sample_uniform(builtin(13), brng);
    CHECK(!multiplicative_partition(data, {}).has_value());
  }
  SUBCASE("mixed-sign Y is rejected") {
    const Dataset data = sample_fn(
        2, 100, -1.0, 1.0,
        [](const Eigen::VectorXd& x) { return x(0) + x(1); }, rng);
    CHECK(!multiplicative_partition(data, {}).has_value());
  }
  SUBCASE("all-negative Y records the sign") {
    const Dataset data = sample_fn(
        2, 400, 1.0, 3.0,
        [](const Eigen::VectorXd& x) {
          return -x(0) * x(0) * (std::sin(x(1)) + 2.0);
        },
        rng);
    const auto split = multiplicative_partition(data, {});
    REQUIRE(split.has_value());
    CHECK(split->sign == -1.0);
  }
}

TEST_CASE("boundary is the interval hull with the data range") {
  TaylorPoly p;
  p.center = Eigen::VectorXd::Zero(1);
  p.order = 2;
  p.coeffs[{0}] = -3.7;
  p.coeffs[{1}] = 1.1;
  p.coeffs[{2}] = 0.2;
  const Interval b = boundary(p, {{-1.0, 1.0}}, -4.0, -3.0);
  CHECK(b.lo == doctest::Approx(-4.8));
  CHECK(b.hi == doctest::Approx(-2.4));
  // observed data can only widen it
  const Interval w = boundary(p, {{-1.0, 1.0}}, -10.0, 5.0);
  CHECK(w.lo == -10.0);
  CHECK(w.hi == 5.0);
}

TEST_CASE("monotonicity_from_data") {
  auto rng = make_rng(7);
  auto test_rng = make_rng(8);
  SUBCASE("y = x is increasing") {
    const Dataset d = sample_fn(
        1, 60, 0.0, 1.0, [](const Eigen::VectorXd& x) { return x(0); }, rng);
    const auto rep = monotonicity_from_data(d, 1e-9, test_rng);
    CHECK(rep.joint == Monotonicity::Increasing);
    CHECK(rep.per_variable[0] == Monotonicity::Increasing);
  }
  SUBCASE("y = x^2 on [-1,1] is not monotone") {
    const Dataset d = sample_fn(
        1, 60, -1.0, 1.0,
        [](const Eigen::VectorXd& x) { return x(0) * x(0); }, rng);
    const auto rep = monotonicity_from_data(d, 1e-9, test_rng);
    CHECK(rep.joint == Monotonicity::None);
  }
  SUBCASE("x0^x1 on [2,4]^2 is jointly increasing") {
    auto brng = make_rng(4);
    const Dataset d = sample_uniform(builtin(13), brng);
    const auto rep = monotonicity_from_data(d, 1e-9, test_rng);
    CHECK(rep.joint == Monotonicity::Increasing);
    CHECK(rep.per_variable[0] == Monotonicity::Increasing);
    CHECK(rep.per_variable[1] == Monotonicity::Increasing);
  }
  SUBCASE("y = -x is decreasing") {
    const Dataset d = sample_fn(
        1, 60, 0.0, 1.0, [](const Eigen::VectorXd& x) { return -x(0); }, rng);
    const auto rep = monotonicity_from_data(d, 1e-9, test_rng);
    CHECK(rep.joint == Monotonicity::Decreasing);
  }
}

TEST_CASE("parity_of_poly") {
  auto rng = make_rng(12);
  SUBCASE("1.5 sin(x) - 3.7 is odd after constant removal") {
    const Dataset d = sample_fn(
        1, 100, -3.0, 3.0,
        [](const Eigen::VectorXd& x) { return 1.5 * std::sin(x(0)) - 3.7; },
        rng);
    CHECK(parity_of_poly(d, {}, 1e-4) == Parity::Odd);
  }
  SUBCASE("x^2 is even") {
    const Dataset d = sample_fn(
        1, 100, -2.0, 2.0,
        [](const Eigen::VectorXd& x) { return x(0) * x(0); }, rng);
    CHECK(parity_of_poly(d, {}, 1e-4) == Parity::Even);
  }
  SUBCASE("off-origin domains are unclassifiable") {
    const Dataset d = sample_fn(
        1, 100, 1.0, 3.0,
        [](const Eigen::VectorXd& x) { return x(0) * x(0); }, rng);
    CHECK(parity_of_poly(d, {}, 1e-4) == Parity::None);
  }
  SUBCASE("mirrored data mirrors the class") {
    const Dataset d = sample_fn(
        1, 100, -2.0, 2.0,
        [](const Eigen::VectorXd& x) {
          return std::sin(-x(0)) * 1.5;  // f(-x) of an odd f
        },
        rng);
    CHECK(parity_of_poly(d, {}, 1e-4) == Parity::Odd);
  }
}

TEST_CASE("eps threshold controls the classification") {
  // the worked 4-order example: {0.015, 1.0 x, 0.003 x^2, -1/6 x^3}
  auto classify = [](double eps) {
    TaylorPoly p;
    p.center = Eigen::VectorXd::Zero(1);
    p.order = 4;
    p.coeffs[{0}] = 0.015;
    p.coeffs[{1}] = 1.0;
    p.coeffs[{2}] = 0.003;
    p.coeffs[{3}] = -1.0 / 6.0;
    bool any = false, all_odd = true, all_even = true;
    for (const auto& [m, c] : p.coeffs) {
      if (degree(m) == 0 || std::abs(c) < eps) continue;
      any = true;
      (degree(m) % 2 == 1 ? all_even : all_odd) = false;
    }
    if (!any) return Parity::None;
    if (all_odd) return Parity::Odd;
    if (all_even) return Parity::Even;
    return Parity::None;
  };
  CHECK(classify(0.02) == Parity::Odd);
  CHECK(classify(1e-4) == Parity::None);
}

TEST_CASE("extract_features end to end") {
  SUBCASE("F28 hits the low-order path") {
    auto rng = make_rng(6);
    const Dataset data = sample_uniform(builtin(28), rng);
    const auto ext = extract_features(data, {});
    REQUIRE(ext.low_order.has_value());
    CHECK(ext.features.low_order_degree == 3);
    CHECK(iv_contains(ext.features.boundary,
                      {data.Y.minCoeff(), data.Y.maxCoeff()}));
  }
  SUBCASE("the Fig. 1 function separates") {
    auto rng = make_rng(9);
    const Dataset data = sample_fn(
        2, 400, -1.0, 1.0,
        [](const Eigen::VectorXd& x) {
          return 1.1 * x(0) + 0.2 * x(0) * x(0) + 1.5 * std::sin(x(1)) - 3.7;
        },
        rng);
    const auto ext = extract_features(data, {});
    REQUIRE(ext.features.additive_partition.size() == 2);
    CHECK(ext.features.additive_partition[0] == std::vector<int>{0});
    CHECK(ext.features.additive_partition[1] == std::vector<int>{1});
  }
  SUBCASE("invariants hold on an arbitrary target") {
    auto rng = make_rng(14);
    const Dataset data = sample_fn(
        2, 300, 0.5, 2.0,
        [](const Eigen::VectorXd& x) {
          return std::exp(std::sin(x(0) * x(1)));
        },
        rng);
    const auto ext = extract_features(data, {});
    CHECK(iv_contains(ext.features.boundary,
                      {data.Y.minCoeff(), data.Y.maxCoeff()}));
    std::vector<bool> seen(2, false);
    for (const auto& g : ext.features.additive_partition)
      for (int v : g) {
        CHECK(!seen[static_cast<std::size_t>(v)]);
        seen[static_cast<std::size_t>(v)] = true;
      }
    CHECK(seen[0]);
    CHECK(seen[1]);
  }
}
