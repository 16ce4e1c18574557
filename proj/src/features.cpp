#include "taylor_sr/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "taylor_sr/rng.hpp"

namespace tsr {

namespace {

int count_positive_exponents(const Monomial& m) {
  int c = 0;
  for (int e : m) c += e > 0;
  return c;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

}  // namespace

Partition additive_partition(const TaylorPoly& p, double eps) {
  const int d = p.dims();
  UnionFind uf(d);
  for (const auto& [m, c] : p.coeffs) {
    if (std::abs(c) < eps) continue;
    if (count_positive_exponents(m) < 2) continue;
    int first = -1;
    for (int t = 0; t < d; ++t) {
      if (m[static_cast<std::size_t>(t)] == 0) continue;
      if (first < 0)
        first = t;
      else
        uf.unite(first, t);
    }
  }
  std::vector<std::vector<int>> by_root(static_cast<std::size_t>(d));
  for (int t = 0; t < d; ++t)
    by_root[static_cast<std::size_t>(uf.find(t))].push_back(t);
  Partition out;
  for (auto& g : by_root)
    if (!g.empty()) out.push_back(std::move(g));
  return out;
}

std::optional<LowOrderHit> is_low_order(const TaylorPoly& p,
                                        const Dataset& data, double eps,
                                        double threshold) {
  int i = 0;  // smallest i with every degree-(>i) coefficient below eps
  for (const auto& [m, c] : p.coeffs)
    if (std::abs(c) >= eps && degree(m) > 0) i = std::max(i, degree(m));
  if (i >= p.order) return std::nullopt;

  std::set<Monomial, GrlexLess> support;
  for (const auto& m : monomials_up_to(p.dims(), i)) support.insert(m);
  support.insert(Monomial(static_cast<std::size_t>(p.dims()), 0));
  if (static_cast<Eigen::Index>(support.size()) > data.n()) return std::nullopt;

  TaylorPoly refit;
  try {
    refit = refit_coefficients(support, data);
  } catch (const FitError&) {
    return std::nullopt;
  }
  const TaylorPoly cleaned = truncate(refit, eps);
  const double rmse_clean = rmse(cleaned.eval_batch(data.X), data.Y.array());
  if (rmse_clean < threshold)
    return LowOrderHit{i, cleaned, rmse_clean};
  const double rmse_full = rmse(refit.eval_batch(data.X), data.Y.array());
  if (rmse_full < threshold) return LowOrderHit{i, refit, rmse_full};
  return std::nullopt;
}

std::optional<MultiplicativeSplit> multiplicative_partition(
    const Dataset& data, const FitConfig& cfg) {
  if (data.n() == 0 || data.dims() < 2) return std::nullopt;
  const bool all_pos = (data.Y.array() > 0.0).all();
  const bool all_neg = (data.Y.array() < 0.0).all();
  if (!all_pos && !all_neg) return std::nullopt;

  Dataset logged = data;
  logged.Y = data.Y.array().abs().log().matrix();
  TaylorPoly log_poly;
  try {
    log_poly = fit_taylor(logged, cfg);
  } catch (const FitError&) {
    return std::nullopt;
  }
  Partition groups = additive_partition(log_poly, cfg.coef_eps);
  if (groups.size() < 2) return std::nullopt;
  return MultiplicativeSplit{std::move(groups), std::move(log_poly),
                             all_pos ? 1.0 : -1.0};
}

Interval boundary(const TaylorPoly& p, const std::vector<Interval>& domain,
                  double y_min, double y_max) {
  return iv_hull(poly_bounds(p, domain), Interval{y_min, y_max});
}

MonotonicityReport monotonicity_from_data(const Dataset& data, double tol,
                                          std::mt19937_64& rng) {
  MonotonicityReport rep;
  const int d = static_cast<int>(data.dims());
  const Eigen::Index n = data.n();
  rep.per_variable.assign(static_cast<std::size_t>(d), Monotonicity::None);
  if (n < 2) return rep;

  // joint: comparable pairs (coordinate-wise ordering) must order Y too
  bool can_inc = true, can_dec = true;
  long comparable = 0;
  auto check_pair = [&](Eigen::Index i, Eigen::Index j) {
    bool le = true, ge = true;
    for (int t = 0; t < d; ++t) {
      le = le && data.X(i, t) <= data.X(j, t);
      ge = ge && data.X(i, t) >= data.X(j, t);
    }
    if (!le && !ge) return;
    if (ge) std::swap(i, j);  // now X_i <= X_j coordinate-wise
    ++comparable;
    if (data.Y(j) < data.Y(i) - tol) can_inc = false;
    if (data.Y(j) > data.Y(i) + tol) can_dec = false;
  };
  if (n <= 512) {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) check_pair(i, j);
  } else {
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    for (long k = 0; k < 512L * 512L; ++k) {
      const Eigen::Index i = pick(rng), j = pick(rng);
      if (i != j) check_pair(i, j);
    }
  }
  if (comparable > 0) {
    if (can_inc && !can_dec) rep.joint = Monotonicity::Increasing;
    if (can_dec && !can_inc) rep.joint = Monotonicity::Decreasing;
    if (can_inc && can_dec) rep.joint = Monotonicity::Increasing;  // constant
  }

  // per variable: difference quotients against the nearest row in the other
  // coordinates
  const Eigen::Index probes = std::min<Eigen::Index>(n, 256);
  for (int t = 0; t < d; ++t) {
    bool inc = true, dec = true;
    long used = 0;
    for (Eigen::Index a = 0; a < probes; ++a) {
      const Eigen::Index i =
          n <= probes ? a
                      : std::uniform_int_distribution<Eigen::Index>(0, n - 1)(rng);
      Eigen::Index best = -1;
      double best_d = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        double dist = 0.0;
        for (int s = 0; s < d; ++s)
          if (s != t) {
            const double dd = data.X(i, s) - data.X(j, s);
            dist += dd * dd;
          }
        if (std::abs(data.X(i, t) - data.X(j, t)) < 1e-12) continue;
        if (dist < best_d) {
          best_d = dist;
          best = j;
        }
      }
      if (best < 0) continue;
      const double slope =
          (data.Y(i) - data.Y(best)) / (data.X(i, t) - data.X(best, t));
      ++used;
      if (slope < -tol) inc = false;
      if (slope > tol) dec = false;
    }
    if (used > 0) {
      if (inc && !dec) rep.per_variable[static_cast<std::size_t>(t)] =
          Monotonicity::Increasing;
      if (dec && !inc) rep.per_variable[static_cast<std::size_t>(t)] =
          Monotonicity::Decreasing;
      if (inc && dec) rep.per_variable[static_cast<std::size_t>(t)] =
          Monotonicity::Increasing;
    }
  }
  return rep;
}

Parity parity_of_poly(const Dataset& data, const FitConfig& cfg, double eps) {
  for (const auto& dom : data.domains())
    if (!(dom.lo <= 0.0 && 0.0 <= dom.hi)) return Parity::None;

  Eigen::Index nearest = 0;
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    const double d2 = data.X.row(i).squaredNorm();
    if (d2 < best) {
      best = d2;
      nearest = i;
    }
  }

  TaylorPoly p;
  try {
    p = recenter_to_origin(fit_taylor_at(data, nearest, cfg));
  } catch (const FitError&) {
    return Parity::None;
  }
  bool any = false, all_odd = true, all_even = true;
  for (const auto& [m, c] : p.coeffs) {
    const int deg = degree(m);
    if (deg == 0) continue;  // the 0-order term is removed before the test
    if (std::abs(c) < eps) continue;
    any = true;
    (deg % 2 == 1 ? all_even : all_odd) = false;
  }
  if (!any) return Parity::None;
  if (all_odd) return Parity::Odd;
  if (all_even) return Parity::Even;
  return Parity::None;
}

FeatureExtraction extract_features(const Dataset& data, const FitConfig& cfg,
                                   double threshold) {
  FeatureExtraction out;
  out.poly = fit_taylor(data, cfg);

  FeatureSet& f = out.features;
  f.domain = data.domains();

  out.low_order = is_low_order(out.poly, data, cfg.coef_eps, threshold);
  if (out.low_order) f.low_order_degree = out.low_order->degree;

  f.additive_partition = additive_partition(out.poly, cfg.coef_eps);
  f.multiplicative = multiplicative_partition(data, cfg);
  f.boundary =
      boundary(out.poly, f.domain, data.Y.minCoeff(), data.Y.maxCoeff());

  auto rng = make_rng(0x7ae1f0, 0);
  const double tol = 1e-9 * std::max(1.0, data.Y.array().abs().maxCoeff());
  auto mono = monotonicity_from_data(data, tol, rng);
  f.monotonicity = std::move(mono.per_variable);
  f.joint_monotonicity = mono.joint;

  f.parity = parity_of_poly(data, cfg, cfg.coef_eps);
  return out;
}

}  // namespace tsr
