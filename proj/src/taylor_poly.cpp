#include "taylor_sr/taylor_poly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace tsr {

double TaylorPoly::constant_term() const {
  const Monomial zero(static_cast<std::size_t>(dims()), 0);
  auto it = coeffs.find(zero);
  return it == coeffs.end() ? 0.0 : it->second;
}

int TaylorPoly::max_degree() const {
  int d = 0;
  for (const auto& [m, c] : coeffs) d = std::max(d, degree(m));
  return d;
}

double TaylorPoly::operator()(const Eigen::VectorXd& x) const {
  double sum = 0.0;
  for (const auto& [m, c] : coeffs) {
    double term = c;
    for (int t = 0; t < dims(); ++t)
      for (int e = 0; e < m[static_cast<std::size_t>(t)]; ++e)
        term *= x(t) - center(t);
    sum += term;
  }
  return sum;
}

Eigen::ArrayXd TaylorPoly::eval_batch(const Eigen::MatrixXd& X) const {
  Eigen::ArrayXd out = Eigen::ArrayXd::Zero(X.rows());
  Eigen::ArrayXd term(X.rows());
  for (const auto& [m, c] : coeffs) {
    term.setConstant(c);
    for (int t = 0; t < dims(); ++t)
      for (int e = 0; e < m[static_cast<std::size_t>(t)]; ++e)
        term *= X.col(t).array() - center(t);
    out += term;
  }
  return out;
}

double poly_eval(const TaylorPoly& p, const Eigen::VectorXd& x) {
  return p(x);
}

int FitConfig::k_max(int dims) const {
  if (k_max_override > 0) return k_max_override;
  if (dims <= 1) return 18;
  if (dims <= 3) return 8;
  if (dims <= 5) return 4;
  return 2;
}

long long taylor_term_count(int dims, int order) {
  long long c = 1;
  for (int i = 1; i <= dims; ++i) c = c * (order + i) / i;
  return c;
}

int choose_order(int dims, Eigen::Index n_samples, const FitConfig& cfg) {
  if (n_samples < 2) throw FitError("dataset too small to fit");
  const int cap = cfg.k_max(dims);
  int k = 0;
  while (k < cap && taylor_term_count(dims, k + 1) <= n_samples) ++k;
  if (k == 0)
    throw FitError("dataset too small: need at least " +
                   std::to_string(taylor_term_count(dims, 1)) + " samples");
  return k;
}

std::vector<Monomial> monomials_up_to(int dims, int k) {
  std::vector<Monomial> out;
  Monomial m(static_cast<std::size_t>(dims), 0);
  // enumerate all exponent vectors with degree in [1, k], then grlex-sort
  std::function<void(int, int)> rec = [&](int t, int remaining) {
    if (t == dims) {
      if (degree(m) >= 1) out.push_back(m);
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      m[static_cast<std::size_t>(t)] = e;
      rec(t + 1, remaining - e);
    }
    m[static_cast<std::size_t>(t)] = 0;
  };
  rec(0, k);
  std::sort(out.begin(), out.end(), GrlexLess{});
  return out;
}

CenterSelection select_center_and_neighborhood(const Dataset& data,
                                               Eigen::Index m) {
  const Eigen::Index n = data.n();
  if (m > n - 1)
    throw FitError("neighborhood larger than the rest of the dataset");

  Eigen::VectorXd median(data.dims());
  std::vector<double> col(static_cast<std::size_t>(n));
  for (Eigen::Index t = 0; t < data.dims(); ++t) {
    for (Eigen::Index i = 0; i < n; ++i)
      col[static_cast<std::size_t>(i)] = data.X(i, t);
    std::sort(col.begin(), col.end());
    median(t) = n % 2 == 1 ? col[static_cast<std::size_t>(n / 2)]
                           : 0.5 * (col[static_cast<std::size_t>(n / 2 - 1)] +
                                    col[static_cast<std::size_t>(n / 2)]);
  }

  CenterSelection sel;
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d2 = (data.X.row(i).transpose() - median).squaredNorm();
    if (d2 < best) {
      best = d2;
      sel.center_row = i;
    }
  }

  sel.neighborhood = nearest_rows(data, sel.center_row, m);
  return sel;
}

std::vector<Eigen::Index> nearest_rows(const Dataset& data,
                                       Eigen::Index center_row,
                                       Eigen::Index m) {
  const Eigen::Index n = data.n();
  if (m > n - 1)
    throw FitError("neighborhood larger than the rest of the dataset");
  std::vector<Eigen::Index> order;
  order.reserve(static_cast<std::size_t>(n - 1));
  for (Eigen::Index i = 0; i < n; ++i)
    if (i != center_row) order.push_back(i);
  const auto c = data.X.row(center_row);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     return (data.X.row(a) - c).squaredNorm() <
                            (data.X.row(b) - c).squaredNorm();
                   });
  order.resize(static_cast<std::size_t>(m));
  return order;
}

namespace {

double factorial_product(const Monomial& m) {
  double f = 1.0;
  for (int e : m)
    for (int i = 2; i <= e; ++i) f *= i;
  return f;
}

// Damped SVD least squares with unit-norm columns. Returns the solution and
// the residual RMS.
struct LsqResult {
  Eigen::VectorXd coeffs;
  double resid_rms = 0.0;
  double condition = 0.0;
};

LsqResult solve_damped(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                       double ridge) {
  Eigen::VectorXd scale(A.cols());
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    const double s = A.col(j).norm();
    scale(j) = s > 0.0 ? s : 1.0;
  }
  const Eigen::MatrixXd As = A * scale.cwiseInverse().asDiagonal();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(As,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(0) > 0.0))
    throw FitError("fit failed: design matrix has numerical rank 0");
  const double cutoff = sv(0) * 1e-13;
  Eigen::VectorXd inv(sv.size());
  double smallest = sv(0);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) {
      inv(i) = sv(i) / (sv(i) * sv(i) + ridge);
      smallest = sv(i);
    } else {
      inv(i) = 0.0;
    }
  }
  LsqResult r;
  r.coeffs = scale.cwiseInverse().asDiagonal() *
             (svd.matrixV() * inv.asDiagonal() *
              (svd.matrixU().transpose() * b));
  r.resid_rms = std::sqrt((A * r.coeffs - b).squaredNorm() /
                          static_cast<double>(b.size()));
  r.condition = sv(0) / smallest;
  if (!r.coeffs.allFinite())
    throw FitError("fit failed: non-finite solution, condition estimate " +
                   std::to_string(r.condition));
  return r;
}

}  // namespace

namespace {

TaylorPoly fit_taylor_impl(const Dataset& data, Eigen::Index center_row,
                           const FitConfig& cfg) {
  const int d = static_cast<int>(data.dims());
  const int k = choose_order(d, data.n(), cfg);
  const auto mons = monomials_up_to(d, k);
  const auto n_terms = static_cast<Eigen::Index>(mons.size());
  const Eigen::Index m =
      std::min<Eigen::Index>(data.n() - 1,
                             std::max<Eigen::Index>(
                                 n_terms, static_cast<Eigen::Index>(std::ceil(
                                              cfg.oversample *
                                              static_cast<double>(n_terms)))));
  const auto neighborhood = nearest_rows(data, center_row, m);
  const Eigen::VectorXd x0 = data.X.row(center_row).transpose();
  const double y0 = data.Y(center_row);

  Eigen::MatrixXd delta(m, d);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    delta.row(i) = data.X.row(neighborhood[static_cast<std::size_t>(i)]) -
                   x0.transpose();
    rhs(i) = data.Y(neighborhood[static_cast<std::size_t>(i)]) - y0;
  }
  if (!rhs.allFinite() || !delta.allFinite())
    throw FitError("fit failed: non-finite data");

  auto design = [&](const Eigen::MatrixXd& dx,
                    const std::vector<Monomial>& cols) {
    Eigen::MatrixXd A =
        Eigen::MatrixXd::Ones(dx.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
      for (int t = 0; t < d; ++t)
        for (int e = 0; e < cols[j][static_cast<std::size_t>(t)]; ++e)
          A.col(static_cast<Eigen::Index>(j)).array() *= dx.col(t).array();
      A.col(static_cast<Eigen::Index>(j)) /= factorial_product(cols[j]);
    }
    return A;
  };

  auto build_poly = [&](const std::vector<Monomial>& cols,
                        const Eigen::VectorXd& derivs) {
    TaylorPoly p;
    p.center = x0;
    p.order = k;
    p.coeffs[Monomial(static_cast<std::size_t>(d), 0)] = y0;
    for (std::size_t j = 0; j < cols.size(); ++j)
      p.coeffs[cols[j]] = derivs(static_cast<Eigen::Index>(j)) /
                          factorial_product(cols[j]);
    return p;
  };

  const double rhs_scale =
      std::max(1.0, std::sqrt(rhs.squaredNorm() / static_cast<double>(m)));

  // A lower order that already explains the neighborhood exactly wins; this
  // keeps polynomial targets free of ill-conditioned high-order noise.
  for (int i = 1; i < k; ++i) {
    std::vector<Monomial> low;
    for (const auto& mm : mons)
      if (degree(mm) <= i) low.push_back(mm);
    if (static_cast<Eigen::Index>(low.size()) > m) break;
    // these candidate systems are small and well-conditioned; damping would
    // push the residual of an exact polynomial past the acceptance gate
    auto r = solve_damped(design(delta, low), rhs, 0.0);
    if (r.resid_rms <= 1e-9 * rhs_scale) return build_poly(low, r.coeffs);
  }
  // no low order explains the data: fit the full order globally, over every
  // row, so the model holds across the whole sampled box
  Eigen::MatrixXd delta_all = data.X.rowwise() - x0.transpose();
  Eigen::VectorXd rhs_all = data.Y.array() - y0;
  auto r = solve_damped(design(delta_all, mons), rhs_all, cfg.ridge);
  return build_poly(mons, r.coeffs);
}

}  // namespace

TaylorPoly fit_taylor(const Dataset& data, const FitConfig& cfg) {
  const int d = static_cast<int>(data.dims());
  const int k = choose_order(d, data.n(), cfg);
  const auto n_terms = static_cast<Eigen::Index>(monomials_up_to(d, k).size());
  const Eigen::Index m =
      std::min<Eigen::Index>(data.n() - 1,
                             std::max<Eigen::Index>(
                                 n_terms, static_cast<Eigen::Index>(std::ceil(
                                              cfg.oversample *
                                              static_cast<double>(n_terms)))));
  const auto sel = select_center_and_neighborhood(data, m);
  return fit_taylor_impl(data, sel.center_row, cfg);
}

TaylorPoly fit_taylor_at(const Dataset& data, Eigen::Index center_row,
                         const FitConfig& cfg) {
  return fit_taylor_impl(data, center_row, cfg);
}

TaylorPoly truncate(const TaylorPoly& p, double eps) {
  TaylorPoly out;
  out.center = p.center;
  out.order = p.order;
  for (const auto& [m, c] : p.coeffs)
    if (std::abs(c) >= eps && c != 0.0) out.coeffs[m] = c;
  return out;
}

TaylorPoly recenter_to_origin(const TaylorPoly& p) {
  const int d = p.dims();
  TaylorPoly out;
  out.center = Eigen::VectorXd::Zero(d);
  out.order = p.order;
  // binomial expansion of each (x - x0)^e term
  for (const auto& [m, c] : p.coeffs) {
    CoeffMap expansion;
    expansion[Monomial(static_cast<std::size_t>(d), 0)] = c;
    for (int t = 0; t < d; ++t) {
      const int e = m[static_cast<std::size_t>(t)];
      if (e == 0) continue;
      CoeffMap next;
      // (x_t - a)^e = sum_i C(e,i) x_t^i (-a)^(e-i)
      std::vector<double> binom(static_cast<std::size_t>(e) + 1, 1.0);
      for (int i = 1; i <= e; ++i)
        binom[static_cast<std::size_t>(i)] =
            binom[static_cast<std::size_t>(i - 1)] * (e - i + 1) / i;
      for (const auto& [mm, cc] : expansion) {
        for (int i = 0; i <= e; ++i) {
          Monomial m2 = mm;
          m2[static_cast<std::size_t>(t)] += i;
          next[m2] += cc * binom[static_cast<std::size_t>(i)] *
                      std::pow(-p.center(t), e - i);
        }
      }
      expansion = std::move(next);
    }
    for (const auto& [mm, cc] : expansion) out.coeffs[mm] += cc;
  }
  return out;
}

TaylorPoly refit_coefficients(const std::set<Monomial, GrlexLess>& support,
                              const Dataset& data) {
  if (support.empty()) throw FitError("refit: empty support");
  if (static_cast<Eigen::Index>(support.size()) > data.n())
    throw FitError("refit: support larger than the dataset");
  const int d = static_cast<int>(data.dims());
  const Eigen::Index n = data.n();
  Eigen::MatrixXd A =
      Eigen::MatrixXd::Ones(n, static_cast<Eigen::Index>(support.size()));
  Eigen::Index j = 0;
  for (const auto& m : support) {
    for (int t = 0; t < d; ++t)
      for (int e = 0; e < m[static_cast<std::size_t>(t)]; ++e)
        A.col(j).array() *= data.X.col(t).array();
    ++j;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-12);
  if (qr.rank() < A.cols())
    throw FitError("refit: singular design matrix (rank " +
                   std::to_string(qr.rank()) + " of " +
                   std::to_string(A.cols()) + ")");
  const Eigen::VectorXd c = qr.solve(data.Y);

  TaylorPoly p;
  p.center = Eigen::VectorXd::Zero(d);
  j = 0;
  for (const auto& m : support) {
    p.coeffs[m] = c(j++);
    p.order = std::max(p.order, degree(m));
  }
  return p;
}

Interval poly_bounds(const TaylorPoly& p, const std::vector<Interval>& domain) {
  Interval sum = Interval::point(0.0);
  for (const auto& [m, c] : p.coeffs) {
    Interval term = Interval::point(1.0);
    for (int t = 0; t < p.dims(); ++t) {
      const int e = m[static_cast<std::size_t>(t)];
      if (e == 0) continue;
      const Interval dom = static_cast<std::size_t>(t) < domain.size()
                               ? domain[static_cast<std::size_t>(t)]
                               : Interval::whole();
      term = iv_mul(term, iv_pow_nat(iv_sub(dom, Interval::point(p.center(t))),
                                     e));
    }
    sum = iv_add(sum, iv_scale(term, c));
  }
  return sum;
}

Expr poly_to_expr(const TaylorPoly& p) {
  const TaylorPoly q = recenter_to_origin(p);
  Expr sum;
  for (const auto& [m, c] : q.coeffs) {
    if (c == 0.0) continue;
    Expr term = cnst(c);
    for (int t = 0; t < q.dims(); ++t)
      for (int e = 0; e < m[static_cast<std::size_t>(t)]; ++e)
        term = mul(std::move(term), var(t));
    sum = sum ? add(std::move(sum), std::move(term)) : std::move(term);
  }
  return sum ? sum : cnst(0.0);
}

}  // namespace tsr
