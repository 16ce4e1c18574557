#pragma once

#include <Eigen/Dense>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "taylor_sr/dataset.hpp"
#include "taylor_sr/expr.hpp"
#include "taylor_sr/interval.hpp"

namespace tsr {

// Exponent vector, one entry per variable.
using Monomial = std::vector<int>;

inline int degree(const Monomial& m) {
  int s = 0;
  for (int e : m) s += e;
  return s;
}

// Graded lexicographic order; fixes matrix columns and report output.
struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    const int da = degree(a), db = degree(b);
    if (da != db) return da < db;
    return a < b;
  }
};

using CoeffMap = std::map<Monomial, double, GrlexLess>;

// Sparse multivariate polynomial in powers of (x - center). The constant
// term is the coefficient of the all-zero monomial.
struct TaylorPoly {
  Eigen::VectorXd center;
  CoeffMap coeffs;
  int order = 0;

  int dims() const { return static_cast<int>(center.size()); }
  double constant_term() const;
  int max_degree() const;

  double operator()(const Eigen::VectorXd& x) const;
  Eigen::ArrayXd eval_batch(const Eigen::MatrixXd& X) const;
};

struct FitConfig {
  int k_max_override = 0;  // 0 = use the per-dimension schedule
  double oversample = 1.5;
  double ridge = 1e-10;
  double coef_eps = 1e-4;

  int k_max(int dims) const;
};

struct FitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// C(d+k, d) without overflow for the sizes in play.
long long taylor_term_count(int dims, int order);

// Largest k <= k_max(d) with C(d+k, d) <= n_samples.
int choose_order(int dims, Eigen::Index n_samples, const FitConfig& cfg);

struct CenterSelection {
  Eigen::Index center_row = 0;
  std::vector<Eigen::Index> neighborhood;  // m nearest other rows
};

// Center = sample nearest the coordinate-wise median; neighborhood = the m
// nearest remaining rows, ties broken by row index.
CenterSelection select_center_and_neighborhood(const Dataset& data,
                                               Eigen::Index m);

// The m rows nearest to center_row (which is excluded), ties by row index.
std::vector<Eigen::Index> nearest_rows(const Dataset& data,
                                       Eigen::Index center_row,
                                       Eigen::Index m);

// Recover the k-order polynomial by ridge-damped least squares on the
// neighborhood rows. Degrees that already explain the data exactly are
// preferred (noise-free low-order targets come back with exact
// coefficients); otherwise the full order-k system is solved.
TaylorPoly fit_taylor(const Dataset& data, const FitConfig& cfg = {});

// Same solver with the expansion point forced to a specific sample row
// (parity analysis wants the row nearest the origin).
TaylorPoly fit_taylor_at(const Dataset& data, Eigen::Index center_row,
                         const FitConfig& cfg = {});

double poly_eval(const TaylorPoly& p, const Eigen::VectorXd& x);

TaylorPoly truncate(const TaylorPoly& p, double eps);

// Same polynomial re-expressed in powers of x (center moved to the origin).
TaylorPoly recenter_to_origin(const TaylorPoly& p);

// Least-squares fit of the given monomial support (center = origin) over the
// full dataset.
TaylorPoly refit_coefficients(const std::set<Monomial, GrlexLess>& support,
                              const Dataset& data);

// Interval range of p over a box, monomial by monomial via iv_pow_nat.
Interval poly_bounds(const TaylorPoly& p, const std::vector<Interval>& domain);

// Sum-of-products tree, recentered to the origin first. Zero polynomial
// becomes the constant 0.
Expr poly_to_expr(const TaylorPoly& p);

// All monomials of the given dimension with degree in [1, k], grlex order.
std::vector<Monomial> monomials_up_to(int dims, int k);

}  // namespace tsr
