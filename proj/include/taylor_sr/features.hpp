#pragma once

#include <optional>
#include <vector>

#include "taylor_sr/dataset.hpp"
#include "taylor_sr/expr.hpp"
#include "taylor_sr/interval.hpp"
#include "taylor_sr/metrics.hpp"
#include "taylor_sr/taylor_poly.hpp"

namespace tsr {

using Partition = std::vector<std::vector<int>>;

// Low-order discrimination result: the surviving degree and the polynomial
// refitted on the full dataset.
struct LowOrderHit {
  int degree = 0;
  TaylorPoly refit;
  double rmse = 0.0;
};

// Multiplicative separability: groups found on the log-transformed target,
// the fitted log-domain polynomial, and the (single) sign of Y.
struct MultiplicativeSplit {
  Partition groups;
  TaylorPoly log_poly;
  double sign = 1.0;
};

struct FeatureSet {
  std::optional<int> low_order_degree;
  Partition additive_partition;
  std::optional<MultiplicativeSplit> multiplicative;
  Interval boundary = Interval::whole();
  std::vector<Monotonicity> monotonicity;  // per variable
  Monotonicity joint_monotonicity = Monotonicity::None;
  Parity parity = Parity::None;
  std::vector<Interval> domain;  // per-variable [min, max] of X
};

// Smallest i < p.order such that every coefficient of degree > i is below
// eps; accepted only when the degree-i refit over the full dataset lands
// under the stopping threshold.
std::optional<LowOrderHit> is_low_order(const TaylorPoly& p,
                                        const Dataset& data, double eps,
                                        double threshold);

// Connected components of the variable graph whose edges are cross-monomials
// with |c| >= eps. Groups come back sorted by smallest member.
Partition additive_partition(const TaylorPoly& p, double eps);

// Only defined for single-sign Y: fits ln|Y| and partitions that polynomial.
// Absent for mixed signs or when the log fit is not separable.
std::optional<MultiplicativeSplit> multiplicative_partition(
    const Dataset& data, const FitConfig& cfg);

// Interval evaluation of p over the box, widened to cover [y_min, y_max].
Interval boundary(const TaylorPoly& p, const std::vector<Interval>& domain,
                  double y_min, double y_max);

struct MonotonicityReport {
  std::vector<Monotonicity> per_variable;
  Monotonicity joint = Monotonicity::None;
};

// Pairwise comparisons on the raw samples: all pairs when n <= 512, a random
// sample of 512^2 pairs otherwise.
MonotonicityReport monotonicity_from_data(const Dataset& data, double tol,
                                          std::mt19937_64& rng);

// Coefficient-parity test: fit centered at the sample nearest the origin,
// re-express at the origin, drop the constant, classify surviving degrees.
// None when the data's domain does not bracket the origin in every variable.
Parity parity_of_poly(const Dataset& data, const FitConfig& cfg, double eps);

struct FeatureExtraction {
  TaylorPoly poly;
  FeatureSet features;
  std::optional<LowOrderHit> low_order;
};

FeatureExtraction extract_features(const Dataset& data, const FitConfig& cfg,
                                   double threshold = kRecoveryThreshold);

}  // namespace tsr
