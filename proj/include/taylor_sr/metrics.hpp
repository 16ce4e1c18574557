#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tsr {

// Recovery threshold: a run counts as an exact recovery when its final
// RMSE falls below this value.
inline constexpr double kRecoveryThreshold = 1e-5;

inline double rmse(const Eigen::ArrayXd& yhat, const Eigen::ArrayXd& y) {
  if (yhat.size() != y.size() || y.size() == 0)
    throw std::invalid_argument("rmse: length mismatch");
  if (!yhat.isFinite().all() || !y.isFinite().all())
    return std::numeric_limits<double>::infinity();
  return std::sqrt((yhat - y).square().mean());
}

inline double r2(const Eigen::ArrayXd& yhat, const Eigen::ArrayXd& y) {
  if (yhat.size() != y.size() || y.size() < 2)
    throw std::invalid_argument("r2: length mismatch");
  const double ss_res = (yhat - y).square().sum();
  const double ss_tot = (y - y.mean()).square().sum();
  if (ss_tot == 0.0)
    return ss_res == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
  return 1.0 - ss_res / ss_tot;
}

// Reconstruction of the clipped score used for cross-run aggregation; the
// exact normalization in the literature varies.
inline double r2_clamped(const Eigen::ArrayXd& yhat, const Eigen::ArrayXd& y) {
  return std::max(0.0, r2(yhat, y));
}

inline double recovery_rate(const Eigen::ArrayXd& run_rmses) {
  if (run_rmses.size() == 0)
    throw std::invalid_argument("recovery_rate: empty input");
  return static_cast<double>((run_rmses < kRecoveryThreshold).count()) /
         static_cast<double>(run_rmses.size());
}

}  // namespace tsr
