#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "taylor_sr/dataset.hpp"
#include "taylor_sr/features.hpp"
#include "taylor_sr/ffem.hpp"

namespace tsr {

struct PipelineConfig {
  FitConfig fit;
  EvolutionConfig evo;
  int beam = 3;           // assembly candidates kept per subproblem
  int subspace_depth = 3;
  std::uint64_t seed = 0;
};

struct Subproblem {
  std::vector<int> group;  // global variable indices, ascending
  Dataset data;            // projected columns; synthetic target T_g
  bool multiplicative = false;
  bool synthetic = true;   // false: target is the original Y
};

// Split p along F's additive partition (or the multiplicative one when the
// additive partition is a single group). The constant term goes to the first
// group. A trivial partition yields one subproblem with the original Y.
std::vector<Subproblem> decompose(const TaylorPoly& p, const FeatureSet& F,
                                  const Dataset& data);

// Rewrite local variable indices through `mapping` (local t -> global
// mapping[t]).
Expr remap_vars(const Expr& e, const std::vector<int>& mapping);

struct SubResult {
  std::vector<int> group;
  std::vector<Expr> candidates;  // local indices, best first
};

// Cross-product of candidates, joined additively or as a product of
// exponentials (multiplicative context, sign reapplied); returns the
// full-dataset RMSE argmin.
std::pair<Expr, double> assemble(const std::vector<SubResult>& subresults,
                                 bool multiplicative, double sign,
                                 const Dataset& data);

struct PipelineTraceRecord {
  int subproblem = 0;
  long generation = 0;
  double best_rmse = 0.0;
  double mean_rmse = 0.0;
  int best_len = 0;
};

struct RunResult {
  Expr best;
  std::string expression;
  double rmse_value = std::numeric_limits<double>::infinity();
  double r2_value = 0.0;
  long generations = 0;
  double wall_ms = 0.0;
  std::uint64_t seed = 0;
  std::optional<FeatureSet> features;
  bool low_order_exit = false;
  std::vector<PipelineTraceRecord> trace;
};

RunResult taylorgp(const Dataset& data, const PipelineConfig& cfg);

}  // namespace tsr
