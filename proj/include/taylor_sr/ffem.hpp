#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "taylor_sr/dataset.hpp"
#include "taylor_sr/features.hpp"
#include "taylor_sr/subspace.hpp"

namespace tsr {

struct Individual {
  Expr expr;
  double fitness = std::numeric_limits<double>::infinity();  // RMSE
};

struct EvolutionConfig {
  int pop_size = 1000;
  long max_gen = 10000;
  double alpha = 0.7;     // recombination probability
  double beta = 0.2;      // feature-guided re-initialization probability
  double threshold = 1e-5;
  int max_len = 64;
  int tournament_size = 3;      // only used when tournament = true
  bool tournament = false;      // default parent selection is uniform
  Interval erc_range{-5.0, 5.0};
};

// Function combination rules: predicted feature class of `a op b` (or of the
// composition a∘b). nullopt = the table makes no claim for this row.
std::optional<Parity> combine_parity(Op op, Parity a, Parity b);
std::optional<Parity> combine_parity_compose(Parity outer, Parity inner);
// Monotonicity rows need value ranges: × requires both factors nonnegative,
// ÷ requires a denominator interval excluding 0.
std::optional<Monotonicity> combine_monotonic(Op op, Monotonicity a,
                                              Monotonicity b, Interval range_a,
                                              Interval range_b);
std::optional<Monotonicity> combine_monotonic_compose(Monotonicity outer,
                                                      Monotonicity inner);

// Observable feature classes of a concrete expression (sampled parity,
// derivative-interval monotonicity, interval boundary).
struct ExprClass {
  Parity parity = Parity::None;
  Monotonicity monotonicity = Monotonicity::None;
  Interval range = Interval::whole();
};
ExprClass classify_expr(const Expr& e, const std::vector<Interval>& domain,
                        std::mt19937_64& rng);

// Uniform subtree crossover; result pruned to max_len.
Expr subtree_crossover(const Expr& a, const Expr& b, std::mt19937_64& rng,
                       int max_len, const std::vector<Interval>& domain,
                       Interval erc_range);

// Table-1-guided combination of two parents toward F's required classes;
// falls back to subtree crossover when no rule row fits.
Expr recombine_by_features(const Expr& p1, const Expr& p2, const FeatureSet& F,
                           std::mt19937_64& rng, int max_len,
                           Interval erc_range = {-5.0, 5.0});

// Replace deepest oversized subtrees with feature-class-preserving stand-ins
// until node_count <= max_len.
Expr prune(const Expr& e, int max_len, const std::vector<Interval>& domain,
           Interval erc_range, std::mt19937_64& rng);

// Alg. 1 initIndividualByFeatures: boundary-admissible subspace, grown or
// rejection-sampled toward F's parity/monotonicity, random fallback.
Expr init_individual_by_features(const FeatureSet& F, const SubspaceIndex& idx,
                                 std::mt19937_64& rng, int budget = 100,
                                 int max_len = 64);

// Minimum RMSE; ties by node count, then earlier index.
std::size_t select_best(const std::vector<Individual>& pop);

struct TraceRecord {
  long generation = 0;
  double best_rmse = 0.0;
  double mean_rmse = 0.0;
  int best_len = 0;
};

struct FfemResult {
  Individual best;
  long generations = 0;
  std::vector<TraceRecord> trace;
  std::vector<Expr> runners_up;  // distinct next-best expressions
};

FfemResult ffem_run(const Dataset& data, const FeatureSet& F,
                    const SubspaceIndex& idx, const EvolutionConfig& cfg,
                    std::uint64_t seed);

}  // namespace tsr
