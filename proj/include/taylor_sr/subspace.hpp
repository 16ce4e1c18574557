#pragma once

#include <random>
#include <stdexcept>
#include <vector>

#include "taylor_sr/expr.hpp"
#include "taylor_sr/features.hpp"
#include "taylor_sr/interval.hpp"

namespace tsr {

// Constant-placeholder leaf of a subspace template: a value to be filled in
// later. Carried as a NaN constant so templates stay ordinary trees.
Expr placeholder();
bool is_placeholder(const Expr& e);

// Replace every placeholder with the fixed value.
Expr instantiate(const Expr& tmpl, double value);
// Replace every placeholder with an independent ERC draw.
Expr instantiate(const Expr& tmpl, Interval erc_range, std::mt19937_64& rng);

struct SubspaceFeatures {
  Interval boundary = Interval::whole();
  Monotonicity monotonicity = Monotonicity::None;
  Parity parity = Parity::None;
  bool unbound = false;
};

struct Subspace {
  Expr tmpl;
  SubspaceFeatures features;
};

struct EnumerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Every distinct tree of depth exactly h with internal nodes drawn from
// `ops` (default: the 9-function search set) and leaves from
// {x0..x(d-1), placeholder}; deterministic order. Throws EnumerationError
// past the cap.
std::vector<Expr> enumerate_subspaces(int d, int h,
                                      const std::vector<Op>& ops = {},
                                      long long cap = 200000);

// True iff some leaf-to-root path consists only of unbound functions
// ({variable, +, -, *, /, exp, log}), which forces range [-inf, inf].
bool has_unbound_path(const Expr& e);

// Boundary by the unbound-path shortcut or interval arithmetic (constants
// ranged over erc_range); monotonicity by the sign of the interval of the
// symbolic derivative (placeholders fixed at 1); parity by the sampled test
// on the symmetrized domain.
SubspaceFeatures evaluate_subspace(const Expr& tmpl,
                                   const std::vector<Interval>& domain,
                                   Interval erc_range, std::mt19937_64& rng);

class SubspaceIndex {
 public:
  // Enumerates and scores depth-h templates plus the always-admissible
  // depth-1 terminals. When the cap would be exceeded, scores a random
  // sample of `cap` templates instead.
  static SubspaceIndex build(int d, int h, const std::vector<Interval>& domain,
                             Interval erc_range, std::mt19937_64& rng,
                             long long cap = 200000);

  int dims() const { return d_; }
  Interval erc_range() const { return erc_range_; }
  const std::vector<Interval>& domain() const { return domain_; }
  const std::vector<Subspace>& all() const { return subspaces_; }

  // Indices of subspaces whose boundary contains `required`. The reference
  // stays valid until the next call with a different interval; a run queries
  // one fixed boundary thousands of times, so the last answer is cached.
  const std::vector<std::size_t>& admissible(Interval required) const;

 private:
  int d_ = 1;
  Interval erc_range_{-5.0, 5.0};
  std::vector<Interval> domain_;
  std::vector<Subspace> subspaces_;
  mutable bool cache_valid_ = false;
  mutable Interval cache_key_{0.0, 0.0};
  mutable std::vector<std::size_t> cache_;
};

// Unconstrained random tree: grow method, ops from the search set, leaf
// probability rising with depth, ERC constants from erc_range.
Expr random_expr(int d, int max_depth, Interval erc_range,
                 std::mt19937_64& rng);

}  // namespace tsr
