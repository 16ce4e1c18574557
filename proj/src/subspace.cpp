#include "taylor_sr/subspace.hpp"

#include <algorithm>
#include <cmath>

namespace tsr {

namespace {

std::vector<Op> default_ops() {
  return {Op::Add, Op::Sub, Op::Mul, Op::Div, Op::Sin,
          Op::Cos, Op::Log, Op::Exp, Op::Sqrt};
}

const double kPlaceholderTag = std::numeric_limits<double>::quiet_NaN();

}  // namespace

Expr placeholder() { return cnst(kPlaceholderTag); }

bool is_placeholder(const Expr& e) {
  return e.op() == Op::Const && std::isnan(e.value());
}

Expr instantiate(const Expr& tmpl, double value) {
  if (is_placeholder(tmpl)) return cnst(value);
  switch (tmpl.arity()) {
    case 0: return tmpl;
    case 1: return Expr::make(tmpl.op(), instantiate(tmpl.child(0), value));
    default:
      return Expr::make(tmpl.op(), instantiate(tmpl.child(0), value),
                        instantiate(tmpl.child(1), value));
  }
}

Expr instantiate(const Expr& tmpl, Interval erc_range, std::mt19937_64& rng) {
  if (is_placeholder(tmpl)) {
    std::uniform_real_distribution<double> erc(erc_range.lo, erc_range.hi);
    return cnst(erc(rng));
  }
  switch (tmpl.arity()) {
    case 0: return tmpl;
    case 1:
      return Expr::make(tmpl.op(), instantiate(tmpl.child(0), erc_range, rng));
    default:
      return Expr::make(tmpl.op(), instantiate(tmpl.child(0), erc_range, rng),
                        instantiate(tmpl.child(1), erc_range, rng));
  }
}

std::vector<Expr> enumerate_subspaces(int d, int h, const std::vector<Op>& ops,
                                      long long cap) {
  if (h < 1) throw EnumerationError("depth must be at least 1");
  const std::vector<Op> use = ops.empty() ? default_ops() : ops;

  std::vector<Expr> exact;  // depth exactly `level`
  std::vector<Expr> below;  // depth < `level`
  for (int t = 0; t < d; ++t) exact.push_back(var(t));
  exact.push_back(placeholder());

  auto guard = [cap](std::size_t count) {
    if (static_cast<long long>(count) > cap)
      throw EnumerationError(
          "subspace enumeration exceeds the cap (" + std::to_string(cap) +
          "); use a smaller depth or enumerate after decomposition");
  };

  for (int level = 2; level <= h; ++level) {
    std::vector<Expr> next;
    // any = exact ∪ below (depth <= level-1); a binary node reaches depth
    // `level` when at least one child has depth exactly level-1
    std::vector<Expr> any = below;
    any.insert(any.end(), exact.begin(), exact.end());
    for (Op op : use) {
      if (arity_of(op) == 1) {
        for (const auto& a : exact) {
          next.push_back(Expr::make(op, a));
          guard(next.size());
        }
      } else {
        for (const auto& a : any)
          for (const auto& b : any) {
            const int da = a.depth(), db = b.depth();
            if (std::max(da, db) != level - 1) continue;
            next.push_back(Expr::make(op, a, b));
            guard(next.size());
          }
      }
    }
    below = std::move(any);
    exact = std::move(next);
  }
  return exact;
}

bool has_unbound_path(const Expr& e) {
  switch (e.op()) {
    case Op::Var: return true;
    case Op::Const: return false;
    case Op::Add: case Op::Sub: case Op::Mul: case Op::Div:
      return has_unbound_path(e.child(0)) || has_unbound_path(e.child(1));
    case Op::Exp: case Op::Log:
      return has_unbound_path(e.child(0));
    default:
      return false;  // sin, cos, sqrt (and eval-only ops) break the path
  }
}

SubspaceFeatures evaluate_subspace(const Expr& tmpl,
                                   const std::vector<Interval>& domain,
                                   Interval erc_range, std::mt19937_64& rng) {
  SubspaceFeatures f;
  f.unbound = has_unbound_path(tmpl);
  f.boundary = f.unbound ? Interval::whole()
                         : iv_eval(tmpl, domain, &erc_range);

  const Expr inst = instantiate(tmpl, 1.0);
  if (inst.max_var() >= 0) {
    bool all_inc = true, all_dec = true;
    try {
      for (int t = 0; t <= inst.max_var(); ++t) {
        const Interval dr = iv_eval(differentiate(inst, t), domain);
        all_inc = all_inc && dr.lo >= 0.0;
        all_dec = all_dec && dr.hi <= 0.0;
      }
    } catch (const std::invalid_argument&) {
      all_inc = all_dec = false;
    }
    if (all_inc) f.monotonicity = Monotonicity::Increasing;
    else if (all_dec) f.monotonicity = Monotonicity::Decreasing;
  }

  f.parity = parity_of(inst, domain, rng);
  return f;
}

SubspaceIndex SubspaceIndex::build(int d, int h,
                                   const std::vector<Interval>& domain,
                                   Interval erc_range, std::mt19937_64& rng,
                                   long long cap) {
  SubspaceIndex idx;
  idx.d_ = d;
  idx.erc_range_ = erc_range;
  idx.domain_ = domain;

  std::vector<Expr> templates;
  try {
    templates = enumerate_subspaces(d, h, {}, cap);
  } catch (const EnumerationError&) {
    // too many templates at this dimensionality: score a random sample built
    // from random trees of the same depth
    std::vector<Expr> sampled;
    const long long want = std::min<long long>(cap, 2000);
    for (long long i = 0; i < want; ++i)
      sampled.push_back(random_expr(d, h, erc_range, rng));
    templates = std::move(sampled);
  }
  // depth-1 terminals are always part of the index
  for (int t = 0; t < d; ++t) templates.push_back(var(t));
  templates.push_back(placeholder());

  idx.subspaces_.reserve(templates.size());
  for (auto& t : templates) {
    Subspace s;
    s.features = evaluate_subspace(t, domain, erc_range, rng);
    s.tmpl = std::move(t);
    idx.subspaces_.push_back(std::move(s));
  }
  return idx;
}

const std::vector<std::size_t>& SubspaceIndex::admissible(
    Interval required) const {
  if (cache_valid_ && cache_key_.lo == required.lo &&
      cache_key_.hi == required.hi)
    return cache_;
  cache_.clear();
  for (std::size_t i = 0; i < subspaces_.size(); ++i)
    if (iv_contains(subspaces_[i].features.boundary, required))
      cache_.push_back(i);
  cache_key_ = required;
  cache_valid_ = true;
  return cache_;
}

Expr random_expr(int d, int max_depth, Interval erc_range,
                 std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (max_depth <= 1 || unit(rng) < 0.3) {
    // leaf: variable or ERC
    if (unit(rng) < 0.6) {
      std::uniform_int_distribution<int> pick(0, d - 1);
      return var(pick(rng));
    }
    std::uniform_real_distribution<double> erc(erc_range.lo, erc_range.hi);
    return cnst(erc(rng));
  }
  static const Op kOps[] = {Op::Add, Op::Sub, Op::Mul, Op::Div, Op::Sin,
                            Op::Cos, Op::Log, Op::Exp, Op::Sqrt};
  std::uniform_int_distribution<int> pick(0, 8);
  const Op op = kOps[pick(rng)];
  if (arity_of(op) == 1)
    return Expr::make(op, random_expr(d, max_depth - 1, erc_range, rng));
  return Expr::make(op, random_expr(d, max_depth - 1, erc_range, rng),
                    random_expr(d, max_depth - 1, erc_range, rng));
}

}  // namespace tsr
