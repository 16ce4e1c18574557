#include "taylor_sr/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "taylor_sr/metrics.hpp"
#include "taylor_sr/rng.hpp"

namespace tsr {

namespace {

// T_g: the monomials of p supported entirely on the group, re-indexed to
// local variables. The constant term is added only when with_constant.
TaylorPoly restrict_poly(const TaylorPoly& p, const std::vector<int>& group,
                         bool with_constant) {
  const int dg = static_cast<int>(group.size());
  TaylorPoly t;
  t.order = p.order;
  t.center = Eigen::VectorXd(dg);
  for (int j = 0; j < dg; ++j)
    t.center(j) = p.center(group[static_cast<std::size_t>(j)]);

  std::vector<int> local(static_cast<std::size_t>(p.dims()), -1);
  for (int j = 0; j < dg; ++j)
    local[static_cast<std::size_t>(group[static_cast<std::size_t>(j)])] = j;

  for (const auto& [m, c] : p.coeffs) {
    if (degree(m) == 0) {
      if (with_constant) t.coeffs[Monomial(static_cast<std::size_t>(dg), 0)] += c;
      continue;
    }
    bool inside = true;
    Monomial mg(static_cast<std::size_t>(dg), 0);
    for (int v = 0; v < p.dims(); ++v) {
      const int e = m[static_cast<std::size_t>(v)];
      if (e == 0) continue;
      if (local[static_cast<std::size_t>(v)] < 0) {
        inside = false;
        break;
      }
      mg[static_cast<std::size_t>(local[static_cast<std::size_t>(v)])] = e;
    }
    if (inside) t.coeffs[mg] += c;
  }
  return t;
}

Dataset project_columns(const Dataset& data, const std::vector<int>& group) {
  Dataset out;
  out.X.resize(data.n(), static_cast<Eigen::Index>(group.size()));
  for (std::size_t j = 0; j < group.size(); ++j)
    out.X.col(static_cast<Eigen::Index>(j)) = data.X.col(group[j]);
  if (static_cast<Eigen::Index>(data.names.size()) == data.dims() + 1 ||
      static_cast<Eigen::Index>(data.names.size()) == data.dims())
    for (int g : group)
      out.names.push_back(data.names[static_cast<std::size_t>(g)]);
  return out;
}

}  // namespace

std::vector<Subproblem> decompose(const TaylorPoly& p, const FeatureSet& F,
                                  const Dataset& data) {
  const Partition* groups = nullptr;
  const TaylorPoly* source = &p;
  bool multiplicative = false;
  if (F.additive_partition.size() > 1) {
    groups = &F.additive_partition;
  } else if (F.multiplicative && F.multiplicative->groups.size() > 1) {
    groups = &F.multiplicative->groups;
    source = &F.multiplicative->log_poly;
    multiplicative = true;
  }

  std::vector<Subproblem> out;
  if (!groups) {
    Subproblem s;
    s.group.resize(static_cast<std::size_t>(data.dims()));
    std::iota(s.group.begin(), s.group.end(), 0);
    s.data = data;
    s.synthetic = false;
    out.push_back(std::move(s));
    return out;
  }

  for (std::size_t gi = 0; gi < groups->size(); ++gi) {
    Subproblem s;
    s.group = (*groups)[gi];
    s.multiplicative = multiplicative;
    s.data = project_columns(data, s.group);
    const TaylorPoly t = restrict_poly(*source, s.group, gi == 0);
    s.data.Y = t.eval_batch(s.data.X).matrix();
    out.push_back(std::move(s));
  }
  return out;
}

Expr remap_vars(const Expr& e, const std::vector<int>& mapping) {
  if (e.op() == Op::Var) {
    const std::size_t i = static_cast<std::size_t>(e.var_index());
    return var(i < mapping.size() ? mapping[i] : e.var_index());
  }
  switch (e.arity()) {
    case 0: return e;
    case 1: return Expr::make(e.op(), remap_vars(e.child(0), mapping));
    default:
      return Expr::make(e.op(), remap_vars(e.child(0), mapping),
                        remap_vars(e.child(1), mapping));
  }
}

std::pair<Expr, double> assemble(const std::vector<SubResult>& subresults,
                                 bool multiplicative, double sign,
                                 const Dataset& data) {
  Expr best;
  double best_rmse = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(subresults.size(), 0);
  while (true) {
    Expr combined;
    for (std::size_t gi = 0; gi < subresults.size(); ++gi) {
      Expr part = remap_vars(subresults[gi].candidates[pick[gi]],
                             subresults[gi].group);
      if (multiplicative) part = exp(std::move(part));
      combined = combined ? (multiplicative
                                 ? mul(std::move(combined), std::move(part))
                                 : add(std::move(combined), std::move(part)))
                          : std::move(part);
    }
    if (multiplicative && sign < 0.0)
      combined = mul(cnst(-1.0), std::move(combined));

    const double e = rmse(combined.eval_batch(data.X), data.Y.array());
    if (e < best_rmse || !best) {
      best_rmse = e;
      best = std::move(combined);
    }

    // advance the mixed-radix candidate counter
    std::size_t gi = 0;
    while (gi < pick.size()) {
      if (++pick[gi] < subresults[gi].candidates.size()) break;
      pick[gi++] = 0;
    }
    if (gi == pick.size()) break;
  }
  return {best, best_rmse};
}

RunResult taylorgp(const Dataset& data, const PipelineConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  RunResult out;
  out.seed = cfg.seed;

  const auto finish = [&](Expr e, long gens) {
    out.best = std::move(e);
    out.expression = format(out.best);
    out.rmse_value = rmse(out.best.eval_batch(data.X), data.Y.array());
    out.r2_value = r2(out.best.eval_batch(data.X), data.Y.array());
    out.generations = gens;
    out.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return out;
  };

  const auto append_trace = [&](int sub, const std::vector<TraceRecord>& tr) {
    for (const auto& t : tr)
      out.trace.push_back(
          {sub, t.generation, t.best_rmse, t.mean_rmse, t.best_len});
  };

  const auto raw_ffem = [&](const FeatureSet& F, long budget, int sub_id,
                            std::uint64_t seed_index) {
    auto rng = make_rng(cfg.seed, seed_index);
    const auto idx =
        SubspaceIndex::build(static_cast<int>(data.dims()),
                             cfg.subspace_depth, F.domain,
                             cfg.evo.erc_range, rng);
    EvolutionConfig evo = cfg.evo;
    evo.max_gen = budget;
    auto res = ffem_run(data, F, idx, evo, split_seed(cfg.seed, seed_index));
    append_trace(sub_id, res.trace);
    return res;
  };

  FeatureExtraction ext;
  try {
    ext = extract_features(data, cfg.fit, cfg.evo.threshold);
  } catch (const FitError&) {
    // unusable fit: unconstrained search on the raw data
    FeatureSet bare;
    bare.domain = data.domains();
    auto res = raw_ffem(bare, cfg.evo.max_gen, 0, 1);
    return finish(res.best.expr, res.generations);
  }
  out.features = ext.features;

  if (ext.low_order) {
    out.low_order_exit = true;
    return finish(poly_to_expr(ext.low_order->refit), 0);
  }

  auto subs = decompose(ext.poly, ext.features, data);
  const bool multiplicative = !subs.empty() && subs.front().multiplicative;
  const double sign =
      ext.features.multiplicative ? ext.features.multiplicative->sign : 1.0;

  // which subproblems need evolution (no low-order hit on their target)
  std::vector<SubResult> results(subs.size());
  std::vector<std::size_t> needs_ffem;
  std::vector<FeatureExtraction> sub_ext(subs.size());
  for (std::size_t si = 0; si < subs.size(); ++si) {
    results[si].group = subs[si].group;
    try {
      sub_ext[si] =
          extract_features(subs[si].data, cfg.fit, cfg.evo.threshold);
      if (sub_ext[si].low_order) {
        results[si].candidates.push_back(
            poly_to_expr(sub_ext[si].low_order->refit));
        continue;
      }
    } catch (const FitError&) {
      sub_ext[si].features.domain = subs[si].data.domains();
    }
    needs_ffem.push_back(si);
  }

  long total_gens = 0;
  const long budget =
      needs_ffem.empty()
          ? 0
          : std::max<long>(1, cfg.evo.max_gen /
                                  static_cast<long>(needs_ffem.size()));
  for (std::size_t si : needs_ffem) {
    auto rng = make_rng(cfg.seed, 100 + si);
    const auto idx = SubspaceIndex::build(
        static_cast<int>(subs[si].data.dims()), cfg.subspace_depth,
        sub_ext[si].features.domain, cfg.evo.erc_range, rng);
    EvolutionConfig evo = cfg.evo;
    evo.max_gen = budget;
    auto res = ffem_run(subs[si].data, sub_ext[si].features, idx, evo,
                        split_seed(cfg.seed, 100 + si));
    append_trace(static_cast<int>(si), res.trace);
    total_gens += res.generations;
    results[si].candidates.push_back(res.best.expr);
    for (const auto& e : res.runners_up) {
      if (static_cast<int>(results[si].candidates.size()) >= cfg.beam) break;
      results[si].candidates.push_back(e);
    }
    // the polynomial target itself is always a valid fallback candidate
    if (subs[si].synthetic &&
        static_cast<int>(results[si].candidates.size()) < cfg.beam) {
      TaylorPoly t = restrict_poly(multiplicative
                                       ? ext.features.multiplicative->log_poly
                                       : ext.poly,
                                   subs[si].group, si == 0);
      results[si].candidates.push_back(poly_to_expr(t));
    }
  }

  auto [combined, combined_rmse] = assemble(results, multiplicative, sign, data);

  // assembly that misses the threshold gets one unconstrained pass on the
  // raw dataset (the decomposition may have been a false positive)
  const bool decomposed = subs.size() > 1 || subs.front().synthetic;
  if (combined_rmse > cfg.evo.threshold && decomposed) {
    auto res = raw_ffem(ext.features, cfg.evo.max_gen,
                        static_cast<int>(subs.size()), 7);
    total_gens += res.generations;
    if (res.best.fitness < combined_rmse) {
      combined = res.best.expr;
      combined_rmse = res.best.fitness;
    }
  }
  return finish(std::move(combined), total_gens);
}

}  // namespace tsr
