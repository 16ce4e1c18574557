#include "taylor_sr/ffem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "taylor_sr/metrics.hpp"
#include "taylor_sr/rng.hpp"

namespace tsr {

std::optional<Parity> combine_parity(Op op, Parity a, Parity b) {
  if (a == Parity::None || b == Parity::None) return std::nullopt;
  const bool both_odd = a == Parity::Odd && b == Parity::Odd;
  const bool both_even = a == Parity::Even && b == Parity::Even;
  switch (op) {
    case Op::Add:
    case Op::Sub:
      if (both_odd) return Parity::Odd;
      if (both_even) return Parity::Even;
      return std::nullopt;
    case Op::Mul:
    case Op::Div:
      if (both_odd || both_even) return Parity::Even;
      return Parity::Odd;  // odd with even
    default:
      return std::nullopt;
  }
}

std::optional<Parity> combine_parity_compose(Parity outer, Parity inner) {
  if (outer == Parity::None || inner == Parity::None) return std::nullopt;
  if (outer == Parity::Odd && inner == Parity::Odd) return Parity::Odd;
  return Parity::Even;  // an even function anywhere in the chain wins
}

namespace {

bool nonnegative(Interval r) { return r.lo >= 0.0; }
bool excludes_zero(Interval r) { return r.lo > 0.0 || r.hi < 0.0; }

}  // namespace

std::optional<Monotonicity> combine_monotonic(Op op, Monotonicity a,
                                              Monotonicity b, Interval range_a,
                                              Interval range_b) {
  using M = Monotonicity;
  if (a == M::None || b == M::None) return std::nullopt;
  switch (op) {
    case Op::Add:
      if (a == b) return a;
      return std::nullopt;
    case Op::Sub:
      if (a == M::Increasing && b == M::Decreasing) return M::Increasing;
      if (a == M::Decreasing && b == M::Increasing) return M::Decreasing;
      return std::nullopt;
    case Op::Mul:
      // valid on nonnegative ranges only
      if (!nonnegative(range_a) || !nonnegative(range_b)) return std::nullopt;
      if (a == b) return a;
      return std::nullopt;
    case Op::Div:
      // denominator interval must exclude 0; both factors nonnegative
      if (!excludes_zero(range_b)) return std::nullopt;
      if (!nonnegative(range_a) || !nonnegative(range_b)) return std::nullopt;
      if (a == M::Increasing && b == M::Decreasing) return M::Increasing;
      if (a == M::Decreasing && b == M::Increasing) return M::Decreasing;
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

std::optional<Monotonicity> combine_monotonic_compose(Monotonicity outer,
                                                      Monotonicity inner) {
  using M = Monotonicity;
  if (outer == M::None || inner == M::None) return std::nullopt;
  return outer == inner ? M::Increasing : M::Decreasing;
}

namespace {

// The evolutionary loop only needs the classes a feature set actually
// constrains; parity sampling in particular is far too expensive to run
// when nothing asks for it.
ExprClass classify_partial(const Expr& e, const std::vector<Interval>& domain,
                           std::mt19937_64& rng, bool want_parity,
                           bool want_mono) {
  ExprClass c;
  if (want_parity) c.parity = parity_of(e, domain, rng);
  const auto g = iv_eval_grad(e, domain);
  c.range = g.value;
  if (want_mono && e.max_var() >= 0 &&
      e.max_var() < static_cast<int>(g.grad.size())) {
    bool inc = true, dec = true;
    for (int t = 0; t <= e.max_var(); ++t) {
      inc = inc && g.grad[static_cast<std::size_t>(t)].lo >= 0.0;
      dec = dec && g.grad[static_cast<std::size_t>(t)].hi <= 0.0;
    }
    if (inc) c.monotonicity = Monotonicity::Increasing;
    else if (dec) c.monotonicity = Monotonicity::Decreasing;
  }
  return c;
}

}  // namespace

ExprClass classify_expr(const Expr& e, const std::vector<Interval>& domain,
                        std::mt19937_64& rng) {
  return classify_partial(e, domain, rng, true, true);
}

namespace {

// Preorder node access/replacement for crossover and pruning.
Expr subtree_at(const Expr& e, int target, int& counter) {
  if (counter == target) return e;
  ++counter;
  for (int i = 0; i < e.arity(); ++i) {
    Expr r = subtree_at(e.child(i), target, counter);
    if (r) return r;
  }
  return Expr();
}

Expr subtree_at(const Expr& e, int target) {
  int counter = 0;
  return subtree_at(e, target, counter);
}

Expr replace_at(const Expr& e, int target, const Expr& rep, int& counter) {
  if (counter == target) {
    ++counter;
    return rep;
  }
  ++counter;
  switch (e.arity()) {
    case 0:
      return e;
    case 1:
      return Expr::make(e.op(), replace_at(e.child(0), target, rep, counter));
    default: {
      Expr a = replace_at(e.child(0), target, rep, counter);
      Expr b = replace_at(e.child(1), target, rep, counter);
      return Expr::make(e.op(), std::move(a), std::move(b));
    }
  }
}

Expr replace_at(const Expr& e, int target, const Expr& rep) {
  int counter = 0;
  return replace_at(e, target, rep, counter);
}

// Preorder index of the smallest subtree holding at least min_size nodes,
// ties going to the later (deeper-nested) match. The root qualifies whenever
// the whole tree does, so a hit is guaranteed for min_size <= node_count.
void smallest_at_least(const Expr& e, int min_size, int& counter,
                       int& best_idx, int& best_size) {
  const int idx = counter++;
  if (e.node_count() < min_size) {
    counter += e.node_count() - 1;  // skip the subtree, keeping indices
    return;
  }
  if (best_idx < 0 || e.node_count() <= best_size) {
    best_idx = idx;
    best_size = e.node_count();
  }
  for (int i = 0; i < e.arity(); ++i)
    smallest_at_least(e.child(i), min_size, counter, best_idx, best_size);
}

int first_var_in(const Expr& e) {
  if (e.op() == Op::Var) return e.var_index();
  for (int i = 0; i < e.arity(); ++i) {
    const int v = first_var_in(e.child(i));
    if (v >= 0) return v;
  }
  return -1;
}

}  // namespace

Expr prune(const Expr& e, int max_len, const std::vector<Interval>& domain,
           Interval erc_range, std::mt19937_64& rng) {
  Expr cur = e;
  while (cur.node_count() > max_len && cur.arity() > 0) {
    // take out the whole excess at once: the tightest subtree big enough
    // that a leaf stand-in lands the tree at or under the cap
    const int need = cur.node_count() - max_len + 1;
    int counter = 0, idx = -1, size_found = 0;
    smallest_at_least(cur, need, counter, idx, size_found);
    if (idx < 0) break;
    const Expr target = subtree_at(cur, idx);

    const ExprClass cls = classify_expr(target, domain, rng);
    Expr stand_in;
    const int v = std::max(first_var_in(target), 0);
    if (cls.parity == Parity::Odd) {
      stand_in = var(v);
    } else if (cls.parity == Parity::Even && target.node_count() > 3) {
      stand_in = mul(var(v), var(v));
    } else if (cls.range.is_finite()) {
      stand_in = cnst(cls.range.mid());
    } else if (target.max_var() >= 0) {
      stand_in = var(v);
    } else {
      std::uniform_real_distribution<double> erc(erc_range.lo, erc_range.hi);
      stand_in = cnst(erc(rng));
    }
    cur = replace_at(cur, idx, stand_in);
  }
  return cur;
}

Expr subtree_crossover(const Expr& a, const Expr& b, std::mt19937_64& rng,
                       int max_len, const std::vector<Interval>& domain,
                       Interval erc_range) {
  std::uniform_int_distribution<int> pick_a(0, a.node_count() - 1);
  std::uniform_int_distribution<int> pick_b(0, b.node_count() - 1);
  Expr child = replace_at(a, pick_a(rng), subtree_at(b, pick_b(rng)));
  if (child.node_count() > max_len)
    child = prune(child, max_len, domain, erc_range, rng);
  return child;
}

Expr recombine_by_features(const Expr& p1, const Expr& p2, const FeatureSet& F,
                           std::mt19937_64& rng, int max_len,
                           Interval erc_range) {
  const bool want_parity = F.parity != Parity::None;
  const bool want_mono = F.joint_monotonicity != Monotonicity::None;
  if (!want_parity && !want_mono)
    return subtree_crossover(p1, p2, rng, max_len, F.domain, erc_range);

  const ExprClass c1 =
      classify_partial(p1, F.domain, rng, want_parity, want_mono);
  const ExprClass c2 =
      classify_partial(p2, F.domain, rng, want_parity, want_mono);

  struct Candidate {
    Op op;         // Op::Var marks composition
    bool swapped;  // apply to (p2, p1) instead
  };
  std::vector<Candidate> candidates;
  auto admit = [&](Op op, bool swapped) {
    const ExprClass& a = swapped ? c2 : c1;
    const ExprClass& b = swapped ? c1 : c2;
    if (want_parity) {
      const auto pp = op == Op::Var
                          ? combine_parity_compose(a.parity, b.parity)
                          : combine_parity(op, a.parity, b.parity);
      if (!pp || *pp != F.parity) return;
    }
    if (want_mono) {
      const auto mm =
          op == Op::Var
              ? combine_monotonic_compose(a.monotonicity, b.monotonicity)
              : combine_monotonic(op, a.monotonicity, b.monotonicity, a.range,
                                  b.range);
      if (!mm || *mm != F.joint_monotonicity) return;
    }
    candidates.push_back({op, swapped});
  };
  for (Op op : {Op::Add, Op::Sub, Op::Mul, Op::Div, Op::Var}) {
    admit(op, false);
    admit(op, true);
  }
  if (candidates.empty())
    return subtree_crossover(p1, p2, rng, max_len, F.domain, erc_range);

  std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
  const Candidate c = candidates[pick(rng)];
  const Expr& a = c.swapped ? p2 : p1;
  const Expr& b = c.swapped ? p1 : p2;
  Expr child;
  if (c.op == Op::Var) {
    const int v = first_var_in(a);
    if (v < 0) return subtree_crossover(p1, p2, rng, max_len, F.domain,
                                        erc_range);
    child = substitute(a, v, b);
  } else {
    child = Expr::make(c.op, a, b);
  }
  if (child.node_count() > max_len)
    child = prune(child, max_len, F.domain, erc_range, rng);
  return child;
}

namespace {

// Random expansion of a template: leaves occasionally grow into small
// random subtrees, placeholders become ERC draws.
Expr expand_template(const Expr& tmpl, int d, Interval erc_range,
                     std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (is_placeholder(tmpl)) {
    if (unit(rng) < 0.3) return random_expr(d, 2, erc_range, rng);
    std::uniform_real_distribution<double> erc(erc_range.lo, erc_range.hi);
    return cnst(erc(rng));
  }
  if (tmpl.arity() == 0) {
    if (unit(rng) < 0.25) return random_expr(d, 2, erc_range, rng);
    return tmpl;
  }
  if (tmpl.arity() == 1)
    return Expr::make(tmpl.op(), expand_template(tmpl.child(0), d, erc_range,
                                                 rng));
  return Expr::make(tmpl.op(),
                    expand_template(tmpl.child(0), d, erc_range, rng),
                    expand_template(tmpl.child(1), d, erc_range, rng));
}

bool satisfies(const Expr& e, const FeatureSet& F, std::mt19937_64& rng) {
  const bool want_parity = F.parity != Parity::None;
  const bool want_mono = F.joint_monotonicity != Monotonicity::None;
  const ExprClass c = classify_partial(e, F.domain, rng, want_parity,
                                       want_mono);
  if (want_parity && c.parity != F.parity) return false;
  if (want_mono && c.monotonicity != F.joint_monotonicity) return false;
  return true;
}

}  // namespace

Expr init_individual_by_features(const FeatureSet& F, const SubspaceIndex& idx,
                                 std::mt19937_64& rng, int budget,
                                 int max_len) {
  const int d = idx.dims();
  const Interval erc_range = idx.erc_range();
  const auto& adm = idx.admissible(F.boundary);
  if (adm.empty()) {
    Expr e = random_expr(d, 4, erc_range, rng);
    return e.node_count() > max_len
               ? prune(e, max_len, F.domain, erc_range, rng)
               : e;
  }
  std::uniform_int_distribution<std::size_t> pick(0, adm.size() - 1);
  const Subspace& s = idx.all()[adm[pick(rng)]];
  Expr inst = instantiate(s.tmpl, erc_range, rng);

  const bool want_parity = F.parity != Parity::None;
  const bool want_mono = F.joint_monotonicity != Monotonicity::None;
  const bool already =
      (!want_parity || s.features.parity == F.parity) &&
      (!want_mono || s.features.monotonicity == F.joint_monotonicity);
  if (!want_parity && !want_mono) return inst;

  if (already) {
    // grow by a rule-guided combination with a second satisfying instance
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng) < 0.5) {
      const Subspace& s2 = idx.all()[adm[pick(rng)]];
      Expr other = instantiate(s2.tmpl, erc_range, rng);
      Expr grown = recombine_by_features(inst, other, F, rng, max_len,
                                         erc_range);
      if (satisfies(grown, F, rng)) return grown;
    }
    return inst;
  }

  for (int b = 0; b < budget; ++b) {
    Expr cand = expand_template(s.tmpl, d, erc_range, rng);
    cand = instantiate(cand, erc_range, rng);
    if (cand.node_count() > max_len) continue;
    if (satisfies(cand, F, rng)) return cand;
  }
  Expr e = random_expr(d, 4, erc_range, rng);
  return e.node_count() > max_len ? prune(e, max_len, F.domain, erc_range, rng)
                                  : e;
}

std::size_t select_best(const std::vector<Individual>& pop) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < pop.size(); ++i) {
    const auto& a = pop[i];
    const auto& b = pop[best];
    if (a.fitness < b.fitness ||
        (a.fitness == b.fitness &&
         a.expr.node_count() < b.expr.node_count()))
      best = i;
  }
  return best;
}

FfemResult ffem_run(const Dataset& data, const FeatureSet& F,
                    const SubspaceIndex& idx, const EvolutionConfig& cfg,
                    std::uint64_t seed) {
  const Interval erc_range = cfg.erc_range;
  const auto fitness_of = [&](const Expr& e) {
    return rmse(e.eval_batch(data.X), data.Y.array());
  };

  FfemResult out;
  std::vector<Individual> pop(static_cast<std::size_t>(cfg.pop_size));
  for (int i = 0; i < cfg.pop_size; ++i) {
    auto rng = make_rng(seed, static_cast<std::uint64_t>(i));
    pop[static_cast<std::size_t>(i)].expr =
        init_individual_by_features(F, idx, rng, 100, cfg.max_len);
    pop[static_cast<std::size_t>(i)].fitness =
        fitness_of(pop[static_cast<std::size_t>(i)].expr);
  }

  const auto record = [&](long g) {
    TraceRecord t;
    t.generation = g;
    t.best_rmse = out.best.fitness;
    t.best_len = out.best.expr.node_count();
    double sum = 0.0;
    long finite = 0;
    for (const auto& ind : pop)
      if (std::isfinite(ind.fitness)) {
        sum += ind.fitness;
        ++finite;
      }
    t.mean_rmse = finite > 0 ? sum / static_cast<double>(finite)
                             : std::numeric_limits<double>::infinity();
    out.trace.push_back(t);
  };

  out.best = pop[select_best(pop)];
  record(0);

  long g = 0;
  while (out.best.fitness > cfg.threshold && g < cfg.max_gen) {
    ++g;
    std::vector<Individual> next(pop.size());
    for (int i = 0; i < cfg.pop_size; ++i) {
      auto rng = make_rng(seed, static_cast<std::uint64_t>(g) * 0x10000ULL *
                                    0x10000ULL +
                                    static_cast<std::uint64_t>(i));
      std::uniform_int_distribution<std::size_t> upick(0, pop.size() - 1);
      const auto parent = [&]() -> const Individual& {
        if (!cfg.tournament) return pop[upick(rng)];
        std::size_t w = upick(rng);
        for (int t = 1; t < cfg.tournament_size; ++t) {
          const std::size_t c = upick(rng);
          if (pop[c].fitness < pop[w].fitness) w = c;
        }
        return pop[w];
      };
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      const double r = unit(rng);
      Individual child;
      if (r < cfg.alpha) {
        child.expr = recombine_by_features(parent().expr, parent().expr, F,
                                           rng, cfg.max_len, erc_range);
        child.fitness = fitness_of(child.expr);
      } else if (r < cfg.alpha + cfg.beta) {
        child.expr = init_individual_by_features(F, idx, rng, 20, cfg.max_len);
        child.fitness = fitness_of(child.expr);
      } else {
        child = parent();  // copy-through keeps its fitness
      }
      next[static_cast<std::size_t>(i)] = std::move(child);
    }
    pop = std::move(next);
    const auto& cand = pop[select_best(pop)];
    if (cand.fitness < out.best.fitness ||
        (cand.fitness == out.best.fitness &&
         cand.expr.node_count() < out.best.expr.node_count()))
      out.best = cand;
    record(g);
  }
  out.generations = g;

  // distinct next-best expressions from the final population
  std::vector<std::size_t> order(pop.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (pop[a].fitness != pop[b].fitness)
      return pop[a].fitness < pop[b].fitness;
    return pop[a].expr.node_count() < pop[b].expr.node_count();
  });
  std::vector<std::string> seen{format(out.best.expr)};
  for (std::size_t i : order) {
    if (out.runners_up.size() >= 4) break;
    std::string txt = format(pop[i].expr);
    if (std::find(seen.begin(), seen.end(), txt) != seen.end()) continue;
    seen.push_back(std::move(txt));
    out.runners_up.push_back(pop[i].expr);
  }
  return out;
}

}  // namespace tsr
