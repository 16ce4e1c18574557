#include "taylor_sr/interval.hpp"

namespace tsr {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// 0 * inf shows up in interval products; treat it as 0.
double prod(double a, double b) {
  const double p = a * b;
  return std::isnan(p) ? 0.0 : p;
}
}  // namespace

Interval iv_add(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }
Interval iv_sub(Interval a, Interval b) { return {a.lo - b.hi, a.hi - b.lo}; }

Interval iv_mul(Interval a, Interval b) {
  const double c[4] = {prod(a.lo, b.lo), prod(a.lo, b.hi), prod(a.hi, b.lo),
                       prod(a.hi, b.hi)};
  return {std::min({c[0], c[1], c[2], c[3]}),
          std::max({c[0], c[1], c[2], c[3]})};
}

Interval iv_div(Interval a, Interval b) {
  if (b.lo <= 0.0 && 0.0 <= b.hi) return Interval::whole();
  return iv_mul(a, {1.0 / b.hi, 1.0 / b.lo});
}

Interval iv_neg(Interval a) { return {-a.hi, -a.lo}; }

Interval iv_scale(Interval a, double s) {
  return s >= 0.0 ? Interval{prod(a.lo, s), prod(a.hi, s)}
                  : Interval{prod(a.hi, s), prod(a.lo, s)};
}

Interval iv_pow_nat(Interval a, int n) {
  if (n == 0) return {1.0, 1.0};
  if (n % 2 == 1) return {std::pow(a.lo, n), std::pow(a.hi, n)};
  const double abs_lo = a.contains_value(0.0)
                            ? 0.0
                            : std::min(std::abs(a.lo), std::abs(a.hi));
  const double abs_hi = std::max(std::abs(a.lo), std::abs(a.hi));
  return {std::pow(abs_lo, n), std::pow(abs_hi, n)};
}

namespace {
// Is there an integer k with lo <= phase + 2*pi*k <= hi?
bool crosses(double lo, double hi, double phase) {
  const double k = std::ceil((lo - phase) / (2.0 * M_PI));
  return phase + 2.0 * M_PI * k <= hi;
}
}  // namespace

Interval iv_sin(Interval a) {
  if (!a.is_finite() || a.width() >= 2.0 * M_PI) return {-1.0, 1.0};
  const double slo = std::sin(a.lo), shi = std::sin(a.hi);
  Interval r{std::min(slo, shi), std::max(slo, shi)};
  if (crosses(a.lo, a.hi, M_PI / 2.0)) r.hi = 1.0;
  if (crosses(a.lo, a.hi, -M_PI / 2.0)) r.lo = -1.0;
  return r;
}

Interval iv_cos(Interval a) {
  return iv_sin(iv_add(a, Interval::point(M_PI / 2.0)));
}

Interval iv_exp(Interval a) { return {std::exp(a.lo), std::exp(a.hi)}; }

Interval iv_logabs(Interval a) {
  const double abs_lo = a.contains_value(0.0)
                            ? 0.0
                            : std::min(std::abs(a.lo), std::abs(a.hi));
  const double abs_hi = std::max(std::abs(a.lo), std::abs(a.hi));
  return {abs_lo == 0.0 ? -kInf : std::log(abs_lo),
          abs_hi == 0.0 ? -kInf : std::log(abs_hi)};
}

Interval iv_sqrt(Interval a) {
  return {std::sqrt(std::max(a.lo, 0.0)), std::sqrt(std::max(a.hi, 0.0))};
}

Interval iv_eval(const Expr& e, const std::vector<Interval>& domain,
                 const Interval* const_range) {
  switch (e.op()) {
    case Op::Const:
      // NaN-valued constants are subspace placeholders standing for any ERC
      if (std::isnan(e.value()))
        return const_range ? *const_range : Interval::whole();
      return Interval::point(e.value());
    case Op::Var:
      return e.var_index() < static_cast<int>(domain.size())
                 ? domain[e.var_index()]
                 : Interval::whole();
    case Op::Add:
      return iv_add(iv_eval(e.child(0), domain, const_range),
                    iv_eval(e.child(1), domain, const_range));
    case Op::Sub:
      return iv_sub(iv_eval(e.child(0), domain, const_range),
                    iv_eval(e.child(1), domain, const_range));
    case Op::Mul:
      return iv_mul(iv_eval(e.child(0), domain, const_range),
                    iv_eval(e.child(1), domain, const_range));
    case Op::Div:
      return iv_div(iv_eval(e.child(0), domain, const_range),
                    iv_eval(e.child(1), domain, const_range));
    case Op::Sin: return iv_sin(iv_eval(e.child(0), domain, const_range));
    case Op::Cos: return iv_cos(iv_eval(e.child(0), domain, const_range));
    case Op::Exp: return iv_exp(iv_eval(e.child(0), domain, const_range));
    case Op::Log: return iv_logabs(iv_eval(e.child(0), domain, const_range));
    case Op::Sqrt: return iv_sqrt(iv_eval(e.child(0), domain, const_range));
    default:
      return Interval::whole();
  }
}

namespace {

// In-place recursion: `out` is reused for the first child and mutated, so a
// classification touches the heap once per binary node instead of several
// times per node.
void grad_rec(const Expr& e, const std::vector<Interval>& domain,
              IntervalGradient& out) {
  const std::size_t d = domain.size();
  auto chain = [&](Interval dfdx) {
    for (std::size_t t = 0; t < d; ++t)
      out.grad[t] = iv_mul(dfdx, out.grad[t]);
  };
  switch (e.op()) {
    case Op::Const:
      out.value = std::isnan(e.value()) ? Interval::whole()
                                        : Interval::point(e.value());
      std::fill(out.grad.begin(), out.grad.end(), Interval::point(0.0));
      return;
    case Op::Var: {
      const auto i = static_cast<std::size_t>(e.var_index());
      out.value = i < d ? domain[i] : Interval::whole();
      std::fill(out.grad.begin(), out.grad.end(), Interval::point(0.0));
      if (i < d) out.grad[i] = Interval::point(1.0);
      return;
    }
    case Op::Add: case Op::Sub: {
      grad_rec(e.child(0), domain, out);
      IntervalGradient b;
      b.grad.resize(d);
      grad_rec(e.child(1), domain, b);
      if (e.op() == Op::Add) {
        out.value = iv_add(out.value, b.value);
        for (std::size_t t = 0; t < d; ++t)
          out.grad[t] = iv_add(out.grad[t], b.grad[t]);
      } else {
        out.value = iv_sub(out.value, b.value);
        for (std::size_t t = 0; t < d; ++t)
          out.grad[t] = iv_sub(out.grad[t], b.grad[t]);
      }
      return;
    }
    case Op::Mul: {
      grad_rec(e.child(0), domain, out);
      IntervalGradient b;
      b.grad.resize(d);
      grad_rec(e.child(1), domain, b);
      for (std::size_t t = 0; t < d; ++t)
        out.grad[t] = iv_add(iv_mul(out.grad[t], b.value),
                             iv_mul(out.value, b.grad[t]));
      out.value = iv_mul(out.value, b.value);
      return;
    }
    case Op::Div: {
      grad_rec(e.child(0), domain, out);
      IntervalGradient b;
      b.grad.resize(d);
      grad_rec(e.child(1), domain, b);
      const Interval b2 = iv_mul(b.value, b.value);
      for (std::size_t t = 0; t < d; ++t)
        out.grad[t] = iv_div(iv_sub(iv_mul(out.grad[t], b.value),
                                    iv_mul(out.value, b.grad[t])),
                             b2);
      out.value = iv_div(out.value, b.value);
      return;
    }
    case Op::Sin:
      grad_rec(e.child(0), domain, out);
      chain(iv_cos(out.value));
      out.value = iv_sin(out.value);
      return;
    case Op::Cos:
      grad_rec(e.child(0), domain, out);
      chain(iv_neg(iv_sin(out.value)));
      out.value = iv_cos(out.value);
      return;
    case Op::Exp: {
      grad_rec(e.child(0), domain, out);
      const Interval v = iv_exp(out.value);
      chain(v);
      out.value = v;
      return;
    }
    case Op::Log:
      grad_rec(e.child(0), domain, out);
      chain(iv_div(Interval::point(1.0), out.value));
      out.value = iv_logabs(out.value);
      return;
    case Op::Sqrt: {
      grad_rec(e.child(0), domain, out);
      const Interval v = iv_sqrt(out.value);
      chain(iv_div(Interval::point(0.5), v));
      out.value = v;
      return;
    }
    default:
      out.value = Interval::whole();
      std::fill(out.grad.begin(), out.grad.end(), Interval::whole());
      return;
  }
}

}  // namespace

IntervalGradient iv_eval_grad(const Expr& e,
                              const std::vector<Interval>& domain) {
  IntervalGradient r;
  r.grad.resize(domain.size());
  grad_rec(e, domain, r);
  return r;
}

}  // namespace tsr
