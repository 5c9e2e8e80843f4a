#include "ngd/extension.hpp"

#include <algorithm>

#include "ngd/error.hpp"

namespace ngd {

namespace {

constexpr std::size_t kMaxRounds = 4096;

// Positive rational lower bound of d > 0.
Rational positive_lower_bound(const ExactReal& d) {
  if (d.is_rational()) return d.as_rational();
  Rational eps(1, 16);
  for (int i = 0; i < 16; ++i) {
    const Enclosure e = enclose(d, eps);
    if (e.lo > 0) return e.lo;
    eps *= eps;
  }
  throw Error(ErrorCode::BracketUnavailable, "no positive separation for " + d.str());
}

// Shortest dyadic inside [lo, hi].
Rational shortest_dyadic(const Enclosure& w, Approximant approximant) {
  for (unsigned bits = 0;; ++bits) {
    if (approximant == Approximant::LowDyadic) {
      Rational q = ceil_dyadic(w.lo, bits);
      if (q <= w.hi) return q;
    } else {
      Rational q = floor_dyadic(w.hi, bits);
      if (q >= w.lo) return q;
    }
  }
}

}  // namespace

ExtensionHandle::ExtensionHandle(FunctionDef source, BracketPolicy policy)
    : source_(std::move(source)), policy_(policy), mutex_(std::make_unique<std::mutex>()) {
  if (policy_.margin_divisor < 8) throw Error(ErrorCode::BracketViolation, "margin divisor must be >= 8");
  if (policy_.refine_shift == 0) throw Error(ErrorCode::BracketViolation, "refine shift must be >= 1");
}

std::optional<ExactReal> ExtensionHandle::exact_at(const ExactReal& x) const {
  if (!x.is_rational()) return std::nullopt;
  return evaluate(source_, x);
}

BracketChoice ExtensionHandle::bracket_for(const ExactReal& x) const {
  const Interval& I = interval();
  if (!I.contains(x)) throw Error(ErrorCode::OutOfDomain, x.str() + " not in " + I.str());
  const Rational far(8);
  const Rational room_lo = I.lo ? positive_lower_bound(x - *I.lo) : far;
  const Rational room_hi = I.hi ? positive_lower_bound(*I.hi - x) : far;
  const Rational room = std::min(room_lo, room_hi);

  const Rational raw_margin = room / policy_.margin_divisor;
  const unsigned bits = bits_for(raw_margin) + 1;
  const Rational margin = floor_dyadic(raw_margin, bits);
  const Enclosure e = round_outward(enclose(x, margin), bits);

  BracketChoice c;
  c.a = e.lo;
  c.b = e.hi;
  if (c.a == c.b) c.b += Rational(Integer(1), Integer(1) << bits);
  c.bracket = {c.a - 2 * margin, c.a - margin, c.b + margin, c.b + 2 * margin};
  for (Rational* q : {&c.bracket.outer_lo, &c.bracket.inner_lo, &c.bracket.inner_hi, &c.bracket.outer_hi})
    q->canonicalize();
  if (!I.contains(ExactReal(c.bracket.outer_lo)) || !I.contains(ExactReal(c.bracket.outer_hi)))
    throw Error(ErrorCode::BracketUnavailable, "no rational bracket around " + x.str() + " inside " + I.str());
  c.modulus = lipschitz_bound(source_, c.a, c.b, c.bracket);
  c.modulus_bound = c.modulus.upper_bound();
  return c;
}

ExtensionHandle::Chain ExtensionHandle::make_chain(const ExactReal& x) const {
  Chain chain;
  chain.choice = bracket_for(x);
  chain.start = {chain.choice.a, chain.choice.b};
  return chain;
}

void ExtensionHandle::extend_chain(const ExactReal& x, Chain& chain) const {
  if (chain.rounds.size() >= kMaxRounds)
    throw Error(ErrorCode::ResolutionExceeded, "extension refinement did not converge at " + x.str());
  const std::size_t k = chain.rounds.size();
  Rational delta = chain.start.width() / Rational(Integer(1) << (policy_.refine_shift * (k + 1)));
  delta.canonicalize();
  const unsigned bits = bits_for(delta / 4);
  const Enclosure around = round_outward(enclose(x, delta / 2), bits);
  const Enclosure window = intersect(around, chain.start);

  ExtensionRound r;
  r.approximant = shortest_dyadic(window, policy_.approximant);
  r.radius = std::max(r.approximant - window.lo, window.hi - r.approximant);
  r.value = evaluate(source_, ExactReal(r.approximant));
  const Rational spread = chain.choice.modulus_bound * r.radius;
  if (r.value.is_rational()) {
    const Rational& v = r.value.as_rational();
    r.estimate = {v - spread, v + spread};
  } else {
    const Enclosure v = enclose(r.value, std::max(spread, delta));
    r.estimate = {v.lo - spread, v.hi + spread};
  }
  r.estimate.lo.canonicalize();
  r.estimate.hi.canonicalize();
  r.running = chain.rounds.empty() ? r.estimate : intersect(chain.rounds.back().running, r.estimate);
  if (r.running.lo > r.running.hi)
    throw Error(ErrorCode::InconsistentEnclosure,
                "disjoint extension rounds at " + x.str() + "; f is not Jensen convex on the rationals");
  chain.rounds.push_back(std::move(r));
}

Enclosure ExtensionHandle::extend_eval(const ExactReal& x, const Rational& eps) const {
  if (eps <= 0) throw Error(ErrorCode::BracketViolation, "eps must be > 0");
  if (!interval().contains(x)) throw Error(ErrorCode::OutOfDomain, x.str() + " not in " + interval().str());
  if (x.is_rational()) {
    const ExactReal v = evaluate(source_, x);
    if (v.is_rational()) return {v.as_rational(), v.as_rational()};
    return round_outward(enclose(v, eps / 2), bits_for(eps / 8));
  }
  const Rational target = eps / 2;
  std::lock_guard lock(*mutex_);
  auto it = cache_.find(x);
  if (it == cache_.end()) it = cache_.emplace(x, make_chain(x)).first;
  Chain& chain = it->second;
  std::size_t k = 0;
  for (;; ++k) {
    if (k == chain.rounds.size()) extend_chain(x, chain);
    if (chain.rounds[k].running.width() <= target) break;
  }
  return round_outward(chain.rounds[k].running, bits_for(eps / 8));
}

std::vector<ExtensionRound> ExtensionHandle::trace(const ExactReal& x, const Rational& eps) const {
  if (x.is_rational()) return {};
  (void)extend_eval(x, eps);
  std::lock_guard lock(*mutex_);
  const Chain& chain = cache_.at(x);
  std::vector<ExtensionRound> out;
  for (const ExtensionRound& r : chain.rounds) {
    out.push_back(r);
    if (r.running.width() <= eps / 2) break;
  }
  return out;
}

CheckResult convexity_certificate(const ExtensionHandle& h, const SampleGrid& grid) {
  const FunctionDef& f = h.source();
  const std::array<Rational, 5> weights{make_rational(1, 4), make_rational(1, 3), make_rational(1, 2),
                                        make_rational(2, 3), make_rational(3, 4)};
  CheckResult out;
  const auto& q = grid.rationals;
  for (std::size_t i = 0; i < q.size(); ++i) {
    for (std::size_t j = i + 1; j < q.size(); ++j) {
      const ExactReal x(q[i]);
      const ExactReal y(q[j]);
      const ExactReal fx = evaluate(f, x);
      const ExactReal fy = evaluate(f, y);
      for (const Rational& t : weights) {
        ++out.checked;
        ExactReal lhs = evaluate(f, x * t + y * (1 - t));
        ExactReal rhs = fx * t + fy * (1 - t);
        if (compare(lhs, rhs) > 0) {
          out.violation = ViolationCertificate{
              ViolationKind::Jensen, "", {{"x", x}, {"y", y}, {"t", ExactReal(t)}}, std::move(lhs), std::move(rhs)};
          return out;
        }
      }
    }
  }
  return out;
}

TransferReport difference_transfer_check(const FunctionDef& f, const ExtensionHandle& h, const Rational& v,
                                         const SampleGrid& grid, const Rational& eps) {
  if (v <= 0) throw Error(ErrorCode::NonPositiveStep, "transfer step must be > 0");
  const ExactReal step(v);
  const Interval J = shifted_intersection(f.interval, step);
  if (!grid.within(J)) throw Error(ErrorCode::OutOfDomain, "grid leaves I ∩ (I - v) for v = " + format_rational(v));

  TransferReport report;
  report.v = v;

  const std::vector<ExactReal> pts = grid.points();
  std::vector<ExactReal> diffs;
  diffs.reserve(pts.size());
  for (const ExactReal& x : pts) diffs.push_back(delta(f, step, x));
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    ++report.monotone.checked;
    if (compare(diffs[i], diffs[i + 1]) > 0) {
      report.monotone.violation = ViolationCertificate{ViolationKind::Monotone,
                                                       "difference",
                                                       {{"x", pts[i]}, {"y", pts[i + 1]}, {"v", step}},
                                                       diffs[i],
                                                       diffs[i + 1]};
      break;
    }
  }

  for (const Rational& q : grid.rationals) {
    const ExactReal x(q);
    ++report.rational_points;
    const ExactReal extension_diff = *h.exact_at(x + step) - *h.exact_at(x);
    if (extension_diff != delta(f, step, x)) report.rational_equal = false;
  }

  const ExactReal tolerance(2 * eps);
  for (const ExactReal& x : grid.probes) {
    ++report.irrational_probes;
    const Enclosure gd = h.extend_eval(x + step, eps) - h.extend_eval(x, eps);
    const ExactReal fd = delta(f, step, x);
    const ExactReal below = fd - ExactReal(gd.lo);
    const ExactReal above = ExactReal(gd.hi) - fd;
    const ExactReal& worse = compare(below, above) >= 0 ? below : above;
    if (compare(worse, tolerance) > 0) report.within_tolerance = false;
    const Rational bound = ceil_dyadic(enclose(worse, eps / 1024).hi, bits_for(eps / 1024));
    if (report.irrational_probes == 1 || bound > report.worst_bound) report.worst_bound = bound;
  }
  return report;
}

}  // namespace ngd
