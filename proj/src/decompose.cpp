#include "ngd/decompose.hpp"

#include <algorithm>
#include <random>

#include "ngd/analysis.hpp"

namespace ngd {

namespace {

Rational magnitude_bound(const Enclosure& e) {
  return std::max(::abs(e.lo), ::abs(e.hi));
}

}  // namespace

Enclosure ResidualOracle::phi(const ExactReal& x, const Rational& eps) const {
  const ExactReal fx = evaluate(f_, x);
  if (auto g = h_.exact_at(x)) {
    const ExactReal diff = fx - *g;
    if (diff.is_rational()) return {diff.as_rational(), diff.as_rational()};
    return round_outward(enclose(diff, eps / 2), bits_for(eps / 8));
  }
  const Enclosure fe = round_outward(enclose(fx, eps / 4), bits_for(eps / 16));
  const Enclosure ge = h_.extend_eval(x, eps / 2);
  return fe - ge;
}

ExactReal RecoveryPoint::point() const { return ExactReal(r) + ExactReal::sqrt_term(q, m); }

RecoveryPoint recovery_point(const Interval& interval, Radical m) {
  const Enclosure window = sampling_window(interval);
  const Rational width = window.width();
  const Rational root_hi = sqrt_bracket(m, 2).hi;
  const Rational target = width / (2 * root_hi);
  RecoveryPoint rp;
  rp.m = m;
  rp.q = floor_dyadic(target, bits_for(target) + 3);
  const ExactReal radical_part = ExactReal::sqrt_term(rp.q, m);
  const Enclosure e = enclose(radical_part, width / 4096);
  const Rational centre = (window.lo + window.hi) / 2;
  rp.r = floor_dyadic(centre - (e.lo + e.hi) / 2, bits_for(width / 1024));
  if (!interval.contains(ExactReal(rp.r) + radical_part))
    throw Error(ErrorCode::BracketUnavailable, "no recovery point for sqrt(" + std::to_string(m) + ") in " + interval.str());
  return rp;
}

DecompositionResult decompose(const FunctionDef& f, const Rational& eps, const SampleGrid& grid,
                              const DecomposeOptions& options) {
  if (eps <= 0) throw Error(ErrorCode::BracketViolation, "eps must be > 0");

  SampleGrid rational_grid{grid.interval, grid.rationals, {}, grid.seed};
  CheckResult gate = jensen_check(f, rational_grid);
  if (gate.violation) throw NotJensenConvexError(std::move(*gate.violation));

  const ExtensionHandle h(f, options.policy);
  const ResidualOracle phi(f, h);

  DecompositionResult out;
  out.eps = eps;
  out.seed = options.seed;
  out.grid_rationals = grid.rationals.size();
  out.grid_probes = grid.probes.size();

  for (Radical m : f.basis) {
    const RecoveryPoint rp = recovery_point(f.interval, m);
    const ExactReal p = rp.point();
    const Rational scaled = eps * rp.q;
    const Enclosure fe = round_outward(enclose(evaluate(f, p), scaled / 4), bits_for(scaled / 16));
    const Enclosure ge = h.extend_eval(p, scaled / 2);
    out.additive[m] = scale(fe - ge, 1 / rp.q);
  }

  ResidualReport& res = out.residuals;
  for (const Rational& q : grid.rationals) {
    ++res.rational_points;
    const Enclosure e = phi.phi(ExactReal(q), eps);
    if (!(e.lo == 0 && e.hi == 0)) res.phi_zero_on_rationals = false;
  }
  if (!res.phi_zero_on_rationals)
    throw Error(ErrorCode::InconsistentEnclosure, "residual is not zero on the rational grid");
  out.rational_coefficient = 0;
  out.constant = 0;

  // Jensen equation for Φ.
  res.jensen_tolerance = 3 * eps;
  std::vector<std::pair<ExactReal, ExactReal>> pairs = options.jensen_probe_pairs;
  const std::vector<ExactReal> pts = grid.points();
  if (!pts.empty()) {
    std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
    const std::vector<ExactReal>& firsts = grid.probes.empty() ? pts : grid.probes;
    for (std::size_t k = 0; k < options.jensen_pairs; ++k) {
      const ExactReal& x = firsts[rng() % firsts.size()];
      const ExactReal& y = pts[rng() % pts.size()];
      if (x != y) pairs.emplace_back(x, y);
    }
  }
  const Rational half(1, 2);
  for (const auto& [x, y] : pairs) {
    ++res.jensen_pairs;
    const Enclosure mid = phi.phi((x + y) * half, eps);
    const Enclosure avg = scale(phi.phi(x, eps) + phi.phi(y, eps), half);
    const Rational bound = magnitude_bound(mid - avg);
    if (res.jensen_pairs == 1 || bound > res.jensen_worst_bound) res.jensen_worst_bound = bound;
    if (bound > res.jensen_tolerance) {
      res.jensen_ok = false;
      res.jensen_failures.push_back({x, y, bound});
    }
  }

  // Δ_v f = Δ_v g for rational v.
  const Enclosure window = sampling_window(f.interval);
  for (std::size_t k = 0; k < options.transfer_steps; ++k) {
    Rational v = window.width() * Rational(static_cast<long>(k + 1), 16);
    v.canonicalize();
    const Interval J = shifted_intersection(f.interval, ExactReal(v));
    TransferReport t = difference_transfer_check(f, h, v, restrict_grid(grid, J), eps);
    if (!t.passed()) res.transfer_ok = false;
    res.transfer.push_back(std::move(t));
  }

  for (const ExactReal& x : grid.probes) out.convex_probes.push_back({x, h.extend_eval(x, eps)});
  return out;
}

VerificationReport verify_against_truth(const DecompositionResult& result, const FunctionDef& instance) {
  VerificationReport report;
  const auto* d = std::get_if<Decomposable>(&instance.variant);
  if (d == nullptr) {
    report.failures.push_back("instance is " + to_string(instance.kind()) + ", no ground-truth decomposition");
    return report;
  }
  for (Radical m : instance.basis) {
    ++report.checks;
    const ExactReal truth = *normalized_additive_truth(instance, m);
    auto it = result.additive.find(m);
    if (it == result.additive.end()) {
      report.failures.push_back("c_" + std::to_string(m) + " missing from the result");
      continue;
    }
    if (!encloses(it->second, truth))
      report.failures.push_back("c_" + std::to_string(m) + " enclosure " + format_enclosure(it->second) +
                                " misses " + truth.str());
    if (it->second.width() > result.eps)
      report.failures.push_back("c_" + std::to_string(m) + " enclosure wider than eps");
  }
  ++report.checks;
  if (result.rational_coefficient != 0) report.failures.push_back("rational coefficient is not 0");
  ++report.checks;
  if (result.constant != 0) report.failures.push_back("constant is not 0");
  ++report.checks;
  if (!result.residuals.phi_zero_on_rationals) report.failures.push_back("residual nonzero at a rational point");
  for (const ProbeEnclosure& p : result.convex_probes) {
    ++report.checks;
    const ExactReal truth = *rational_extension_truth(instance, p.x);
    if (!encloses(p.g, truth))
      report.failures.push_back("g(" + p.x.str() + ") enclosure " + format_enclosure(p.g) + " misses " + truth.str());
    if (p.g.width() > result.eps) report.failures.push_back("g(" + p.x.str() + ") enclosure wider than eps");
  }
  ++report.checks;
  if (!result.residuals.jensen_ok) report.failures.push_back("Jensen-equation residual above tolerance");
  ++report.checks;
  if (!result.residuals.transfer_ok) report.failures.push_back("difference transfer check failed");
  return report;
}

BracketPolicy alternate_policy() { return {16, Approximant::HighDyadic, 2}; }

UniquenessReport uniqueness_check(const FunctionDef& f, const Rational& eps, std::uint64_t s1, std::uint64_t s2,
                                  GridSizes sizes) {
  const SampleGrid g1 = make_grid(f.interval, sizes.rationals, sizes.probes, f.basis, s1);
  const SampleGrid g2 = make_grid(f.interval, 2 * sizes.rationals + 1, sizes.probes, f.basis, s2);
  DecomposeOptions o1;
  o1.seed = s1;
  DecomposeOptions o2;
  o2.seed = s2;
  o2.policy = alternate_policy();
  const DecompositionResult r1 = decompose(f, eps, g1, o1);
  const DecompositionResult r2 = decompose(f, eps, g2, o2);

  UniquenessReport report;
  for (const auto& [m, e1] : r1.additive) {
    const Enclosure& e2 = r2.additive.at(m);
    if (!e1.overlaps(e2)) {
      report.discrepancies.push_back("c_" + std::to_string(m) + ": " + format_enclosure(e1) + " vs " +
                                     format_enclosure(e2));
    } else {
      report.additive_intersection[m] = intersect(e1, e2);
    }
  }
  const ExtensionHandle h1(f, o1.policy);
  const ExtensionHandle h2(f, o2.policy);
  std::vector<ExactReal> probes = g1.probes;
  probes.insert(probes.end(), g2.probes.begin(), g2.probes.end());
  for (const ExactReal& x : probes) {
    const Enclosure a = h1.extend_eval(x, eps);
    const Enclosure b = h2.extend_eval(x, eps);
    if (!a.overlaps(b)) {
      report.discrepancies.push_back("g(" + x.str() + "): " + format_enclosure(a) + " vs " + format_enclosure(b));
    } else {
      report.probe_intersection.push_back({x, intersect(a, b)});
    }
  }
  return report;
}

}  // namespace ngd
