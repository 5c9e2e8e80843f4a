#include "ngd/analysis.hpp"

#include <algorithm>
#include <set>

#include "ngd/error.hpp"

namespace ngd {

namespace {

void require_positive(const ExactReal& step, const char* name) {
  if (sign(step) <= 0) throw Error(ErrorCode::NonPositiveStep, std::string(name) + " = " + step.str() + " is not > 0");
}

ExactReal cross_product_sign_free(const SlopeFraction& a, const SlopeFraction& b) {
  // a.num/a.den - b.num/b.den has the sign of (a.num b.den - b.num a.den) * sign(a.den b.den)
  return a.num * b.den - b.num * a.den;
}

}  // namespace

ExactReal delta(const FunctionDef& f, const ExactReal& w, const ExactReal& x) {
  return evaluate(f, x + w) - evaluate(f, x);
}

ExactReal double_delta(const FunctionDef& f, const ExactReal& u, const ExactReal& v, const ExactReal& x) {
  require_positive(u, "u");
  require_positive(v, "v");
  const ExactReal far = x + u + v;
  if (!f.interval.contains(x) || !f.interval.contains(far))
    throw Error(ErrorCode::OutOfDomain, "x = " + x.str() + " not in I ∩ (I - u - v)");
  return evaluate(f, far) - evaluate(f, x + u) - evaluate(f, x + v) + evaluate(f, x);
}

SlopeFraction SlopeFraction::abs() const { return {ngd::abs(num), ngd::abs(den)}; }

Rational SlopeFraction::upper_bound() const {
  if (num.is_rational() && den.is_rational()) {
    Rational q = num.as_rational() / den.as_rational();
    q.canonicalize();
    return q;
  }
  Rational eps(1, 1 << 16);
  for (;;) {
    const Enclosure d = enclose(den, eps);
    if (d.lo > 0 || d.hi < 0) {
      const Enclosure n = enclose(num, eps);
      std::array<Rational, 4> corners{n.lo / d.lo, n.lo / d.hi, n.hi / d.lo, n.hi / d.hi};
      Rational best = *std::max_element(corners.begin(), corners.end());
      best.canonicalize();
      return best;
    }
    eps *= eps;
  }
}

std::string SlopeFraction::str() const { return "(" + num.str() + ")/(" + den.str() + ")"; }

std::strong_ordering compare(const SlopeFraction& a, const SlopeFraction& b) {
  const int s = sign(cross_product_sign_free(a, b)) * sign(a.den) * sign(b.den);
  if (s < 0) return std::strong_ordering::less;
  if (s > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

const SlopeFraction& max(const SlopeFraction& a, const SlopeFraction& b) { return compare(a, b) < 0 ? b : a; }

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Wright: return "Wright";
    case ViolationKind::Jensen: return "Jensen";
    case ViolationKind::Monotone: return "Monotone";
  }
  return "?";
}

ViolationKind parse_violation_kind(std::string_view name) {
  if (name == "Wright") return ViolationKind::Wright;
  if (name == "Jensen") return ViolationKind::Jensen;
  if (name == "Monotone") return ViolationKind::Monotone;
  throw Error(ErrorCode::Parse, "unknown violation kind '" + std::string(name) + "'");
}

const ExactReal& ViolationCertificate::point(std::string_view name) const {
  for (const auto& [key, value] : points)
    if (key == name) return value;
  throw Error(ErrorCode::Parse, "certificate has no point '" + std::string(name) + "'");
}

CertificateCheck verify_certificate(const FunctionDef& f, const ViolationCertificate& cert) {
  CertificateCheck out;
  ExactReal lhs;
  ExactReal rhs;
  try {
    switch (cert.kind) {
      case ViolationKind::Wright: {
        const ExactReal& x = cert.point("x");
        const ExactReal& u = cert.point("u");
        const ExactReal& v = cert.point("v");
        require_positive(u, "u");
        require_positive(v, "v");
        lhs = evaluate(f, x + u) + evaluate(f, x + v);
        rhs = evaluate(f, x) + evaluate(f, x + u + v);
        break;
      }
      case ViolationKind::Jensen: {
        const ExactReal& x = cert.point("x");
        const ExactReal& y = cert.point("y");
        const Rational t = cert.point("t").as_rational();
        if (t < 0 || t > 1) throw Error(ErrorCode::OutOfDomain, "weight t outside [0, 1]");
        lhs = evaluate(f, x * t + y * (1 - t));
        rhs = evaluate(f, x) * t + evaluate(f, y) * (1 - t);
        break;
      }
      case ViolationKind::Monotone: {
        if (cert.form == "chord") {
          const ExactReal& x = cert.point("x");
          const ExactReal& u = cert.point("u");
          const ExactReal& y = cert.point("y");
          if (!(less(x, u) && less(u, y))) throw Error(ErrorCode::DegeneratePair, "need x < u < y");
          lhs = (evaluate(f, u) - evaluate(f, x)) * (y - u);
          rhs = (evaluate(f, y) - evaluate(f, u)) * (u - x);
        } else if (cert.form == "difference") {
          const ExactReal& x = cert.point("x");
          const ExactReal& y = cert.point("y");
          const ExactReal& v = cert.point("v");
          if (!less(x, y)) throw Error(ErrorCode::DegeneratePair, "need x < y");
          lhs = delta(f, v, x);
          rhs = delta(f, v, y);
        } else {
          throw Error(ErrorCode::Parse, "unknown monotone form '" + cert.form + "'");
        }
        break;
      }
    }
  } catch (const Error& e) {
    out.detail = e.what();
    return out;
  }
  out.reproduced = lhs == cert.lhs && rhs == cert.rhs;
  out.violated = compare(lhs, rhs) > 0;
  if (!out.reproduced) out.detail = "recomputed sides differ: lhs = " + lhs.str() + ", rhs = " + rhs.str();
  else if (!out.violated) out.detail = "inequality holds at the witness";
  return out;
}

std::vector<ExactReal> wright_steps(const SampleGrid& grid, const StepProfile& profile) {
  std::vector<ExactReal> steps;
  for (const ExactReal& s : profile.explicit_steps) {
    require_positive(s, "step");
    if (std::find(steps.begin(), steps.end(), s) == steps.end()) steps.push_back(s);
  }
  if (profile.grid_differences) {
    const std::vector<ExactReal> pts = grid.points();
    std::set<ExactReal, StructuralLess> seen(steps.begin(), steps.end());
    std::vector<ExactReal> diffs;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        ExactReal d = pts[j] - pts[i];
        if (seen.insert(d).second) diffs.push_back(std::move(d));
      }
    }
    std::sort(diffs.begin(), diffs.end(), [](const ExactReal& a, const ExactReal& b) { return less(a, b); });
    if (profile.max_grid_steps != 0 && diffs.size() > profile.max_grid_steps) diffs.resize(profile.max_grid_steps);
    for (ExactReal& d : diffs) steps.push_back(std::move(d));
  }
  return steps;
}

SlopeFraction chord_slope(const FunctionDef& f, const ExactReal& x, const ExactReal& y) {
  if (x == y) throw Error(ErrorCode::DegeneratePair, "chord through a single point " + x.str());
  return {evaluate(f, y) - evaluate(f, x), y - x};
}

CheckResult chord_slope_monotone_check(const FunctionDef& f, const std::vector<Triple>& triples) {
  CheckResult out;
  for (const Triple& t : triples) {
    const auto& [x, u, y] = t;
    if (!(less(x, u) && less(u, y))) throw Error(ErrorCode::DegeneratePair, "triple must satisfy x < u < y");
    ++out.checked;
    ExactReal lhs = (evaluate(f, u) - evaluate(f, x)) * (y - u);
    ExactReal rhs = (evaluate(f, y) - evaluate(f, u)) * (u - x);
    if (compare(lhs, rhs) > 0) {
      out.violation = ViolationCertificate{
          ViolationKind::Monotone, "chord", {{"x", x}, {"u", u}, {"y", y}}, std::move(lhs), std::move(rhs)};
      return out;
    }
  }
  return out;
}

CheckResult chord_slope_monotone_check(const FunctionDef& f, const SampleGrid& grid) {
  const std::vector<ExactReal> pts = grid.points();
  std::vector<Triple> triples;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      for (std::size_t k = j + 1; k < pts.size(); ++k) triples.push_back({pts[i], pts[j], pts[k]});
  return chord_slope_monotone_check(f, triples);
}

SlopeFraction lipschitz_bound(const FunctionDef& f, const Rational& a, const Rational& b, const Bracket& bracket) {
  if (!(bracket.outer_lo < bracket.inner_lo && bracket.inner_lo <= a && a < b && b <= bracket.inner_hi &&
        bracket.inner_hi < bracket.outer_hi))
    throw Error(ErrorCode::BracketViolation, "need a' < a'' <= a < b <= b' < b''");
  const SlopeFraction alpha = chord_slope(f, ExactReal(bracket.outer_lo), ExactReal(bracket.inner_lo));
  const SlopeFraction beta = chord_slope(f, ExactReal(bracket.inner_hi), ExactReal(bracket.outer_hi));
  return max(alpha.abs(), beta.abs());
}

}  // namespace ngd
