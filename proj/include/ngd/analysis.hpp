#pragma once

// Difference operators, exact Wright/Jensen checkers with violation
// certificates, chord slopes and bracket Lipschitz moduli.
//
// Checkers come in two builds with identical results: the OpenMP kernels in
// namespace ngd and the serial reference kernels in ngd::serial.  Both report
// the first violation in lexicographic order of the enumeration, so the
// parallel sweep reduces to the same certificate and the same `checked`
// count as the serial one.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ngd/domain.hpp"
#include "ngd/exact_real.hpp"
#include "ngd/funcspec.hpp"

namespace ngd {

// (Δ_w f)(x) = f(x + w) - f(x)
ExactReal delta(const FunctionDef& f, const ExactReal& w, const ExactReal& x);
// (Δ_u Δ_v f)(x) = f(x+u+v) - f(x+u) - f(x+v) + f(x); u, v > 0.
ExactReal double_delta(const FunctionDef& f, const ExactReal& u, const ExactReal& v, const ExactReal& x);

// num / den, never divided out.
struct SlopeFraction {
  ExactReal num;
  ExactReal den;  // nonzero

  SlopeFraction abs() const;
  // Rational upper bound on the value (exact when num and den are rational).
  Rational upper_bound() const;
  std::string str() const;
};

std::strong_ordering compare(const SlopeFraction& a, const SlopeFraction& b);
const SlopeFraction& max(const SlopeFraction& a, const SlopeFraction& b);

enum class ViolationKind { Wright, Jensen, Monotone };

std::string to_string(ViolationKind kind);
ViolationKind parse_violation_kind(std::string_view name);

// Witness of a violated inequality lhs <= rhs.
//
//   Wright             points x, u, v   lhs = f(x+u) + f(x+v)        rhs = f(x) + f(x+u+v)
//   Jensen             points x, y, t   lhs = f(t x + (1-t) y)       rhs = t f(x) + (1-t) f(y)
//   Monotone/chord     points x, u, y   lhs = (f(u)-f(x)) (y-u)      rhs = (f(y)-f(u)) (u-x)
//   Monotone/difference points x, y, v  lhs = (Δ_v f)(x)             rhs = (Δ_v f)(y),  x < y
struct ViolationCertificate {
  ViolationKind kind = ViolationKind::Wright;
  std::string form;  // "chord" or "difference" for Monotone, empty otherwise
  std::vector<std::pair<std::string, ExactReal>> points;
  ExactReal lhs;
  ExactReal rhs;

  const ExactReal& point(std::string_view name) const;
  ExactReal value() const { return rhs - lhs; }  // negative for a genuine violation
  friend bool operator==(const ViolationCertificate&, const ViolationCertificate&) = default;
};

struct CertificateCheck {
  bool reproduced = false;  // recomputed sides equal the recorded ones bit-exactly
  bool violated = false;    // recomputed lhs > rhs
  std::string detail;
  bool valid() const { return reproduced && violated; }
};

// Re-evaluates the certificate's inequality at its witness points.
CertificateCheck verify_certificate(const FunctionDef& f, const ViolationCertificate& cert);

struct CheckResult {
  std::optional<ViolationCertificate> violation;
  std::uint64_t checked = 0;  // tuples evaluated, up to and including a violation
  bool passed() const { return !violation.has_value(); }
};

struct StepProfile {
  std::vector<ExactReal> explicit_steps;  // tried first, in the given order
  bool grid_differences = true;           // then positive differences of grid points
  std::size_t max_grid_steps = 0;         // 0 keeps all of them
};

// Explicit steps followed by the ascending distinct grid differences; throws
// NonPositiveStep on an explicit step <= 0.
std::vector<ExactReal> wright_steps(const SampleGrid& grid, const StepProfile& profile);

// Every admissible (x, u, v): x from the sorted grid points, u and v from
// wright_steps, x + u + v inside the domain; each double difference is
// compared with zero exactly.
CheckResult wright_check(const FunctionDef& f, const SampleGrid& grid, const StepProfile& steps);
// Every grid pair x < y, midpoint inequality checked exactly.
CheckResult jensen_check(const FunctionDef& f, const SampleGrid& grid);

namespace serial {
CheckResult wright_check(const FunctionDef& f, const SampleGrid& grid, const StepProfile& steps);
CheckResult jensen_check(const FunctionDef& f, const SampleGrid& grid);
}  // namespace serial

// (f(y) - f(x)) / (y - x); throws DegeneratePair when x == y.
SlopeFraction chord_slope(const FunctionDef& f, const ExactReal& x, const ExactReal& y);

using Triple = std::array<ExactReal, 3>;

// slope(x, u) <= slope(u, y) for each triple x < u < y.
CheckResult chord_slope_monotone_check(const FunctionDef& f, const std::vector<Triple>& triples);
// All increasing triples of the sorted grid points.
CheckResult chord_slope_monotone_check(const FunctionDef& f, const SampleGrid& grid);

// The outer rational points a' < a'' <= a < b <= b' < b'' around [a, b].
struct Bracket {
  Rational outer_lo;  // a'
  Rational inner_lo;  // a''
  Rational inner_hi;  // b'
  Rational outer_hi;  // b''
};

// L = max(|slope(a', a'')|, |slope(b', b'')|).  For f Jensen convex on the
// rationals, |f(x) - f(y)| <= L |x - y| for rational x, y in [a, b].
// Throws BracketViolation when the ordering fails.
SlopeFraction lipschitz_bound(const FunctionDef& f, const Rational& a, const Rational& b, const Bracket& bracket);

}  // namespace ngd
