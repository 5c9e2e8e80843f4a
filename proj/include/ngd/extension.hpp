#pragma once

// Certified enclosures of the continuous extension g of f restricted to
// I ∩ Q.
//
// For f Jensen convex on the rationals, a bracket a' < a'' <= a < b <= b' < b''
// of rationals around [a, b] gives the Lipschitz modulus L of lipschitz_bound,
// valid for rational points of [a, b].  The extension at x is then the limit of
// f(x_r) over rationals x_r -> x, and every round
//
//     |g(x) - f(x_r)| <= L |x - x_r|
//
// yields an enclosure.  extend_eval runs a fixed schedule of rounds with a
// shrinking radius and intersects them; the schedule does not depend on the
// requested width, so tighter requests return nested enclosures.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "ngd/analysis.hpp"
#include "ngd/domain.hpp"
#include "ngd/exact_real.hpp"
#include "ngd/funcspec.hpp"

namespace ngd {

enum class Approximant {
  LowDyadic,   // shortest dyadic in the round's rational window, rounded up from below
  HighDyadic,  // shortest dyadic, rounded down from above
};

struct BracketPolicy {
  unsigned margin_divisor = 8;  // bracket margin = room to the nearest endpoint / divisor; >= 8
  Approximant approximant = Approximant::LowDyadic;
  unsigned refine_shift = 1;  // the radius shrinks by 2^refine_shift per round

  friend bool operator==(const BracketPolicy&, const BracketPolicy&) = default;
};

// The compact [a, b] around a probe, its bracket and the resulting modulus.
struct BracketChoice {
  Rational a;
  Rational b;
  Bracket bracket;
  SlopeFraction modulus;
  Rational modulus_bound;  // rational upper bound of modulus
};

struct ExtensionRound {
  Rational approximant;  // x_r
  Rational radius;       // bound on |x - x_r|
  ExactReal value;       // f(x_r)
  Enclosure estimate;    // this round's enclosure
  Enclosure running;     // intersection of all rounds so far
};

class ExtensionHandle {
 public:
  explicit ExtensionHandle(FunctionDef source, BracketPolicy policy = {});

  const FunctionDef& source() const { return source_; }
  const Interval& interval() const { return source_.interval; }
  const BracketPolicy& policy() const { return policy_; }

  // Enclosure of width <= eps containing g(x).  Rational x gives [f(x), f(x)]
  // when f(x) is rational.  Throws OutOfDomain, BracketUnavailable, or
  // InconsistentEnclosure when two rounds are disjoint (f is not Jensen convex
  // on the rationals).
  Enclosure extend_eval(const ExactReal& x, const Rational& eps) const;
  // g(x) exactly, available at rational x where it equals f(x).
  std::optional<ExactReal> exact_at(const ExactReal& x) const;

  BracketChoice bracket_for(const ExactReal& x) const;
  // The rounds extend_eval runs for (x, eps); x irrational.
  std::vector<ExtensionRound> trace(const ExactReal& x, const Rational& eps) const;

 private:
  struct Chain {
    BracketChoice choice;
    Enclosure start;
    std::vector<ExtensionRound> rounds;
  };

  Chain make_chain(const ExactReal& x) const;
  void extend_chain(const ExactReal& x, Chain& chain) const;

  FunctionDef source_;
  BracketPolicy policy_;
  mutable std::unique_ptr<std::mutex> mutex_;
  mutable std::map<ExactReal, Chain, StructuralLess> cache_;
};

// f(t x + (1-t) y) <= t f(x) + (1-t) f(y) over rational grid pairs and
// t in {1/4, 1/3, 1/2, 2/3, 3/4}, exactly.
CheckResult convexity_certificate(const ExtensionHandle& h, const SampleGrid& grid);

struct TransferReport {
  Rational v;
  CheckResult monotone;  // x -> (Δ_v f)(x) nondecreasing along the sorted grid
  std::size_t rational_points = 0;
  bool rational_equal = true;  // Δ_v f == Δ_v g exactly at rational points
  std::size_t irrational_probes = 0;
  Rational worst_bound;     // certified upper bound of |Δ_v f - Δ_v g| at the probes
  bool within_tolerance = true;  // every probe bound <= 2 eps, decided exactly
  bool passed() const { return monotone.passed() && rational_equal && within_tolerance; }
};

// Grid points must lie in I ∩ (I - v); throws OutOfDomain otherwise.
TransferReport difference_transfer_check(const FunctionDef& f, const ExtensionHandle& h, const Rational& v,
                                         const SampleGrid& grid, const Rational& eps);

}  // namespace ngd
