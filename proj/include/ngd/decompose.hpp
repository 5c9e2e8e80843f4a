#pragma once

// Recovery of the decomposition f = g + A with A additive and vanishing on Q.
//
// g is represented by an ExtensionHandle over f restricted to the rationals.
// The residual Φ = f - g is only ever probed.  For each basis radical m the
// value c_m = A(sqrt m) is read off at one point p = r + q sqrt(m):
//
//     Φ(p) = A(r) + q c_m = q c_m     (A vanishes on Q)
//
// and the remaining structure (Φ = 0 on the rationals, the Jensen equation
// for Φ, Δ_v f = Δ_v g for rational v) is verified on samples.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ngd/domain.hpp"
#include "ngd/error.hpp"
#include "ngd/exact_real.hpp"
#include "ngd/extension.hpp"
#include "ngd/funcspec.hpp"

namespace ngd {

class ResidualOracle {
 public:
  ResidualOracle(const FunctionDef& f, const ExtensionHandle& h) : f_(f), h_(h) {}

  // Φ(x) within width eps; exactly [0, 0] at rational x.
  Enclosure phi(const ExactReal& x, const Rational& eps) const;

 private:
  const FunctionDef& f_;
  const ExtensionHandle& h_;
};

struct RecoveryPoint {
  Radical m = 0;
  Rational r;
  Rational q;  // > 0
  ExactReal point() const;
};

// q as large as fits, r a dyadic centring r + q sqrt(m) in the interval.
RecoveryPoint recovery_point(const Interval& interval, Radical m);

struct ProbeEnclosure {
  ExactReal x;
  Enclosure g;
};

struct JensenResidual {
  ExactReal x;
  ExactReal y;
  Rational bound;  // certified upper bound of |Φ((x+y)/2) - (Φ(x)+Φ(y))/2|
};

struct ResidualReport {
  std::size_t rational_points = 0;
  bool phi_zero_on_rationals = true;
  std::size_t jensen_pairs = 0;
  Rational jensen_worst_bound;
  Rational jensen_tolerance;  // 3 eps
  bool jensen_ok = true;
  std::vector<JensenResidual> jensen_failures;
  std::vector<TransferReport> transfer;
  bool transfer_ok = true;
  bool ok() const { return phi_zero_on_rationals && jensen_ok && transfer_ok; }
};

struct DecomposeOptions {
  BracketPolicy policy;
  std::uint64_t seed = 0;
  std::size_t jensen_pairs = 24;
  std::size_t transfer_steps = 2;
  // Extra Jensen-equation probe pairs, checked before the sampled ones.
  std::vector<std::pair<ExactReal, ExactReal>> jensen_probe_pairs;
};

struct DecompositionResult {
  std::map<Radical, Enclosure> additive;  // c_m for m in the basis
  Rational rational_coefficient;          // A(1), exactly 0
  Rational constant;                      // c in Φ = A + c, exactly 0
  ResidualReport residuals;
  std::vector<ProbeEnclosure> convex_probes;  // g at the grid's irrational probes
  Rational eps;
  std::uint64_t seed = 0;
  std::size_t grid_rationals = 0;
  std::size_t grid_probes = 0;
};

// Throws NotJensenConvexError when f fails jensen_check on the grid's rational
// points.
DecompositionResult decompose(const FunctionDef& f, const Rational& eps, const SampleGrid& grid,
                              const DecomposeOptions& options = {});

struct VerificationReport {
  std::vector<std::string> failures;
  std::size_t checks = 0;
  bool passed() const { return failures.empty(); }
};

// Ground-truth comparison for Decomposable instances.
VerificationReport verify_against_truth(const DecompositionResult& result, const FunctionDef& instance);

struct GridSizes {
  std::size_t rationals = 16;
  std::size_t probes = 8;
};

struct UniquenessReport {
  std::vector<std::string> discrepancies;
  std::map<Radical, Enclosure> additive_intersection;
  std::vector<ProbeEnclosure> probe_intersection;
  bool passed() const { return discrepancies.empty(); }
};

// Two decompositions from independent grids (seeds s1, s2) and different
// bracket policies; passes iff all recovered c_m and all g probes intersect.
UniquenessReport uniqueness_check(const FunctionDef& f, const Rational& eps, std::uint64_t s1, std::uint64_t s2,
                                  GridSizes sizes = {});

// Bracket policy paired with seed s2 in uniqueness_check.
BracketPolicy alternate_policy();

class NotJensenConvexError : public Error {
 public:
  explicit NotJensenConvexError(ViolationCertificate cert)
      : Error(ErrorCode::NotJensenConvex, "midpoint inequality fails on the rational grid"), cert_(std::move(cert)) {}
  const ViolationCertificate& certificate() const { return cert_; }

 private:
  ViolationCertificate cert_;
};

}  // namespace ngd
