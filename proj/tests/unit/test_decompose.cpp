#include <doctest.h>

#include "ngd/decompose.hpp"
#include "ngd/error.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace ngd;
using namespace ngd::testing;

namespace {

const Rational kEps = make_rational(1, 100000000);

SampleGrid default_grid(const FunctionDef& f, std::uint64_t seed, std::size_t n = 16, std::size_t k = 8) {
  return make_grid(f.interval, n, k, f.basis, seed);
}

std::string failures(const VerificationReport& v) {
  std::string out;
  for (const auto& f : v.failures) out += f + "\n";
  return out;
}

}  // namespace

TEST_CASE("recovery points sit inside the interval") {
  for (const char* dom : {"(0, 10)", "(-10, 10)", "(-1/1000, 1/1000)", "(sqrt(2), 3)", "(-inf, 0)", "(-inf, inf)"}) {
    for (Radical m : {2, 3, 5, 7}) {
      const Interval I = interval(dom);
      const RecoveryPoint rp = recovery_point(I, m);
      CHECK(rp.m == m);
      CHECK(rp.q > 0);
      CHECK(contains(I, rp.point()));
      CHECK_FALSE(rp.point().is_rational());
    }
  }
}

TEST_CASE("x^2 plus A(sqrt2) = 3 on (0, 10)") {
  const FunctionDef f = decomposable("(0, 10)", q(1), ExactReal(), {{2, ExactReal(3)}});
  const DecompositionResult r = decompose(f, kEps, default_grid(f, 1));
  REQUIRE(r.additive.count(2));
  const Enclosure c = r.additive.at(2);
  CHECK(c.width() <= kEps);
  CHECK(c.contains(Rational(3)));
  CHECK(r.rational_coefficient == 0);
  CHECK(r.constant == 0);
  CHECK(r.residuals.ok());
  CHECK(r.residuals.phi_zero_on_rationals);
  CHECK(r.residuals.jensen_worst_bound <= 3 * kEps);
  CHECK(verify_against_truth(r, f).passed());
}

TEST_CASE("purely convex instance recovers A = 0") {
  const FunctionDef f = generate(4, GeneratorProfile{});
  FunctionDef g = f;
  std::get<Decomposable>(g.variant).additive = AdditiveMap();
  const DecompositionResult r = decompose(g, kEps, default_grid(g, 4));
  for (const auto& [m, e] : r.additive) CHECK(e.contains(Rational(0)));
  CHECK(verify_against_truth(r, g).passed());
}

TEST_CASE("c1 = 1/2 is absorbed by the convex part") {
  const FunctionDef f =
      decomposable("(-5, 5)", q(1), ExactReal(), {{1, ExactReal(q(1, 2))}, {2, ExactReal(3)}});
  const DecompositionResult r = decompose(f, kEps, default_grid(f, 2));
  // A - x/2 is the part vanishing on Q: its value at sqrt2 is 3 - sqrt2/2
  CHECK(encloses(r.additive.at(2), lit("3 - 1/2*sqrt(2)")));
  CHECK_FALSE(r.additive.at(2).contains(Rational(3)));
  CHECK(*normalized_additive_truth(f, 2) == lit("3 - 1/2*sqrt(2)"));
  CHECK(r.rational_coefficient == 0);
  REQUIRE(!r.convex_probes.empty());
  for (const ProbeEnclosure& p : r.convex_probes) {
    const ExactReal truth = p.x * p.x + p.x * q(1, 2);
    CHECK(mpfr_inside(truth, p.g));
  }
  const VerificationReport v = verify_against_truth(r, f);
  INFO(failures(v));
  CHECK(v.passed());
}

TEST_CASE("residual vanishes exactly on rationals") {
  const FunctionDef f = generate(7, GeneratorProfile{});
  const ExtensionHandle h(f);
  const ResidualOracle phi(f, h);
  for (const Rational& x : default_grid(f, 7).rationals) {
    const Enclosure e = phi.phi(ExactReal(x), q(1, 10));
    CHECK(e.lo == 0);
    CHECK(e.hi == 0);
  }
}

TEST_CASE("generated round trips verify") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    GeneratorProfile p;
    p.basis = seed % 2 ? std::vector<Radical>{2, 3, 5} : std::vector<Radical>{7};
    p.rational_coefficient = seed % 3 == 0;
    const FunctionDef f = generate(seed, p);
    const DecompositionResult r = decompose(f, kEps, default_grid(f, seed));
    const VerificationReport v = verify_against_truth(r, f);
    INFO(failures(v));
    CHECK(v.passed());
    CHECK(v.checks > 0);
    CHECK(r.residuals.transfer.size() == 2);
  }
}

TEST_CASE("corrupted result is flagged at the shifted entry") {
  GeneratorProfile p;
  p.basis = {2, 3};
  const FunctionDef f = generate(11, p);
  DecompositionResult r = decompose(f, kEps, default_grid(f, 11));
  REQUIRE(verify_against_truth(r, f).passed());
  r.additive[3].lo += 1;
  r.additive[3].hi += 1;
  const VerificationReport v = verify_against_truth(r, f);
  REQUIRE(v.failures.size() == 1);
  CHECK(v.failures[0].rfind("c_3 ", 0) == 0);
}

TEST_CASE("verification rejects tampered metadata") {
  const FunctionDef f = generate(12, GeneratorProfile{});
  DecompositionResult r = decompose(f, kEps, default_grid(f, 12));
  DecompositionResult bad = r;
  bad.rational_coefficient = q(1, 2);
  CHECK_FALSE(verify_against_truth(bad, f).passed());
  bad = r;
  bad.convex_probes.front().g.lo += 1;
  bad.convex_probes.front().g.hi += 1;
  CHECK(verify_against_truth(bad, f).failures.size() == 1);
  CHECK_FALSE(verify_against_truth(r, abs_additive_fixture()).passed());
}

TEST_CASE("refining never widens the additive enclosures") {
  for (std::uint64_t seed = 20; seed < 24; ++seed) {
    GeneratorProfile p;
    p.basis = {2, 3};
    const FunctionDef f = generate(seed, p);
    const DecompositionResult coarse = decompose(f, q(1, 10000), default_grid(f, seed, 8, 4));
    const DecompositionResult fine = decompose(f, q(1, 20000), default_grid(f, seed, 16, 8));
    for (const auto& [m, e] : coarse.additive) CHECK(fine.additive.at(m).width() <= e.width());
  }
}

TEST_CASE("uniqueness passes and nests") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    GeneratorProfile p;
    p.basis = {2, 3};
    p.rational_coefficient = seed == 1;
    const FunctionDef f = generate(seed, p);
    const UniquenessReport loose = uniqueness_check(f, q(1, 10000), seed, seed + 1000);
    const UniquenessReport tight = uniqueness_check(f, kEps, seed, seed + 1000);
    CHECK(loose.passed());
    CHECK(tight.passed());
    for (const auto& [m, e] : tight.additive_intersection) {
      const Enclosure& outer = loose.additive_intersection.at(m);
      CHECK((outer.lo <= e.lo && e.hi <= outer.hi));
    }
  }
  CHECK(alternate_policy() != BracketPolicy{});
}

TEST_CASE("AbsAdditive residual fails the Jensen equation") {
  const FunctionDef f = abs_additive_fixture();
  DecomposeOptions opt;
  // (x + u, x + v) from the Wright certificate at (0, sqrt2, 2 - sqrt2)
  opt.jensen_probe_pairs = {{ExactReal::sqrt(2), lit("2 - sqrt(2)")}};
  const DecompositionResult r = decompose(f, kEps, default_grid(f, 3), opt);
  CHECK(r.residuals.phi_zero_on_rationals);
  CHECK_FALSE(r.residuals.jensen_ok);
  REQUIRE(!r.residuals.jensen_failures.empty());
  const JensenResidual& j = r.residuals.jensen_failures.front();
  CHECK(j.x == ExactReal::sqrt(2));
  // |Phi(1) - (Phi(sqrt2) + Phi(2 - sqrt2)) / 2| = 1
  CHECK(j.bound >= q(1) - 3 * kEps);
  CHECK(j.bound > r.residuals.jensen_tolerance);
  CHECK_FALSE(r.residuals.ok());
}

TEST_CASE("Spiked instances abort before extension work") {
  const FunctionDef f = spiked(square(), ExactReal(q(1, 2)), q(1));
  SampleGrid grid;
  grid.interval = f.interval;
  grid.rationals = {q(0), q(1, 2), q(1)};
  try {
    decompose(f, kEps, grid);
    FAIL("expected NotJensenConvex");
  } catch (const NotJensenConvexError& e) {
    CHECK(e.code() == ErrorCode::NotJensenConvex);
    CHECK(e.certificate().kind == ViolationKind::Jensen);
    CHECK(verify_certificate(f, e.certificate()).valid());
  }
}

TEST_CASE("generated Spiked instances never decompose") {
  // either the grid gate catches the spike, or an extension round lands on it
  // and the rounds disagree
  std::size_t gated = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GeneratorProfile p;
    p.kind = VariantKind::Spiked;
    const FunctionDef f = generate(seed, p);
    try {
      decompose(f, q(1, 1000), default_grid(f, seed));
      FAIL("decompose accepted a Spiked instance");
    } catch (const NotJensenConvexError& e) {
      CHECK(verify_certificate(f, e.certificate()).valid());
      ++gated;
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InconsistentEnclosure);
    }
  }
  CHECK(gated == 10);
}
