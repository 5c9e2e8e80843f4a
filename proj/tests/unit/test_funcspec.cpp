#include <doctest.h>

#include "ngd/error.hpp"
#include "ngd/funcspec.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace ngd;
using namespace ngd::testing;

TEST_CASE("evaluate Decomposable examples") {
  CHECK(evaluate(square(), ExactReal::sqrt(2)) == ExactReal(2));

  // (1 + sqrt2)^2 = 3 + 2 sqrt2, plus A(1 + sqrt2) = 0 + 3
  const FunctionDef f = decomposable("(-10, 10)", q(1), ExactReal(), {{2, ExactReal(3)}});
  CHECK(quadratic(q(1), ExactReal(), ExactReal(), lit("1 + sqrt(2)")) == lit("3 + 2*sqrt(2)"));
  CHECK(evaluate(f, lit("1 + sqrt(2)")) == lit("6 + 2*sqrt(2)"));
}

TEST_CASE("evaluate AbsAdditive example") {
  // A(2 - sqrt2) = 2 * 0 - 1 = -1
  CHECK(evaluate(abs_additive_fixture(), lit("2 - sqrt(2)")) == ExactReal(1));
  CHECK(evaluate(abs_additive_fixture(), lit("5/2")) == ExactReal(0));
}

TEST_CASE("evaluate hinges and spikes") {
  FunctionDef f = square("(-10, 10)");
  auto& g = std::get<Decomposable>(f.variant).convex;
  g.hinges = {{ExactReal(1), q(2)}, {ExactReal(3), q(1, 2)}};
  CHECK(evaluate(f, ExactReal(0)) == ExactReal(0));
  CHECK(evaluate(f, ExactReal(2)) == ExactReal(4 + 2));
  CHECK(evaluate(f, ExactReal(4)) == ExactReal(q(16 + 6) + q(1, 2)));
  // sqrt2 > 1: 2 + 2 (sqrt2 - 1)
  CHECK(evaluate(f, ExactReal::sqrt(2)) == lit("2*sqrt(2)"));

  const FunctionDef s = spiked(square(), ExactReal(1), q(5));
  CHECK(evaluate(s, ExactReal(1)) == ExactReal(6));
  CHECK(evaluate(s, ExactReal(2)) == ExactReal(4));
}

TEST_CASE("evaluate errors") {
  try {
    evaluate(square("(0, 1)"), ExactReal(1));
    FAIL("expected OutOfDomain");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfDomain);
  }
  try {
    evaluate(square("(0, 10)"), ExactReal::sqrt(3));
    FAIL("expected OutOfSpan");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::OutOfSpan);
  }
}

TEST_CASE("additive map is Q-linear on samples") {
  const AdditiveMap A({{1, ExactReal(q(1, 2))}, {2, lit("3 + sqrt(3)")}, {3, lit("-2")}});
  SpanGen gen(3, {1, 2, 3});
  for (int i = 0; i < 200; ++i) {
    const ExactReal x = gen.element(), y = gen.element();
    const Rational r = gen.rational();
    CHECK(A(x + y) == A(x) + A(y));
    CHECK(A(x * r) == A(x) * r);
  }
  CHECK_FALSE(A.vanishes_on_rationals());
  CHECK(AdditiveMap({{2, ExactReal(1)}}).vanishes_on_rationals());
}

TEST_CASE("generated convex parts are midpoint convex") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GeneratorProfile p;
    p.basis = {2, 3};
    const FunctionDef f = generate(seed, p);
    const auto& d = std::get<Decomposable>(f.variant);
    const SampleGrid grid = make_grid(f.interval, 6, 6, f.basis, seed);
    const auto pts = grid.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const ExactReal mid = (pts[i] + pts[j]) * q(1, 2);
        CHECK(compare(d.convex(mid) * q(2), d.convex(pts[i]) + d.convex(pts[j])) <= 0);
        CHECK(evaluate(f, pts[i]) == d.convex(pts[i]) + d.additive(pts[i]));
      }
    }
  }
}

TEST_CASE("generate is deterministic and valid") {
  for (VariantKind kind : {VariantKind::Decomposable, VariantKind::AbsAdditive, VariantKind::Spiked}) {
    GeneratorProfile p;
    p.kind = kind;
    p.basis = {2, 5};
    p.rational_coefficient = true;
    const FunctionDef a = generate(99, p);
    const FunctionDef b = generate(99, p);
    CHECK(a == b);
    CHECK(a.kind() == kind);
    CHECK_NOTHROW(a.validate());
    CHECK(instance_to_json(a).dump() == instance_to_json(b).dump());
  }
  GeneratorProfile p;
  p.rational_coefficient = true;
  CHECK_FALSE(std::get<Decomposable>(generate(1, p).variant).additive.vanishes_on_rationals());
  p.rational_coefficient = false;
  CHECK(std::get<Decomposable>(generate(1, p).variant).additive.vanishes_on_rationals());
  p.basis = {2, 3, 5, 6, 7};
  CHECK_THROWS_AS(generate(1, p), Error);
}

TEST_CASE("AbsAdditive generation keeps A vanishing on Q") {
  GeneratorProfile p;
  p.kind = VariantKind::AbsAdditive;
  p.basis = {3};
  p.rational_coefficient = true;
  const FunctionDef f = generate(5, p);
  const auto& a = std::get<AbsAdditive>(f.variant).additive;
  CHECK(a.vanishes_on_rationals());
  CHECK_FALSE(a.coefficient(3).is_zero());
}

TEST_CASE("instance JSON round trip is bit-exact") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    GeneratorProfile p;
    p.kind = static_cast<VariantKind>(seed % 3);
    p.basis = {2, 3};
    p.rational_coefficient = seed % 2 == 0;
    const FunctionDef f = generate(seed, p);
    const std::string text = instance_to_json(f).dump(2);
    const FunctionDef back = instance_from_json(nlohmann::json::parse(text));
    CHECK(back == f);
    CHECK(instance_to_json(back).dump(2) == text);
  }
}

TEST_CASE("instance validation rejects broken documents") {
  auto doc = instance_to_json(square());
  doc["convex"]["quad"] = "-1";
  CHECK_THROWS_AS(instance_from_json(doc), Error);

  doc = instance_to_json(square());
  doc["basis"] = {4};
  CHECK_THROWS_AS(instance_from_json(doc), Error);

  doc = instance_to_json(square());
  doc["convex"]["slope"] = "sqrt(7)";
  CHECK_THROWS_AS(instance_from_json(doc), Error);

  doc = instance_to_json(square());
  doc["convex"]["hinges"] = {{{"knot", "2"}, {"weight", "1"}}, {{"knot", "1"}, {"weight", "1"}}};
  CHECK_THROWS_AS(instance_from_json(doc), Error);

  doc = instance_to_json(square());
  doc.erase("interval");
  CHECK_THROWS_AS(instance_from_json(doc), Error);
}
