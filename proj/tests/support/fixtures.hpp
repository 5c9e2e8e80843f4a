#pragma once

#include <string>

#include "ngd/funcspec.hpp"

namespace ngd::testing {

inline ExactReal lit(const std::string& s) { return ExactReal::parse(s); }
inline Rational q(long num, long den = 1) { return make_rational(num, den); }

inline Interval interval(const std::string& s) { return Interval::parse(s); }

// quad*x^2 + slope*x + A with A(sqrt m) given, as a Decomposable instance.
inline FunctionDef decomposable(const std::string& domain, Rational quad, ExactReal slope,
                                std::map<Radical, ExactReal> additive, std::vector<Radical> basis = {2}) {
  FunctionDef f;
  ConvexSpec g;
  g.quad = quad;
  g.slope = std::move(slope);
  f.variant = Decomposable{g, AdditiveMap(std::move(additive))};
  f.interval = interval(domain);
  f.basis = std::move(basis);
  return f;
}

inline FunctionDef square(const std::string& domain = "(-10, 10)", std::vector<Radical> basis = {2}) {
  return decomposable(domain, q(1), ExactReal(), {}, std::move(basis));
}

// |A| with A(sqrt 2) = 1, A vanishing on Q.
inline FunctionDef abs_additive_fixture() {
  FunctionDef f;
  f.variant = AbsAdditive{AdditiveMap({{2, ExactReal(1)}})};
  f.interval = interval("(-10, 10)");
  f.basis = {2};
  return f;
}

inline FunctionDef spiked(FunctionDef base, ExactReal at, Rational lift) {
  FunctionDef f;
  f.interval = base.interval;
  f.basis = base.basis;
  f.variant = Spiked{std::make_shared<const FunctionDef>(std::move(base)), std::move(at), std::move(lift)};
  return f;
}

}  // namespace ngd::testing
