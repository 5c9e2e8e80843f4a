#pragma once

// Exactly evaluable function instances.
//
//   Decomposable   f = g + A, g from the convex catalog, A additive
//   AbsAdditive    f = |A|, Jensen convex but not Wright convex
//   Spiked         f = base + lift * [x == at], breaks Jensen convexity

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ngd/domain.hpp"
#include "ngd/exact_real.hpp"

namespace ngd {

struct Hinge {
  ExactReal knot;
  Rational weight;  // > 0
  friend bool operator==(const Hinge&, const Hinge&) = default;
};

// g(x) = quad*x^2 + slope*x + offset + sum_i weight_i * max(0, x - knot_i)
struct ConvexSpec {
  Rational quad;
  ExactReal slope;
  ExactReal offset;
  std::vector<Hinge> hinges;

  ExactReal operator()(const ExactReal& x) const;
  // Throws InvalidInstance unless quad >= 0, weights > 0, knots increasing.
  void validate() const;
  friend bool operator==(const ConvexSpec&, const ConvexSpec&) = default;
};

// Q-linear map fixed by its values on the radicals: A(sum q_m sqrt m) = sum q_m c_m.
class AdditiveMap {
 public:
  AdditiveMap() = default;
  explicit AdditiveMap(std::map<Radical, ExactReal> coeffs);

  // Radicals without a declared value map to 0.
  ExactReal operator()(const ExactReal& x) const;
  ExactReal coefficient(Radical m) const;
  void set(Radical m, ExactReal value);
  const std::map<Radical, ExactReal>& coeffs() const { return coeffs_; }
  bool vanishes_on_rationals() const { return coefficient(1).is_zero(); }
  friend bool operator==(const AdditiveMap&, const AdditiveMap&) = default;

 private:
  std::map<Radical, ExactReal> coeffs_;  // zero values are not stored
};

enum class VariantKind { Decomposable, AbsAdditive, Spiked };

struct FunctionDef;

struct Decomposable {
  ConvexSpec convex;
  AdditiveMap additive;
  friend bool operator==(const Decomposable&, const Decomposable&) = default;
};

struct AbsAdditive {
  AdditiveMap additive;
  friend bool operator==(const AbsAdditive&, const AbsAdditive&) = default;
};

struct Spiked {
  std::shared_ptr<const FunctionDef> base;
  ExactReal at;
  Rational lift;  // > 0
  friend bool operator==(const Spiked& a, const Spiked& b);
};

struct FunctionDef {
  std::variant<Decomposable, AbsAdditive, Spiked> variant;
  Interval interval;
  std::vector<Radical> basis;  // sorted, squarefree, excludes 1

  VariantKind kind() const { return static_cast<VariantKind>(variant.index()); }
  bool in_span(const ExactReal& x) const;
  // Throws InvalidInstance when a field invariant is broken.
  void validate() const;
  friend bool operator==(const FunctionDef&, const FunctionDef&) = default;
};

// Throws OutOfDomain / OutOfSpan.
ExactReal evaluate(const FunctionDef& f, const ExactReal& x);

// The unique continuous extension of f restricted to I ∩ Q, when known in
// closed form: g + A(1)*x for Decomposable instances.
std::optional<ExactReal> rational_extension_truth(const FunctionDef& f, const ExactReal& x);
// The matching additive part A - A(1)*x vanishes on Q; its value at sqrt(m)
// is A(sqrt m) - A(1) sqrt(m).
std::optional<ExactReal> normalized_additive_truth(const FunctionDef& f, Radical m);

struct GeneratorProfile {
  VariantKind kind = VariantKind::Decomposable;
  std::vector<Radical> basis{2};
  unsigned max_hinges = 8;
  long coeff_range = 4;          // numerators drawn from [-range, range]
  bool rational_coefficient = false;  // draw A(1) != 0
  bool radical_additive_values = true;  // allow A(sqrt m) with radical parts
  std::optional<Interval> interval;
};

FunctionDef generate(std::uint64_t seed, const GeneratorProfile& profile);

std::string to_string(VariantKind kind);
VariantKind parse_variant(std::string_view name);

nlohmann::json instance_to_json(const FunctionDef& f);
FunctionDef instance_from_json(const nlohmann::json& doc);

}  // namespace ngd
