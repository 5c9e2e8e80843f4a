#pragma once

// Exact arithmetic in the Q-vector space spanned by square roots of
// squarefree positive integers.
//
// An ExactReal is a finite sum  q_1 + q_2*sqrt(2) + q_3*sqrt(3) + ...  stored
// as a sorted list of (radical index, nonzero rational coefficient) pairs.
// Square roots of distinct squarefree integers are linearly independent over
// Q, so the canonical term list determines the value: structural equality is
// value equality.  Order comparisons are decided by refining rational
// enclosures of the difference until zero is excluded.

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace ngd {

using Rational = mpq_class;
using Integer = mpz_class;

// Radical indices are squarefree integers in [1, 2^63 - 1]; 1 is the unit.
using Radical = std::uint64_t;

bool is_squarefree(Radical n);
// n = square * core with core squarefree.
std::pair<Radical, Radical> squarefree_split(Radical n);

Rational make_rational(long num, long den = 1);
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& q);

// Closed rational interval [lo, hi].
struct Enclosure {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  bool contains(const Rational& q) const { return lo <= q && q <= hi; }
  bool contains(const Enclosure& inner) const { return lo <= inner.lo && inner.hi <= hi; }
  bool overlaps(const Enclosure& other) const { return lo <= other.hi && other.lo <= hi; }
  bool degenerate() const { return lo == hi; }
  friend bool operator==(const Enclosure&, const Enclosure&) = default;
};

Enclosure intersect(const Enclosure& a, const Enclosure& b);  // requires overlap
Enclosure operator+(const Enclosure& a, const Enclosure& b);
Enclosure operator-(const Enclosure& a, const Enclosure& b);
Enclosure scale(const Enclosure& a, const Rational& q);

// Largest/smallest multiple of 2^-bits not above/below q.
Rational floor_dyadic(const Rational& q, unsigned bits);
Rational ceil_dyadic(const Rational& q, unsigned bits);
// Smallest bit count (>= 0) such that 2^-bits <= q; q > 0.
unsigned bits_for(const Rational& q);
// Outward rounding of both endpoints to multiples of 2^-bits.
Enclosure round_outward(const Enclosure& e, unsigned bits);

class ExactReal {
 public:
  struct Term {
    Radical radical;
    Rational coeff;
    friend bool operator==(const Term&, const Term&) = default;
  };

  ExactReal() = default;
  ExactReal(const Rational& q);  // NOLINT(google-explicit-constructor)
  ExactReal(long n);             // NOLINT(google-explicit-constructor)

  // coeff * sqrt(radical); the radical is reduced to squarefree form.
  static ExactReal sqrt_term(const Rational& coeff, Radical radical);
  static ExactReal sqrt(Radical radical) { return sqrt_term(Rational(1), radical); }
  static ExactReal parse(std::string_view literal);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  // Coefficient of sqrt(radical) (of the unit for radical == 1).
  Rational coefficient(Radical radical) const;
  Rational rational_part() const { return coefficient(1); }
  // Requires is_rational().
  const Rational& as_rational() const;
  bool canonical() const;

  std::string str() const;

  ExactReal operator-() const;
  ExactReal& operator+=(const ExactReal& other);
  ExactReal& operator-=(const ExactReal& other);
  ExactReal& operator*=(const Rational& q);

  friend ExactReal operator+(ExactReal a, const ExactReal& b) { return a += b; }
  friend ExactReal operator-(ExactReal a, const ExactReal& b) { return a -= b; }
  friend ExactReal operator*(ExactReal a, const Rational& q) { return a *= q; }
  friend ExactReal operator*(const Rational& q, ExactReal a) { return a *= q; }
  friend ExactReal operator*(const ExactReal& a, const ExactReal& b);

  friend bool operator==(const ExactReal&, const ExactReal&) = default;

 private:
  explicit ExactReal(std::vector<Term> terms) : terms_(std::move(terms)) {}
  void drop_zeros();

  std::vector<Term> terms_;  // sorted by radical, no zero coefficients
};

ExactReal add(const ExactReal& a, const ExactReal& b);
ExactReal mul(const ExactReal& a, const ExactReal& b);

// Rational bracket of sqrt(m) after `step` Heron iterations (step 0 is
// [floor(sqrt m), floor(sqrt m) + 1]).  Brackets are nested in `step`.
Enclosure sqrt_bracket(Radical m, unsigned step);

// lo <= x <= hi and hi - lo <= eps; eps > 0.  Deterministic in (x, eps);
// a smaller eps yields a nested enclosure.
Enclosure enclose(const ExactReal& x, const Rational& eps);

// Exact comparison.  Throws ResolutionExceeded if the difference is nonzero
// but not separated from zero at width 10^-200.
std::strong_ordering compare(const ExactReal& a, const ExactReal& b);
int sign(const ExactReal& x);
ExactReal abs(const ExactReal& x);

inline bool less(const ExactReal& a, const ExactReal& b) { return compare(a, b) < 0; }

// Structural (not numeric) total order on canonical forms; for map keys.
struct StructuralLess {
  bool operator()(const ExactReal& a, const ExactReal& b) const;
};

// Exact containment test of an exact value in a rational enclosure.
bool encloses(const Enclosure& e, const ExactReal& x);

std::string format_enclosure(const Enclosure& e);

}  // namespace ngd
