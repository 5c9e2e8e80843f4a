#pragma once

// Test-only helpers: an MPFR evaluation of ExactReal values with directed
// rounding, independent of the Heron enclosures under test, and seeded
// generators for random span elements.

#include <mpfr.h>

#include <cstdint>
#include <random>
#include <vector>

#include "ngd/exact_real.hpp"

namespace ngd::testing {

// RAII wrapper around an mpfr_t.
class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

 private:
  mpfr_t v_;
};

// Directed-rounding bounds [lo, hi] on the value of x at `prec` bits.
// 1100 bits is about 330 decimal digits.
// comfortably above 200 decimal digits
constexpr mpfr_prec_t kOracleBits = 1100;

struct MpfrBounds {
  explicit MpfrBounds(mpfr_prec_t prec = kOracleBits) : lo(prec), hi(prec) {}
  Mpfr lo;
  Mpfr hi;
};

inline void evaluate_bounds(const ExactReal& x, MpfrBounds& out, mpfr_prec_t prec = kOracleBits) {
  mpfr_set_zero(out.lo.get(), 1);
  mpfr_set_zero(out.hi.get(), 1);
  Mpfr root_lo(prec), root_hi(prec), term_lo(prec), term_hi(prec);
  for (const auto& t : x.terms()) {
    mpfr_set_ui(root_lo.get(), t.radical, MPFR_RNDD);
    mpfr_set_ui(root_hi.get(), t.radical, MPFR_RNDU);
    mpfr_sqrt(root_lo.get(), root_lo.get(), MPFR_RNDD);
    mpfr_sqrt(root_hi.get(), root_hi.get(), MPFR_RNDU);
    if (t.coeff >= 0) {
      mpfr_mul_q(term_lo.get(), root_lo.get(), t.coeff.get_mpq_t(), MPFR_RNDD);
      mpfr_mul_q(term_hi.get(), root_hi.get(), t.coeff.get_mpq_t(), MPFR_RNDU);
    } else {
      mpfr_mul_q(term_lo.get(), root_hi.get(), t.coeff.get_mpq_t(), MPFR_RNDD);
      mpfr_mul_q(term_hi.get(), root_lo.get(), t.coeff.get_mpq_t(), MPFR_RNDU);
    }
    mpfr_add(out.lo.get(), out.lo.get(), term_lo.get(), MPFR_RNDD);
    mpfr_add(out.hi.get(), out.hi.get(), term_hi.get(), MPFR_RNDU);
  }
}

// High-precision value lies inside the enclosure: [vlo, vhi] ⊆ [e.lo, e.hi].
inline bool mpfr_inside(const ExactReal& x, const Enclosure& e) {
  // MPFR cannot hold most rationals exactly, and the exact answer is at hand
  if (x.is_rational()) return e.contains(x.as_rational());
  MpfrBounds b;
  evaluate_bounds(x, b);
  return mpfr_cmp_q(b.lo.get(), e.lo.get_mpq_t()) >= 0 && mpfr_cmp_q(b.hi.get(), e.hi.get_mpq_t()) <= 0;
}

// Sign of a - b from the MPFR bounds; 0 when undecided at this precision.
inline int mpfr_sign(const ExactReal& x) {
  MpfrBounds b;
  evaluate_bounds(x, b);
  if (mpfr_sgn(b.lo.get()) > 0) return 1;
  if (mpfr_sgn(b.hi.get()) < 0) return -1;
  return 0;
}

inline double to_double(const ExactReal& x) {
  MpfrBounds b(128);
  evaluate_bounds(x, b, 128);
  return mpfr_get_d(b.lo.get(), MPFR_RNDN);
}

class SpanGen {
 public:
  explicit SpanGen(std::uint64_t seed, std::vector<Radical> radicals = {1, 2, 3, 5, 6, 7, 10})
      : rng_(seed), radicals_(std::move(radicals)) {}

  Rational rational(long range = 9) {
    const long num = static_cast<long>(rng_() % (2 * range + 1)) - range;
    const long den = static_cast<long>(rng_() % 8) + 1;
    return make_rational(num, den);
  }

  ExactReal element(std::size_t max_terms = 4) {
    ExactReal x;
    const std::size_t n = rng_() % (max_terms + 1);
    for (std::size_t i = 0; i < n; ++i) {
      const Radical m = radicals_[rng_() % radicals_.size()];
      x += ExactReal::sqrt_term(rational(), m);
    }
    return x;
  }

  Rational positive_eps() {
    // 10^-k for k in [1, 30]
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, 1 + rng_() % 30);
    return Rational(Integer(1), p);
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
  std::vector<Radical> radicals_;
};

// Exact value of a * x^2 + b * x + c.
inline ExactReal quadratic(const Rational& a, const ExactReal& b, const ExactReal& c, const ExactReal& x) {
  return (x * x) * a + b * x + c;
}

}  // namespace ngd::testing
