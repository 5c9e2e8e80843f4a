#include "ngd/domain.hpp"

#include <algorithm>
#include <random>

#include "ngd/error.hpp"

namespace ngd {

namespace {

void sort_exact(std::vector<ExactReal>& xs) {
  std::sort(xs.begin(), xs.end(), [](const ExactReal& a, const ExactReal& b) { return less(a, b); });
}

std::string endpoint_str(const std::optional<ExactReal>& e, bool upper) {
  if (!e) return upper ? "inf" : "-inf";
  return e->str();
}

std::optional<ExactReal> parse_endpoint(std::string_view text, bool upper) {
  std::string s(text);
  s.erase(0, s.find_first_not_of(" \t\n"));
  s.erase(s.find_last_not_of(" \t\n") + 1);
  if (s == "inf" || s == "+inf") {
    if (!upper) throw Error(ErrorCode::Parse, "lower endpoint cannot be +inf");
    return std::nullopt;
  }
  if (s == "-inf") {
    if (upper) throw Error(ErrorCode::Parse, "upper endpoint cannot be -inf");
    return std::nullopt;
  }
  return ExactReal::parse(s);
}

// Rational strictly inside (e, e + room) for a lower endpoint e, or
// (e - room, e) for an upper one; exact when e is rational.
Rational rational_inside(const ExactReal& e, const Rational& room, bool lower) {
  if (e.is_rational()) return e.as_rational();
  const Enclosure enc = enclose(e, room / 16);
  const unsigned bits = bits_for(room / 16);
  return lower ? ceil_dyadic(enc.hi, bits) : floor_dyadic(enc.lo, bits);
}

// Base-2 radical inverse of k >= 1 as an exact rational in (0, 1).
Rational van_der_corput(std::uint64_t k) {
  Integer num = 0;
  Integer den = 1;
  while (k > 0) {
    num = num * 2 + (k & 1U);
    den *= 2;
    k >>= 1;
  }
  Rational q(num, den);
  q.canonicalize();
  return q;
}

}  // namespace

Interval Interval::open(ExactReal lo, ExactReal hi) {
  if (compare(lo, hi) >= 0)
    throw Error(ErrorCode::EmptyDomain, "interval (" + lo.str() + ", " + hi.str() + ") is empty");
  return Interval{std::move(lo), std::move(hi)};
}

bool Interval::contains(const ExactReal& x) const {
  if (lo && compare(*lo, x) >= 0) return false;
  if (hi && compare(x, *hi) >= 0) return false;
  return true;
}

std::string Interval::str() const {
  return "(" + endpoint_str(lo, false) + ", " + endpoint_str(hi, true) + ")";
}

Interval Interval::parse(std::string_view literal) {
  std::string s(literal);
  s.erase(0, s.find_first_not_of(" \t\n"));
  s.erase(s.find_last_not_of(" \t\n") + 1);
  if (s.size() < 2 || s.front() != '(' || s.back() != ')')
    throw Error(ErrorCode::Parse, "interval literal must look like (a, b): '" + s + "'");
  const std::string body = s.substr(1, s.size() - 2);
  const auto comma = body.find(',');
  if (comma == std::string::npos || body.find(',', comma + 1) != std::string::npos)
    throw Error(ErrorCode::Parse, "interval literal needs exactly one comma: '" + s + "'");
  Interval out{parse_endpoint(body.substr(0, comma), false), parse_endpoint(body.substr(comma + 1), true)};
  if (out.bounded() && compare(*out.lo, *out.hi) >= 0)
    throw Error(ErrorCode::EmptyDomain, "interval " + s + " is empty");
  return out;
}

Interval shifted_intersection(const Interval& interval, const ExactReal& w) {
  Interval out = interval;
  if (sign(w) >= 0) {
    if (out.hi) out.hi = *out.hi - w;
  } else {
    if (out.lo) out.lo = *out.lo - w;
  }
  if (out.bounded() && compare(*out.lo, *out.hi) >= 0)
    throw Error(ErrorCode::EmptyDomain,
                "shift by " + w.str() + " leaves nothing of " + interval.str());
  return out;
}

Enclosure sampling_window(const Interval& interval) {
  if (!interval.lo && !interval.hi) return {Rational(-8), Rational(8)};
  if (interval.bounded()) {
    const Enclosure span = enclose(*interval.hi - *interval.lo, Rational(1, 1024));
    Rational room = span.lo > 0 ? span.lo : enclose(*interval.hi - *interval.lo, Rational(1, 1 << 30)).lo;
    room /= 4;
    Rational lo = rational_inside(*interval.lo, room, true);
    Rational hi = rational_inside(*interval.hi, room, false);
    return {lo, hi};
  }
  if (interval.lo) {
    Rational lo = rational_inside(*interval.lo, Rational(1), true);
    return {lo, lo + 16};
  }
  Rational hi = rational_inside(*interval.hi, Rational(1), false);
  return {hi - 16, hi};
}

std::vector<ExactReal> SampleGrid::points() const {
  std::vector<ExactReal> out;
  out.reserve(size());
  for (const Rational& q : rationals) out.emplace_back(q);
  for (const ExactReal& p : probes) out.push_back(p);
  sort_exact(out);
  return out;
}

bool SampleGrid::within(const Interval& other) const {
  return std::all_of(rationals.begin(), rationals.end(),
                     [&](const Rational& q) { return other.contains(ExactReal(q)); }) &&
         std::all_of(probes.begin(), probes.end(), [&](const ExactReal& p) { return other.contains(p); });
}

SampleGrid make_grid(const Interval& interval, std::size_t n_rational, std::size_t n_irrational,
                     std::span<const Radical> basis, std::uint64_t seed) {
  SampleGrid grid;
  grid.interval = interval;
  grid.seed = seed;
  const Enclosure window = sampling_window(interval);
  const Rational span = window.width();

  for (std::size_t k = 1; grid.rationals.size() < n_rational; ++k) {
    Rational q = window.lo + span * van_der_corput(k);
    q.canonicalize();
    if (interval.contains(ExactReal(q))) grid.rationals.push_back(q);
    if (k > 64 * (n_rational + 1)) break;
  }
  std::sort(grid.rationals.begin(), grid.rationals.end());

  std::vector<Radical> radicals;
  for (Radical m : basis)
    if (m != 1) radicals.push_back(m);
  if (!radicals.empty()) {
    std::mt19937_64 rng(seed);
    const unsigned resolution = bits_for(span / 1024);
    std::size_t attempts = 0;
    while (grid.probes.size() < n_irrational && attempts < 64 * (n_irrational + 1)) {
      ++attempts;
      ExactReal irrational;
      while (irrational.is_zero()) {
        for (Radical m : radicals) {
          const long num = static_cast<long>(rng() % 9) - 4;
          const long den = 1L << (rng() % 3);
          irrational += ExactReal::sqrt_term(make_rational(num, den), m);
        }
      }
      const Rational t = make_rational(static_cast<long>(rng() % 255) + 1, 256);
      const Enclosure mid = enclose(irrational, Rational(1, 1 << 20));
      const Rational offset = floor_dyadic(window.lo + span * t - (mid.lo + mid.hi) / 2, resolution);
      ExactReal probe = ExactReal(offset) + irrational;
      if (!interval.contains(probe)) continue;
      if (std::find(grid.probes.begin(), grid.probes.end(), probe) != grid.probes.end()) continue;
      grid.probes.push_back(std::move(probe));
    }
    sort_exact(grid.probes);
  }
  return grid;
}

SampleGrid restrict_grid(const SampleGrid& grid, const Interval& interval) {
  SampleGrid out;
  out.interval = interval;
  out.seed = grid.seed;
  for (const Rational& q : grid.rationals)
    if (interval.contains(ExactReal(q))) out.rationals.push_back(q);
  for (const ExactReal& p : grid.probes)
    if (interval.contains(p)) out.probes.push_back(p);
  return out;
}

}  // namespace ngd
