#pragma once

// Open intervals with exact endpoints and deterministic sample grids.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ngd/exact_real.hpp"

namespace ngd {

// Open interval (lo, hi); a missing endpoint is infinite.
struct Interval {
  std::optional<ExactReal> lo;
  std::optional<ExactReal> hi;

  static Interval open(ExactReal lo, ExactReal hi);
  static Interval real_line() { return {}; }

  bool bounded() const { return lo.has_value() && hi.has_value(); }
  bool contains(const ExactReal& x) const;
  std::string str() const;
  static Interval parse(std::string_view literal);

  friend bool operator==(const Interval&, const Interval&) = default;
};

inline bool contains(const Interval& interval, const ExactReal& x) { return interval.contains(x); }

// I ∩ (I - w); throws EmptyDomain when nothing is left.
Interval shifted_intersection(const Interval& interval, const ExactReal& w);

// A rational window [lo, hi] used to place samples.  Its interior lies in the
// interval; rational finite ends are kept as they are (so only the open
// window is safe to evaluate on), irrational ones are pulled strictly inside,
// infinite ends are replaced by a window of width 16.
Enclosure sampling_window(const Interval& interval);

struct SampleGrid {
  Interval interval;
  std::vector<Rational> rationals;  // sorted ascending
  std::vector<ExactReal> probes;    // irrational points, sorted ascending
  std::uint64_t seed = 0;

  // Rationals and probes merged in ascending numeric order.
  std::vector<ExactReal> points() const;
  std::size_t size() const { return rationals.size() + probes.size(); }
  bool within(const Interval& other) const;
};

// Rational points: the first n_rational terms of the base-2 van der Corput
// sequence mapped into the sampling window, so denominators are powers of two
// times the window scale.  Irrational probes: random small rational
// combinations over `basis`, shifted into the interval and re-checked.
SampleGrid make_grid(const Interval& interval, std::size_t n_rational, std::size_t n_irrational,
                     std::span<const Radical> basis, std::uint64_t seed);

// Keeps only the points that lie in `interval`.
SampleGrid restrict_grid(const SampleGrid& grid, const Interval& interval);

}  // namespace ngd
