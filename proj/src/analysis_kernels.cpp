// Grid sweeps behind wright_check and jensen_check.  Each sweep is split by
// its outermost grid index; a scan of one index stops at its first violation.
// The serial build walks the indices in order, the OpenMP build scans them
// concurrently and keeps the violation with the smallest index.

#include <atomic>
#include <limits>
#include <map>

#include "ngd/analysis.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ngd {

namespace {

class ValueCache {
 public:
  explicit ValueCache(const FunctionDef& f) : f_(f) {}

  const ExactReal& operator()(const ExactReal& x) {
    auto it = values_.find(x);
    if (it == values_.end()) it = values_.emplace(x, evaluate(f_, x)).first;
    return it->second;
  }

 private:
  const FunctionDef& f_;
  std::map<ExactReal, ExactReal, StructuralLess> values_;
};

struct Scan {
  std::uint64_t checked = 0;
  std::optional<ViolationCertificate> violation;
};

struct WrightSweep {
  const FunctionDef& f;
  std::vector<ExactReal> points;
  std::vector<ExactReal> steps;

  std::size_t size() const { return points.size(); }

  Scan scan(std::size_t i, ValueCache& value) const {
    Scan out;
    const ExactReal& x = points[i];
    for (const ExactReal& u : steps) {
      const ExactReal xu = x + u;
      if (!f.interval.contains(xu)) continue;
      for (const ExactReal& v : steps) {
        const ExactReal far = xu + v;
        if (!f.interval.contains(far)) continue;
        ++out.checked;
        const ExactReal xv = x + v;
        ExactReal lhs = value(xu) + value(xv);
        ExactReal rhs = value(x) + value(far);
        if (compare(lhs, rhs) > 0) {
          out.violation = ViolationCertificate{
              ViolationKind::Wright, "", {{"x", x}, {"u", u}, {"v", v}}, std::move(lhs), std::move(rhs)};
          return out;
        }
      }
    }
    return out;
  }
};

struct JensenSweep {
  const FunctionDef& f;
  std::vector<ExactReal> points;

  std::size_t size() const { return points.size(); }

  Scan scan(std::size_t i, ValueCache& value) const {
    Scan out;
    const Rational half(1, 2);
    const ExactReal& x = points[i];
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const ExactReal& y = points[j];
      ++out.checked;
      ExactReal lhs = value((x + y) * half);
      ExactReal rhs = (value(x) + value(y)) * half;
      if (compare(lhs, rhs) > 0) {
        out.violation = ViolationCertificate{
            ViolationKind::Jensen, "", {{"x", x}, {"y", y}, {"t", ExactReal(half)}}, std::move(lhs), std::move(rhs)};
        return out;
      }
    }
    return out;
  }
};

template <class Sweep>
CheckResult run_serial(const Sweep& sweep) {
  CheckResult out;
  ValueCache cache(sweep.f);
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    Scan s = sweep.scan(i, cache);
    out.checked += s.checked;
    if (s.violation) {
      out.violation = std::move(s.violation);
      break;
    }
  }
  return out;
}

template <class Sweep>
CheckResult run_parallel(const Sweep& sweep) {
  const auto n = static_cast<std::int64_t>(sweep.size());
  std::vector<Scan> scans(sweep.size());
  std::atomic<std::int64_t> first(std::numeric_limits<std::int64_t>::max());

#pragma omp parallel
  {
    ValueCache cache(sweep.f);
#pragma omp for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
      if (i > first.load(std::memory_order_relaxed)) continue;
      scans[static_cast<std::size_t>(i)] = sweep.scan(static_cast<std::size_t>(i), cache);
      if (scans[static_cast<std::size_t>(i)].violation) {
        std::int64_t seen = first.load();
        while (i < seen && !first.compare_exchange_weak(seen, i)) {
        }
      }
    }
  }

  CheckResult out;
  for (std::size_t i = 0; i < scans.size(); ++i) {
    out.checked += scans[i].checked;
    if (scans[i].violation) {
      out.violation = std::move(scans[i].violation);
      break;
    }
  }
  return out;
}

}  // namespace

namespace serial {

CheckResult wright_check(const FunctionDef& f, const SampleGrid& grid, const StepProfile& steps) {
  return run_serial(WrightSweep{f, grid.points(), wright_steps(grid, steps)});
}

CheckResult jensen_check(const FunctionDef& f, const SampleGrid& grid) {
  return run_serial(JensenSweep{f, grid.points()});
}

}  // namespace serial

CheckResult wright_check(const FunctionDef& f, const SampleGrid& grid, const StepProfile& steps) {
  return run_parallel(WrightSweep{f, grid.points(), wright_steps(grid, steps)});
}

CheckResult jensen_check(const FunctionDef& f, const SampleGrid& grid) {
  return run_parallel(JensenSweep{f, grid.points()});
}

}  // namespace ngd
