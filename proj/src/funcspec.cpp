#include "ngd/funcspec.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "ngd/error.hpp"

namespace ngd {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& why) { throw Error(ErrorCode::InvalidInstance, why); }

bool radicals_within(const ExactReal& x, const std::vector<Radical>& basis) {
  return std::all_of(x.terms().begin(), x.terms().end(), [&](const ExactReal::Term& t) {
    return t.radical == 1 || std::binary_search(basis.begin(), basis.end(), t.radical);
  });
}

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t below(std::uint64_t n) { return rng_() % n; }
  long in_range(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
  // num / 2^k with num in [-range, range], k in {0, 1, 2}
  Rational rational(long range) { return make_rational(in_range(-range, range), 1L << below(3)); }
  Rational nonzero_rational(long range) {
    Rational q;
    while (q == 0) q = rational(range);
    return q;
  }
  Rational positive_rational(long range) {
    return make_rational(in_range(1, std::max(1L, 2 * range)), 1L << below(3));
  }

 private:
  std::mt19937_64 rng_;
};

json additive_to_json(const AdditiveMap& a) {
  json out = json::object();
  for (const auto& [m, c] : a.coeffs()) out[std::to_string(m)] = c.str();
  return out;
}

AdditiveMap additive_from_json(const json& doc) {
  AdditiveMap a;
  for (const auto& [key, value] : doc.items()) {
    Radical m = 0;
    try {
      m = std::stoull(key);
    } catch (const std::exception&) {
      invalid("additive key '" + key + "' is not a radical index");
    }
    if (!is_squarefree(m)) invalid("additive key " + key + " is not squarefree");
    a.set(m, ExactReal::parse(value.get<std::string>()));
  }
  return a;
}

json convex_to_json(const ConvexSpec& g) {
  json hinges = json::array();
  for (const Hinge& h : g.hinges) hinges.push_back({{"knot", h.knot.str()}, {"weight", format_rational(h.weight)}});
  return {{"quad", format_rational(g.quad)},
          {"slope", g.slope.str()},
          {"offset", g.offset.str()},
          {"hinges", hinges}};
}

ConvexSpec convex_from_json(const json& doc) {
  ConvexSpec g;
  g.quad = ExactReal::parse(doc.value("quad", "0")).as_rational();
  g.slope = ExactReal::parse(doc.value("slope", "0"));
  g.offset = ExactReal::parse(doc.value("offset", "0"));
  if (doc.contains("hinges")) {
    for (const json& h : doc.at("hinges"))
      g.hinges.push_back({ExactReal::parse(h.at("knot").get<std::string>()),
                          ExactReal::parse(h.at("weight").get<std::string>()).as_rational()});
  }
  return g;
}

}  // namespace

ExactReal ConvexSpec::operator()(const ExactReal& x) const {
  ExactReal value = (x * x) * quad + slope * x + offset;
  for (const Hinge& h : hinges) {
    ExactReal excess = x - h.knot;
    if (sign(excess) > 0) value += excess * h.weight;
  }
  return value;
}

void ConvexSpec::validate() const {
  if (quad < 0) invalid("quadratic coefficient must be >= 0");
  for (std::size_t i = 0; i < hinges.size(); ++i) {
    if (hinges[i].weight <= 0) invalid("hinge weight must be > 0");
    if (i > 0 && compare(hinges[i - 1].knot, hinges[i].knot) >= 0) invalid("hinge knots must increase");
  }
}

AdditiveMap::AdditiveMap(std::map<Radical, ExactReal> coeffs) {
  for (auto& [m, c] : coeffs) set(m, std::move(c));
}

void AdditiveMap::set(Radical m, ExactReal value) {
  if (value.is_zero()) {
    coeffs_.erase(m);
  } else {
    coeffs_[m] = std::move(value);
  }
}

ExactReal AdditiveMap::coefficient(Radical m) const {
  auto it = coeffs_.find(m);
  return it == coeffs_.end() ? ExactReal() : it->second;
}

ExactReal AdditiveMap::operator()(const ExactReal& x) const {
  ExactReal out;
  for (const auto& t : x.terms()) {
    auto it = coeffs_.find(t.radical);
    if (it != coeffs_.end()) out += it->second * t.coeff;
  }
  return out;
}

bool operator==(const Spiked& a, const Spiked& b) {
  const bool bases = (a.base == b.base) || (a.base && b.base && *a.base == *b.base);
  return bases && a.at == b.at && a.lift == b.lift;
}

bool FunctionDef::in_span(const ExactReal& x) const { return radicals_within(x, basis); }

void FunctionDef::validate() const {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i] == 1 || !is_squarefree(basis[i])) invalid("basis entries must be squarefree and > 1");
    if (i > 0 && basis[i - 1] >= basis[i]) invalid("basis must be strictly increasing");
  }
  auto require = [&](const ExactReal& x, const char* what) {
    if (!radicals_within(x, basis)) invalid(std::string(what) + " " + x.str() + " leaves the basis span");
  };
  auto check_additive = [&](const AdditiveMap& a) {
    for (const auto& [m, c] : a.coeffs()) {
      if (m != 1 && !std::binary_search(basis.begin(), basis.end(), m))
        invalid("additive coefficient for radical " + std::to_string(m) + " outside the basis");
      require(c, "additive value");
    }
  };
  if (interval.lo) require(*interval.lo, "interval endpoint");
  if (interval.hi) require(*interval.hi, "interval endpoint");
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Decomposable>) {
          v.convex.validate();
          require(v.convex.slope, "slope");
          require(v.convex.offset, "offset");
          for (const Hinge& h : v.convex.hinges) require(h.knot, "knot");
          check_additive(v.additive);
        } else if constexpr (std::is_same_v<T, AbsAdditive>) {
          check_additive(v.additive);
        } else {
          if (!v.base || v.base->kind() == VariantKind::Spiked) invalid("spiked base must be a plain instance");
          if (v.lift <= 0) invalid("spike lift must be > 0");
          require(v.at, "spike point");
          v.base->validate();
        }
      },
      variant);
}

ExactReal evaluate(const FunctionDef& f, const ExactReal& x) {
  if (!f.interval.contains(x)) throw Error(ErrorCode::OutOfDomain, x.str() + " not in " + f.interval.str());
  if (!f.in_span(x)) throw Error(ErrorCode::OutOfSpan, x.str() + " not in the span of the basis");
  return std::visit(
      [&](const auto& v) -> ExactReal {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Decomposable>) {
          return v.convex(x) + v.additive(x);
        } else if constexpr (std::is_same_v<T, AbsAdditive>) {
          return abs(v.additive(x));
        } else {
          ExactReal value = evaluate(*v.base, x);
          if (x == v.at) value += ExactReal(v.lift);
          return value;
        }
      },
      f.variant);
}

std::optional<ExactReal> rational_extension_truth(const FunctionDef& f, const ExactReal& x) {
  const auto* d = std::get_if<Decomposable>(&f.variant);
  if (d == nullptr) return std::nullopt;
  return d->convex(x) + d->additive.coefficient(1) * x;
}

std::optional<ExactReal> normalized_additive_truth(const FunctionDef& f, Radical m) {
  const auto* d = std::get_if<Decomposable>(&f.variant);
  if (d == nullptr) return std::nullopt;
  return d->additive.coefficient(m) - d->additive.coefficient(1) * ExactReal::sqrt(m);
}

std::string to_string(VariantKind kind) {
  switch (kind) {
    case VariantKind::Decomposable: return "Decomposable";
    case VariantKind::AbsAdditive: return "AbsAdditive";
    case VariantKind::Spiked: return "Spiked";
  }
  return "?";
}

VariantKind parse_variant(std::string_view name) {
  if (name == "Decomposable") return VariantKind::Decomposable;
  if (name == "AbsAdditive") return VariantKind::AbsAdditive;
  if (name == "Spiked") return VariantKind::Spiked;
  throw Error(ErrorCode::Parse, "unknown variant '" + std::string(name) + "'");
}

FunctionDef generate(std::uint64_t seed, const GeneratorProfile& profile) {
  if (profile.coeff_range <= 0) invalid("coefficient range must be positive");
  if (profile.basis.size() > 4) invalid("basis size is limited to 4");
  Draw draw(seed);

  FunctionDef f;
  f.basis = profile.basis;
  std::sort(f.basis.begin(), f.basis.end());
  f.basis.erase(std::unique(f.basis.begin(), f.basis.end()), f.basis.end());
  std::erase(f.basis, Radical{1});
  if (profile.interval) {
    f.interval = *profile.interval;
  } else {
    const Rational lo = make_rational(draw.in_range(-24, 4), 2);
    const Rational hi = lo + make_rational(draw.in_range(4, 24), 2);
    f.interval = Interval::open(ExactReal(lo), ExactReal(hi));
  }

  auto additive = [&](bool allow_rational_coefficient) {
    AdditiveMap a;
    for (Radical m : f.basis) {
      ExactReal c = ExactReal(draw.nonzero_rational(profile.coeff_range));
      if (profile.radical_additive_values && draw.below(2) == 0) {
        const Radical k = f.basis[draw.below(f.basis.size())];
        c += ExactReal::sqrt_term(draw.rational(profile.coeff_range), k);
      }
      a.set(m, c);
    }
    if (allow_rational_coefficient && profile.rational_coefficient)
      a.set(1, ExactReal(draw.nonzero_rational(profile.coeff_range)));
    return a;
  };

  auto convex = [&] {
    ConvexSpec g;
    g.quad = make_rational(draw.in_range(0, 4), 1L << draw.below(3));
    g.slope = ExactReal(draw.rational(profile.coeff_range));
    g.offset = ExactReal(draw.rational(profile.coeff_range));
    const Enclosure window = sampling_window(f.interval);
    const unsigned count = profile.max_hinges == 0 ? 0 : static_cast<unsigned>(draw.below(profile.max_hinges + 1));
    std::set<Rational> knots;
    for (unsigned i = 0; i < count; ++i) {
      knots.insert(window.lo + window.width() * make_rational(draw.in_range(1, 63), 64));
    }
    for (const Rational& k : knots) g.hinges.push_back({ExactReal(k), draw.positive_rational(profile.coeff_range)});
    return g;
  };

  switch (profile.kind) {
    case VariantKind::Decomposable:
      f.variant = Decomposable{convex(), additive(true)};
      break;
    case VariantKind::AbsAdditive:
      if (f.basis.empty()) invalid("AbsAdditive needs a nonempty basis");
      f.variant = AbsAdditive{additive(false)};
      break;
    case VariantKind::Spiked: {
      FunctionDef base = f;
      base.variant = Decomposable{convex(), additive(true)};
      const Enclosure window = sampling_window(f.interval);
      Spiked s;
      // spike at a window sixteenth, lifted past the midpoint gap of its two
      // neighbouring sixteenths so 16-point rational grids always see it
      const Rational step = window.width() / 16;
      const Rational at = window.lo + step * draw.in_range(2, 14);
      const ExactReal gap = (evaluate(base, ExactReal(at - step)) + evaluate(base, ExactReal(at + step))) *
                                make_rational(1, 2) - evaluate(base, ExactReal(at));
      s.at = ExactReal(at);
      s.lift = gap.as_rational() + draw.positive_rational(profile.coeff_range);
      s.base = std::make_shared<const FunctionDef>(std::move(base));
      f.variant = std::move(s);
      break;
    }
  }
  f.validate();
  return f;
}

json instance_to_json(const FunctionDef& f) {
  json doc;
  doc["variant"] = to_string(f.kind());
  doc["interval"] = f.interval.str();
  doc["basis"] = f.basis;
  auto put_plain = [&](const FunctionDef& plain) {
    if (const auto* d = std::get_if<Decomposable>(&plain.variant)) {
      doc["convex"] = convex_to_json(d->convex);
      doc["additive"] = additive_to_json(d->additive);
    } else if (const auto* a = std::get_if<AbsAdditive>(&plain.variant)) {
      doc["additive"] = additive_to_json(a->additive);
    }
  };
  if (const auto* s = std::get_if<Spiked>(&f.variant)) {
    doc["base_variant"] = to_string(s->base->kind());
    put_plain(*s->base);
    doc["spike"] = {{"at", s->at.str()}, {"lift", format_rational(s->lift)}};
  } else {
    put_plain(f);
  }
  return doc;
}

FunctionDef instance_from_json(const json& doc) {
  try {
    FunctionDef f;
    f.interval = Interval::parse(doc.at("interval").get<std::string>());
    for (const json& m : doc.at("basis")) f.basis.push_back(m.get<Radical>());
    auto plain = [&](VariantKind kind) {
      FunctionDef p;
      p.interval = f.interval;
      p.basis = f.basis;
      const AdditiveMap a = doc.contains("additive") ? additive_from_json(doc.at("additive")) : AdditiveMap{};
      if (kind == VariantKind::Decomposable) {
        p.variant = Decomposable{doc.contains("convex") ? convex_from_json(doc.at("convex")) : ConvexSpec{}, a};
      } else if (kind == VariantKind::AbsAdditive) {
        p.variant = AbsAdditive{a};
      } else {
        invalid("spiked base must be Decomposable or AbsAdditive");
      }
      return p;
    };
    const VariantKind kind = parse_variant(doc.at("variant").get<std::string>());
    if (kind == VariantKind::Spiked) {
      Spiked s;
      s.base = std::make_shared<const FunctionDef>(
          plain(parse_variant(doc.value("base_variant", std::string("Decomposable")))));
      s.at = ExactReal::parse(doc.at("spike").at("at").get<std::string>());
      s.lift = ExactReal::parse(doc.at("spike").at("lift").get<std::string>()).as_rational();
      f.variant = std::move(s);
    } else {
      f.variant = plain(kind).variant;
    }
    f.validate();
    return f;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("instance document: ") + e.what());
  }
}

}  // namespace ngd
