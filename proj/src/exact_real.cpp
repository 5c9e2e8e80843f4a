#include "ngd/exact_real.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <limits>
#include <map>
#include <mutex>
#include <shared_mutex>

#include "ngd/error.hpp"

namespace ngd {

namespace {

constexpr Radical kMaxRadical = static_cast<Radical>(std::numeric_limits<std::int64_t>::max());

Radical checked_product(Radical a, Radical b) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  if (p > kMaxRadical) throw Error(ErrorCode::Overflow, "radical index exceeds 2^63-1");
  return static_cast<Radical>(p);
}

Radical gcd(Radical a, Radical b) {
  while (b != 0) {
    const Radical t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// 10^-200, the finest width compare() will refine to.
const Rational& resolution_floor() {
  static const Rational floor = [] {
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, 200);
    return Rational(Integer(1), p);
  }();
  return floor;
}

class SqrtTable {
 public:
  Enclosure get(Radical m, unsigned step) {
    {
      std::shared_lock lock(mutex_);
      auto it = rows_.find(m);
      if (it != rows_.end() && step < it->second.size()) return it->second[step];
    }
    std::unique_lock lock(mutex_);
    auto& row = rows_[m];
    if (row.empty()) {
      Integer root;
      mpz_sqrt(root.get_mpz_t(), Integer(std::to_string(m)).get_mpz_t());
      row.push_back({Rational(root), Rational(root + 1)});
    }
    const Rational radicand{Integer(std::to_string(m))};
    while (row.size() <= step) {
      // Heron: the upper iterate decreases towards sqrt(m) and m/upper
      // increases towards it.
      const Enclosure& prev = row.back();
      Rational upper = (prev.hi + radicand / prev.hi) / 2;
      upper.canonicalize();
      Rational lower = radicand / upper;
      lower.canonicalize();
      if (lower < prev.lo) lower = prev.lo;
      row.push_back({lower, upper});
    }
    return row[step];
  }

 private:
  std::shared_mutex mutex_;
  std::map<Radical, std::deque<Enclosure>> rows_;
};

SqrtTable& sqrt_table() {
  static SqrtTable table;
  return table;
}

class LiteralParser {
 public:
  explicit LiteralParser(std::string_view text) : text_(text) {}

  ExactReal parse() {
    ExactReal result;
    skip_ws();
    if (done()) fail("empty literal");
    result += signed_term();
    for (;;) {
      skip_ws();
      if (done()) break;
      const char op = text_[pos_];
      if (op != '+' && op != '-') fail("expected '+' or '-'");
      ++pos_;
      ExactReal term = signed_term();
      if (op == '+') {
        result += term;
      } else {
        result -= term;
      }
    }
    return result;
  }

 private:
  ExactReal signed_term() {
    bool negative = false;
    for (;;) {
      skip_ws();
      if (!done() && (text_[pos_] == '+' || text_[pos_] == '-')) {
        negative ^= text_[pos_] == '-';
        ++pos_;
      } else {
        break;
      }
    }
    ExactReal term = unsigned_term();
    return negative ? -term : term;
  }

  ExactReal unsigned_term() {
    skip_ws();
    if (starts_with("sqrt")) return ExactReal::sqrt(radical());
    Rational coeff = rational();
    skip_ws();
    if (!done() && text_[pos_] == '*') {
      ++pos_;
      skip_ws();
      if (!starts_with("sqrt")) fail("expected sqrt(...) after '*'");
      return ExactReal::sqrt_term(coeff, radical());
    }
    return ExactReal(coeff);
  }

  Radical radical() {
    pos_ += 4;
    skip_ws();
    expect('(');
    skip_ws();
    const std::string digits = digit_run();
    skip_ws();
    expect(')');
    const Integer value(digits, 10);
    if (value > Integer(std::to_string(kMaxRadical))) fail("radicand too large");
    return static_cast<Radical>(std::stoull(digits));
  }

  Rational rational() {
    Integer num(digit_run(), 10);
    Integer den(1);
    skip_ws();
    if (!done() && text_[pos_] == '/') {
      ++pos_;
      skip_ws();
      den = Integer(digit_run(), 10);
      if (den == 0) fail("zero denominator");
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
  }

  std::string digit_run() {
    const std::size_t start = pos_;
    while (!done() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return std::string(text_.substr(start, pos_ - start));
  }

  bool starts_with(std::string_view word) const { return text_.substr(pos_).starts_with(word); }
  void expect(char c) {
    if (done() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  void skip_ws() {
    while (!done() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool done() const { return pos_ >= text_.size(); }
  [[noreturn]] void fail(const std::string& why) const {
    throw Error(ErrorCode::Parse, why + " at offset " + std::to_string(pos_) + " in '" +
                                      std::string(text_) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

bool is_squarefree(Radical n) {
  if (n == 0) return false;
  return squarefree_split(n).first == 1;
}

std::pair<Radical, Radical> squarefree_split(Radical n) {
  if (n == 0) throw Error(ErrorCode::Parse, "radicand must be positive");
  Radical square = 1;
  Radical core = 1;
  for (Radical p = 2; p <= n / p; p += (p == 2 ? 1 : 2)) {
    unsigned count = 0;
    while (n % p == 0) {
      n /= p;
      ++count;
    }
    for (unsigned i = 0; i < count / 2; ++i) square *= p;
    if (count % 2 == 1) core *= p;
  }
  core *= n;  // remaining factor is 1 or a prime
  return {square, core};
}

Rational make_rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw Error(ErrorCode::Parse, "empty rational");
  const auto e = s.find_first_of("eE");
  const auto dot = s.find('.');
  if (e == std::string::npos && dot == std::string::npos) {
    const auto slash = s.find('/');
    try {
      Rational q;
      if (slash == std::string::npos) {
        q = Rational(Integer(s, 10));
      } else {
        Integer den(s.substr(slash + 1), 10);
        if (den == 0) throw Error(ErrorCode::Parse, "zero denominator in '" + s + "'");
        q = Rational(Integer(s.substr(0, slash), 10), den);
      }
      q.canonicalize();
      return q;
    } catch (const std::invalid_argument&) {
      throw Error(ErrorCode::Parse, "malformed rational '" + s + "'");
    }
  }
  // Decimal / scientific form, converted exactly.
  std::string mantissa = e == std::string::npos ? s : s.substr(0, e);
  long exponent = 0;
  if (e != std::string::npos) {
    try {
      exponent = std::stol(s.substr(e + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::Parse, "malformed exponent in '" + s + "'");
    }
  }
  const auto mdot = mantissa.find('.');
  if (mdot != std::string::npos) {
    exponent -= static_cast<long>(mantissa.size() - mdot - 1);
    mantissa.erase(mdot, 1);
  }
  Integer digits;
  try {
    digits = Integer(mantissa, 10);
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::Parse, "malformed decimal '" + s + "'");
  }
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational q = exponent < 0 ? Rational(digits, scale) : Rational(digits * scale);
  q.canonicalize();
  return q;
}

std::string format_rational(const Rational& q) { return q.get_str(); }

Enclosure intersect(const Enclosure& a, const Enclosure& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

Enclosure operator+(const Enclosure& a, const Enclosure& b) { return {a.lo + b.lo, a.hi + b.hi}; }
Enclosure operator-(const Enclosure& a, const Enclosure& b) { return {a.lo - b.hi, a.hi - b.lo}; }

Enclosure scale(const Enclosure& a, const Rational& q) {
  if (q >= 0) return {a.lo * q, a.hi * q};
  return {a.hi * q, a.lo * q};
}

Rational floor_dyadic(const Rational& q, unsigned bits) {
  Integer scaled = q.get_num() << bits;
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), scaled.get_mpz_t(), q.get_den_mpz_t());
  Rational r(out, Integer(1) << bits);
  r.canonicalize();
  return r;
}

Rational ceil_dyadic(const Rational& q, unsigned bits) {
  Integer scaled = q.get_num() << bits;
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), scaled.get_mpz_t(), q.get_den_mpz_t());
  Rational r(out, Integer(1) << bits);
  r.canonicalize();
  return r;
}

unsigned bits_for(const Rational& q) {
  unsigned bits = 0;
  Rational step(1);
  while (step > q) {
    step /= 2;
    ++bits;
  }
  return bits;
}

Enclosure round_outward(const Enclosure& e, unsigned bits) {
  return {floor_dyadic(e.lo, bits), ceil_dyadic(e.hi, bits)};
}

ExactReal::ExactReal(const Rational& q) {
  if (q != 0) {
    Rational c = q;
    c.canonicalize();
    terms_.push_back({1, c});
  }
}

ExactReal::ExactReal(long n) : ExactReal(Rational(n)) {}

ExactReal ExactReal::sqrt_term(const Rational& coeff, Radical radical) {
  if (radical == 0 || coeff == 0) return {};
  const auto [square, core] = squarefree_split(radical);
  Rational c = coeff * Rational(Integer(std::to_string(square)));
  c.canonicalize();
  return ExactReal(std::vector<Term>{{core, c}});
}

ExactReal ExactReal::parse(std::string_view literal) { return LiteralParser(literal).parse(); }

bool ExactReal::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.front().radical == 1);
}

Rational ExactReal::coefficient(Radical radical) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), radical,
                             [](const Term& t, Radical r) { return t.radical < r; });
  if (it != terms_.end() && it->radical == radical) return it->coeff;
  return Rational(0);
}

const Rational& ExactReal::as_rational() const {
  static const Rational zero(0);
  if (terms_.empty()) return zero;
  if (!is_rational()) throw Error(ErrorCode::OutOfSpan, "value " + str() + " is not rational");
  return terms_.front().coeff;
}

bool ExactReal::canonical() const {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].coeff == 0 || !is_squarefree(terms_[i].radical)) return false;
    if (terms_[i].coeff.get_den() <= 0 || gcd(terms_[i].coeff.get_num(), terms_[i].coeff.get_den()) != 1)
      return false;
    if (i > 0 && terms_[i - 1].radical >= terms_[i].radical) return false;
  }
  return true;
}

std::string ExactReal::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const Term& t : terms_) {
    if (!out.empty()) out += " + ";
    out += t.coeff.get_str();
    if (t.radical != 1) out += "*sqrt(" + std::to_string(t.radical) + ")";
  }
  return out;
}

ExactReal ExactReal::operator-() const {
  ExactReal out = *this;
  for (Term& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

ExactReal& ExactReal::operator+=(const ExactReal& other) {
  std::vector<Term> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() || b != other.terms_.end()) {
    if (b == other.terms_.end() || (a != terms_.end() && a->radical < b->radical)) {
      merged.push_back(std::move(*a++));
    } else if (a == terms_.end() || b->radical < a->radical) {
      merged.push_back(*b++);
    } else {
      Rational sum = a->coeff + b->coeff;
      if (sum != 0) merged.push_back({a->radical, std::move(sum)});
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
  return *this;
}

ExactReal& ExactReal::operator-=(const ExactReal& other) { return *this += -other; }

ExactReal& ExactReal::operator*=(const Rational& q) {
  if (q == 0) {
    terms_.clear();
    return *this;
  }
  for (Term& t : terms_) t.coeff *= q;
  return *this;
}

void ExactReal::drop_zeros() {
  std::erase_if(terms_, [](const Term& t) { return t.coeff == 0; });
}

ExactReal operator*(const ExactReal& a, const ExactReal& b) {
  // sqrt(m) * sqrt(n) = d * sqrt((m/d) * (n/d)) with d = gcd(m, n); m/d and
  // n/d are coprime squarefree integers, so the product index is squarefree.
  std::map<Radical, Rational> acc;
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) {
      const Radical d = gcd(x.radical, y.radical);
      const Radical key = checked_product(x.radical / d, y.radical / d);
      acc[key] += x.coeff * y.coeff * Rational(Integer(std::to_string(d)));
    }
  }
  std::vector<ExactReal::Term> terms;
  terms.reserve(acc.size());
  for (auto& [radical, coeff] : acc) {
    coeff.canonicalize();
    if (coeff != 0) terms.push_back({radical, std::move(coeff)});
  }
  ExactReal out(std::move(terms));
  out.drop_zeros();
  return out;
}

ExactReal add(const ExactReal& a, const ExactReal& b) { return a + b; }
ExactReal mul(const ExactReal& a, const ExactReal& b) { return a * b; }

Enclosure sqrt_bracket(Radical m, unsigned step) {
  if (m == 1) return {Rational(1), Rational(1)};
  return sqrt_table().get(m, step);
}

Enclosure enclose(const ExactReal& x, const Rational& eps) {
  const Rational base = x.rational_part();
  Enclosure out{base, base};
  const auto irrational = static_cast<long>(
      std::count_if(x.terms().begin(), x.terms().end(), [](const auto& t) { return t.radical != 1; }));
  if (irrational == 0) return out;
  for (const auto& t : x.terms()) {
    if (t.radical == 1) continue;
    const Rational magnitude = ::abs(t.coeff);
    const Rational target = eps / (magnitude * irrational);
    unsigned step = 0;
    Enclosure root = sqrt_bracket(t.radical, step);
    while (root.width() > target) root = sqrt_bracket(t.radical, ++step);
    out = out + scale(root, t.coeff);
  }
  out.lo.canonicalize();
  out.hi.canonicalize();
  return out;
}

int sign(const ExactReal& x) {
  if (x.is_zero()) return 0;
  if (x.is_rational()) return sgn(x.as_rational());
  const Rational& floor = resolution_floor();
  // Precision schedule 2^-8, 2^-16, ..., then the 10^-200 floor.
  Rational eps(1, 256);
  for (;;) {
    const Enclosure e = enclose(x, eps);
    if (e.lo > 0) return 1;
    if (e.hi < 0) return -1;
    if (eps == floor) break;
    eps *= eps;
    if (eps < floor) eps = floor;
  }
  throw Error(ErrorCode::ResolutionExceeded,
              "sign of " + x.str() + " not resolved at width 10^-200");
}

std::strong_ordering compare(const ExactReal& a, const ExactReal& b) {
  if (a == b) return std::strong_ordering::equal;
  const int s = sign(a - b);
  return s < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
}

ExactReal abs(const ExactReal& x) { return sign(x) < 0 ? -x : x; }

bool StructuralLess::operator()(const ExactReal& a, const ExactReal& b) const {
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  return std::lexicographical_compare(ta.begin(), ta.end(), tb.begin(), tb.end(),
                                      [](const ExactReal::Term& x, const ExactReal::Term& y) {
                                        if (x.radical != y.radical) return x.radical < y.radical;
                                        return x.coeff < y.coeff;
                                      });
}

bool encloses(const Enclosure& e, const ExactReal& x) {
  return compare(ExactReal(e.lo), x) <= 0 && compare(x, ExactReal(e.hi)) <= 0;
}

std::string format_enclosure(const Enclosure& e) {
  return "[" + e.lo.get_str() + ", " + e.hi.get_str() + "]";
}

}  // namespace ngd
