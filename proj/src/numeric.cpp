#include "fh/numeric.hpp"

#include <algorithm>
#include <cctype>

namespace fh {

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::NegativeBase: return "NegativeBase";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::TooMany: return "TooMany";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::IncompleteJob: return "IncompleteJob";
    case ErrorKind::InvalidPartition: return "InvalidPartition";
    case ErrorKind::NotTightenable: return "NotTightenable";
    case ErrorKind::NonRepresentable: return "NonRepresentable";
    case ErrorKind::Inconclusive: return "Inconclusive";
  }
  return "Error";
}

// ---- rationals ------------------------------------------------------------

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool neg = false;
  if (!body.empty() && (body[0] == '-' || body[0] == '+')) {
    neg = body[0] == '-';
    body.remove_prefix(1);
  }
  auto slash = body.find('/');
  std::string_view num = body.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw Error(ErrorKind::ParseError, "not a rational: '" + std::string(text) + "'");
  Integer n(std::string(num), 10), d(std::string(den), 10);
  if (d == 0) throw Error(ErrorKind::ParseError, "zero denominator: '" + std::string(text) + "'");
  Rational q(n, d);
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

Rational pow_int(const Rational& x, unsigned long k) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), x.get_num_mpz_t(), k);
  mpz_pow_ui(r.get_den_mpz_t(), x.get_den_mpz_t(), k);
  r.canonicalize();
  return r;
}

Integer floor_of(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil_of(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

// ---- enclosures -----------------------------------------------------------

namespace {

constexpr long kGuard = 16;

mpfr_prec_t prec_for(long bits) { return static_cast<mpfr_prec_t>(bits + kGuard); }

std::string decimal(mpfr_srcptr x, mpfr_rnd_t rnd, long bits) {
  if (mpfr_zero_p(x)) return "0";
  if (mpfr_inf_p(x)) return mpfr_sgn(x) > 0 ? "inf" : "-inf";
  size_t digits = static_cast<size_t>(bits * 0.30103) + 3;
  mpfr_exp_t e = 0;
  char* s = mpfr_get_str(nullptr, &e, 10, digits, x, rnd);
  std::string d(s);
  mpfr_free_str(s);
  std::string out;
  if (d[0] == '-') {
    out = "-";
    d.erase(0, 1);
  }
  out += d[0];
  out += '.';
  out += d.substr(1);
  out += "e" + std::to_string(static_cast<long>(e) - 1);
  return out;
}

}  // namespace

Enclosure::Enclosure(long bits) : bits_(bits) {
  mpfr_init2(lo_, prec_for(bits));
  mpfr_init2(hi_, prec_for(bits));
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Enclosure::Enclosure(const Enclosure& o) : bits_(o.bits_) {
  mpfr_init2(lo_, mpfr_get_prec(o.lo_));
  mpfr_init2(hi_, mpfr_get_prec(o.hi_));
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Enclosure::Enclosure(Enclosure&& o) noexcept : bits_(o.bits_) {
  mpfr_init2(lo_, MPFR_PREC_MIN);
  mpfr_init2(hi_, MPFR_PREC_MIN);
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
}

Enclosure& Enclosure::operator=(const Enclosure& o) {
  if (this != &o) {
    bits_ = o.bits_;
    mpfr_set_prec(lo_, mpfr_get_prec(o.lo_));
    mpfr_set_prec(hi_, mpfr_get_prec(o.hi_));
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }
  return *this;
}

Enclosure& Enclosure::operator=(Enclosure&& o) noexcept {
  bits_ = o.bits_;
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
  return *this;
}

Enclosure::~Enclosure() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

Enclosure Enclosure::exact(const Rational& q, long bits) {
  Enclosure e(bits);
  mpfr_set_q(e.lo_, q.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(e.hi_, q.get_mpq_t(), MPFR_RNDU);
  return e;
}

bool Enclosure::contains(const Rational& q) const {
  return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
}

bool Enclosure::degenerate() const { return mpfr_equal_p(lo_, hi_) != 0; }

bool Enclosure::nonnegative() const { return mpfr_sgn(lo_) >= 0; }

Enclosure Enclosure::width() const {
  Enclosure w(bits_);
  mpfr_sub(w.lo_, hi_, lo_, MPFR_RNDD);
  mpfr_sub(w.hi_, hi_, lo_, MPFR_RNDU);
  return w;
}

std::string Enclosure::lower_str() const { return decimal(lo_, MPFR_RNDD, bits_); }
std::string Enclosure::upper_str() const { return decimal(hi_, MPFR_RNDU, bits_); }

double Enclosure::mid_double() const {
  return 0.5 * (mpfr_get_d(lo_, MPFR_RNDN) + mpfr_get_d(hi_, MPFR_RNDN));
}

Enclosure operator+(const Enclosure& a, const Enclosure& b) {
  Enclosure r(std::max(a.bits(), b.bits()));
  mpfr_add(r.lo(), a.lo(), b.lo(), MPFR_RNDD);
  mpfr_add(r.hi(), a.hi(), b.hi(), MPFR_RNDU);
  return r;
}

Enclosure operator-(const Enclosure& a, const Enclosure& b) {
  Enclosure r(std::max(a.bits(), b.bits()));
  mpfr_sub(r.lo(), a.lo(), b.hi(), MPFR_RNDD);
  mpfr_sub(r.hi(), a.hi(), b.lo(), MPFR_RNDU);
  return r;
}

Enclosure operator*(const Enclosure& a, const Enclosure& b) {
  Enclosure r(std::max(a.bits(), b.bits()));
  mpfr_t t;
  mpfr_init2(t, mpfr_get_prec(r.lo()));
  mpfr_srcptr as[2] = {a.lo(), a.hi()};
  mpfr_srcptr bs[2] = {b.lo(), b.hi()};
  mpfr_mul(r.lo(), as[0], bs[0], MPFR_RNDD);
  mpfr_mul(r.hi(), as[0], bs[0], MPFR_RNDU);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      if (i == 0 && j == 0) continue;
      mpfr_mul(t, as[i], bs[j], MPFR_RNDD);
      mpfr_min(r.lo(), r.lo(), t, MPFR_RNDD);
      mpfr_mul(t, as[i], bs[j], MPFR_RNDU);
      mpfr_max(r.hi(), r.hi(), t, MPFR_RNDU);
    }
  mpfr_clear(t);
  return r;
}

Enclosure operator/(const Enclosure& a, const Enclosure& b) {
  if (mpfr_sgn(b.lo()) <= 0 && mpfr_sgn(b.hi()) >= 0)
    throw Error(ErrorKind::DomainViolation, "division by an enclosure containing zero");
  Enclosure r(std::max(a.bits(), b.bits()));
  mpfr_t t;
  mpfr_init2(t, mpfr_get_prec(r.lo()));
  mpfr_srcptr as[2] = {a.lo(), a.hi()};
  mpfr_srcptr bs[2] = {b.lo(), b.hi()};
  mpfr_div(r.lo(), as[0], bs[0], MPFR_RNDD);
  mpfr_div(r.hi(), as[0], bs[0], MPFR_RNDU);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      if (i == 0 && j == 0) continue;
      mpfr_div(t, as[i], bs[j], MPFR_RNDD);
      mpfr_min(r.lo(), r.lo(), t, MPFR_RNDD);
      mpfr_div(t, as[i], bs[j], MPFR_RNDU);
      mpfr_max(r.hi(), r.hi(), t, MPFR_RNDU);
    }
  mpfr_clear(t);
  return r;
}

Enclosure operator+(const Enclosure& a, const Rational& b) { return a + Enclosure::exact(b, a.bits()); }
Enclosure operator-(const Enclosure& a, const Rational& b) { return a - Enclosure::exact(b, a.bits()); }
Enclosure operator*(const Enclosure& a, const Rational& b) { return a * Enclosure::exact(b, a.bits()); }
Enclosure operator/(const Enclosure& a, const Rational& b) { return a / Enclosure::exact(b, a.bits()); }
Enclosure operator+(const Rational& a, const Enclosure& b) { return Enclosure::exact(a, b.bits()) + b; }
Enclosure operator-(const Rational& a, const Enclosure& b) { return Enclosure::exact(a, b.bits()) - b; }
Enclosure operator*(const Rational& a, const Enclosure& b) { return Enclosure::exact(a, b.bits()) * b; }
Enclosure operator/(const Rational& a, const Enclosure& b) { return Enclosure::exact(a, b.bits()) / b; }

Enclosure& operator+=(Enclosure& a, const Enclosure& b) {
  a = a + b;
  return a;
}

// ---- powers ---------------------------------------------------------------

namespace {

// exp(k ln x) for x in [lo, hi], lo >= 0, k > 0, evaluated at working
// precision w and rounded outward into an enclosure of `bits`.
Enclosure exp_ln(mpfr_srcptr lo, mpfr_srcptr hi, const Rational& k, long bits) {
  long mag = 0;
  if (!mpfr_zero_p(hi)) mag = std::labs(static_cast<long>(mpfr_get_exp(hi))) + 1;
  double t = k.get_d() * static_cast<double>(mag);
  long extra = 1;
  while (t >= 1.0) {
    t /= 2;
    ++extra;
  }
  mpfr_prec_t w = static_cast<mpfr_prec_t>(bits + 64 + extra);
  mpfr_t a, b;
  mpfr_init2(a, w);
  mpfr_init2(b, w);
  Enclosure r(bits);
  if (mpfr_zero_p(lo)) {
    mpfr_set_zero(r.lo(), 1);
  } else {
    mpfr_log(a, lo, MPFR_RNDD);
    mpfr_mul_q(a, a, k.get_mpq_t(), MPFR_RNDD);
    mpfr_exp(a, a, MPFR_RNDD);
    mpfr_set(r.lo(), a, MPFR_RNDD);
  }
  if (mpfr_zero_p(hi)) {
    mpfr_set_zero(r.hi(), 1);
  } else {
    mpfr_log(b, hi, MPFR_RNDU);
    mpfr_mul_q(b, b, k.get_mpq_t(), MPFR_RNDU);
    mpfr_exp(b, b, MPFR_RNDU);
    mpfr_set(r.hi(), b, MPFR_RNDU);
  }
  mpfr_clear(a);
  mpfr_clear(b);
  return r;
}

std::optional<Rational> exact_root(const Rational& x, const Rational& k) {
  const Integer& a = k.get_num();
  const Integer& b = k.get_den();
  if (!a.fits_ulong_p() || !b.fits_ulong_p()) return std::nullopt;
  unsigned long ua = a.get_ui(), ub = b.get_ui();
  size_t sz = std::max(mpz_sizeinbase(x.get_num_mpz_t(), 2), mpz_sizeinbase(x.get_den_mpz_t(), 2));
  if (static_cast<double>(ua) * static_cast<double>(sz) > 1e6) return std::nullopt;
  Integer n, d, rn, rd;
  mpz_pow_ui(n.get_mpz_t(), x.get_num_mpz_t(), ua);
  mpz_pow_ui(d.get_mpz_t(), x.get_den_mpz_t(), ua);
  if (!mpz_root(rn.get_mpz_t(), n.get_mpz_t(), ub)) return std::nullopt;
  if (!mpz_root(rd.get_mpz_t(), d.get_mpz_t(), ub)) return std::nullopt;
  Rational r(rn, rd);
  r.canonicalize();
  return r;
}

}  // namespace

Enclosure pow_frac(const Rational& x, const Rational& k, long bits) {
  if (sgn(x) < 0) throw Error(ErrorKind::NegativeBase, "pow_frac of " + to_string(x));
  if (sgn(k) < 0) throw Error(ErrorKind::InvalidArgument, "negative exponent " + to_string(k));
  if (sgn(k) == 0) return Enclosure::exact(1, bits);
  if (sgn(x) == 0) return Enclosure(bits);
  if (auto r = exact_root(x, k)) return Enclosure::exact(*r, bits);
  long w = bits + 64;
  Enclosure xe(w);
  mpfr_set_q(xe.lo(), x.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(xe.hi(), x.get_mpq_t(), MPFR_RNDU);
  Enclosure wide = exp_ln(xe.lo(), xe.hi(), k, w);
  Enclosure r(bits);
  mpfr_set(r.lo(), wide.lo(), MPFR_RNDD);
  mpfr_set(r.hi(), wide.hi(), MPFR_RNDU);
  return r;
}

Enclosure pow_rat(const Enclosure& x, const Rational& q) {
  if (sgn(q) < 0) throw Error(ErrorKind::InvalidArgument, "negative exponent " + to_string(q));
  if (mpfr_sgn(x.lo()) < 0) throw Error(ErrorKind::NegativeBase, "pow_rat of an enclosure reaching below 0");
  Integer n = floor_of(q);
  Rational f = q - Rational(n);
  Enclosure acc = Enclosure::exact(1, x.bits());
  Enclosure base = x;
  for (unsigned long e = n.get_ui(); e > 0; e >>= 1) {
    if (e & 1) acc = acc * base;
    if (e > 1) base = base * base;
  }
  if (sgn(f) == 0) return acc;
  return acc * exp_ln(x.lo(), x.hi(), f, x.bits());
}

Enclosure pow_rat(const Rational& x, const Rational& q, long bits) {
  if (sgn(q) < 0) throw Error(ErrorKind::InvalidArgument, "negative exponent " + to_string(q));
  Integer n = floor_of(q);
  Rational f = q - Rational(n);
  Rational whole = pow_int(x, n.get_ui());
  if (sgn(f) == 0) return Enclosure::exact(whole, bits);
  return whole * pow_frac(x, f, bits);
}

// ---- comparison -----------------------------------------------------------

Cmp cmp_certified(const Enclosure& a, const Enclosure& b) {
  if (mpfr_less_p(a.hi(), b.lo())) return Cmp::Less;
  if (mpfr_greater_p(a.lo(), b.hi())) return Cmp::Greater;
  return Cmp::Unknown;
}

const char* relation_symbol(Relation r) {
  switch (r) {
    case Relation::Lt: return "<";
    case Relation::Le: return "<=";
    case Relation::Gt: return ">";
    case Relation::Ge: return ">=";
    case Relation::Eq: return "==";
  }
  return "?";
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "Pass";
    case Verdict::Fail: return "Fail";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

Verdict decide(const Rational& l, const Rational& r, Relation rel) {
  bool ok = false;
  switch (rel) {
    case Relation::Lt: ok = l < r; break;
    case Relation::Le: ok = l <= r; break;
    case Relation::Gt: ok = l > r; break;
    case Relation::Ge: ok = l >= r; break;
    case Relation::Eq: ok = l == r; break;
  }
  return ok ? Verdict::Pass : Verdict::Fail;
}

Verdict decide(const Enclosure& l, const Enclosure& r, Relation rel) {
  auto le = [](mpfr_srcptr a, mpfr_srcptr b) { return mpfr_lessequal_p(a, b) != 0; };
  auto lt = [](mpfr_srcptr a, mpfr_srcptr b) { return mpfr_less_p(a, b) != 0; };
  switch (rel) {
    case Relation::Lt:
      if (lt(l.hi(), r.lo())) return Verdict::Pass;
      if (le(r.hi(), l.lo())) return Verdict::Fail;
      break;
    case Relation::Le:
      if (le(l.hi(), r.lo())) return Verdict::Pass;
      if (lt(r.hi(), l.lo())) return Verdict::Fail;
      break;
    case Relation::Gt: return decide(r, l, Relation::Lt);
    case Relation::Ge: return decide(r, l, Relation::Le);
    case Relation::Eq:
      if (l.degenerate() && r.degenerate() && mpfr_equal_p(l.lo(), r.lo())) return Verdict::Pass;
      if (lt(l.hi(), r.lo()) || lt(r.hi(), l.lo())) return Verdict::Fail;
      break;
  }
  return Verdict::Inconclusive;
}

Certified certify(const EnclosureFn& left, const EnclosureFn& right, Relation rel, long start_bits,
                  long ceiling_bits) {
  long bits = start_bits;
  for (;;) {
    Enclosure l = left(bits), r = right(bits);
    Verdict v = decide(l, r, rel);
    if (v != Verdict::Inconclusive || bits >= ceiling_bits) return {v, std::move(l), std::move(r)};
    bits = std::min(bits * 2, ceiling_bits);
  }
}

// ---- exponents ------------------------------------------------------------

NormExponent NormExponent::integer(unsigned long k) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "integer exponent must be >= 1");
  NormExponent e;
  e.kind = Kind::Integer;
  e.k_int = k;
  return e;
}

NormExponent NormExponent::fractional(const Rational& k) {
  if (!(sgn(k) > 0 && k < 1)) throw Error(ErrorKind::InvalidArgument, "fractional exponent must lie in (0,1)");
  NormExponent e;
  e.kind = Kind::Fractional;
  e.k_frac = k;
  return e;
}

NormExponent NormExponent::infinity() {
  NormExponent e;
  e.kind = Kind::Infinity;
  return e;
}

NormExponent NormExponent::parse(std::string_view text) {
  if (text == "inf" || text == "infinity") return infinity();
  Rational k = parse_rational(text);
  if (k.get_den() == 1 && k >= 1) {
    if (!k.get_num().fits_ulong_p()) throw Error(ErrorKind::InvalidArgument, "exponent too large");
    return integer(k.get_num().get_ui());
  }
  if (sgn(k) > 0 && k < 1) return fractional(k);
  throw Error(ErrorKind::InvalidArgument,
              "exponent must be a positive integer, a fraction in (0,1), or inf: " + std::string(text));
}

Rational NormExponent::value() const {
  switch (kind) {
    case Kind::Integer: return Rational(k_int);
    case Kind::Fractional: return k_frac;
    case Kind::Infinity: break;
  }
  throw Error(ErrorKind::InvalidArgument, "infinity has no rational value");
}

std::string NormExponent::str() const {
  switch (kind) {
    case Kind::Integer: return std::to_string(k_int);
    case Kind::Fractional: return to_string(k_frac);
    case Kind::Infinity: return "inf";
  }
  return "?";
}

}  // namespace fh
