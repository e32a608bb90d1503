#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>
#include <mpfr.h>

#include "fh/error.hpp"

namespace fh {

using Rational = mpq_class;
using Integer = mpz_class;

inline constexpr long kDefaultBits = 192;
inline constexpr long kCeilingBits = 4096;

// "a", "-a", "a/b"; no decimals.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

Rational pow_int(const Rational& x, unsigned long k);
Integer floor_of(const Rational& q);
Integer ceil_of(const Rational& q);

// Closed interval [lower, upper] with endpoints rounded outward.
// Endpoints carry a few guard bits beyond the nominal precision.
class Enclosure {
 public:
  explicit Enclosure(long bits = kDefaultBits);
  Enclosure(const Enclosure& o);
  Enclosure(Enclosure&& o) noexcept;
  Enclosure& operator=(const Enclosure& o);
  Enclosure& operator=(Enclosure&& o) noexcept;
  ~Enclosure();

  static Enclosure exact(const Rational& q, long bits = kDefaultBits);

  long bits() const { return bits_; }
  mpfr_srcptr lo() const { return lo_; }
  mpfr_srcptr hi() const { return hi_; }
  mpfr_ptr lo() { return lo_; }
  mpfr_ptr hi() { return hi_; }

  bool contains(const Rational& q) const;
  bool degenerate() const;
  bool nonnegative() const;
  // Upper bound on hi - lo, rounded up.
  Enclosure width() const;
  std::string lower_str() const;
  std::string upper_str() const;
  double mid_double() const;

 private:
  long bits_;
  mpfr_t lo_;
  mpfr_t hi_;
};

Enclosure operator+(const Enclosure& a, const Enclosure& b);
Enclosure operator-(const Enclosure& a, const Enclosure& b);
Enclosure operator*(const Enclosure& a, const Enclosure& b);
Enclosure operator/(const Enclosure& a, const Enclosure& b);
Enclosure operator+(const Enclosure& a, const Rational& b);
Enclosure operator-(const Enclosure& a, const Rational& b);
Enclosure operator*(const Enclosure& a, const Rational& b);
Enclosure operator/(const Enclosure& a, const Rational& b);
Enclosure operator+(const Rational& a, const Enclosure& b);
Enclosure operator-(const Rational& a, const Enclosure& b);
Enclosure operator*(const Rational& a, const Enclosure& b);
Enclosure operator/(const Rational& a, const Enclosure& b);
Enclosure& operator+=(Enclosure& a, const Enclosure& b);

Enclosure pow_frac(const Rational& x, const Rational& k, long bits = kDefaultBits);
// x >= 0 elementwise, q >= 0.
Enclosure pow_rat(const Enclosure& x, const Rational& q);
Enclosure pow_rat(const Rational& x, const Rational& q, long bits);

enum class Cmp { Less, Greater, Unknown };
Cmp cmp_certified(const Enclosure& a, const Enclosure& b);

enum class Relation { Lt, Le, Gt, Ge, Eq };
const char* relation_symbol(Relation r);

enum class Verdict { Pass, Fail, Inconclusive };
const char* verdict_name(Verdict v);

Verdict decide(const Rational& l, const Rational& r, Relation rel);
// Pass/Fail when the enclosures settle it, otherwise Inconclusive.
Verdict decide(const Enclosure& l, const Enclosure& r, Relation rel);

// Re-evaluates both sides at doubling precision until the relation is
// settled or the ceiling is hit.
struct Certified {
  Verdict verdict;
  Enclosure left;
  Enclosure right;
};
using EnclosureFn = std::function<Enclosure(long bits)>;
Certified certify(const EnclosureFn& left, const EnclosureFn& right, Relation rel,
                  long start_bits = kDefaultBits, long ceiling_bits = kCeilingBits);

struct NormExponent {
  enum class Kind { Integer, Fractional, Infinity };
  Kind kind = Kind::Integer;
  unsigned long k_int = 1;
  Rational k_frac;

  static NormExponent integer(unsigned long k);
  static NormExponent fractional(const Rational& k);
  static NormExponent infinity();
  static NormExponent parse(std::string_view text);

  bool is_integer() const { return kind == Kind::Integer; }
  bool is_fractional() const { return kind == Kind::Fractional; }
  bool is_infinity() const { return kind == Kind::Infinity; }
  // k as a rational; throws for Infinity.
  Rational value() const;
  std::string str() const;
};

}  // namespace fh
