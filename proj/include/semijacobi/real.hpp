// Thin RAII wrapper around an MPFR floating-point value.
//
// Precision model: every arithmetic result and every function value is
// rounded to the calling thread's *working precision*, set with the scoped
// WorkingPrecision guard. Copies keep the precision of their source, so a
// table computed at 4000 bits still holds 4000-bit values after it leaves the
// scope that produced it.

#ifndef SEMIJACOBI_REAL_HPP
#define SEMIJACOBI_REAL_HPP

#include <mpfr.h>

#include <concepts>
#include <iosfwd>
#include <string>
#include <string_view>

namespace semijacobi {

/// Current working precision of this thread, in bits.
mpfr_prec_t working_precision() noexcept;

/// Sets the working precision of the current thread for the lifetime of the
/// guard and restores the previous value on destruction.
class WorkingPrecision {
 public:
  explicit WorkingPrecision(mpfr_prec_t bits);
  ~WorkingPrecision();
  WorkingPrecision(const WorkingPrecision&) = delete;
  WorkingPrecision& operator=(const WorkingPrecision&) = delete;

 private:
  mpfr_prec_t saved_;
};

class Real {
 public:
  Real();
  Real(double v);  // NOLINT(google-explicit-constructor)
  template <std::signed_integral I>
  Real(I v) : Real(static_cast<long>(v), tag_long{}) {}  // NOLINT
  template <std::unsigned_integral I>
  Real(I v) : Real(static_cast<unsigned long>(v), tag_ulong{}) {}  // NOLINT

  /// Parses a decimal literal at the given precision (working precision when 0).
  static Real parse(std::string_view text, mpfr_prec_t bits = 0);
  /// p/q rounded once.
  static Real ratio(long p, long q);
  static Real pi();
  static Real ln2();
  /// 2^e.
  static Real pow2(long e);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_prec_t precision() const noexcept { return mpfr_get_prec(value_); }
  /// Value rounded to `bits`.
  Real rounded(mpfr_prec_t bits) const;

  mpfr_srcptr get() const noexcept { return value_; }
  mpfr_ptr get() noexcept { return value_; }

  double to_double() const noexcept { return mpfr_get_d(value_, MPFR_RNDN); }
  long to_long() const noexcept { return mpfr_get_si(value_, MPFR_RNDN); }
  /// Scientific notation with `digits` significant decimal digits.
  std::string str(int digits) const;

  bool is_zero() const noexcept { return mpfr_zero_p(value_) != 0; }
  bool is_finite() const noexcept { return mpfr_number_p(value_) != 0; }
  int sign() const noexcept { return mpfr_sgn(value_); }
  /// Binary exponent e with value = m * 2^e, 0.5 <= |m| < 1.
  long exponent() const noexcept { return mpfr_get_exp(value_); }

  Real& operator+=(const Real& o);
  Real& operator-=(const Real& o);
  Real& operator*=(const Real& o);
  Real& operator/=(const Real& o);
  /// *this -= a*b with a single rounding.
  Real& sub_mul(const Real& a, const Real& b);
  /// *this += a*b with a single rounding.
  Real& add_mul(const Real& a, const Real& b);

  Real operator-() const;

 private:
  struct tag_long {};
  struct tag_ulong {};
  Real(long v, tag_long);
  Real(unsigned long v, tag_ulong);

  mpfr_t value_;
};

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);

template <std::integral I>
Real operator+(const Real& a, I b) { return a + Real(b); }
template <std::integral I>
Real operator+(I a, const Real& b) { return Real(a) + b; }
template <std::integral I>
Real operator-(const Real& a, I b) { return a - Real(b); }
template <std::integral I>
Real operator-(I a, const Real& b) { return Real(a) - b; }
template <std::integral I>
Real operator*(const Real& a, I b) { return a * Real(b); }
template <std::integral I>
Real operator*(I a, const Real& b) { return Real(a) * b; }
template <std::integral I>
Real operator/(const Real& a, I b) { return a / Real(b); }
template <std::integral I>
Real operator/(I a, const Real& b) { return Real(a) / b; }

inline Real operator+(const Real& a, double b) { return a + Real(b); }
inline Real operator+(double a, const Real& b) { return Real(a) + b; }
inline Real operator-(const Real& a, double b) { return a - Real(b); }
inline Real operator-(double a, const Real& b) { return Real(a) - b; }
inline Real operator*(const Real& a, double b) { return a * Real(b); }
inline Real operator*(double a, const Real& b) { return Real(a) * b; }
inline Real operator/(const Real& a, double b) { return a / Real(b); }
inline Real operator/(double a, const Real& b) { return Real(a) / b; }

int compare(const Real& a, const Real& b) noexcept;
// Unordered (false) whenever either side is NaN.
inline bool operator==(const Real& a, const Real& b) noexcept { return mpfr_equal_p(a.get(), b.get()) != 0; }
inline bool operator!=(const Real& a, const Real& b) noexcept { return !(a == b); }
inline bool operator<(const Real& a, const Real& b) noexcept { return mpfr_less_p(a.get(), b.get()) != 0; }
inline bool operator<=(const Real& a, const Real& b) noexcept { return mpfr_lessequal_p(a.get(), b.get()) != 0; }
inline bool operator>(const Real& a, const Real& b) noexcept { return mpfr_greater_p(a.get(), b.get()) != 0; }
inline bool operator>=(const Real& a, const Real& b) noexcept { return mpfr_greaterequal_p(a.get(), b.get()) != 0; }

Real abs(const Real& x);
Real sqrt(const Real& x);
Real square(const Real& x);
Real exp(const Real& x);
Real expm1(const Real& x);
Real log(const Real& x);
Real log1p(const Real& x);
Real log10(const Real& x);
Real pow(const Real& x, const Real& y);
Real pow(const Real& x, long k);
Real sinh(const Real& x);
Real cosh(const Real& x);
Real tanh(const Real& x);
/// ln|Gamma(x)| straight from MPFR.
Real lngamma(const Real& x);
Real ldexp(const Real& x, long e);
const Real& max(const Real& a, const Real& b);
const Real& min(const Real& a, const Real& b);

std::ostream& operator<<(std::ostream& os, const Real& x);

/// Bits carried by `digits` decimal digits, rounded up.
mpfr_prec_t digits_to_bits(unsigned digits) noexcept;
/// Decimal digits carried by `bits` bits, rounded down.
unsigned bits_to_digits(mpfr_prec_t bits) noexcept;

}  // namespace semijacobi

#endif  // SEMIJACOBI_REAL_HPP
