#include "semijacobi/real.hpp"

#include <cmath>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace semijacobi {

namespace {

thread_local mpfr_prec_t g_working_precision = 128;

constexpr double kLog2Of10 = 3.321928094887362347870319429489390175864831393;

}  // namespace

mpfr_prec_t working_precision() noexcept { return g_working_precision; }

WorkingPrecision::WorkingPrecision(mpfr_prec_t bits) : saved_(g_working_precision) {
  if (bits < MPFR_PREC_MIN || bits > MPFR_PREC_MAX) {
    throw std::invalid_argument("working precision out of range: " + std::to_string(bits));
  }
  g_working_precision = bits;
}

WorkingPrecision::~WorkingPrecision() { g_working_precision = saved_; }

Real::Real() {
  mpfr_init2(value_, g_working_precision);
  mpfr_set_zero(value_, 1);
}

Real::Real(double v) {
  mpfr_init2(value_, g_working_precision);
  mpfr_set_d(value_, v, MPFR_RNDN);
}

Real::Real(long v, tag_long) {
  mpfr_init2(value_, g_working_precision);
  mpfr_set_si(value_, v, MPFR_RNDN);
}

Real::Real(unsigned long v, tag_ulong) {
  mpfr_init2(value_, g_working_precision);
  mpfr_set_ui(value_, v, MPFR_RNDN);
}

Real Real::parse(std::string_view text, mpfr_prec_t bits) {
  WorkingPrecision guard(bits == 0 ? g_working_precision : bits);
  Real r;
  std::string s(text);
  char* end = nullptr;
  mpfr_strtofr(r.value_, s.c_str(), &end, 10, MPFR_RNDN);
  if (end == s.c_str() || *end != '\0') {
    throw std::invalid_argument("not a decimal number: '" + s + "'");
  }
  return r;
}

Real Real::ratio(long p, long q) {
  Real r(p);
  mpfr_div_si(r.value_, r.value_, q, MPFR_RNDN);
  return r;
}

Real Real::pi() {
  Real r;
  mpfr_const_pi(r.value_, MPFR_RNDN);
  return r;
}

Real Real::ln2() {
  Real r;
  mpfr_const_log2(r.value_, MPFR_RNDN);
  return r;
}

Real Real::pow2(long e) {
  Real r(1);
  mpfr_mul_2si(r.value_, r.value_, e, MPFR_RNDN);
  return r;
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

Real Real::rounded(mpfr_prec_t bits) const {
  WorkingPrecision guard(bits);
  Real r;
  mpfr_set(r.value_, value_, MPFR_RNDN);
  return r;
}

std::string Real::str(int digits) const {
  if (digits < 1) digits = 1;
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Re", digits - 1, value_);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

namespace {

// Result at working precision: rounds an op whose operands may be wider.
template <typename F>
Real binary(const Real& a, const Real& b, F f) {
  Real r;
  f(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

template <typename F>
Real unary(const Real& a, F f) {
  Real r;
  f(r.get(), a.get(), MPFR_RNDN);
  return r;
}

}  // namespace

Real& Real::operator+=(const Real& o) { return *this = *this + o; }
Real& Real::operator-=(const Real& o) { return *this = *this - o; }
Real& Real::operator*=(const Real& o) { return *this = *this * o; }
Real& Real::operator/=(const Real& o) { return *this = *this / o; }

Real& Real::sub_mul(const Real& a, const Real& b) {
  if (precision() != g_working_precision) mpfr_prec_round(value_, g_working_precision, MPFR_RNDN);
  // fms gives a*b - this; negate afterwards.
  mpfr_fms(value_, a.value_, b.value_, value_, MPFR_RNDN);
  mpfr_neg(value_, value_, MPFR_RNDN);
  return *this;
}

Real& Real::add_mul(const Real& a, const Real& b) {
  if (precision() != g_working_precision) mpfr_prec_round(value_, g_working_precision, MPFR_RNDN);
  mpfr_fma(value_, a.value_, b.value_, value_, MPFR_RNDN);
  return *this;
}

Real Real::operator-() const { return unary(*this, mpfr_neg); }

Real operator+(const Real& a, const Real& b) { return binary(a, b, mpfr_add); }
Real operator-(const Real& a, const Real& b) { return binary(a, b, mpfr_sub); }
Real operator*(const Real& a, const Real& b) { return binary(a, b, mpfr_mul); }
Real operator/(const Real& a, const Real& b) { return binary(a, b, mpfr_div); }

int compare(const Real& a, const Real& b) noexcept { return mpfr_cmp(a.get(), b.get()); }

Real abs(const Real& x) { return unary(x, mpfr_abs); }
Real sqrt(const Real& x) { return unary(x, mpfr_sqrt); }
Real square(const Real& x) { return unary(x, mpfr_sqr); }
Real exp(const Real& x) { return unary(x, mpfr_exp); }
Real expm1(const Real& x) { return unary(x, mpfr_expm1); }
Real log(const Real& x) { return unary(x, mpfr_log); }
Real log1p(const Real& x) { return unary(x, mpfr_log1p); }
Real log10(const Real& x) { return unary(x, mpfr_log10); }
Real pow(const Real& x, const Real& y) { return binary(x, y, mpfr_pow); }
Real sinh(const Real& x) { return unary(x, mpfr_sinh); }
Real cosh(const Real& x) { return unary(x, mpfr_cosh); }
Real tanh(const Real& x) { return unary(x, mpfr_tanh); }

Real pow(const Real& x, long k) {
  Real r;
  mpfr_pow_si(r.get(), x.get(), k, MPFR_RNDN);
  return r;
}

Real lngamma(const Real& x) {
  Real r;
  int sign = 0;
  mpfr_lgamma(r.get(), &sign, x.get(), MPFR_RNDN);
  return r;
}

Real ldexp(const Real& x, long e) {
  Real r;
  mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN);
  return r;
}

const Real& max(const Real& a, const Real& b) { return a < b ? b : a; }
const Real& min(const Real& a, const Real& b) { return b < a ? b : a; }

std::ostream& operator<<(std::ostream& os, const Real& x) {
  auto digits = static_cast<int>(os.precision());
  return os << x.str(digits > 0 ? digits : 17);
}

mpfr_prec_t digits_to_bits(unsigned digits) noexcept {
  return static_cast<mpfr_prec_t>(std::ceil(digits * kLog2Of10));
}

unsigned bits_to_digits(mpfr_prec_t bits) noexcept {
  return static_cast<unsigned>(std::floor(static_cast<double>(bits) / kLog2Of10));
}

}  // namespace semijacobi
