#ifndef QBOUND_REAL_HPP
#define QBOUND_REAL_HPP

#include <mpfr.h>

#include <cstddef>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace qbound {

// Global working precision in bits.  Set once at startup (CLI/config);
// every Real constructed afterwards uses it.
std::size_t precision_bits();
void set_precision_bits(std::size_t bits);

/// Extended-precision real number backed by MPFR.  Round-to-nearest
/// everywhere; identical inputs at identical precision give bitwise
/// identical results.
class Real {
 public:
  Real() { mpfr_init2(v_, prec()); mpfr_set_zero(v_, 1); }
  Real(long x) { mpfr_init2(v_, prec()); mpfr_set_si(v_, x, MPFR_RNDN); }
  Real(int x) : Real(static_cast<long>(x)) {}
  Real(unsigned long x) { mpfr_init2(v_, prec()); mpfr_set_ui(v_, x, MPFR_RNDN); }
  Real(double x) { mpfr_init2(v_, prec()); mpfr_set_d(v_, x, MPFR_RNDN); }
  explicit Real(const char* s) {
    mpfr_init2(v_, prec());
    mpfr_set_str(v_, s, 10, MPFR_RNDN);
  }
  explicit Real(const std::string& s) : Real(s.c_str()) {}

  Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

  Real operator-() const {
    Real r;
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
  }

  friend Real operator+(const Real& a, const Real& b) { Real r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator-(const Real& a, const Real& b) { Real r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator*(const Real& a, const Real& b) { Real r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator/(const Real& a, const Real& b) { Real r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }

  friend bool operator==(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) == 0; }
  friend bool operator!=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) != 0; }
  friend bool operator<(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) <= 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_cmp(a.v_, b.v_) >= 0; }

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  bool is_negative() const { return mpfr_sgn(v_) < 0; }
  int sign() const { return mpfr_sgn(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }

  /// Decimal string with enough digits to round-trip at the value's precision.
  std::string str() const;
  /// Decimal string with a fixed number of significant digits.
  std::string str(int digits) const;

 private:
  static mpfr_prec_t prec() { return static_cast<mpfr_prec_t>(precision_bits()); }
  mpfr_t v_;
};

inline Real sqrt(const Real& a) { Real r; mpfr_sqrt(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real abs(const Real& a) { Real r; mpfr_abs(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real log(const Real& a) { Real r; mpfr_log(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real exp(const Real& a) { Real r; mpfr_exp(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real cos(const Real& a) { Real r; mpfr_cos(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real sin(const Real& a) { Real r; mpfr_sin(r.raw(), a.raw(), MPFR_RNDN); return r; }
inline Real pow(const Real& a, long n) { Real r; mpfr_pow_si(r.raw(), a.raw(), n, MPFR_RNDN); return r; }
inline Real pow(const Real& a, const Real& b) { Real r; mpfr_pow(r.raw(), a.raw(), b.raw(), MPFR_RNDN); return r; }
inline Real max(const Real& a, const Real& b) { return a < b ? b : a; }
inline Real min(const Real& a, const Real& b) { return a < b ? a : b; }

inline Real const_pi() { Real r; mpfr_const_pi(r.raw(), MPFR_RNDN); return r; }

/// 2^e as a Real (exact).
inline Real pow2(long e) {
  Real r;
  mpfr_set_ui_2exp(r.raw(), 1, static_cast<mpfr_exp_t>(e), MPFR_RNDN);
  return r;
}

Real factorial(unsigned long n);
/// n!! with (-1)!! = 0!! = 1.
Real double_factorial(long n);
Real binomial(unsigned long n, unsigned long k);

/// fused a += b*c without an intermediate temporary
inline void fma_add(Real& a, const Real& b, const Real& c) {
  mpfr_fma(a.raw(), b.raw(), c.raw(), a.raw(), MPFR_RNDN);
}
inline void fma_sub(Real& a, const Real& b, const Real& c) {
  mpfr_fms(a.raw(), b.raw(), c.raw(), a.raw(), MPFR_RNDN);
  mpfr_neg(a.raw(), a.raw(), MPFR_RNDN);
}

}  // namespace qbound

#endif  // QBOUND_REAL_HPP
