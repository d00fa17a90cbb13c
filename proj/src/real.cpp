#include "qbound/real.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace qbound {

namespace {
std::atomic<std::size_t> g_precision_bits{256};
}

std::size_t precision_bits() { return g_precision_bits.load(std::memory_order_relaxed); }

void set_precision_bits(std::size_t bits) {
  if (bits < 64) throw std::invalid_argument("precision must be at least 64 bits");
  g_precision_bits.store(bits, std::memory_order_relaxed);
}

std::string Real::str() const {
  // digits10 that guarantee round-trip for this many mantissa bits
  const int digits =
      static_cast<int>(std::ceil(static_cast<double>(mpfr_get_prec(v_)) * 0.3010299956639812)) + 2;
  return str(digits);
}

std::string Real::str(int digits) const {
  char* s = nullptr;
  mpfr_asprintf(&s, "%.*Rg", digits, v_);
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

Real factorial(unsigned long n) {
  Real r;
  mpfr_fac_ui(r.raw(), n, MPFR_RNDN);
  return r;
}

Real double_factorial(long n) {
  Real r(1L);
  for (long k = n; k > 1; k -= 2) r *= Real(k);
  return r;
}

Real binomial(unsigned long n, unsigned long k) {
  if (k > n) return Real(0L);
  return factorial(n) / (factorial(k) * factorial(n - k));
}

}  // namespace qbound
