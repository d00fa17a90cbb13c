#ifndef QBOUND_ERRORS_HPP
#define QBOUND_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qbound {

struct Error : std::runtime_error {
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

struct NotPositiveDefinite : Error {
  explicit NotPositiveDefinite(std::size_t pivot)
      : Error("not_positive_definite", "nonpositive pivot at index " + std::to_string(pivot)),
        pivot_index(pivot) {}
  std::size_t pivot_index;
};

struct NoConvergence : Error {
  explicit NoConvergence(std::size_t iterations)
      : Error("no_convergence", "iteration cap reached after " + std::to_string(iterations)),
        iterations(iterations) {}
  std::size_t iterations;
};

struct NonFiniteSample : Error {
  NonFiniteSample() : Error("non_finite_sample", "integrand returned a non-finite value") {}
};

struct QuadratureFailure : Error {
  explicit QuadratureFailure(const std::string& what) : Error("quadrature_failure", what) {}
};

struct InsufficientOrder : Error {
  explicit InsufficientOrder(const std::string& what) : Error("insufficient_order", what) {}
};

struct PrecisionExhausted : Error {
  explicit PrecisionExhausted(const std::string& what) : Error("precision_exhausted", what) {}
};

struct NotInClass : Error {
  explicit NotInClass(const std::string& what) : Error("not_in_class", what) {}
};

struct FiniteSupport : Error {
  explicit FiniteSupport(const std::string& what) : Error("finite_support", what) {}
};

struct ZeroVariance : Error {
  ZeroVariance() : Error("zero_variance", "OTF variance is zero") {}
};

struct NegativeIntensity : Error {
  explicit NegativeIntensity(const std::string& what) : Error("negative_intensity", what) {}
};

struct SingularPair : Error {
  SingularPair(std::size_t j, std::size_t l)
      : Error("singular_pair",
              "zero denominator with nonzero numerator at (" + std::to_string(j) + "," +
                  std::to_string(l) + ")") {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& what) : Error("dimension_mismatch", what) {}
};

struct InvalidConfig : Error {
  explicit InvalidConfig(const std::string& what) : Error("invalid_config", what) {}
};

}  // namespace qbound

#endif  // QBOUND_ERRORS_HPP
