#ifndef QBOUND_OTF_HPP
#define QBOUND_OTF_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "qbound/matrix.hpp"
#include "qbound/moments.hpp"
#include "qbound/real.hpp"

namespace qbound {

enum class OtfKind { bandlimited, gaussian, custom };

/// |Psi(k)|^2 model: even, normalized to unit integral.
/// bandlimited = flat 1/(2 beta) on [-beta, beta];
/// gaussian = zero-mean gaussian density with standard deviation beta;
/// custom = tabulated (k, |Psi|^2), renormalized on load, convergence
/// conditions unverified.
struct OtfModel {
  OtfKind kind = OtfKind::gaussian;
  Real beta{1L};
  std::vector<Real> grid_k;
  std::vector<Real> grid_psi2;

  static OtfModel bandlimited(Real beta);
  static OtfModel gaussian(Real beta);
  /// Two-column CSV with header `k,psi2`.
  static OtfModel custom_from_csv(const std::string& path);
};

/// <k^{2q}> for q = 0..q_max.
std::vector<Real> otf_moments(const OtfModel& otf, std::size_t q_max);

/// Pi_pq = i^{p-q}/(p! q!) Int |Psi|^2 k^{p+q} dk; real symmetric,
/// zero for odd p+q.  w is the diagnostic scaling constant for
/// Pi~ = W^T Pi W with W_qp = w^q sqrt(q!) delta_q^p.
struct PiMatrix {
  std::size_t q_max = 0;
  OtfKind kind = OtfKind::gaussian;
  Real beta{1L};
  Real w{1L};
  SymMatrix pi;                 // physical scale
  std::vector<Real> moments;    // <k^{2q}>, q = 0..q_max
};

PiMatrix pi_matrix(const OtfModel& otf, std::size_t q_max, const Real& w);

/// Scaled matrix Pi~ (diagnostics only).
SymMatrix pi_tilde(const PiMatrix& pi);
/// tr Pi~ by term-wise summation of w^{2q} <k^{2q}> / q!.
Real pi_tilde_trace(const PiMatrix& pi);
/// Closed form for the gaussian OTF: 1/sqrt(1 - 2 w^2 beta^2).
Real pi_tilde_trace_closed_form(const Real& w, const Real& beta);

struct TraceCheck {
  bool converged = false;  // trace series convergence for this OTF/w
  Real value{0L};          // tr Pi~ (partial sum at q_max)
  bool has_window = false;
  Real window_lo{0L};      // sqrt(2) delta
  Real window_hi{0L};      // 1/(sqrt(2) beta)
  bool feasible = false;   // window nonempty, i.e. beta*delta < 1/2
};

TraceCheck pi_trace_check(const PiMatrix& pi);
TraceCheck pi_trace_check(const PiMatrix& pi, const Real& object_delta);

/// Default scaling constant: geometric mean of the admissible window
/// when both the object and the OTF are gaussian, 1 otherwise.
Real default_w(const ObjectModel& obj, const OtfModel& otf);

}  // namespace qbound

#endif  // QBOUND_OTF_HPP
