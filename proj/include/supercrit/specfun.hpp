#pragma once
// Complex special functions on the principal branch: log-gamma, digamma,
// reciprocal gamma, and the confluent hypergeometric pair (regular and
// irregular). Accuracy target is ~1e-12 relative over the parameter ranges
// that occur in the radial solver: |Re z| up to a few hundred on and near
// the imaginary axis, parameters of modest size.

#include <complex>
#include <stdexcept>
#include <string>

namespace supercrit {

using cplx = std::complex<double>;

// Error carrying a stable machine-readable name (surfaced by the CLI).
struct NumericsError : std::runtime_error {
  std::string name;
  NumericsError(std::string n, const std::string& what_arg)
      : std::runtime_error(n + ": " + what_arg), name(std::move(n)) {}
};

// Points closer than this to a gamma pole are treated as the pole itself.
inline constexpr double kPoleTol = 1e-9;

// Principal branch, continuous analytic continuation of log Gamma from the
// positive real axis (not log of gamma). Throws PoleAtNonPositiveInteger.
cplx log_gamma(cplx z);

// Gamma(z); throws PoleAtNonPositiveInteger near poles, Overflow if |Gamma|
// exceeds double range.
cplx gamma(cplx z);

// 1/Gamma(z), entire; returns exactly 0 within kPoleTol of 0, -1, -2, ...
cplx recip_gamma(cplx z);

// psi(z) = Gamma'(z)/Gamma(z); throws PoleAtNonPositiveInteger.
cplx digamma(cplx z);

// Regular confluent function M(a,b,z) = sum (a)_k z^k / ((b)_k k!).
// Throws BetaNonPositiveInteger when b sits on a pole of the series.
// Severe cancellation is detected and the sum is re-run in double-double.
cplx kummer_phi(cplx a, cplx b, cplx z);

// Irregular confluent function U(a,b,z), principal branch (|arg z| < pi).
// Handles integer b through the logarithmic series and polynomial a = -n
// cases exactly. Throws OriginSingularity at z = 0 and SeriesNotConverged
// when the large-z expansion cannot reach the requested accuracy.
cplx tricomi_psi(cplx a, cplx b, cplx z);

}  // namespace supercrit
