#pragma once
// Basis solutions of the radial doublet system with a 1/r potential and the
// Wronskian-ratio functions built from them. Conventions:
//   h F = W F,  h = [[ m - q/r, -d/dr + kappa/r ], [ d/dr + kappa/r, -m - q/r ]]
// Upsilon = sqrt(kappa^2 - q^2) is real (gamma > 0) below the critical
// coupling q = |kappa|, zero at it, and i*sigma above it.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "supercrit/specfun.hpp"

namespace supercrit {

using Doublet = Eigen::Vector2cd;

struct ChannelParams {
  double q;    // coupling strength, > 0
  int kappa;   // nonzero integer
  double m = 1.0;

  double j() const { return std::abs(kappa) - 0.5; }
  int zeta() const { return kappa > 0 ? 1 : -1; }
  // coupling above which the smaller indicial exponent enters L^2 near 0
  double q_u() const { return std::sqrt(kappa * kappa - 0.25); }
  // critical coupling: Upsilon vanishes
  double q_c() const { return std::abs(kappa); }
  bool is_critical(double tol = 1e-12) const { return std::abs(q - q_c()) <= tol; }
  bool is_overcritical() const { return q > q_c() && !is_critical(); }

  // gamma (real case) or i*sigma (overcritical); exactly 0 at critical coupling
  cplx upsilon() const {
    double d = static_cast<double>(kappa) * kappa - q * q;
    if (is_critical()) return 0.0;
    if (d > 0.0) return std::sqrt(d);
    return cplx(0.0, std::sqrt(-d));
  }
  double gamma_val() const { return upsilon().real(); }
  double sigma_val() const { return upsilon().imag(); }
};

// K = sqrt(W-m) sqrt(W+m) and Lambda = sqrt((W-m)/(W+m)) with both factor
// phases taken in [0, 2pi); on the real axis this gives the limits from the
// upper half plane: K = k for W >= m, i*tau for |W| < m, -k for W <= -m.
struct Kinematics {
  cplx K;
  cplx Lambda;
};
Kinematics kinematics(cplx W, double m);

enum class SolutionKind {
  U1,    // exponent +Upsilon, real-entire in W
  U2,    // exponent -Upsilon, real-entire in W
  V1,    // recessive at infinity for Im W > 0
  Un2,   // replacement for U2 valid near 2*gamma = n (pass n)
  Vn1,   // replacement for V1 valid near 2*gamma = n (pass n)
  U2_0,  // critical-coupling logarithmic partner of U1
  V1_0   // critical-coupling recessive solution
};

// Basis doublet with indicial exponent ups (helper shared by U1/U2).
Doublet basis_doublet(const ChannelParams& p, cplx ups, double r, cplx W);

Doublet eval_solution(SolutionKind kind, const ChannelParams& p, double r, cplx W,
                      int n = 0);

// omega(W) = -Wr(U1, V1): the Wronskian-ratio function whose boundary values
// and zeros carry the whole spectral content. Throws CriticalCharge at the
// critical coupling and HalfIntegerGamma when 2*gamma sits on an integer.
cplx omega(const ChannelParams& p, cplx W);

// omega * Gamma(-2*Upsilon): finite and nonzero across 2*gamma = n.
cplx omega_tilde(const ChannelParams& p, cplx W);

// Polynomial coefficient A_n(W) entering the half-integer-gamma basis change;
// evaluated exactly at gamma = n/2 through the coupling sqrt(kappa^2 - n^2/4).
cplx omega_coeff_An(const ChannelParams& p, int n, cplx W);

// Version of omega adapted to the Un2/Vn1 basis, regular near 2*gamma = n.
// Requires |2*gamma - n| <= 0.05 (else OutsideNeighborhood).
cplx omega_n(const ChannelParams& p, int n, cplx W);

// Critical-coupling analogue built on U1/U2_0/V1_0.
cplx omega_0(const ChannelParams& p, cplx W);

inline cplx wronskian(const Doublet& f, const Doublet& g) {
  return f[0] * g[1] - f[1] * g[0];
}

// Small-r basis pair (columns multiplying c1, c2) at radius r.
std::pair<Doublet, Doublet> small_r_basis(const ChannelParams& p, double r);

struct AsymptoticCoefficients {
  cplx c1, c2;
  double residual;  // relative fit residual
};

// Fit F(r) ~ c1 * col1(r) + c2 * col2(r) over the given small radii.
// Throws FitIllConditioned when the samples cannot resolve the pair.
AsymptoticCoefficients asymptotic_coefficients(const ChannelParams& p,
                                               const std::vector<double>& radii,
                                               const std::vector<Doublet>& values);

}  // namespace supercrit
