#pragma once
// Spectral data of a fixed self-adjoint extension: discrete levels in the gap
// with their weights, the continuum spectral density, the overcritical phase
// function, the Green's function, and normalized eigenfunction doublets.

#include <vector>

#include "supercrit/extensions.hpp"

namespace supercrit {

// Levels of the distinguished extension in closed form,
//   E_n = m / sqrt(1 + q^2/(n + gamma)^2),
// n starting at 1 for kappa > 0 and at 0 for kappa < 0. Only defined below
// the critical coupling (throws FormulaNotApplicable otherwise).
std::vector<double> closed_form_levels(const ChannelParams& p, int count);

struct BoundState {
  int index;      // position in the returned (energy-sorted) list
  double energy;  // in (-m, m)
  double q2;      // residue weight Q_n^2 = -1/omega_ext'(E_n) > 0
};

struct SpectrumWindow {
  double e_lo;
  double e_hi;
  int max_levels = 64;
  double mesh_step = 0.2;  // scan step in s = q E / tau (uniform near thresholds)
};

// All zeros of omega_ext in the window, refined by bracketing; pole crossings
// are rejected by the sign of the derivative (genuine levels have
// omega_ext' < 0).
std::vector<BoundState> find_discrete_spectrum(const ChannelParams& p,
                                               const ExtensionParam& ext,
                                               const SpectrumWindow& win);

// Continuum spectral density Q^2(E) = (1/pi) Im 1/omega_ext(E + i0), |E| > m.
// Throws OnThresholds within 1e-8 m of |E| = m.
double continuum_density(const ChannelParams& p, const ExtensionParam& ext, double E);

// Overcritical phase Theta(E) on the gap; levels of extension theta satisfy
// Theta(E) = theta (mod pi). Throws NotOvercritical.
double theta_phase(const ChannelParams& p, double E);
// Continuously unwrapped version along an increasing energy grid.
std::vector<double> theta_phase_grid(const ChannelParams& p,
                                     const std::vector<double>& energies);

// The solution obeying the extension's boundary condition at r = 0 (U-side)
// and the solution recessive at infinity (V-side), scaled so that
// -Wr(U, V) = omega_ext. They coincide at a discrete level.
Doublet extension_u(const ChannelParams& p, const ExtensionParam& ext, double r,
                    cplx W);
Doublet extension_v(const ChannelParams& p, const ExtensionParam& ext, double r,
                    cplx W);

// The (U, V) pair and omega_ext entering the Green's function for this
// region/extension.
struct ResolventBasis {
  Doublet u, v;
  cplx omega_value;
};
ResolventBasis resolvent_pair(const ChannelParams& p, const ExtensionParam& ext,
                              double r, cplx W);

// G(r, r'; W) for Im W > 0 (throws RealAxisW otherwise).
Eigen::Matrix2cd greens_function(const ChannelParams& p, const ExtensionParam& ext,
                                 double r, double rp, cplx W);

// Normalized eigenfunction doublet samples at a spectrum point E: a discrete
// level (validated against omega_ext, else NotASpectrumPoint) or a continuum
// energy |E| > m. Discrete tails are evaluated through the recessive solution
// to avoid growing-solution contamination.
std::vector<Doublet> eigenfunction(const ChannelParams& p, const ExtensionParam& ext,
                                   double E, const std::vector<double>& radii);

}  // namespace supercrit
