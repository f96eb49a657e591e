#pragma once
// Self-adjoint boundary conditions at r = 0 for each coupling region, the
// extension-adapted Wronskian ratio omega_ext, and the boundary asymmetry
// form that singles out admissible domains.

#include <vector>

#include "supercrit/radial.hpp"

namespace supercrit {

enum class RegionClass {
  Region1,       // 0 < q <= sqrt(kappa^2 - 1/4): essentially self-adjoint
  Region2,       // sqrt(kappa^2 - 1/4) < q < |kappa|: one-parameter family, real gamma
  Critical,      // q = |kappa|
  Overcritical,  // q > |kappa|
};

RegionClass classify(const ChannelParams& p, double tol = 1e-12);

struct ExtensionParam {
  enum class Kind { Unique, Xi, XiInfinity, Theta };
  Kind kind = Kind::Unique;
  double value = 0.0;  // xi for Kind::Xi, theta (mod pi) for Kind::Theta

  static ExtensionParam unique() { return {Kind::Unique, 0.0}; }
  static ExtensionParam xi(double v) { return {Kind::Xi, v}; }
  static ExtensionParam xi_infinity() { return {Kind::XiInfinity, 0.0}; }
  static ExtensionParam theta(double v) {
    double w = std::fmod(v, 3.141592653589793238462643);
    if (w < 0.0) w += 3.141592653589793238462643;
    return {Kind::Theta, w};
  }
};

// Checks that the extension kind matches the region (RegionExtensionMismatch).
void require_compatible(RegionClass region, const ExtensionParam& ext);

// Extension-adapted omega: real-valued on the gap (-m, m), zeros there are
// the discrete levels, and -1/pi * Im(1/omega_ext) on |E| > m is the
// continuum spectral density. For Region1 the half-integer-gamma chart is
// switched in automatically.
cplx omega_ext(const ChannelParams& p, const ExtensionParam& ext, cplx W);

// Number of real parameters labelling the self-adjoint extensions across all
// channels at coupling q: 2n for sqrt(n^2 - 1/4) < q <= sqrt((n+1)^2 - 1/4).
int count_extension_parameters(double q);

struct BoundaryForm {
  cplx delta;  // asymmetry form value Delta*(F)
  cplx c1, c2; // coefficients in the region's small-r chart
};

// Evaluate the boundary asymmetry form of a doublet F given samples of F at
// small radii (used both to test self-adjointness and domain membership).
BoundaryForm asymmetry_form(const ChannelParams& p, const std::vector<double>& radii,
                            const std::vector<Doublet>& values);

// Whether the fitted small-r coefficients satisfy the boundary condition of
// the given extension, to relative tolerance tol.
bool satisfies_boundary_condition(const ChannelParams& p, const ExtensionParam& ext,
                                  const BoundaryForm& bf, double tol = 1e-6);

}  // namespace supercrit
