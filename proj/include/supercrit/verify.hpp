#pragma once
// Independent consistency checks of the spectral data: overlap integrals via
// Wronskian boundary terms, bound-state norms by direct quadrature, the
// closed-form continuum weight constants, and a Parseval completeness test.

#include "supercrit/spectral.hpp"

namespace supercrit {

struct OverlapResult {
  double value;    // overlap of the two normalized eigenfunctions
  double abs_err;  // estimate of the numerical error in value
  bool finite_part_only;  // true for continuum-continuum pairs
};

// <F(E1), F(E2)> for two spectrum points of the same extension, computed as
// [Wr(R) - Wr(0+)] / (E1 - E2) with the r -> 0 limit taken in closed form
// from the boundary chart. For a pair of continuum energies only the finite
// (non-delta) part survives. E1 and E2 must differ.
OverlapResult overlap_wronskian(const ChannelParams& p, const ExtensionParam& ext,
                                double e1, double e2);

struct NormResult {
  double via_slope;       // -omega_ext'(E_n)
  double via_quadrature;  // int |U_ext|^2 dr, tail closed by the recessive form
  double tail_estimate;   // bound on the truncated tail
};

// Norm of the (unnormalized) bound-state doublet at level energy e, computed
// two independent ways; their agreement validates the residue weights.
NormResult discrete_norm(const ChannelParams& p, const ExtensionParam& ext, double e);

struct ContinuumConstants {
  double delta_plus, delta_minus;  // amplitude factors for exponents +/-gamma
  double a_plus, a_minus;          // diagonal overlap constants A(+gamma), A(-gamma)
  double b;                        // cross constant
  double chi;                      // relative phase between the two channels
};

// Closed-form continuum overlap constants at energy |E| > m; only defined for
// real gamma with 2*gamma not an integer (throws RegionUnsupported /
// HalfIntegerGamma otherwise). For extension xi the weight is
// C = A(+) + 2 xi B + xi^2 A(-) and satisfies C * Q^2(E) = 1.
ContinuumConstants continuum_constants(const ChannelParams& p, double E);

// The extension's continuum weight C assembled from the constants above.
double continuum_weight(const ChannelParams& p, const ExtensionParam& ext, double E);

struct ParsevalResult {
  double lhs;            // ||F||^2
  double discrete_sum;   // sum over levels of |<U_n, F>|^2
  double continuum_sum;  // int |<U_E, F>|^2 dE over the sampled window
  double defect;         // |lhs - discrete - continuum| / lhs
  int n_levels;
};

struct ParsevalOptions {
  double e_max = 10.0;   // continuum window |E| <= e_max * m
  int max_levels = 30;
  int panels_per_side = 10;
  int gl_order = 20;
};

// Completeness test: expands a fixed smooth two-component bump over the
// discrete and continuum eigenfunctions and compares against ||F||^2.
ParsevalResult parseval_check(const ChannelParams& p, const ExtensionParam& ext,
                              const ParsevalOptions& opt = {});

// Gauss-Legendre nodes/weights on [-1, 1] (cached per order).
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n);

}  // namespace supercrit
