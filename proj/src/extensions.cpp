#include "supercrit/extensions.hpp"

#include <cmath>

namespace supercrit {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
const cplx kI{0.0, 1.0};
constexpr double kHalfIntWindow = 0.05;

double dist_to_int(double x) { return std::abs(x - std::round(x)); }

// omega with the half-integer-gamma chart switched in where needed.
cplx omega_region1(const ChannelParams& p, cplx W) {
  double g2 = 2.0 * p.gamma_val();
  double n = std::round(g2);
  if (n >= 1.0 && std::abs(g2 - n) < kHalfIntWindow)
    return omega_n(p, static_cast<int>(n), W);
  return omega(p, W);
}

cplx omega_tilde_unimodular(const ChannelParams& p, cplx W) {
  // (q / 2 i sigma) * omega; on the gap this has modulus 1.
  double sigma = p.sigma_val();
  return p.q / (2.0 * kI * sigma) * omega(p, W);
}

}  // namespace

RegionClass classify(const ChannelParams& p, double tol) {
  if (p.q <= 0.0)
    throw NumericsError("InvalidCoupling", "classify requires q > 0");
  double qc = p.q_c();
  if (std::abs(p.q - qc) <= tol) return RegionClass::Critical;
  if (p.q > qc) return RegionClass::Overcritical;
  if (p.q <= p.q_u() + tol) return RegionClass::Region1;
  return RegionClass::Region2;
}

void require_compatible(RegionClass region, const ExtensionParam& ext) {
  using K = ExtensionParam::Kind;
  bool ok = false;
  switch (region) {
    case RegionClass::Region1:
      ok = (ext.kind == K::Unique);
      break;
    case RegionClass::Region2:
    case RegionClass::Critical:
      ok = (ext.kind == K::Xi || ext.kind == K::XiInfinity);
      break;
    case RegionClass::Overcritical:
      ok = (ext.kind == K::Theta);
      break;
  }
  if (!ok)
    throw NumericsError("RegionExtensionMismatch",
                        "extension parameter kind does not match the coupling region");
}

cplx omega_ext(const ChannelParams& p, const ExtensionParam& ext, cplx W) {
  RegionClass region = classify(p);
  require_compatible(region, ext);
  using K = ExtensionParam::Kind;

  switch (region) {
    case RegionClass::Region1:
      return omega_region1(p, W);
    case RegionClass::Region2: {
      double g2 = 2.0 * p.gamma_val();
      if (ext.kind == K::Xi) return omega(p, W) - (g2 / p.q) * ext.value;
      return -(g2 * g2) / (p.q * p.q * omega(p, W));
    }
    case RegionClass::Critical: {
      double qc = p.q_c();
      if (ext.kind == K::Xi) return omega_0(p, W) - ext.value / qc;
      return -1.0 / (qc * qc * omega_0(p, W));
    }
    case RegionClass::Overcritical: {
      double sigma = p.sigma_val();
      if (W.imag() == 0.0 && std::abs(W.real()) < p.m) {
        // real-gap form: omega_theta = (4 sigma / q) tan(Theta(E) - theta)
        cplx wt = omega_tilde_unimodular(p, W);
        double theta_big = -0.5 * std::arg(wt);
        return (4.0 * sigma / p.q) * std::tan(theta_big - ext.value);
      }
      cplx wt = omega_tilde_unimodular(p, W);
      cplx ph = std::exp(2.0 * kI * ext.value);
      return -(4.0 * kI * sigma / p.q) * (1.0 - wt * ph) / (1.0 + wt * ph);
    }
  }
  throw NumericsError("InvalidRegion", "unreachable");
}

int count_extension_parameters(double q) {
  if (q <= 0.0)
    throw NumericsError("InvalidCoupling", "count_extension_parameters requires q > 0");
  int n = 0;
  for (int k = 1;; ++k) {
    double qk = std::sqrt(static_cast<double>(k) * k - 0.25);
    if (qk < q)
      n = k;
    else
      break;
  }
  return 2 * n;
}

BoundaryForm asymmetry_form(const ChannelParams& p, const std::vector<double>& radii,
                            const std::vector<Doublet>& values) {
  AsymptoticCoefficients ac = asymptotic_coefficients(p, radii, values);
  BoundaryForm bf;
  bf.c1 = ac.c1;
  bf.c2 = ac.c2;
  RegionClass region = classify(p);
  switch (region) {
    case RegionClass::Region1:
    case RegionClass::Region2: {
      double g2 = 2.0 * p.gamma_val();
      bf.delta = (g2 / p.q) *
                 (std::conj(bf.c2) * bf.c1 - std::conj(bf.c1) * bf.c2);
      break;
    }
    case RegionClass::Critical:
      bf.delta = (std::conj(bf.c1) * bf.c2 - std::conj(bf.c2) * bf.c1) / p.q_c();
      break;
    case RegionClass::Overcritical: {
      double sigma = p.sigma_val();
      bf.delta = (2.0 * kI * sigma / p.q) *
                 (std::norm(bf.c1) - std::norm(bf.c2));
      break;
    }
  }
  return bf;
}

bool satisfies_boundary_condition(const ChannelParams& p, const ExtensionParam& ext,
                                  const BoundaryForm& bf, double tol) {
  RegionClass region = classify(p);
  require_compatible(region, ext);
  using K = ExtensionParam::Kind;
  double scale = std::abs(bf.c1) + std::abs(bf.c2);
  if (scale == 0.0) return true;
  switch (region) {
    case RegionClass::Region1:
      return std::abs(bf.c2) <= tol * scale;
    case RegionClass::Region2:
      if (ext.kind == K::Xi) return std::abs(bf.c2 - ext.value * bf.c1) <= tol * scale;
      return std::abs(bf.c1) <= tol * scale;
    case RegionClass::Critical:
      if (ext.kind == K::Xi) return std::abs(bf.c1 - ext.value * bf.c2) <= tol * scale;
      return std::abs(bf.c2) <= tol * scale;
    case RegionClass::Overcritical: {
      cplx ph = std::exp(kI * ext.value);
      return std::abs(bf.c1 / ph - bf.c2 * ph) <= tol * scale;
    }
  }
  return false;
}

}  // namespace supercrit
