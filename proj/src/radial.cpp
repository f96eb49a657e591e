#include "supercrit/radial.hpp"

#include <cmath>

namespace supercrit {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
const cplx kI{0.0, 1.0};

// Width of the 2*gamma = n neighborhood where the (U1, U2) chart degenerates
// and the (U1, Un2) chart must be used instead.
constexpr double kHalfIntWindow = 0.05;
// Below this distance the Un2/omega_n expressions are themselves evaluated by
// averaging two coupling-perturbed channels (relative detuning 1e-4).
constexpr double kExactHalfInt = 1e-7;

// sin(pi w) with integer reduction of the real part.
cplx sinpi_c(cplx w) {
  double n = std::round(w.real());
  cplx s = std::sin(kPi * cplx(w.real() - n, w.imag()));
  if (std::fmod(std::abs(n), 2.0) == 1.0) s = -s;
  return s;
}

double dist_to_int(double x) { return std::abs(x - std::round(x)); }

bool on_real_gap(cplx W, double m) {
  return W.imag() == 0.0 && std::abs(W.real()) < m;
}

// Gamma(-u - s) / Gamma(u - s) for large positive s without overflow, via
// the reflection formula applied to both factors.
cplx gamma_ratio_reflected(cplx u, double s) {
  double n = std::round(s);
  double f = s - n;
  cplx ratio_sin = -sinpi_c(u - f) / sinpi_c(u + f);
  return ratio_sin * std::exp(log_gamma(1.0 + s - u) - log_gamma(1.0 + s + u));
}

ChannelParams at_gamma(const ChannelParams& p, double g) {
  ChannelParams pn = p;
  pn.q = std::sqrt(static_cast<double>(p.kappa) * p.kappa - g * g);
  return pn;
}

Doublet u2_exact_half_int(const ChannelParams& p, int n, double r, cplx W);
cplx omega_n_direct(const ChannelParams& p, int n, cplx W);

}  // namespace

Kinematics kinematics(cplx W, double m) {
  auto polar_up = [](cplx w, double& rho, double& phi) {
    rho = std::abs(w);
    phi = std::arg(w);
    if (phi < 0.0) phi += 2.0 * kPi;
  };
  double rm, pm, rp, pp;
  polar_up(W - m, rm, pm);
  polar_up(W + m, rp, pp);
  Kinematics kin;
  kin.K = std::sqrt(rm * rp) * std::exp(kI * (0.5 * (pm + pp)));
  kin.Lambda = std::sqrt(rm / rp) * std::exp(kI * (0.5 * (pm - pp)));
  return kin;
}

Doublet basis_doublet(const ChannelParams& p, cplx ups, double r, cplx W) {
  auto kin = kinematics(W, p.m);
  cplx iK = kI * kin.K;
  cplx aW = p.q * W / iK;
  cplx be = 1.0 + 2.0 * ups;
  cplx z = -2.0 * iK * r;
  cplx e1 = std::exp(iK * r) * kummer_phi(ups + aW, be, z);
  cplx e2 = std::exp(-iK * r) * kummer_phi(ups - aW, be, -z);
  cplx phi_p = e1 + e2;
  cplx phi_m = (e1 - e2) / iK;
  cplx up2 = (static_cast<double>(p.kappa) + ups) / p.q;
  cplx pref = 0.5 * std::exp(ups * std::log(p.m * r));
  Doublet f;
  f[0] = pref * (phi_p + phi_m * (p.m + W) * up2);
  f[1] = pref * (phi_p * up2 + phi_m * (p.m - W));
  return f;
}

namespace {

Doublet v1_doublet(const ChannelParams& p, double r, cplx W) {
  cplx ups = p.upsilon();
  auto kin = kinematics(W, p.m);
  cplx iK = kI * kin.K;
  cplx al = ups + p.q * W / iK;
  cplx be = 1.0 + 2.0 * ups;
  cplx z = -2.0 * iK * r;
  cplx a_plus = (ups * kin.K - kI * p.q * W) /
                (static_cast<double>(p.kappa) * kin.K - kI * p.q * p.m);
  cplx b = (static_cast<double>(p.kappa) * kin.K + kI * p.q * p.m) / kin.K;
  cplx B = std::exp(log_gamma(-ups + p.q * W / iK) - log_gamma(-2.0 * ups)) /
           (1.0 - a_plus);
  cplx pref = B * std::exp(ups * std::log(p.m * r) + iK * r);
  cplx psi1 = tricomi_psi(al, be, z);
  cplx psi2 = tricomi_psi(al + 1.0, be, z);
  cplx il = kI * kin.Lambda;
  Doublet f;
  f[0] = pref * (psi1 - b * psi2 * (-1.0));
  f[1] = pref * (psi1 * il - b * psi2 * il);
  return f;
}

Doublet u1_critical(const ChannelParams& p, double r, cplx W) {
  return basis_doublet(p, 0.0, r, W);
}

Doublet u2_critical(const ChannelParams& p, double r, cplx W) {
  // d/dUpsilon of the basis doublet at Upsilon = 0, fixed coupling, via
  // Richardson-extrapolated central differences, minus (zeta/q) * U1.
  double h = 2e-5;
  auto diff = [&](double step) -> Doublet {
    return (basis_doublet(p, cplx(step, 0.0), r, W) -
            basis_doublet(p, cplx(-step, 0.0), r, W)) /
           (2.0 * step);
  };
  Doublet d_h = diff(h);
  Doublet d_h2 = diff(0.5 * h);
  Doublet deriv = (4.0 * d_h2 - d_h) / 3.0;
  return deriv - (static_cast<double>(p.zeta()) / p.q) * u1_critical(p, r, W);
}

Doublet v1_critical(const ChannelParams& p, double r, cplx W) {
  auto kin = kinematics(W, p.m);
  cplx iK = kI * kin.K;
  double qc = p.q_c();
  double zeta = p.zeta();
  cplx al = qc * W / iK;
  cplx a = W / (p.m + kI * zeta * kin.K);
  cplx b = qc * (zeta * kin.K + kI * p.m) / kin.K;
  cplx z = -2.0 * iK * r;
  cplx pref = -std::exp(log_gamma(al)) / (1.0 - a) * std::exp(iK * r);
  cplx psi1 = tricomi_psi(al, 1.0, z);
  cplx psi2 = tricomi_psi(al + 1.0, 1.0, z);
  cplx il = kI * kin.Lambda;
  Doublet f;
  f[0] = pref * (psi1 + b * psi2);
  f[1] = pref * (psi1 * il - b * psi2 * il);
  return f;
}

Doublet u2_exact_half_int(const ChannelParams& p, int n, double r, cplx W) {
  double detune = 1e-4;
  ChannelParams pa = at_gamma(p, 0.5 * (n + detune));
  ChannelParams pb = at_gamma(p, 0.5 * (n - detune));
  return 0.5 * (eval_solution(SolutionKind::Un2, pa, r, W, n) +
                eval_solution(SolutionKind::Un2, pb, r, W, n));
}

cplx omega_n_direct(const ChannelParams& p, int n, cplx W) {
  cplx an = omega_coeff_An(p, n, W);
  double g2 = 2.0 * p.gamma_val();
  cplx denom = 1.0 + (p.q / g2) * omega_tilde(p, W) * an;
  return omega(p, W) / denom;
}

}  // namespace

Doublet eval_solution(SolutionKind kind, const ChannelParams& p, double r, cplx W,
                      int n) {
  if (r <= 0.0)
    throw NumericsError("NonPositiveRadius", "eval_solution requires r > 0");
  cplx ups = p.upsilon();
  bool real_ups = (ups.imag() == 0.0) && !p.is_critical();

  switch (kind) {
    case SolutionKind::U1:
      if (p.is_critical()) return u1_critical(p, r, W);
      return basis_doublet(p, ups, r, W);
    case SolutionKind::U2:
      if (p.is_critical())
        throw NumericsError("CriticalCharge", "U2 degenerates at the critical coupling");
      if (real_ups && dist_to_int(2.0 * ups.real()) <= kPoleTol)
        throw NumericsError("UnsupportedAtHalfIntegerGamma",
                            "U2 undefined at 2*gamma = n; use Un2");
      return basis_doublet(p, -ups, r, W);
    case SolutionKind::V1:
      if (p.is_critical())
        throw NumericsError("CriticalCharge", "V1 degenerates at the critical coupling");
      if (real_ups && dist_to_int(2.0 * ups.real()) < kHalfIntWindow &&
          std::round(2.0 * ups.real()) >= 1.0)
        throw NumericsError("UnsupportedAtHalfIntegerGamma",
                            "V1 loses accuracy near 2*gamma = n; use Vn1");
      return v1_doublet(p, r, W);
    case SolutionKind::Un2: {
      if (!real_ups)
        throw NumericsError("OutsideNeighborhood", "Un2 requires real gamma");
      double g2 = 2.0 * ups.real();
      if (n < 1 || std::abs(g2 - n) > kHalfIntWindow)
        throw NumericsError("OutsideNeighborhood",
                            "Un2 requires |2*gamma - n| <= 0.05");
      if (std::abs(g2 - n) < kExactHalfInt) return u2_exact_half_int(p, n, r, W);
      cplx an = omega_coeff_An(p, n, W);
      cplx g_m2g = supercrit::gamma(cplx(-g2, 0.0));
      return basis_doublet(p, -ups, r, W) - g_m2g * an * basis_doublet(p, ups, r, W);
    }
    case SolutionKind::Vn1: {
      if (!real_ups)
        throw NumericsError("OutsideNeighborhood", "Vn1 requires real gamma");
      double g2 = 2.0 * ups.real();
      if (n < 1 || std::abs(g2 - n) > kHalfIntWindow)
        throw NumericsError("OutsideNeighborhood",
                            "Vn1 requires |2*gamma - n| <= 0.05");
      cplx om_n = omega_n(p, n, W);
      Doublet un2 = eval_solution(SolutionKind::Un2, p, r, W, n);
      return eval_solution(SolutionKind::U1, p, r, W) + (p.q / g2) * om_n * un2;
    }
    case SolutionKind::U2_0:
      if (!p.is_critical())
        throw NumericsError("CriticalKindOutsideCriticalCharge",
                            "U2_0 only defined at the critical coupling");
      return u2_critical(p, r, W);
    case SolutionKind::V1_0:
      if (!p.is_critical())
        throw NumericsError("CriticalKindOutsideCriticalCharge",
                            "V1_0 only defined at the critical coupling");
      return v1_critical(p, r, W);
  }
  throw NumericsError("InvalidKind", "unknown solution kind");
}

cplx omega_tilde(const ChannelParams& p, cplx W) {
  if (p.is_critical())
    throw NumericsError("CriticalCharge", "omega_tilde undefined at critical coupling");
  cplx ups = p.upsilon();
  double kap = p.kappa;

  if (on_real_gap(W, p.m)) {
    double E = W.real();
    double tau = std::sqrt((p.m - E) * (p.m + E));
    double s = p.q * E / tau;
    cplx ratio = gamma_ratio_reflected(ups, s);
    cplx num = p.q * (p.m - E) - (kap + ups) * tau;
    cplx den = p.q * (p.m - E) - (kap - ups) * tau;
    return supercrit::gamma(1.0 + 2.0 * ups) / p.q *
           std::exp(-2.0 * ups * std::log(2.0 * tau / p.m)) * (num / den) * ratio;
  }

  auto kin = kinematics(W, p.m);
  cplx iK = kI * kin.K;
  cplx aW = p.q * W / iK;
  cplx a_p = (ups * kin.K - kI * p.q * W) / (kap * kin.K - kI * p.q * p.m);
  cplx a_m = (-ups * kin.K - kI * p.q * W) / (kap * kin.K - kI * p.q * p.m);
  return supercrit::gamma(1.0 + 2.0 * ups) / p.q *
         std::exp(log_gamma(-ups + aW) - log_gamma(ups + aW) -
                  2.0 * ups * std::log(-2.0 * iK / p.m)) *
         ((1.0 - a_m) / (1.0 - a_p));
}

cplx omega(const ChannelParams& p, cplx W) {
  if (p.is_critical())
    throw NumericsError("CriticalCharge", "omega undefined at critical coupling; use omega_0");
  cplx ups = p.upsilon();
  if (ups.imag() == 0.0 && dist_to_int(2.0 * ups.real()) <= kPoleTol)
    throw NumericsError("HalfIntegerGamma",
                        "omega degenerates at 2*gamma = n; use omega_n");
  return omega_tilde(p, W) * recip_gamma(-2.0 * ups);
}

cplx omega_coeff_An(const ChannelParams& p, int n, cplx W) {
  if (n < 1 || n >= 2 * std::abs(p.kappa))
    throw NumericsError("OutsideNeighborhood", "A_n needs 1 <= n < 2|kappa|");
  ChannelParams pn = at_gamma(p, 0.5 * n);
  return -(static_cast<double>(n) / pn.q) / omega_tilde(pn, W);
}

cplx omega_n(const ChannelParams& p, int n, cplx W) {
  cplx ups = p.upsilon();
  if (ups.imag() != 0.0 || p.is_critical())
    throw NumericsError("OutsideNeighborhood", "omega_n requires real gamma");
  double g2 = 2.0 * ups.real();
  if (n < 1 || std::abs(g2 - n) > kHalfIntWindow)
    throw NumericsError("OutsideNeighborhood", "omega_n requires |2*gamma - n| <= 0.05");
  if (std::abs(g2 - n) < kExactHalfInt) {
    double detune = 1e-4;
    ChannelParams pa = at_gamma(p, 0.5 * (n + detune));
    ChannelParams pb = at_gamma(p, 0.5 * (n - detune));
    return 0.5 * (omega_n_direct(pa, n, W) + omega_n_direct(pb, n, W));
  }
  return omega_n_direct(p, n, W);
}

cplx omega_0(const ChannelParams& p, cplx W) {
  if (!p.is_critical())
    throw NumericsError("NotCriticalCharge", "omega_0 requires the critical coupling");
  double qc = p.q_c();
  double zeta = p.zeta();
  if (on_real_gap(W, p.m)) {
    double E = W.real();
    if (E == 0.0)
      throw NumericsError("OnThresholds", "omega_0 has a pole at E = 0");
    double tau = std::sqrt((p.m - E) * (p.m + E));
    cplx psi_val = digamma(cplx(-qc * E / tau, 0.0));
    return (std::log(2.0 * tau / p.m) + psi_val - (tau + zeta * p.m) / (2.0 * qc * E) -
            2.0 * digamma(cplx(1.0, 0.0)) + zeta / (2.0 * qc)) /
           qc;
  }
  auto kin = kinematics(W, p.m);
  cplx iK = kI * kin.K;
  return (std::log(-2.0 * iK / p.m) + digamma(-kI * qc * W / kin.K) +
          (zeta * (W - p.m) + kI * kin.K) / (2.0 * qc * W) -
          2.0 * digamma(cplx(1.0, 0.0))) /
         qc;
}

std::pair<Doublet, Doublet> small_r_basis(const ChannelParams& p, double r) {
  double kap = p.kappa;
  if (p.is_critical()) {
    double zeta = p.zeta();
    Doublet c1(1.0, zeta);
    Doublet c2 = std::log(p.m * r) * c1;
    c2[1] += 1.0 / p.q_c();
    c2 -= (zeta / p.q_c()) * c1;
    return {c1, c2};
  }
  cplx ups = p.upsilon();
  cplx wp = std::exp(ups * std::log(p.m * r));
  Doublet c1(wp, wp * (kap + ups) / p.q);
  Doublet c2(1.0 / wp, (kap - ups) / (p.q * wp));
  return {c1, c2};
}

AsymptoticCoefficients asymptotic_coefficients(const ChannelParams& p,
                                               const std::vector<double>& radii,
                                               const std::vector<Doublet>& values) {
  if (radii.size() != values.size() || radii.size() < 2)
    throw NumericsError("FitIllConditioned",
                        "asymptotic_coefficients needs >= 2 matching samples");
  const int nr = static_cast<int>(radii.size());
  Eigen::MatrixXcd A(2 * nr, 2);
  Eigen::VectorXcd b(2 * nr);
  for (int i = 0; i < nr; ++i) {
    auto [col1, col2] = small_r_basis(p, radii[i]);
    A(2 * i, 0) = col1[0];
    A(2 * i, 1) = col2[0];
    A(2 * i + 1, 0) = col1[1];
    A(2 * i + 1, 1) = col2[1];
    b(2 * i) = values[i][0];
    b(2 * i + 1) = values[i][1];
  }
  // column equilibration so the singular-value test reflects resolvability
  double s1 = A.col(0).norm(), s2 = A.col(1).norm();
  if (s1 == 0.0 || s2 == 0.0)
    throw NumericsError("FitIllConditioned", "degenerate basis columns");
  Eigen::MatrixXcd As = A;
  As.col(0) /= s1;
  As.col(1) /= s2;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(As, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.singularValues()(1) < 1e-10 * svd.singularValues()(0))
    throw NumericsError("FitIllConditioned", "basis columns indistinguishable");
  Eigen::Vector2cd x = svd.solve(b);
  x(0) /= s1;
  x(1) /= s2;
  double resid = (A * x - b).norm() / b.norm();
  if (resid > 1e-3)
    throw NumericsError("FitIllConditioned", "residual too large for a two-term fit");
  return {x(0), x(1), resid};
}

}  // namespace supercrit
