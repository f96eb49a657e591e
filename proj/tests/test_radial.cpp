#include <cmath>
#include <vector>

#include "doctest.h"
#include "supercrit/radial.hpp"

using namespace supercrit;

namespace {

double rel_err(cplx got, cplx ref) {
  return std::abs(got - ref) / std::max(std::abs(ref), 1e-300);
}

// five-point derivative of a doublet-valued radial function
Doublet deriv(SolutionKind kind, const ChannelParams& p, double r, cplx W, int n = 0) {
  double h = 1e-3 * r;
  auto f = [&](double x) { return eval_solution(kind, p, x, W, n); };
  return (-f(r + 2 * h) + 8.0 * f(r + h) - 8.0 * f(r - h) + f(r - 2 * h)) / (12.0 * h);
}

// residual of (h - W) F at radius r, relative to |W| |F|
double ode_residual(SolutionKind kind, const ChannelParams& p, double r, cplx W,
                    int n = 0) {
  Doublet F = eval_solution(kind, p, r, W, n);
  Doublet dF = deriv(kind, p, r, W, n);
  double k = p.kappa;
  Doublet hF;
  hF[0] = (p.m - p.q / r) * F[0] - dF[1] + (k / r) * F[1];
  hF[1] = dF[0] + (k / r) * F[0] + (-p.m - p.q / r) * F[1];
  return (hF - W * F).norm() / (std::abs(W) * F.norm() + 1e-300);
}

}  // namespace

TEST_SUITE("radial") {

TEST_CASE("kinematics boundary values") {
  Kinematics above = kinematics(cplx(2.0, 0.0), 1.0);
  CHECK(rel_err(above.K, cplx(std::sqrt(3.0))) <= 1e-14);
  Kinematics gap = kinematics(cplx(0.5, 0.0), 1.0);
  CHECK(rel_err(gap.K, cplx(0.0, std::sqrt(0.75))) <= 1e-14);
  Kinematics below = kinematics(cplx(-2.0, 0.0), 1.0);
  CHECK(rel_err(below.K, cplx(-std::sqrt(3.0))) <= 1e-14);
  // K and Lambda are consistent: K = Lambda * (W + m)
  cplx W(0.3, 0.8);
  Kinematics kin = kinematics(W, 1.0);
  CHECK(rel_err(kin.K, kin.Lambda * (W + 1.0)) <= 1e-13);
}

TEST_CASE("basis solutions satisfy the radial system") {
  ChannelParams sub{0.95, -1};
  ChannelParams over{1.3, -1};
  ChannelParams crit{1.0, -1};
  cplx W(0.3, 0.4);
  for (double r : {0.05, 0.6, 3.0}) {
    CHECK(ode_residual(SolutionKind::U1, sub, r, W) <= 1e-8);
    CHECK(ode_residual(SolutionKind::U2, sub, r, W) <= 1e-8);
    CHECK(ode_residual(SolutionKind::V1, sub, r, W) <= 1e-8);
    CHECK(ode_residual(SolutionKind::U1, over, r, W) <= 1e-8);
    CHECK(ode_residual(SolutionKind::V1, over, r, W) <= 1e-8);
    CHECK(ode_residual(SolutionKind::U1, crit, r, W) <= 1e-8);
    CHECK(ode_residual(SolutionKind::U2_0, crit, r, W) <= 1e-7);
    CHECK(ode_residual(SolutionKind::V1_0, crit, r, W) <= 1e-7);
  }
}

TEST_CASE("wronskians are r-independent with the chart values") {
  ChannelParams p{0.95, -1};
  cplx W(0.2, 0.7);
  cplx expect = -2.0 * p.upsilon() / p.q;
  for (double r : {0.01, 0.4, 2.0, 9.0}) {
    Doublet u1 = eval_solution(SolutionKind::U1, p, r, W);
    Doublet u2 = eval_solution(SolutionKind::U2, p, r, W);
    // large r costs digits: both solutions grow while the Wronskian stays O(1)
    double tol = 1e-13 * u1.norm() * u2.norm() / std::abs(expect) + 1e-12;
    CHECK(rel_err(wronskian(u1, u2), expect) <= tol);
  }
  ChannelParams c{1.0, -1};
  for (double r : {0.05, 1.5}) {
    Doublet u1 = eval_solution(SolutionKind::U1, c, r, W);
    Doublet u20 = eval_solution(SolutionKind::U2_0, c, r, W);
    CHECK(rel_err(wronskian(u1, u20), cplx(1.0 / c.q_c())) <= 1e-8);
  }
}

TEST_CASE("U1 and U2 are real on the gap") {
  ChannelParams p{0.95, -1};
  for (double E : {-0.6, 0.1, 0.8}) {
    for (double r : {0.2, 1.7}) {
      Doublet u1 = eval_solution(SolutionKind::U1, p, r, cplx(E, 0.0));
      Doublet u2 = eval_solution(SolutionKind::U2, p, r, cplx(E, 0.0));
      CHECK(std::abs(u1[0].imag()) <= 1e-12 * u1.norm());
      CHECK(std::abs(u2[1].imag()) <= 1e-12 * u2.norm());
    }
  }
}

TEST_CASE("overcritical partners are conjugate at real W") {
  ChannelParams p{1.3, -1};
  Doublet u1 = eval_solution(SolutionKind::U1, p, 0.9, cplx(0.25, 0.0));
  Doublet u2 = eval_solution(SolutionKind::U2, p, 0.9, cplx(0.25, 0.0));
  CHECK(rel_err(u2[0], std::conj(u1[0])) <= 1e-12);
  CHECK(rel_err(u2[1], std::conj(u1[1])) <= 1e-12);
}

TEST_CASE("V1 decomposes over the basis through omega") {
  ChannelParams p{0.95, -1};
  cplx W(0.3, 0.4);
  cplx om = omega(p, W);
  for (double r : {0.3, 1.1}) {
    Doublet v1 = eval_solution(SolutionKind::V1, p, r, W);
    Doublet u1 = eval_solution(SolutionKind::U1, p, r, W);
    Doublet u2 = eval_solution(SolutionKind::U2, p, r, W);
    Doublet built = u1 + (p.q / (2.0 * p.upsilon())) * om * u2;
    CHECK((v1 - built).norm() <= 1e-10 * v1.norm());
  }
}

TEST_CASE("omega spot value and gap reality") {
  ChannelParams p{0.95, -1};
  // independently computed 30-digit reference at a generic complex energy
  cplx ref(0.013223230145782, -0.102384660343082);
  CHECK(rel_err(omega(p, cplx(0.3, 0.4)), ref) <= 1e-12);
  // on the gap omega is real and agrees with the upper-half-plane limit
  for (double E : {-0.5, 0.3, 0.9}) {
    cplx og = omega(p, cplx(E, 0.0));
    CHECK(std::abs(og.imag()) <= 1e-12 * std::abs(og));
    cplx olim = omega(p, cplx(E, 1e-9));
    CHECK(rel_err(og, olim) <= 1e-6);
  }
}

TEST_CASE("omega_tilde stays finite across half-integer gamma") {
  // 2*gamma = 1 at q = sqrt(3)/2 for kappa = -1
  double qh = std::sqrt(3.0) / 2.0;
  cplx W(0.4, 0.2);
  cplx left = omega_tilde({qh - 1e-6, -1}, W);
  cplx mid = omega_tilde({qh, -1}, W);
  cplx right = omega_tilde({qh + 1e-6, -1}, W);
  CHECK(rel_err(left, mid) <= 1e-4);
  CHECK(rel_err(right, mid) <= 1e-4);
  CHECK(std::isfinite(std::abs(mid)));
}

TEST_CASE("omega_n matches omega through the basis-change identity") {
  // 1/omega_n = (q / 2 gamma) Gamma(-2 gamma) A_n + 1/omega near 2 gamma = n
  ChannelParams p{std::sqrt(3.0) / 2.0 + 3e-4, -1};
  int n = 1;
  double g = p.gamma_val();
  cplx W(0.25, 0.15);
  cplx lhs = 1.0 / omega_n(p, n, W);
  cplx rhs = (p.q / (2.0 * g)) * gamma(cplx(-2.0 * g)) * omega_coeff_An(p, n, W) +
             1.0 / omega(p, W);
  CHECK(rel_err(lhs, rhs) <= 1e-8);
}

TEST_CASE("small-r chart fits recover the coefficients") {
  ChannelParams p{0.95, -1};
  cplx W(0.2, 0.3);
  std::vector<double> radii = {1e-8, 2e-8, 4e-8, 8e-8};

  // exact synthetic data: the fit must return the combination exactly
  std::vector<Doublet> synth;
  for (double r : radii) {
    auto [c1, c2] = small_r_basis(p, r);
    synth.push_back(cplx(2.0, -1.0) * c1 + cplx(0.0, 3.0) * c2);
  }
  AsymptoticCoefficients as = asymptotic_coefficients(p, radii, synth);
  CHECK(rel_err(as.c1, cplx(2.0, -1.0)) <= 1e-10);
  CHECK(rel_err(as.c2, cplx(0.0, 3.0)) <= 1e-10);

  // basis solutions carry O(r) corrections, so the fit is only approximate;
  // the subdominant column absorbs up to O(r^{1-2 gamma}) of them
  std::vector<Doublet> u1s, u2s;
  for (double r : radii) {
    u1s.push_back(eval_solution(SolutionKind::U1, p, r, W));
    u2s.push_back(eval_solution(SolutionKind::U2, p, r, W));
  }
  AsymptoticCoefficients a1 = asymptotic_coefficients(p, radii, u1s);
  CHECK(rel_err(a1.c1, 1.0) <= 1e-5);
  CHECK(std::abs(a1.c2) <= 1e-5);
  AsymptoticCoefficients a2 = asymptotic_coefficients(p, radii, u2s);
  CHECK(std::abs(a2.c1) <= 0.02);
  CHECK(rel_err(a2.c2, 1.0) <= 1e-5);
}

TEST_CASE("error reporting") {
  CHECK_THROWS_AS(omega({1.0, -1}, cplx(0.3, 0.2)), NumericsError);  // critical
  try {
    omega_n({0.95, -1}, 1, cplx(0.3, 0.2));  // 2 gamma far from 1
    FAIL("expected a throw");
  } catch (const NumericsError& e) {
    CHECK(e.name == "OutsideNeighborhood");
  }
}

}  // TEST_SUITE
