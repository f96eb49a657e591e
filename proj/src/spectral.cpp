#include "supercrit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include <boost/math/tools/roots.hpp>

namespace supercrit {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
const cplx kI{0.0, 1.0};
constexpr double kThresholdGuard = 1e-8;  // in units of m
// beyond this value of 2*tau*r the regular-side combination cancels too
// heavily in doubles and the recessive form takes over
constexpr double kTailSwitch = 20.0;

double tau_of(double E, double m) { return std::sqrt((m - E) * (m + E)); }

double s_of(double E, double q, double m) { return q * E / tau_of(E, m); }

double e_of_s(double s, double q, double m) {
  return m * s / std::sqrt(s * s + q * q);
}

double five_point_deriv(const std::function<double(double)>& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

}  // namespace

std::vector<double> closed_form_levels(const ChannelParams& p, int count) {
  RegionClass region = classify(p);
  if (region != RegionClass::Region1 && region != RegionClass::Region2)
    throw NumericsError("FormulaNotApplicable",
                        "closed-form levels exist only below the critical coupling");
  double g = p.gamma_val();
  int n0 = (p.kappa > 0) ? 1 : 0;
  std::vector<double> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    double n = n0 + i;
    double d = n + g;
    out.push_back(p.m / std::sqrt(1.0 + p.q * p.q / (d * d)));
  }
  return out;
}

std::vector<BoundState> find_discrete_spectrum(const ChannelParams& p,
                                               const ExtensionParam& ext,
                                               const SpectrumWindow& win) {
  RegionClass region = classify(p);
  require_compatible(region, ext);
  double m = p.m;
  double lo = std::max(win.e_lo, -m * (1.0 - kThresholdGuard));
  double hi = std::min(win.e_hi, m * (1.0 - kThresholdGuard));
  if (!(lo < hi))
    throw NumericsError("EmptyWindow", "spectrum window is empty after clamping");

  auto omre = [&](double E) -> double {
    return omega_ext(p, ext, cplx(E, 0.0)).real();
  };

  // Mesh step in s: a cell must never contain both a root and a pole of the
  // scanned function, so it is bounded by the pole-zero separation of omega
  // (|2*gamma - nearest integer| in s-units; in the half-integer window
  // omega_ext already switches to the regularized chart, which keeps the
  // separation of order one).
  double step = win.mesh_step;
  if (region == RegionClass::Region1 || region == RegionClass::Region2) {
    double g2 = 2.0 * p.gamma_val();
    double sep = std::max(std::abs(g2 - std::round(g2)), 0.05);
    step = std::min(step, std::max(sep / 3.0, 1e-4));
  } else {
    step = std::min(step, 0.05);
  }

  double s_lo = s_of(lo, p.q, m), s_hi = s_of(hi, p.q, m);
  long npts = std::lround(std::ceil((s_hi - s_lo) / step)) + 1;
  npts = std::clamp(npts, 8L, 2000000L);
  double ds = (s_hi - s_lo) / (npts - 1);

  std::vector<BoundState> found;
  auto scan = [&](const std::function<double(double)>& g) {
    auto eval = [&](double E) -> std::optional<double> {
      try {
        double v = g(E);
        if (!std::isfinite(v)) return std::nullopt;
        return v;
      } catch (const NumericsError&) {
        return std::nullopt;
      }
    };
    int hits = 0;
    double prev_e = lo;
    std::optional<double> prev_v = eval(lo);
    for (long i = 1; i < npts && hits < win.max_levels; ++i) {
      double e = (i == npts - 1) ? hi : e_of_s(s_lo + i * ds, p.q, m);
      std::optional<double> v = eval(e);
      if (prev_v && v && (*prev_v) * (*v) < 0.0) {
        try {
          auto tol = boost::math::tools::eps_tolerance<double>(52);
          std::uintmax_t iters = 120;
          auto wrapped = [&](double x) { return g(x); };
          auto bracket =
              boost::math::tools::toms748_solve(wrapped, prev_e, e, *prev_v, *v, tol, iters);
          double root = 0.5 * (bracket.first + bracket.second);
          double tau_r = tau_of(root, m);
          double h = std::max(1e-4 * tau_r * tau_r / m, 1e-13 * m);
          double deriv = five_point_deriv(omre, root, h);
          // reject pole crossings: genuine levels have omega_ext' < 0 and a
          // residual far below the local variation scale
          double gres = std::abs(omre(root));
          double gderiv = std::abs(deriv);
          // the factor leaves headroom over the evaluation noise floor near
          // the thresholds, where the whole function scale is ~deriv*h
          bool small_residual = gres <= 1e-2 * std::max(gderiv * h, 1e-300);
          if (std::isfinite(deriv) && deriv < 0.0 && small_residual) {
            ++hits;
            found.push_back({0, root, -1.0 / deriv});
          }
        } catch (const std::exception&) {
          // unrefinable bracket (evaluation failure inside): skip
        }
      }
      prev_e = e;
      prev_v = v;
    }
  };

  scan(omre);
  // Roots adjacent to a pole of omega give no resolvable sign change in
  // omega_ext itself; the same root seen through 1/omega sits next to a
  // regular point instead, so the two passes cover each other's misses.
  if (ext.kind == ExtensionParam::Kind::Xi && ext.value != 0.0) {
    if (region == RegionClass::Region2) {
      double g2 = 2.0 * p.gamma_val();
      scan([&, g2](double E) -> double {
        return (1.0 / omega(p, cplx(E, 0.0))).real() - p.q / (g2 * ext.value);
      });
    } else if (region == RegionClass::Critical) {
      scan([&](double E) -> double {
        return (1.0 / omega_0(p, cplx(E, 0.0))).real() - p.q_c() / ext.value;
      });
    }
  }

  std::sort(found.begin(), found.end(),
            [](const BoundState& a, const BoundState& b) { return a.energy < b.energy; });
  std::vector<BoundState> merged;
  for (const BoundState& b : found) {
    if (!merged.empty() && std::abs(merged.back().energy - b.energy) <= 1e-10 * m)
      continue;
    merged.push_back(b);
    if (static_cast<int>(merged.size()) >= win.max_levels) break;
  }
  for (size_t i = 0; i < merged.size(); ++i) merged[i].index = static_cast<int>(i);
  return merged;
}

double continuum_density(const ChannelParams& p, const ExtensionParam& ext, double E) {
  if (std::abs(E) <= p.m * (1.0 + kThresholdGuard))
    throw NumericsError("OnThresholds",
                        "continuum density needs |E| > m away from the thresholds");
  cplx om = omega_ext(p, ext, cplx(E, 0.0));
  return (1.0 / om).imag() / kPi;
}

double theta_phase(const ChannelParams& p, double E) {
  if (classify(p) != RegionClass::Overcritical)
    throw NumericsError("NotOvercritical", "theta_phase requires q > |kappa|");
  if (std::abs(E) >= p.m * (1.0 - kThresholdGuard))
    throw NumericsError("OnThresholds", "theta_phase is defined inside the gap");
  double sigma = p.sigma_val();
  cplx wt = p.q / (2.0 * kI * sigma) * omega(p, cplx(E, 0.0));
  return -0.5 * std::arg(wt);
}

std::vector<double> theta_phase_grid(const ChannelParams& p,
                                     const std::vector<double>& energies) {
  std::vector<double> out;
  out.reserve(energies.size());
  for (double e : energies) {
    double th = theta_phase(p, e);
    if (!out.empty()) {
      // unwrap onto the continuous branch (pi-periodic ambiguity)
      double prev = out.back();
      th += kPi * std::round((prev - th) / kPi);
    }
    out.push_back(th);
  }
  return out;
}

namespace {

// U-side: the solution obeying the extension's boundary condition at r = 0.
Doublet extension_u_impl(const ChannelParams& p, const ExtensionParam& ext,
                         RegionClass region, double r, cplx W) {
  using K = ExtensionParam::Kind;
  switch (region) {
    case RegionClass::Region1:
      return eval_solution(SolutionKind::U1, p, r, W);
    case RegionClass::Region2:
      if (ext.kind == K::Xi)
        return eval_solution(SolutionKind::U1, p, r, W) +
               ext.value * eval_solution(SolutionKind::U2, p, r, W);
      return eval_solution(SolutionKind::U2, p, r, W);
    case RegionClass::Critical:
      if (ext.kind == K::Xi)
        return eval_solution(SolutionKind::U2_0, p, r, W) +
               ext.value * eval_solution(SolutionKind::U1, p, r, W);
      return eval_solution(SolutionKind::U1, p, r, W);
    case RegionClass::Overcritical: {
      cplx eth = std::exp(kI * ext.value);
      return eth * eval_solution(SolutionKind::U1, p, r, W) +
             eval_solution(SolutionKind::U2, p, r, W) / eth;
    }
  }
  throw NumericsError("InvalidRegion", "unreachable");
}

// V-side: recessive at infinity, scaled so that -Wr(U, V) = omega_ext.
Doublet extension_v_impl(const ChannelParams& p, const ExtensionParam& ext,
                         RegionClass region, double r, cplx W) {
  using K = ExtensionParam::Kind;
  switch (region) {
    case RegionClass::Region1: {
      double g2 = 2.0 * p.gamma_val();
      double n = std::round(g2);
      if (n >= 1.0 && std::abs(g2 - n) < 0.05)
        return eval_solution(SolutionKind::Vn1, p, r, W, static_cast<int>(n));
      return eval_solution(SolutionKind::V1, p, r, W);
    }
    case RegionClass::Region2: {
      Doublet v1 = eval_solution(SolutionKind::V1, p, r, W);
      if (ext.kind == K::Xi) return v1;
      double g2 = 2.0 * p.gamma_val();
      return (g2 / (p.q * omega(p, W))) * v1;
    }
    case RegionClass::Critical: {
      Doublet v10 = eval_solution(SolutionKind::V1_0, p, r, W);
      if (ext.kind == K::Xi) return v10;
      return v10 / (p.q_c() * omega_0(p, W));
    }
    case RegionClass::Overcritical: {
      double sigma = p.sigma_val();
      cplx eth = std::exp(kI * ext.value);
      cplx wt = p.q / (2.0 * kI * sigma) * omega(p, W);
      return 2.0 / (1.0 / eth + eth * wt) * eval_solution(SolutionKind::V1, p, r, W);
    }
  }
  throw NumericsError("InvalidRegion", "unreachable");
}

}  // namespace

Doublet extension_u(const ChannelParams& p, const ExtensionParam& ext, double r,
                    cplx W) {
  RegionClass region = classify(p);
  require_compatible(region, ext);
  return extension_u_impl(p, ext, region, r, W);
}

Doublet extension_v(const ChannelParams& p, const ExtensionParam& ext, double r,
                    cplx W) {
  RegionClass region = classify(p);
  require_compatible(region, ext);
  return extension_v_impl(p, ext, region, r, W);
}

ResolventBasis resolvent_pair(const ChannelParams& p, const ExtensionParam& ext,
                              double r, cplx W) {
  RegionClass region = classify(p);
  require_compatible(region, ext);
  ResolventBasis rb;
  rb.omega_value = omega_ext(p, ext, W);
  rb.u = extension_u_impl(p, ext, region, r, W);
  rb.v = extension_v_impl(p, ext, region, r, W);
  return rb;
}

Eigen::Matrix2cd greens_function(const ChannelParams& p, const ExtensionParam& ext,
                                 double r, double rp, cplx W) {
  if (W.imag() <= 0.0)
    throw NumericsError("RealAxisW",
                        "greens_function requires Im W > 0; see continuum_density "
                        "and find_discrete_spectrum for boundary values");
  double r_less = std::min(r, rp), r_great = std::max(r, rp);
  ResolventBasis in = resolvent_pair(p, ext, r_less, W);
  ResolventBasis out = resolvent_pair(p, ext, r_great, W);
  Eigen::Matrix2cd g;
  if (r >= rp)
    g = out.v * in.u.transpose();
  else
    g = in.u * out.v.transpose();
  return g / in.omega_value;
}

std::vector<Doublet> eigenfunction(const ChannelParams& p, const ExtensionParam& ext,
                                   double E, const std::vector<double>& radii) {
  RegionClass region = classify(p);
  require_compatible(region, ext);
  double m = p.m;
  if (std::abs(std::abs(E) - m) <= kThresholdGuard * m)
    throw NumericsError("OnThresholds", "eigenfunction undefined on the thresholds");

  std::vector<Doublet> out;
  out.reserve(radii.size());

  if (std::abs(E) > m) {
    double dens = continuum_density(p, ext, E);
    // just below the lower threshold the weight underflows like
    // exp(-2 pi q |E| / k) while the chart-normalized solution grows like its
    // reciprocal; past this point the normalized doublet is zero to double
    // precision and forming the product would overflow
    if (!(dens > 1e-240)) {
      out.assign(radii.size(), Doublet::Zero());
      return out;
    }
    double scale = std::sqrt(dens);
    for (double r : radii)
      out.push_back(scale * extension_u_impl(p, ext, region, r, cplx(E, 0.0)));
    return out;
  }

  // discrete point: validate it is a level of this extension
  auto omre = [&](double x) { return omega_ext(p, ext, cplx(x, 0.0)).real(); };
  double tau = tau_of(E, m);
  double h = std::max(1e-4 * tau * tau / m, 1e-13 * m);
  double f0 = omre(E);
  double deriv = five_point_deriv(omre, E, h);
  if (!(deriv < 0.0) || std::abs(f0) > 1e-5 * std::abs(deriv) * std::max(h, 1e-12))
    throw NumericsError("NotASpectrumPoint",
                        "E is not a discrete level of this extension");
  double scale = std::sqrt(-1.0 / deriv);
  for (double r : radii) {
    // far tail: the boundary-condition combination loses all digits to
    // cancellation; the recessive solution equals it at the level
    Doublet f = (2.0 * tau * r > kTailSwitch)
                    ? extension_v_impl(p, ext, region, r, cplx(E, 0.0))
                    : extension_u_impl(p, ext, region, r, cplx(E, 0.0));
    out.push_back(scale * f);
  }
  return out;
}

}  // namespace supercrit
