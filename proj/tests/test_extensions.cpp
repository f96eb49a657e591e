#include <cmath>
#include <vector>

#include "doctest.h"
#include "supercrit/spectral.hpp"

using namespace supercrit;

namespace {

double rel_err(cplx got, cplx ref) {
  return std::abs(got - ref) / std::max(std::abs(ref), 1e-300);
}

BoundaryForm sample_form(const ChannelParams& p, const ExtensionParam& ext,
                         double E) {
  std::vector<double> radii = {1e-8, 2e-8, 4e-8, 8e-8};
  std::vector<Doublet> vals;
  for (double r : radii) vals.push_back(extension_u(p, ext, r, cplx(E, 0.0)));
  return asymmetry_form(p, radii, vals);
}

}  // namespace

TEST_SUITE("extensions") {

TEST_CASE("region classification and its boundaries") {
  CHECK(classify({0.3, -1}) == RegionClass::Region1);
  CHECK(classify({0.3, 2}) == RegionClass::Region1);
  double qu = ChannelParams{0.0, -1}.q_u();  // sqrt(3)/2
  CHECK(classify({qu, -1}) == RegionClass::Region1);  // boundary belongs to Region1
  CHECK(classify({qu + 1e-9, -1}) == RegionClass::Region2);
  CHECK(classify({0.99, -1}) == RegionClass::Region2);
  CHECK(classify({1.0, -1}) == RegionClass::Critical);
  CHECK(classify({1.0 + 1e-13, -1}) == RegionClass::Critical);  // within tol
  CHECK(classify({1.2, -1}) == RegionClass::Overcritical);
  CHECK(classify({1.2, 2}) == RegionClass::Region1);
}

TEST_CASE("extension parameter counting") {
  CHECK(count_extension_parameters(0.5) == 0);
  CHECK(count_extension_parameters(std::sqrt(3.0) / 2.0) == 0);  // boundary
  CHECK(count_extension_parameters(std::sqrt(3.0) / 2.0 + 1e-9) == 2);
  CHECK(count_extension_parameters(1.0) == 2);
  CHECK(count_extension_parameters(1.5) == 2);
  CHECK(count_extension_parameters(std::sqrt(15.0) / 2.0) == 2);
  CHECK(count_extension_parameters(2.0) == 4);
  CHECK(count_extension_parameters(5.0) == 10);
}

TEST_CASE("region and extension kind must match") {
  CHECK_NOTHROW(require_compatible(RegionClass::Region1, ExtensionParam::unique()));
  CHECK_NOTHROW(require_compatible(RegionClass::Region2, ExtensionParam::xi(0.4)));
  CHECK_NOTHROW(require_compatible(RegionClass::Region2, ExtensionParam::xi_infinity()));
  CHECK_NOTHROW(require_compatible(RegionClass::Critical, ExtensionParam::xi(-1.0)));
  CHECK_NOTHROW(require_compatible(RegionClass::Overcritical, ExtensionParam::theta(0.3)));
  CHECK_THROWS_AS(require_compatible(RegionClass::Region1, ExtensionParam::xi(0.0)),
                  NumericsError);
  CHECK_THROWS_AS(require_compatible(RegionClass::Region2, ExtensionParam::theta(0.0)),
                  NumericsError);
  CHECK_THROWS_AS(require_compatible(RegionClass::Overcritical, ExtensionParam::xi(0.1)),
                  NumericsError);
  try {
    require_compatible(RegionClass::Critical, ExtensionParam::theta(1.0));
    FAIL("expected a throw");
  } catch (const NumericsError& e) {
    CHECK(e.name == "RegionExtensionMismatch");
  }
}

TEST_CASE("omega_ext assembles from omega per region") {
  cplx W(0.35, 0.45);
  ChannelParams r2{0.95, -1};
  double g = r2.gamma_val();
  cplx om = omega(r2, W);
  CHECK(rel_err(omega_ext(r2, ExtensionParam::xi(0.7), W),
                om - (2.0 * g / r2.q) * 0.7) <= 1e-12);
  CHECK(rel_err(omega_ext(r2, ExtensionParam::xi_infinity(), W),
                -4.0 * g * g / (r2.q * r2.q * om)) <= 1e-12);
  ChannelParams cr{1.0, -1};
  cplx om0 = omega_0(cr, W);
  CHECK(rel_err(omega_ext(cr, ExtensionParam::xi(0.3), W), om0 - 0.3 / cr.q_c()) <=
        1e-12);
  CHECK(rel_err(omega_ext(cr, ExtensionParam::xi_infinity(), W),
                -1.0 / (cr.q_c() * cr.q_c() * om0)) <= 1e-12);
}

TEST_CASE("omega_ext is real on the gap") {
  for (auto [p, ext] : std::vector<std::pair<ChannelParams, ExtensionParam>>{
           {{0.5, -1}, ExtensionParam::unique()},
           {{0.95, -1}, ExtensionParam::xi(0.7)},
           {{1.0, -1}, ExtensionParam::xi(-0.4)},
           {{1.3, -1}, ExtensionParam::theta(0.9)}}) {
    for (double E : {-0.7, 0.2, 0.85}) {
      cplx v = omega_ext(p, ext, cplx(E, 0.0));
      CHECK(std::abs(v.imag()) <= 1e-10 * std::max(std::abs(v), 1.0));
    }
  }
}

TEST_CASE("boundary-condition membership") {
  ChannelParams p{0.95, -1};
  auto ext = ExtensionParam::xi(0.7);
  BoundaryForm bf = sample_form(p, ext, 0.2);
  // a solution of its own boundary condition has a vanishing asymmetry form
  CHECK(std::abs(bf.delta) <=
        1e-6 * (std::abs(bf.c1) + std::abs(bf.c2)) * std::max(std::abs(bf.c1), 1.0));
  CHECK(satisfies_boundary_condition(p, ext, bf, 1e-2));
  CHECK_FALSE(satisfies_boundary_condition(p, ExtensionParam::xi(0.2), bf, 1e-2));
  CHECK_FALSE(satisfies_boundary_condition(p, ExtensionParam::xi_infinity(), bf, 1e-2));

  BoundaryForm bi = sample_form(p, ExtensionParam::xi_infinity(), 0.2);
  CHECK(satisfies_boundary_condition(p, ExtensionParam::xi_infinity(), bi, 3e-2));
  CHECK_FALSE(satisfies_boundary_condition(p, ext, bi, 1e-2));

  ChannelParams oc{1.3, -1};
  BoundaryForm bt = sample_form(oc, ExtensionParam::theta(0.4), 0.2);
  CHECK(satisfies_boundary_condition(oc, ExtensionParam::theta(0.4), bt, 1e-2));
  CHECK_FALSE(satisfies_boundary_condition(oc, ExtensionParam::theta(1.2), bt, 1e-2));
}

}  // TEST_SUITE
