#include <cmath>
#include <vector>

#include "doctest.h"
#include "supercrit/verify.hpp"

using namespace supercrit;

TEST_SUITE("verify") {

TEST_CASE("gauss-legendre rules integrate polynomials exactly") {
  const auto& [x, w] = gauss_legendre(12);
  REQUIRE(x.size() == 12);
  double s0 = 0.0, s10 = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    s0 += w[i];
    s10 += w[i] * std::pow(x[i], 10);
  }
  CHECK(std::abs(s0 - 2.0) <= 1e-14);
  CHECK(std::abs(s10 - 2.0 / 11.0) <= 1e-14);
}

TEST_CASE("norms: residue slope against direct quadrature") {
  for (auto [p, ext] : std::vector<std::pair<ChannelParams, ExtensionParam>>{
           {{0.5, -1}, ExtensionParam::unique()},
           {{0.95, -1}, ExtensionParam::xi(0.7)},
           {{0.95, -1}, ExtensionParam::xi_infinity()},
           {{1.0, -1}, ExtensionParam::xi(0.3)},
           {{1.0, -1}, ExtensionParam::xi_infinity()},
           {{1.3, -1}, ExtensionParam::theta(0.4)}}) {
    SpectrumWindow win{-0.95, 0.995};
    auto levels = find_discrete_spectrum(p, ext, win);
    REQUIRE(!levels.empty());
    for (size_t i = 0; i < std::min<size_t>(2, levels.size()); ++i) {
      NormResult nr = discrete_norm(p, ext, levels[i].energy);
      CAPTURE(p.q);
      CAPTURE(levels[i].energy);
      CHECK(std::abs(nr.via_quadrature - nr.via_slope) <=
            1e-5 * nr.via_slope + nr.tail_estimate);
      CHECK(nr.via_slope > 0.0);
    }
  }
}

TEST_CASE("distinct levels are orthogonal") {
  for (auto [p, ext] : std::vector<std::pair<ChannelParams, ExtensionParam>>{
           {{0.5, -1}, ExtensionParam::unique()},
           {{0.95, -1}, ExtensionParam::xi(0.7)},
           {{1.3, -1}, ExtensionParam::theta(0.4)}}) {
    SpectrumWindow win{-0.95, 0.99};
    auto levels = find_discrete_spectrum(p, ext, win);
    REQUIRE(levels.size() >= 2);
    OverlapResult ov = overlap_wronskian(p, ext, levels[0].energy, levels[1].energy);
    CHECK_FALSE(ov.finite_part_only);
    CHECK(std::abs(ov.value) <= 1e-9);
  }
}

TEST_CASE("discrete-continuum and continuum-continuum cross terms vanish") {
  ChannelParams p{0.95, -1};
  auto ext = ExtensionParam::xi(0.7);
  SpectrumWindow win{-0.95, 0.99};
  auto levels = find_discrete_spectrum(p, ext, win);
  REQUIRE(!levels.empty());
  OverlapResult dc = overlap_wronskian(p, ext, levels[0].energy, 1.8);
  CHECK(std::abs(dc.value) <= std::max(1e-8, 10.0 * dc.abs_err));
  OverlapResult cc = overlap_wronskian(p, ext, 1.5, 2.5);
  CHECK(cc.finite_part_only);
  CHECK(std::abs(cc.value) <= 1e-9);
}

TEST_CASE("continuum weight inverts the spectral density") {
  ChannelParams p{0.95, -1};
  for (double xi : {0.0, 0.7, -2.0}) {
    auto ext = ExtensionParam::xi(xi);
    for (double E : {1.25, 2.0, -3.0}) {
      double c = continuum_weight(p, ext, E);
      double q2 = continuum_density(p, ext, E);
      CAPTURE(xi);
      CAPTURE(E);
      CHECK(std::abs(c * q2 - 1.0) <= 1e-9);
    }
  }
  // the infinite-xi weight is the minus-exponent diagonal constant
  ContinuumConstants cc = continuum_constants(p, 1.6);
  CHECK(std::abs(continuum_weight(p, ExtensionParam::xi_infinity(), 1.6) -
                 cc.a_minus) <= 1e-12);
  CHECK(std::abs(continuum_weight({0.5, -1}, ExtensionParam::unique(), 1.6) -
                 continuum_constants({0.5, -1}, 1.6).a_plus) <= 1e-12);
  CHECK(cc.delta_plus > 0.0);
  CHECK(cc.delta_minus > 0.0);
  CHECK_THROWS_AS(continuum_constants({1.3, -1}, 1.5), NumericsError);
}

TEST_CASE("parseval completeness across the regions") {
  for (auto [p, ext] : std::vector<std::pair<ChannelParams, ExtensionParam>>{
           {{0.5, -1}, ExtensionParam::unique()},
           {{0.95, -1}, ExtensionParam::xi(0.7)},
           {{1.0, -1}, ExtensionParam::xi(0.3)},
           {{1.3, -1}, ExtensionParam::theta(0.4)}}) {
    ParsevalResult pr = parseval_check(p, ext);
    CAPTURE(p.q);
    CHECK(pr.lhs > 0.0);
    CHECK(pr.defect <= 0.05);
  }
}

}  // TEST_SUITE
