#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "nhs/poly.hpp"
#include "test_util.hpp"

using namespace nhs;
using testutil::cnormal;
using testutil::rel;

namespace {
constexpr double pi = std::numbers::pi;

ComplexPoly from_roots(const std::vector<cplx>& rs) {
  ComplexPoly p = ComplexPoly::constant(1.0);
  for (auto r : rs) p = p * ComplexPoly({-r, 1.0});
  return p;
}
}  // namespace

TEST_CASE("cheb_eval reference values") {
  CHECK(std::abs(cheb_eval(ChebKind::Second, 3, 1.0) - 4.0) < 1e-14);
  CHECK(std::abs(cheb_eval(ChebKind::Second, -1, cplx(0.7, 0.1))) == 0.0);
  CHECK(std::abs(cheb_eval(ChebKind::Second, 4, std::cos(pi / 5))) < 1e-14);
  CHECK(std::abs(cheb_eval(ChebKind::First, 2, 0.5) + 0.5) < 1e-15);
  CHECK_THROWS_AS(cheb_eval(ChebKind::First, -1, 0.3), Error);
  CHECK_THROWS_AS(cheb_eval(ChebKind::Second, -2, 0.3), Error);
}

TEST_CASE("cheb_as_poly coefficients") {
  auto u2 = cheb_as_poly(ChebKind::Second, 2);
  REQUIRE(u2.degree() == 2);
  CHECK(std::abs(u2[0] + 1.0) < 1e-15);
  CHECK(std::abs(u2[1]) < 1e-15);
  CHECK(std::abs(u2[2] - 4.0) < 1e-15);
  auto v1 = cheb_as_poly(ChebKind::Third, 1);
  CHECK(std::abs(v1[0] + 1.0) < 1e-15);
  CHECK(std::abs(v1[1] - 2.0) < 1e-15);
  auto u0 = cheb_as_poly(ChebKind::Second, 0);
  CHECK(u0.degree() == 0);
  CHECK(std::abs(u0[0] - 1.0) < 1e-15);
}

TEST_CASE("cheb_as_poly agrees with cheb_eval") {
  for (auto kind : {ChebKind::First, ChebKind::Second, ChebKind::Third, ChebKind::Fourth}) {
    for (int n = 0; n <= 12; ++n) {
      auto p = cheb_as_poly(kind, n);
      for (int s = 0; s < 20; ++s) {
        cplx x = 0.7 * cnormal();
        CHECK(rel(p(x), cheb_eval(kind, n, x)) < 1e-12);
      }
    }
  }
}

TEST_CASE("Chebyshev identities") {
  using testutil::uniform;
  for (int m = 1; m <= 5; ++m)
    for (int k = 1; k <= 5; ++k)
      for (int s = 0; s < 20; ++s) {
        cplx x = 0.6 * cnormal();
        cplx lhs = cheb_eval(ChebKind::Second, m * k - 1, x);
        cplx rhs = cheb_eval(ChebKind::Second, k - 1, cheb_eval(ChebKind::First, m, x)) *
                   cheb_eval(ChebKind::Second, m - 1, x);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
      }
  for (int s = 0; s < 50; ++s) {
    int b = static_cast<int>(uniform(0, 10));
    int a = b + 1 + static_cast<int>(uniform(0, 8));
    cplx x = 0.6 * cnormal();
    auto U = [&](int n) { return cheb_eval(ChebKind::Second, n, x); };
    cplx lhs = U(a - 1) * U(b) - U(b - 1) * U(a);
    double scale = std::abs(U(a - 1) * U(b)) + std::abs(U(b - 1) * U(a));
    CHECK(std::abs(lhs - U(a - b - 1)) <= 1e-12 * std::max(1.0, scale));
  }
  for (int n = 0; n <= 10; ++n)
    for (int s = 0; s < 10; ++s) {
      cplx x = cnormal();
      auto U = [&](int k) { return cheb_eval(ChebKind::Second, k, x); };
      CHECK(rel(cheb_eval(ChebKind::Fourth, n, x), U(n) + U(n - 1)) < 1e-12);
      CHECK(rel(cheb_eval(ChebKind::Third, n, x), U(n) - U(n - 1)) < 1e-12);
      double sign = n % 2 == 0 ? 1.0 : -1.0;
      CHECK(rel(cheb_eval(ChebKind::Second, n, -x), sign * U(n)) < 1e-12);
    }
}

TEST_CASE("resultant examples") {
  auto f = from_roots({1.0, 2.0});
  auto g = from_roots({1.0});
  CHECK(std::abs(resultant(f, g)) < 1e-13);
  auto u4 = cheb_as_poly(ChebKind::Second, 4);
  auto u2 = cheb_as_poly(ChebKind::Second, 2);
  CHECK(std::abs(resultant(u4, u2) - 256.0) < 1e-9);
  CHECK(std::abs(resultant(cheb_as_poly(ChebKind::Second, 3), cheb_as_poly(ChebKind::Second, 1))) <
        1e-10);
  CHECK_THROWS_AS(resultant(ComplexPoly::constant(2.0), g), Error);
}

TEST_CASE("discriminant examples") {
  for (int s = 0; s < 10; ++s) {
    cplx a = cnormal(), b = cnormal(), c = cnormal();
    CHECK(rel(discriminant(ComplexPoly({c, b, a})), b * b - 4.0 * a * c) < 1e-12);
  }
  cplx l0(0.3, -1.2);
  CHECK(std::abs(discriminant(from_roots({l0, l0}))) < 1e-13);
  CHECK(std::abs(discriminant(ComplexPoly({2.0, -3.0, 0.0, 1.0}))) < 1e-12);
  CHECK_THROWS_AS(discriminant(ComplexPoly({1.0, 1.0})), Error);
}

TEST_CASE("discriminant matches root-difference product") {
  for (int d = 2; d <= 7; ++d) {
    std::vector<cplx> rs;
    for (int i = 0; i < d; ++i) rs.push_back(cnormal());
    cplx lead = cnormal();
    auto f = from_roots(rs) * lead;
    cplx expect = std::pow(lead, 2 * d - 2);
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) expect *= (rs[i] - rs[j]) * (rs[i] - rs[j]);
    CHECK(std::abs(discriminant(f) - expect) <= 1e-9 * std::abs(expect));
  }
}

TEST_CASE("resultant vanishes exactly when roots are shared") {
  using testutil::uniform;
  for (int s = 0; s < 50; ++s) {
    int df = 1 + static_cast<int>(uniform(0, 6));
    int dg = 1 + static_cast<int>(uniform(0, 6));
    std::vector<cplx> rf, rg;
    for (int i = 0; i < df; ++i) rf.push_back(cnormal());
    for (int i = 0; i < dg; ++i) rg.push_back(cnormal());
    const bool share = s % 2 == 0;
    if (share) rg[0] = rf[0];
    auto f = from_roots(rf), g = from_roots(rg);
    cplx res = resultant(f, g);
    // Magnitude scale of the resultant for these normalized factors.
    double scale = 1.0;
    for (auto a : rf)
      for (auto b : rg) scale *= std::max(1.0, std::abs(a) + std::abs(b));
    bool numerically_zero = std::abs(res) <= 1e-10 * scale;
    double closest = 1e300;
    for (auto a : roots(f))
      for (auto b : roots(g)) closest = std::min(closest, std::abs(a - b));
    CHECK(numerically_zero == share);
    CHECK((closest < 1e-6) == share);
  }
}

TEST_CASE("high-degree resultant uses root products") {
  auto f = cheb_as_poly(ChebKind::Second, 30);
  auto g = cheb_as_poly(ChebKind::Second, 27);
  // gcd(31, 28) = 1 so Res = (-1)^{mn/2} 2^{mn}; mn = 810.
  cplx r = resultant(f, g);
  CHECK(std::abs(std::log2(std::abs(r)) - 810.0) < 1e-4);
  CHECK(std::abs(resultant(cheb_as_poly(ChebKind::Second, 29), g)) <
        1e-8 * std::pow(2.0, 29 * 27));
}

TEST_CASE("roots examples") {
  auto r = roots(ComplexPoly({1.0, 0.0, 1.0}));
  CHECK(testutil::multiset_distance(r, {cplx(0, 1), cplx(0, -1)}) < 1e-12);
  auto u4 = cheb_as_poly(ChebKind::Second, 4).scaled(0.5);
  std::vector<cplx> expect;
  for (int k = 1; k <= 4; ++k) expect.push_back(2.0 * std::cos(k * pi / 5));
  CHECK(testutil::multiset_distance(roots(u4), expect) < 1e-12);
  CHECK_THROWS_AS(roots(ComplexPoly::constant(3.0)), Error);
}

TEST_CASE("degree of a product is the sum of degrees") {
  for (int s = 0; s < 20; ++s) {
    std::vector<cplx> a(3 + s % 4), b(2 + s % 3);
    for (auto& c : a) c = cnormal();
    for (auto& c : b) c = cnormal();
    ComplexPoly pa(a), pb(b);
    CHECK((pa * pb).degree() == pa.degree() + pb.degree());
    CHECK(std::abs((pa * pb).leading()) > 0.0);
  }
  CHECK(ComplexPoly({1.0, 2.0, 0.0, 1e-20}).degree() == 1);
}

TEST_CASE("shifted and scaled") {
  ComplexPoly p({1.0, -2.0, 3.0, 0.5});
  for (int s = 0; s < 10; ++s) {
    cplx x = cnormal(), c = cnormal();
    CHECK(rel(p.shifted(c)(x), p(x + c)) < 1e-12);
    CHECK(rel(p.scaled(c)(x), p(c * x)) < 1e-12);
  }
}
