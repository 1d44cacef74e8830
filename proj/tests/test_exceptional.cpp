#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "models.hpp"
#include "nhs/exceptional.hpp"
#include "nhs/spectra.hpp"

using namespace nhs;
using testutil::dense_eigenvalues;
using testutil::random_nn;
using testutil::uniform;

namespace {

const double kSqrt2 = std::sqrt(2.0);

ParamFamily three_site(ParamBox box = {-3, 3, -3, 3}) { return mirrored_defect_family(3, 1, 1.0, box); }

// prod_{i<j} (l_i - l_j)^2 for a monic polynomial.
cplx disc_from_roots(const std::vector<cplx>& r) {
  cplx d = 1.0;
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = i + 1; j < r.size(); ++j) d *= (r[i] - r[j]) * (r[i] - r[j]);
  return d;
}

std::vector<ParamPoint> all_points(const EPContour& c) {
  std::vector<ParamPoint> out;
  for (const auto& seg : c.segments) out.insert(out.end(), seg.begin(), seg.end());
  return out;
}

}  // namespace

TEST_CASE("qubit discriminant") {
  auto f = qubit_family({-2, 2, 0, 2});
  CHECK(discriminant_surface(f, {1, 1}).re == doctest::Approx(0.0));
  for (int k = 0; k < 20; ++k) {
    const double w = uniform(-2, 2), t = uniform(0, 2);
    const auto d = discriminant_surface(f, {w, t});
    CHECK(d.re == doctest::Approx(4 * (t * t - w * w)).epsilon(1e-12));
    CHECK(std::abs(d.im) < 1e-12);
  }
}

TEST_CASE("three-site discriminant polynomial") {
  auto f = three_site();
  CHECK(discriminant_surface(f, {0, 0}).re == doctest::Approx(32.0));
  for (int k = 0; k < 20; ++k) {
    const double x = uniform(-3, 3), y = uniform(-3, 3);
    const double g2 = y * y, x2 = x * x;
    const double expected = 32 - 48 * g2 + 24 * g2 * g2 - 4 * g2 * g2 * g2 + 4 * x2 - 40 * g2 * x2 -
                            8 * g2 * g2 * x2 - 4 * g2 * x2 * x2;
    CHECK(discriminant_surface(f, {x, y}).re == doctest::Approx(expected).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("discriminant equals squared root differences") {
  for (int n : {3, 4, 5, 7}) {
    for (int m = 1; m <= n / 2; ++m) {
      auto f = mirrored_defect_family(n, m, uniform(0.5, 1.5), {-3, 3, -3, 3});
      for (int k = 0; k < 5; ++k) {
        const ParamPoint p{uniform(-2, 2), uniform(-2, 2)};
        const cplx oracle = disc_from_roots(dense_eigenvalues(build_matrix(f.spec(p))));
        const auto d = discriminant_surface(f, p);
        const double scale = discriminant_scale(f, p);
        CHECK(std::abs(cplx(d.re, d.im) - oracle) <= 1e-9 * scale);
        // Conjugate gain gives the conjugate matrix, hence a real and even surface.
        CHECK(std::abs(d.im) <= 1e-9 * scale);
        CHECK(std::abs(discriminant_surface(f, {p.x, -p.y}).re - d.re) <= 1e-9 * scale);
      }
    }
  }
}

TEST_CASE("qubit locus is |omega| = t") {
  auto f = qubit_family({-2, 2, 0.05, 2});
  auto c = ep_locus(f, 32);
  auto pts = all_points(c);
  REQUIRE(pts.size() > 20);
  for (auto p : pts) CHECK(std::abs(std::abs(p.x) - p.y) < 1e-8);
  CHECK(singular_points(f, c).empty());

  // The lines run through grid nodes here, where D is exactly zero.
  auto on_nodes = ep_locus(qubit_family({-2, 2, 0.25, 2}), 48);
  CHECK(on_nodes.segments.size() == 2);
}

TEST_CASE("locus points are double eigenvalues") {
  auto f = mirrored_defect_family(4, 1, 1.0, {-3, 3, -3, 3});
  auto c = ep_locus(f, 48);
  auto pts = all_points(c);
  REQUIRE(!pts.empty());
  for (std::size_t k = 0; k < pts.size(); k += 7) {
    const Matrix h = build_matrix(f.spec(pts[k]));
    auto ev = dense_eigenvalues(h);
    double gap = 1e300;
    for (std::size_t i = 0; i < ev.size(); ++i)
      for (std::size_t j = i + 1; j < ev.size(); ++j) gap = std::min(gap, std::abs(ev[i] - ev[j]));
    CHECK(gap < 1e-4 * h.norm());
  }
}

TEST_CASE("zero-detuning crossing of the end-defect chain") {
  std::vector<double> ys;
  for (int k = 0; k <= 400; ++k) ys.push_back(0.01 + 2.99 * k / 400.0);
  for (int n = 3; n <= 11; ++n) {
    auto f = mirrored_defect_family(n, 1, 1.0, {-3, 3, 0, 3});
    auto hits = crossings_along_y(f, 0.0, ys);
    REQUIRE(!hits.empty());
    // Even chains break at gamma = t; odd chains where the middle site decouples.
    const double expected = n % 2 == 0 ? 1.0 : std::sqrt((n + 1.0) / (n - 1.0));
    CHECK(hits.front() == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("nearest-neighbour discriminant vanishes at |t_m|") {
  // Every pair coalesces at once, so D has a zero of order n/2 there.
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2 * (2 + trial % 3);
    auto base = random_nn(n, 0.5);
    const double tm = std::abs(base.hoppings[central_index(base)]);
    auto f = nn_defect_family(base, {-1, 1, 0, 3 * tm});
    auto rel = [&](double y) {
      const auto d = discriminant_surface(f, {0, y});
      return std::hypot(d.re, d.im) / discriminant_scale(f, {0, y});
    };
    CHECK(rel(tm) < 1e-12);
    // Off the boundary D is a genuine nonzero value matching the root oracle.
    for (double y : {0.9 * tm, 1.1 * tm}) {
      const cplx oracle = disc_from_roots(dense_eigenvalues(build_matrix(f.spec({0, y}))));
      const auto d = discriminant_surface(f, {0, y});
      CHECK(std::abs(cplx(d.re, d.im) - oracle) <= 1e-6 * std::abs(oracle));
    }
  }
}

TEST_CASE("three-site cusps") {
  auto f = three_site();
  auto c = ep_locus(f, 64);
  auto sps = singular_points(f, c);
  REQUIRE(sps.size() == 2);
  for (const auto& sp : sps) {
    CHECK(sp.cls == SingularClass::Cusp);
    CHECK(std::abs(sp.point.x) < 1e-8);
    CHECK(std::abs(std::abs(sp.point.y) - kSqrt2) < 1e-8);
    CHECK(sp.ep_order == 3);
  }
}

TEST_CASE("smooth locus points fit square-root splitting") {
  auto f = three_site();
  auto c = ep_locus(f, 64);
  int checked = 0;
  for (const auto& seg : c.segments)
    for (std::size_t k = 0; k < seg.size(); k += 5) {
      const auto p = seg[k];
      if (std::hypot(p.x, std::abs(p.y) - kSqrt2) < 0.05) continue;
      const double h = 1e-6;
      const double gx = (discriminant_surface(f, {p.x + h, p.y}).re - discriminant_surface(f, {p.x - h, p.y}).re);
      const double gy = (discriminant_surface(f, {p.x, p.y + h}).re - discriminant_surface(f, {p.x, p.y - h}).re);
      auto fit = puiseux_fit(f, p, {gx, gy});
      CHECK(fit.exponent == 2);
      ++checked;
    }
  CHECK(checked > 10);
}

TEST_CASE("crunode and acnode of the (5,2) family") {
  auto f = mirrored_defect_family(5, 2, 1.0, {-1.5, 1.5, 0.2, 3.2});
  auto sps = singular_points(f, ep_locus(f, 64));
  const double s3 = std::sqrt(3.0);
  bool crunode = false, acnode = false;
  for (const auto& sp : sps) {
    if (std::hypot(sp.point.x, sp.point.y - (s3 - 1)) < 1e-8) crunode = sp.cls == SingularClass::Crunode;
    if (std::hypot(sp.point.x, sp.point.y - (s3 + 1)) < 1e-8) acnode = sp.cls == SingularClass::Acnode;
  }
  CHECK(crunode);
  CHECK(acnode);
  for (double y : {s3 - 1, s3 + 1}) {
    auto ev = dense_eigenvalues(build_matrix(f.spec({0, y})));
    double nearest = 1e300;
    for (auto v : ev) nearest = std::min(nearest, std::abs(v));
    CHECK(nearest < 1e-8);
  }
}

TEST_CASE("Puiseux fits") {
  for (double t : {0.5, 1.0, 2.0}) {
    auto f = qubit_family({-3, 3, 0, 3});
    auto fit = puiseux_fit(f, {t, t}, {1, 0});
    CHECK(fit.exponent == 2);
    CHECK(fit.leading_coeff == doctest::Approx(std::sqrt(2 * t)).epsilon(1e-3));
  }
  auto regular = puiseux_fit(qubit_family({-3, 3, 0, 3}), {0, 1}, {0, 1});
  CHECK(regular.exponent == 1);
  CHECK(regular.leading_coeff == doctest::Approx(1.0).epsilon(1e-6));

  auto cusp = puiseux_fit(three_site(), {0, kSqrt2}, {std::cos(1.0), std::sin(1.0)});
  CHECK(cusp.exponent == 3);
  // The coefficient is stable between the two ends of the step range.
  auto f = three_site();
  auto shift = [&](double th) {
    auto ev = dense_eigenvalues(build_matrix(f.spec({th * std::cos(1.0), kSqrt2 + th * std::sin(1.0)})));
    double m = 0;
    for (auto v : ev) m = std::max(m, std::abs(v - cplx(0, 0)));
    return m / std::cbrt(th);
  };
  CHECK(shift(1e-6) == doctest::Approx(shift(1e-5)).epsilon(0.01));

  CHECK_THROWS_AS(puiseux_fit(f, {0, kSqrt2}, {0, 0}), Error);
}

TEST_CASE("large-detuning asymptote") {
  CHECK(ep_asymptote(2, 100, 1.5) == 1.5);
  CHECK(ep_asymptote(4, 10, 1) == doctest::Approx(0.01));
  CHECK(ep_asymptote(3, 20, 2) == doctest::Approx(0.2));
  CHECK_THROWS_AS(ep_asymptote(4, 2, 1), Error);
  for (int n : {3, 4, 5}) {
    auto f = mirrored_defect_family(n, 1, 1.0, {0, 200, 0, 2});
    const double delta = 50;
    std::vector<double> ys;
    for (int k = 0; k <= 600; ++k) ys.push_back(1e-9 * std::pow(1e9, k / 600.0));
    auto hits = crossings_along_y(f, delta, ys);
    REQUIRE(!hits.empty());
    CHECK(hits.front() == doctest::Approx(ep_asymptote(n, delta, 1.0)).epsilon(0.1));
  }
}
