#include "nhs/poly.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace nhs {

namespace {
constexpr double kDropTol = 1e-13;
constexpr int kSylvesterMaxDegree = 25;
}  // namespace

ComplexPoly::ComplexPoly(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

ComplexPoly::ComplexPoly(std::initializer_list<cplx> coeffs) : coeffs_(coeffs) { trim(); }

ComplexPoly ComplexPoly::monomial(int degree, cplx c) {
  std::vector<cplx> v(static_cast<std::size_t>(degree) + 1, 0.0);
  v.back() = c;
  return ComplexPoly(std::move(v));
}

void ComplexPoly::trim() {
  const double cut = kDropTol * max_abs_coeff();
  while (!coeffs_.empty() && std::abs(coeffs_.back()) <= cut) coeffs_.pop_back();
}

double ComplexPoly::max_abs_coeff() const {
  double m = 0.0;
  for (auto c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

cplx ComplexPoly::operator[](int k) const {
  if (k < 0 || k > degree()) return 0.0;
  return coeffs_[static_cast<std::size_t>(k)];
}

cplx ComplexPoly::leading() const { return coeffs_.empty() ? cplx{0.0} : coeffs_.back(); }

cplx ComplexPoly::operator()(cplx x) const {
  cplx acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

ComplexPoly ComplexPoly::derivative() const {
  if (degree() < 1) return {};
  std::vector<cplx> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return ComplexPoly(std::move(d));
}

ComplexPoly ComplexPoly::scaled(cplx s) const {
  std::vector<cplx> v(coeffs_);
  cplx p = 1.0;
  for (auto& c : v) {
    c *= p;
    p *= s;
  }
  return ComplexPoly(std::move(v));
}

ComplexPoly ComplexPoly::shifted(cplx c) const {
  // Horner's scheme on polynomials: p(x+c) = (...(a_d (x+c) + a_{d-1})(x+c) ...)
  ComplexPoly lin({c, 1.0});
  ComplexPoly acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * lin + constant(*it);
  return acc;
}

ComplexPoly& ComplexPoly::operator+=(const ComplexPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  trim();
  return *this;
}

ComplexPoly& ComplexPoly::operator-=(const ComplexPoly& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  trim();
  return *this;
}

ComplexPoly& ComplexPoly::operator*=(cplx s) {
  for (auto& c : coeffs_) c *= s;
  trim();
  return *this;
}

ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<cplx> v(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return ComplexPoly(std::move(v));
}

namespace {

void check_index(ChebKind kind, int n) {
  const int lowest = kind == ChebKind::Second ? -1 : 0;
  if (n < lowest) throw Error(ErrorKind::UnsupportedIndex, "Chebyshev index " + std::to_string(n));
}

// Seeds (P_0, P_1) as affine functions a + b x.
std::pair<std::pair<double, double>, std::pair<double, double>> seeds(ChebKind kind) {
  switch (kind) {
    case ChebKind::First: return {{1, 0}, {0, 1}};
    case ChebKind::Second: return {{1, 0}, {0, 2}};
    case ChebKind::Third: return {{1, 0}, {-1, 2}};
    case ChebKind::Fourth: return {{1, 0}, {1, 2}};
  }
  return {{1, 0}, {0, 1}};
}

}  // namespace

cplx cheb_eval(ChebKind kind, int n, cplx x) {
  check_index(kind, n);
  if (n == -1) return 0.0;
  const auto [s0, s1] = seeds(kind);
  cplx prev = s0.first + s0.second * x;
  if (n == 0) return prev;
  cplx cur = s1.first + s1.second * x;
  for (int k = 2; k <= n; ++k) {
    cplx next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

ComplexPoly cheb_as_poly(ChebKind kind, int n) {
  check_index(kind, n);
  if (n == -1) return {};
  const auto [s0, s1] = seeds(kind);
  ComplexPoly prev({s0.first, s0.second});
  if (n == 0) return prev;
  ComplexPoly cur({s1.first, s1.second});
  const ComplexPoly two_x({0.0, 2.0});
  for (int k = 2; k <= n; ++k) {
    ComplexPoly next = two_x * cur - prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

namespace {

cplx sylvester_det(const ComplexPoly& f, const ComplexPoly& g) {
  const int m = f.degree();
  const int k = g.degree();
  const int size = m + k;
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(size, size);
  // Rows hold coefficients highest degree first.
  for (int r = 0; r < k; ++r)
    for (int j = 0; j <= m; ++j) s(r, r + j) = f[m - j];
  for (int r = 0; r < m; ++r)
    for (int j = 0; j <= k; ++j) s(k + r, r + j) = g[k - j];
  return s.partialPivLu().determinant();
}

cplx root_product_resultant(const ComplexPoly& f, const ComplexPoly& g) {
  cplx acc = std::pow(f.leading(), g.degree());
  for (auto r : roots(f)) acc *= g(r);
  return acc;
}

}  // namespace

cplx resultant(const ComplexPoly& f, const ComplexPoly& g) {
  if (f.degree() < 1 || g.degree() < 1)
    throw Error(ErrorKind::DegenerateInput, "resultant needs nonconstant polynomials");
  if (std::max(f.degree(), g.degree()) > kSylvesterMaxDegree) return root_product_resultant(f, g);
  return sylvester_det(f, g);
}

cplx discriminant(const ComplexPoly& f) {
  const int d = f.degree();
  if (d < 2) throw Error(ErrorKind::DegenerateInput, "discriminant needs degree >= 2");
  const double sign = ((d * (d - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
  return sign / f.leading() * resultant(f, f.derivative());
}

namespace {

// Parlett-Reinsch diagonal balancing with radix-2 scalings.
void balance(Eigen::MatrixXcd& a) {
  const Eigen::Index n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0;
      double r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      while (c < r / 2.0) {
        c *= 2.0;
        r /= 2.0;
        f *= 2.0;
      }
      while (c >= r * 2.0) {
        c /= 2.0;
        r *= 2.0;
        f /= 2.0;
      }
      if ((c + r) < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

double eval_scale(const ComplexPoly& f, cplx x) {
  double acc = 0.0;
  const double ax = std::abs(x);
  for (int k = f.degree(); k >= 0; --k) acc = acc * ax + std::abs(f[k]);
  return acc;
}

}  // namespace

std::vector<cplx> roots(const ComplexPoly& f, double tol) {
  const int d = f.degree();
  if (d < 1) throw Error(ErrorKind::DegenerateInput, "roots needs degree >= 1");
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(d, d);
  for (int j = 0; j < d; ++j) comp(0, j) = -f[d - 1 - j] / f.leading();
  for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
  balance(comp);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::NotConverged, "companion eigensolve");

  const ComplexPoly df = f.derivative();
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) {
    cplx r = solver.eigenvalues()(k);
    double res = std::abs(f(r));
    for (int step = 0; step < 5; ++step) {
      const cplx slope = df(r);
      if (slope == 0.0) break;
      const cplx cand = r - f(r) / slope;
      const double cand_res = std::abs(f(cand));
      if (!(cand_res < res)) break;
      r = cand;
      res = cand_res;
    }
    if (res > tol * eval_scale(f, r))
      throw Error(ErrorKind::NotConverged, "root polishing residual " + std::to_string(res));
    out.push_back(r);
  }
  return out;
}

}  // namespace nhs
