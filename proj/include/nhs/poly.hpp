#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

#include "nhs/errors.hpp"

namespace nhs {

using cplx = std::complex<double>;

// Dense univariate polynomial, coefficients lowest degree first. Trailing
// coefficients below 1e-13 of the largest magnitude are dropped on
// construction, so the stored leading coefficient is nonzero (the zero
// polynomial stores nothing).
class ComplexPoly {
 public:
  ComplexPoly() = default;
  explicit ComplexPoly(std::vector<cplx> coeffs);
  ComplexPoly(std::initializer_list<cplx> coeffs);

  static ComplexPoly constant(cplx c) { return ComplexPoly({c}); }
  static ComplexPoly monomial(int degree, cplx c = 1.0);

  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  std::span<const cplx> coeffs() const { return coeffs_; }
  cplx operator[](int k) const;
  cplx leading() const;

  cplx operator()(cplx x) const;
  ComplexPoly derivative() const;
  // q(x) = p(s*x)
  ComplexPoly scaled(cplx s) const;
  // q(x) = p(x + c)
  ComplexPoly shifted(cplx c) const;
  double max_abs_coeff() const;

  ComplexPoly& operator+=(const ComplexPoly& o);
  ComplexPoly& operator-=(const ComplexPoly& o);
  ComplexPoly& operator*=(cplx s);

  friend ComplexPoly operator+(ComplexPoly a, const ComplexPoly& b) { return a += b; }
  friend ComplexPoly operator-(ComplexPoly a, const ComplexPoly& b) { return a -= b; }
  friend ComplexPoly operator*(ComplexPoly a, cplx s) { return a *= s; }
  friend ComplexPoly operator*(cplx s, ComplexPoly a) { return a *= s; }
  friend ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b);

 private:
  void trim();
  std::vector<cplx> coeffs_;
};

enum class ChebKind { First, Second, Third, Fourth };

// Forward three-term recurrence. Second kind accepts n = -1 (U_{-1} = 0).
cplx cheb_eval(ChebKind kind, int n, cplx x);
ComplexPoly cheb_as_poly(ChebKind kind, int n);

// Sylvester determinant. Degrees above 25 fall back to products over roots.
cplx resultant(const ComplexPoly& f, const ComplexPoly& g);
cplx discriminant(const ComplexPoly& f);

// Balanced companion eigenvalues polished by at most five Newton steps.
std::vector<cplx> roots(const ComplexPoly& f, double tol = 1e-10);

}  // namespace nhs
