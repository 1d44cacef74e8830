#include "nhs/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace nhs {

namespace {

constexpr double kStructTol = 1e-12;
constexpr double pi = std::numbers::pi;

bool close(cplx a, cplx b, double scale) { return std::abs(a - b) <= kStructTol * scale; }

ComplexPoly compose(const ComplexPoly& outer, const ComplexPoly& inner) {
  ComplexPoly acc;
  for (int k = outer.degree(); k >= 0; --k) acc = acc * inner + ComplexPoly::constant(outer[k]);
  return acc;
}

ComplexPoly cheb_u(int n, const ComplexPoly& arg) {
  if (n < 0) return {};
  return compose(cheb_as_poly(ChebKind::Second, n), arg);
}

cplx cheb_u(int n, cplx x) { return cheb_eval(ChebKind::Second, n, x); }

std::size_t idx(int i) { return static_cast<std::size_t>(i); }

}  // namespace

void LatticeSpec::validate() const {
  if (z.size() < 2 || alpha.size() != z.size() || beta.size() != z.size())
    throw Error(ErrorKind::DimensionMismatch, "alpha, beta and z must all have length n >= 2");
}

bool LatticeSpec::irreducible() const {
  for (int i = 0; i + 1 < n(); ++i)
    if (alpha[idx(i)] == 0.0 || beta[idx(i)] == 0.0) return false;
  return true;
}

LatticeSpec LatticeSpec::zeros(int n) {
  return {std::vector<cplx>(idx(n), 0.0), std::vector<cplx>(idx(n), 0.0), std::vector<cplx>(idx(n), 0.0)};
}

LatticeSpec expand(const ModelPreset& preset) {
  struct Visitor {
    LatticeSpec operator()(const UniformChain& p) const {
      if (p.n < 2 || p.m < 1 || p.m > p.n)
        throw Error(ErrorKind::IndexOutOfRange, "uniform chain defect site");
      LatticeSpec s = LatticeSpec::zeros(p.n);
      for (int i = 0; i + 1 < p.n; ++i) s.alpha[idx(i)] = s.beta[idx(i)] = p.t;
      s.z[idx(p.m - 1)] += p.z_m;
      s.z[idx(p.n - p.m)] += p.z_mirror;
      return s;
    }
    LatticeSpec operator()(const NearestNeighbourDefect& p) const {
      const int n = static_cast<int>(p.hoppings.size()) + 1;
      const int m = n / 2;
      if (n % 2 != 0 || n < 2 || static_cast<int>(p.edge_potentials.size()) != m - 1)
        throw Error(ErrorKind::ParamViolation, "nearest-neighbour chain needs n = 2m and m - 1 edge potentials");
      for (int j = 1; j < n; ++j) {
        const cplx prod = p.hoppings[idx(j - 1)] * std::conj(p.hoppings[idx(n - j - 1)]);
        if (!(prod.real() > 0.0) || std::abs(prod.imag()) > kStructTol * std::abs(prod))
          throw Error(ErrorKind::ParamViolation, "t_j conj(t_{n-j}) must be positive");
      }
      LatticeSpec s = LatticeSpec::zeros(n);
      for (int j = 1; j < n; ++j) {
        s.alpha[idx(j - 1)] = p.hoppings[idx(j - 1)];
        s.beta[idx(j - 1)] = std::conj(p.hoppings[idx(n - j - 1)]);
      }
      for (int j = 1; j < m; ++j) s.z[idx(j - 1)] = s.z[idx(n - j)] = p.edge_potentials[idx(j - 1)];
      s.z[idx(m - 1)] = {p.detuning, p.gain};
      s.z[idx(m)] = {p.detuning, -p.gain};
      return s;
    }
    LatticeSpec operator()(const SshEdgeDefect& p) const {
      LatticeSpec s = LatticeSpec::zeros(p.n);
      for (int i = 0; i + 1 < p.n; ++i) {
        const cplx t = i % 2 == 0 ? p.t1 : p.t2;
        s.alpha[idx(i)] = t;
        s.beta[idx(i)] = std::conj(t);
      }
      s.alpha.back() = p.t_left;
      s.beta.back() = p.t_right;
      s.z.front() = p.z1;
      s.z.back() = p.zn;
      return s;
    }
    LatticeSpec operator()(const Qubit& p) const {
      return {{p.t, 0.0}, {p.t, 0.0}, {cplx(0.0, p.omega), cplx(0.0, -p.omega)}};
    }
    LatticeSpec operator()(const Ring& p) const {
      LatticeSpec s = LatticeSpec::zeros(p.n);
      for (int i = 0; i + 1 < p.n; ++i) s.alpha[idx(i)] = s.beta[idx(i)] = p.t;
      s.alpha.back() = p.alpha_n;
      s.beta.back() = p.beta_n;
      return s;
    }
  };
  LatticeSpec s = std::visit(Visitor{}, preset);
  s.validate();
  return s;
}

Matrix build_matrix(const LatticeSpec& spec) {
  spec.validate();
  const int n = spec.n();
  Matrix h = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) h(i, i) = spec.z[idx(i)];
  for (int j = 0; j + 1 < n; ++j) {
    h(j + 1, j) += spec.alpha[idx(j)];
    h(j, j + 1) += spec.beta[idx(j)];
  }
  h(0, n - 1) += spec.alpha.back();
  h(n - 1, 0) += spec.beta.back();
  return h;
}

Continuants continuants(const LatticeSpec& spec, cplx lambda) {
  spec.validate();
  if (!spec.open_boundary()) throw Error(ErrorKind::BoundaryViolation, "continuants need open boundaries");
  const int n = spec.n();
  std::vector<cplx> theta(idx(n + 2));
  std::vector<cplx> phi(idx(n + 2));
  theta[0] = 0.0;
  theta[1] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const cplx coupling = i >= 2 ? spec.alpha[idx(i - 2)] * spec.beta[idx(i - 2)] : cplx{0.0};
    theta[idx(i + 1)] = (lambda - spec.z[idx(i - 1)]) * theta[idx(i)] - coupling * theta[idx(i - 1)];
  }
  // phi stored at offset i - 1.
  phi[idx(n + 1)] = 0.0;
  phi[idx(n)] = 1.0;
  for (int i = n; i >= 1; --i) {
    const cplx coupling = i <= n - 1 ? spec.alpha[idx(i - 1)] * spec.beta[idx(i - 1)] : cplx{0.0};
    phi[idx(i - 1)] = (lambda - spec.z[idx(i - 1)]) * phi[idx(i)] - coupling * phi[idx(i + 1)];
  }
  return {std::move(theta), std::move(phi)};
}

cplx two_defect_det(int n, int m, cplx t, cplx z_m, cplx z_mirror, cplx lambda) {
  int lo = std::min(m, n - m + 1);
  if (lo == n - lo + 1) {
    z_m += z_mirror;
    z_mirror = 0.0;
  }
  const cplx x = lambda / (2.0 * t);
  const cplx u = cheb_u(lo - 1, x);
  return std::pow(t, n) * (cheb_u(n, x) - (z_m + z_mirror) / t * cheb_u(n - lo, x) * u +
                           z_m * z_mirror / (t * t) * cheb_u(n - 2 * lo, x) * u * u);
}

cplx ring_det(int n, cplx t, cplx alpha_n, cplx beta_n, cplx lambda) {
  const cplx x = lambda / (2.0 * t);
  return std::pow(t, n) * (cheb_u(n, x) - alpha_n * beta_n / (t * t) * cheb_u(n - 2, x)) -
         std::pow(t, n - 1) * (alpha_n + beta_n);
}

namespace {

struct SshTerms {
  double a1, a2;
  cplx corner;  // alpha_n prod(alpha) + beta_n prod(beta) over interior hoppings
};

SshTerms ssh_terms(const SshEdgeDefect& p) {
  cplx pa = 1.0, pb = 1.0;
  for (int i = 0; i + 1 < p.n; ++i) {
    const cplx t = i % 2 == 0 ? p.t1 : p.t2;
    pa *= t;
    pb *= std::conj(t);
  }
  return {std::abs(p.t1), std::abs(p.t2), p.t_left * pa + p.t_right * pb};
}

}  // namespace

cplx ssh_det(const SshEdgeDefect& p, cplx lambda) {
  const auto [a1, a2, corner] = ssh_terms(p);
  const int k = p.n / 2;
  const double s = std::pow(a1 * a2, k);
  const cplx q = (lambda * lambda - a1 * a1 - a2 * a2) / (2.0 * a1 * a2);
  const cplx zz = p.z1 * p.zn - p.t_left * p.t_right;
  if (p.n % 2 == 0) {
    return s * (cheb_u(k, q) + zz / (a2 * a2) * cheb_u(k - 2, q) +
                (a2 * a2 - lambda * (p.z1 + p.zn) + zz) / (a1 * a2) * cheb_u(k - 1, q)) -
           corner;
  }
  return s * ((lambda - p.z1 - p.zn) * cheb_u(k, q) +
              (lambda * zz - p.z1 * a1 * a1 - p.zn * a2 * a2) / (a1 * a2) * cheb_u(k - 1, q)) -
         corner;
}

namespace {

struct TwoDefectMatch {
  int m;
  cplx t, z_m, z_mirror;
};

std::optional<cplx> uniform_hopping(const LatticeSpec& s) {
  const cplx t = s.alpha[0];
  if (t == 0.0) return std::nullopt;
  for (int i = 0; i + 1 < s.n(); ++i)
    if (!close(s.alpha[idx(i)], t, std::abs(t)) || !close(s.beta[idx(i)], t, std::abs(t))) return std::nullopt;
  return t;
}

std::optional<TwoDefectMatch> match_two_defect(const LatticeSpec& s) {
  if (!s.open_boundary()) return std::nullopt;
  const auto t = uniform_hopping(s);
  if (!t) return std::nullopt;
  double scale = std::abs(*t);
  for (auto z : s.z) scale = std::max(scale, std::abs(z));
  const int n = s.n();
  std::vector<int> sites;
  for (int i = 0; i < n; ++i)
    if (std::abs(s.z[idx(i)]) > kStructTol * scale) sites.push_back(i + 1);
  int m = 1;
  if (sites.size() == 1) {
    m = std::min(sites[0], n - sites[0] + 1);
  } else if (sites.size() == 2) {
    if (sites[0] + sites[1] != n + 1) return std::nullopt;
    m = sites[0];
  } else if (!sites.empty()) {
    return std::nullopt;
  }
  return TwoDefectMatch{m, *t, s.z[idx(m - 1)], m == n - m + 1 ? cplx{0.0} : s.z[idx(n - m)]};
}

std::optional<cplx> match_ring(const LatticeSpec& s) {
  if (s.open_boundary()) return std::nullopt;
  const auto t = uniform_hopping(s);
  if (!t) return std::nullopt;
  for (auto z : s.z)
    if (std::abs(z) > kStructTol * std::abs(*t)) return std::nullopt;
  return t;
}

std::optional<SshEdgeDefect> match_ssh(const LatticeSpec& s) {
  const int n = s.n();
  if (n < 3) return std::nullopt;
  const cplx t1 = s.alpha[0], t2 = s.alpha[1];
  if (t1 == 0.0 || t2 == 0.0) return std::nullopt;
  const double scale = std::max(std::abs(t1), std::abs(t2));
  for (int i = 0; i + 1 < n; ++i) {
    const cplx t = i % 2 == 0 ? t1 : t2;
    if (!close(s.alpha[idx(i)], t, scale) || !close(s.beta[idx(i)], std::conj(t), scale)) return std::nullopt;
  }
  double zscale = scale;
  for (auto z : s.z) zscale = std::max(zscale, std::abs(z));
  for (int i = 1; i + 1 < n; ++i)
    if (std::abs(s.z[idx(i)]) > kStructTol * zscale) return std::nullopt;
  return SshEdgeDefect{n, t1, t2, s.alpha.back(), s.beta.back(), s.z.front(), s.z.back()};
}

}  // namespace

CharPolyForm char_poly_form(const LatticeSpec& spec) {
  spec.validate();
  if (match_two_defect(spec)) return CharPolyForm::UniformTwoDefect;
  if (match_ring(spec)) return CharPolyForm::UniformRing;
  if (match_ssh(spec)) return CharPolyForm::SshEdgeDefect;
  return CharPolyForm::General;
}

ComplexPoly char_poly_general(const LatticeSpec& spec) {
  spec.validate();
  const int n = spec.n();
  // Leading minors theta_{1..i} and, for the corner term, minors of sites 2..i.
  auto minors = [&](int first, int last) {
    ComplexPoly prev, cur = ComplexPoly::constant(1.0);
    for (int i = first; i <= last; ++i) {
      ComplexPoly next = ComplexPoly({-spec.z[idx(i)], 1.0}) * cur;
      if (i > first) next -= prev * (spec.alpha[idx(i - 1)] * spec.beta[idx(i - 1)]);
      prev = std::move(cur);
      cur = std::move(next);
    }
    return cur;
  };
  ComplexPoly p = minors(0, n - 1);
  if (spec.open_boundary()) return p;
  cplx pa = 1.0, pb = 1.0;
  for (int i = 0; i + 1 < n; ++i) {
    pa *= spec.alpha[idx(i)];
    pb *= spec.beta[idx(i)];
  }
  const cplx an = spec.alpha.back(), bn = spec.beta.back();
  // For n = 2 the corners add to the interior hoppings instead.
  if (n == 2) return minors(0, 0) * ComplexPoly({-spec.z[1], 1.0}) -
                     ComplexPoly::constant((spec.alpha[0] + bn) * (spec.beta[0] + an));
  return p - minors(1, n - 2) * (an * bn) - ComplexPoly::constant(an * pa + bn * pb);
}

ComplexPoly char_poly(const LatticeSpec& spec) {
  spec.validate();
  const int n = spec.n();
  if (auto d = match_two_defect(spec)) {
    const ComplexPoly x({0.0, 1.0 / (2.0 * d->t)});
    const ComplexPoly u = cheb_u(d->m - 1, x);
    cplx zm = d->z_m, zb = d->z_mirror;
    ComplexPoly body = cheb_u(n, x) - cheb_u(n - d->m, x) * u * ((zm + zb) / d->t);
    if (2 * d->m <= n) body += cheb_u(n - 2 * d->m, x) * u * u * (zm * zb / (d->t * d->t));
    return body * std::pow(d->t, n);
  }
  if (auto t = match_ring(spec)) {
    const ComplexPoly x({0.0, 1.0 / (2.0 * *t)});
    const cplx an = spec.alpha.back(), bn = spec.beta.back();
    return (cheb_u(n, x) - cheb_u(n - 2, x) * (an * bn / (*t * *t))) * std::pow(*t, n) -
           ComplexPoly::constant(std::pow(*t, n - 1) * (an + bn));
  }
  if (auto p = match_ssh(spec)) {
    const auto [a1, a2, corner] = ssh_terms(*p);
    const int k = n / 2;
    const double s = std::pow(a1 * a2, k);
    const ComplexPoly q({-(a1 * a1 + a2 * a2) / (2.0 * a1 * a2), 0.0, 1.0 / (2.0 * a1 * a2)});
    const cplx zz = p->z1 * p->zn - p->t_left * p->t_right;
    const cplx zsum = p->z1 + p->zn;
    ComplexPoly body;
    if (n % 2 == 0) {
      body = cheb_u(k, q) + cheb_u(k - 2, q) * (zz / (a2 * a2)) +
             cheb_u(k - 1, q) * ComplexPoly({(a2 * a2 + zz) / (a1 * a2), -zsum / (a1 * a2)});
    } else {
      body = cheb_u(k, q) * ComplexPoly({-zsum, 1.0}) +
             cheb_u(k - 1, q) * ComplexPoly({-(p->z1 * a1 * a1 + p->zn * a2 * a2) / (a1 * a2), zz / (a1 * a2)});
    }
    return body * s - ComplexPoly::constant(corner);
  }
  return char_poly_general(spec);
}

Vector eigvec_from_minors(const LatticeSpec& spec, cplx lambda) {
  const auto c = continuants(spec, lambda);
  if (!spec.irreducible()) throw Error(ErrorKind::NotIrreducible, "an interior hopping vanishes");
  const int n = spec.n();
  double biggest = 0.0;
  for (auto v : c.theta_values()) biggest = std::max(biggest, std::abs(v));
  if (std::abs(c.theta(n)) > 1e-8 * biggest) throw Error(ErrorKind::NotEigenvalue, "theta_n does not vanish");
  Vector psi(n);
  cplx denom = 1.0;
  for (int k = 0; k < n; ++k) {
    psi(k) = c.theta(k) / denom;
    denom *= spec.beta[idx(k)];
  }
  return psi;
}

Matrix tridiag_inverse(const LatticeSpec& spec) {
  const auto c = continuants(spec, 0.0);
  const int n = spec.n();
  double biggest = 0.0;
  for (auto v : c.theta_values()) biggest = std::max(biggest, std::abs(v));
  if (std::abs(c.theta(n)) <= 1e-12 * biggest) throw Error(ErrorKind::Singular, "det H vanishes");
  Matrix inv(n, n);
  // One-based i <= j: -beta_i...beta_{j-1} theta_{i-1} phi_{j+1} / theta_n; mirrored with alpha below.
  for (int i = 1; i <= n; ++i) {
    cplx upper = 1.0, lower = 1.0;
    for (int j = i; j <= n; ++j) {
      if (j > i) {
        upper *= spec.beta[idx(j - 2)];
        lower *= spec.alpha[idx(j - 2)];
      }
      const cplx common = -c.theta(i - 1) * c.phi(j + 1) / c.theta(n);
      inv(i - 1, j - 1) = upper * common;
      inv(j - 1, i - 1) = lower * common;
    }
  }
  return inv;
}

SimilarityResult similarity(const LatticeSpec& spec, SimilarityKind kind) {
  spec.validate();
  const int n = spec.n();
  LatticeSpec out = spec;
  Matrix s = Matrix::Zero(n, n);
  switch (kind) {
    case SimilarityKind::StaggerSign: {
      for (int i = 0; i < n; ++i) s(i, i) = i % 2 == 0 ? 1.0 : -1.0;
      for (int i = 0; i + 1 < n; ++i) {
        out.alpha[idx(i)] = -spec.alpha[idx(i)];
        out.beta[idx(i)] = -spec.beta[idx(i)];
      }
      const double corner_sign = n % 2 == 0 ? -1.0 : 1.0;
      out.alpha.back() *= corner_sign;
      out.beta.back() *= corner_sign;
      break;
    }
    case SimilarityKind::Parity: {
      for (int i = 0; i < n; ++i) s(i, n - 1 - i) = 1.0;
      for (int j = 0; j + 1 < n; ++j) {
        out.alpha[idx(j)] = spec.beta[idx(n - 2 - j)];
        out.beta[idx(j)] = spec.alpha[idx(n - 2 - j)];
      }
      out.alpha.back() = spec.beta.back();
      out.beta.back() = spec.alpha.back();
      std::reverse(out.z.begin(), out.z.end());
      break;
    }
    case SimilarityKind::Shift: {
      // Cyclic labels: alpha_j couples j -> j+1 (mod n), beta_j couples j+1 -> j.
      for (int i = 0; i < n; ++i) s((i + 1) % n, i) = 1.0;
      for (int j = 0; j < n; ++j) {
        out.alpha[idx((j + 1) % n)] = spec.alpha[idx(j)];
        out.beta[idx((j + 1) % n)] = spec.beta[idx(j)];
        out.z[idx((j + 1) % n)] = spec.z[idx(j)];
      }
      break;
    }
    case SimilarityKind::DiagonalSymmetrize: {
      if (!spec.irreducible()) throw Error(ErrorKind::NotIrreducible, "cannot symmetrize reducible spec");
      if (!spec.open_boundary()) throw Error(ErrorKind::BoundaryViolation, "symmetrize needs open boundaries");
      cplx d = 1.0;
      s(0, 0) = d;
      for (int i = 0; i + 1 < n; ++i) {
        const cplx r = std::sqrt(spec.alpha[idx(i)] / spec.beta[idx(i)]);
        d /= r;
        s(i + 1, i + 1) = d;
        out.alpha[idx(i)] = out.beta[idx(i)] = spec.beta[idx(i)] * r;
      }
      break;
    }
  }
  return {s, out};
}

ChiralLift::ChiralLift(const LatticeSpec& spec) : bare_(spec) {
  spec.validate();
  const int n = spec.n();
  const double scale = std::max({1.0, std::abs(spec.z[0]), std::abs(spec.z[1])});
  for (int i = 2; i < n; ++i)
    if (!close(spec.z[idx(i)], spec.z[idx(i % 2)], scale))
      throw Error(ErrorKind::PeriodicityViolation, "diagonal is not 2-periodic");
  if (!spec.open_boundary() && n % 2 != 0)
    throw Error(ErrorKind::PeriodicityViolation, "corners need an even ring");
  center_ = (spec.z[0] + spec.z[1]) / 2.0;
  split_ = (spec.z[0] - spec.z[1]) / 2.0;
  std::fill(bare_.z.begin(), bare_.z.end(), cplx{0.0});
  bare_matrix_ = build_matrix(bare_);
}

std::pair<cplx, cplx> ChiralLift::lift_value(cplx lambda) const {
  const cplx mu = std::sqrt(lambda * lambda + split_ * split_);
  return {center_ + mu, center_ - mu};
}

Vector ChiralLift::lift_vector(const Vector& u, cplx lambda, int branch) const {
  const cplx mu = (branch >= 0 ? 1.0 : -1.0) * std::sqrt(lambda * lambda + split_ * split_);
  Vector eu = u;
  for (Eigen::Index i = 1; i < eu.size(); i += 2) eu(i) = -eu(i);
  // (H0 + dE + mu) applied to u, or to E u when that vanishes.
  Vector v = (lambda + mu) * u + split_ * eu;
  const double size = (std::abs(lambda) + std::abs(mu) + std::abs(split_)) * u.norm();
  if (v.norm() <= 1e-10 * size) v = (mu - lambda) * eu + split_ * u;
  if (v.norm() <= 1e-10 * size) return u / u.norm();
  return v / v.norm();
}

std::vector<double> constant_eigenvalues(int n, int m, double t) {
  if (m < 1 || 2 * m > n) throw Error(ErrorKind::IndexOutOfRange, "need 1 <= m <= n/2");
  const int g = std::gcd(n + 1, m);
  std::vector<double> out;
  for (int r = 1; r < g; ++r) out.push_back(2.0 * t * std::cos(pi * r / g));
  return out;
}

namespace {

std::vector<cplx> cos_family(cplx scale, int count, auto angle) {
  std::vector<cplx> out;
  for (int j = 1; j <= count; ++j) out.push_back(scale * std::cos(angle(j)));
  return out;
}

void append(std::vector<cplx>& a, const std::vector<cplx>& b) { a.insert(a.end(), b.begin(), b.end()); }

std::optional<std::vector<cplx>> uniform_closed_form(const UniformChain& p) {
  const int n = p.n;
  const cplx t = p.t;
  const double tt = std::abs(t);
  cplx za = p.z_m, zb = p.z_mirror;
  int m = p.m;
  if (m > n - m + 1) {
    m = n - m + 1;
    std::swap(za, zb);
  }
  if (std::abs(za) <= kStructTol * tt && std::abs(zb) <= kStructTol * tt)
    return cos_family(2.0 * t, n, [&](int j) { return j * pi / (n + 1); });
  if (m == 1 && n >= 2) {
    if (close(za * zb, t * t, tt * tt)) {
      auto out = cos_family(2.0 * t, n - 1, [&](int j) { return j * pi / n; });
      out.push_back(za + zb);
      return out;
    }
    const bool a_zero = std::abs(za) <= kStructTol * tt, b_zero = std::abs(zb) <= kStructTol * tt;
    for (double sign : {1.0, -1.0}) {
      const cplx edge = sign * t;
      if ((close(za, edge, tt) && b_zero) || (close(zb, edge, tt) && a_zero))
        return cos_family(-sign * 2.0 * t, n, [&](int j) { return 2.0 * j * pi / (2 * n + 1); });
      if (close(za, edge, tt) && close(zb, -edge, tt))
        return cos_family(2.0 * t, n, [&](int j) { return (2.0 * j - 1.0) * pi / (2 * n); });
    }
  }
  if (2 * m == n && close(zb / t, std::conj(za / t), 1.0)) {
    const cplx w = za / t;
    const auto inner = cos_family(2.0 * t, m, [&](int j) { return j * pi / (m + 1); });
    const auto doubled = [](std::vector<cplx> v) {
      auto copy = v;
      append(v, copy);
      return v;
    };
    for (double s : {1.0, -1.0}) {
      if (close(w, cplx(0.0, s), 1.0)) return doubled(inner);
      if (close(w, std::polar(1.0, s * pi / 3.0), 1.0)) {
        auto out = inner;
        append(out, cos_family(2.0 * t, m, [&](int j) { return (2.0 * j - 1.0) * pi / (2 * m + 1); }));
        return out;
      }
      if (close(w, std::polar(1.0, s * 2.0 * pi / 3.0), 1.0)) {
        auto out = inner;
        append(out, cos_family(2.0 * t, m, [&](int j) { return 2.0 * j * pi / (2 * m + 1); }));
        return out;
      }
      if (close(w, cplx(-1.0, s), 1.0))
        return doubled(cos_family(2.0 * t, m, [&](int j) { return 2.0 * j * pi / (2 * m + 1); }));
      if (close(w, cplx(1.0, s), 1.0))
        return doubled(cos_family(2.0 * t, m, [&](int j) { return (2.0 * j - 1.0) * pi / (2 * m + 1); }));
    }
  }
  return std::nullopt;
}

std::optional<std::vector<cplx>> ssh_closed_form(const SshEdgeDefect& p) {
  const double scale = std::max(std::abs(p.t1), std::abs(p.t2));
  if (p.n % 2 != 0 || std::abs(p.t1.imag()) > kStructTol * scale || std::abs(p.t2.imag()) > kStructTol * scale)
    return std::nullopt;
  if (!close(p.t_left, -p.t_right, std::max(scale, std::abs(p.t_left)))) return std::nullopt;
  const cplx rhs = p.z1 * p.zn - p.t_left * p.t_right;
  if (!close(p.t2 * p.t2, rhs, std::max(scale * scale, std::abs(rhs)))) return std::nullopt;
  const double t1 = p.t1.real(), t2 = p.t2.real();
  const int k = p.n / 2;
  std::vector<cplx> out;
  for (int j = 1; j < k; ++j) {
    const double mu = std::abs(t1 + t2 * std::polar(1.0, 2.0 * pi * j / p.n));
    out.push_back(mu);
    out.push_back(-mu);
  }
  const cplx c = (p.z1 + p.zn) / 2.0;
  const cplx root = std::sqrt(t1 * t1 - t2 * t2 + c * c);
  out.push_back(c + root);
  out.push_back(c - root);
  return out;
}

}  // namespace

std::optional<std::vector<cplx>> closed_form_spectrum(const ModelPreset& preset) {
  if (auto p = std::get_if<UniformChain>(&preset)) return uniform_closed_form(*p);
  if (auto p = std::get_if<SshEdgeDefect>(&preset)) return ssh_closed_form(*p);
  if (auto p = std::get_if<Qubit>(&preset)) {
    const cplx e = std::sqrt(cplx(p->t * p->t - p->omega * p->omega));
    return std::vector<cplx>{e, -e};
  }
  if (auto p = std::get_if<Ring>(&preset)) {
    const double tt = std::abs(p->t);
    if (close(p->alpha_n, p->t, tt) && close(p->beta_n, p->t, tt))
      return cos_family(2.0 * p->t, p->n, [&](int j) { return 2.0 * j * pi / p->n; });
  }
  return std::nullopt;
}

}  // namespace nhs
