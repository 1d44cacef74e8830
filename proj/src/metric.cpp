#include "nhs/metric.hpp"

#include <algorithm>
#include <cmath>

namespace nhs {

namespace {

constexpr double kPositivityTol = 1e-10;

double opnorm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.jacobiSvd().singularValues()(0);
}

const Matrix2& pauli(int k) {
  static const std::array<Matrix2, 3> s = [] {
    std::array<Matrix2, 3> out;
    out[0] << 0, 1, 1, 0;
    out[1] << 0, cplx(0, -1), cplx(0, 1), 0;
    out[2] << 1, 0, 0, -1;
    return out;
  }();
  return s[static_cast<std::size_t>(k)];
}

Matrix2 sigma_dot(const Vec3& v) { return v[0] * pauli(0) + v[1] * pauli(1) + v[2] * pauli(2); }

Matrix exchange(int n) {
  Matrix p = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) p(i, n - 1 - i) = 1.0;
  return p;
}

// Structure of a nearest-neighbour chain read off its LatticeSpec.
struct NearestNeighbourView {
  int n;
  int m;
  cplx central;    // t_m
  double gain;     // Im z_m
  Eigen::VectorXcd gauge;  // diagonal of D
};

NearestNeighbourView inspect_nn(const LatticeSpec& spec) {
  spec.validate();
  const int n = spec.n();
  if (n % 2 != 0 || !spec.open_boundary())
    throw Error(ErrorKind::ParamViolation, "nearest-neighbour chain needs even n and open boundaries");
  const int m = n / 2;
  const auto at = [](const std::vector<cplx>& v, int one_based) { return v[static_cast<std::size_t>(one_based - 1)]; };
  double scale = 0.0;
  for (int j = 1; j < n; ++j) scale = std::max(scale, std::abs(at(spec.alpha, j)));
  for (int j = 1; j < n; ++j) {
    if (std::abs(at(spec.beta, j) - std::conj(at(spec.alpha, n - j))) > 1e-12 * scale)
      throw Error(ErrorKind::ParamViolation, "beta_j must equal conj(alpha_{n-j})");
    const cplx prod = at(spec.alpha, j) * at(spec.beta, j);
    if (!(prod.real() > 0.0) || std::abs(prod.imag()) > 1e-12 * std::abs(prod))
      throw Error(ErrorKind::ParamViolation, "t_j conj(t_{n-j}) must be positive");
  }
  double zscale = scale;
  for (auto z : spec.z) zscale = std::max(zscale, std::abs(z));
  for (int j = 1; j < m; ++j)
    if (std::abs(at(spec.z, j).imag()) > 1e-12 * zscale || std::abs(at(spec.z, j) - at(spec.z, n + 1 - j)) > 1e-12 * zscale)
      throw Error(ErrorKind::ParamViolation, "edge potentials must be real and mirrored");
  if (std::abs(at(spec.z, m) - std::conj(at(spec.z, m + 1))) > 1e-12 * zscale)
    throw Error(ErrorKind::ParamViolation, "central potentials must be complex conjugates");

  Eigen::VectorXcd d(n);
  d(0) = 1.0;
  for (int j = 1; j < n; ++j) {
    const cplx a = at(spec.alpha, j), b = at(spec.beta, j);
    d(j) = d(j - 1) * std::sqrt((a * b).real()) / b;
  }
  return {n, m, at(spec.alpha, m), at(spec.z, m).imag(), d};
}

Matrix nn_metric_core(int m, cplx z, double central) {
  const Matrix p = exchange(m);
  Matrix c = Matrix::Identity(2 * m, 2 * m);
  c.topRightCorner(m, m) = std::conj(z) / central * p;
  c.bottomLeftCorner(m, m) = z / central * p;
  return c;
}

}  // namespace

IntertwinerReport assess_intertwiner(const Matrix& h, Matrix eta) {
  if (h.rows() != h.cols() || eta.rows() != h.rows() || eta.cols() != h.cols())
    throw Error(ErrorKind::DimensionMismatch, "eta and H must be square of equal size");
  IntertwinerReport r;
  const double eta_norm = opnorm(eta);
  const double h_norm = std::max(opnorm(h), 1e-300);
  r.hermiticity_residual = eta_norm > 0 ? opnorm(eta - eta.adjoint()) / eta_norm : 0.0;
  r.intertwining_residual = eta_norm > 0 ? opnorm(eta * h - h.adjoint() * eta) / (eta_norm * h_norm) : 0.0;
  const Matrix sym = (eta + eta.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  r.min_eigenvalue = ev.size() ? ev.minCoeff() : 0.0;
  const double threshold = kPositivityTol * (ev.size() ? ev.cwiseAbs().maxCoeff() : 0.0);
  if (r.min_eigenvalue > threshold) {
    r.positivity = Positivity::PositiveDefinite;
  } else if (std::abs(r.min_eigenvalue) <= threshold) {
    r.positivity = Positivity::PositiveSemidefinite;
    for (Eigen::Index k = 0; k < ev.size(); ++k)
      if (std::abs(ev(k)) <= threshold) ++r.kernel_dim;
  } else {
    r.positivity = Positivity::Indefinite;
  }
  r.eta = std::move(eta);
  return r;
}

Matrix positive_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0);
  Eigen::VectorXd ev = es.eigenvalues();
  const double floor = 1e-14 * std::max(ev.maxCoeff(), 0.0);
  for (Eigen::Index k = 0; k < ev.size(); ++k) ev(k) = std::sqrt(std::max(ev(k), floor));
  Matrix root = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  return (root + root.adjoint()) / 2.0;
}

IntertwinerReport general_metric_family(const Matrix& h, std::span<const double> weights) {
  const Eigen::Index n = h.rows();
  if (static_cast<Eigen::Index>(weights.size()) != n) throw Error(ErrorKind::DimensionMismatch, "one weight per eigenvalue");
  for (double w : weights)
    if (!(w > 0.0)) throw Error(ErrorKind::ParamViolation, "weights must be positive");
  const EigOptions opts;
  const auto report = eig(h, opts);
  const double norm = std::max(opnorm(h), 1e-300);
  for (const auto& e : report.eigenvalues)
    if (std::abs(e.value.imag()) > 1e-8 * norm || e.geometric != e.algebraic)
      throw Error(ErrorKind::NotQuasiHermitian, "spectrum is complex or defective");

  Eigen::ComplexEigenSolver<Matrix> es(h);
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) order[static_cast<std::size_t>(k)] = k;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return es.eigenvalues()(a).real() < es.eigenvalues()(b).real(); });
  Matrix u(n, n);
  std::vector<double> values;
  for (Eigen::Index k = 0; k < n; ++k) {
    u.col(k) = es.eigenvectors().col(order[static_cast<std::size_t>(k)]);
    values.push_back(es.eigenvalues()(order[static_cast<std::size_t>(k)]).real());
  }
  for (Eigen::Index k = 1; k < n; ++k)
    if (std::abs(values[static_cast<std::size_t>(k)] - values[static_cast<std::size_t>(k - 1)]) <= opts.cluster_tol * norm &&
        weights[static_cast<std::size_t>(k)] != weights[static_cast<std::size_t>(k - 1)])
      throw Error(ErrorKind::ParamViolation, "weights must be constant on degenerate eigenvalues");
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(weights.data(), n);
  const Matrix inverse = u * d.cast<cplx>().asDiagonal() * u.adjoint();
  Matrix eta = inverse.inverse();
  eta = (eta + eta.adjoint()) / 2.0;
  return assess_intertwiner(h, std::move(eta));
}

IntertwinerReport intertwiner_family(const Matrix& h, const Matrix& eta0, int k) {
  if (k < 0) throw Error(ErrorKind::IndexOutOfRange, "power must be non-negative");
  Matrix eta = eta0;
  for (int i = 0; i < k; ++i) eta = eta * h;
  return assess_intertwiner(h, std::move(eta));
}

QubitIntertwiner qubit_intertwiner(const Vec3& alpha, const Vec3& beta, double zeta, double xi) {
  const double aa = alpha[0] * alpha[0] + alpha[1] * alpha[1] + alpha[2] * alpha[2];
  const double bb = beta[0] * beta[0] + beta[1] * beta[1] + beta[2] * beta[2];
  const double ab = alpha[0] * beta[0] + alpha[1] * beta[1] + alpha[2] * beta[2];
  if (aa == 0.0 && bb == 0.0) throw Error(ErrorKind::DegenerateInput, "alpha and beta both vanish");
  if (std::abs(ab) > 1e-12 * std::sqrt(aa * bb)) throw Error(ErrorKind::OrthogonalityViolation, "alpha . beta must vanish");
  const Vec3 cross{beta[1] * alpha[2] - beta[2] * alpha[1], beta[2] * alpha[0] - beta[0] * alpha[2],
                   beta[0] * alpha[1] - beta[1] * alpha[0]};
  Matrix2 h = sigma_dot(alpha) + cplx(0, 1) * sigma_dot(beta);
  Matrix2 eta = zeta * sigma_dot(alpha) + xi * aa * Matrix2::Identity() + xi * sigma_dot(cross);
  return {Matrix(h), assess_intertwiner(h, Matrix(eta))};
}

IntertwinerReport nn_defect_metric(const LatticeSpec& spec, cplx z) {
  const auto view = inspect_nn(spec);
  if (std::abs(z.imag() - view.gain) > 1e-12 * std::max(1.0, std::abs(view.gain)))
    throw Error(ErrorKind::ParamViolation, "Im Z must equal the central gain");
  const Matrix w = view.gauge.cwiseInverse().asDiagonal();
  Matrix eta = w.adjoint() * nn_metric_core(view.m, z, std::abs(view.central)) * w;
  return assess_intertwiner(build_matrix(spec), std::move(eta));
}

EquivalentHermitian equiv_hermitian(const LatticeSpec& spec, cplx z) {
  const auto report = nn_defect_metric(spec, z);
  if (report.positivity != Positivity::PositiveDefinite) throw Error(ErrorKind::NotPositive, "metric is not positive-definite");
  Matrix omega = positive_sqrt(report.eta);
  Matrix h = omega * build_matrix(spec) * omega.inverse();
  return {std::move(h), std::move(omega)};
}

Matrix c_symmetry(const LatticeSpec& spec) {
  const auto view = inspect_nn(spec);
  const double central = std::abs(view.central);
  if (std::abs(view.gain) >= central) throw Error(ErrorKind::NotPositive, "C exists only for |gain| < |t_m|");
  const Matrix w = view.gauge.cwiseInverse().asDiagonal();
  const Matrix w_inv = view.gauge.asDiagonal();
  const double norm = central / std::sqrt(central * central - view.gain * view.gain);
  return norm * w_inv * exchange(view.n) * nn_metric_core(view.m, cplx(0, view.gain), central) * w;
}

IntertwinerReport far_defect_metric(int n, double detuning, double gain, double t) {
  if (t == 0.0) throw Error(ErrorKind::DegenerateInput, "hopping must be nonzero");
  if (n < 2) throw Error(ErrorKind::IndexOutOfRange, "n must be at least 2");
  const cplx up = cplx(detuning, -gain) / t, down = cplx(detuning, gain) / t;
  const cplx g = cplx(0, gain / t);
  Matrix eta(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j)
        eta(i, j) = 1.0;
      else if (i < j)
        eta(i, j) = -g * std::pow(up, j - i - 1);
      else
        eta(i, j) = g * std::pow(down, i - j - 1);
    }
  const auto h = build_matrix(expand(UniformChain{n, 1, t, cplx(detuning, gain), cplx(detuning, -gain)}));
  return assess_intertwiner(h, std::move(eta));
}

PencilMetric pencil_metric(const Matrix& j, const Matrix& e, double gamma, const Matrix& eta0) {
  const double jn = opnorm(j), en = opnorm(e);
  if (opnorm(j * e + e * j) > 1e-10 * jn * en) throw Error(ErrorKind::AnticommutationViolation, "J and E must anticommute");
  Eigen::FullPivLU<Matrix> lu(j);
  if (!lu.isInvertible()) throw Error(ErrorKind::SingularJ, "J is singular");
  const double scale = opnorm(eta0);
  if (opnorm(eta0 * j - j.adjoint() * eta0) > 1e-10 * scale * jn || opnorm(eta0 * e - e.adjoint() * eta0) > 1e-10 * scale * en)
    throw Error(ErrorKind::NotIntertwiner, "eta0 must intertwine J and E");
  const Matrix j_inv = lu.inverse();
  Matrix eta = eta0 + cplx(0, gamma) * eta0 * j_inv * e;
  const Matrix h = j + cplx(0, gamma) * e;
  // Norms in the eta0 inner product: |X|_eta0 = |R X R^{-1}| with R = eta0^{1/2}.
  const Matrix root = positive_sqrt(eta0);
  const Matrix root_inv = root.inverse();
  const double stated = opnorm(root * j_inv * root_inv);
  const double neumann = 1.0 / opnorm(root * j_inv * e * root_inv);
  return {assess_intertwiner(h, std::move(eta)), stated, neumann};
}

PencilSpectrum pencil_spectrum(const Matrix& j, const Matrix& e, double gamma) {
  const Eigen::Index n = j.rows();
  if (opnorm(e * e - Matrix::Identity(n, n)) > 1e-10) throw Error(ErrorKind::NotInvolution, "E^2 must be the identity");
  Eigen::ComplexEigenSolver<Matrix> es(j);
  const Matrix h = j + cplx(0, gamma) * e;
  const double scale = std::max(opnorm(h), 1e-300);
  PencilSpectrum out{{}, Matrix(n, n), 0.0};
  for (Eigen::Index k = 0; k < n; ++k) {
    const cplx lambda = es.eigenvalues()(k);
    const Eigen::VectorXcd u = es.eigenvectors().col(k);
    // Branch continuous in gamma from mu = lambda.
    const cplx mu = std::abs(lambda) > 0 ? lambda * std::sqrt(1.0 - gamma * gamma / (lambda * lambda))
                                         : cplx(0, gamma);
    Eigen::VectorXcd v = (lambda + mu) * u + cplx(0, gamma) * (e * u);
    if (v.norm() < 1e-8 * u.norm()) v = (mu - lambda) * (e * u) + cplx(0, gamma) * u;
    v.normalize();
    out.values.push_back(mu);
    out.vectors.col(k) = v;
    out.max_residual = std::max(out.max_residual, (h * v - mu * v).norm() / scale);
  }
  return out;
}

Matrix represent(const Matrix& u, const Matrix2& x) {
  const Eigen::Index n = u.rows();
  Matrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = x(0, 0) * Matrix::Identity(n, n);
  out.topRightCorner(n, n) = x(0, 1) * u;
  out.bottomLeftCorner(n, n) = x(1, 0) * u.adjoint();
  out.bottomRightCorner(n, n) = x(1, 1) * Matrix::Identity(n, n);
  return out;
}

Matrix represent_block(const Matrix& u, const Matrix2& x, int k) {
  const Eigen::Index n = u.rows();
  if (k < 0 || k >= n) throw Error(ErrorKind::IndexOutOfRange, "block index out of range");
  Matrix projector = Matrix::Zero(2 * n, 2 * n);
  projector(k, k) = 1.0;
  const Eigen::VectorXcd partner = u.adjoint().col(k);
  projector.bottomRightCorner(n, n) = partner * partner.adjoint();
  return represent(u, x) * projector;
}

RepGenerated rep_generate(const Matrix& u, std::span<const Matrix2> blocks, const Matrix2& m, const Matrix& a) {
  const Eigen::Index n = u.rows();
  if (u.cols() != n || a.rows() != 2 * n || a.cols() != 2 * n || static_cast<Eigen::Index>(blocks.size()) != n)
    throw Error(ErrorKind::DimensionMismatch, "need n x n unitary, n blocks and a 2n x 2n commutant element");
  if (opnorm(u.adjoint() * u - Matrix::Identity(n, n)) > 1e-10) throw Error(ErrorKind::NotUnitary, "U is not unitary");
  const double a_norm = std::max(opnorm(a), 1.0);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      Matrix2 unit = Matrix2::Zero();
      unit(r, c) = 1.0;
      const Matrix g = represent(u, unit);
      if (opnorm(a * g - g * a) > 1e-9 * a_norm) throw Error(ErrorKind::CommutantViolation, "A does not commute with the representation");
    }
  if (opnorm(a - a.adjoint()) > 1e-9 * a_norm) throw Error(ErrorKind::CommutantViolation, "A must be Hermitian");
  const double m_norm = m.norm();
  for (const auto& hk : blocks)
    if ((m * hk - hk.adjoint() * m).norm() > 1e-9 * m_norm * std::max(hk.norm(), 1.0))
      throw Error(ErrorKind::NotIntertwiner, "m does not intertwine every block");
  Matrix h = a;
  for (Eigen::Index k = 0; k < n; ++k) h += represent_block(u, blocks[static_cast<std::size_t>(k)], static_cast<int>(k));
  return {h, assess_intertwiner(h, represent(u, m))};
}

bool CommutingInclusion::admits_real(double x, double tol) const {
  return std::any_of(a_spectrum.begin(), a_spectrum.end(), [&](double l) { return std::abs(x - l) <= tol; });
}

CommutingInclusion commuting_inclusion(std::span<const double> a_spectrum, std::span<const cplx> lambda_tilde) {
  CommutingInclusion out;
  out.a_spectrum.assign(a_spectrum.begin(), a_spectrum.end());
  for (double l : a_spectrum)
    for (cplx lt : lambda_tilde) {
      out.disks.push_back({l + lt, std::abs(lt)});
      if (std::abs(lt.real()) > 1e-12 * std::max(1.0, std::abs(lt))) out.real_points_only = false;
    }
  return out;
}

}  // namespace nhs
