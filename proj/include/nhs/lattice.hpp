#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "nhs/poly.hpp"

namespace nhs {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Tridiagonal matrix with cyclic corners. alpha[j] sits at (j+1, j) for
// j < n-1 and alpha[n-1] at (0, n-1); beta[i] at (i, i+1) and beta[n-1] at
// (n-1, 0); z on the diagonal. Indices here are zero-based.
struct LatticeSpec {
  std::vector<cplx> alpha;
  std::vector<cplx> beta;
  std::vector<cplx> z;

  int n() const { return static_cast<int>(z.size()); }
  void validate() const;
  bool open_boundary() const { return alpha.back() == 0.0 && beta.back() == 0.0; }
  bool irreducible() const;

  static LatticeSpec zeros(int n);
};

struct UniformChain {
  int n;
  int m;  // one-based defect site; its mirror is n - m + 1
  cplx t;
  cplx z_m;
  cplx z_mirror;
};

// Open chain with n = 2m. hoppings has n - 1 entries t_1..t_{n-1} used as
// alpha_j = t_j, beta_j = conj(t_{n-j}). edge_potentials holds the real
// potentials of sites 1..m-1 (mirrored onto n..m+2).
struct NearestNeighbourDefect {
  std::vector<cplx> hoppings;
  std::vector<double> edge_potentials;
  double detuning;
  double gain;
};

// Hermitian 2-periodic hoppings t1, t2 with corner hoppings and end potentials.
struct SshEdgeDefect {
  int n;
  cplx t1;
  cplx t2;
  cplx t_left;   // alpha_n, at (1, n)
  cplx t_right;  // beta_n, at (n, 1)
  cplx z1;
  cplx zn;
};

// [[i omega, t], [t, -i omega]]
struct Qubit {
  double omega;
  double t;
};

// Uniform hopping t with corner entries and zero potential.
struct Ring {
  int n;
  cplx t;
  cplx alpha_n;
  cplx beta_n;
};

using ModelPreset = std::variant<UniformChain, NearestNeighbourDefect, SshEdgeDefect, Qubit, Ring>;

LatticeSpec expand(const ModelPreset& preset);
// Zero-based position of the central hopping t_m in p.hoppings.
inline std::size_t central_index(const NearestNeighbourDefect& p) { return p.hoppings.size() / 2; }

Matrix build_matrix(const LatticeSpec& spec);

// theta(i) for i in [-1, n] are leading principal minors of (lambda I - H);
// phi(i) for i in [1, n+2] are trailing ones, phi(n+1) = 1, phi(n+2) = 0.
class Continuants {
 public:
  Continuants(std::vector<cplx> theta, std::vector<cplx> phi)
      : theta_(std::move(theta)), phi_(std::move(phi)) {}
  cplx theta(int i) const { return theta_[static_cast<std::size_t>(i + 1)]; }
  cplx phi(int i) const { return phi_[static_cast<std::size_t>(i - 1)]; }
  std::span<const cplx> theta_values() const { return theta_; }
  std::span<const cplx> phi_values() const { return phi_; }

 private:
  std::vector<cplx> theta_;
  std::vector<cplx> phi_;
};

Continuants continuants(const LatticeSpec& spec, cplx lambda);

// Monic det(lambda I - H). Closed forms are used for uniform two-defect
// chains, uniform rings and Hermitian 2-periodic chains with end defects.
ComplexPoly char_poly(const LatticeSpec& spec);
// Continuant recurrence in polynomial arithmetic plus the corner terms;
// the fallback of char_poly and the cross-check for its closed forms.
ComplexPoly char_poly_general(const LatticeSpec& spec);

enum class CharPolyForm { UniformTwoDefect, UniformRing, SshEdgeDefect, General };
CharPolyForm char_poly_form(const LatticeSpec& spec);

// Closed-form evaluations of det(lambda I - H) used by char_poly.
cplx two_defect_det(int n, int m, cplx t, cplx z_m, cplx z_mirror, cplx lambda);
cplx ring_det(int n, cplx t, cplx alpha_n, cplx beta_n, cplx lambda);
cplx ssh_det(const SshEdgeDefect& p, cplx lambda);

// Eigenvector psi with psi_1 = 1 built from leading minors.
Vector eigvec_from_minors(const LatticeSpec& spec, cplx lambda);

Matrix tridiag_inverse(const LatticeSpec& spec);

enum class SimilarityKind { StaggerSign, Parity, Shift, DiagonalSymmetrize };

struct SimilarityResult {
  Matrix transform;  // S with S H S^{-1} = H(spec)
  LatticeSpec spec;
};

SimilarityResult similarity(const LatticeSpec& spec, SimilarityKind kind);

// Spectrum of H with 2-periodic diagonal (z1, z2, z1, ...) from the
// spectrum of the same hoppings with zero diagonal: center +- sqrt(l^2 + split^2).
class ChiralLift {
 public:
  explicit ChiralLift(const LatticeSpec& spec);
  const LatticeSpec& zero_diagonal() const { return bare_; }
  std::pair<cplx, cplx> lift_value(cplx lambda) const;
  // u is an eigenvector of the zero-diagonal matrix for lambda; branch +1 or -1.
  Vector lift_vector(const Vector& u, cplx lambda, int branch) const;

 private:
  LatticeSpec bare_;
  Matrix bare_matrix_;
  cplx center_;
  cplx split_;
};

std::vector<double> constant_eigenvalues(int n, int m, double t = 1.0);

std::optional<std::vector<cplx>> closed_form_spectrum(const ModelPreset& preset);

}  // namespace nhs
