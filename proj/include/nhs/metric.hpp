#pragma once

#include <array>
#include <span>
#include <vector>

#include "nhs/lattice.hpp"
#include "nhs/spectra.hpp"

namespace nhs {

enum class Positivity { PositiveDefinite, PositiveSemidefinite, Indefinite };

struct IntertwinerReport {
  Matrix eta;
  double hermiticity_residual = 0.0;   // |eta - eta^dag| / |eta|
  double intertwining_residual = 0.0;  // |eta H - H^dag eta| / (|eta| |H|)
  double min_eigenvalue = 0.0;
  Positivity positivity = Positivity::Indefinite;
  int kernel_dim = 0;  // eigenvalues within the positivity threshold
};

// Residuals and positivity verdict of eta as an intertwiner for h.
IntertwinerReport assess_intertwiner(const Matrix& h, Matrix eta);

// Positive square root of a Hermitian positive-semidefinite matrix.
Matrix positive_sqrt(const Matrix& m);

// eta = (U d U^dag)^{-1}; weights follow eigenvalues sorted by real part.
IntertwinerReport general_metric_family(const Matrix& h, std::span<const double> weights);

// eta0 H^k.
IntertwinerReport intertwiner_family(const Matrix& h, const Matrix& eta0, int k);

using Vec3 = std::array<double, 3>;

struct QubitIntertwiner {
  Matrix h;  // (alpha + i beta) . sigma
  IntertwinerReport report;
};
QubitIntertwiner qubit_intertwiner(const Vec3& alpha, const Vec3& beta, double zeta, double xi);

// M(Z) for a nearest-neighbour chain; Im Z must equal the central gain.
IntertwinerReport nn_defect_metric(const LatticeSpec& spec, cplx z);

struct EquivalentHermitian {
  Matrix h;
  Matrix omega;  // positive square root of the metric, h = omega H omega^{-1}
};
EquivalentHermitian equiv_hermitian(const LatticeSpec& spec, cplx z);

// Involution commuting with the nearest-neighbour Hamiltonian for |gain| < |t_m|.
Matrix c_symmetry(const LatticeSpec& spec);

// Metric of the m = 1 uniform chain with z_1 = detuning + i gain, z_n its conjugate.
IntertwinerReport far_defect_metric(int n, double detuning, double gain, double t);

struct PencilMetric {
  IntertwinerReport report;
  double stated_bound;    // |J^{-1}| in the eta0 norm
  double neumann_bound;   // 1 / |J^{-1} E| in the eta0 norm
};
// eta0 + i gamma eta0 J^{-1} E for H = J + i gamma E.
PencilMetric pencil_metric(const Matrix& j, const Matrix& e, double gamma, const Matrix& eta0);

struct PencilSpectrum {
  std::vector<cplx> values;
  Matrix vectors;  // column k belongs to values[k]
  double max_residual;
};
PencilSpectrum pencil_spectrum(const Matrix& j, const Matrix& e, double gamma);

using Matrix2 = Eigen::Matrix2cd;

// phi_U((a b; c d)) = (a I, b U; c U^dag, d I).
Matrix represent(const Matrix& u, const Matrix2& x);
// phi_U(x) restricted to the k-th invariant block span{e_k, U^dag e_k}.
Matrix represent_block(const Matrix& u, const Matrix2& x, int k);

struct RepGenerated {
  Matrix h;
  IntertwinerReport report;
};
// H = A + sum_k phi_k(h_k) with eta = phi(m).
RepGenerated rep_generate(const Matrix& u, std::span<const Matrix2> blocks, const Matrix2& m, const Matrix& a);

struct CommutingInclusion {
  std::vector<Disk> disks;
  std::vector<double> a_spectrum;
  // Every disk touches the real axis at most at its own centre's real part.
  bool real_points_only = true;
  bool admits_real(double x, double tol = 1e-9) const;
};
CommutingInclusion commuting_inclusion(std::span<const double> a_spectrum, std::span<const cplx> lambda_tilde);

}  // namespace nhs
