#pragma once

#include <Eigen/Sparse>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nhs/lattice.hpp"

namespace nhs {

using SparseMatrix = Eigen::SparseMatrix<cplx>;

// Bit i - 1 of a word marks site i; Fock states are indexed by their word.
using Subset = std::uint32_t;

Subset subset_of(std::initializer_list<int> sites);  // one-based sites
std::vector<int> sites_of(Subset s);
int cardinality(Subset s);
// All nonempty subsets of {1..n}, by cardinality then word value.
std::vector<Subset> enumerate_subsets(int n);

struct CarOperators {
  int n;
  std::vector<SparseMatrix> a;     // a[j - 1] annihilates site j
  std::vector<SparseMatrix> adag;
};

// a_j = (prod_{k<j} Z_k) sigma_j with Z = diag(1, -1) on (empty, occupied), so the
// word state of S equals a^dag_{i1} ... a^dag_{ik}|0> for i1 < ... < ik.
CarOperators jordan_wigner(int n);
// Ordering p: mode p[i] is carried by qubit i + 1.
CarOperators jordan_wigner(int n, const std::vector<int>& order);

// sum_ij h_ij a^dag_i a_j.
SparseMatrix dgamma(const Matrix& h);

// Number-conserving operator stored as one dense block per particle number.
struct SectorMatrix {
  int n = 0;
  std::vector<std::vector<Subset>> basis;  // basis[k]: words with k particles
  std::vector<Matrix> blocks;
  Matrix dense() const;
};

SectorMatrix sector_blocks(const SparseMatrix& op, int n);

// <S|eta|S'> = det M_{S S'} for |S| = |S'|.
SectorMatrix second_quantized_metric(const Matrix& m);

struct SecondQuantizedResidual {
  double dgamma;  // |eta dG(h) - dG(h)^dag eta| / (|eta| |dG(h)|)
  double number;
};
SecondQuantizedResidual intertwines_second_quantized(const Matrix& h, const Matrix& m);

struct LocalityReport {
  Subset subsystem = 0;
  int kernel_dim = 0;   // K(A) = dim ker M^{A^c A}
  Matrix kernel_basis;  // columns in span{e_i : i in A} coordinates
  bool extensively_local = false;
  std::optional<std::string> rule_class;
};

LocalityReport local_kernel(const Matrix& m, Subset a);

// Involution f with M_ij != 0 only for i = j or i = f(j), if M has that shape.
std::optional<std::vector<int>> associated_involution(const Matrix& m);

bool extensively_local(const Matrix& m, Subset a);

struct FarImpurity {
  int n;
  double detuning;
  double gain;
  double t = 1.0;
};

enum class LocalityMode { RuleBased, BruteForce };

// Component rules for the far-impurity metric; unit_modulus selects the |z| = 1 case.
bool far_impurity_rule(int n, Subset a, bool unit_modulus);

// Subsystems carrying extensively local observables, in enumeration order.
// unit_modulus forces the |z| = 1 rules in RuleBased mode.
std::vector<Subset> classify_subsystems(const FarImpurity& model, LocalityMode mode, bool unit_modulus = false);

}  // namespace nhs
