#pragma once

#include <Eigen/Dense>
#include <utility>
#include <variant>
#include <vector>

#include "nhs/poly.hpp"

namespace nhs {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct EigenEntry {
  cplx value;
  int algebraic;
  int geometric;
};

enum class PtKind { Unbroken, Broken, NotApplicable };

struct PtClass {
  PtKind kind = PtKind::NotApplicable;
  std::vector<std::pair<cplx, cplx>> broken_pairs;
};

struct SpectralReport {
  std::vector<EigenEntry> eigenvalues;  // sorted by (Re, Im)
  Matrix eigenvectors;                  // one column per entry
  double max_residual = 0.0;
  PtClass pt;
};

struct EigOptions {
  double cluster_tol = 1e-7;  // single-linkage radius, relative to ||H||
  double rank_tol = 1e-8;     // singular values below rank_tol * sigma_max are zero
};

SpectralReport eig(const Matrix& h, EigOptions opts = {});

// Centrohermitian with respect to the exchange matrix: P conj(H) P = H.
bool is_centrohermitian(const Matrix& h, double tol = 1e-10);
PtClass pt_classify(const Matrix& h, double tol = 1e-8);

struct Disk {
  cplx center;
  double radius;
};

// |w - focus1| |w - focus2| <= b
struct CassiniOval {
  cplx focus1;
  cplx focus2;
  double b;
};

using InclusionRegion = std::variant<Disk, CassiniOval>;

bool contains(const InclusionRegion& region, cplx w, double slack = 0.0);
bool union_contains(const std::vector<InclusionRegion>& regions, cplx w, double slack = 0.0);

std::vector<InclusionRegion> gershgorin(const Matrix& h);
std::vector<InclusionRegion> brauer_cassini(const Matrix& h);

// Groups of Gershgorin disk indices whose unions are connected.
std::vector<std::vector<int>> gershgorin_components(const Matrix& h);

struct RegionComponent {
  int cells = 0;
  cplx sample;
  bool meets_real_axis = false;
};

// Connected components of a region union, sampled on a grid over the box.
std::vector<RegionComponent> region_components(const std::vector<InclusionRegion>& regions, cplx lower_left,
                                               cplx upper_right, int resolution);

struct BauerFikeResult {
  double radius;
  double condition_number;
  std::vector<InclusionRegion> disks;
  bool real_spectrum_certificate;
};

// The certificate also needs the caller to assert that H0 and H1 share an
// intertwiner; that premise is not checked here.
BauerFikeResult bauer_fike(const Matrix& h0, const Matrix& h1, const Matrix& s, bool shared_intertwiner);

struct BlochPoint {
  double x, y, z;
};

BlochPoint bloch(const Vector& v);

}  // namespace nhs
