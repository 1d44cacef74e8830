#include "nhs/fermions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "nhs/metric.hpp"

namespace nhs {

namespace {

constexpr int kMaxJordanWigner = 12;
constexpr int kMaxMetric = 10;
constexpr int kMaxSubsetSites = 30;

bool occupied(std::uint32_t word, int bit) { return (word >> bit) & 1u; }

// Sign of the parity string on qubits before `bit`: -1 for every occupied one.
double string_sign(std::uint32_t word, int bit) {
  const std::uint32_t below = (1u << bit) - 1u;
  return std::popcount(word & below) % 2 == 0 ? 1.0 : -1.0;
}

double opnorm(const Matrix& m) { return m.size() ? m.jacobiSvd().singularValues()(0) : 0.0; }

void check_jw_size(int n) {
  if (n < 1 || n > kMaxJordanWigner) throw Error(ErrorKind::SizeLimit, "Fock space limited to 1 <= n <= 12");
}

}  // namespace

Subset subset_of(std::initializer_list<int> sites) {
  Subset s = 0;
  for (int i : sites) {
    if (i < 1 || i > kMaxSubsetSites) throw Error(ErrorKind::IndexOutOfRange, "site out of range");
    s |= 1u << (i - 1);
  }
  return s;
}

std::vector<int> sites_of(Subset s) {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i)
    if (occupied(s, i)) out.push_back(i + 1);
  return out;
}

int cardinality(Subset s) { return std::popcount(s); }

std::vector<Subset> enumerate_subsets(int n) {
  if (n < 1 || n > kMaxSubsetSites) throw Error(ErrorKind::SizeLimit, "subset enumeration limited to n <= 30");
  std::vector<Subset> out;
  for (Subset s = 1; s < (Subset{1} << n); ++s) out.push_back(s);
  std::stable_sort(out.begin(), out.end(), [](Subset a, Subset b) { return cardinality(a) < cardinality(b); });
  return out;
}

CarOperators jordan_wigner(int n) {
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 1);
  return jordan_wigner(n, order);
}

CarOperators jordan_wigner(int n, const std::vector<int>& order) {
  check_jw_size(n);
  std::vector<int> seen(order);
  std::sort(seen.begin(), seen.end());
  for (int i = 0; i < n; ++i)
    if (static_cast<int>(seen.size()) != n || seen[static_cast<std::size_t>(i)] != i + 1)
      throw Error(ErrorKind::ParamViolation, "order must be a permutation of 1..n");
  const std::uint32_t dim = 1u << n;
  CarOperators out{n, std::vector<SparseMatrix>(static_cast<std::size_t>(n)), std::vector<SparseMatrix>(static_cast<std::size_t>(n))};
  for (int qubit = 0; qubit < n; ++qubit) {
    std::vector<Eigen::Triplet<cplx>> entries;
    entries.reserve(dim / 2);
    for (std::uint32_t w = 0; w < dim; ++w)
      if (occupied(w, qubit)) entries.emplace_back(static_cast<int>(w & ~(1u << qubit)), static_cast<int>(w), string_sign(w, qubit));
    SparseMatrix a(dim, dim);
    a.setFromTriplets(entries.begin(), entries.end());
    const auto mode = static_cast<std::size_t>(order[static_cast<std::size_t>(qubit)] - 1);
    out.adag[mode] = a.adjoint();
    out.a[mode] = std::move(a);
  }
  return out;
}

SparseMatrix dgamma(const Matrix& h) {
  const int n = static_cast<int>(h.rows());
  if (h.cols() != n) throw Error(ErrorKind::DimensionMismatch, "h must be square");
  check_jw_size(n);
  const std::uint32_t dim = 1u << n;
  std::vector<Eigen::Triplet<cplx>> entries;
  for (std::uint32_t w = 0; w < dim; ++w)
    for (int j = 0; j < n; ++j) {
      if (!occupied(w, j)) continue;
      const std::uint32_t mid = w & ~(1u << j);
      const double sj = string_sign(w, j);
      for (int i = 0; i < n; ++i) {
        if (h(i, j) == cplx(0.0) || occupied(mid, i)) continue;
        const std::uint32_t to = mid | (1u << i);
        entries.emplace_back(static_cast<int>(to), static_cast<int>(w), h(i, j) * sj * string_sign(mid, i));
      }
    }
  SparseMatrix out(dim, dim);
  out.setFromTriplets(entries.begin(), entries.end());
  return out;
}

Matrix SectorMatrix::dense() const {
  const Eigen::Index dim = Eigen::Index{1} << n;
  Matrix out = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < blocks.size(); ++k)
    for (std::size_t r = 0; r < basis[k].size(); ++r)
      for (std::size_t c = 0; c < basis[k].size(); ++c)
        out(basis[k][r], basis[k][c]) = blocks[k](static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  return out;
}

namespace {

std::vector<std::vector<Subset>> sector_basis(int n) {
  std::vector<std::vector<Subset>> basis(static_cast<std::size_t>(n + 1));
  for (Subset w = 0; w < (Subset{1} << n); ++w) basis[static_cast<std::size_t>(cardinality(w))].push_back(w);
  return basis;
}

}  // namespace

SectorMatrix sector_blocks(const SparseMatrix& op, int n) {
  SectorMatrix out;
  out.n = n;
  out.basis = sector_basis(n);
  std::vector<int> position(std::size_t{1} << n);
  for (const auto& sector : out.basis)
    for (std::size_t r = 0; r < sector.size(); ++r) position[sector[r]] = static_cast<int>(r);
  for (const auto& sector : out.basis) out.blocks.push_back(Matrix::Zero(static_cast<Eigen::Index>(sector.size()), static_cast<Eigen::Index>(sector.size())));
  for (int col = 0; col < op.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(op, col); it; ++it) {
      const auto row = static_cast<Subset>(it.row());
      const auto c = static_cast<Subset>(it.col());
      if (cardinality(row) != cardinality(c))
        throw Error(ErrorKind::ParamViolation, "operator does not conserve particle number");
      out.blocks[static_cast<std::size_t>(cardinality(row))](position[row], position[c]) = it.value();
    }
  return out;
}

SectorMatrix second_quantized_metric(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n) throw Error(ErrorKind::DimensionMismatch, "M must be square");
  if (n < 1 || n > kMaxMetric) throw Error(ErrorKind::SizeLimit, "second-quantized metric limited to n <= 10");
  if (opnorm(m - m.adjoint()) > 1e-10 * opnorm(m)) throw Error(ErrorKind::NotPositive, "M must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > 1e-14 * es.eigenvalues().cwiseAbs().maxCoeff()))
    throw Error(ErrorKind::NotPositive, "M must be positive-definite");

  SectorMatrix out;
  out.n = n;
  out.basis = sector_basis(n);
  for (const auto& sector : out.basis) {
    const auto size = static_cast<Eigen::Index>(sector.size());
    Matrix block(size, size);
    for (Eigen::Index r = 0; r < size; ++r)
      for (Eigen::Index c = 0; c < size; ++c) {
        const auto rows = sites_of(sector[static_cast<std::size_t>(r)]);
        const auto cols = sites_of(sector[static_cast<std::size_t>(c)]);
        const auto k = static_cast<Eigen::Index>(rows.size());
        if (k == 0) {
          block(r, c) = 1.0;
          continue;
        }
        Matrix minor(k, k);
        for (Eigen::Index i = 0; i < k; ++i)
          for (Eigen::Index j = 0; j < k; ++j) minor(i, j) = m(rows[static_cast<std::size_t>(i)] - 1, cols[static_cast<std::size_t>(j)] - 1);
        block(r, c) = minor.determinant();
      }
    out.blocks.push_back(std::move(block));
  }
  return out;
}

SecondQuantizedResidual intertwines_second_quantized(const Matrix& h, const Matrix& m) {
  const int n = static_cast<int>(h.rows());
  if (m.rows() != n || m.cols() != n || h.cols() != n) throw Error(ErrorKind::DimensionMismatch, "h and M must match");
  const SectorMatrix eta = second_quantized_metric(m);
  const SectorMatrix lift = sector_blocks(dgamma(h), n);
  double eta_norm = 0.0, lift_norm = 0.0, lift_res = 0.0, num_res = 0.0;
  for (std::size_t k = 0; k < eta.blocks.size(); ++k) {
    const Matrix& e = eta.blocks[k];
    const Matrix& g = lift.blocks[k];
    eta_norm = std::max(eta_norm, opnorm(e));
    lift_norm = std::max(lift_norm, opnorm(g));
    lift_res = std::max(lift_res, opnorm(e * g - g.adjoint() * e));
    // The number operator is k times the identity on this sector.
    const Matrix number = static_cast<double>(k) * Matrix::Identity(e.rows(), e.cols());
    num_res = std::max(num_res, opnorm(e * number - number * e));
  }
  const double denom = std::max(eta_norm, 1e-300);
  return {lift_res / (denom * std::max(lift_norm, 1e-300)), num_res / (denom * std::max(1.0, static_cast<double>(n)))};
}

LocalityReport local_kernel(const Matrix& m, Subset a) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n) throw Error(ErrorKind::DimensionMismatch, "M must be square");
  if (n > kMaxSubsetSites) throw Error(ErrorKind::SizeLimit, "subsystems limited to n <= 30");
  const Subset full = (Subset{1} << n) - 1;
  if (a == 0 || (a & ~full)) throw Error(ErrorKind::IndexOutOfRange, "subsystem must be a nonempty subset of 1..n");
  LocalityReport r;
  r.subsystem = a;
  const auto inside = sites_of(a);
  const auto outside = sites_of(full & ~a);
  const auto k = static_cast<Eigen::Index>(inside.size());
  if (outside.empty()) {
    r.kernel_dim = n;
    r.kernel_basis = Matrix::Identity(k, k);
    return r;
  }
  Matrix block(static_cast<Eigen::Index>(outside.size()), k);
  for (std::size_t i = 0; i < outside.size(); ++i)
    for (std::size_t j = 0; j < inside.size(); ++j)
      block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(outside[i] - 1, inside[j] - 1);
  Eigen::JacobiSVD<Matrix> svd(block, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double threshold = sv.size() ? 1e-10 * sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > threshold) ++rank;
  r.kernel_dim = static_cast<int>(k - rank);
  r.kernel_basis = svd.matrixV().rightCols(k - rank);
  return r;
}

std::optional<std::vector<int>> associated_involution(const Matrix& m) {
  const int n = static_cast<int>(m.rows());
  const double tol = 1e-12 * std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  std::vector<int> f(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    f[static_cast<std::size_t>(i)] = i;
    int partners = 0;
    for (int j = 0; j < n; ++j)
      if (j != i && (std::abs(m(i, j)) > tol || std::abs(m(j, i)) > tol)) {
        f[static_cast<std::size_t>(i)] = j;
        ++partners;
      }
    if (partners > 1) return std::nullopt;
  }
  for (int i = 0; i < n; ++i)
    if (f[static_cast<std::size_t>(f[static_cast<std::size_t>(i)])] != i) return std::nullopt;
  return f;
}

bool extensively_local(const Matrix& m, Subset a) {
  if (auto f = associated_involution(m)) {
    for (int i : sites_of(a))
      if (!occupied(a, (*f)[static_cast<std::size_t>(i - 1)])) return false;
    return a != 0;
  }
  // K is monotone under enlarging A, so maximal proper subsets suffice.
  const int k = local_kernel(m, a).kernel_dim;
  for (int i : sites_of(a)) {
    const Subset smaller = a & ~(Subset{1} << (i - 1));
    if (smaller == 0) {
      if (k <= 0) return false;
      continue;
    }
    if (local_kernel(m, smaller).kernel_dim >= k) return false;
  }
  return true;
}

namespace {

std::vector<std::vector<int>> components(int n, Subset a) {
  std::vector<std::vector<int>> out;
  for (int i = 1; i <= n; ++i) {
    if (!occupied(a, i - 1)) continue;
    if (!out.empty() && out.back().back() == i - 1)
      out.back().push_back(i);
    else
      out.push_back({i});
  }
  return out;
}

bool has_single(const std::vector<std::vector<int>>& comps) {
  return std::any_of(comps.begin(), comps.end(), [](const auto& c) { return c.size() == 1; });
}

}  // namespace

bool far_impurity_rule(int n, Subset a, bool unit_modulus) {
  if (a == 0) return false;
  const auto comps = components(n, a);
  const auto in = [&](int i) { return i >= 1 && i <= n && occupied(a, i - 1); };
  if (unit_modulus) {
    if (!has_single(comps)) return true;
    if (!in(1) || !in(n)) return false;
    const Subset core = a & ~subset_of({1}) & ~(Subset{1} << (n - 1));
    for (Subset extra : {Subset{0}, subset_of({1}), Subset{1} << (n - 1), subset_of({1}) | (Subset{1} << (n - 1))}) {
      const Subset b = core | extra;
      if (b == 0 || !has_single(components(n, b))) return true;
    }
    return false;
  }
  const auto is_edge_pair = [&](const std::vector<int>& c) {
    return c.size() == 2 && ((c[0] == 1 && c[1] == 2) || (c[0] == n - 1 && c[1] == n));
  };
  for (const auto& c : comps)
    if (c.size() <= 2 && !is_edge_pair(c) && comps.size() == 1) return false;
  for (std::size_t k = 0; k < comps.size(); ++k) {
    const auto& c = comps[k];
    if (c.size() == 1) {
      const int i = c[0];
      if (i - 2 >= 1 && !in(i - 2)) return false;
      if (i + 2 <= n && !in(i + 2)) return false;
    }
    if (c.size() == 2 && !is_edge_pair(c)) {
      int gap = n;
      if (k > 0) gap = std::min(gap, c.front() - comps[k - 1].back());
      if (k + 1 < comps.size()) gap = std::min(gap, comps[k + 1].front() - c.back());
      if (gap > 2) return false;
    }
  }
  if (comps.front().size() == 1 && comps.front()[0] != 1) return false;
  if (comps.back().size() == 1 && comps.back()[0] != n) return false;
  return true;
}

std::vector<Subset> classify_subsystems(const FarImpurity& model, LocalityMode mode, bool unit_modulus) {
  const int n = model.n;
  if (n < 2) throw Error(ErrorKind::IndexOutOfRange, "chain needs n >= 2");
  if (mode == LocalityMode::BruteForce && n > 14) throw Error(ErrorKind::SizeLimit, "brute force limited to n <= 14");
  if (n > kMaxSubsetSites) throw Error(ErrorKind::SizeLimit, "subsystems limited to n <= 30");
  std::vector<Subset> out;
  const auto subsets = enumerate_subsets(n);
  if (mode == LocalityMode::BruteForce) {
    const Matrix m = far_defect_metric(n, model.detuning, model.gain, model.t).eta;
    for (Subset a : subsets)
      if (extensively_local(m, a)) out.push_back(a);
    return out;
  }
  if (model.gain == 0.0) return subsets;  // diagonal metric
  const double modulus = std::abs(cplx(model.detuning, model.gain) / model.t);
  const bool unit = unit_modulus || std::abs(modulus - 1.0) <= 1e-12;
  for (Subset a : subsets)
    if (far_impurity_rule(n, a, unit)) out.push_back(a);
  return out;
}

}  // namespace nhs
