#include "nhs/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace nhs {

namespace {

double matrix_norm(const Matrix& h) {
  if (h.size() == 0) return 0.0;
  return h.jacobiSvd().singularValues()(0);
}

int find_root(std::vector<int>& parent, int i) {
  while (parent[static_cast<std::size_t>(i)] != i) {
    parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
    i = parent[static_cast<std::size_t>(i)];
  }
  return i;
}

std::vector<std::vector<int>> link_groups(int count, auto&& linked) {
  std::vector<int> parent(static_cast<std::size_t>(count));
  std::iota(parent.begin(), parent.end(), 0);
  for (int i = 0; i < count; ++i)
    for (int j = i + 1; j < count; ++j)
      if (linked(i, j)) parent[static_cast<std::size_t>(find_root(parent, i))] = find_root(parent, j);
  std::vector<std::vector<int>> groups;
  std::vector<int> slot(static_cast<std::size_t>(count), -1);
  for (int i = 0; i < count; ++i) {
    const int r = find_root(parent, i);
    if (slot[static_cast<std::size_t>(r)] < 0) {
      slot[static_cast<std::size_t>(r)] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[static_cast<std::size_t>(r)])].push_back(i);
  }
  return groups;
}

bool before(cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); }

}  // namespace

SpectralReport eig(const Matrix& h, EigOptions opts) {
  const int n = static_cast<int>(h.rows());
  Eigen::ComplexEigenSolver<Matrix> solver(h, false);
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::NotConverged, "dense eigensolver");
  const Vector& values = solver.eigenvalues();
  const double norm = std::max(matrix_norm(h), 1e-300);
  const double radius = opts.cluster_tol * norm;

  auto groups = link_groups(n, [&](int i, int j) { return std::abs(values(i) - values(j)) <= radius; });

  SpectralReport report;
  report.eigenvectors.resize(n, static_cast<Eigen::Index>(groups.size()));
  std::vector<std::pair<EigenEntry, Vector>> entries;
  for (const auto& g : groups) {
    cplx mean = 0.0;
    for (int i : g) mean += values(i);
    mean /= static_cast<double>(g.size());
    Eigen::JacobiSVD<Matrix> svd(mean * Matrix::Identity(n, n) - h, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = opts.rank_tol * std::max(sv(0), norm);
    int nullity = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
      if (sv(k) <= cut) ++nullity;
    const int algebraic = static_cast<int>(g.size());
    const int geometric = std::clamp(nullity, 1, algebraic);
    entries.push_back({{mean, algebraic, geometric}, svd.matrixV().col(n - 1)});
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return before(a.first.value, b.first.value); });
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& [entry, vec] = entries[k];
    report.eigenvalues.push_back(entry);
    report.eigenvectors.col(static_cast<Eigen::Index>(k)) = vec;
    report.max_residual = std::max(report.max_residual, (h * vec - entry.value * vec).norm());
  }
  report.pt = pt_classify(h);
  return report;
}

bool is_centrohermitian(const Matrix& h, double tol) {
  const Eigen::Index n = h.rows();
  const double scale = std::max(h.cwiseAbs().maxCoeff(), 1e-300);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::abs(h(i, j) - std::conj(h(n - 1 - i, n - 1 - j))) > tol * scale) return false;
  return true;
}

PtClass pt_classify(const Matrix& h, double tol) {
  PtClass out;
  if (h.rows() == 0 || !is_centrohermitian(h, tol)) return out;
  Eigen::ComplexEigenSolver<Matrix> solver(h, false);
  const double cut = tol * matrix_norm(h);
  std::vector<cplx> upper, lower;
  for (Eigen::Index k = 0; k < h.rows(); ++k) {
    const cplx v = solver.eigenvalues()(k);
    if (v.imag() > cut) upper.push_back(v);
    if (v.imag() < -cut) lower.push_back(v);
  }
  if (upper.empty() && lower.empty()) {
    out.kind = PtKind::Unbroken;
    return out;
  }
  out.kind = PtKind::Broken;
  std::sort(upper.begin(), upper.end(), before);
  for (auto u : upper) {
    auto it = std::min_element(lower.begin(), lower.end(), [&](cplx a, cplx b) {
      return std::abs(a - std::conj(u)) < std::abs(b - std::conj(u));
    });
    if (it == lower.end()) break;
    out.broken_pairs.emplace_back(u, *it);
    lower.erase(it);
  }
  return out;
}

bool contains(const InclusionRegion& region, cplx w, double slack) {
  if (auto d = std::get_if<Disk>(&region)) return std::abs(w - d->center) <= d->radius + slack;
  const auto& c = std::get<CassiniOval>(region);
  return std::abs(w - c.focus1) * std::abs(w - c.focus2) <= c.b + slack;
}

bool union_contains(const std::vector<InclusionRegion>& regions, cplx w, double slack) {
  return std::any_of(regions.begin(), regions.end(), [&](const auto& r) { return contains(r, w, slack); });
}

namespace {

std::vector<double> off_diagonal_row_sums(const Matrix& h) {
  std::vector<double> r(static_cast<std::size_t>(h.rows()), 0.0);
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    for (Eigen::Index j = 0; j < h.cols(); ++j)
      if (i != j) r[static_cast<std::size_t>(i)] += std::abs(h(i, j));
  return r;
}

}  // namespace

std::vector<InclusionRegion> gershgorin(const Matrix& h) {
  const auto r = off_diagonal_row_sums(h);
  std::vector<InclusionRegion> out;
  for (Eigen::Index i = 0; i < h.rows(); ++i) out.emplace_back(Disk{h(i, i), r[static_cast<std::size_t>(i)]});
  return out;
}

std::vector<InclusionRegion> brauer_cassini(const Matrix& h) {
  if (h.rows() < 2) throw Error(ErrorKind::DimensionMismatch, "Cassini ovals need n >= 2");
  const auto r = off_diagonal_row_sums(h);
  std::vector<InclusionRegion> out;
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    for (Eigen::Index j = i + 1; j < h.rows(); ++j)
      out.emplace_back(CassiniOval{h(i, i), h(j, j), r[static_cast<std::size_t>(i)] * r[static_cast<std::size_t>(j)]});
  return out;
}

std::vector<std::vector<int>> gershgorin_components(const Matrix& h) {
  const auto disks = gershgorin(h);
  return link_groups(static_cast<int>(disks.size()), [&](int i, int j) {
    const auto& a = std::get<Disk>(disks[static_cast<std::size_t>(i)]);
    const auto& b = std::get<Disk>(disks[static_cast<std::size_t>(j)]);
    return std::abs(a.center - b.center) <= a.radius + b.radius;
  });
}

std::vector<RegionComponent> region_components(const std::vector<InclusionRegion>& regions, cplx lower_left,
                                               cplx upper_right, int resolution) {
  const int nx = resolution, ny = resolution;
  const double dx = (upper_right.real() - lower_left.real()) / (nx - 1);
  const double dy = (upper_right.imag() - lower_left.imag()) / (ny - 1);
  auto point = [&](int i, int j) { return lower_left + cplx(i * dx, j * dy); };
  std::vector<int> label(static_cast<std::size_t>(nx * ny), -2);
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      if (union_contains(regions, point(i, j))) label[static_cast<std::size_t>(i * ny + j)] = -1;

  std::vector<RegionComponent> out;
  std::vector<std::pair<int, int>> stack;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      if (label[static_cast<std::size_t>(i * ny + j)] != -1) continue;
      const int id = static_cast<int>(out.size());
      RegionComponent comp;
      comp.sample = point(i, j);
      stack.push_back({i, j});
      label[static_cast<std::size_t>(i * ny + j)] = id;
      while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        ++comp.cells;
        const double y = lower_left.imag() + b * dy;
        if (std::abs(y) <= dy / 2) comp.meets_real_axis = true;
        for (auto [da, db] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
          const int u = a + da, v = b + db;
          if (u < 0 || v < 0 || u >= nx || v >= ny) continue;
          auto& l = label[static_cast<std::size_t>(u * ny + v)];
          if (l == -1) {
            l = id;
            stack.push_back({u, v});
          }
        }
      }
      out.push_back(comp);
    }
  // Mark crossings between rows on either side of the axis.
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j + 1 < ny; ++j) {
      const double y0 = lower_left.imag() + j * dy, y1 = y0 + dy;
      if (y0 <= 0.0 && y1 >= 0.0) {
        const int a = label[static_cast<std::size_t>(i * ny + j)], b = label[static_cast<std::size_t>(i * ny + j + 1)];
        if (a >= 0 && a == b) out[static_cast<std::size_t>(a)].meets_real_axis = true;
      }
    }
  return out;
}

BauerFikeResult bauer_fike(const Matrix& h0, const Matrix& h1, const Matrix& s, bool shared_intertwiner) {
  Eigen::JacobiSVD<Matrix> svd(s);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-14 * sv(0)) throw Error(ErrorKind::SingularS, "eigenvector matrix is singular");
  const double kappa = sv(0) / sv(sv.size() - 1);
  const Matrix d = s.partialPivLu().solve(h0 * s);
  const Matrix off = d - Matrix(d.diagonal().asDiagonal());
  if (off.norm() > 1e-8 * std::max(1.0, h0.norm()))
    throw Error(ErrorKind::SingularS, "S does not diagonalize H0");
  const double h1_norm = h1.size() == 0 ? 0.0 : matrix_norm(h1);
  BauerFikeResult out{kappa * h1_norm, kappa, {}, false};
  double min_gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    out.disks.emplace_back(Disk{d(i, i), out.radius});
    for (Eigen::Index j = i + 1; j < d.rows(); ++j) min_gap = std::min(min_gap, std::abs(d(i, i) - d(j, j)));
  }
  out.real_spectrum_certificate = shared_intertwiner && h1_norm < min_gap / (2.0 * kappa);
  return out;
}

BlochPoint bloch(const Vector& v) {
  if (v.size() != 2) throw Error(ErrorKind::DimensionMismatch, "Bloch vectors live in C^2");
  const double norm2 = v.squaredNorm();
  if (norm2 == 0.0) throw Error(ErrorKind::ZeroVector, "zero vector has no Bloch image");
  const cplx c = std::conj(v(0)) * v(1);
  return {2.0 * c.real() / norm2, 2.0 * c.imag() / norm2, (std::norm(v(0)) - std::norm(v(1))) / norm2};
}

}  // namespace nhs
