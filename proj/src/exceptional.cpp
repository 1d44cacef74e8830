#include "nhs/exceptional.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <optional>

#include "nhs/spectra.hpp"

namespace nhs {

namespace {

constexpr double pi = std::numbers::pi;

LatticeSpec centered_spec(const ParamFamily& family, ParamPoint p) {
  LatticeSpec s = family.spec(p);
  s.validate();
  cplx mean = 0.0;
  for (auto z : s.z) mean += z;
  mean /= static_cast<double>(s.n());
  for (auto& z : s.z) z -= mean;
  return s;
}

double opnorm(const Matrix& h) { return h.jacobiSvd().singularValues()(0); }

std::vector<cplx> eigenvalues_at(const ParamFamily& family, ParamPoint p) {
  Matrix h = build_matrix(family.spec(p));
  Eigen::ComplexEigenSolver<Matrix> es(h, false);
  return {es.eigenvalues().data(), es.eigenvalues().data() + h.rows()};
}

double re_disc(const ParamFamily& family, ParamPoint p) { return discriminant_surface(family, p).re; }

int sign_of(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

// Marching-squares class: exact zeros count as positive so every cell has 0, 2 or 4 crossings.
bool upper(double v) { return v >= 0.0; }

// Bisection on Re D between two points with opposite signs.
ParamPoint bisect(const ParamFamily& family, ParamPoint a, double da, ParamPoint b) {
  for (int it = 0; it < 80; ++it) {
    ParamPoint mid{(a.x + b.x) / 2, (a.y + b.y) / 2};
    if ((mid.x == a.x && mid.y == a.y) || (mid.x == b.x && mid.y == b.y)) break;
    const double dm = re_disc(family, mid);
    if (dm == 0.0) return mid;
    if (sign_of(dm) == sign_of(da)) {
      a = mid;
      da = dm;
    } else {
      b = mid;
    }
  }
  return {(a.x + b.x) / 2, (a.y + b.y) / 2};
}

double min_pair_gap(const std::vector<cplx>& ev) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ev.size(); ++i)
    for (std::size_t j = i + 1; j < ev.size(); ++j) best = std::min(best, std::abs(ev[i] - ev[j]));
  return best;
}

}  // namespace

ParamFamily qubit_family(ParamBox box) {
  return {"qubit", [](ParamPoint p) { return expand(Qubit{p.x, p.y}); }, box};
}

ParamFamily mirrored_defect_family(int n, int m, double t, ParamBox box) {
  return {"mirrored-defect n=" + std::to_string(n) + " m=" + std::to_string(m),
          [n, m, t](ParamPoint p) { return expand(UniformChain{n, m, t, cplx(p.x, p.y), cplx(p.x, -p.y)}); }, box};
}

ParamFamily nn_defect_family(NearestNeighbourDefect base, ParamBox box) {
  return {"nn-defect", [base](ParamPoint p) {
            auto q = base;
            q.detuning = p.x;
            q.gain = p.y;
            return expand(q);
          },
          box};
}

Discriminant discriminant_surface(const ParamFamily& family, ParamPoint point) {
  const cplx d = discriminant(char_poly(centered_spec(family, point)));
  return {d.real(), d.imag()};
}

double discriminant_scale(const ParamFamily& family, ParamPoint point) {
  auto ev = eigenvalues_at(family, point);
  cplx mean = 0.0;
  for (auto v : ev) mean += v;
  mean /= static_cast<double>(ev.size());
  double scale = 1.0;
  for (std::size_t i = 0; i < ev.size(); ++i)
    for (std::size_t j = i + 1; j < ev.size(); ++j) {
      const double s = std::abs(ev[i] - mean) + std::abs(ev[j] - mean);
      scale *= s * s;
    }
  return scale;
}

namespace {

// Marching squares over the fine grid restricted to coarse cells whose
// corners change sign.
class LocusTracer {
 public:
  LocusTracer(const ParamFamily& family, int resolution, LocusOptions opts)
      : family_(family), coarse_(resolution), factor_(1 << std::max(0, opts.refinement_levels)), opts_(opts) {
    fine_ = (coarse_ - 1) * factor_ + 1;
    dx_ = (family.box.x_max - family.box.x_min) / (fine_ - 1);
    dy_ = (family.box.y_max - family.box.y_min) / (fine_ - 1);
  }

  EPContour run() {
    EPContour out;
    out.grid_resolution = coarse_;
    for (int i = 0; i + 1 < coarse_; ++i)
      for (int j = 0; j + 1 < coarse_; ++j) {
        const bool s00 = upper(value(i * factor_, j * factor_));
        const bool s10 = upper(value((i + 1) * factor_, j * factor_));
        const bool s01 = upper(value(i * factor_, (j + 1) * factor_));
        const bool s11 = upper(value((i + 1) * factor_, (j + 1) * factor_));
        const bool mixed = !(s00 == s10 && s00 == s01 && s00 == s11);
        if (!mixed) continue;
        for (int a = 0; a < factor_; ++a)
          for (int b = 0; b < factor_; ++b) march(i * factor_ + a, j * factor_ + b);
      }
    chain(out);
    return out;
  }

 private:
  using Node = std::pair<int, int>;
  using EdgeKey = std::pair<Node, Node>;

  ParamPoint at(int i, int j) const {
    return {family_.box.x_min + i * dx_, family_.box.y_min + j * dy_};
  }

  double value(int i, int j) {
    const Node key{i, j};
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const double v = re_disc(family_, at(i, j));
    cache_.emplace(key, v);
    return v;
  }

  // Crossing on the edge between two nodes, refined once and shared.
  std::optional<EdgeKey> crossing(Node a, Node b) {
    if (b < a) std::swap(a, b);
    const double va = value(a.first, a.second), vb = value(b.first, b.second);
    if (upper(va) == upper(vb)) return std::nullopt;
    const EdgeKey key{a, b};
    if (!points_.count(key)) points_.emplace(key, refine(a, va, b));
    return key;
  }

  std::optional<ParamPoint> refine(Node a, double va, Node b) {
    const ParamPoint pa = at(a.first, a.second), pb = at(b.first, b.second);
    const double vb = value(b.first, b.second);
    const ParamPoint p = va == 0.0 ? pa : (vb == 0.0 ? pb : bisect(family_, pa, va, pb));
    const auto d = discriminant_surface(family_, p);
    const double scale = discriminant_scale(family_, p);
    const Matrix h = build_matrix(family_.spec(p));
    const double gap = min_pair_gap(eigenvalues_at(family_, p));
    if (std::hypot(d.re, d.im) > opts_.residual_tol * scale && std::abs(d.re) > opts_.residual_tol * scale) {
      ++dropped_;
      return std::nullopt;
    }
    if (gap > opts_.pair_gap_tol * opnorm(h)) {
      ++dropped_;
      return std::nullopt;
    }
    return p;
  }

  void march(int i, int j) {
    const Node c00{i, j}, c10{i + 1, j}, c11{i + 1, j + 1}, c01{i, j + 1};
    std::vector<EdgeKey> hits;
    for (auto [a, b] : {std::pair{c00, c10}, {c10, c11}, {c11, c01}, {c01, c00}})
      if (auto k = crossing(a, b)) hits.push_back(*k);
    if (hits.size() == 2) {
      link(hits[0], hits[1]);
    } else if (hits.size() == 4) {
      // Saddle: pair edges around the corner that shares the center's sign.
      const double center = re_disc(family_, {at(i, j).x + dx_ / 2, at(i, j).y + dy_ / 2});
      if (upper(center) == upper(value(i, j))) {
        link(hits[0], hits[1]);
        link(hits[2], hits[3]);
      } else {
        link(hits[0], hits[3]);
        link(hits[1], hits[2]);
      }
    }
  }

  void link(const EdgeKey& a, const EdgeKey& b) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }

  void chain(EPContour& out) {
    std::map<EdgeKey, bool> used;
    auto walk = [&](EdgeKey start) {
      std::vector<ParamPoint> line;
      EdgeKey prev = start, cur = start;
      used[start] = true;
      if (auto p = points_[start]) line.push_back(*p);
      while (true) {
        const auto& next = adjacency_[cur];
        std::optional<EdgeKey> step;
        for (const auto& n : next)
          if (!used[n] && !(n == prev && n != cur)) {
            step = n;
            break;
          }
        if (!step) break;
        used[*step] = true;
        if (auto p = points_[*step]) line.push_back(*p);
        prev = cur;
        cur = *step;
      }
      if (!line.empty()) out.segments.push_back(std::move(line));
    };
    // Open polylines first, starting from their ends.
    for (const auto& [key, nbrs] : adjacency_)
      if (nbrs.size() == 1 && !used[key]) walk(key);
    for (const auto& [key, nbrs] : adjacency_)
      if (!used[key]) walk(key);
    out.dropped_points = dropped_;
  }

  const ParamFamily& family_;
  int coarse_;
  int factor_;
  int fine_ = 0;
  double dx_ = 0.0, dy_ = 0.0;
  LocusOptions opts_;
  int dropped_ = 0;
  std::map<Node, double> cache_;
  std::map<EdgeKey, std::optional<ParamPoint>> points_;
  std::map<EdgeKey, std::vector<EdgeKey>> adjacency_;
};

}  // namespace

EPContour ep_locus(const ParamFamily& family, int resolution, LocusOptions opts) {
  if (resolution < 16) throw Error(ErrorKind::IndexOutOfRange, "ep_locus resolution must be >= 16");
  return LocusTracer(family, resolution, opts).run();
}

std::vector<double> crossings_along_y(const ParamFamily& family, double x, const std::vector<double>& ys) {
  std::vector<double> out;
  if (ys.empty()) return out;
  double prev = re_disc(family, {x, ys[0]});
  for (std::size_t k = 1; k < ys.size(); ++k) {
    const double cur = re_disc(family, {x, ys[k]});
    if (prev == 0.0) {
      out.push_back(ys[k - 1]);
    } else if (sign_of(prev) * sign_of(cur) < 0) {
      out.push_back(bisect(family, {x, ys[k - 1]}, prev, {x, ys[k]}).y);
    }
    prev = cur;
  }
  return out;
}

namespace {

// Remainder of p modulo the monic quadratic lambda^2 + u lambda + v.
std::pair<double, double> remainder_mod_quadratic(const std::vector<double>& p, double u, double v) {
  std::vector<double> r(p);
  for (int k = static_cast<int>(r.size()) - 1; k >= 2; --k) {
    const double lead = r[static_cast<std::size_t>(k)];
    r[static_cast<std::size_t>(k - 1)] -= lead * u;
    r[static_cast<std::size_t>(k - 2)] -= lead * v;
    r[static_cast<std::size_t>(k)] = 0.0;
  }
  return {r.size() > 0 ? r[0] : 0.0, r.size() > 1 ? r[1] : 0.0};
}

std::vector<double> real_coeffs(const ComplexPoly& p) {
  std::vector<double> out;
  for (auto c : p.coeffs()) out.push_back(c.real());
  return out;
}

double horner(const std::vector<double>& p, double x) {
  double acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

std::vector<double> deriv(const std::vector<double>& p) {
  std::vector<double> d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(static_cast<double>(k) * p[k]);
  return d;
}

// Square Newton solve with forward-difference Jacobian.
std::optional<Eigen::VectorXd> newton(auto&& residual, Eigen::VectorXd x) {
  const Eigen::Index n = x.size();
  for (int it = 0; it < 60; ++it) {
    const Eigen::VectorXd f = residual(x);
    Eigen::MatrixXd jac(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      Eigen::VectorXd xp = x;
      const double h = 1e-7 * (1.0 + std::abs(x(k)));
      xp(k) += h;
      jac.col(k) = (residual(xp) - f) / h;
    }
    const Eigen::VectorXd step = jac.fullPivLu().solve(-f);
    if (!step.allFinite()) return std::nullopt;
    x += step;
    if (step.norm() <= 1e-14 * (1.0 + x.norm())) return x;
    if (!x.allFinite() || x.norm() > 1e8) return std::nullopt;
  }
  return x;
}

struct Candidate {
  ParamPoint point;
  bool triple;
};

// Triple root a of the centered characteristic polynomial.
std::optional<ParamPoint> refine_triple(const ParamFamily& f, ParamPoint seed, double a) {
  auto residual = [&](const Eigen::VectorXd& v) {
    const auto p = real_coeffs(char_poly(centered_spec(f, {v(0), v(1)})));
    const auto d1 = deriv(p);
    const auto d2 = deriv(d1);
    Eigen::VectorXd r(3);
    r << horner(p, v(2)), horner(d1, v(2)), horner(d2, v(2));
    return r;
  };
  Eigen::VectorXd x(3);
  x << seed.x, seed.y, a;
  auto sol = newton(residual, x);
  if (!sol) return std::nullopt;
  const auto p = real_coeffs(char_poly(centered_spec(f, {(*sol)(0), (*sol)(1)})));
  double scale = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) scale += std::abs(p[k]) * std::pow(std::abs((*sol)(2)), k);
  if (residual(*sol).norm() > 1e-8 * std::max(scale, 1.0)) return std::nullopt;
  return ParamPoint{(*sol)(0), (*sol)(1)};
}

// Two double roots: p divisible by (lambda^2 + u lambda + v)^2.
std::optional<ParamPoint> refine_double_pair(const ParamFamily& f, ParamPoint seed, double u, double v) {
  auto residual = [&](const Eigen::VectorXd& w) {
    const auto p = real_coeffs(char_poly(centered_spec(f, {w(0), w(1)})));
    const auto [r0, r1] = remainder_mod_quadratic(p, w(2), w(3));
    const auto [s0, s1] = remainder_mod_quadratic(deriv(p), w(2), w(3));
    Eigen::VectorXd r(4);
    r << r0, r1, s0, s1;
    return r;
  };
  Eigen::VectorXd x(4);
  x << seed.x, seed.y, u, v;
  auto sol = newton(residual, x);
  if (!sol) return std::nullopt;
  const auto p = real_coeffs(char_poly(centered_spec(f, {(*sol)(0), (*sol)(1)})));
  double scale = 0.0;
  for (auto c : p) scale = std::max(scale, std::abs(c));
  if (residual(*sol).norm() > 1e-8 * std::max(scale, 1.0)) return std::nullopt;
  // A repeated quadratic factor with a double root is a quadruple root; skip.
  if (std::abs((*sol)(2) * (*sol)(2) - 4.0 * (*sol)(3)) < 1e-8) return std::nullopt;
  return ParamPoint{(*sol)(0), (*sol)(1)};
}

bool real_char_poly(const ParamFamily& f, ParamPoint p) {
  const auto cp = char_poly(centered_spec(f, p));
  const double scale = cp.max_abs_coeff();
  for (auto c : cp.coeffs())
    if (std::abs(c.imag()) > 1e-9 * scale) return false;
  return true;
}

// Sign changes of Re D and their angles on a small circle.
std::vector<double> circle_crossings(const ParamFamily& f, ParamPoint c, double radius) {
  constexpr int kSamples = 2048;
  std::vector<double> angles;
  auto at = [&](double th) { return ParamPoint{c.x + radius * std::cos(th), c.y + radius * std::sin(th)}; };
  double prev = re_disc(f, at(0.0));
  for (int k = 1; k <= kSamples; ++k) {
    const double th = 2 * pi * k / kSamples;
    const double cur = re_disc(f, at(th));
    if (sign_of(prev) * sign_of(cur) < 0) angles.push_back(th - pi / kSamples);
    prev = cur;
  }
  return angles;
}

}  // namespace

std::vector<SingularPoint> singular_points(const ParamFamily& family, const EPContour& contour) {
  const auto& box = family.box;
  const int res = std::clamp(contour.grid_resolution, 16, 96);
  const double wx = box.x_max - box.x_min, wy = box.y_max - box.y_min;
  std::vector<std::vector<double>> second_gap(static_cast<std::size_t>(res), std::vector<double>(static_cast<std::size_t>(res)));
  std::vector<std::vector<std::vector<cplx>>> spectra(static_cast<std::size_t>(res), std::vector<std::vector<cplx>>(static_cast<std::size_t>(res)));
  auto node = [&](int i, int j) { return ParamPoint{box.x_min + wx * i / (res - 1), box.y_min + wy * j / (res - 1)}; };
  for (int i = 0; i < res; ++i)
    for (int j = 0; j < res; ++j) {
      auto ev = eigenvalues_at(family, node(i, j));
      std::vector<double> gaps;
      for (std::size_t a = 0; a < ev.size(); ++a)
        for (std::size_t b = a + 1; b < ev.size(); ++b) gaps.push_back(std::abs(ev[a] - ev[b]));
      std::sort(gaps.begin(), gaps.end());
      second_gap[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = gaps.size() > 1 ? gaps[1] : 0.0;
      spectra[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::move(ev);
    }

  std::vector<ParamPoint> found;
  auto record = [&](std::optional<ParamPoint> p) {
    if (!p || !box.contains(*p)) return;
    for (const auto& q : found)
      if (std::hypot(p->x - q.x, p->y - q.y) < 1e-6 * std::hypot(wx, wy)) return;
    found.push_back(*p);
  };
  for (int i = 0; i < res; ++i)
    for (int j = 0; j < res; ++j) {
      const double g = second_gap[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      bool local_min = true;
      for (int di = -1; di <= 1 && local_min; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          const int a = i + di, b = j + dj;
          if ((di || dj) && a >= 0 && b >= 0 && a < res && b < res &&
              second_gap[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] < g) {
            local_min = false;
            break;
          }
        }
      if (!local_min) continue;
      const ParamPoint seed = node(i, j);
      if (!real_char_poly(family, seed)) continue;
      auto ev = spectra[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      cplx mean = 0.0;
      for (auto v : ev) mean += v;
      mean /= static_cast<double>(ev.size());
      for (auto& v : ev) v -= mean;
      const std::size_t n = ev.size();
      if (n >= 3) {
        // Tightest triple.
        double best = std::numeric_limits<double>::infinity();
        cplx center = 0.0;
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c) {
              const double spread = std::abs(ev[a] - ev[b]) + std::abs(ev[a] - ev[c]) + std::abs(ev[b] - ev[c]);
              if (spread < best) {
                best = spread;
                center = (ev[a] + ev[b] + ev[c]) / 3.0;
              }
            }
        record(refine_triple(family, seed, center.real()));
      }
      if (n >= 4) {
        // Two tightest disjoint pairs.
        double best = std::numeric_limits<double>::infinity();
        cplx pa = 0.0, pb = 0.0;
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
              for (std::size_t d = c + 1; d < n; ++d) {
                if (c == a || c == b || d == a || d == b) continue;
                const double s = std::abs(ev[a] - ev[b]) + std::abs(ev[c] - ev[d]);
                if (s < best) {
                  best = s;
                  pa = (ev[a] + ev[b]) / 2.0;
                  pb = (ev[c] + ev[d]) / 2.0;
                }
              }
        record(refine_double_pair(family, seed, -(pa + pb).real(), (pa * pb).real()));
      }
    }

  std::vector<SingularPoint> out;
  const double radius = 1e-3 * std::hypot(wx, wy);
  for (const auto& p : found) {
    const auto angles = circle_crossings(family, p, radius);
    SingularClass cls;
    if (angles.empty()) {
      cls = SingularClass::Acnode;
    } else if (angles.size() == 4) {
      cls = SingularClass::Crunode;
    } else if (angles.size() == 2) {
      double sep = std::abs(angles[0] - angles[1]);
      sep = std::min(sep, 2 * pi - sep);
      if (sep >= pi / 2) continue;  // smooth branch through the point
      cls = SingularClass::Cusp;
    } else {
      continue;
    }
    SingularPoint sp{p, cls, 0, 1};
    try {
      sp.ep_order = puiseux_fit(family, p, {std::cos(1.0), std::sin(1.0)}).exponent;
    } catch (const Error&) {
      sp.ep_order = 0;
    }
    EigOptions loose;
    loose.cluster_tol = 1e-5;
    for (const auto& e : eig(build_matrix(family.spec(p)), loose).eigenvalues) sp.jump_order = std::max(sp.jump_order, e.algebraic);
    out.push_back(sp);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.point.x != b.point.x ? a.point.x < b.point.x : a.point.y < b.point.y;
  });
  return out;
}

PuiseuxFit puiseux_fit(const ParamFamily& family, ParamPoint point, ParamPoint direction) {
  const double len = std::hypot(direction.x, direction.y);
  if (len == 0.0) throw Error(ErrorKind::DegenerateInput, "zero direction");
  const ParamPoint dir{direction.x / len, direction.y / len};
  const Matrix h0 = build_matrix(family.spec(point));
  const auto ev0 = eigenvalues_at(family, point);
  const double norm = opnorm(h0);

  // Largest cluster of coalescing eigenvalues at the base point.
  const std::size_t n = ev0.size();
  std::vector<std::size_t> cluster;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> members;
    for (std::size_t j = 0; j < n; ++j)
      if (std::abs(ev0[i] - ev0[j]) <= 1e-4 * norm) members.push_back(j);
    if (members.size() > cluster.size()) cluster = members;
  }
  cplx center = 0.0;
  for (auto i : cluster) center += ev0[i];
  center /= static_cast<double>(cluster.size());

  constexpr int kSteps = 8;
  std::vector<double> log_t, log_d, shifts, thetas;
  for (int k = 0; k < kSteps; ++k) {
    const double theta = 1e-6 * std::pow(1e3, static_cast<double>(k) / (kSteps - 1));
    auto ev = eigenvalues_at(family, {point.x + theta * dir.x, point.y + theta * dir.y});
    double shift = 0.0;
    if (cluster.size() > 1) {
      // Eigenvalues nearest the cluster center, as many as the cluster holds.
      std::sort(ev.begin(), ev.end(), [&](cplx a, cplx b) { return std::abs(a - center) < std::abs(b - center); });
      for (std::size_t j = 0; j < cluster.size(); ++j) shift = std::max(shift, std::abs(ev[j] - center));
    } else {
      for (auto v : ev) {
        double nearest = std::numeric_limits<double>::infinity();
        for (auto w : ev0) nearest = std::min(nearest, std::abs(v - w));
        shift = std::max(shift, nearest);
      }
    }
    if (shift <= 0.0) throw Error(ErrorKind::FitRejected, "eigenvalues did not move along the ray");
    thetas.push_back(theta);
    shifts.push_back(shift);
    log_t.push_back(std::log(theta));
    log_d.push_back(std::log(shift));
  }
  double mt = 0.0, md = 0.0;
  for (int k = 0; k < kSteps; ++k) {
    mt += log_t[static_cast<std::size_t>(k)] / kSteps;
    md += log_d[static_cast<std::size_t>(k)] / kSteps;
  }
  double num = 0.0, den = 0.0;
  for (int k = 0; k < kSteps; ++k) {
    num += (log_t[static_cast<std::size_t>(k)] - mt) * (log_d[static_cast<std::size_t>(k)] - md);
    den += (log_t[static_cast<std::size_t>(k)] - mt) * (log_t[static_cast<std::size_t>(k)] - mt);
  }
  const double slope = num / den;
  const int k = static_cast<int>(std::lround(1.0 / slope));
  if (k < 1 || k > 6 || std::abs(slope - 1.0 / k) > 0.05)
    throw Error(ErrorKind::FitRejected, "slope " + std::to_string(slope) + " matches no integer exponent");
  double log_coeff = 0.0;
  for (int j = 0; j < kSteps; ++j)
    log_coeff += std::log(shifts[static_cast<std::size_t>(j)] / std::pow(thetas[static_cast<std::size_t>(j)], 1.0 / k)) / kSteps;
  return {k, std::exp(log_coeff), slope};
}

double ep_asymptote(int n, double detuning, double t) {
  if (n == 2) return t;
  if (n < 2) throw Error(ErrorKind::IndexOutOfRange, "asymptote needs n >= 2");
  if (detuning / t < 5.0) throw Error(ErrorKind::OutOfRegime, "asymptote needs detuning >= 5 t");
  return std::pow(t, n - 1) / std::pow(detuning, n - 2);
}

}  // namespace nhs
