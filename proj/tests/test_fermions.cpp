#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "models.hpp"
#include "nhs/fermions.hpp"
#include "nhs/metric.hpp"
#include "test_util.hpp"

using namespace nhs;
using testutil::cnormal;
using testutil::random_hermitian;
using testutil::random_matrix;
using testutil::random_positive;
using testutil::uniform;

namespace {

double opnorm(const Matrix& m) { return m.jacobiSvd().singularValues()(0); }

double max_abs(const SparseMatrix& m) {
  double worst = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

double car_defect(const CarOperators& ops) {
  const auto dim = static_cast<Eigen::Index>(ops.a[0].rows());
  SparseMatrix id(dim, dim);
  id.setIdentity();
  double worst = 0.0;
  for (int i = 0; i < ops.n; ++i)
    for (int j = 0; j < ops.n; ++j) {
      const auto& ai = ops.a[static_cast<std::size_t>(i)];
      const auto& aj = ops.a[static_cast<std::size_t>(j)];
      const auto& adj = ops.adag[static_cast<std::size_t>(j)];
      SparseMatrix anti = ai * aj + aj * ai;
      worst = std::max(worst, max_abs(anti));
      SparseMatrix mixed = ai * adj + adj * ai;
      if (i == j) mixed -= id;
      worst = std::max(worst, max_abs(mixed));
    }
  return worst;
}

Matrix hermitian_function(const Matrix& m, double (*f)(double)) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  Eigen::VectorXd d = es.eigenvalues().unaryExpr(f);
  return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

double log_fn(double x) { return std::log(x); }
double exp_fn(double x) { return std::exp(x); }

// Extensive locality straight from the definition: every proper subset.
bool locality_by_definition(const Matrix& m, Subset a) {
  const int k = local_kernel(m, a).kernel_dim;
  for (Subset s = (a - 1) & a; s != 0; s = (s - 1) & a)
    if (local_kernel(m, s).kernel_dim >= k) return false;
  return k > 0;
}

}  // namespace

TEST_CASE("subset helpers") {
  CHECK(subset_of({1, 3}) == 0b101u);
  CHECK(sites_of(0b1010u) == std::vector<int>{2, 4});
  const auto all = enumerate_subsets(3);
  CHECK(all == std::vector<Subset>{1, 2, 4, 3, 5, 6, 7});
  CHECK_THROWS_AS(enumerate_subsets(0), Error);
}

TEST_CASE("jordan-wigner single mode and string") {
  auto one = jordan_wigner(1);
  Matrix a = Matrix(one.a[0]);
  CHECK(a(0, 1) == cplx(1.0));
  CHECK(std::abs(a(0, 0)) + std::abs(a(1, 0)) + std::abs(a(1, 1)) == 0.0);

  // a_2 on two sites picks up -1 when site 1 is occupied.
  auto two = jordan_wigner(2);
  Matrix a2 = Matrix(two.a[1]);
  CHECK(a2(0b00, 0b10) == cplx(1.0));
  CHECK(a2(0b01, 0b11) == cplx(-1.0));
  CHECK_THROWS_AS(jordan_wigner(13), Error);
  CHECK_THROWS_AS(jordan_wigner(3, {1, 1, 2}), Error);
}

TEST_CASE("canonical anticommutation relations") {
  for (int n = 1; n <= 8; ++n) CHECK(car_defect(jordan_wigner(n)) <= 1e-12);
  CHECK(car_defect(jordan_wigner(5, {3, 1, 5, 2, 4})) <= 1e-12);
  CHECK(car_defect(jordan_wigner(6, {6, 5, 4, 3, 2, 1})) <= 1e-12);
}

TEST_CASE("word states are ordered creation products") {
  const int n = 5;
  auto ops = jordan_wigner(n);
  for (Subset s = 0; s < (Subset{1} << n); ++s) {
    Eigen::VectorXcd state = Eigen::VectorXcd::Unit(1 << n, 0);
    const auto sites = sites_of(s);
    for (auto it = sites.rbegin(); it != sites.rend(); ++it) state = ops.adag[static_cast<std::size_t>(*it - 1)] * state;
    CHECK((state - Eigen::VectorXcd::Unit(1 << n, s)).norm() <= 1e-14);
  }
}

TEST_CASE("dGamma matches the operator sum") {
  const int n = 4;
  const Matrix h = random_matrix(n);
  auto ops = jordan_wigner(n);
  SparseMatrix sum(16, 16);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sum += h(i, j) * SparseMatrix(ops.adag[static_cast<std::size_t>(i)] * ops.a[static_cast<std::size_t>(j)]);
  CHECK(opnorm(Matrix(dgamma(h)) - Matrix(sum)) <= 1e-12);
}

TEST_CASE("dGamma spectrum is subset sums") {
  const Matrix h = random_matrix(3);
  const auto single = testutil::dense_eigenvalues(h);
  std::vector<cplx> sums;
  for (Subset s = 0; s < 8; ++s) {
    cplx total = 0.0;
    for (int i : sites_of(s)) total += single[static_cast<std::size_t>(i - 1)];
    sums.push_back(total);
  }
  CHECK(testutil::multiset_distance(testutil::dense_eigenvalues(Matrix(dgamma(h))), sums) <= 1e-9);
}

TEST_CASE("dGamma is a Lie homomorphism") {
  for (int n = 2; n <= 5; ++n) {
    const Matrix h = random_matrix(n), k = random_matrix(n);
    const Matrix lhs = Matrix(dgamma(h * k - k * h));
    const Matrix gh = Matrix(dgamma(h)), gk = Matrix(dgamma(k));
    CHECK(opnorm(lhs - (gh * gk - gk * gh)) <= 1e-10 * std::max(1.0, opnorm(lhs)));
    CHECK(opnorm(Matrix(dgamma(h.adjoint())) - gh.adjoint()) <= 1e-12);
  }
}

TEST_CASE("metric minors equal the exponentiated lift") {
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + trial % 5;
    const Matrix m = random_positive(n);
    const Matrix eta = second_quantized_metric(m).dense();
    const Matrix oracle = hermitian_function(Matrix(dgamma(hermitian_function(m, log_fn))), exp_fn);
    CHECK(opnorm(eta - oracle) <= 1e-9 * opnorm(oracle));
  }
}

TEST_CASE("metric sectors and positivity transfer") {
  const Matrix m = random_positive(4);
  const auto eta = second_quantized_metric(m);
  REQUIRE(eta.blocks.size() == 5);
  CHECK(eta.blocks[0](0, 0) == cplx(1.0));
  CHECK(opnorm(eta.blocks[1] - m) <= 1e-12);
  CHECK(std::abs(eta.blocks[4](0, 0) - m.determinant()) <= 1e-10 * std::abs(m.determinant()));
  for (const auto& block : eta.blocks) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(block);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }

  Matrix indefinite = random_hermitian(3);
  indefinite(0, 0) = -10.0;
  CHECK_THROWS_AS(second_quantized_metric(indefinite), Error);
  CHECK_THROWS_AS(second_quantized_metric(Matrix::Identity(11, 11)), Error);
}

TEST_CASE("second-quantized intertwining") {
  for (int n = 2; n <= 6; ++n) {
    // Random quasi-Hermitian h with a known positive intertwiner.
    const Matrix s = random_matrix(n) + 3.0 * Matrix::Identity(n, n);
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = uniform(-2, 2);
    const Matrix h = s * d.cast<cplx>().asDiagonal() * s.inverse();
    const Matrix m = (s * s.adjoint()).inverse();
    const auto good = intertwines_second_quantized(h, m);
    CHECK(good.dgamma <= 1e-9);
    CHECK(good.number <= 1e-12);
    const auto bad = intertwines_second_quantized(h, random_positive(n));
    CHECK(bad.dgamma > 1e-6);
  }
}

TEST_CASE("local kernel is monotone") {
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 6;
    const Matrix m = far_defect_metric(n, uniform(-1, 1), uniform(0.2, 1.2), 1.0).eta;
    for (Subset a : enumerate_subsets(n)) {
      const int k = local_kernel(m, a).kernel_dim;
      for (int i : sites_of(a)) {
        const Subset smaller = a & ~(Subset{1} << (i - 1));
        if (smaller) CHECK(local_kernel(m, smaller).kernel_dim <= k);
      }
    }
  }
  const Matrix m = far_defect_metric(5, 0.3, 0.5, 1.0).eta;
  const auto r = local_kernel(m, subset_of({2, 3, 4}));
  CHECK(r.kernel_basis.cols() == r.kernel_dim);
  CHECK(r.kernel_basis.rows() == 3);
  CHECK(local_kernel(m, 0b11111u).kernel_dim == 5);
  CHECK_THROWS_AS(local_kernel(m, 0), Error);
}

TEST_CASE("extensive locality shortcut agrees with the definition") {
  for (int trial = 0; trial < 3; ++trial) {
    const int n = 7;
    const Matrix m = far_defect_metric(n, uniform(-1, 1), uniform(0.2, 1.2), 1.0).eta;
    for (Subset a : enumerate_subsets(n)) CHECK(extensively_local(m, a) == locality_by_definition(m, a));
  }
}

TEST_CASE("far-impurity rules match brute force") {
  for (int n : {6, 8, 10}) {
    for (int trial = 0; trial < 5; ++trial) {
      double detuning = uniform(-1.5, 1.5), gain = uniform(0.2, 1.5);
      if (std::abs(std::abs(cplx(detuning, gain)) - 1.0) < 0.05) gain += 0.1;
      const FarImpurity model{n, detuning, gain, 1.0};
      CHECK(classify_subsystems(model, LocalityMode::RuleBased) == classify_subsystems(model, LocalityMode::BruteForce));
    }
    const FarImpurity unit{n, 0.6, 0.8, 1.0};
    CHECK(classify_subsystems(unit, LocalityMode::RuleBased, true) == classify_subsystems(unit, LocalityMode::BruteForce));
  }
  // Diagonal metric: everything is local.
  const FarImpurity hermitian{6, 0.4, 0.0, 1.0};
  CHECK(classify_subsystems(hermitian, LocalityMode::BruteForce).size() == 63);
  CHECK(classify_subsystems(hermitian, LocalityMode::RuleBased).size() == 63);
}

TEST_CASE("n = 13 subsystems") {
  const Matrix generic = far_defect_metric(13, 0.3, 0.5, 1.0).eta;
  const Matrix unit = far_defect_metric(13, 0.6, 0.8, 1.0).eta;
  const Subset block = subset_of({2, 3, 4});
  const Subset blue = subset_of({1, 3, 4, 5});
  const Subset green = subset_of({5, 6, 7, 9, 11, 12});
  CHECK(extensively_local(generic, block));
  CHECK(extensively_local(unit, block));
  CHECK(extensively_local(generic, blue));
  CHECK_FALSE(extensively_local(unit, blue));
  CHECK(extensively_local(generic, green));
  CHECK_FALSE(extensively_local(unit, green));

  CHECK_FALSE(extensively_local(generic, subset_of({7})));
  const Subset padded = subset_of({2, 3, 4, 8});
  CHECK_FALSE(extensively_local(generic, padded));
  CHECK(local_kernel(generic, padded).kernel_dim == local_kernel(generic, block).kernel_dim);
  CHECK_FALSE(extensively_local(generic, subset_of({6, 7, 12, 13})));

  for (Subset a : {block, blue, green, subset_of({7}), padded, subset_of({6, 7, 12, 13})}) {
    CHECK(far_impurity_rule(13, a, false) == extensively_local(generic, a));
    CHECK(far_impurity_rule(13, a, true) == extensively_local(unit, a));
  }
}

TEST_CASE("parity-symmetric metric: local iff invariant under the involution") {
  for (int n : {4, 6, 8}) {
    const LatticeSpec spec = expand(testutil::random_nn(n, 0.4));
    const double central = std::abs(spec.beta[static_cast<std::size_t>(n / 2 - 1)]);
    const Matrix m = nn_defect_metric(spec, cplx(0.3 * central, 0.4 * central)).eta;
    const auto f = associated_involution(m);
    REQUIRE(f.has_value());
    for (int i = 0; i < n; ++i) CHECK((*f)[static_cast<std::size_t>(i)] == n - 1 - i);
    for (Subset a : enumerate_subsets(n)) {
      bool invariant = true;
      for (int i : sites_of(a)) invariant = invariant && ((a >> (n - i)) & 1u);
      CHECK(extensively_local(m, a) == invariant);
      CHECK(locality_by_definition(m, a) == invariant);
    }
  }
  // Diagonal metric: every subsystem qualifies.
  const Matrix diag = Eigen::VectorXd::LinSpaced(5, 1, 2).cast<cplx>().asDiagonal();
  for (Subset a : enumerate_subsets(5)) CHECK(extensively_local(diag, a));
}
