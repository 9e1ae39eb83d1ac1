#include <doctest.h>

#include "tubenet/error.hpp"
#include "tubenet/solver.hpp"

#include <cmath>

using namespace tubenet;

namespace {

SparseMatrix laplacian(int n) {
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 2.0);
    if (i > 0) t.emplace_back(i, i - 1, -1.0);
    if (i + 1 < n) t.emplace_back(i, i + 1, -1.0);
  }
  SparseMatrix A(n, n);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

// r_i = x_i^3 + x_i - c_i, decoupled
class Cubic final : public NonlinearSystem {
public:
  explicit Cubic(Eigen::VectorXd c) : c_(std::move(c)) {}
  std::size_t size() const override { return static_cast<std::size_t>(c_.size()); }
  void evaluate(const Eigen::VectorXd& x, Assembly& out) const override {
    out.residual = x.array().cube() + x.array() - c_.array();
    out.triplets.clear();
    for (long i = 0; i < x.size(); ++i) out.triplets.emplace_back(i, i, 3.0 * x[i] * x[i] + 1.0);
  }

private:
  Eigen::VectorXd c_;
};

class Linear final : public NonlinearSystem {
public:
  Linear(SparseMatrix A, Eigen::VectorXd b) : A_(std::move(A)), b_(std::move(b)) {}
  std::size_t size() const override { return static_cast<std::size_t>(b_.size()); }
  void evaluate(const Eigen::VectorXd& x, Assembly& out) const override {
    out.residual = A_ * x - b_;
    out.triplets.clear();
    for (int k = 0; k < A_.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(A_, k); it; ++it) out.triplets.emplace_back(it.row(), it.col(), it.value());
  }

private:
  SparseMatrix A_;
  Eigen::VectorXd b_;
};

}  // namespace

TEST_CASE("direct and iterative solves agree") {
  const SparseMatrix A = laplacian(300);
  const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(300, -1.0, 2.0);
  LinearSolverOptions direct;
  direct.method = LinearMethod::Direct;
  LinearSolverOptions iterative;
  iterative.method = LinearMethod::BiCGSTAB;
  iterative.block_split = 150;
  LinearSolveReport rd, ri;
  const Eigen::VectorXd xd = linear_solve(A, b, direct, &rd);
  const Eigen::VectorXd xi = linear_solve(A, b, iterative, &ri);
  CHECK(rd.direct);
  CHECK_FALSE(ri.direct);
  CHECK(ri.relative_residual <= 1e-12);
  CHECK((xd - xi).norm() <= 1e-8 * xd.norm());
  CHECK((A * xd - b).norm() <= 1e-10 * b.norm());
}

TEST_CASE("singular matrices are reported") {
  SparseMatrix A(3, 3);
  std::vector<Triplet> t{{0, 0, 1.0}, {1, 1, 1.0}};
  A.setFromTriplets(t.begin(), t.end());
  try {
    linear_solve(A, Eigen::VectorXd::Ones(3));
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Singular);
  }
}

TEST_CASE("newton converges in one step on a linear system") {
  Linear sys(laplacian(50), Eigen::VectorXd::Ones(50));
  Eigen::VectorXd x = Eigen::VectorXd::Zero(50);
  const NewtonReport r = newton_solve(sys, x);
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  CHECK(r.history_csv().rfind("iteration,residual", 0) == 0);
}

TEST_CASE("newton converges quadratically on a cubic") {
  Cubic sys(Eigen::VectorXd::LinSpaced(5, 2.0, 30.0));
  Eigen::VectorXd x = Eigen::VectorXd::Zero(5);
  const NewtonReport r = newton_solve(sys, x);
  CHECK(r.converged);
  CHECK(r.iterations <= 12);
  CHECK(x[0] == doctest::Approx(1.0));
  CHECK(x[4] == doctest::Approx(3.0));
}

TEST_CASE("newton reports non-convergence") {
  Cubic sys(Eigen::VectorXd::Constant(3, 1000.0));
  NewtonOptions o;
  o.max_iterations = 2;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(3);
  const NewtonReport r = try_newton_solve(sys, x, o);
  CHECK_FALSE(r.converged);
  CHECK_FALSE(r.message.empty());
  Eigen::VectorXd y = Eigen::VectorXd::Zero(3);
  try {
    newton_solve(sys, y, o);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotConverged);
  }
}
