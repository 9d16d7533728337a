#include <doctest.h>

#include <random>

#include "vqrd/builder.hpp"
#include "vqrd/conic.hpp"
#include "vqrd/qcore.hpp"

using namespace vqrd;
using namespace vqrd::conic;
using qcore::Cplx;
using qcore::Mat;

namespace {

Mat random_hermitian(int d, std::mt19937& gen) {
    std::normal_distribution<double> n(0.0, 1.0);
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = Cplx(n(gen), n(gen));
    return 0.5 * (m + m.adjoint());
}

}  // namespace

TEST_CASE("hvec is an isometry") {
    std::mt19937 gen(2);
    for (int t = 0; t < 10; ++t) {
        Mat a = random_hermitian(5, gen), b = random_hermitian(5, gen);
        const double lhs = hvec(a).dot(hvec(b));
        const double rhs = (a * b).trace().real();
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        CHECK((hvec_inverse(hvec(a), 5) - a).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("hermitian_embed") {
    // real symmetric input gives a block-diagonal duplicate
    Mat s(2, 2);
    s << 1.0, 0.25, 0.25, -2.0;
    Eigen::MatrixXd e = hermitian_embed(s);
    CHECK(e.topRightCorner(2, 2).norm() == doctest::Approx(0.0));
    CHECK((e.topLeftCorner(2, 2) - e.bottomRightCorner(2, 2)).norm() == doctest::Approx(0.0));

    // Pauli Y embeds with eigenvalues {+-1, +-1}
    Eigen::MatrixXd ey = hermitian_embed(qcore::pauli_y());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ey);
    Eigen::VectorXd ev = es.eigenvalues();
    CHECK(ev(0) == doctest::Approx(-1.0));
    CHECK(ev(1) == doctest::Approx(-1.0));
    CHECK(ev(2) == doctest::Approx(1.0));
    CHECK(ev(3) == doctest::Approx(1.0));

    // embedding preserves positive semidefiniteness
    std::mt19937 gen(4);
    for (int t = 0; t < 10; ++t) {
        Mat h = random_hermitian(4, gen);
        Mat psd = h * h.adjoint();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ee(hermitian_embed(psd));
        CHECK(ee.eigenvalues().minCoeff() > -1e-10);
        // doubled spectrum
        Eigen::VectorXd orig = qcore::hermitian_eigenvalues(psd);
        for (int i = 0; i < 4; ++i) {
            CHECK(ee.eigenvalues()(2 * i) == doctest::Approx(orig(i)).epsilon(1e-9));
            CHECK(ee.eigenvalues()(2 * i + 1) == doctest::Approx(orig(i)).epsilon(1e-9));
        }
    }
}

TEST_CASE("tiny LP") {
    // min x s.t. x >= 3
    ProgramBuilder b("lp");
    auto x = b.nonneg_scalar();
    b.add_geq(MatExpr::scalar(x), 3.0);
    b.minimize(MatExpr::scalar(x));
    auto sol = b.solve();
    REQUIRE(sol.optimal());
    CHECK(sol.objective == doctest::Approx(3.0).epsilon(1e-7));
    CHECK(sol.scalar_of(x) == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("largest eigenvalue as SDP") {
    // min t s.t. t I - X psd
    std::mt19937 gen(9);
    for (int t = 0; t < 10; ++t) {
        const int d = 2 + (t % 3);
        Mat x = random_hermitian(d, gen);
        ProgramBuilder b("lambda_max");
        auto tv = b.free_scalar();
        b.add_psd(MatExpr::scalar(tv, Mat::Identity(d, d)) - MatExpr::constant(x));
        b.minimize(MatExpr::scalar(tv));
        auto sol = b.solve();
        REQUIRE(sol.optimal());
        const double expect = qcore::hermitian_eigenvalues(x).maxCoeff();
        CHECK(sol.objective == doctest::Approx(expect).epsilon(1e-6));
    }
}

TEST_CASE("PSD variable with equality constraints") {
    // min Tr(X) s.t. X psd, <i|X|i> = i+1  -> optimum diag(1,2,3)
    ProgramBuilder b;
    auto x = b.psd_matrix(3);
    for (int i = 0; i < 3; ++i) {
        Mat e = Mat::Zero(3, 3);
        e(i, i) = 1.0;
        b.add_eq(trace_inner(e, x), i + 1.0);
    }
    b.minimize(trace_inner(Mat::Identity(3, 3), x));
    auto sol = b.solve();
    REQUIRE(sol.optimal());
    CHECK(sol.objective == doctest::Approx(6.0).epsilon(1e-7));
    Mat xm = sol.matrix_of(x);
    CHECK(std::abs(xm(0, 1)) < 1e-5);
}

TEST_CASE("infeasible program is detected") {
    // x >= 3 and x <= 1
    ProgramBuilder b;
    auto x = b.nonneg_scalar();
    b.add_geq(MatExpr::scalar(x), 3.0);
    b.add_leq(MatExpr::scalar(x), 1.0);
    b.minimize(MatExpr::scalar(x));
    auto sol = b.solve();
    CHECK(sol.status == SolveStatus::infeasible);
}

TEST_CASE("unbounded program is detected") {
    // min -x s.t. x >= 0 (free direction)
    ProgramBuilder b;
    auto x = b.nonneg_scalar();
    auto y = b.nonneg_scalar();
    b.add_eq(MatExpr::scalar(x) - MatExpr::scalar(y), 0.0);
    b.minimize(MatExpr::scalar(x) * -1.0);
    auto sol = b.solve();
    CHECK(sol.status == SolveStatus::unbounded);
}

TEST_CASE("weak duality along the trace") {
    std::mt19937 gen(21);
    Mat x = random_hermitian(4, gen);
    ProgramBuilder b;
    auto tv = b.free_scalar();
    b.add_psd(MatExpr::scalar(tv, Mat::Identity(4, 4)) - MatExpr::constant(x));
    b.minimize(MatExpr::scalar(tv));
    SolveOptions opts;
    opts.record_trace = true;
    auto sol = b.solve(opts);
    REQUIRE(sol.optimal());
    // dual objective bounds primal from below once the iterate is feasible
    int checked = 0;
    for (const auto& it : sol.trace) {
        if (it.pres < 1e-6 && it.dres < 1e-6) {
            CHECK(it.dobj <= it.pobj + 1e-6);
            ++checked;
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("free hermitian variable") {
    // max Tr(W rho) s.t. -I/2 <= W <= I/2  ->  (1/2)||rho||_1
    std::mt19937 gen(31);
    Mat rho = random_hermitian(3, gen);
    ProgramBuilder b;
    auto w = b.free_hermitian(3);
    Mat half = 0.5 * Mat::Identity(3, 3);
    b.add_psd(MatExpr::constant(half) - MatExpr::of(w));
    b.add_psd(MatExpr::constant(half) + MatExpr::of(w));
    b.maximize(trace_inner(rho, w));
    auto sol = b.solve();
    REQUIRE(sol.optimal());
    CHECK(sol.objective == doctest::Approx(0.5 * qcore::trace_norm(rho)).epsilon(1e-6));
}

TEST_CASE("program dump is text") {
    ProgramBuilder b("demo");
    auto x = b.nonneg_scalar();
    b.add_geq(MatExpr::scalar(x), 3.0);
    b.minimize(MatExpr::scalar(x));
    std::ostringstream oss;
    b.build().dump(oss);
    CHECK(oss.str().find("minimize") != std::string::npos);
    CHECK(oss.str().find("nonneg") != std::string::npos);
}
