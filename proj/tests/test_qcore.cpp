#include <doctest.h>

#include <random>

#include "vqrd/qcore.hpp"

using namespace vqrd::qcore;

namespace {

Mat random_hermitian(int d, std::mt19937& gen) {
    std::normal_distribution<double> n(0.0, 1.0);
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = Cplx(n(gen), n(gen));
    return 0.5 * (m + m.adjoint());
}

DensityMatrix random_state(int d, std::mt19937& gen) {
    std::normal_distribution<double> n(0.0, 1.0);
    Mat g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = Cplx(n(gen), n(gen));
    Mat rho = g * g.adjoint();
    rho /= rho.trace();
    return DensityMatrix(rho);
}

ChoiOperator random_channel(int din, int dout, std::mt19937& gen) {
    // Random isometry through Stinespring: pick Kraus from a Haar-ish unitary.
    std::normal_distribution<double> n(0.0, 1.0);
    Mat g(dout * dout, din);
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j) g(i, j) = Cplx(n(gen), n(gen));
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ() * Mat::Identity(dout * dout, din);
    std::vector<Mat> kraus;
    for (int e = 0; e < dout; ++e) kraus.push_back(q.block(e * dout, 0, dout, din));
    return ChoiOperator(din, dout, choi_of_kraus(kraus, din, dout), true);
}

}  // namespace

TEST_CASE("kron basics") {
    Mat i2 = identity(2);
    CHECK((kron(i2, i2) - identity(4)).norm() == doctest::Approx(0.0));
    Mat zz = kron(pauli_z(), pauli_z());
    CHECK((zz * zz - identity(4)).norm() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(bell_state().mat().trace().real() == doctest::Approx(1.0));
}

TEST_CASE("partial trace") {
    Mat phi = bell_state().mat();
    Mat left = partial_trace_dims(phi, {2, 2}, {0});
    CHECK((left - 0.5 * identity(2)).cwiseAbs().maxCoeff() < 1e-12);
    Mat right = partial_trace_dims(phi, {2, 2}, {1});
    CHECK((right - 0.5 * identity(2)).cwiseAbs().maxCoeff() < 1e-12);

    std::mt19937 gen(7);
    Mat a = random_hermitian(2, gen), b = random_hermitian(3, gen);
    Mat ab = kron(a, b);
    Mat ra = partial_trace_dims(ab, {2, 3}, {0});
    CHECK((ra - b.trace() * a).cwiseAbs().maxCoeff() < 1e-10);

    for (int t = 0; t < 10; ++t) {
        Mat x = random_hermitian(6, gen);
        Mat red = partial_trace_dims(x, {2, 3}, {1});
        CHECK(std::abs((red.trace() - x.trace()).real()) < 1e-10);
    }
}

TEST_CASE("partial transpose of Bell projector") {
    HermitianOperator phi(bell_state().mat());
    HermitianOperator pt = partial_transpose(phi, {2, 2}, 1);
    Eigen::VectorXd ev = hermitian_eigenvalues(pt.mat());
    std::sort(ev.data(), ev.data() + ev.size());
    CHECK(ev(0) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(ev(1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ev(3) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(trace_norm(pt) == doctest::Approx(2.0).epsilon(1e-12));

    // involutive
    std::mt19937 gen(3);
    Mat x = random_hermitian(6, gen);
    Mat twice = partial_transpose_dims(partial_transpose_dims(x, {2, 3}, {1}), {2, 3}, {1});
    CHECK((twice - x).cwiseAbs().maxCoeff() < 1e-12);

    // product states stay PSD
    Mat prod = kron(random_state(2, gen).mat(), random_state(2, gen).mat());
    CHECK(hermitian_eigenvalues(partial_transpose_dims(prod, {2, 2}, {1})).minCoeff() > -1e-12);
}

TEST_CASE("trace norm properties") {
    std::mt19937 gen(11);
    CHECK(trace_norm(random_state(4, gen).mat()) == doctest::Approx(1.0));
    for (int t = 0; t < 5; ++t) {
        Mat a = random_hermitian(4, gen), b = random_hermitian(4, gen);
        CHECK(trace_norm(Mat(a + b)) <= trace_norm(a) + trace_norm(b) + 1e-10);
        CHECK(trace_norm(Mat(-2.5 * a)) == doctest::Approx(2.5 * trace_norm(a)).epsilon(1e-10));
    }
    CHECK(trace_norm(Mat(Mat::Zero(3, 3))) == doctest::Approx(0.0));
}

TEST_CASE("fidelity") {
    std::mt19937 gen(5);
    auto rho = random_state(3, gen);
    CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-9));
    DensityMatrix z0(projector(Vec(Mat(ket0()))));
    DensityMatrix z1(projector(Vec(Mat(ket1()))));
    CHECK(fidelity(z0, z1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(fidelity(plus_state(), maximally_mixed(2)) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("apply_channel and link_product") {
    std::mt19937 gen(13);
    auto rho = random_state(2, gen);

    auto id = identity_choi(2);
    CHECK((apply_channel(id, rho).mat() - rho.mat()).cwiseAbs().maxCoeff() < 1e-12);

    auto dep = depolarizing_choi(2, 1.0);
    CHECK((apply_channel(dep, rho).mat() - 0.5 * identity(2)).cwiseAbs().maxCoeff() < 1e-12);

    double p = 0.3;
    auto z = dephasing_choi(p);
    Mat out = apply_channel(z, plus_state()).mat();
    CHECK(out(0, 1).real() == doctest::Approx((1.0 - 2.0 * p) / 2.0).epsilon(1e-12));

    // chaining Chois equals superoperator composition
    for (int t = 0; t < 10; ++t) {
        auto e1 = random_channel(2, 3, gen);
        auto e2 = random_channel(3, 2, gen);
        auto chained = link_product(e1, e2);
        Mat s = choi_to_superop(e2.mat(), 3, 2) * choi_to_superop(e1.mat(), 2, 3);
        Mat direct = superop_to_choi(s, 2, 2);
        CHECK((chained.mat() - direct).cwiseAbs().maxCoeff() < 1e-10);
    }

    // associativity on a 3-chain
    auto a = random_channel(2, 2, gen), b = random_channel(2, 2, gen), c = random_channel(2, 2, gen);
    Mat left = link_product(link_product(a, b), c).mat();
    Mat right = link_product(a, link_product(b, c)).mat();
    CHECK((left - right).cwiseAbs().maxCoeff() < 1e-10);

    // identity comb is a left and right identity
    CHECK((link_product(a, identity_choi(2)).mat() - a.mat()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((link_product(identity_choi(2), a).mat() - a.mat()).cwiseAbs().maxCoeff() < 1e-10);

    // trace preservation through application
    for (int t = 0; t < 5; ++t) {
        auto e = random_channel(3, 2, gen);
        auto out2 = apply_channel(e, random_state(3, gen));
        CHECK(out2.mat().trace().real() == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("standard objects") {
    CHECK((isotropic_state(0.0, 1).mat() - bell_state().mat()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((dephased_t_state(1.0).mat() - t_state().mat()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((amplitude_damping_choi(0.0).mat() - identity_choi(2).mat()).cwiseAbs().maxCoeff() <
          1e-12);
    CHECK(depolarizing_choi(2, 0.4).is_trace_preserving());
    CHECK(replacement_choi(0.7).is_trace_preserving());

    // T state overlap grid used throughout: six stabilizer vertices
    Mat t = t_state().mat();
    double best = 0;
    std::vector<Vec> verts;
    Vec v0(2), v1(2);
    v0 << 1, 0;
    v1 << 0, 1;
    verts.push_back(v0);
    verts.push_back(v1);
    Vec vp(2), vm(2);
    vp << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    vm << 1 / std::sqrt(2.0), -1 / std::sqrt(2.0);
    verts.push_back(vp);
    verts.push_back(vm);
    Vec vi(2), vmi(2);
    vi << 1 / std::sqrt(2.0), Cplx(0, 1) / std::sqrt(2.0);
    vmi << 1 / std::sqrt(2.0), Cplx(0, -1) / std::sqrt(2.0);
    verts.push_back(vi);
    verts.push_back(vmi);
    for (const auto& v : verts) best = std::max(best, (v.adjoint() * t * v)(0, 0).real());
    CHECK(best == doctest::Approx((1.0 + 1.0 / std::sqrt(2.0)) / 2.0).epsilon(1e-12));
}

TEST_CASE("schmidt coefficients") {
    auto bell = schmidt(HermitianOperator(bell_state().mat()), {2, 2});
    CHECK(bell.coeffs()(0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(bell.coeffs()(1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

    Vec prod = Vec::Zero(4);
    prod(0) = 1.0;
    auto s = schmidt(HermitianOperator(projector(prod)), {2, 2});
    CHECK(s.coeffs()(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.coeffs()(1) == doctest::Approx(0.0).epsilon(1e-12));

    Vec psi = Vec::Zero(4);
    psi(0) = std::sqrt(0.8);
    psi(3) = std::sqrt(0.2);
    auto s2 = schmidt(HermitianOperator(projector(psi)), {2, 2});
    CHECK(s2.coeffs()(0) == doctest::Approx(std::sqrt(0.8)).epsilon(1e-12));
    CHECK(s2.coeffs()(1) == doctest::Approx(std::sqrt(0.2)).epsilon(1e-12));

    CHECK_THROWS_AS(schmidt(HermitianOperator(maximally_mixed(4).mat()), {2, 2}), InvariantError);
}

TEST_CASE("type invariants") {
    Mat bad(2, 2);
    bad << 1, Cplx(0, 1), Cplx(0, 1), 1;  // not Hermitian
    CHECK_THROWS_AS(HermitianOperator{bad}, InvariantError);

    CHECK_THROWS_AS(DensityMatrix(Mat(2.0 * identity(2))), InvariantError);
    Mat neg = identity(2);
    neg(1, 1) = -0.5;
    neg(0, 0) = 1.5;
    CHECK_THROWS_AS(DensityMatrix{neg}, InvariantError);

    // Choi CP violation
    CHECK_THROWS_AS(ChoiOperator(2, 2, Mat(partial_transpose_dims(bell_state().mat(), {2, 2}, {1}))),
                    InvariantError);
}

TEST_CASE("tensor permute roundtrip") {
    std::mt19937 gen(23);
    Mat x = random_hermitian(8, gen);
    Mat p = tensor_permute(x, {2, 2, 2}, {2, 0, 1});
    // applying the inverse permutation restores the original
    Mat back = tensor_permute(p, {2, 2, 2}, {1, 2, 0});
    CHECK((back - x).cwiseAbs().maxCoeff() < 1e-14);

    // permuting a kron product reorders its factors
    Mat a = random_hermitian(2, gen), b = random_hermitian(3, gen);
    Mat ab = kron(a, b);
    Mat ba = tensor_permute(ab, {2, 3}, {1, 0});
    CHECK((ba - kron(b, a)).cwiseAbs().maxCoeff() < 1e-12);
}
