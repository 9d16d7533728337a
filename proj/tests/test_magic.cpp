#include <doctest.h>

#include <cmath>
#include <random>

#include "vqrd/freesets.hpp"
#include "vqrd/magic.hpp"
#include "vqrd/qcore.hpp"

using namespace vqrd;
using namespace vqrd::magic;
using qcore::Cplx;
using qcore::Mat;

TEST_CASE("dephased T closed form") {
    CHECK(dephased_t_overhead(0.9, 0.0) == doctest::Approx(1.0 / 0.9));
    CHECK(dephased_t_overhead(0.5, 0.0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(dephased_t_overhead(1.0, 0.0) == doctest::Approx(1.0));
    // even in p, non-increasing in |p| above threshold
    CHECK(dephased_t_overhead(-0.9, 0.1) == doctest::Approx(dephased_t_overhead(0.9, 0.1)));
    CHECK(dephased_t_overhead(0.8, 0.0) >= dephased_t_overhead(0.95, 0.0));
    // the clamp: large eps pushes the branch value below 1
    CHECK(dephased_t_overhead(1.0, 0.4) == doctest::Approx(1.0));
}

TEST_CASE("t_twirl") {
    const Mat t = qcore::t_state().mat();
    const Mat tbar = qcore::tbar_state().mat();

    // fixed point and maximally mixed
    CHECK((t_twirl(qcore::t_state()).mat() - t).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((t_twirl(qcore::maximally_mixed(2)).mat() - 0.5 * Mat::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() < 1e-12);

    std::mt19937 gen(67);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int k = 0; k < 10; ++k) {
        Mat g(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) g(i, j) = Cplx(n(gen), n(gen));
        Mat rho = g * g.adjoint();
        rho /= rho.trace();
        qcore::DensityMatrix dm(rho);
        auto tw = t_twirl(dm);
        // pinches onto the T axis with the T overlap preserved exactly
        Mat expect = (t * rho).trace().real() * t + (tbar * rho).trace().real() * tbar;
        CHECK((tw.mat() - expect).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(std::abs(((tw.mat() - rho) * t).trace()) < 1e-12);
        // idempotent
        CHECK((t_twirl(tw).mat() - tw.mat()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("stabilizer bracket for dephased T states") {
    const double f_t = (1.0 + 1.0 / std::sqrt(2.0)) / 2.0;
    for (double p : {0.75, 0.9, 1.0}) {
        MagicInstance inst{qcore::dephased_t_state(p), Target::TState, 1, 0.0, 2};
        auto br = stabilizer_overhead_lp(inst);
        const double closed = dephased_t_overhead(p, 0.0);
        CHECK(br.lower <= closed + 1e-6);
        CHECK(br.upper >= closed - 1e-6);
        // lower branch is the overlap bound 2(1-eps)/max((1+p)/2, F) - 1
        const double reach = std::max((1.0 + p) / 2.0, f_t);
        CHECK(br.lower == doctest::Approx(std::max(2.0 / reach - 1.0, 1.0)).epsilon(1e-6));
    }

    // stabilizer input: lower branch hits 2/F - 1
    MagicInstance stab{qcore::DensityMatrix(qcore::projector(
                           freesets::qubit_stabilizer_states()[0])),
                       Target::TState, 1, 0.0, 2};
    auto br = stabilizer_overhead_lp(stab);
    CHECK(br.lower == doctest::Approx(2.0 / f_t - 1.0).epsilon(1e-6));
    CHECK(br.upper >= br.lower - 1e-9);

    // T input: true overhead 1 sits inside the bracket; the upper branch
    // pays the robustness-vs-fidelity gap of the T state
    MagicInstance tin{qcore::t_state(), Target::TState, 1, 0.0, 2};
    auto brt = stabilizer_overhead_lp(tin);
    CHECK(brt.lower == doctest::Approx(1.0).epsilon(1e-6));
    const double k_hi = 1.0 + (std::sqrt(2.0) - 1.0) / 2.0;
    CHECK(brt.k_upper == doctest::Approx(k_hi).epsilon(1e-6));
    CHECK(brt.upper == doctest::Approx(2.0 * k_hi * f_t - 1.0).epsilon(1e-5));
}

TEST_CASE("strange state overhead") {
    // F_STAB(S) = 1/2 by vertex enumeration
    CHECK(freesets::free_fidelity(qcore::HermitianOperator(qcore::strange_state().mat()),
                                  freesets::stabilizer_polytope(3, 1)) == doctest::Approx(0.5));

    CHECK(strange_overhead(qcore::strange_state(), 0.0) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(strange_overhead(qcore::strange_state(), 1.0) == doctest::Approx(1.0));

    qcore::DensityMatrix vertex(qcore::projector(freesets::qutrit_stabilizer_states()[0]));
    CHECK(strange_overhead(vertex, 0.0) == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(strange_overhead(vertex, 1.0) == doctest::Approx(1.0));
}
