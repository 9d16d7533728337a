#include "vqrd/coherence.hpp"

#include <cmath>
#include <stdexcept>

#include "vqrd/builder.hpp"
#include "vqrd/freesets.hpp"

namespace vqrd::coherence {

using monotones::ZetaVariant;
using qcore::Cplx;
using qcore::Mat;

MioDioResult mio_dio_overhead(const CoherenceInstance& inst, const conic::SolveOptions& opts) {
    if (inst.m < 1) throw std::invalid_argument("mio_dio_overhead: m >= 1");
    auto f = freesets::FreeSetSpec::diagonal(inst.state.dim());
    auto z = monotones::zeta_program(qcore::HermitianOperator(inst.state.mat()),
                                     std::pow(2.0, inst.m), inst.eps,
                                     ZetaVariant::OverlapEquality, f, opts);
    MioDioResult r;
    r.status = z.status;
    r.value = z.value;
    r.q_plus = z.q_plus;
    r.q_minus = z.q_minus;
    r.mu_plus = z.mu_plus;
    r.mu_minus = z.mu_minus;
    return r;
}

double l1_coherence(const qcore::DensityMatrix& rho) {
    double s = 0.0;
    for (int i = 0; i < rho.dim(); ++i)
        for (int j = 0; j < rho.dim(); ++j)
            if (i != j) s += std::abs(rho.mat()(i, j));
    return s;
}

double single_qubit_overhead(const qcore::DensityMatrix& rho, int m, double eps) {
    if (rho.dim() != 2) throw qcore::DimensionError("single_qubit_overhead: qubit input expected");
    if (m < 1) throw std::invalid_argument("single_qubit_overhead: m >= 1");
    const double ml1 = l1_coherence(rho);
    const double need = std::pow(2.0, m) * (1.0 - eps) - 1.0;
    if (ml1 <= 1e-14) {
        if (need > 1e-12) return std::numeric_limits<double>::infinity();
        return 1.0;
    }
    return std::max(need / ml1, 1.0);
}

RateResult single_qubit_rate(const qcore::DensityMatrix& rho, double eps) {
    if (rho.dim() != 2) throw qcore::DimensionError("single_qubit_rate: qubit input expected");
    const double ml1 = l1_coherence(rho);
    RateResult r;
    if (ml1 <= 1e-14) return r;  // no coherence, rate 0
    if (eps >= 1.0) {
        r.rate = std::numeric_limits<double>::infinity();
        return r;
    }
    const int mt = static_cast<int>(std::floor(std::log2((ml1 + 1.0) / (1.0 - eps)) + 1e-12));
    const double denom = std::pow(2.0, mt + 1) * (1.0 - eps) - 1.0;
    r.m_tilde = mt;
    r.rate = std::max((mt + 1) * ml1 * ml1 / (denom * denom), static_cast<double>(mt));
    return r;
}

OneQubitDecomposition one_qubit_decomposition(const qcore::DensityMatrix& rho, double eps) {
    if (rho.dim() != 2) throw qcore::DimensionError("one_qubit_decomposition: qubit input expected");
    const Cplx off = rho.mat()(0, 1);
    const double beta = std::abs(off);
    if (beta <= 1e-14)
        throw std::invalid_argument("one_qubit_decomposition: zero-coherence input");

    // Incoherent phase rotation bringing the off-diagonal to beta >= 0
    // (reduces to a Z flip for real negative off-diagonals).
    Mat phase = Mat::Identity(2, 2);
    phase(1, 1) = off / beta;

    const Mat x = qcore::pauli_x();
    const Mat z = qcore::pauli_z();
    const Mat j_twirl =
        0.5 * qcore::choi_of_unitary(Mat(phase)) + 0.5 * qcore::choi_of_unitary(Mat(x * phase));
    const Mat j_ztwirl = 0.5 * qcore::choi_of_unitary(Mat(z * phase)) +
                         0.5 * qcore::choi_of_unitary(Mat(z * x * phase));

    const double s = (1.0 - 2.0 * eps) / (4.0 * beta) + 0.5;
    OneQubitDecomposition out{
        1.0, 0.0, qcore::ChoiOperator(2, 2, j_twirl, true), qcore::ChoiOperator(2, 2, j_ztwirl, true)};
    if (s > 1.0) {
        out.lambda_plus = s;
        out.lambda_minus = s - 1.0;
    } else {
        // Already within reach: a convex mixture of the two free channels
        // hits the eps-ball, so the overhead is 1.
        out.lambda_plus = 1.0;
        out.lambda_minus = 0.0;
        const double sm = std::min(1.0, std::max(0.0, s));
        Mat mix = sm * j_twirl + (1.0 - sm) * j_ztwirl;
        out.channel_plus = qcore::ChoiOperator(2, 2, mix, true);
    }
    return out;
}

std::pair<qcore::ChoiOperator, qcore::ChoiOperator> channels_from_witnesses(
    const MioDioResult& r, int input_dim, int m) {
    const int dout = 1 << m;
    const Mat plus_m = qcore::kron_pow(qcore::plus_state().mat(), m);
    const Mat rest = (Mat::Identity(dout, dout) - plus_m) / static_cast<double>(dout - 1);
    auto build = [&](const Mat& q, double mu) {
        Mat bop = q / mu;
        Mat j = qcore::kron(bop.transpose(), plus_m) +
                qcore::kron(Mat(Mat::Identity(input_dim, input_dim) - bop).transpose(), rest);
        return qcore::ChoiOperator(input_dim, dout, j, false, 1e-7);
    };
    return {build(r.q_plus, r.mu_plus), build(r.q_minus, r.mu_minus)};
}

}  // namespace vqrd::coherence
