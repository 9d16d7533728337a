#pragma once

#include "vqrd/conic.hpp"
#include "vqrd/monotones.hpp"
#include "vqrd/qcore.hpp"

namespace vqrd::coherence {

struct CoherenceInstance {
    qcore::DensityMatrix state;
    int m = 1;         // copies of |+>
    double eps = 0.0;
};

struct MioDioResult {
    double value = 0.0;
    qcore::Mat q_plus, q_minus;
    double mu_plus = 0.0, mu_minus = 0.0;
    conic::SolveStatus status = conic::SolveStatus::max_iter;
    bool feasible() const { return status == conic::SolveStatus::optimal; }
};

// SDP overhead under MIO/DIO: diagonal parts of Q± pinned to mu±/2^m.
MioDioResult mio_dio_overhead(const CoherenceInstance& inst, const conic::SolveOptions& opts = {});

double l1_coherence(const qcore::DensityMatrix& rho);

// Closed form for qubits; +inf when the target is unreachable at this eps.
double single_qubit_overhead(const qcore::DensityMatrix& rho, int m, double eps);

struct RateResult {
    double rate = 0.0;
    int m_tilde = 0;
};
RateResult single_qubit_rate(const qcore::DensityMatrix& rho, double eps);

// Explicit two-channel decomposition achieving the qubit overhead at m=1:
// Lambda+ = X-twirl, Lambda- = Z after the X-twirl (phase-normalized first).
struct OneQubitDecomposition {
    double lambda_plus = 0.0, lambda_minus = 0.0;
    qcore::ChoiOperator channel_plus, channel_minus;
    double gamma() const { return lambda_plus + lambda_minus; }
};
OneQubitDecomposition one_qubit_decomposition(const qcore::DensityMatrix& rho, double eps);

// DIO channel pair reconstructed from SDP witnesses (maps input space to
// the 2^m target space).
std::pair<qcore::ChoiOperator, qcore::ChoiOperator> channels_from_witnesses(
    const MioDioResult& r, int input_dim, int m);

}  // namespace vqrd::coherence
