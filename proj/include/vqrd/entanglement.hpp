#pragma once

#include <utility>

#include "vqrd/conic.hpp"
#include "vqrd/qcore.hpp"

namespace vqrd::entanglement {

struct EntanglementInstance {
    qcore::DensityMatrix state;
    std::pair<int, int> dims;  // bipartition A|B
    int m = 1;                 // target Bell-pair count
    double eps = 0.0;
};

struct PptOverheadResult {
    double value = 0.0;
    qcore::Mat q_plus, q_minus;
    double mu_plus = 0.0, mu_minus = 0.0;
    conic::SolveStatus status = conic::SolveStatus::max_iter;
};

// Exact zero-error overhead under PPT operations: witness SDP with the
// two-sided bound |Q±^Gamma| <= mu±/2^m.
PptOverheadResult ppt_overhead_exact(const EntanglementInstance& inst,
                                     const conic::SolveOptions& opts = {});

// Best overlap with m Bell pairs reachable by PPT-preserving maps.
double ppt_singlet_fraction(const qcore::DensityMatrix& rho, std::pair<int, int> dims, int m,
                            const conic::SolveOptions& opts = {});

// max{2(1-eps)/f - 1, 1} on top of ppt_singlet_fraction.
double overhead_via_fraction(const qcore::DensityMatrix& rho, std::pair<int, int> dims, int m,
                             double eps, const conic::SolveOptions& opts = {});

// ||phi||_[m]: l1 mass of the largest m-k* coefficients plus sqrt(k*) times
// the l2 tail, minimized over the split point.
double m_distillation_norm(const qcore::SchmidtVector& sv, int m_index);
double pure_state_overhead(const qcore::SchmidtVector& sv, int m, double eps);

double isotropic_overhead(double alpha, int k, int m, double eps);

// E_H^eps in bits under the PPT relaxation of the separable set.
double hypothesis_testing_entropy(const qcore::DensityMatrix& rho, std::pair<int, int> dims,
                                  double eps, const conic::SolveOptions& opts = {});
double eh_overhead_bound(double eh, int m);
double eh_rate_bound(double eh);

double negativity(const qcore::DensityMatrix& rho, std::pair<int, int> dims);

// Feasible channel pair reconstructed from overhead witnesses; both maps
// send the input space to the m-pair target space.
std::pair<qcore::ChoiOperator, qcore::ChoiOperator> channels_from_witnesses(
    const PptOverheadResult& r, int input_dim, int m);

}  // namespace vqrd::entanglement
