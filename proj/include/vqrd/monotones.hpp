#pragma once

#include <optional>

#include "vqrd/freesets.hpp"
#include "vqrd/qcore.hpp"

namespace vqrd::monotones {

enum class ZetaVariant { SupInequality, OverlapEquality };

struct ZetaResult {
    double value = 0.0;
    qcore::Mat q_plus, q_minus;
    double mu_plus = 0.0, mu_minus = 0.0;
    conic::SolveStatus status = conic::SolveStatus::max_iter;
    bool feasible() const { return status == conic::SolveStatus::optimal; }
};

// min mu+ + mu- over witness pairs 0 <= Q± <= mu± I with the free-set
// overlap of Q± bounded by mu±/k (or pinned to it for the equality
// variant), mu+ - mu- = 1 and Tr rho (Q+ - Q-) >= 1 - eps.
ZetaResult zeta_program(const qcore::HermitianOperator& rho, double k, double eps,
                        ZetaVariant variant, const freesets::FreeSetSpec& f,
                        const conic::SolveOptions& opts = {});

struct BoundReport {
    double lower = 0.0;
    double upper = 0.0;
    double k_lower = 0.0;
    double k_upper = 0.0;
    bool exact = false;  // the two k parameters coincide
};

// Bracket from the two k choices F^{-1} and R+1. The free set on the input
// space and the one the target is measured against may differ in dimension.
BoundReport theorem1_bracket(const qcore::HermitianOperator& rho,
                             const freesets::FreeSetSpec& f_input,
                             const qcore::HermitianOperator& target_m,
                             const freesets::FreeSetSpec& f_target, double eps,
                             ZetaVariant variant, const conic::SolveOptions& opts = {});

enum class OpClass { MioDio, Ppt };

struct DualResult {
    double value = 0.0;
    qcore::Mat witness;
    conic::SolveStatus status = conic::SolveStatus::max_iter;
};

// sup_W 2 Tr(W eta) - 1 subject to 0 <= Tr(W Lambda(rho)) <= 1 for every
// channel Lambda in the class, evaluated at a fixed unit-trace eta. The
// quantifier over channels is dualized through their Choi constraints.
DualResult dual_overhead_value(const qcore::HermitianOperator& rho,
                               const qcore::HermitianOperator& eta, OpClass cls,
                               std::pair<int, int> input_bipartition = {0, 0},
                               std::pair<int, int> output_bipartition = {0, 0},
                               const conic::SolveOptions& opts = {});

// Direct evaluation of min/max of Tr(W Lambda(rho)) over the class, used to
// verify witness feasibility independently of the dual encoding.
std::pair<double, double> witness_range_over_class(const qcore::HermitianOperator& rho,
                                                   const qcore::Mat& w, OpClass cls,
                                                   std::pair<int, int> input_bipartition,
                                                   std::pair<int, int> output_bipartition,
                                                   const conic::SolveOptions& opts = {});

// Closed-form lower bounds (no clamping; callers take max with 1).
double overlap_lower_bound(double f_value, double eps);
double robustness_lower_bound(const qcore::DensityMatrix& rho, const freesets::FreeSetSpec& f_input,
                              double target_fidelity, double eps);
double weight_lower_bound(const qcore::DensityMatrix& rho, const freesets::FreeSetSpec& f_input,
                          double target_fidelity, double eps);
// f <= F (R^g + 1) and f <= 1 - (1 - F) W
std::pair<double, double> overlap_upper_bounds(const qcore::DensityMatrix& rho,
                                               const freesets::FreeSetSpec& f_input,
                                               double target_fidelity);

// True when F^{-1} and 1 + R^s agree for the target, which makes the
// bracket collapse (generalized twirling exists).
bool check_twirling_condition(const qcore::HermitianOperator& target_m,
                              const freesets::FreeSetSpec& f_target, double tol = 1e-7);

double virtual_monotone_bound(double measure_target, double measure_input);

}  // namespace vqrd::monotones
