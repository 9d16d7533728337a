#pragma once

#include "vqrd/conic.hpp"
#include "vqrd/monotones.hpp"
#include "vqrd/qcore.hpp"

namespace vqrd::magic {

enum class Target { TState, StrangeState };

struct MagicInstance {
    qcore::DensityMatrix state;
    Target target = Target::TState;
    int m = 1;
    double eps = 0.0;
    int qudit_dim = 2;
};

// Closed form for T-axis states, clamped below at 1 (the normalization
// lambda+ - lambda- = 1 forces gamma >= 1 even where the branch formula
// dips under it).
double dephased_t_overhead(double p, double eps);

// Pinching onto the T/Tbar axis; a mixture of Clifford unitaries.
qcore::DensityMatrix t_twirl(const qcore::DensityMatrix& rho);

struct LpBracket {
    double lower = 0.0;
    double upper = 0.0;
    double k_lower = 0.0;
    double k_upper = 0.0;
    bool collapsed = false;
};

// Two-sided stabilizer-polytope bracket from the fidelity and
// standard-robustness choices of k.
LpBracket stabilizer_overhead_lp(const MagicInstance& inst, const conic::SolveOptions& opts = {});

// Relaxed overlap with the Strange state (witness LP over the qutrit
// stabilizer vertices) and the resulting overhead formula.
double strange_fraction_lp(const qcore::DensityMatrix& rho, const conic::SolveOptions& opts = {});
double strange_overhead(const qcore::DensityMatrix& rho, double eps,
                        const conic::SolveOptions& opts = {});

}  // namespace vqrd::magic
