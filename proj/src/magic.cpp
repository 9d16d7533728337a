#include "vqrd/magic.hpp"

#include <cmath>
#include <stdexcept>

#include "vqrd/builder.hpp"
#include "vqrd/freesets.hpp"

namespace vqrd::magic {

using conic::MatExpr;
using conic::ProgramBuilder;
using qcore::Mat;

double dephased_t_overhead(double p, double eps) {
    if (p < -1.0 || p > 1.0) throw std::out_of_range("dephased_t_overhead: p in [-1,1]");
    if (eps < 0.0 || eps > 0.5) throw std::out_of_range("dephased_t_overhead: eps in [0,1/2]");
    const double p_th = 1.0 / std::sqrt(2.0);
    return std::max((1.0 - 2.0 * eps) / std::max(std::abs(p), p_th), 1.0);
}

qcore::DensityMatrix t_twirl(const qcore::DensityMatrix& rho) {
    if (rho.dim() != 2) throw qcore::DimensionError("t_twirl: qubit input expected");
    const Mat sx = qcore::phase_s() * qcore::pauli_x();
    Mat out = 0.5 * rho.mat() + 0.5 * sx * rho.mat() * sx.adjoint();
    return qcore::DensityMatrix(out);
}

LpBracket stabilizer_overhead_lp(const MagicInstance& inst, const conic::SolveOptions& opts) {
    if (inst.qudit_dim == 2) {
        if (inst.m < 1 || inst.m > 2)
            throw std::invalid_argument("stabilizer_overhead_lp: qubit targets support m <= 2");
    } else if (inst.qudit_dim == 3) {
        if (inst.m != 1)
            throw std::invalid_argument("stabilizer_overhead_lp: qutrit targets support m = 1");
    } else {
        throw std::invalid_argument("stabilizer_overhead_lp: qudit dim must be 2 or 3");
    }
    const Mat target1 = (inst.target == Target::TState) ? qcore::t_state().mat()
                                                        : qcore::strange_state().mat();
    if ((inst.target == Target::TState) != (inst.qudit_dim == 2))
        throw std::invalid_argument("stabilizer_overhead_lp: target/qudit dimension mismatch");
    const Mat target_m = qcore::kron_pow(target1, inst.m);

    // Input and target live on the same copy count here; inputs on fewer
    // copies than the target are handled through the input polytope alone.
    const int input_copies =
        (inst.state.dim() == static_cast<int>(std::pow(inst.qudit_dim, inst.m))) ? inst.m : 1;
    auto f_input = freesets::stabilizer_polytope(inst.qudit_dim, input_copies);
    auto f_target = freesets::stabilizer_polytope(inst.qudit_dim, inst.m);

    auto rep = monotones::theorem1_bracket(
        qcore::HermitianOperator(inst.state.mat()), f_input, qcore::HermitianOperator(target_m),
        f_target, inst.eps, monotones::ZetaVariant::SupInequality, opts);
    LpBracket out;
    out.lower = rep.lower;
    out.upper = rep.upper;
    out.k_lower = rep.k_lower;
    out.k_upper = rep.k_upper;
    out.collapsed = rep.exact || std::abs(rep.upper - rep.lower) <= 1e-6;
    return out;
}

double strange_fraction_lp(const qcore::DensityMatrix& rho, const conic::SolveOptions& opts) {
    if (rho.dim() != 3) throw qcore::DimensionError("strange_fraction_lp: qutrit input expected");
    auto f = freesets::stabilizer_polytope(3, 1);
    const double f_stab =
        freesets::free_fidelity(qcore::HermitianOperator(qcore::strange_state().mat()), f);

    ProgramBuilder b("strange_fraction");
    auto w = b.psd_matrix(3);
    b.add_psd(MatExpr::constant(Mat::Identity(3, 3)) - MatExpr::of(w));
    freesets::encode_sup_overlap_leq(b, MatExpr::of(w),
                                     MatExpr::constant(Mat::Constant(1, 1, f_stab)), f);
    b.maximize(trace_inner(rho.mat(), w));
    auto sol = b.solve(opts);
    if (!sol.optimal()) throw std::runtime_error("strange_fraction_lp: solver failed");
    return std::min(1.0, sol.objective);
}

double strange_overhead(const qcore::DensityMatrix& rho, double eps,
                        const conic::SolveOptions& opts) {
    const double f = strange_fraction_lp(rho, opts);
    return std::max(2.0 * (1.0 - eps) / f - 1.0, 1.0);
}

}  // namespace vqrd::magic
