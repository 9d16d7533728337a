#include "vqrd/monotones.hpp"

#include <cmath>
#include <stdexcept>

namespace vqrd::monotones {

using conic::MatExpr;
using conic::ProgramBuilder;
using conic::VarRef;
using freesets::FreeSetSpec;
using freesets::scale_matrix;
using qcore::Mat;

ZetaResult zeta_program(const qcore::HermitianOperator& rho, double k, double eps,
                        ZetaVariant variant, const FreeSetSpec& f,
                        const conic::SolveOptions& opts) {
    if (k < 1.0) throw std::invalid_argument("zeta_program: k >= 1 required");
    const int d = rho.dim();
    if (d != f.dim) throw qcore::DimensionError("zeta_program: free set dimension mismatch");
    const Mat id = Mat::Identity(d, d);

    ProgramBuilder b("zeta");
    auto qp = b.psd_matrix(d);
    auto qm = b.psd_matrix(d);
    auto mup = b.nonneg_scalar();
    auto mum = b.nonneg_scalar();

    b.add_psd(MatExpr::scalar(mup, id) - MatExpr::of(qp));
    b.add_psd(MatExpr::scalar(mum, id) - MatExpr::of(qm));

    const MatExpr cp = MatExpr::scalar(mup, Mat(Mat::Identity(1, 1) / k));
    const MatExpr cm = MatExpr::scalar(mum, Mat(Mat::Identity(1, 1) / k));
    if (variant == ZetaVariant::SupInequality) {
        freesets::encode_sup_overlap_leq(b, MatExpr::of(qp), cp, f);
        freesets::encode_sup_overlap_leq(b, MatExpr::of(qm), cm, f);
    } else {
        freesets::encode_overlap_eq(b, MatExpr::of(qp), cp, f);
        freesets::encode_overlap_eq(b, MatExpr::of(qm), cm, f);
    }

    b.add_eq(MatExpr::scalar(mup) - MatExpr::scalar(mum), 1.0);
    b.add_geq(trace_inner(rho.mat(), qp) - trace_inner(rho.mat(), qm), 1.0 - eps);
    b.minimize(MatExpr::scalar(mup) + MatExpr::scalar(mum));

    auto sol = b.solve(opts);
    ZetaResult r;
    r.status = sol.status;
    if (sol.optimal()) {
        r.value = sol.objective;
        r.q_plus = sol.matrix_of(qp);
        r.q_minus = sol.matrix_of(qm);
        r.mu_plus = sol.scalar_of(mup);
        r.mu_minus = sol.scalar_of(mum);
    }
    return r;
}

BoundReport theorem1_bracket(const qcore::HermitianOperator& rho, const FreeSetSpec& f_input,
                             const qcore::HermitianOperator& target_m,
                             const FreeSetSpec& f_target, double eps, ZetaVariant variant,
                             const conic::SolveOptions& opts) {
    const double fid = freesets::free_fidelity(target_m, f_target, opts);
    double r_meas;
    if (variant == ZetaVariant::SupInequality) {
        r_meas = freesets::standard_robustness(qcore::DensityMatrix(target_m.mat()), f_target, opts);
    } else {
        r_meas = freesets::generalized_robustness(qcore::DensityMatrix(target_m.mat()), f_target, opts);
    }

    BoundReport rep;
    rep.k_lower = 1.0 / fid;
    rep.k_upper = r_meas + 1.0;
    rep.exact = std::isfinite(r_meas) &&
                std::abs(rep.k_lower - rep.k_upper) <= 1e-7 * std::max(1.0, rep.k_lower);

    auto lo = zeta_program(rho, rep.k_lower, eps, variant, f_input, opts);
    if (!lo.feasible()) throw std::runtime_error("theorem1_bracket: lower program did not solve");
    rep.lower = lo.value;
    if (rep.exact) {
        rep.upper = rep.lower;
    } else if (std::isfinite(r_meas)) {
        auto hi = zeta_program(rho, rep.k_upper, eps, variant, f_input, opts);
        if (!hi.feasible()) throw std::runtime_error("theorem1_bracket: upper program did not solve");
        rep.upper = hi.value;
    } else {
        rep.upper = std::numeric_limits<double>::infinity();
    }
    if (rep.lower > rep.upper + 1e-6)
        throw std::logic_error("theorem1_bracket: lower bound exceeds upper bound");
    return rep;
}

namespace {

// Linear maps entering the channel-class dualization. Choi layout is
// input (x) output.
Mat pinch_in(const Mat& j, int di, int dout) {
    Mat out = Mat::Zero(di * dout, di * dout);
    for (int i = 0; i < di; ++i)
        out.block(i * dout, i * dout, dout, dout) = j.block(i * dout, i * dout, dout, dout);
    return out;
}

Mat pinch_out(const Mat& j, int di, int dout) {
    Mat out = j;
    for (int a = 0; a < di; ++a)
        for (int b = 0; b < di; ++b) {
            auto blk = out.block(a * dout, b * dout, dout, dout);
            Mat diag = blk.diagonal().asDiagonal();
            out.block(a * dout, b * dout, dout, dout) = diag;
        }
    return out;
}

Mat kron_with_identity_right(const Mat& y, int dout) {
    return qcore::kron(y, Mat::Identity(dout, dout));
}

}  // namespace

DualResult dual_overhead_value(const qcore::HermitianOperator& rho,
                               const qcore::HermitianOperator& eta, OpClass cls,
                               std::pair<int, int> in_bip, std::pair<int, int> out_bip,
                               const conic::SolveOptions& opts) {
    const int di = rho.dim();
    const int dout = eta.dim();
    const int dj = di * dout;
    const Mat rho_t = rho.mat().transpose();

    ProgramBuilder b("overhead_dual");
    auto w = b.free_hermitian(dout);
    // G(W) = rho^T (x) W on the Choi space
    auto g_of_w = [&](double sign) {
        return MatExpr::mapped(w, dj, [rho_t, sign](const Mat& x) {
            return Mat(sign * qcore::kron(rho_t, x));
        });
    };

    auto add_side = [&](double sign, double trace_bound) {
        // sign=+1 encodes min_J Tr(G J) >= 0; sign=-1 encodes max_J <= 1 via
        // min_J Tr(-G J) >= -1.
        auto y = b.free_hermitian(di);
        MatExpr yi = MatExpr::mapped(y, dj, [di, dout](const Mat& ym) {
            return kron_with_identity_right(ym, dout);
        });
        MatExpr lhs = g_of_w(sign) - yi;
        if (cls == OpClass::MioDio) {
            auto z = b.free_hermitian(dj);
            lhs = lhs - MatExpr::mapped(z, dj, [di, dout](const Mat& zm) {
                      return Mat(pinch_in(zm, di, dout) - pinch_out(zm, di, dout));
                  });
        } else {
            auto r = b.psd_matrix(dj);
            const int dai = in_bip.first, dbi = in_bip.second;
            const int dao = out_bip.first, dbo = out_bip.second;
            lhs = lhs - MatExpr::mapped(r, dj, [dai, dbi, dao, dbo](const Mat& rm) {
                      return qcore::partial_transpose_dims(rm, {dai, dbi, dao, dbo}, {1, 3});
                  });
        }
        b.add_psd(lhs);
        b.add_geq(trace_inner(Mat::Identity(di, di), y), trace_bound);
    };

    if (cls == OpClass::Ppt) {
        if (in_bip.first * in_bip.second != di || out_bip.first * out_bip.second != dout)
            throw qcore::DimensionError("dual_overhead_value: bad bipartitions");
    }
    add_side(+1.0, 0.0);   // min Tr(W Lambda(rho)) >= 0
    add_side(-1.0, -1.0);  // -max >= -1, i.e. max <= 1

    b.maximize(trace_inner(Mat(2.0 * eta.mat()), w) + MatExpr::constant(Mat(-Mat::Identity(1, 1))));
    auto sol = b.solve(opts);
    DualResult out;
    out.status = sol.status;
    if (sol.optimal()) {
        out.value = sol.objective;
        out.witness = sol.matrix_of(w);
    }
    return out;
}

std::pair<double, double> witness_range_over_class(const qcore::HermitianOperator& rho,
                                                   const Mat& w, OpClass cls,
                                                   std::pair<int, int> in_bip,
                                                   std::pair<int, int> out_bip,
                                                   const conic::SolveOptions& opts) {
    const int di = rho.dim();
    const int dout = static_cast<int>(w.rows());
    const int dj = di * dout;
    const Mat g = qcore::kron(rho.mat().transpose(), w);

    auto extremize = [&](bool maximize) {
        ProgramBuilder b("witness_range");
        auto j = b.psd_matrix(dj);
        // trace preservation
        b.add_zero(MatExpr::mapped(j, di, [di, dout](const Mat& jm) {
                       return qcore::partial_trace_dims(jm, {di, dout}, {0});
                   }) -
                   MatExpr::constant(Mat::Identity(di, di)));
        if (cls == OpClass::MioDio) {
            b.add_zero(MatExpr::mapped(j, dj, [di, dout](const Mat& jm) {
                return Mat(pinch_in(jm, di, dout) - pinch_out(jm, di, dout));
            }));
        } else {
            const int dai = in_bip.first, dbi = in_bip.second;
            const int dao = out_bip.first, dbo = out_bip.second;
            b.add_psd(MatExpr::mapped(j, dj, [dai, dbi, dao, dbo](const Mat& jm) {
                return qcore::partial_transpose_dims(jm, {dai, dbi, dao, dbo}, {1, 3});
            }));
        }
        if (maximize)
            b.maximize(trace_inner(g, j));
        else
            b.minimize(trace_inner(g, j));
        auto sol = b.solve(opts);
        if (!sol.optimal()) throw std::runtime_error("witness_range_over_class: solver failed");
        return sol.objective;
    };
    return {extremize(false), extremize(true)};
}

double overlap_lower_bound(double f_value, double eps) {
    return 2.0 * (1.0 - eps) / f_value - 1.0;
}

double robustness_lower_bound(const qcore::DensityMatrix& rho, const FreeSetSpec& f_input,
                              double target_fidelity, double eps) {
    const double rg = freesets::generalized_robustness(rho, f_input);
    return 2.0 * (1.0 - eps) / (target_fidelity * (rg + 1.0)) - 1.0;
}

double weight_lower_bound(const qcore::DensityMatrix& rho, const FreeSetSpec& f_input,
                          double target_fidelity, double eps) {
    const double wt = freesets::weight(rho, f_input);
    return 2.0 * (1.0 - eps) / (1.0 - (1.0 - target_fidelity) * wt) - 1.0;
}

std::pair<double, double> overlap_upper_bounds(const qcore::DensityMatrix& rho,
                                               const FreeSetSpec& f_input,
                                               double target_fidelity) {
    const double rg = freesets::generalized_robustness(rho, f_input);
    const double wt = freesets::weight(rho, f_input);
    return {target_fidelity * (rg + 1.0), 1.0 - (1.0 - target_fidelity) * wt};
}

bool check_twirling_condition(const qcore::HermitianOperator& target_m,
                              const FreeSetSpec& f_target, double tol) {
    const double fid = freesets::free_fidelity(target_m, f_target);
    const double rs =
        freesets::standard_robustness(qcore::DensityMatrix(target_m.mat()), f_target);
    if (!std::isfinite(rs)) return false;
    return std::abs(1.0 / fid - (1.0 + rs)) <= tol;
}

double virtual_monotone_bound(double measure_target, double measure_input) {
    if (measure_input <= 0.0)
        throw std::invalid_argument("virtual_monotone_bound: input measure must be positive");
    return measure_target / measure_input;
}

}  // namespace vqrd::monotones
