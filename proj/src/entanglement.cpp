#include "vqrd/entanglement.hpp"

#include <cmath>
#include <stdexcept>

#include "vqrd/builder.hpp"
#include "vqrd/freesets.hpp"

namespace vqrd::entanglement {

using conic::MatExpr;
using conic::ProgramBuilder;
using freesets::scale_matrix;
using qcore::Mat;

PptOverheadResult ppt_overhead_exact(const EntanglementInstance& inst,
                                     const conic::SolveOptions& opts) {
    if (inst.eps != 0.0)
        throw std::invalid_argument("ppt_overhead_exact: zero-error program, eps must be 0");
    if (inst.m < 1) throw std::invalid_argument("ppt_overhead_exact: m >= 1");
    const int d = inst.state.dim();
    if (inst.dims.first * inst.dims.second != d)
        throw qcore::DimensionError("ppt_overhead_exact: bipartition mismatch");
    const Mat id = Mat::Identity(d, d);
    const double inv2m = std::pow(2.0, -inst.m);
    const auto dims = inst.dims;
    auto gamma = [dims](const Mat& x) {
        return qcore::partial_transpose_dims(x, {dims.first, dims.second}, {1});
    };

    ProgramBuilder b("ppt_overhead");
    auto qp = b.psd_matrix(d);
    auto qm = b.psd_matrix(d);
    auto mup = b.nonneg_scalar();
    auto mum = b.nonneg_scalar();

    b.add_psd(MatExpr::scalar(mup, id) - MatExpr::of(qp));
    b.add_psd(MatExpr::scalar(mum, id) - MatExpr::of(qm));
    // |Q±^Gamma|_inf <= mu±/2^m
    b.add_psd(MatExpr::scalar(mup, Mat(inv2m * id)) - MatExpr::mapped(qp, d, gamma));
    b.add_psd(MatExpr::scalar(mup, Mat(inv2m * id)) + MatExpr::mapped(qp, d, gamma));
    b.add_psd(MatExpr::scalar(mum, Mat(inv2m * id)) - MatExpr::mapped(qm, d, gamma));
    b.add_psd(MatExpr::scalar(mum, Mat(inv2m * id)) + MatExpr::mapped(qm, d, gamma));

    b.add_eq(trace_inner(inst.state.mat(), qp) - trace_inner(inst.state.mat(), qm), 1.0);
    b.add_eq(MatExpr::scalar(mup) - MatExpr::scalar(mum), 1.0);
    b.minimize(MatExpr::scalar(mup) + MatExpr::scalar(mum));

    auto sol = b.solve(opts);
    PptOverheadResult r;
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

double ppt_singlet_fraction(const qcore::DensityMatrix& rho, std::pair<int, int> dims, int m,
                            const conic::SolveOptions& opts) {
    const int d = rho.dim();
    if (dims.first * dims.second != d)
        throw qcore::DimensionError("ppt_singlet_fraction: bipartition mismatch");
    ProgramBuilder b("singlet_fraction");
    auto w = b.psd_matrix(d);
    b.add_psd(MatExpr::constant(Mat::Identity(d, d)) - MatExpr::of(w));
    auto f = freesets::FreeSetSpec::ppt(dims.first, dims.second);
    freesets::encode_sup_overlap_leq(
        b, MatExpr::of(w), MatExpr::constant(Mat::Constant(1, 1, std::pow(2.0, -m))), f);
    b.maximize(trace_inner(rho.mat(), w));
    auto sol = b.solve(opts);
    if (!sol.optimal()) throw std::runtime_error("ppt_singlet_fraction: solver failed");
    return std::min(1.0, sol.objective);
}

double overhead_via_fraction(const qcore::DensityMatrix& rho, std::pair<int, int> dims, int m,
                             double eps, const conic::SolveOptions& opts) {
    const double f = ppt_singlet_fraction(rho, dims, m, opts);
    return std::max(2.0 * (1.0 - eps) / f - 1.0, 1.0);
}

double m_distillation_norm(const qcore::SchmidtVector& sv, int m_index) {
    if (m_index < 1) throw std::invalid_argument("m_distillation_norm: index >= 1");
    Eigen::VectorXd c = Eigen::VectorXd::Zero(
        std::max<Eigen::Index>(sv.coeffs().size(), m_index));
    c.head(sv.coeffs().size()) = sv.coeffs();
    const int n = static_cast<int>(c.size());

    int k_star = 1;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= m_index; ++k) {
        // tail starts at entry (m_index - k) in zero-based indexing
        double tail = 0.0;
        for (int j = m_index - k; j < n; ++j) tail += c(j) * c(j);
        const double score = tail / k;
        if (score < best - 1e-15) {
            best = score;
            k_star = k;
        }
    }
    double head = 0.0;
    for (int j = 0; j < m_index - k_star; ++j) head += c(j);
    double tail = 0.0;
    for (int j = m_index - k_star; j < n; ++j) tail += c(j) * c(j);
    return head + std::sqrt(static_cast<double>(k_star)) * std::sqrt(tail);
}

double pure_state_overhead(const qcore::SchmidtVector& sv, int m, double eps) {
    const int m_index = 1 << m;
    const double norm = m_distillation_norm(sv, m_index);
    return std::max(std::pow(2.0, m + 1) * (1.0 - eps) / (norm * norm) - 1.0, 1.0);
}

double isotropic_overhead(double alpha, int k, int m, double eps) {
    if (m < 1 || m > k) throw std::invalid_argument("isotropic_overhead: need 1 <= m <= k");
    if (alpha < 0.0 || alpha > 1.0) throw std::out_of_range("isotropic_overhead: alpha in [0,1]");
    const double sep_threshold = 1.0 - std::pow(2.0, -k);
    if (alpha >= sep_threshold)
        return std::max(std::pow(2.0, m + 1) * (1.0 - eps) - 1.0, 1.0);
    const double c = (std::pow(2.0, k) - std::pow(2.0, k - m)) / (std::pow(2.0, k) - 1.0);
    return std::max(2.0 * (1.0 - eps) / (1.0 - alpha * c) - 1.0, 1.0);
}

double hypothesis_testing_entropy(const qcore::DensityMatrix& rho, std::pair<int, int> dims,
                                  double eps, const conic::SolveOptions& opts) {
    if (eps < 0.0 || eps >= 1.0)
        throw std::out_of_range("hypothesis_testing_entropy: eps in [0,1)");
    const int d = rho.dim();
    if (dims.first * dims.second != d)
        throw qcore::DimensionError("hypothesis_testing_entropy: bipartition mismatch");
    // min t s.t. 0 <= A <= I, Tr(A rho) >= 1-eps, max_{sigma PPT} Tr(A sigma) <= t
    ProgramBuilder b("hypothesis_testing");
    auto a = b.psd_matrix(d);
    auto t = b.nonneg_scalar();
    b.add_psd(MatExpr::constant(Mat::Identity(d, d)) - MatExpr::of(a));
    b.add_geq(trace_inner(rho.mat(), a), 1.0 - eps);
    auto f = freesets::FreeSetSpec::ppt(dims.first, dims.second);
    freesets::encode_sup_overlap_leq(b, MatExpr::of(a), MatExpr::scalar(t), f);
    b.minimize(MatExpr::scalar(t));
    auto sol = b.solve(opts);
    if (!sol.optimal()) throw std::runtime_error("hypothesis_testing_entropy: solver failed");
    return -std::log2(std::max(sol.objective, 1e-300));
}

double eh_overhead_bound(double eh, int m) {
    if (static_cast<double>(m) < eh)
        throw std::invalid_argument("eh_overhead_bound: requires m >= E_H");
    return std::pow(2.0, m - eh + 1.0) - 1.0;
}

double eh_rate_bound(double eh) {
    const double denom = std::pow(2.0, 2.0 - eh) - 1.0;
    return 1.0 / (denom * denom);
}

double negativity(const qcore::DensityMatrix& rho, std::pair<int, int> dims) {
    return qcore::trace_norm(
        qcore::partial_transpose(qcore::HermitianOperator(rho.mat()), dims, 1));
}

std::pair<qcore::ChoiOperator, qcore::ChoiOperator> channels_from_witnesses(
    const PptOverheadResult& r, int input_dim, int m) {
    const int dout = 1 << (2 * m);
    const Mat phi_m = qcore::bell_pairs_bipartite(m);
    const Mat rest = (Mat::Identity(dout, dout) - phi_m) / static_cast<double>(dout - 1);
    auto build = [&](const Mat& q, double mu) {
        Mat b = q / mu;
        Mat j = qcore::kron(b.transpose(), phi_m) +
                qcore::kron(Mat(Mat::Identity(input_dim, input_dim) - b).transpose(), rest);
        return qcore::ChoiOperator(input_dim, dout, j, false, 1e-7);
    };
    return {build(r.q_plus, r.mu_plus), build(r.q_minus, r.mu_minus)};
}

}  // namespace vqrd::entanglement
