#include "vqrd/freesets.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>

namespace vqrd::freesets {

using conic::MatExpr;
using conic::ProgramBuilder;
using conic::VarRef;
using qcore::Cplx;
using qcore::Mat;
using qcore::Vec;

FreeSetSpec FreeSetSpec::diagonal(int d) {
    return {Kind::Diagonal, d, {0, 0}, {}, "diagonal states, dim " + std::to_string(d)};
}

FreeSetSpec FreeSetSpec::ppt(int da, int db) {
    return {Kind::Ppt, da * db, {da, db}, {},
            "PPT states on " + std::to_string(da) + "x" + std::to_string(db)};
}

FreeSetSpec FreeSetSpec::polytope(std::vector<Vec> verts, std::string desc) {
    if (verts.empty()) throw std::invalid_argument("FreeSetSpec: empty polytope");
    const int d = static_cast<int>(verts.front().size());
    for (auto& v : verts) {
        if (v.size() != d) throw qcore::DimensionError("FreeSetSpec: vertex dims differ");
        const double n = v.norm();
        if (std::abs(n - 1.0) > 1e-9) throw std::invalid_argument("FreeSetSpec: vertex not normalized");
        v /= n;
    }
    return {Kind::Polytope, d, {0, 0}, std::move(verts), std::move(desc)};
}

namespace {

// Canonical fingerprint of a pure state: global phase fixed by the first
// non-negligible amplitude, then amplitudes snapped to a 1e-6 grid.
std::string state_key(const Vec& v) {
    Vec w = v;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (std::abs(w(i)) > 1e-8) {
            w *= std::conj(w(i)) / std::abs(w(i));
            break;
        }
    }
    std::string key;
    key.reserve(static_cast<size_t>(w.size()) * 16);
    char buf[48];
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        const long long re = llround(w(i).real() * 1e6);
        const long long im = llround(w(i).imag() * 1e6);
        std::snprintf(buf, sizeof(buf), "%lld,%lld;", re, im);
        key += buf;
    }
    return key;
}

std::vector<Vec> clifford_orbit(const Vec& seed, const std::vector<Mat>& gens) {
    std::map<std::string, Vec> seen;
    std::vector<Vec> frontier{seed};
    seen[state_key(seed)] = seed;
    while (!frontier.empty()) {
        std::vector<Vec> next;
        for (const auto& v : frontier) {
            for (const auto& g : gens) {
                Vec w = g * v;
                auto key = state_key(w);
                if (!seen.count(key)) {
                    seen[key] = w;
                    next.push_back(w);
                }
            }
        }
        frontier = std::move(next);
    }
    std::vector<Vec> out;
    out.reserve(seen.size());
    for (auto& [k, v] : seen) out.push_back(v);
    return out;
}

}  // namespace

const std::vector<Vec>& qubit_stabilizer_states() {
    static const std::vector<Vec> states = [] {
        const double r = 1.0 / std::sqrt(2.0);
        std::vector<Vec> v(6, Vec(2));
        v[0] << 1, 0;                  // Z+
        v[1] << 0, 1;                  // Z-
        v[2] << r, r;                  // X+
        v[3] << r, -r;                 // X-
        v[4] << r, Cplx(0, r);         // Y+
        v[5] << r, Cplx(0, -r);        // Y-
        return v;
    }();
    return states;
}

const std::vector<Vec>& two_qubit_stabilizer_states() {
    static const std::vector<Vec> states = [] {
        Vec seed = Vec::Zero(4);
        seed(0) = 1.0;
        const Mat i2 = qcore::identity(2);
        std::vector<Mat> gens{qcore::kron(qcore::hadamard(), i2), qcore::kron(i2, qcore::hadamard()),
                              qcore::kron(qcore::phase_s(), i2), qcore::kron(i2, qcore::phase_s()),
                              qcore::cnot(0), qcore::cnot(1)};
        auto orbit = clifford_orbit(seed, gens);
        if (orbit.size() != 60)
            throw std::logic_error("two-qubit stabilizer orbit has unexpected size");
        return orbit;
    }();
    return states;
}

const std::vector<Vec>& qutrit_stabilizer_states() {
    static const std::vector<Vec> states = [] {
        Vec seed = Vec::Zero(3);
        seed(0) = 1.0;
        std::vector<Mat> gens{qcore::qutrit_fourier(), qcore::qutrit_phase(), qcore::qutrit_shift()};
        auto orbit = clifford_orbit(seed, gens);
        if (orbit.size() != 12) throw std::logic_error("qutrit stabilizer orbit has unexpected size");
        return orbit;
    }();
    return states;
}

FreeSetSpec stabilizer_polytope(int qudit_dim, int copies) {
    if (qudit_dim == 2 && copies == 1)
        return FreeSetSpec::polytope(qubit_stabilizer_states(), "qubit stabilizer polytope");
    if (qudit_dim == 2 && copies == 2)
        return FreeSetSpec::polytope(two_qubit_stabilizer_states(), "two-qubit stabilizer polytope");
    if (qudit_dim == 3 && copies == 1)
        return FreeSetSpec::polytope(qutrit_stabilizer_states(), "qutrit stabilizer polytope");
    throw std::invalid_argument("stabilizer_polytope: unsupported (dim, copies)");
}

MatExpr scale_matrix(const MatExpr& s, const Mat& m) {
    if (s.dim() != 1) throw qcore::DimensionError("scale_matrix: scalar expression expected");
    MatExpr out = MatExpr::constant(Mat(s.constant_part()(0, 0).real() * m));
    for (const auto& t : s.terms()) {
        auto inner = t.map;
        Mat mm = m;
        out = out + MatExpr::mapped(t.var, static_cast<int>(m.rows()),
                                    [inner, mm](const Mat& x) { return Mat(inner(x)(0, 0).real() * mm); });
    }
    for (const auto& t : s.scalar_terms())
        out = out + MatExpr::scalar(t.var, Mat(t.coeff(0, 0).real() * m));
    return out;
}

void encode_sup_overlap_leq(ProgramBuilder& b, const MatExpr& q, const MatExpr& c,
                            const FreeSetSpec& f) {
    if (q.dim() != f.dim) throw qcore::DimensionError("encode_sup_overlap_leq: dimension mismatch");
    auto project = [&](const Mat& state) {
        // Tr(Q sigma) as a scalar expression in the variables of q
        MatExpr e = MatExpr::constant(Mat::Constant(1, 1, (q.constant_part() * state).trace()));
        for (const auto& t : q.terms()) {
            auto inner = t.map;
            Mat st = state;
            e = e + MatExpr::mapped(t.var, 1, [inner, st](const Mat& x) {
                    Mat r(1, 1);
                    r(0, 0) = (inner(x) * st).trace();
                    return r;
                });
        }
        for (const auto& t : q.scalar_terms())
            e = e + MatExpr::scalar(t.var, Mat(Mat::Constant(1, 1, (t.coeff * state).trace())));
        return e;
    };

    switch (f.kind) {
        case FreeSetSpec::Kind::Diagonal: {
            for (int i = 0; i < f.dim; ++i) {
                Mat e = Mat::Zero(f.dim, f.dim);
                e(i, i) = 1.0;
                VarRef t = b.nonneg_scalar();
                b.add_zero(project(e) + MatExpr::scalar(t) - c);
            }
            break;
        }
        case FreeSetSpec::Kind::Polytope: {
            for (const auto& v : f.vertices) {
                VarRef t = b.nonneg_scalar();
                b.add_zero(project(qcore::projector(v)) + MatExpr::scalar(t) - c);
            }
            break;
        }
        case FreeSetSpec::Kind::Ppt: {
            VarRef r = b.psd_matrix(f.dim);
            auto dims = f.bipartition;
            MatExpr r_gamma = MatExpr::mapped(r, f.dim, [dims](const Mat& x) {
                return qcore::partial_transpose_dims(x, {dims.first, dims.second}, {1});
            });
            b.add_psd(scale_matrix(c, Mat::Identity(f.dim, f.dim)) - q - r_gamma);
            break;
        }
    }
}

void encode_overlap_eq(ProgramBuilder& b, const MatExpr& q, const MatExpr& c,
                       const FreeSetSpec& f) {
    if (q.dim() != f.dim) throw qcore::DimensionError("encode_overlap_eq: dimension mismatch");
    if (f.kind == FreeSetSpec::Kind::Ppt)
        throw std::invalid_argument("encode_overlap_eq: overlap is not constant on the PPT set");
    auto project = [&](const Mat& state) {
        MatExpr e = MatExpr::constant(Mat::Constant(1, 1, (q.constant_part() * state).trace()));
        for (const auto& t : q.terms()) {
            auto inner = t.map;
            Mat st = state;
            e = e + MatExpr::mapped(t.var, 1, [inner, st](const Mat& x) {
                    Mat r(1, 1);
                    r(0, 0) = (inner(x) * st).trace();
                    return r;
                });
        }
        for (const auto& t : q.scalar_terms())
            e = e + MatExpr::scalar(t.var, Mat(Mat::Constant(1, 1, (t.coeff * state).trace())));
        return e;
    };
    if (f.kind == FreeSetSpec::Kind::Diagonal) {
        for (int i = 0; i < f.dim; ++i) {
            Mat e = Mat::Zero(f.dim, f.dim);
            e(i, i) = 1.0;
            b.add_zero(project(e) - c);
        }
    } else {
        for (const auto& v : f.vertices) b.add_zero(project(qcore::projector(v)) - c);
    }
}

double max_overlap_direct(const qcore::HermitianOperator& q, const FreeSetSpec& f,
                          const conic::SolveOptions& opts) {
    if (q.dim() != f.dim) throw qcore::DimensionError("max_overlap_direct: dimension mismatch");
    switch (f.kind) {
        case FreeSetSpec::Kind::Diagonal: {
            double best = -std::numeric_limits<double>::infinity();
            for (int i = 0; i < f.dim; ++i) best = std::max(best, q.mat()(i, i).real());
            return best;
        }
        case FreeSetSpec::Kind::Polytope: {
            double best = -std::numeric_limits<double>::infinity();
            for (const auto& v : f.vertices)
                best = std::max(best, (v.adjoint() * q.mat() * v)(0, 0).real());
            return best;
        }
        case FreeSetSpec::Kind::Ppt: {
            ProgramBuilder b("max_overlap_ppt");
            auto sigma = b.psd_matrix(f.dim);
            auto dims = f.bipartition;
            b.add_psd(MatExpr::mapped(sigma, f.dim, [dims](const Mat& x) {
                return qcore::partial_transpose_dims(x, {dims.first, dims.second}, {1});
            }));
            b.add_eq(trace_inner(Mat::Identity(f.dim, f.dim), sigma), 1.0);
            b.maximize(trace_inner(q.mat(), sigma));
            auto sol = b.solve(opts);
            if (!sol.optimal()) throw std::runtime_error("max_overlap_direct: solver failed");
            return sol.objective;
        }
    }
    return 0.0;
}

double free_fidelity(const qcore::HermitianOperator& psi, const FreeSetSpec& f,
                     const conic::SolveOptions& opts) {
    return max_overlap_direct(psi, f, opts);
}

ConeElement add_cone_element(ProgramBuilder& b, const FreeSetSpec& f) {
    switch (f.kind) {
        case FreeSetSpec::Kind::Diagonal: {
            MatExpr elem(f.dim), tr(1);
            for (int i = 0; i < f.dim; ++i) {
                VarRef s = b.nonneg_scalar();
                Mat e = Mat::Zero(f.dim, f.dim);
                e(i, i) = 1.0;
                elem = elem + MatExpr::scalar(s, e);
                tr = tr + MatExpr::scalar(s);
            }
            return {elem, tr};
        }
        case FreeSetSpec::Kind::Polytope: {
            MatExpr elem(f.dim), tr(1);
            for (const auto& v : f.vertices) {
                VarRef s = b.nonneg_scalar();
                elem = elem + MatExpr::scalar(s, qcore::projector(v));
                tr = tr + MatExpr::scalar(s);
            }
            return {elem, tr};
        }
        case FreeSetSpec::Kind::Ppt: {
            VarRef p = b.psd_matrix(f.dim);
            auto dims = f.bipartition;
            b.add_psd(MatExpr::mapped(p, f.dim, [dims](const Mat& x) {
                return qcore::partial_transpose_dims(x, {dims.first, dims.second}, {1});
            }));
            return {MatExpr::of(p), trace_inner(Mat::Identity(f.dim, f.dim), p)};
        }
    }
    throw std::logic_error("add_cone_element: unreachable");
}

double generalized_robustness(const qcore::DensityMatrix& rho, const FreeSetSpec& f,
                              const conic::SolveOptions& opts) {
    ProgramBuilder b("generalized_robustness");
    auto m = b.psd_matrix(f.dim);
    // rho + M must lie in cone(F)
    switch (f.kind) {
        case FreeSetSpec::Kind::Diagonal: {
            b.add_zero(MatExpr::mapped(m, f.dim, [](const Mat& x) {
                           Mat off = x;
                           off.diagonal().setZero();
                           return off;
                       }) +
                       MatExpr::constant([&] {
                           Mat off = rho.mat();
                           off.diagonal().setZero();
                           return off;
                       }()));
            break;
        }
        case FreeSetSpec::Kind::Ppt: {
            auto dims = f.bipartition;
            b.add_psd(MatExpr::mapped(m, f.dim, [dims](const Mat& x) {
                          return qcore::partial_transpose_dims(x, {dims.first, dims.second}, {1});
                      }) +
                      MatExpr::constant(
                          qcore::partial_transpose_dims(rho.mat(), {dims.first, dims.second}, {1})));
            break;
        }
        case FreeSetSpec::Kind::Polytope: {
            auto elem = add_cone_element(b, f);
            b.add_zero(elem.element - MatExpr::of(m) - MatExpr::constant(rho.mat()));
            break;
        }
    }
    b.minimize(trace_inner(Mat::Identity(f.dim, f.dim), m));
    auto sol = b.solve(opts);
    if (sol.status == conic::SolveStatus::infeasible)
        return std::numeric_limits<double>::infinity();
    if (!sol.optimal()) throw std::runtime_error("generalized_robustness: solver failed");
    return std::max(0.0, sol.objective);
}

double standard_robustness(const qcore::DensityMatrix& rho, const FreeSetSpec& f,
                           const conic::SolveOptions& opts) {
    ProgramBuilder b("standard_robustness");
    auto absorber = add_cone_element(b, f);  // lambda * sigma
    auto total = add_cone_element(b, f);     // (1 + lambda) * sigma'
    b.add_zero(total.element - absorber.element - MatExpr::constant(rho.mat()));
    b.minimize(absorber.trace);
    auto sol = b.solve(opts);
    if (sol.status == conic::SolveStatus::infeasible)
        return std::numeric_limits<double>::infinity();
    if (!sol.optimal()) throw std::runtime_error("standard_robustness: solver failed");
    return std::max(0.0, sol.objective);
}

double weight(const qcore::DensityMatrix& rho, const FreeSetSpec& f,
              const conic::SolveOptions& opts) {
    ProgramBuilder b("weight");
    auto part = add_cone_element(b, f);  // w * sigma
    b.add_psd(MatExpr::constant(rho.mat()) - part.element);
    b.maximize(part.trace);
    auto sol = b.solve(opts);
    if (!sol.optimal()) throw std::runtime_error("weight: solver failed");
    return std::min(1.0, std::max(0.0, sol.objective));
}

double base_norm(const qcore::HermitianOperator& x, const FreeSetSpec& f,
                 const conic::SolveOptions& opts) {
    ProgramBuilder b("base_norm");
    auto plus = add_cone_element(b, f);
    auto minus = add_cone_element(b, f);
    b.add_zero(plus.element - minus.element - MatExpr::constant(x.mat()));
    b.minimize(plus.trace + minus.trace);
    auto sol = b.solve(opts);
    if (sol.status == conic::SolveStatus::infeasible)
        return std::numeric_limits<double>::infinity();
    if (!sol.optimal()) throw std::runtime_error("base_norm: solver failed");
    return sol.objective;
}

}  // namespace vqrd::freesets
