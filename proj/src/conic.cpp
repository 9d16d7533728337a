#include "vqrd/conic.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "vqrd/parallel.hpp"

namespace vqrd::conic {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

int ConeSignature::total_coords() const {
    int n = 0;
    for (const auto& b : blocks) n += b.coords();
    return n;
}

VectorXd hvec(const MatrixXcd& x) {
    const int d = static_cast<int>(x.rows());
    VectorXd v(d * d);
    int at = 0;
    const double rt2 = std::sqrt(2.0);
    for (int c = 0; c < d; ++c) {
        v(at++) = x(c, c).real();
        for (int r = 0; r < c; ++r) {
            v(at++) = rt2 * x(r, c).real();
            v(at++) = rt2 * x(r, c).imag();
        }
    }
    return v;
}

MatrixXcd hvec_inverse(const VectorXd& v, int d) {
    MatrixXcd x(d, d);
    int at = 0;
    const double rt2 = std::sqrt(2.0);
    for (int c = 0; c < d; ++c) {
        x(c, c) = v(at++);
        for (int r = 0; r < c; ++r) {
            const double re = v(at++) / rt2;
            const double im = v(at++) / rt2;
            x(r, c) = std::complex<double>(re, im);
            x(c, r) = std::complex<double>(re, -im);
        }
    }
    return x;
}

MatrixXd hermitian_embed(const MatrixXcd& x) {
    const int d = static_cast<int>(x.rows());
    MatrixXd e(2 * d, 2 * d);
    e.topLeftCorner(d, d) = x.real();
    e.topRightCorner(d, d) = -x.imag();
    e.bottomLeftCorner(d, d) = x.imag();
    e.bottomRightCorner(d, d) = x.real();
    return e;
}

const char* status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::unbounded: return "unbounded";
        case SolveStatus::max_iter: return "max_iter";
    }
    return "?";
}

void ConicProgram::dump(std::ostream& os) const {
    os << "program " << (name.empty() ? "(unnamed)" : name) << "\n";
    os << "minimize";
    for (Eigen::Index i = 0; i < objective.size(); ++i)
        if (objective(i) != 0.0) os << " " << objective(i) << "*x" << i;
    os << "\nsubject to (row, col, coeff):\n";
    for (int k = 0; k < eq.outerSize(); ++k)
        for (SpMat::InnerIterator it(eq, k); it; ++it)
            os << "  " << it.row() << " " << it.col() << " " << it.value() << "\n";
    os << "rhs:";
    for (Eigen::Index i = 0; i < rhs.size(); ++i) os << " " << rhs(i);
    os << "\ncones:";
    for (const auto& b : cones.blocks) {
        switch (b.kind) {
            case ConeKind::Free: os << " free(" << b.dim << ")"; break;
            case ConeKind::Nonneg: os << " nonneg(" << b.dim << ")"; break;
            case ConeKind::Psd: os << " psd(" << b.dim << ")"; break;
        }
    }
    os << "\n";
}

namespace {

struct PsdBlock {
    int offset;  // coordinate offset in the reduced (cone-only) layout
    int d;       // complex dimension
};

// Free variables are eliminated exactly in presolve: with A = [A_c A_f],
// a column-pivoted QR of A_f splits the equalities into a part that pins
// x_f and a part that only involves the cone variables. The interior-point
// iteration then runs on self-dual cones only.
struct Internal {
    int n = 0;       // cone coordinate count
    int n_prog = 0;  // program coordinate count
    VectorXd c;      // reduced objective
    double obj_shift = 0.0;
    SpMat a;  // kept, scaled reduced rows
    VectorXd b;
    std::vector<int> kept_rows;  // indices into the reduced row space
    VectorXd row_scale;
    std::vector<PsdBlock> psd;
    std::vector<int> nonneg;    // reduced coords in the nonneg cone
    std::vector<int> cone_pos;  // reduced coord -> program coord
    double nu = 0;
    bool trivially_infeasible = false;

    // free-elimination data (empty when the program has no free block)
    std::vector<int> free_pos;  // program coords of free variables
    int free_rank = 0;
    bool null_objective = false;  // objective has a component along free null space
    MatrixXd q1, q2, r11;         // A_f * P = [Q1 Q2] [R; 0]
    std::vector<int> free_perm;   // pivot order within free coords
    SpMat a_cone_orig;            // unscaled cone columns of the program
    VectorXd b_orig;
    VectorXd c1;  // pivot part of the free objective
};

struct Scaling {
    VectorXd h_diag;
    VectorXd lambda_nn;
    std::vector<MatrixXcd> g, ginv, r, rinv;
    std::vector<VectorXd> lambda_psd;
};

MatrixXcd block_mat(const VectorXd& x, const PsdBlock& b) {
    return hvec_inverse(x.segment(b.offset, b.d * b.d), b.d);
}

void set_block(VectorXd& x, const PsdBlock& b, const MatrixXcd& m) {
    x.segment(b.offset, b.d * b.d) = hvec(m);
}

Internal build_internal(const ConicProgram& prog, double pivot_tol) {
    Internal in;
    const int n0 = prog.cones.total_coords();
    if (prog.objective.size() != n0 || prog.eq.cols() != n0 || prog.eq.rows() != prog.rhs.size())
        throw std::invalid_argument("conic::solve: inconsistent program dimensions");
    in.n_prog = n0;

    int at = 0;
    std::vector<int> cone_coords;
    for (const auto& blk : prog.cones.blocks) {
        if (blk.kind == ConeKind::Free) {
            for (int i = 0; i < blk.dim; ++i) in.free_pos.push_back(at + i);
        } else if (blk.kind == ConeKind::Nonneg) {
            for (int i = 0; i < blk.dim; ++i) {
                in.nonneg.push_back(static_cast<int>(cone_coords.size()));
                cone_coords.push_back(at + i);
            }
        } else {
            in.psd.push_back({static_cast<int>(cone_coords.size()), blk.dim});
            for (int i = 0; i < blk.coords(); ++i) cone_coords.push_back(at + i);
        }
        at += blk.coords();
    }
    in.cone_pos = cone_coords;
    in.n = static_cast<int>(cone_coords.size());

    // Split program columns into cone and free parts.
    const int p0 = static_cast<int>(prog.eq.rows());
    const int nf = static_cast<int>(in.free_pos.size());
    std::vector<int> prog_to_cone(static_cast<size_t>(n0), -1),
        prog_to_free(static_cast<size_t>(n0), -1);
    for (int i = 0; i < in.n; ++i) prog_to_cone[static_cast<size_t>(cone_coords[i])] = i;
    for (int i = 0; i < nf; ++i) prog_to_free[static_cast<size_t>(in.free_pos[i])] = i;

    std::vector<Eigen::Triplet<double>> tc;
    MatrixXd af = MatrixXd::Zero(p0, nf);
    for (int k = 0; k < prog.eq.outerSize(); ++k)
        for (SpMat::InnerIterator it(prog.eq, k); it; ++it) {
            const int cc = prog_to_cone[static_cast<size_t>(it.col())];
            if (cc >= 0)
                tc.emplace_back(static_cast<int>(it.row()), cc, it.value());
            else
                af(it.row(), prog_to_free[static_cast<size_t>(it.col())]) = it.value();
        }
    SpMat a_cone(p0, in.n);
    a_cone.setFromTriplets(tc.begin(), tc.end());
    in.a_cone_orig = a_cone;
    in.b_orig = prog.rhs;

    VectorXd c_cone(in.n), c_free(std::max(nf, 0));
    for (int i = 0; i < in.n; ++i) c_cone(i) = prog.objective(cone_coords[i]);
    for (int i = 0; i < nf; ++i) c_free(i) = prog.objective(in.free_pos[i]);

    MatrixXd a_work;   // rows to feed the cone solver (dense while presolving)
    VectorXd b_work;
    in.c = c_cone;

    if (nf > 0) {
        Eigen::ColPivHouseholderQR<MatrixXd> qr(af);
        qr.setThreshold(pivot_tol);
        const int r = static_cast<int>(qr.rank());
        in.free_rank = r;
        MatrixXd q = qr.householderQ() * MatrixXd::Identity(p0, p0);
        in.q1 = q.leftCols(r);
        in.q2 = q.rightCols(p0 - r);
        MatrixXd rfull = qr.matrixR().topRows(r).triangularView<Eigen::Upper>();
        in.r11 = rfull.leftCols(r);
        const auto& piv = qr.colsPermutation().indices();
        in.free_perm.assign(piv.data(), piv.data() + nf);

        // objective along eliminated coordinates
        in.c1 = VectorXd(r);
        for (int i = 0; i < r; ++i) in.c1(i) = c_free(in.free_perm[static_cast<size_t>(i)]);
        if (r < nf) {
            // x2 (null directions) pinned to zero; if the objective moves
            // along them, the program is unbounded below (when feasible).
            MatrixXd r12 = rfull.rightCols(nf - r);
            VectorXd c2(nf - r);
            for (int i = 0; i < nf - r; ++i)
                c2(i) = c_free(in.free_perm[static_cast<size_t>(r + i)]);
            VectorXd g2 = c2 - r12.transpose() * in.r11.transpose().triangularView<Eigen::Lower>().solve(in.c1);
            if (g2.cwiseAbs().maxCoeff() > 1e-11) in.null_objective = true;
        }

        // reduced objective and constant
        VectorXd w = in.r11.triangularView<Eigen::Upper>().transpose().solve(in.c1);
        // w = R11^{-T} c1; c_red = c_cone - A_c' Q1 w ; shift = (Q1 w)' b
        VectorXd q1w = in.q1 * w;
        in.c = c_cone - VectorXd(a_cone.transpose() * q1w);
        in.obj_shift = q1w.dot(prog.rhs);

        a_work = in.q2.transpose() * MatrixXd(a_cone);
        b_work = in.q2.transpose() * prog.rhs;
    } else {
        a_work = MatrixXd(a_cone);
        b_work = prog.rhs;
    }

    // Row scaling; constant rows are resolved immediately.
    std::vector<int> keep;
    std::vector<double> scale;
    for (int i = 0; i < a_work.rows(); ++i) {
        const double nr = a_work.row(i).norm();
        if (nr <= 1e-13) {
            if (std::abs(b_work(i)) > 1e-9) in.trivially_infeasible = true;
            continue;
        }
        keep.push_back(i);
        scale.push_back(nr);
    }

    MatrixXd a_scaled(keep.size(), in.n);
    VectorXd b_scaled(keep.size());
    for (size_t i = 0; i < keep.size(); ++i) {
        a_scaled.row(static_cast<Eigen::Index>(i)) = a_work.row(keep[i]) / scale[i];
        b_scaled(static_cast<Eigen::Index>(i)) = b_work(keep[i]) / scale[i];
    }

    // Rank reduction for dependent equality rows (skipped for large systems
    // where the builders guarantee full row rank via slack identities).
    std::vector<int> kept2(keep.size());
    for (size_t i = 0; i < keep.size(); ++i) kept2[i] = static_cast<int>(i);
    if (a_scaled.rows() > 1 && (a_scaled.rows() <= 600 || nf > 0)) {
        Eigen::ColPivHouseholderQR<MatrixXd> qr(a_scaled.transpose());
        qr.setThreshold(pivot_tol);
        const int rank = static_cast<int>(qr.rank());
        if (rank < a_scaled.rows()) {
            MatrixXd aug(a_scaled.rows(), in.n + 1);
            aug.leftCols(in.n) = a_scaled;
            aug.col(in.n) = b_scaled;
            Eigen::ColPivHouseholderQR<MatrixXd> qr2(aug.transpose());
            qr2.setThreshold(pivot_tol);
            if (qr2.rank() > rank) in.trivially_infeasible = true;
            const auto& piv = qr.colsPermutation().indices();
            kept2.assign(piv.data(), piv.data() + rank);
            std::sort(kept2.begin(), kept2.end());
        }
    }

    MatrixXd a_red(kept2.size(), in.n);
    in.b = VectorXd(kept2.size());
    in.kept_rows.resize(kept2.size());
    in.row_scale = VectorXd(kept2.size());
    for (size_t i = 0; i < kept2.size(); ++i) {
        a_red.row(static_cast<Eigen::Index>(i)) = a_scaled.row(kept2[i]);
        in.b(static_cast<Eigen::Index>(i)) = b_scaled(kept2[i]);
        in.kept_rows[i] = keep[static_cast<size_t>(kept2[i])];
        in.row_scale(static_cast<Eigen::Index>(i)) = scale[static_cast<size_t>(kept2[i])];
    }
    in.a = a_red.sparseView(1.0, 1e-300);
    in.a.makeCompressed();

    in.nu = static_cast<double>(in.nonneg.size());
    for (const auto& b : in.psd) in.nu += b.d;
    return in;
}

Scaling compute_scaling(const Internal& in, const VectorXd& x, const VectorXd& s) {
    Scaling sc;
    sc.h_diag = VectorXd::Zero(in.n);
    sc.lambda_nn = VectorXd::Zero(in.n);
    for (int i : in.nonneg) {
        sc.h_diag(i) = x(i) / s(i);
        sc.lambda_nn(i) = std::sqrt(x(i) * s(i));
    }
    for (const auto& b : in.psd) {
        const MatrixXcd xm = block_mat(x, b);
        const MatrixXcd sm = block_mat(s, b);
        Eigen::LLT<MatrixXcd> lx(xm), ls(sm);
        if (lx.info() != Eigen::Success || ls.info() != Eigen::Success)
            throw std::runtime_error("conic: iterate left the cone");
        const MatrixXcd lxm = lx.matrixL();
        const MatrixXcd lsm = ls.matrixL();
        Eigen::JacobiSVD<MatrixXcd> svd(MatrixXcd(lsm.adjoint() * lxm),
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
        VectorXd sig = svd.singularValues();
        VectorXd sig_isqrt = sig.cwiseSqrt().cwiseInverse();
        MatrixXcd r = lxm * svd.matrixV() * sig_isqrt.asDiagonal();
        MatrixXcd rinv = sig_isqrt.asDiagonal() * svd.matrixU().adjoint() * lsm.adjoint();
        sc.r.push_back(r);
        sc.rinv.push_back(rinv);
        sc.g.push_back(r * r.adjoint());
        sc.ginv.push_back(rinv.adjoint() * rinv);
        sc.lambda_psd.push_back(sig);
    }
    return sc;
}

VectorXd apply_h(const Internal& in, const Scaling& sc, const VectorXd& v) {
    VectorXd out = VectorXd::Zero(in.n);
    for (int i : in.nonneg) out(i) = sc.h_diag(i) * v(i);
    for (size_t k = 0; k < in.psd.size(); ++k) {
        const auto& b = in.psd[k];
        const MatrixXcd m = block_mat(v, b);
        set_block(out, b, sc.g[k] * m * sc.g[k]);
    }
    return out;
}

VectorXd apply_hinv(const Internal& in, const Scaling& sc, const VectorXd& v) {
    VectorXd out = VectorXd::Zero(in.n);
    for (int i : in.nonneg) out(i) = v(i) / sc.h_diag(i);
    for (size_t k = 0; k < in.psd.size(); ++k) {
        const auto& b = in.psd[k];
        const MatrixXcd m = block_mat(v, b);
        set_block(out, b, sc.ginv[k] * m * sc.ginv[k]);
    }
    return out;
}

// Dense n_k x n_k matrix of X -> G X G in hvec coordinates.
MatrixXd materialize_h_block(const MatrixXcd& g) {
    const int d = static_cast<int>(g.rows());
    const int n = d * d;
    MatrixXd h(n, n);
    VectorXd basis = VectorXd::Zero(n);
    for (int c = 0; c < n; ++c) {
        basis(c) = 1.0;
        const MatrixXcd e = hvec_inverse(basis, d);
        h.col(c) = hvec(g * e * g);
        basis(c) = 0.0;
    }
    return h;
}

// Normal matrix A H A'. Per-block contributions are accumulated in block
// order; within a block, columns of A_k H_k are independent chunks, so the
// OpenMP and serial paths produce identical results.
MatrixXd assemble_normal(const Internal& in, const Scaling& sc) {
    const int p = static_cast<int>(in.a.rows());
    MatrixXd nm = MatrixXd::Zero(p, p);

    for (int i : in.nonneg) {
        const double h = sc.h_diag(i);
        if (h == 0.0) continue;
        for (SpMat::InnerIterator it1(in.a, i); it1; ++it1)
            for (SpMat::InnerIterator it2(in.a, i); it2; ++it2)
                nm(it1.row(), it2.row()) += h * it1.value() * it2.value();
    }

    for (size_t k = 0; k < in.psd.size(); ++k) {
        const auto& blk = in.psd[k];
        const int nk = blk.d * blk.d;
        const MatrixXd hk = materialize_h_block(sc.g[k]);
        const SpMat ak = in.a.middleCols(blk.offset, nk);
        MatrixXd bk = MatrixXd::Zero(p, nk);
        vqrd::parallel::for_each_chunk(nk, 64, [&](const parallel::ChunkRange& ch) {
            for (std::int64_t c = ch.begin; c < ch.end; ++c)
                bk.col(c) = ak * hk.col(c);
        });
        nm += bk * ak.transpose();
    }
    return nm;
}

// Unpivoted LDL' factorization; valid for quasi-definite matrices.
struct Ldl {
    MatrixXd l;
    VectorXd d;

    bool compute(const MatrixXd& k) {
        const int m = static_cast<int>(k.rows());
        l = MatrixXd::Identity(m, m);
        d = VectorXd::Zero(m);
        VectorXd w(m);
        for (int j = 0; j < m; ++j) {
            double dj = k(j, j);
            for (int t = 0; t < j; ++t) dj -= l(j, t) * l(j, t) * d(t);
            if (dj == 0.0 || !std::isfinite(dj)) return false;
            d(j) = dj;
            for (int i = j + 1; i < m; ++i) {
                double v = k(i, j);
                for (int t = 0; t < j; ++t) v -= l(i, t) * l(j, t) * d(t);
                l(i, j) = v / dj;
            }
        }
        return true;
    }

    VectorXd solve(const VectorXd& b) const {
        VectorXd z = l.triangularView<Eigen::UnitLower>().solve(b);
        z.array() /= d.array();
        return l.transpose().triangularView<Eigen::UnitUpper>().solve(z);
    }
};

struct KktSolver {
    // Small systems go through the regularized augmented (quasi-definite)
    // form, which certifies tighter tolerances than the normal equations;
    // large systems use the normal equations for speed.
    static constexpr int kAugmentedLimit = 1500;

    Eigen::LLT<MatrixXd> llt;
    MatrixXd nm;
    Ldl ldl;
    bool augmented = false;
    bool ok = false;
    const Internal* in = nullptr;
    const Scaling* sc = nullptr;

    void factor(const Internal& in_, const Scaling& sc_) {
        in = &in_;
        sc = &sc_;
        const int n = in->n, p = static_cast<int>(in->a.rows());
        augmented = (n + p <= kAugmentedLimit) && p > 0;
        if (augmented) {
            MatrixXd k = MatrixXd::Zero(n + p, n + p);
            // -(H^{-1}) block
            for (int i : in->nonneg) k(i, i) = -1.0 / sc->h_diag(i);
            for (size_t kb = 0; kb < in->psd.size(); ++kb) {
                const auto& b = in->psd[kb];
                k.block(b.offset, b.offset, b.d * b.d, b.d * b.d) =
                    -materialize_h_block(sc->ginv[kb]);
            }
            const MatrixXd ad = MatrixXd(in->a);
            k.block(n, 0, p, n) = ad;
            k.block(0, n, n, p) = ad.transpose();
            const double scale = 1.0 + k.diagonal().cwiseAbs().maxCoeff();
            const double delta = 1e-12 * scale;
            for (int i = 0; i < n; ++i) k(i, i) -= delta;
            for (int i = n; i < n + p; ++i) k(i, i) += delta;
            ok = ldl.compute(k);
            if (ok) return;
            augmented = false;  // fall through to normal equations
        }
        nm = assemble_normal(*in, *sc);
        if (nm.rows() == 0) {
            ok = true;
            return;
        }
        double reg = 0.0;
        for (int attempt = 0; attempt < 6; ++attempt) {
            MatrixXd m = nm;
            if (reg > 0.0) m.diagonal().array() += reg;
            llt.compute(m);
            if (llt.info() == Eigen::Success) {
                ok = true;
                return;
            }
            reg = (reg == 0.0) ? 1e-12 * (1.0 + nm.diagonal().maxCoeff()) : reg * 100.0;
        }
        ok = false;
    }

    // Solve  -H^{-1} dx + A' dy = f,  A dx = g.
    void solve(const VectorXd& f, const VectorXd& g, VectorXd& dx, VectorXd& dy) const {
        const int n = in->n, p = static_cast<int>(in->a.rows());
        if (augmented) {
            VectorXd rhs(n + p);
            rhs.head(n) = f;
            rhs.tail(p) = g;
            VectorXd z = ldl.solve(rhs);
            // refine against the unregularized operator
            const double scale = 1.0 + rhs.norm();
            for (int pass = 0; pass < 3; ++pass) {
                VectorXd kz(n + p);
                kz.head(n) = -apply_hinv(*in, *sc, z.head(n)) +
                             VectorXd(in->a.transpose() * z.tail(p));
                kz.tail(p) = in->a * z.head(n);
                const VectorXd resid = rhs - kz;
                if (resid.norm() <= 1e-15 * scale) break;
                z += ldl.solve(resid);
            }
            dx = z.head(n);
            dy = z.tail(p);
            return;
        }
        const VectorXd hf = apply_h(*in, *sc, f);
        if (nm.rows() == 0) {
            dy = VectorXd(0);
            dx = -hf;
            return;
        }
        const VectorXd rhs = g + in->a * hf;
        dy = llt.solve(rhs);
        const double scale = 1.0 + rhs.norm();
        for (int pass = 0; pass < 4; ++pass) {
            const VectorXd resid = rhs - nm * dy;
            if (resid.norm() <= 1e-15 * scale) break;
            dy += llt.solve(resid);
        }
        dx = apply_h(*in, *sc, VectorXd(in->a.transpose() * dy)) - hf;
    }
};

double step_to_boundary_nonneg(const Internal& in, const VectorXd& z, const VectorXd& dz) {
    double a = std::numeric_limits<double>::infinity();
    for (int i : in.nonneg)
        if (dz(i) < 0.0) a = std::min(a, -z(i) / dz(i));
    return a;
}

double step_to_boundary_psd(const VectorXd& lambda, const MatrixXcd& scaled_dir) {
    const Eigen::VectorXd li = lambda.cwiseSqrt().cwiseInverse();
    MatrixXcd m = li.asDiagonal() * scaled_dir * li.asDiagonal();
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    const double emin = es.eigenvalues().minCoeff();
    if (emin >= 0.0) return std::numeric_limits<double>::infinity();
    return -1.0 / emin;
}

struct Directions {
    VectorXd dx, dy, ds;
    double dtau = 0, dkappa = 0;
};

}  // namespace

ConicSolution solve(const ConicProgram& prog, const SolveOptions& opts) {
    Internal in = build_internal(prog, 1e-12);

    ConicSolution sol;
    sol.x = VectorXd::Zero(in.n_prog);
    sol.s = VectorXd::Zero(in.n_prog);
    sol.y = VectorXd::Zero(prog.rhs.size());

    if (in.trivially_infeasible) {
        sol.status = SolveStatus::infeasible;
        return sol;
    }

    const int p = static_cast<int>(in.a.rows());

    VectorXd x = VectorXd::Zero(in.n), s = VectorXd::Zero(in.n);
    for (int i : in.nonneg) x(i) = s(i) = 1.0;
    for (const auto& b : in.psd) {
        set_block(x, b, MatrixXcd::Identity(b.d, b.d));
        set_block(s, b, MatrixXcd::Identity(b.d, b.d));
    }
    VectorXd y = VectorXd::Zero(p);
    double tau = 1.0, kappa = 1.0;

    const double bnorm = 1.0 + in.b.norm();
    const double cnorm = 1.0 + in.c.norm();

    // Maps a reduced dual vector (kept rows, scaled) back to the full
    // pre-reduction row space.
    auto expand_y = [&](const VectorXd& yk) {
        const int pw = (in.free_pos.empty()) ? static_cast<int>(in.b_orig.size())
                                             : static_cast<int>(in.q2.cols());
        VectorXd full = VectorXd::Zero(pw);
        for (size_t i = 0; i < in.kept_rows.size(); ++i)
            full(in.kept_rows[i]) = yk(static_cast<Eigen::Index>(i)) / in.row_scale(static_cast<Eigen::Index>(i));
        return full;
    };

    auto finish_point = [&](SolveStatus st, int iters, double relgap) {
        sol.status = st;
        sol.iterations = iters;
        sol.gap = relgap;
        const double t = (tau > 0) ? tau : 1.0;
        VectorXd xo = x / t, so = s / t;
        for (int i = 0; i < in.n; ++i) {
            sol.x(in.cone_pos[static_cast<size_t>(i)]) = xo(i);
            sol.s(in.cone_pos[static_cast<size_t>(i)]) = so(i);
        }
        VectorXd yfull = expand_y(y / t);
        if (in.free_pos.empty()) {
            sol.y = yfull;
        } else {
            VectorXd yprog = in.q2 * yfull;
            if (st == SolveStatus::optimal) {
                VectorXd w = in.r11.triangularView<Eigen::Upper>().transpose().solve(in.c1);
                yprog += in.q1 * w;
                // recover eliminated coordinates:
                // x1 = R11^{-1} Q1' (b - A_c x_c)
                VectorXd xc(in.n);
                for (int i = 0; i < in.n; ++i) xc(i) = xo(i);
                VectorXd resid = in.b_orig - in.a_cone_orig * xc;
                VectorXd x1 = in.r11.triangularView<Eigen::Upper>().solve(
                    VectorXd(in.q1.transpose() * resid));
                for (int i = 0; i < in.free_rank; ++i)
                    sol.x(in.free_pos[static_cast<size_t>(in.free_perm[static_cast<size_t>(i)])]) =
                        x1(i);
            }
            sol.y = yprog;
        }
        sol.objective = in.c.dot(xo) + in.obj_shift;
    };

    int iter = 0;
    for (; iter < opts.max_iter; ++iter) {
        const VectorXd rd = in.c * tau - in.a.transpose() * y - s;
        const VectorXd rp = in.b * tau - in.a * x;
        const double cx = in.c.dot(x), by = in.b.dot(y);
        const double rg = by - cx - kappa;
        const double mu = (x.dot(s) + tau * kappa) / (in.nu + 1.0);

        const double pobj = cx / tau + in.obj_shift, dobj = by / tau + in.obj_shift;
        const double pres = (in.a * (x / tau) - in.b).norm() / bnorm;
        const double dres = (in.c - in.a.transpose() * (y / tau) - s / tau).norm() / cnorm;
        const double cgap = x.dot(s) / (tau * tau);
        const double relgap = cgap / std::max(1.0, 0.5 * (std::abs(pobj) + std::abs(dobj)));
        if (opts.record_trace) sol.trace.push_back({pobj, dobj, pres, dres});

        if (pres <= opts.feas_tol && dres <= opts.feas_tol && relgap <= opts.gap_tol) {
            if (in.null_objective) {
                finish_point(SolveStatus::unbounded, iter, relgap);
            } else {
                finish_point(SolveStatus::optimal, iter, relgap);
            }
            return sol;
        }

        if (by > 0.0) {
            const double r = (in.a.transpose() * y + s).norm() / by;
            if (r <= opts.feas_tol && tau <= 1e-6 * std::max(1.0, kappa)) {
                finish_point(SolveStatus::infeasible, iter, relgap);
                VectorXd cert = expand_y(y / by);
                sol.y = in.free_pos.empty() ? cert : VectorXd(in.q2 * cert);
                return sol;
            }
        }
        if (cx < 0.0) {
            const double r = (in.a * x).norm() / (-cx);
            if (r <= opts.feas_tol && tau <= 1e-6 * std::max(1.0, kappa)) {
                finish_point(SolveStatus::unbounded, iter, relgap);
                return sol;
            }
        }

        Scaling sc;
        try {
            sc = compute_scaling(in, x, s);
        } catch (const std::runtime_error&) {
            break;
        }
        KktSolver kkt;
        kkt.factor(in, sc);
        if (!kkt.ok) break;

        VectorXd u1x(in.n), u1y(p);
        kkt.solve(in.c, in.b, u1x, u1y);

        auto solve_direction = [&](const VectorXd& dsbar, double dkbar, double eta,
                                   Directions& dir) {
            VectorXd lam_div = VectorXd::Zero(in.n);
            for (int i : in.nonneg) lam_div(i) = dsbar(i) / sc.lambda_nn(i);
            for (size_t k = 0; k < in.psd.size(); ++k) {
                const auto& b = in.psd[k];
                const MatrixXcd dm = block_mat(dsbar, b);
                const VectorXd& lam = sc.lambda_psd[k];
                MatrixXcd u(b.d, b.d);
                for (int r = 0; r < b.d; ++r)
                    for (int c = 0; c < b.d; ++c) u(r, c) = 2.0 * dm(r, c) / (lam(r) + lam(c));
                set_block(lam_div, b, u);
            }
            VectorXd ds_hat = VectorXd::Zero(in.n);
            for (int i : in.nonneg) ds_hat(i) = lam_div(i) / std::sqrt(sc.h_diag(i));
            for (size_t k = 0; k < in.psd.size(); ++k) {
                const auto& b = in.psd[k];
                const MatrixXcd u = block_mat(lam_div, b);
                set_block(ds_hat, b, sc.rinv[k].adjoint() * u * sc.rinv[k]);
            }

            VectorXd u2x(in.n), u2y(p);
            kkt.solve(VectorXd(eta * rd - ds_hat), VectorXd(eta * rp), u2x, u2y);

            const double denom = in.c.dot(u1x) - in.b.dot(u1y) - kappa / tau;
            const double num = eta * rg - in.c.dot(u2x) + in.b.dot(u2y) - dkbar / tau;
            dir.dtau = num / denom;
            dir.dx = u2x + dir.dtau * u1x;
            dir.dy = u2y + dir.dtau * u1y;
            // Recover ds from the linearized dual equation; this keeps dual
            // feasibility accurate even when the scaling is ill-conditioned.
            dir.ds = eta * rd + in.c * dir.dtau - in.a.transpose() * dir.dy;
            dir.dkappa = (dkbar - kappa * dir.dtau) / tau;
        };

        auto max_step = [&](const Directions& dir) {
            double a = std::min(step_to_boundary_nonneg(in, x, dir.dx),
                                step_to_boundary_nonneg(in, s, dir.ds));
            for (size_t k = 0; k < in.psd.size(); ++k) {
                const auto& b = in.psd[k];
                const MatrixXcd sdx = sc.rinv[k] * block_mat(dir.dx, b) * sc.rinv[k].adjoint();
                const MatrixXcd sds = sc.r[k].adjoint() * block_mat(dir.ds, b) * sc.r[k];
                a = std::min(a, step_to_boundary_psd(sc.lambda_psd[k], sdx));
                a = std::min(a, step_to_boundary_psd(sc.lambda_psd[k], sds));
            }
            if (dir.dtau < 0.0) a = std::min(a, -tau / dir.dtau);
            if (dir.dkappa < 0.0) a = std::min(a, -kappa / dir.dkappa);
            return a;
        };

        VectorXd dsbar_aff = VectorXd::Zero(in.n);
        for (int i : in.nonneg) dsbar_aff(i) = -sc.lambda_nn(i) * sc.lambda_nn(i);
        for (size_t k = 0; k < in.psd.size(); ++k) {
            const auto& b = in.psd[k];
            MatrixXcd lsq = sc.lambda_psd[k].cwiseProduct(sc.lambda_psd[k]).asDiagonal();
            set_block(dsbar_aff, b, MatrixXcd(-lsq));
        }
        Directions aff;
        solve_direction(dsbar_aff, -tau * kappa, 1.0, aff);
        const double alpha_aff = std::min(1.0, max_step(aff));
        const double mu_aff = ((x + alpha_aff * aff.dx).dot(s + alpha_aff * aff.ds) +
                               (tau + alpha_aff * aff.dtau) * (kappa + alpha_aff * aff.dkappa)) /
                              (in.nu + 1.0);
        double sigma = std::pow(std::max(0.0, mu_aff / mu), 3.0);
        sigma = std::min(1.0, std::max(0.0, sigma));

        VectorXd dsbar = dsbar_aff;
        for (int i : in.nonneg) {
            const double wdx = aff.dx(i) / std::sqrt(sc.h_diag(i));
            const double wds = aff.ds(i) * std::sqrt(sc.h_diag(i));
            dsbar(i) += sigma * mu - wdx * wds;
        }
        for (size_t k = 0; k < in.psd.size(); ++k) {
            const auto& b = in.psd[k];
            const MatrixXcd wdx = sc.rinv[k] * block_mat(aff.dx, b) * sc.rinv[k].adjoint();
            const MatrixXcd wds = sc.r[k].adjoint() * block_mat(aff.ds, b) * sc.r[k];
            const MatrixXcd jord = 0.5 * (wdx * wds + wds * wdx);
            MatrixXcd cur = block_mat(dsbar, b);
            cur += sigma * mu * MatrixXcd::Identity(b.d, b.d) - jord;
            set_block(dsbar, b, cur);
        }
        const double dkbar = sigma * mu - tau * kappa - aff.dtau * aff.dkappa;

        Directions dir;
        solve_direction(dsbar, dkbar, 1.0 - sigma, dir);
        double alpha = std::min(1.0, 0.99 * max_step(dir));

        // The second-order term can blow up at badly centered iterates; if
        // the corrected step collapsed relative to the predictor, fall back
        // to the plain centering target.
        if (alpha < 0.2 * std::min(1.0, alpha_aff)) {
            VectorXd dsbar_c = dsbar_aff;
            for (int i : in.nonneg) dsbar_c(i) += sigma * mu;
            for (size_t k = 0; k < in.psd.size(); ++k) {
                const auto& b = in.psd[k];
                MatrixXcd cur = block_mat(dsbar_c, b);
                cur += sigma * mu * MatrixXcd::Identity(b.d, b.d);
                set_block(dsbar_c, b, cur);
            }
            Directions fallback;
            solve_direction(dsbar_c, sigma * mu - tau * kappa, 1.0 - sigma, fallback);
            const double alpha_fb = std::min(1.0, 0.99 * max_step(fallback));
            if (alpha_fb > alpha) {
                dir = fallback;
                alpha = alpha_fb;
            }
        }
        if (!std::isfinite(alpha) || alpha <= 1e-13) break;

        x += alpha * dir.dx;
        y += alpha * dir.dy;
        s += alpha * dir.ds;
        tau += alpha * dir.dtau;
        kappa += alpha * dir.dkappa;
    }

    const double by = in.b.dot(y), cx = in.c.dot(x);
    if (tau <= 1e-8 * std::max(1.0, kappa)) {
        if (by > 0.0 && (in.a.transpose() * y + s).norm() / by <= std::sqrt(opts.feas_tol)) {
            finish_point(SolveStatus::infeasible, iter, 0.0);
            return sol;
        }
        if (cx < 0.0 && (in.a * x).norm() / (-cx) <= std::sqrt(opts.feas_tol)) {
            finish_point(SolveStatus::unbounded, iter, 0.0);
            return sol;
        }
    }
    finish_point(SolveStatus::max_iter, iter, 0.0);
    return sol;
}

}  // namespace vqrd::conic
