#include "vqrd/builder.hpp"

#include <stdexcept>

namespace vqrd::conic {

using qcore::Mat;

MatExpr MatExpr::constant(const Mat& c) {
    MatExpr e(static_cast<int>(c.rows()));
    e.constant_ = c;
    return e;
}

MatExpr MatExpr::of(const VarRef& v) {
    MatExpr e(v.dim);
    e.terms_.push_back({v, [](const Mat& x) { return x; }});
    return e;
}

MatExpr MatExpr::mapped(const VarRef& v, int out_dim, LinMap f) {
    MatExpr e(out_dim);
    e.terms_.push_back({v, std::move(f)});
    return e;
}

MatExpr MatExpr::scalar(const VarRef& v, const Mat& coeff) {
    MatExpr e(static_cast<int>(coeff.rows()));
    e.sterms_.push_back({v, coeff});
    return e;
}

MatExpr MatExpr::scalar(const VarRef& v) { return scalar(v, Mat::Identity(1, 1)); }

MatExpr MatExpr::operator+(const MatExpr& o) const {
    if (d_ != o.d_) throw qcore::DimensionError("MatExpr: dimension mismatch in +");
    MatExpr e = *this;
    e.constant_ += o.constant_;
    e.terms_.insert(e.terms_.end(), o.terms_.begin(), o.terms_.end());
    e.sterms_.insert(e.sterms_.end(), o.sterms_.begin(), o.sterms_.end());
    return e;
}

MatExpr MatExpr::operator-() const { return *this * -1.0; }

MatExpr MatExpr::operator-(const MatExpr& o) const { return *this + (-o); }

MatExpr MatExpr::operator*(double a) const {
    MatExpr e = *this;
    e.constant_ *= a;
    for (auto& t : e.terms_) {
        LinMap inner = t.map;
        t.map = [inner, a](const Mat& x) { return Mat(a * inner(x)); };
    }
    for (auto& t : e.sterms_) t.coeff *= a;
    return e;
}

MatExpr trace_inner(const Mat& c, const VarRef& v) {
    Mat cc = c;
    return MatExpr::mapped(v, 1, [cc](const Mat& x) {
        Mat r(1, 1);
        r(0, 0) = (cc * x).trace();
        return r;
    });
}

Mat BuiltSolution::matrix_of(const VarRef& v) const {
    return hvec_inverse(x.segment(v.offset, v.coords()), v.dim);
}

double BuiltSolution::scalar_of(const VarRef& v) const { return x(v.offset); }

VarRef ProgramBuilder::psd_matrix(int d) {
    VarRef v{static_cast<int>(vars_.size()), ConeKind::Psd, d, n_};
    blocks_.push_back({ConeKind::Psd, d});
    n_ += d * d;
    vars_.push_back(v);
    return v;
}

VarRef ProgramBuilder::free_hermitian(int d) {
    VarRef v{static_cast<int>(vars_.size()), ConeKind::Free, d, n_};
    blocks_.push_back({ConeKind::Free, d * d});
    n_ += d * d;
    vars_.push_back(v);
    return v;
}

VarRef ProgramBuilder::nonneg_scalar() {
    VarRef v{static_cast<int>(vars_.size()), ConeKind::Nonneg, 1, n_};
    blocks_.push_back({ConeKind::Nonneg, 1});
    n_ += 1;
    vars_.push_back(v);
    return v;
}

VarRef ProgramBuilder::free_scalar() {
    VarRef v{static_cast<int>(vars_.size()), ConeKind::Free, 1, n_};
    blocks_.push_back({ConeKind::Free, 1});
    n_ += 1;
    vars_.push_back(v);
    return v;
}

void ProgramBuilder::append_rows(const MatExpr& e) {
    const int d = e.dim();
    const int nrows = d * d;
    const int row0 = rows_;

    for (const auto& t : e.terms()) {
        const int nv = t.var.coords();
        Eigen::VectorXd basis = Eigen::VectorXd::Zero(nv);
        for (int c = 0; c < nv; ++c) {
            basis(c) = 1.0;
            const Mat img = t.map(hvec_inverse(basis, t.var.dim));
            basis(c) = 0.0;
            if ((img - img.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + img.cwiseAbs().maxCoeff()))
                throw std::logic_error("ProgramBuilder: non-Hermitian expression");
            const Eigen::VectorXd col = hvec(img);
            for (int r = 0; r < nrows; ++r)
                if (std::abs(col(r)) > 1e-14)
                    trips_.emplace_back(row0 + r, t.var.offset + c, col(r));
        }
    }
    for (const auto& t : e.scalar_terms()) {
        const Eigen::VectorXd col = hvec(t.coeff);
        for (int r = 0; r < nrows; ++r)
            if (std::abs(col(r)) > 1e-14) trips_.emplace_back(row0 + r, t.var.offset, col(r));
    }
    const Eigen::VectorXd cst = hvec(e.constant_part());
    for (int r = 0; r < nrows; ++r) rhs_.push_back(-cst(r));
    rows_ += nrows;
}

void ProgramBuilder::add_zero(const MatExpr& e) { append_rows(e); }

VarRef ProgramBuilder::add_psd(const MatExpr& e) {
    VarRef s = psd_matrix(e.dim());
    add_zero(e - MatExpr::of(s));
    return s;
}

void ProgramBuilder::add_eq(const MatExpr& e, double rhs) {
    if (e.dim() != 1) throw qcore::DimensionError("add_eq: scalar expression expected");
    append_rows(e - MatExpr::constant(Mat::Constant(1, 1, rhs)));
}

void ProgramBuilder::add_geq(const MatExpr& e, double rhs) {
    VarRef t = nonneg_scalar();
    add_eq(e - MatExpr::scalar(t), rhs);
}

void ProgramBuilder::add_leq(const MatExpr& e, double rhs) {
    VarRef t = nonneg_scalar();
    add_eq(e + MatExpr::scalar(t), rhs);
}

void ProgramBuilder::minimize(const MatExpr& e) {
    if (e.dim() != 1) throw qcore::DimensionError("minimize: scalar expression expected");
    obj_entries_.clear();
    for (const auto& t : e.terms()) {
        const int nv = t.var.coords();
        Eigen::VectorXd basis = Eigen::VectorXd::Zero(nv);
        for (int c = 0; c < nv; ++c) {
            basis(c) = 1.0;
            const Mat img = t.map(hvec_inverse(basis, t.var.dim));
            basis(c) = 0.0;
            const double v = img(0, 0).real();
            if (std::abs(v) > 1e-14) obj_entries_.emplace_back(t.var.offset + c, v);
        }
    }
    for (const auto& t : e.scalar_terms())
        obj_entries_.emplace_back(t.var.offset, t.coeff(0, 0).real());
    obj_const_ = e.constant_part()(0, 0).real();
    obj_sign_ = 1.0;
}

void ProgramBuilder::maximize(const MatExpr& e) {
    minimize(e * -1.0);
    obj_sign_ = -1.0;
}

ConicProgram ProgramBuilder::build() const {
    ConicProgram p;
    p.name = name_;
    p.cones.blocks = blocks_;
    p.objective = Eigen::VectorXd::Zero(n_);
    for (const auto& [i, v] : obj_entries_) p.objective(i) += v;
    p.eq.resize(rows_, n_);
    p.eq.setFromTriplets(trips_.begin(), trips_.end());
    p.rhs = Eigen::Map<const Eigen::VectorXd>(rhs_.data(), static_cast<Eigen::Index>(rhs_.size()));
    return p;
}

BuiltSolution ProgramBuilder::solve(const SolveOptions& opts) const {
    const ConicProgram p = build();
    const ConicSolution s = conic::solve(p, opts);
    BuiltSolution out;
    out.status = s.status;
    out.gap = s.gap;
    out.iterations = s.iterations;
    out.x = s.x;
    out.y = s.y;
    out.trace = s.trace;
    out.objective = obj_sign_ * (s.objective + obj_const_ * 1.0);
    if (obj_sign_ < 0 && s.status == SolveStatus::unbounded) out.status = SolveStatus::unbounded;
    return out;
}

}  // namespace vqrd::conic
