#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vqrd/conic.hpp"
#include "vqrd/qcore.hpp"

namespace vqrd::conic {

// Symbolic layer over ConicProgram: Hermitian matrix variables, scalar
// variables, and affine matrix expressions built from linear maps. Rows are
// generated by evaluating each map on the hvec basis of its variable.

struct VarRef {
    int id = -1;
    ConeKind kind = ConeKind::Free;
    int dim = 0;     // complex matrix dimension (1 for scalars)
    int offset = 0;  // coordinate offset
    int coords() const { return kind == ConeKind::Psd || dim > 1 ? dim * dim : 1; }
};

using LinMap = std::function<qcore::Mat(const qcore::Mat&)>;

class MatExpr {
public:
    struct Term {
        VarRef var;
        LinMap map;  // matrix var: X -> contribution
    };
    struct ScalarTerm {
        VarRef var;
        qcore::Mat coeff;  // contribution = value * coeff
    };

    MatExpr() = default;
    explicit MatExpr(int d) : d_(d), constant_(qcore::Mat::Zero(d, d)) {}

    static MatExpr constant(const qcore::Mat& c);
    static MatExpr of(const VarRef& v);                       // identity map
    static MatExpr mapped(const VarRef& v, int out_dim, LinMap f);
    static MatExpr scalar(const VarRef& v, const qcore::Mat& coeff);
    static MatExpr scalar(const VarRef& v);  // 1x1 expression, coeff 1

    int dim() const { return d_; }
    const qcore::Mat& constant_part() const { return constant_; }
    const std::vector<Term>& terms() const { return terms_; }
    const std::vector<ScalarTerm>& scalar_terms() const { return sterms_; }

    MatExpr operator+(const MatExpr& o) const;
    MatExpr operator-(const MatExpr& o) const;
    MatExpr operator-() const;
    MatExpr operator*(double a) const;

private:
    int d_ = 0;
    qcore::Mat constant_;
    std::vector<Term> terms_;
    std::vector<ScalarTerm> sterms_;
};

inline MatExpr operator*(double a, const MatExpr& e) { return e * a; }

// Scalar expression Tr(C X_v).
MatExpr trace_inner(const qcore::Mat& c, const VarRef& v);

struct BuiltSolution {
    SolveStatus status = SolveStatus::max_iter;
    double objective = 0.0;
    double gap = 0.0;
    int iterations = 0;
    Eigen::VectorXd x;
    Eigen::VectorXd y;
    std::vector<IterateStats> trace;

    qcore::Mat matrix_of(const VarRef& v) const;
    double scalar_of(const VarRef& v) const;
    bool optimal() const { return status == SolveStatus::optimal; }
};

class ProgramBuilder {
public:
    explicit ProgramBuilder(std::string name = "") : name_(std::move(name)) {}

    VarRef psd_matrix(int d);
    VarRef free_hermitian(int d);
    VarRef nonneg_scalar();
    VarRef free_scalar();

    // expr == 0 (Hermitian-valued expression, d*d real rows)
    void add_zero(const MatExpr& e);
    // expr is PSD: introduces a slack block and ties it to the expression.
    VarRef add_psd(const MatExpr& e);
    // scalar expression comparisons
    void add_eq(const MatExpr& e, double rhs);
    void add_geq(const MatExpr& e, double rhs);
    void add_leq(const MatExpr& e, double rhs);

    void minimize(const MatExpr& scalar_expr);
    void maximize(const MatExpr& scalar_expr);

    ConicProgram build() const;
    BuiltSolution solve(const SolveOptions& opts = {}) const;

private:
    void append_rows(const MatExpr& e);

    std::string name_;
    std::vector<ConeBlock> blocks_;
    std::vector<VarRef> vars_;
    int n_ = 0;
    int rows_ = 0;
    std::vector<Eigen::Triplet<double>> trips_;
    std::vector<double> rhs_;
    Eigen::VectorXd obj_;        // resized lazily in build()
    std::vector<std::pair<int, double>> obj_entries_;
    double obj_const_ = 0.0;
    double obj_sign_ = 1.0;  // -1 when maximizing
};

}  // namespace vqrd::conic
