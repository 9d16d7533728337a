#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <iosfwd>
#include <string>
#include <vector>

namespace vqrd::conic {

// Standard-form conic program over real variables:
//     min c'x   s.t.  A x = b,  x in K,
// K an ordered product of free segments, nonnegative segments, and
// Hermitian-PSD blocks. A PSD block of (complex) dimension d occupies d*d
// real coordinates: the diagonal, then sqrt(2)*Re and sqrt(2)*Im of each
// strict upper-triangle entry, column by column. This coordinate map is an
// isometry: <hvec(A), hvec(B)> = Tr(A B) for Hermitian A, B.

enum class ConeKind { Free, Nonneg, Psd };

struct ConeBlock {
    ConeKind kind;
    int dim;  // coordinate count for Free/Nonneg; complex matrix dim for Psd

    int coords() const { return kind == ConeKind::Psd ? dim * dim : dim; }
};

struct ConeSignature {
    std::vector<ConeBlock> blocks;
    int total_coords() const;
};

struct ConicProgram {
    Eigen::VectorXd objective;
    Eigen::SparseMatrix<double> eq;  // p x n
    Eigen::VectorXd rhs;
    ConeSignature cones;
    std::string name;

    // Objective/triplet/cone text dump, for reproducing solver inputs.
    void dump(std::ostream& os) const;
};

enum class SolveStatus { optimal, infeasible, unbounded, max_iter };

struct SolveOptions {
    double gap_tol = 1e-8;
    double feas_tol = 1e-8;
    int max_iter = 200;
    bool record_trace = false;
};

struct IterateStats {
    double pobj, dobj, pres, dres;
};

struct ConicSolution {
    SolveStatus status = SolveStatus::max_iter;
    Eigen::VectorXd x;  // primal, original coordinate layout
    Eigen::VectorXd y;  // dual of the equality system (original rows)
    Eigen::VectorXd s;  // dual slack, original coordinate layout
    double objective = 0.0;
    double gap = 0.0;  // relative duality gap at termination
    int iterations = 0;
    // per-iteration objective/residual log when record_trace is set
    std::vector<IterateStats> trace;
};

ConicSolution solve(const ConicProgram& prog, const SolveOptions& opts = {});

// hvec coordinate map for Hermitian matrices (see ConeSignature docs).
Eigen::VectorXd hvec(const Eigen::MatrixXcd& x);
Eigen::MatrixXcd hvec_inverse(const Eigen::VectorXd& v, int d);

// Real symmetric embedding [[Re, -Im], [Im, Re]]; eigenvalues of the
// embedding are those of the input, doubled in multiplicity.
Eigen::MatrixXd hermitian_embed(const Eigen::MatrixXcd& x);

const char* status_name(SolveStatus s);

}  // namespace vqrd::conic
