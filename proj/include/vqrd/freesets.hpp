#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vqrd/builder.hpp"
#include "vqrd/qcore.hpp"

namespace vqrd::freesets {

// A declared free set F of states, in one of three shapes:
//   Diagonal(d)   states diagonal in the computational basis
//   Ppt(da, db)   states with positive partial transpose across da|db
//   Polytope(V)   convex hull of a finite list of pure states
struct FreeSetSpec {
    enum class Kind { Diagonal, Ppt, Polytope };

    Kind kind;
    int dim;
    std::pair<int, int> bipartition{0, 0};
    std::vector<qcore::Vec> vertices;
    std::string description;

    static FreeSetSpec diagonal(int d);
    static FreeSetSpec ppt(int da, int db);
    static FreeSetSpec polytope(std::vector<qcore::Vec> verts, std::string desc);
};

// Stabilizer vertex lists used by the magic programs.
const std::vector<qcore::Vec>& qubit_stabilizer_states();     // 6 states
const std::vector<qcore::Vec>& two_qubit_stabilizer_states(); // 60 states
const std::vector<qcore::Vec>& qutrit_stabilizer_states();    // 12 states
FreeSetSpec stabilizer_polytope(int qudit_dim, int copies);

// Adds constraints equivalent to  max_{sigma in F} Tr(Q sigma) <= c.
// Diagonal: every diagonal entry of Q bounded by c. Polytope: one inequality
// per vertex. Ppt: auxiliary R >= 0 with c I - Q - R^Gamma >= 0 (exact; the
// Lagrangian dual of the overlap maximization).
void encode_sup_overlap_leq(conic::ProgramBuilder& b, const conic::MatExpr& q,
                            const conic::MatExpr& c, const FreeSetSpec& f);

// Equality variant, for sets on which the overlap is forced constant
// (Diagonal and Polytope only).
void encode_overlap_eq(conic::ProgramBuilder& b, const conic::MatExpr& q,
                       const conic::MatExpr& c, const FreeSetSpec& f);

// Direct maximization of Tr(Q sigma) over F; independent of the encoding
// above and used to cross-check it.
double max_overlap_direct(const qcore::HermitianOperator& q, const FreeSetSpec& f,
                          const conic::SolveOptions& opts = {});

// max_{sigma in F} <psi| sigma |psi> for a pure target.
double free_fidelity(const qcore::HermitianOperator& psi, const FreeSetSpec& f,
                     const conic::SolveOptions& opts = {});

// Conic resource measures. standard_robustness and base_norm return +inf
// when F cannot absorb the argument.
double generalized_robustness(const qcore::DensityMatrix& rho, const FreeSetSpec& f,
                              const conic::SolveOptions& opts = {});
double standard_robustness(const qcore::DensityMatrix& rho, const FreeSetSpec& f,
                           const conic::SolveOptions& opts = {});
double weight(const qcore::DensityMatrix& rho, const FreeSetSpec& f,
              const conic::SolveOptions& opts = {});
double base_norm(const qcore::HermitianOperator& x, const FreeSetSpec& f,
                 const conic::SolveOptions& opts = {});

// An element of cone(F) as a builder expression, together with its trace.
struct ConeElement {
    conic::MatExpr element;
    conic::MatExpr trace;
};
ConeElement add_cone_element(conic::ProgramBuilder& b, const FreeSetSpec& f);

// Scalar expression times a fixed matrix (utility for mu/k * I patterns).
conic::MatExpr scale_matrix(const conic::MatExpr& scalar_expr, const qcore::Mat& m);

}  // namespace vqrd::freesets
