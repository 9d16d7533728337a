#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vqrd::qcore {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct InvariantError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// ---------------------------------------------------------------------------
// Tensor-factor index juggling. All operators live on an ordered list of
// factors; composite index = i0*(d1*d2*...) + i1*(d2*...) + ..., i.e. the
// first factor is the most significant digit, consistent with kron().

Mat tensor_permute(const Mat& x, const std::vector<int>& dims, const std::vector<int>& perm);
Mat partial_trace_dims(const Mat& x, const std::vector<int>& dims, const std::vector<int>& keep);
Mat partial_transpose_dims(const Mat& x, const std::vector<int>& dims,
                           const std::vector<int>& transposed);

// ---------------------------------------------------------------------------
// Domain types

class HermitianOperator {
public:
    explicit HermitianOperator(Mat m, double herm_tol = 1e-10);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Mat& mat() const { return m_; }
    double herm_tol() const { return herm_tol_; }

private:
    Mat m_;
    double herm_tol_;
};

class DensityMatrix {
public:
    explicit DensityMatrix(HermitianOperator op, double trace_tol = 1e-9,
                           double psd_tol = 1e-9);
    explicit DensityMatrix(Mat m, double trace_tol = 1e-9, double psd_tol = 1e-9)
        : DensityMatrix(HermitianOperator(std::move(m)), trace_tol, psd_tol) {}

    int dim() const { return op_.dim(); }
    const Mat& mat() const { return op_.mat(); }
    const HermitianOperator& op() const { return op_; }

private:
    HermitianOperator op_;
};

// Choi operator, unnormalized: J = sum_ij |i><j| (x) E(|i><j|), input
// factor first. A channel additionally satisfies Tr_out J = I_in.
class ChoiOperator {
public:
    ChoiOperator(int dim_in, int dim_out, HermitianOperator mat, bool require_tp = false,
                 double psd_tol = 1e-9);
    ChoiOperator(int dim_in, int dim_out, Mat m, bool require_tp = false, double psd_tol = 1e-9)
        : ChoiOperator(dim_in, dim_out, HermitianOperator(std::move(m)), require_tp, psd_tol) {}

    int dim_in() const { return dim_in_; }
    int dim_out() const { return dim_out_; }
    const Mat& mat() const { return mat_.mat(); }

    bool is_trace_preserving(double tol = 1e-9) const;

private:
    int dim_in_;
    int dim_out_;
    HermitianOperator mat_;
};

// Multi-step process as a Choi matrix. Factor layout is chronological:
// [in_1, out_1, in_2, out_2, ...].
class CombChoi {
public:
    CombChoi(std::vector<std::pair<int, int>> wires, HermitianOperator mat,
             double psd_tol = 1e-9, double causal_tol = 1e-8, bool validate = true);

    int steps() const { return static_cast<int>(wires_.size()); }
    const std::vector<std::pair<int, int>>& wires() const { return wires_; }
    const Mat& mat() const { return mat_.mat(); }
    std::vector<int> factor_dims() const;

private:
    std::vector<std::pair<int, int>> wires_;
    HermitianOperator mat_;
};

class SchmidtVector {
public:
    explicit SchmidtVector(Eigen::VectorXd coeffs, double norm_tol = 1e-9);
    const Eigen::VectorXd& coeffs() const { return c_; }

private:
    Eigen::VectorXd c_;
};

// ---------------------------------------------------------------------------
// Operations

Mat kron(const Mat& a, const Mat& b);
HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);
Mat kron_pow(const Mat& a, int n);

HermitianOperator partial_trace(const HermitianOperator& x, const std::vector<int>& dims,
                                const std::vector<int>& keep);
// side: 0 transposes the left factor, 1 the right factor.
HermitianOperator partial_transpose(const HermitianOperator& x, std::pair<int, int> dims,
                                    int side = 1);

// Eigen-decomposition of (X + X^dag)/2; shared by the norm and PSD checks.
Eigen::VectorXd hermitian_eigenvalues(const Mat& x);
double trace_norm(const HermitianOperator& x);
double trace_norm(const Mat& x);
double trace_distance(const Mat& a, const Mat& b);  // (1/2)||a-b||_1

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

ChoiOperator link_product(const ChoiOperator& first, const ChoiOperator& then);
DensityMatrix apply_channel(const ChoiOperator& e, const DensityMatrix& rho);
Mat apply_channel_mat(const ChoiOperator& e, const Mat& rho);

// Choi of E' where E'(rho) = E(U rho U^dag)  (U applied before E).
Mat choi_pre_unitary(const Mat& choi, int din, int dout, const Mat& u);
// Choi of E' where E'(rho) = V E(rho) V^dag  (V applied after E).
Mat choi_post_unitary(const Mat& choi, int din, int dout, const Mat& v);

Mat choi_of_unitary(const Mat& u);
Mat choi_of_kraus(const std::vector<Mat>& kraus, int din, int dout);
// Column-major superoperator: vec(E(rho)) = S vec(rho).
Mat choi_to_superop(const Mat& choi, int din, int dout);
Mat superop_to_choi(const Mat& s, int din, int dout);

SchmidtVector schmidt(const HermitianOperator& psi, std::pair<int, int> dims,
                      double purity_tol = 1e-9);

// ---------------------------------------------------------------------------
// Standard states, gates, channels

Mat identity(int d);
Mat ket0();
Mat ket1();
Vec ket_plus();
Vec ket_t();        // (|0> + e^{i pi/4}|1>)/sqrt(2)
Vec ket_strange();  // qutrit (|1> - |2>)/sqrt(2)
Vec ket_bell();     // (|00> + |11>)/sqrt(2)

Mat pauli_x();
Mat pauli_y();
Mat pauli_z();
Mat hadamard();
Mat phase_s();  // diag(1, i)
// CNOT on two qubits; control is the given factor (0 = first).
Mat cnot(int control);
// The per-step interaction used by the dephasing-comb construction:
// CNOT(system -> environment) followed by CNOT(environment -> system),
// on factors [system, environment].
Mat cnot_pair();

Mat projector(const Vec& ket);

DensityMatrix bell_state();
DensityMatrix plus_state();
DensityMatrix t_state();
DensityMatrix tbar_state();
DensityMatrix strange_state();
DensityMatrix maximally_mixed(int d);

// k Bell pairs arranged as a dA (x) dB bipartite state with dA = dB = 2^k
// (all A factors first, then all B factors).
Mat bell_pairs_bipartite(int k);
// (1-alpha) Phi^k + alpha (I - Phi^k)/(4^k - 1), same A|B layout.
DensityMatrix isotropic_state(double alpha, int k);
// p T + (1-p) I/2 with p the Bloch coordinate along the T axis.
DensityMatrix dephased_t_state(double p);

ChoiOperator identity_choi(int d);
ChoiOperator depolarizing_choi(int d, double p);       // (1-p) rho + p I/d
ChoiOperator dephasing_choi(double p);                 // (1-p) rho + p Z rho Z
ChoiOperator amplitude_damping_choi(double gamma);
ChoiOperator replacement_choi(double keep_prob);       // p rho + (1-p)|0><0|

// Qutrit Weyl-Heisenberg / Clifford generators.
Mat qutrit_shift();
Mat qutrit_clock();
Mat qutrit_fourier();
Mat qutrit_phase();

}  // namespace vqrd::qcore
