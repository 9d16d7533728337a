#include "vqrd/qcore.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <numeric>

namespace vqrd::qcore {

namespace {

int product(const std::vector<int>& dims) {
    int p = 1;
    for (int d : dims) p *= d;
    return p;
}

void decode(int index, const std::vector<int>& dims, std::vector<int>& digits) {
    for (int f = static_cast<int>(dims.size()) - 1; f >= 0; --f) {
        digits[static_cast<size_t>(f)] = index % dims[static_cast<size_t>(f)];
        index /= dims[static_cast<size_t>(f)];
    }
}

int encode(const std::vector<int>& digits, const std::vector<int>& dims) {
    int index = 0;
    for (size_t f = 0; f < dims.size(); ++f) index = index * dims[f] + digits[f];
    return index;
}

Mat symmetrize(const Mat& x) { return 0.5 * (x + x.adjoint()); }

}  // namespace

Mat tensor_permute(const Mat& x, const std::vector<int>& dims, const std::vector<int>& perm) {
    const int D = product(dims);
    if (x.rows() != D || x.cols() != D) throw DimensionError("tensor_permute: dims mismatch");
    if (perm.size() != dims.size()) throw DimensionError("tensor_permute: bad permutation");
    std::vector<int> new_dims(dims.size());
    for (size_t f = 0; f < perm.size(); ++f) new_dims[f] = dims[static_cast<size_t>(perm[f])];

    const size_t k = dims.size();
    std::vector<int> row(k), col(k), prow(k), pcol(k);
    Mat out(D, D);
    for (int r = 0; r < D; ++r) {
        decode(r, new_dims, prow);
        for (size_t f = 0; f < k; ++f) row[static_cast<size_t>(perm[f])] = prow[f];
        const int orow = encode(row, dims);
        for (int c = 0; c < D; ++c) {
            decode(c, new_dims, pcol);
            for (size_t f = 0; f < k; ++f) col[static_cast<size_t>(perm[f])] = pcol[f];
            out(r, c) = x(orow, encode(col, dims));
        }
    }
    return out;
}

Mat partial_trace_dims(const Mat& x, const std::vector<int>& dims, const std::vector<int>& keep) {
    const int D = product(dims);
    if (x.rows() != D || x.cols() != D) throw DimensionError("partial_trace: dims mismatch");
    std::vector<bool> kept(dims.size(), false);
    for (int f : keep) {
        if (f < 0 || f >= static_cast<int>(dims.size()))
            throw DimensionError("partial_trace: bad factor index");
        kept[static_cast<size_t>(f)] = true;
    }
    std::vector<int> keep_dims, trace_dims;
    for (size_t f = 0; f < dims.size(); ++f)
        (kept[f] ? keep_dims : trace_dims).push_back(dims[f]);
    const int Dk = product(keep_dims);
    const int Dt = product(trace_dims);

    const size_t k = dims.size();
    std::vector<int> rd(k), cd(k), krow(keep_dims.size()), kcol(keep_dims.size()),
        trow(trace_dims.size());
    Mat out = Mat::Zero(Dk, Dk);
    for (int kr = 0; kr < Dk; ++kr) {
        decode(kr, keep_dims, krow);
        for (int kc = 0; kc < Dk; ++kc) {
            decode(kc, keep_dims, kcol);
            Cplx acc = 0.0;
            for (int t = 0; t < Dt; ++t) {
                decode(t, trace_dims, trow);
                size_t ik = 0, it = 0;
                for (size_t f = 0; f < k; ++f) {
                    if (kept[f]) {
                        rd[f] = krow[ik];
                        cd[f] = kcol[ik];
                        ++ik;
                    } else {
                        rd[f] = trow[it];
                        cd[f] = trow[it];
                        ++it;
                    }
                }
                acc += x(encode(rd, dims), encode(cd, dims));
            }
            out(kr, kc) = acc;
        }
    }
    return out;
}

Mat partial_transpose_dims(const Mat& x, const std::vector<int>& dims,
                           const std::vector<int>& transposed) {
    const int D = product(dims);
    if (x.rows() != D || x.cols() != D) throw DimensionError("partial_transpose: dims mismatch");
    std::vector<bool> flip(dims.size(), false);
    for (int f : transposed) {
        if (f < 0 || f >= static_cast<int>(dims.size()))
            throw DimensionError("partial_transpose: bad factor index");
        flip[static_cast<size_t>(f)] = true;
    }
    const size_t k = dims.size();
    std::vector<int> rd(k), cd(k);
    Mat out(D, D);
    for (int r = 0; r < D; ++r) {
        decode(r, dims, rd);
        for (int c = 0; c < D; ++c) {
            decode(c, dims, cd);
            std::vector<int> nr = rd, nc = cd;
            for (size_t f = 0; f < k; ++f)
                if (flip[f]) std::swap(nr[f], nc[f]);
            out(encode(nr, dims), encode(nc, dims)) = x(r, c);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

HermitianOperator::HermitianOperator(Mat m, double herm_tol) : m_(std::move(m)), herm_tol_(herm_tol) {
    if (m_.rows() != m_.cols() || m_.rows() == 0)
        throw DimensionError("HermitianOperator: matrix must be square and nonempty");
    const double dev = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
    if (dev > herm_tol_) throw InvariantError("HermitianOperator: not Hermitian within tolerance");
    m_ = symmetrize(m_);
}

DensityMatrix::DensityMatrix(HermitianOperator op, double trace_tol, double psd_tol)
    : op_(std::move(op)) {
    if (std::abs(op_.mat().trace().real() - 1.0) > trace_tol ||
        std::abs(op_.mat().trace().imag()) > trace_tol)
        throw InvariantError("DensityMatrix: trace must be 1");
    if (hermitian_eigenvalues(op_.mat()).minCoeff() < -psd_tol)
        throw InvariantError("DensityMatrix: negative eigenvalue");
}

ChoiOperator::ChoiOperator(int dim_in, int dim_out, HermitianOperator mat, bool require_tp,
                           double psd_tol)
    : dim_in_(dim_in), dim_out_(dim_out), mat_(std::move(mat)) {
    if (dim_in <= 0 || dim_out <= 0 || mat_.dim() != dim_in * dim_out)
        throw DimensionError("ChoiOperator: dim_in*dim_out mismatch");
    if (hermitian_eigenvalues(mat_.mat()).minCoeff() < -psd_tol)
        throw InvariantError("ChoiOperator: not completely positive");
    if (require_tp && !is_trace_preserving())
        throw InvariantError("ChoiOperator: not trace preserving");
}

bool ChoiOperator::is_trace_preserving(double tol) const {
    const Mat tr_out = partial_trace_dims(mat_.mat(), {dim_in_, dim_out_}, {0});
    return (tr_out - Mat::Identity(dim_in_, dim_in_)).cwiseAbs().maxCoeff() <= tol;
}

std::vector<int> CombChoi::factor_dims() const {
    std::vector<int> dims;
    for (auto [din, dout] : wires_) {
        dims.push_back(din);
        dims.push_back(dout);
    }
    return dims;
}

namespace {

// Recursive causality: tracing the last output wire must leave
// I_{in_L} (x) (valid (L-1)-step comb).
void check_causal(const Mat& j, const std::vector<std::pair<int, int>>& wires, double tol) {
    const int L = static_cast<int>(wires.size());
    std::vector<int> dims;
    for (auto [a, b] : wires) {
        dims.push_back(a);
        dims.push_back(b);
    }
    if (L == 0) return;
    std::vector<int> keep(dims.size() - 1);
    std::iota(keep.begin(), keep.end(), 0);
    const Mat traced = partial_trace_dims(j, dims, keep);
    const int din = wires.back().first;
    // Reduced comb over the first L-1 steps.
    std::vector<int> keep_head(dims.size() - 2);
    std::iota(keep_head.begin(), keep_head.end(), 0);
    std::vector<int> head_dims(dims.begin(), dims.end() - 1);
    Mat head = partial_trace_dims(traced, head_dims, keep_head) / static_cast<double>(din);
    Mat expected = kron(head, Mat::Identity(din, din));
    // traced has factor order [head..., in_L]; expected built as head (x) I matches.
    if ((traced - expected).cwiseAbs().maxCoeff() > tol)
        throw InvariantError("CombChoi: causality violated");
    if (L > 1) check_causal(head, {wires.begin(), wires.end() - 1}, tol);
}

}  // namespace

CombChoi::CombChoi(std::vector<std::pair<int, int>> wires, HermitianOperator mat, double psd_tol,
                   double causal_tol, bool validate)
    : wires_(std::move(wires)), mat_(std::move(mat)) {
    if (wires_.empty()) throw DimensionError("CombChoi: need at least one step");
    int D = 1;
    for (auto [a, b] : wires_) D *= a * b;
    if (mat_.dim() != D) throw DimensionError("CombChoi: wire dims mismatch");
    if (validate) {
        if (hermitian_eigenvalues(mat_.mat()).minCoeff() < -psd_tol)
            throw InvariantError("CombChoi: not PSD");
        check_causal(mat_.mat(), wires_, causal_tol);
    }
}

SchmidtVector::SchmidtVector(Eigen::VectorXd coeffs, double norm_tol) : c_(std::move(coeffs)) {
    for (Eigen::Index i = 0; i + 1 < c_.size(); ++i)
        if (c_(i) + 1e-12 < c_(i + 1)) throw InvariantError("SchmidtVector: not sorted");
    if (c_.size() == 0 || c_.minCoeff() < -1e-12)
        throw InvariantError("SchmidtVector: negative coefficient");
    if (std::abs(c_.squaredNorm() - 1.0) > norm_tol)
        throw InvariantError("SchmidtVector: not normalized");
}

// ---------------------------------------------------------------------------

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
    return HermitianOperator(kron(a.mat(), b.mat()),
                             std::max(a.herm_tol(), b.herm_tol()));
}

Mat kron_pow(const Mat& a, int n) {
    Mat out = Mat::Identity(1, 1);
    for (int i = 0; i < n; ++i) out = kron(out, a);
    return out;
}

HermitianOperator partial_trace(const HermitianOperator& x, const std::vector<int>& dims,
                                const std::vector<int>& keep) {
    return HermitianOperator(partial_trace_dims(x.mat(), dims, keep), x.herm_tol());
}

HermitianOperator partial_transpose(const HermitianOperator& x, std::pair<int, int> dims,
                                    int side) {
    if (dims.first * dims.second != x.dim())
        throw DimensionError("partial_transpose: bipartition mismatch");
    return HermitianOperator(
        partial_transpose_dims(x.mat(), {dims.first, dims.second}, {side}), x.herm_tol());
}

Eigen::VectorXd hermitian_eigenvalues(const Mat& x) {
    Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(x), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double trace_norm(const Mat& x) { return hermitian_eigenvalues(x).cwiseAbs().sum(); }
double trace_norm(const HermitianOperator& x) { return trace_norm(x.mat()); }
double trace_distance(const Mat& a, const Mat& b) { return 0.5 * trace_norm(a - b); }

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) throw DimensionError("fidelity: dims differ");
    Eigen::SelfAdjointEigenSolver<Mat> es(rho.mat());
    const Mat sqrt_rho = es.eigenvectors() *
                         es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                         es.eigenvectors().adjoint();
    const Mat m = sqrt_rho * sigma.mat() * sqrt_rho;
    Eigen::VectorXd ev = hermitian_eigenvalues(m).cwiseMax(0.0);
    const double f = ev.cwiseSqrt().sum();
    return std::min(1.0, f * f);
}

ChoiOperator link_product(const ChoiOperator& first, const ChoiOperator& then) {
    if (first.dim_out() != then.dim_in())
        throw DimensionError("link_product: shared wire dimensions disagree");
    const int a = first.dim_in(), b = first.dim_out(), c = then.dim_out();
    // factors [A, B, C]; contract B.
    Mat big = kron(partial_transpose_dims(first.mat(), {a, b}, {1}), Mat::Identity(c, c));
    Mat big2 = kron(Mat::Identity(a, a), then.mat());
    Mat res = partial_trace_dims(Mat(big * big2), {a, b, c}, {0, 2});
    return ChoiOperator(a, c, res);
}

Mat apply_channel_mat(const ChoiOperator& e, const Mat& rho) {
    if (rho.rows() != e.dim_in()) throw DimensionError("apply_channel: input dim mismatch");
    Mat big = kron(rho.transpose(), Mat::Identity(e.dim_out(), e.dim_out()));
    return partial_trace_dims(Mat(big * e.mat()), {e.dim_in(), e.dim_out()}, {1});
}

DensityMatrix apply_channel(const ChoiOperator& e, const DensityMatrix& rho) {
    return DensityMatrix(apply_channel_mat(e, rho.mat()));
}

Mat choi_pre_unitary(const Mat& choi, int din, int dout, const Mat& u) {
    Mat x = kron(u.transpose(), Mat::Identity(dout, dout));
    return x * choi * x.adjoint();
}

Mat choi_post_unitary(const Mat& choi, int din, int dout, const Mat& v) {
    Mat x = kron(Mat::Identity(din, din), v);
    return x * choi * x.adjoint();
}

Mat choi_of_unitary(const Mat& u) {
    std::vector<Mat> k{u};
    return choi_of_kraus(k, static_cast<int>(u.cols()), static_cast<int>(u.rows()));
}

Mat choi_of_kraus(const std::vector<Mat>& kraus, int din, int dout) {
    Mat j = Mat::Zero(din * dout, din * dout);
    for (const Mat& k : kraus) {
        // vec of K over |i>_in |K i>_out: J += sum_ij |i><j| (x) K|i><j|K^dag
        Mat v(din * dout, 1);
        for (int i = 0; i < din; ++i) v.block(i * dout, 0, dout, 1) = k.col(i);
        j += v * v.adjoint();
    }
    return j;
}

Mat choi_to_superop(const Mat& choi, int din, int dout) {
    // S[(k,l),(i,j)] = <k| E(|i><j|) |l> = J[(i,k),(j,l)], column-major vec.
    Mat s(dout * dout, din * din);
    for (int i = 0; i < din; ++i)
        for (int j = 0; j < din; ++j)
            for (int k = 0; k < dout; ++k)
                for (int l = 0; l < dout; ++l)
                    s(l * dout + k, j * din + i) = choi(i * dout + k, j * dout + l);
    return s;
}

Mat superop_to_choi(const Mat& s, int din, int dout) {
    Mat j(din * dout, din * dout);
    for (int i = 0; i < din; ++i)
        for (int jj = 0; jj < din; ++jj)
            for (int k = 0; k < dout; ++k)
                for (int l = 0; l < dout; ++l)
                    j(i * dout + k, jj * dout + l) = s(l * dout + k, jj * din + i);
    return j;
}

SchmidtVector schmidt(const HermitianOperator& psi, std::pair<int, int> dims, double purity_tol) {
    if (dims.first * dims.second != psi.dim()) throw DimensionError("schmidt: bipartition mismatch");
    Eigen::SelfAdjointEigenSolver<Mat> es(psi.mat());
    const Eigen::VectorXd ev = es.eigenvalues();
    if (std::abs(ev.maxCoeff() - 1.0) > purity_tol || ev.cwiseAbs().sum() - ev.maxCoeff() > purity_tol)
        throw InvariantError("schmidt: input is not pure");
    Eigen::Index top;
    ev.maxCoeff(&top);
    const Vec ket = es.eigenvectors().col(top);
    Mat coeff(dims.first, dims.second);
    for (int a = 0; a < dims.first; ++a)
        for (int b = 0; b < dims.second; ++b) coeff(a, b) = ket(a * dims.second + b);
    Eigen::JacobiSVD<Mat> svd(coeff);
    Eigen::VectorXd s = svd.singularValues();
    Eigen::VectorXd full = Eigen::VectorXd::Zero(std::min(dims.first, dims.second));
    full.head(s.size()) = s;
    return SchmidtVector(full);
}

// ---------------------------------------------------------------------------

Mat identity(int d) { return Mat::Identity(d, d); }

Mat ket0() {
    Mat k(2, 1);
    k << 1, 0;
    return k;
}
Mat ket1() {
    Mat k(2, 1);
    k << 0, 1;
    return k;
}
Vec ket_plus() {
    Vec k(2);
    k << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return k;
}
Vec ket_t() {
    Vec k(2);
    k << 1.0 / std::sqrt(2.0), std::exp(Cplx(0, M_PI / 4)) / std::sqrt(2.0);
    return k;
}
Vec ket_strange() {
    Vec k(3);
    k << 0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    return k;
}
Vec ket_bell() {
    Vec k(4);
    k << 1.0 / std::sqrt(2.0), 0, 0, 1.0 / std::sqrt(2.0);
    return k;
}

Mat pauli_x() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
Mat pauli_y() {
    Mat m(2, 2);
    m << 0, Cplx(0, -1), Cplx(0, 1), 0;
    return m;
}
Mat pauli_z() {
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}
Mat hadamard() {
    Mat m(2, 2);
    m << 1, 1, 1, -1;
    return m / std::sqrt(2.0);
}
Mat phase_s() {
    Mat m(2, 2);
    m << 1, 0, 0, Cplx(0, 1);
    return m;
}

Mat cnot(int control) {
    Mat m = Mat::Zero(4, 4);
    if (control == 0) {
        m(0, 0) = m(1, 1) = 1;
        m(2, 3) = m(3, 2) = 1;
    } else {
        m(0, 0) = m(2, 2) = 1;
        m(1, 3) = m(3, 1) = 1;
    }
    return m;
}

Mat cnot_pair() { return cnot(1) * cnot(0); }

Mat projector(const Vec& ket) { return ket * ket.adjoint(); }

DensityMatrix bell_state() { return DensityMatrix(projector(ket_bell())); }
DensityMatrix plus_state() { return DensityMatrix(projector(ket_plus())); }
DensityMatrix t_state() { return DensityMatrix(projector(ket_t())); }
DensityMatrix tbar_state() {
    Vec k = pauli_z() * ket_t();
    return DensityMatrix(projector(k));
}
DensityMatrix strange_state() { return DensityMatrix(projector(ket_strange())); }
DensityMatrix maximally_mixed(int d) {
    return DensityMatrix(Mat(Mat::Identity(d, d) / static_cast<double>(d)));
}

Mat bell_pairs_bipartite(int k) {
    Mat phi = projector(ket_bell());
    Mat out = kron_pow(phi, k);
    // [A1 B1 A2 B2 ...] -> [A1 A2 ... B1 B2 ...]
    std::vector<int> dims(2 * static_cast<size_t>(k), 2), perm;
    for (int i = 0; i < k; ++i) perm.push_back(2 * i);
    for (int i = 0; i < k; ++i) perm.push_back(2 * i + 1);
    return tensor_permute(out, dims, perm);
}

DensityMatrix isotropic_state(double alpha, int k) {
    if (alpha < 0.0 || alpha > 1.0) throw std::out_of_range("isotropic_state: alpha in [0,1]");
    if (k < 1) throw std::out_of_range("isotropic_state: k >= 1");
    const int D = 1 << (2 * k);
    Mat phi = bell_pairs_bipartite(k);
    Mat m = (1.0 - alpha) * phi + alpha * (Mat::Identity(D, D) - phi) / static_cast<double>(D - 1);
    return DensityMatrix(m);
}

DensityMatrix dephased_t_state(double p) {
    if (p < -1.0 || p > 1.0) throw std::out_of_range("dephased_t_state: p in [-1,1]");
    // p is the Bloch coordinate along the T axis:
    // p T + (1-p) I/2 == (1+p)/2 T + (1-p)/2 Tbar.
    Mat m = p * t_state().mat() + (1.0 - p) * Mat::Identity(2, 2) / 2.0;
    return DensityMatrix(m);
}

ChoiOperator identity_choi(int d) { return ChoiOperator(d, d, choi_of_unitary(identity(d))); }

ChoiOperator depolarizing_choi(int d, double p) {
    if (p < 0.0 || p > 1.0) throw std::out_of_range("depolarizing_choi: p in [0,1]");
    Mat j_id = choi_of_unitary(identity(d));
    Mat j_mix = kron(Mat::Identity(d, d), Mat::Identity(d, d) / static_cast<double>(d));
    return ChoiOperator(d, d, Mat((1.0 - p) * j_id + p * j_mix));
}

ChoiOperator dephasing_choi(double p) {
    if (p < 0.0 || p > 1.0) throw std::out_of_range("dephasing_choi: p in [0,1]");
    Mat j = (1.0 - p) * choi_of_unitary(identity(2)) + p * choi_of_unitary(pauli_z());
    return ChoiOperator(2, 2, j);
}

ChoiOperator amplitude_damping_choi(double gamma) {
    if (gamma < 0.0 || gamma > 1.0) throw std::out_of_range("amplitude_damping_choi: gamma in [0,1]");
    Mat a0 = Mat::Zero(2, 2), a1 = Mat::Zero(2, 2);
    a0(0, 0) = 1;
    a0(1, 1) = std::sqrt(1.0 - gamma);
    a1(0, 1) = std::sqrt(gamma);
    return ChoiOperator(2, 2, choi_of_kraus({a0, a1}, 2, 2));
}

ChoiOperator replacement_choi(double keep_prob) {
    if (keep_prob < 0.0 || keep_prob > 1.0)
        throw std::out_of_range("replacement_choi: keep probability in [0,1]");
    Mat j_id = choi_of_unitary(identity(2));
    Mat j_rep = kron(Mat::Identity(2, 2), projector(Vec(ket0())));
    return ChoiOperator(2, 2, Mat(keep_prob * j_id + (1.0 - keep_prob) * j_rep));
}

Mat qutrit_shift() {
    Mat m = Mat::Zero(3, 3);
    m(1, 0) = m(2, 1) = m(0, 2) = 1;
    return m;
}

Mat qutrit_clock() {
    const Cplx w = std::exp(Cplx(0, 2.0 * M_PI / 3.0));
    Mat m = Mat::Zero(3, 3);
    m(0, 0) = 1;
    m(1, 1) = w;
    m(2, 2) = w * w;
    return m;
}

Mat qutrit_fourier() {
    const Cplx w = std::exp(Cplx(0, 2.0 * M_PI / 3.0));
    Mat m(3, 3);
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) m(j, k) = std::pow(w, j * k) / std::sqrt(3.0);
    return m;
}

Mat qutrit_phase() {
    const Cplx w = std::exp(Cplx(0, 2.0 * M_PI / 3.0));
    Mat m = Mat::Zero(3, 3);
    m(0, 0) = 1;
    m(1, 1) = 1;
    m(2, 2) = w;
    return m;
}

}  // namespace vqrd::qcore
