#include "qecbound/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace qecbound {

namespace {

std::size_t pow2(std::size_t r) { return std::size_t{1} << r; }

void check_labels(const std::vector<std::string> &labels, std::size_t n_factors) {
    if (labels.size() != n_factors) {
        throw std::invalid_argument("state has " + std::to_string(n_factors) + " factors but " +
                                    std::to_string(labels.size()) + " labels");
    }
    std::set<std::string> uniq(labels.begin(), labels.end());
    if (uniq.size() != labels.size()) {
        throw std::invalid_argument("state labels must be unique");
    }
}

void check_probability(double p, const char *what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(std::string(what) + " must lie in [0,1], got " + std::to_string(p));
    }
}

}  // namespace

MultipartiteState::MultipartiteState(ComplexMatrix m, std::vector<std::string> labels)
    : m_(std::move(m)), labels_(std::move(labels)) {
    check_labels(labels_, m_.dims().size());
    if (!m_.is_hermitian(kHermTol)) {
        throw std::domain_error("density operator is not Hermitian");
    }
    const double tr = trace();
    if (tr > 1.0 + kHermTol) {
        throw std::domain_error("density operator has trace " + std::to_string(tr) + " > 1");
    }
    const RealVec ev = herm_eigvals(m_);
    if (ev.size() > 0 && ev.minCoeff() < -kPsdClip) {
        throw std::domain_error("density operator has negative eigenvalue " + std::to_string(ev.minCoeff()));
    }
}

MultipartiteState::MultipartiteState(Trusted, ComplexMatrix m, std::vector<std::string> labels)
    : m_(std::move(m)), labels_(std::move(labels)) {
    check_labels(labels_, m_.dims().size());
}

std::size_t MultipartiteState::index_of(std::string_view label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
        throw std::invalid_argument("unknown subsystem label '" + std::string(label) + "'");
    }
    return static_cast<std::size_t>(it - labels_.begin());
}

MultipartiteState MultipartiteState::reduce(std::span<const std::string> keep) const {
    std::vector<std::size_t> idx;
    for (const auto &l : keep) {
        idx.push_back(index_of(l));
    }
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) {
        throw std::invalid_argument("reduce: repeated label");
    }
    std::vector<std::string> kept;
    for (std::size_t i : idx) {
        kept.push_back(labels_[i]);
    }
    return {Trusted{}, partial_trace(m_, idx), std::move(kept)};
}

MultipartiteState MultipartiteState::reduce(std::initializer_list<std::string> keep) const {
    return reduce(std::span<const std::string>(keep.begin(), keep.size()));
}

MultipartiteState MultipartiteState::reorder(std::span<const std::string> order) const {
    std::vector<std::size_t> idx;
    for (const auto &l : order) {
        idx.push_back(index_of(l));
    }
    return {Trusted{}, permute_factors(m_, idx), std::vector<std::string>(order.begin(), order.end())};
}

MultipartiteState MultipartiteState::reorder(std::initializer_list<std::string> order) const {
    return reorder(std::span<const std::string>(order.begin(), order.size()));
}

MultipartiteState MultipartiteState::relabel(std::vector<std::string> labels) const {
    return {Trusted{}, m_, std::move(labels)};
}

MultipartiteState tensor(const MultipartiteState &a, const MultipartiteState &b) {
    std::vector<std::string> labels = a.labels_;
    labels.insert(labels.end(), b.labels_.begin(), b.labels_.end());
    return {MultipartiteState::Trusted{}, kron(a.m_, b.m_), std::move(labels)};
}

QuantumChannel::QuantumChannel(std::vector<Mat> kraus, double tp_tol) : kraus_(std::move(kraus)) {
    if (kraus_.empty()) {
        throw std::invalid_argument("channel needs at least one Kraus operator");
    }
    d_out_ = static_cast<std::size_t>(kraus_.front().rows());
    d_in_ = static_cast<std::size_t>(kraus_.front().cols());
    for (const auto &k : kraus_) {
        if (static_cast<std::size_t>(k.rows()) != d_out_ || static_cast<std::size_t>(k.cols()) != d_in_) {
            throw std::invalid_argument("Kraus operators must share one shape");
        }
    }
    if (tp_defect() > tp_tol) {
        throw std::domain_error("Kraus operators are not trace preserving (defect " + std::to_string(tp_defect()) +
                                ")");
    }
}

Mat QuantumChannel::apply(const Mat &rho) const {
    if (static_cast<std::size_t>(rho.rows()) != d_in_) {
        throw std::invalid_argument("channel input dimension mismatch");
    }
    Mat out = Mat::Zero(static_cast<Eigen::Index>(d_out_), static_cast<Eigen::Index>(d_out_));
    for (const auto &k : kraus_) {
        out += k * rho * k.adjoint();
    }
    return out;
}

double QuantumChannel::tp_defect() const {
    const auto d = static_cast<Eigen::Index>(d_in_);
    Mat s = Mat::Zero(d, d);
    for (const auto &k : kraus_) {
        s += k.adjoint() * k;
    }
    return (s - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
}

ComplexMatrix pauli_x() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return ComplexMatrix(m);
}

ComplexMatrix pauli_y() {
    Mat m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return ComplexMatrix(m);
}

ComplexMatrix pauli_z() { return ComplexMatrix::diag({1.0, -1.0}); }

MultipartiteState max_entangled(std::size_t r, std::string a, std::string b) {
    const std::size_t d = pow2(r);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d * d));
    for (std::size_t i = 0; i < d; ++i) {
        v(static_cast<Eigen::Index>(i * d + i)) = 1.0 / std::sqrt(static_cast<double>(d));
    }
    return {ComplexMatrix(Mat(v * v.adjoint()), {d, d}), {std::move(a), std::move(b)}};
}

MultipartiteState completely_mixed(std::size_t r, std::string label) {
    const std::size_t d = pow2(r);
    return {ComplexMatrix::identity(d) * cplx(1.0 / static_cast<double>(d)), {std::move(label)}};
}

MultipartiteState classical_corr(std::size_t c_bits, std::string m, std::string r) {
    const std::size_t d = pow2(c_bits);
    Mat out = Mat::Zero(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(d * d));
    for (std::size_t j = 0; j < d; ++j) {
        out(static_cast<Eigen::Index>(j * d + j), static_cast<Eigen::Index>(j * d + j)) = 1.0 / static_cast<double>(d);
    }
    return {ComplexMatrix(std::move(out), {d, d}), {std::move(m), std::move(r)}};
}

MultipartiteState hybrid_source(std::size_t c_bits, std::size_t q_qubits) {
    return tensor(classical_corr(c_bits, "Mc", "Rc"), max_entangled(q_qubits, "Mq", "Rq"));
}

QuantumChannel identity_channel(std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    return QuantumChannel({Mat::Identity(n, n)});
}

QuantumChannel dephasing(double p) {
    check_probability(p, "dephasing p");
    Mat k0 = std::sqrt(1.0 - p / 2.0) * Mat::Identity(2, 2);
    Mat k1 = std::sqrt(p / 2.0) * pauli_z().mat();
    return QuantumChannel({k0, k1});
}

QuantumChannel amplitude_damping(double gamma) {
    check_probability(gamma, "amplitude damping gamma");
    Mat k0 = Mat::Zero(2, 2);
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - gamma);
    Mat k1 = Mat::Zero(2, 2);
    k1(0, 1) = std::sqrt(gamma);
    return QuantumChannel({k0, k1});
}

QuantumChannel tensor_channel(std::span<const QuantumChannel> chs) {
    if (chs.empty()) {
        throw std::invalid_argument("tensor_channel needs at least one channel");
    }
    std::vector<Mat> acc = chs.front().kraus();
    for (std::size_t c = 1; c < chs.size(); ++c) {
        std::vector<Mat> next;
        next.reserve(acc.size() * chs[c].kraus().size());
        for (const auto &a : acc) {
            for (const auto &b : chs[c].kraus()) {
                Mat k(a.rows() * b.rows(), a.cols() * b.cols());
                for (Eigen::Index i = 0; i < a.rows(); ++i) {
                    for (Eigen::Index j = 0; j < a.cols(); ++j) {
                        k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
                    }
                }
                next.push_back(std::move(k));
            }
        }
        acc = std::move(next);
    }
    return QuantumChannel(std::move(acc));
}

QuantumChannel tensor_channel(std::initializer_list<QuantumChannel> chs) {
    return tensor_channel(std::span<const QuantumChannel>(chs.begin(), chs.size()));
}

ComplexMatrix heisenberg_hamiltonian(const HeisenbergCouplings &j) {
    const ComplexMatrix id = ComplexMatrix::identity(2);
    const std::array<ComplexMatrix, 3> pauli = {pauli_x(), pauli_y(), pauli_z()};
    ComplexMatrix h = ComplexMatrix::zero({2, 2, 2});
    for (std::size_t a = 0; a < 3; ++a) {
        const ComplexMatrix left = kron(kron(pauli[a], id), pauli[a]);
        const ComplexMatrix right = kron(kron(id, pauli[a]), pauli[a]);
        h = h - left * cplx(j.j_left[a]) - right * cplx(j.j_right[a]);
    }
    return h;
}

QuantumChannel heisenberg_channel(double p, double t, const HeisenbergCouplings &j) {
    if (!(p >= 0.5 && p <= 1.0)) {
        throw std::invalid_argument("Boltzmann factor p must lie in [0.5,1], got " + std::to_string(p));
    }
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("evolution time must be finite and nonnegative");
    }
    for (double x : j.j_left) {
        if (!std::isfinite(x)) throw std::invalid_argument("couplings must be finite");
    }
    for (double x : j.j_right) {
        if (!std::isfinite(x)) throw std::invalid_argument("couplings must be finite");
    }
    const Mat u = unitary_from_hamiltonian(heisenberg_hamiltonian(j), t).mat();
    // |up> = |0>, |down> = |1>.
    const std::array<double, 2> env_pop = {1.0 - p, p};
    std::vector<Mat> kraus;
    for (int e = 0; e < 2; ++e) {
        if (env_pop[static_cast<std::size_t>(e)] < 1e-12) {
            continue;
        }
        const double w = std::sqrt(env_pop[static_cast<std::size_t>(e)]);
        for (int f = 0; f < 2; ++f) {
            Mat k(4, 4);
            for (int so = 0; so < 4; ++so) {
                for (int si = 0; si < 4; ++si) {
                    k(so, si) = w * u(so * 2 + f, si * 2 + e);
                }
            }
            kraus.push_back(std::move(k));
        }
    }
    return QuantumChannel(std::move(kraus));
}

MultipartiteState choi_from_channel(const QuantumChannel &ch) {
    const std::size_t di = ch.d_in();
    const std::size_t d_o = ch.d_out();
    const auto n = static_cast<Eigen::Index>(di * d_o);
    Mat j = Mat::Zero(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(di));
    for (const auto &k : ch.kraus()) {
        Eigen::VectorXcd v(n);
        for (std::size_t i = 0; i < di; ++i) {
            for (std::size_t o = 0; o < d_o; ++o) {
                v(static_cast<Eigen::Index>(i * d_o + o)) =
                    norm * k(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(i));
            }
        }
        j += v * v.adjoint();
    }
    return {MultipartiteState::Trusted{}, ComplexMatrix(0.5 * (j + j.adjoint()), {di, d_o}), {"A", "B"}};
}

QuantumChannel channel_from_choi(const MultipartiteState &rho, std::size_t d_in, std::size_t d_out) {
    if (rho.dim() != d_in * d_out) {
        throw std::invalid_argument("channel_from_choi: state dimension does not match d_in * d_out");
    }
    const ComplexMatrix m = rho.matrix().with_dims({d_in, d_out});
    const ComplexMatrix marginal = partial_trace(m, {0});
    const ComplexMatrix mixed = ComplexMatrix::identity(d_in) * cplx(1.0 / static_cast<double>(d_in));
    if (marginal.max_abs_diff(mixed) > 1e-8) {
        throw std::domain_error("channel_from_choi: input marginal is not completely mixed");
    }
    const EigResult e = herm_eig(m * cplx(static_cast<double>(d_in)));
    std::vector<Mat> kraus;
    for (Eigen::Index c = 0; c < e.values.size(); ++c) {
        if (e.values(c) < 1e-12) {
            continue;
        }
        const double s = std::sqrt(e.values(c));
        Mat k(static_cast<Eigen::Index>(d_out), static_cast<Eigen::Index>(d_in));
        for (std::size_t i = 0; i < d_in; ++i) {
            for (std::size_t o = 0; o < d_out; ++o) {
                k(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(i)) =
                    s * e.vectors(static_cast<Eigen::Index>(i * d_out + o), c);
            }
        }
        kraus.push_back(std::move(k));
    }
    return QuantumChannel(std::move(kraus), 1e-8 * static_cast<double>(d_in));
}

Mat apply_choi(const MultipartiteState &rho, std::size_t d_in, const Mat &sigma) {
    if (rho.dim() % d_in != 0 || static_cast<std::size_t>(sigma.rows()) != d_in) {
        throw std::invalid_argument("apply_choi: dimension mismatch");
    }
    const std::size_t d_out = rho.dim() / d_in;
    const ComplexMatrix lhs = kron(ComplexMatrix(Mat(sigma.transpose())), ComplexMatrix::identity(d_out));
    const ComplexMatrix prod = (lhs * rho.matrix().with_dims({d_in, d_out})).with_dims({d_in, d_out});
    return partial_trace(prod, {1}).mat() * cplx(static_cast<double>(d_in));
}

MultipartiteState apply_channel(const QuantumChannel &ch, const MultipartiteState &state, std::string_view target) {
    const std::size_t t = state.index_of(target);
    const auto &dims = state.matrix().dims();
    if (dims[t] != ch.d_in()) {
        throw std::invalid_argument("apply_channel: factor '" + std::string(target) + "' has dimension " +
                                    std::to_string(dims[t]) + ", channel expects " + std::to_string(ch.d_in()));
    }
    // Move the target factor last, act blockwise, move it back.
    std::vector<std::size_t> order;
    for (std::size_t f = 0; f < dims.size(); ++f) {
        if (f != t) order.push_back(f);
    }
    order.push_back(t);
    const ComplexMatrix moved = permute_factors(state.matrix(), order);
    const auto di = static_cast<Eigen::Index>(ch.d_in());
    const auto d_o = static_cast<Eigen::Index>(ch.d_out());
    const Eigen::Index rest = static_cast<Eigen::Index>(moved.size()) / di;
    Mat out = Mat::Zero(rest * d_o, rest * d_o);
    Mat tmp(d_o, di);
    for (Eigen::Index a = 0; a < rest; ++a) {
        for (Eigen::Index b = 0; b < rest; ++b) {
            const auto block = moved.mat().block(a * di, b * di, di, di);
            if (block.cwiseAbs().maxCoeff() == 0.0) {
                continue;
            }
            auto dst = out.block(a * d_o, b * d_o, d_o, d_o);
            for (const auto &k : ch.kraus()) {
                tmp.noalias() = k * block;
                dst.noalias() += tmp * k.adjoint();
            }
        }
    }
    std::vector<std::size_t> new_dims;
    for (std::size_t f : order) {
        new_dims.push_back(f == t ? ch.d_out() : dims[f]);
    }
    // inverse permutation: original factor f sits at position pos[f]
    std::vector<std::size_t> back(dims.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        back[order[pos]] = pos;
    }
    ComplexMatrix result = permute_factors(ComplexMatrix(std::move(out), std::move(new_dims)), back);
    return {MultipartiteState::Trusted{}, std::move(result), state.labels()};
}

QuantumChannel NoiseSpec::channel() const {
    return kind == NoiseKind::Dephasing ? dephasing(param) : amplitude_damping(param);
}

NoiseKind parse_noise_kind(std::string_view name) {
    if (name == "dephasing") return NoiseKind::Dephasing;
    if (name == "amp_damp" || name == "amplitude_damping") return NoiseKind::AmplitudeDamping;
    throw std::invalid_argument("unknown noise kind '" + std::string(name) + "' (expected dephasing or amp_damp)");
}

std::string_view noise_name(NoiseKind kind) { return kind == NoiseKind::Dephasing ? "dephasing" : "amp_damp"; }

}  // namespace qecbound
