#include "qecbound/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

namespace qecbound {

namespace {

using RealMat = Eigen::MatrixXd;

void check_subnormalized(const ComplexMatrix &m, const char *name) {
    const double tr = m.trace().real();
    if (tr > 1.0 + kHermTol) {
        throw std::domain_error(std::string(name) + " has trace " + std::to_string(tr) + " > 1");
    }
}

// Orthonormal basis of the Hermitian d x d matrices under Re tr(A^dag B):
// the d diagonal units first, then symmetric and antisymmetric pairs.
std::vector<Mat> hermitian_basis(Eigen::Index d) {
    std::vector<Mat> basis;
    basis.reserve(static_cast<std::size_t>(d * d));
    for (Eigen::Index j = 0; j < d; ++j) {
        Mat e = Mat::Zero(d, d);
        e(j, j) = 1.0;
        basis.push_back(std::move(e));
    }
    const double s = 1.0 / std::sqrt(2.0);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index k = j + 1; k < d; ++k) {
            Mat sym = Mat::Zero(d, d);
            sym(j, k) = s;
            sym(k, j) = s;
            basis.push_back(std::move(sym));
            Mat anti = Mat::Zero(d, d);
            anti(j, k) = cplx(0.0, -s);
            anti(k, j) = cplx(0.0, s);
            basis.push_back(std::move(anti));
        }
    }
    return basis;
}

// I_A (x) x for a d_b x d_b block.
Mat lift(const Mat &x, Eigen::Index d_a) {
    const Eigen::Index d_b = x.rows();
    Mat out = Mat::Zero(d_a * d_b, d_a * d_b);
    for (Eigen::Index a = 0; a < d_a; ++a) {
        out.block(a * d_b, a * d_b, d_b, d_b) = x;
    }
    return out;
}

// tr_A of an operator on A (x) B.
Mat trace_a(const Mat &x, Eigen::Index d_a) {
    const Eigen::Index d_b = x.rows() / d_a;
    Mat out = Mat::Zero(d_b, d_b);
    for (Eigen::Index a = 0; a < d_a; ++a) {
        out += x.block(a * d_b, a * d_b, d_b, d_b);
    }
    return out;
}

// R with R R^dag = rho, keeping eigenvalues above 1e-13 of the largest.
// Spurious eigenvalues near zero would otherwise leak in at their square root.
Mat support_factor(const Mat &rho) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rho + rho.adjoint()));
    const double top = es.eigenvalues().maxCoeff();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        if (es.eigenvalues()(i) > 1e-13 * std::max(top, 1.0)) {
            keep.push_back(i);
        }
    }
    Mat r(rho.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t c = 0; c < keep.size(); ++c) {
        r.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(keep[c]) * std::sqrt(es.eigenvalues()(keep[c]));
    }
    return r;
}

// tr sqrt(R^dag (I (x) sigma) R), equal to ||sqrt(rho) sqrt(I (x) sigma)||_1.
double factored_objective(const Mat &r, const Mat &sigma, Eigen::Index d_a) {
    if (r.cols() == 0) {
        return 0.0;
    }
    const Mat k = r.adjoint() * lift(sigma, d_a) * r;
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (k + k.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

// Maximizes G(sigma) = tr sqrt(R^dag (I (x) sigma) R) over density matrices,
// where R R^dag = rho restricted to its support. Path-following log-det
// barrier with Newton steps constrained to tr(sigma) = 1.
class HmaxSolver {
  public:
    HmaxSolver(const Mat &rho, Eigen::Index d_a, Eigen::Index d_b, const SolverConfig &cfg)
        : d_a_(d_a), d_b_(d_b), cfg_(cfg), basis_(hermitian_basis(d_b)) {
        r_ = support_factor(rho);
        lifted_.reserve(basis_.size());
        for (const auto &b : basis_) {
            lifted_.push_back(r_.adjoint() * lift(b, d_a_) * r_);
        }
    }

    struct Outcome {
        Mat sigma;
        int iterations = 0;
        double last_improvement = 0.0;
        bool converged = false;
        std::vector<double> trace;
    };

    Outcome run() const {
        const auto n = static_cast<Eigen::Index>(basis_.size());
        Outcome out;
        Mat sigma = Mat::Identity(d_b_, d_b_) / static_cast<double>(d_b_);
        double best = objective(sigma);
        Mat best_sigma = sigma;
        double stage_start_best = best;
        double mu = 0.1 * best / static_cast<double>(d_b_);
        const double mu_stop = std::max(1e-3 * cfg_.tol / static_cast<double>(d_b_), cfg_.boundary_reg);

        RealVec a = RealVec::Zero(n);
        a.head(d_b_).setOnes();

        bool final_stage = false;
        while (true) {
            if (mu <= mu_stop) {
                mu = mu_stop;
                final_stage = true;
            }
            stage_start_best = best;
            for (int inner = 0; inner < 200; ++inner) {
                if (out.iterations >= cfg_.max_iter) {
                    out.sigma = best_sigma;
                    out.last_improvement = best - stage_start_best;
                    out.converged = false;
                    return out;
                }
                ++out.iterations;
                RealVec grad(n);
                RealMat hess(n, n);
                if (!newton_system(sigma, mu, grad, hess)) {
                    break;
                }
                RealMat kkt = RealMat::Zero(n + 1, n + 1);
                kkt.topLeftCorner(n, n) = hess;
                kkt.block(0, n, n, 1) = a;
                kkt.block(n, 0, 1, n) = a.transpose();
                RealVec rhs = RealVec::Zero(n + 1);
                rhs.head(n) = -grad;
                const RealVec sol = kkt.fullPivLu().solve(rhs);
                const RealVec step = sol.head(n);
                const double decrement = -step.dot(hess * step);
                const double slope = grad.dot(step);
                if (!(decrement > 1e-15) || !(slope > 0.0)) {
                    out.trace.push_back(best);
                    break;
                }
                Mat dir = Mat::Zero(d_b_, d_b_);
                for (Eigen::Index k = 0; k < n; ++k) {
                    dir += step(k) * basis_[static_cast<std::size_t>(k)];
                }
                const double phi0 = barrier_objective(sigma, mu);
                double t = 1.0;
                bool accepted = false;
                for (int halving = 0; halving < 60; ++halving, t *= 0.5) {
                    const Mat trial = sigma + t * dir;
                    const double phi = barrier_objective(trial, mu);
                    if (phi >= phi0 + 0.25 * t * slope) {
                        sigma = 0.5 * (trial + trial.adjoint());
                        accepted = true;
                        break;
                    }
                }
                if (!accepted) {
                    out.trace.push_back(best);
                    break;
                }
                const double g = objective(sigma);
                if (g > best) {
                    best = g;
                    best_sigma = sigma;
                }
                out.trace.push_back(best);
                if (decrement < 1e-14) {
                    break;
                }
            }
            if (final_stage) {
                break;
            }
            mu *= 0.1;
        }
        out.sigma = best_sigma;
        out.last_improvement = best - stage_start_best;
        out.converged = true;
        return out;
    }

    // Model objective tr sqrt(R^dag (I (x) sigma) R).
    double objective(const Mat &sigma) const { return factored_objective(r_, sigma, d_a_); }

    // Gradient of the model objective at sigma (which must be positive definite).
    Mat gradient(const Mat &sigma) const {
        const Mat k = r_.adjoint() * lift(sigma, d_a_) * r_;
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (k + k.adjoint()));
        const RealVec inv_sqrt = es.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
        const Mat k_inv_sqrt = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().adjoint();
        return 0.5 * trace_a(r_ * k_inv_sqrt * r_.adjoint(), d_a_);
    }

  private:
    double barrier_objective(const Mat &sigma, double mu) const {
        Eigen::LLT<Mat> llt(0.5 * (sigma + sigma.adjoint()));
        if (llt.info() != Eigen::Success) {
            return -std::numeric_limits<double>::infinity();
        }
        const RealVec diag = llt.matrixL().toDenseMatrix().diagonal().real();
        if (diag.minCoeff() <= 0.0) {
            return -std::numeric_limits<double>::infinity();
        }
        const double logdet = 2.0 * diag.array().log().sum();
        return objective(sigma) + mu * logdet;
    }

    bool newton_system(const Mat &sigma, double mu, RealVec &grad, RealMat &hess) const {
        const auto n = static_cast<Eigen::Index>(basis_.size());
        const Mat k = r_.adjoint() * lift(sigma, d_a_) * r_;
        Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (k + k.adjoint()));
        const RealVec &kv = es.eigenvalues();
        if (kv.size() == 0 || kv.minCoeff() <= 0.0) {
            return false;
        }
        const Mat &w = es.eigenvectors();
        const RealVec sq = kv.cwiseSqrt();
        const Eigen::Index r = kv.size();
        // second divided difference weights of tr sqrt(.), all negative
        RealMat weight(r, r);
        for (Eigen::Index i = 0; i < r; ++i) {
            for (Eigen::Index j = 0; j < r; ++j) {
                weight(i, j) = std::sqrt(0.5 / (sq(i) * sq(j) * (sq(i) + sq(j))));
            }
        }
        Eigen::SelfAdjointEigenSolver<Mat> ss(0.5 * (sigma + sigma.adjoint()));
        if (ss.eigenvalues().minCoeff() <= 0.0) {
            return false;
        }
        const Mat s_inv_half = ss.eigenvectors() * ss.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                               ss.eigenvectors().adjoint();
        const Mat s_inv = s_inv_half * s_inv_half;

        RealMat obj_cols(2 * r * r, n);
        RealMat bar_cols(2 * d_b_ * d_b_, n);
        for (Eigen::Index c = 0; c < n; ++c) {
            const Mat lt = w.adjoint() * lifted_[static_cast<std::size_t>(c)] * w;
            double g = 0.0;
            for (Eigen::Index i = 0; i < r; ++i) {
                g += 0.5 * lt(i, i).real() / sq(i);
            }
            const Mat &b = basis_[static_cast<std::size_t>(c)];
            g += mu * (s_inv * b).trace().real();
            grad(c) = g;
            for (Eigen::Index j = 0; j < r; ++j) {
                for (Eigen::Index i = 0; i < r; ++i) {
                    const cplx v = weight(i, j) * lt(i, j);
                    obj_cols(2 * (j * r + i), c) = v.real();
                    obj_cols(2 * (j * r + i) + 1, c) = v.imag();
                }
            }
            const Mat cb = s_inv_half * b * s_inv_half;
            for (Eigen::Index j = 0; j < d_b_; ++j) {
                for (Eigen::Index i = 0; i < d_b_; ++i) {
                    bar_cols(2 * (j * d_b_ + i), c) = cb(i, j).real();
                    bar_cols(2 * (j * d_b_ + i) + 1, c) = cb(i, j).imag();
                }
            }
        }
        hess = -(obj_cols.transpose() * obj_cols) - mu * (bar_cols.transpose() * bar_cols);
        return true;
    }

    Eigen::Index d_a_;
    Eigen::Index d_b_;
    SolverConfig cfg_;
    std::vector<Mat> basis_;
    Mat r_;
    std::vector<Mat> lifted_;
};

std::vector<std::size_t> partition_order(const MultipartiteState &rho, std::span<const std::string> a,
                                         std::span<const std::string> b) {
    std::vector<std::size_t> order;
    for (const auto &l : a) order.push_back(rho.index_of(l));
    for (const auto &l : b) order.push_back(rho.index_of(l));
    std::set<std::size_t> uniq(order.begin(), order.end());
    if (uniq.size() != order.size() || order.size() != rho.num_factors()) {
        throw std::invalid_argument("conditioning labels must partition the state's factors");
    }
    return order;
}

std::size_t product_of_dims(const MultipartiteState &rho, std::span<const std::string> labels) {
    std::size_t d = 1;
    for (const auto &l : labels) d *= rho.dim_of(l);
    return d;
}

}  // namespace

void SolverConfig::validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("SolverConfig.tol must be positive");
    if (max_iter <= 0) throw std::invalid_argument("SolverConfig.max_iter must be positive");
    if (!(boundary_reg > 0.0 && boundary_reg < 1.0)) {
        throw std::invalid_argument("SolverConfig.boundary_reg must lie in (0,1)");
    }
}

double purified_fidelity(const ComplexMatrix &rho, const ComplexMatrix &sigma) {
    check_subnormalized(rho, "rho");
    check_subnormalized(sigma, "sigma");
    const double overlap = trace_norm(ComplexMatrix(psd_sqrt(rho).mat() * psd_sqrt(sigma).mat()));
    const double tr_r = std::min(1.0, rho.trace().real());
    const double tr_s = std::min(1.0, sigma.trace().real());
    const double f = overlap + std::sqrt(std::max(0.0, (1.0 - tr_r) * (1.0 - tr_s)));
    return std::clamp(f, 0.0, 1.0);
}

double purified_distance(const ComplexMatrix &rho, const ComplexMatrix &sigma) {
    const double f = purified_fidelity(rho, sigma);
    return std::sqrt(std::max(0.0, 1.0 - f * f));
}

double hmax_objective(const ComplexMatrix &rho_ab, std::size_t d_a, const ComplexMatrix &sigma_b) {
    if (rho_ab.size() != d_a * sigma_b.size()) {
        throw std::invalid_argument("hmax_objective: dimension mismatch");
    }
    if (!rho_ab.is_hermitian() || !sigma_b.is_hermitian()) {
        throw std::invalid_argument("hmax_objective: inputs must be Hermitian");
    }
    return factored_objective(support_factor(rho_ab.mat()), sigma_b.mat(), static_cast<Eigen::Index>(d_a));
}

EntropyResult hmax_cond(const MultipartiteState &rho, std::span<const std::string> a, std::span<const std::string> b,
                        const SolverConfig &cfg) {
    cfg.validate();
    if (std::abs(rho.trace() - 1.0) > kHermTol) {
        throw std::domain_error("hmax_cond requires a normalized state (trace " + std::to_string(rho.trace()) + ")");
    }
    const auto order = partition_order(rho, a, b);
    const std::size_t d_a = product_of_dims(rho, a);
    const std::size_t d_b = product_of_dims(rho, b);
    const ComplexMatrix ordered = permute_factors(rho.matrix(), order).with_dims({d_a, d_b});

    std::vector<std::size_t> b_dims;
    for (const auto &l : b) b_dims.push_back(rho.dim_of(l));
    const std::vector<std::string> b_labels(b.begin(), b.end());

    EntropyResult res;
    Mat sigma;
    if (d_b == 1) {
        sigma = Mat::Identity(1, 1);
        res.converged = true;
    } else {
        HmaxSolver solver(ordered.mat(), static_cast<Eigen::Index>(d_a), static_cast<Eigen::Index>(d_b), cfg);
        auto out = solver.run();
        sigma = std::move(out.sigma);
        res.iterations = out.iterations;
        res.last_improvement = out.last_improvement;
        res.converged = out.converged;
        res.objective_trace = std::move(out.trace);

        // Frank-Wolfe gap at a point pulled slightly toward pi.
        const double eta = cfg.boundary_reg;
        const Mat reg =
            (1.0 - eta) * sigma + eta * Mat::Identity(static_cast<Eigen::Index>(d_b), static_cast<Eigen::Index>(d_b)) /
                                      static_cast<double>(d_b);
        const Mat grad = solver.gradient(reg);
        Eigen::SelfAdjointEigenSolver<Mat> ge(0.5 * (grad + grad.adjoint()), Eigen::EigenvaluesOnly);
        const double gap = std::max(0.0, ge.eigenvalues().maxCoeff() - (reg * grad).trace().real());
        res.upper_bound = 2.0 * std::log2(solver.objective(reg) + gap);
    }
    sigma = 0.5 * (sigma + sigma.adjoint());
    sigma /= sigma.trace().real();
    ComplexMatrix sigma_m(sigma, b_dims);
    const double g = hmax_objective(ordered, d_a, sigma_m.with_dims({d_b}));
    res.value = 2.0 * std::log2(g);
    if (d_b == 1) {
        res.upper_bound = res.value;
    }
    res.upper_bound = std::max(res.upper_bound, res.value);
    res.sigma_opt = MultipartiteState(std::move(sigma_m), b_labels);
    return res;
}

EntropyResult hmax_cond(const MultipartiteState &rho, std::initializer_list<std::string> a,
                        std::initializer_list<std::string> b, const SolverConfig &cfg) {
    return hmax_cond(rho, std::span<const std::string>(a.begin(), a.size()),
                     std::span<const std::string>(b.begin(), b.size()), cfg);
}

double von_neumann_entropy(const ComplexMatrix &rho) {
    const RealVec ev = herm_eigvals(rho);
    double s = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) > 0.0) {
            s -= ev(i) * std::log2(ev(i));
        }
    }
    return s;
}

double von_neumann_cond(const MultipartiteState &rho, std::span<const std::string> a, std::span<const std::string> b) {
    if (std::abs(rho.trace() - 1.0) > kHermTol) {
        throw std::domain_error("von_neumann_cond requires a normalized state");
    }
    partition_order(rho, a, b);
    return von_neumann_entropy(rho.matrix()) - von_neumann_entropy(rho.reduce(b).matrix());
}

double von_neumann_cond(const MultipartiteState &rho, std::initializer_list<std::string> a,
                        std::initializer_list<std::string> b) {
    return von_neumann_cond(rho, std::span<const std::string>(a.begin(), a.size()),
                            std::span<const std::string>(b.begin(), b.size()));
}

ChannelEntropy h_channel_detail(std::span<const QuantumChannel> chs, std::size_t m, const SolverConfig &cfg) {
    if (chs.empty()) {
        throw std::invalid_argument("h_channel needs at least one channel");
    }
    const std::size_t d = std::size_t{1} << m;
    ChannelEntropy out;
    double sum = 0.0;
    for (const auto &ch : chs) {
        if (ch.d_in() != d || ch.d_out() != d) {
            throw std::invalid_argument("h_channel: channel does not act on " + std::to_string(m) + " qubits");
        }
        const auto res = hmax_cond(choi_from_channel(ch), {"A"}, {"B"}, cfg);
        if (!res.converged) {
            ++out.unconverged;
        }
        sum += res.value;
    }
    const double md = static_cast<double>(m);
    const double h = sum / static_cast<double>(chs.size());
    if (h < -md - 1e-6 || h > md + 1e-6) {
        throw std::logic_error("h_channel out of [-m, m]: " + std::to_string(h));
    }
    out.value = std::clamp(h, -md, md);
    return out;
}

double h_channel(std::span<const QuantumChannel> chs, std::size_t m, const SolverConfig &cfg) {
    return h_channel_detail(chs, m, cfg).value;
}

double h_channel(std::initializer_list<QuantumChannel> chs, std::size_t m, const SolverConfig &cfg) {
    return h_channel(std::span<const QuantumChannel>(chs.begin(), chs.size()), m, cfg);
}

double h_channel_von_neumann(const QuantumChannel &ch) {
    return von_neumann_cond(choi_from_channel(ch), {"A"}, {"B"});
}

}  // namespace qecbound
