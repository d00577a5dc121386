// SPDX-License-Identifier: Apache-2.0
#include "risbeam/optimizer.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>

namespace risbeam {

void ScaParams::validate() const {
    if (!(eta0 > 0.0)) throw DomainError("ScaParams: eta0 must be > 0");
    if (!(alpha > 1.0)) throw DomainError("ScaParams: alpha must be > 1");
    if (!(eta_max >= eta0)) throw DomainError("ScaParams: eta_max must be >= eta0");
    if (max_iters < 1) throw DomainError("ScaParams: max_iters must be >= 1");
    if (!(inner_tol > 0.0)) throw DomainError("ScaParams: inner_tol must be > 0");
    if (admm_max_iters < 1) throw DomainError("ScaParams: admm_max_iters must be >= 1");
    if (!(admm_tol > 0.0)) throw DomainError("ScaParams: admm_tol must be > 0");
}

namespace {

CMatrix hermitian_part(const CMatrix& m) { return (m + m.adjoint()) / 2.0; }

struct TopEigen {
    double value;
    CVector vector;
};

// Principal eigenpair; ties resolve to the lowest index in ascending order
// among eigenvalues equal to the maximum within round-off.
TopEigen top_eigen(const CMatrix& W) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(W));
    const RVector& ev = es.eigenvalues();
    const Eigen::Index last = ev.size() - 1;
    const double top = ev[last];
    const double tie = 1e-12 * std::max(1.0, std::abs(top));
    Eigen::Index pick = last;
    while (pick > 0 && top - ev[pick - 1] <= tie) --pick;
    return {top, es.eigenvectors().col(pick)};
}

CMatrix project_psd(const CMatrix& m) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
    const RVector ev = es.eigenvalues().cwiseMax(0.0);
    const CMatrix& v = es.eigenvectors();
    return v * ev.cast<cd>().asDiagonal() * v.adjoint();
}

// Euclidean projection onto the probability simplex.
void project_simplex(RVector& x) {
    const Eigen::Index n = x.size();
    std::vector<double> s(x.data(), x.data() + n);
    std::sort(s.begin(), s.end(), std::greater<>());
    double cum = 0.0;
    double theta = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        cum += s[static_cast<std::size_t>(i)];
        const double t = (cum - 1.0) / static_cast<double>(i + 1);
        if (s[static_cast<std::size_t>(i)] - t > 0.0) theta = t;
    }
    x = (x.array() - theta).cwiseMax(0.0).matrix();
}

// min over the simplex of b^T mu + mu^T G mu / (2 rho), accelerated projected
// gradient warm-started at mu; stops on the Frank-Wolfe duality gap.
void solve_simplex_qp(const RVector& b, const RMatrix& G, double g_max, double rho, RVector& mu) {
    const Eigen::Index m = b.size();
    if (m == 1) {
        mu = RVector::Ones(1);
        return;
    }
    auto gap_at = [&](const RVector& x) {
        const RVector g = b + G * x / rho;
        return g.dot(x) - g.minCoeff();
    };
    const double tol = 1e-10 * std::max(1.0, b.cwiseAbs().maxCoeff());
    if (g_max <= 1e-14) {
        Eigen::Index k = 0;
        b.minCoeff(&k);
        mu = RVector::Zero(m);
        mu[k] = 1.0;
        return;
    }
    const double step = rho / g_max;
    RVector y = mu;
    RVector prev = mu;
    double t = 1.0;
    for (int it = 0; it < 5000; ++it) {
        RVector next = y - step * (b + G * y / rho);
        project_simplex(next);
        const double t_next = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
        y = next + ((t - 1.0) / t_next) * (next - prev);
        prev = next;
        t = t_next;
        if (it % 10 == 9 && gap_at(prev) <= tol) break;
    }
    mu = prev;
}

struct ScaledTargets {
    CMatrix F;  // columns f_q / (Omega sqrt(N)); <F_q, W> = f_q^H W f_q / (Omega^2 N)
    RMatrix G;  // <F_q,off, F_p,off>
    double g_max = 0.0;
    double scale = 1.0;  // Omega^2 N
};

ScaledTargets scale_targets(const TargetSet& q) {
    ScaledTargets s;
    const int n = q.dimension();
    const double omega = q.omega();
    s.scale = omega * omega * n;
    s.F = q.matrix() / (omega * std::sqrt(static_cast<double>(n)));
    const CMatrix gram = s.F.adjoint() * s.F;
    const RMatrix fabs2 = s.F.cwiseAbs2();
    s.G = gram.cwiseAbs2() - fabs2.transpose() * fabs2;
    s.G = (s.G + s.G.transpose()) / 2.0;
    if (s.G.rows() > 1) {
        Eigen::SelfAdjointEigenSolver<RMatrix> es(s.G, Eigen::EigenvaluesOnly);
        s.g_max = std::max(0.0, es.eigenvalues().maxCoeff());
    }
    return s;
}

RVector constraint_values(const CMatrix& F, const CMatrix& W) {
    const CMatrix WF = W * F;
    RVector v(F.cols());
    for (Eigen::Index q = 0; q < F.cols(); ++q) v[q] = F.col(q).dot(WF.col(q)).real();
    return v;
}

double eigen_rank_residual(const RVector& ev) {
    const RVector a = ev.cwiseAbs();
    return a.sum() - a.maxCoeff();
}

}  // namespace

CMatrix lift(const PhaseProfile& w) {
    const CVector v = w.weights();
    return v * v.adjoint();
}

double rank_residual(const CMatrix& W) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(W), Eigen::EigenvaluesOnly);
    return eigen_rank_residual(es.eigenvalues());
}

PhaseProfile extract_rank_one(const CMatrix& W) {
    if (W.rows() != W.cols() || W.rows() == 0) throw ShapeError("extract_rank_one: W must be square");
    if (W.cwiseAbs().maxCoeff() == 0.0) throw DomainError("extract_rank_one: zero matrix");
    const double tr = W.trace().real();
    if (!(tr > 0.0)) throw DomainError("extract_rank_one: trace must be positive");
    const TopEigen top = top_eigen(W);
    return PhaseProfile::from_weights(std::sqrt(tr) * top.vector);
}

double lifted_gamma(const TargetSet& q, const CMatrix& W) {
    return constraint_values(q.matrix(), W).minCoeff();
}

double penalized_objective(const TargetSet& q, const CMatrix& W, double eta) {
    const double g = q.omega() * q.dimension();
    return (lifted_gamma(q, W) - eta * rank_residual(W)) / (g * g);
}

InnerResult solve_inner(const TargetSet& q, const CMatrix& w_prev, double eta, const InnerOptions& opts,
                        AdmmState* state) {
    const int n = q.dimension();
    if (w_prev.rows() != n || w_prev.cols() != n) throw ShapeError("solve_inner: W_prev has wrong size");
    if (eta < 0.0) throw DomainError("solve_inner: eta must be >= 0");
    const ScaledTargets st = scale_targets(q);
    const double nn = static_cast<double>(n);
    const double eta_hat = eta / st.scale;

    const CMatrix wp = hermitian_part(w_prev);
    const TopEigen top = top_eigen(wp);
    const CMatrix V = top.vector * top.vector.adjoint();

    // Normalized surrogate gamma/(Omega N)^2 - eta (N - v^H W v)/(Omega N)^2.
    auto surrogate = [&](const CMatrix& W, double gamma_hat) {
        const double vwv = top.vector.dot(W * top.vector).real();
        return gamma_hat / nn - eta_hat * (nn - vwv) / nn;
    };

    AdmmState local;
    AdmmState& s = state ? *state : local;
    const Eigen::Index m = st.F.cols();
    if (s.Z.rows() != n || s.mu.size() != m || !(s.rho > 0.0)) {
        s.Z = wp;
        s.U = CMatrix::Zero(n, n);
        s.mu = RVector::Constant(m, 1.0 / static_cast<double>(m));
        s.rho = 1.0 / nn;
    }

    const double eps_abs = opts.admm_tol * nn;
    const double eps_rel = opts.admm_tol;
    const int max_iters = opts.max_iters;
    const double relax = 1.6;
    CMatrix W(n, n);
    int it = 0;
    bool solved = false;
    for (it = 1; it <= max_iters; ++it) {
        CMatrix X = s.Z - s.U + (eta_hat / s.rho) * V;
        X = hermitian_part(X);
        X.diagonal().setOnes();
        const RVector b = constraint_values(st.F, X);
        solve_simplex_qp(b, st.G, st.g_max, s.rho, s.mu);
        W = X + (1.0 / s.rho) * (st.F * s.mu.cast<cd>().asDiagonal() * st.F.adjoint());
        W.diagonal().setOnes();

        const CMatrix z_old = s.Z;
        const CMatrix w_hat = relax * W + (1.0 - relax) * z_old;
        s.Z = project_psd(hermitian_part(w_hat + s.U));
        s.U += w_hat - s.Z;

        const double r = (W - s.Z).norm();
        const double d = s.rho * (s.Z - z_old).norm();
        const double eps_pri = eps_abs + eps_rel * std::max(W.norm(), s.Z.norm());
        const double eps_dual = eps_abs + eps_rel * s.rho * s.U.norm();
        if (r <= eps_pri && d <= eps_dual) {
            solved = true;
            break;
        }
        if (it % 10 == 0) {
            if (r > 10.0 * d) {
                s.rho *= 2.0;
                s.U /= 2.0;
            } else if (d > 10.0 * r) {
                s.rho /= 2.0;
                s.U *= 2.0;
            }
        }
    }

    // Feasible point: rescale the PSD iterate to a unit diagonal.
    const RVector diag = s.Z.diagonal().real();
    InnerResult res;
    res.iterations = std::min(it, max_iters);
    res.surrogate_prev = surrogate(wp, constraint_values(st.F, wp).minCoeff());
    if (diag.minCoeff() <= 0.0) {
        res.x = {wp, lifted_gamma(q, wp)};
        res.status = "no_improvement";
        res.surrogate = res.surrogate_prev;
        return res;
    }
    const RVector dinv = diag.cwiseSqrt().cwiseInverse();
    CMatrix out = dinv.cast<cd>().asDiagonal() * s.Z * dinv.cast<cd>().asDiagonal();
    out = hermitian_part(out);
    out.diagonal().setOnes();
    const double gamma_hat = constraint_values(st.F, out).minCoeff();
    res.surrogate = surrogate(out, gamma_hat);
    if (res.surrogate < res.surrogate_prev - opts.inner_tol) {
        res.x = {wp, lifted_gamma(q, wp)};
        res.status = "no_improvement";
        res.surrogate = res.surrogate_prev;
        return res;
    }
    res.x = {out, gamma_hat * st.scale};
    res.status = solved ? "solved" : "max_iterations";
    return res;
}

ScaResult penalty_sca(const TargetSet& q, const CMatrix& w0, const ScaParams& params) {
    params.validate();
    const int n = q.dimension();
    if (w0.rows() != n || w0.cols() != n) throw ShapeError("penalty_sca: W0 has wrong size");
    CMatrix W = hermitian_part(w0);
    if ((W.diagonal().real().array() - 1.0).abs().maxCoeff() > 1e-6) {
        throw SolverError("infeasible_start", "penalty_sca: W0 must have a unit diagonal");
    }
    {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(W, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-7 * n) {
            throw SolverError("infeasible_start", "penalty_sca: W0 must be positive semidefinite");
        }
    }
    const double gmax2 = std::pow(q.omega() * n, 2);
    const double rank_tol = params.rank_tolerance(n);

    ScaResult out;
    out.initial_gamma_db = linear_to_db(std::max(lifted_gamma(q, W) / gmax2, 1e-300));
    out.initial_rank_residual = rank_residual(W);
    PhaseProfile best = extract_rank_one(W);
    double best_value = worst_case_normalized(q, best);
    out.initial_profile_db = linear_to_db(std::max(best_value, 1e-300));

    AdmmState state;
    double eta = params.eta0;
    double gamma_prev = lifted_gamma(q, W);
    int small_changes = 0;
    double rr = out.initial_rank_residual;
    for (int i = 1; i <= params.max_iters; ++i) {
        const InnerResult inner =
            solve_inner(q, W, eta, {params.inner_tol, params.admm_tol, params.admm_max_iters}, &state);
        ScaRecord rec;
        rec.iter = i;
        rec.eta = eta;
        rec.status = inner.status;
        rec.inner_iterations = inner.iterations;
        rec.penalized_prev = penalized_objective(q, W, eta);
        W = inner.x.W;
        rec.penalized = penalized_objective(q, W, eta);
        rr = rank_residual(W);
        rec.rank_residual = rr;
        const double gamma = inner.x.gamma;
        rec.gamma_db = linear_to_db(std::max(gamma / gmax2, 1e-300));
        const PhaseProfile w = extract_rank_one(W);
        const double value = worst_case_normalized(q, w);
        rec.profile_db = linear_to_db(std::max(value, 1e-300));
        if (value > best_value) {
            best_value = value;
            best = w;
        }
        out.trace.records.push_back(rec);

        const double rel = std::abs(gamma - gamma_prev) / std::max(std::abs(gamma), 1e-300);
        small_changes = rel < params.rel_change_tol ? small_changes + 1 : 0;
        gamma_prev = gamma;
        if (small_changes >= 2 && rr < rank_tol) {
            out.converged = true;
            break;
        }
        eta = std::min(params.alpha * eta, params.eta_max);
    }
    out.W = W;
    out.degraded = rr >= rank_tol;
    if (params.keep_best) {
        out.profile = best;
        out.min_grcs = best_value;
    } else {
        out.profile = extract_rank_one(W);
        out.min_grcs = worst_case_normalized(q, out.profile);
    }
    return out;
}

CMatrix random_initialization(int n, Rng& rng) {
    if (n < 1) throw DomainError("random_initialization: n must be >= 1");
    CMatrix a(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) a(i, j) = rng.complex_normal(1.0);
    }
    CMatrix w = a * a.adjoint();
    const RVector dinv = w.diagonal().real().cwiseSqrt().cwiseInverse();
    w = dinv.cast<cd>().asDiagonal() * w * dinv.cast<cd>().asDiagonal();
    w = hermitian_part(w);
    w.diagonal().setOnes();
    return w;
}

OracleResult exhaustive_oracle(const TargetSet& q, int levels) {
    const int n = q.dimension();
    if (n > 8) throw DomainError("exhaustive_oracle: N must be <= 8");
    if (levels < 1) throw DomainError("exhaustive_oracle: need at least one phase level");
    if (std::pow(static_cast<double>(levels), n) > 1e8) {
        throw DomainError("exhaustive_oracle: L^N exceeds 1e8");
    }
    const CMatrix F = q.matrix();
    std::vector<cd> phasors(static_cast<std::size_t>(levels));
    for (int l = 0; l < levels; ++l) phasors[static_cast<std::size_t>(l)] = std::polar(1.0, kTwoPi * l / levels);
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    double best = -1.0;
    std::vector<int> best_idx = idx;
    const long long total = static_cast<long long>(std::llround(std::pow(levels, n - 1)));
    CVector w(n);
    for (long long c = 0; c < total; ++c) {
        long long rem = c;
        for (int e = 1; e < n; ++e) {
            idx[static_cast<std::size_t>(e)] = static_cast<int>(rem % levels);
            rem /= levels;
        }
        for (int e = 0; e < n; ++e) w[e] = phasors[static_cast<std::size_t>(idx[static_cast<std::size_t>(e)])];
        double worst = std::numeric_limits<double>::infinity();
        for (Eigen::Index r = 0; r < F.cols() && worst > best; ++r) {
            worst = std::min(worst, std::norm(F.col(r).dot(w)));
        }
        if (worst > best) {
            best = worst;
            best_idx = idx;
        }
    }
    RVector om(n);
    for (int e = 0; e < n; ++e) om[e] = kTwoPi * best_idx[static_cast<std::size_t>(e)] / levels;
    return {PhaseProfile(std::move(om)), best};
}

void write_trace_csv(std::ostream& os, const ScaTrace& trace) {
    os << "# risbeam-csv v1 sca_trace\n";
    os << "iter,gamma_db,rank_residual,eta,status\n";
    os << std::setprecision(10);
    for (const auto& r : trace.records) {
        os << r.iter << ',' << r.gamma_db << ',' << r.rank_residual << ',' << r.eta << ',' << r.status << '\n';
    }
}

}  // namespace risbeam
