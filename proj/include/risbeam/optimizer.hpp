// SPDX-License-Identifier: Apache-2.0
//
// Max-min GRCS design over a target set by semidefinite lifting W = w w^H,
// a rank-one penalty eta (|W|_* - |W|_2) and successive linearization of the
// spectral norm. Raw GRCS units are used at the interface (gamma compares
// against f^H W f); traces report values normalized by (Omega N)^2.
#pragma once

#include "risbeam/grcs.hpp"
#include "risbeam/profile.hpp"
#include "risbeam/random.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace risbeam {

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& status, const std::string& what)
        : std::runtime_error(what), status_(status) {}
    const std::string& status() const { return status_; }

private:
    std::string status_;
};

struct LiftedVariable {
    CMatrix W;
    double gamma = 0.0;  ///< min_q f_q^H W f_q
};

struct ScaParams {
    double eta0 = 1e-3;
    double alpha = 5.0;
    double eta_max = 5000.0;
    int max_iters = 10;
    /// Rank-residual threshold; a negative value means 1e-4 * N.
    double rank_tol = -1.0;
    double inner_tol = 1e-6;
    /// Relative change of gamma that counts as converged (two iterations in a row).
    double rel_change_tol = 1e-5;
    /// Return the best rank-one profile seen over the iterates (including the
    /// initial point) instead of the last one.
    bool keep_best = true;
    int admm_max_iters = 4000;
    /// Relative primal/dual residual tolerance of the inner ADMM iterations.
    double admm_tol = 1e-4;

    void validate() const;
    double rank_tolerance(int n) const { return rank_tol < 0.0 ? 1e-4 * n : rank_tol; }
};

struct InnerResult {
    LiftedVariable x;
    std::string status;  ///< "solved", "max_iterations" or "no_improvement"
    int iterations = 0;
    double surrogate = 0.0;       ///< normalized surrogate objective at x
    double surrogate_prev = 0.0;  ///< normalized surrogate objective at W_prev
};

/// Warm-start state carried between inner solves.
struct AdmmState {
    CMatrix Z;
    CMatrix U;
    RVector mu;
    double rho = 0.0;
};

/// One convex subproblem: maximize gamma - eta (|W|_* - |W_prev|_2 - v^H (W - W_prev) v)
/// over f_q^H W f_q >= gamma, diag(W) = 1, W PSD, where v is the principal
/// eigenvector of W_prev. Since tr(W) = N on the feasible set the nuclear
/// norm is constant. Solved by ADMM with a PSD projection; the W-update is a
/// simplex-constrained QP in the constraint multipliers.
struct InnerOptions {
    double inner_tol = 1e-6;  ///< allowed decrease of the surrogate objective
    double admm_tol = 1e-4;
    int max_iters = 4000;
};

InnerResult solve_inner(const TargetSet& q, const CMatrix& w_prev, double eta, const InnerOptions& opts = {},
                        AdmmState* state = nullptr);

struct ScaRecord {
    int iter = 0;
    double gamma_db = 0.0;       ///< min_q f_q^H W f_q / (Omega N)^2 in dB
    double rank_residual = 0.0;  ///< |W|_* - |W|_2
    double eta = 0.0;
    std::string status;
    int inner_iterations = 0;
    double penalized = 0.0;       ///< normalized penalized objective at eta
    double penalized_prev = 0.0;  ///< same at the previous iterate
    double profile_db = 0.0;      ///< worst-case normalized GRCS of the extracted profile
};

struct ScaTrace {
    std::vector<ScaRecord> records;
};

struct ScaResult {
    PhaseProfile profile;
    ScaTrace trace;
    CMatrix W;
    double min_grcs = 0.0;  ///< worst-case normalized GRCS of `profile`
    double initial_gamma_db = 0.0;
    double initial_rank_residual = 0.0;
    double initial_profile_db = 0.0;
    bool converged = false;
    bool degraded = false;  ///< rank residual still above tolerance at the end
};

ScaResult penalty_sca(const TargetSet& q, const CMatrix& w0, const ScaParams& params = {});

/// W = w w^H.
CMatrix lift(const PhaseProfile& w);

/// |W|_* - |W|_2 from the eigenvalues of the Hermitian part.
double rank_residual(const CMatrix& W);

/// w = sqrt(tr W) * principal eigenvector, projected entrywise onto the unit circle.
PhaseProfile extract_rank_one(const CMatrix& W);

/// min_q f_q^H W f_q.
double lifted_gamma(const TargetSet& q, const CMatrix& W);

/// gamma(W) / (Omega N)^2 - eta (|W|_* - |W|_2) / (Omega N)^2.
double penalized_objective(const TargetSet& q, const CMatrix& W, double eta);

/// Random full-rank correlation matrix D^{-1/2} A A^H D^{-1/2}, A with CN(0,1) entries.
CMatrix random_initialization(int n, Rng& rng);

struct OracleResult {
    PhaseProfile profile;
    double min_grcs = 0.0;  ///< min_q |f_q^H w|^2, raw units
};

/// Brute force over the L-level phase lattice with the first phase fixed at 0
/// (global-phase invariance). Requires N <= 8 and L^N <= 1e8.
OracleResult exhaustive_oracle(const TargetSet& q, int levels);

/// CSV `iter,gamma_db,rank_residual,eta,status` after a schema comment line.
void write_trace_csv(std::ostream& os, const ScaTrace& trace);

}  // namespace risbeam
