#pragma once

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "occuflow/flows.hpp"

namespace occuflow {

// Exit probabilities by days-since-admission, on the probability simplex:
// omega[l-1] is the probability of leaving exactly l days after entry.
struct ExitRateVector {
    Eigen::VectorXd omega;

    int max_lag() const { return static_cast<int>(omega.size()); }
    static ExitRateVector uniform(int L) {
        return {Eigen::VectorXd::Constant(L, 1.0 / static_cast<double>(L))};
    }
    // Free parameterization: the first L-1 entries; the last is implied.
    Eigen::VectorXd free() const { return omega.head(omega.size() - 1); }
    static ExitRateVector from_free(const Eigen::VectorXd& free);
};

// Quadratic model of the partial log-likelihood over the L-1 free
// parameters. As produced by score_fisher, `gradient` is the score; the
// shifted linear term used by the QP is built by the caller.
struct QpProblem {
    Eigen::MatrixXd hessian;   // Fisher information, (L-1) x (L-1), PSD
    Eigen::VectorXd gradient;  // length L-1
};

// Poisson partial log-likelihood of the outflows given inflow history
// (0*log 0 := 0). Returns -infinity when some cell has positive outflow but
// zero outflow rate.
double partial_loglik(const ExitRateVector& omega, const LatentFlows& flows);

// Score and Fisher information over the free parameters, with omega_L
// substituted as one minus the rest.
QpProblem score_fisher(const ExitRateVector& omega, const LatentFlows& flows);

// Maximizes gradient' w - 0.5 w' hessian w subject to w >= 0 and
// sum(w) <= 1, by a primal active-set method with a projected-gradient
// fallback. KKT conditions hold within 1e-8.
Eigen::VectorXd qp_solve(const QpProblem& problem);

struct ExitRateFit {
    ExitRateVector omega;
    Eigen::MatrixXd covariance;  // L x L, inverse Fisher mapped to the full vector
    bool converged = true;
    bool flat_likelihood = false;
    int iterations = 0;
};

// Iterated quadratic approximation of the partial log-likelihood from
// `init`, with step-halving so accepted iterates never decrease it.
ExitRateFit fit_exit_rates(const LatentFlows& flows, int max_lag, const ExitRateVector& init);

struct LosSummary {
    double mean_los = 0.0;
    Eigen::VectorXd cumulative_exit;
    std::map<double, int> quantile_days;
};

LosSummary los_summaries(const ExitRateVector& omega,
                         const std::vector<double>& quantiles = {0.5, 0.8, 0.9});

// KKT residual of a candidate solution, for verification: max violation over
// stationarity, feasibility, dual feasibility and complementary slackness.
double qp_kkt_residual(const QpProblem& problem, const Eigen::VectorXd& w);

}  // namespace occuflow
