#include "occuflow/exit_rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "occuflow/errors.hpp"

namespace occuflow {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kKktTol = 1e-8;
constexpr double kFitTol = 1e-8;
constexpr int kMaxFitIterations = 200;
constexpr int kMaxHalvings = 30;

// Outflow rate sum_l omega_l I_(t-l,d) for flow day t (1-based).
double outflow_rate(const Eigen::VectorXd& omega, const LatentFlows& flows, Eigen::Index t,
                    Eigen::Index d) {
    double rate = 0.0;
    for (int l = 1; l <= omega.size(); ++l) {
        rate += omega[l - 1] * static_cast<double>(flows.inflow_at(t - l, d));
    }
    return rate;
}

void check_history(const LatentFlows& flows, int max_lag) {
    if (flows.burn_in < max_lag) {
        throw DimensionMismatchError("flows carry burn-in " + std::to_string(flows.burn_in) +
                                     " but max lag is " + std::to_string(max_lag));
    }
}

// Euclidean projection onto {w >= 0, sum(w) <= 1}.
Eigen::VectorXd project_feasible(const Eigen::VectorXd& w) {
    Eigen::VectorXd clipped = w.cwiseMax(0.0);
    if (clipped.sum() <= 1.0) return clipped;
    // Project onto the full simplex via the sorted-threshold rule.
    std::vector<double> u(w.data(), w.data() + w.size());
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cum = 0.0;
    double tau = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        cum += u[k];
        const double t = (cum - 1.0) / static_cast<double>(k + 1);
        if (k + 1 == u.size() || u[k + 1] <= t) {
            tau = t;
            if (u[k] > t) break;
        }
    }
    return (w.array() - tau).max(0.0);
}

Eigen::VectorXd projected_gradient_solve(const QpProblem& p) {
    const Eigen::Index n = p.gradient.size();
    double lip = p.hessian.norm();
    if (lip <= 0.0) lip = 1.0;
    const double step = 1.0 / lip;
    Eigen::VectorXd w = project_feasible(p.hessian.ldlt().solve(p.gradient));
    for (int iter = 0; iter < 200000; ++iter) {
        Eigen::VectorXd grad = p.hessian * w - p.gradient;
        Eigen::VectorXd w_new = project_feasible(w - step * grad);
        const double change = (w_new - w).lpNorm<Eigen::Infinity>();
        w = w_new;
        if (change < 1e-13) break;
    }
    (void)n;
    return w;
}

}  // namespace

ExitRateVector ExitRateVector::from_free(const Eigen::VectorXd& free) {
    ExitRateVector out;
    out.omega.resize(free.size() + 1);
    out.omega.head(free.size()) = free;
    out.omega[free.size()] = 1.0 - free.sum();
    return out;
}

double partial_loglik(const ExitRateVector& omega, const LatentFlows& flows) {
    check_history(flows, omega.max_lag());
    double ll = 0.0;
    for (Eigen::Index t = 1; t <= flows.num_flow_days(); ++t) {
        for (Eigen::Index d = 0; d < flows.num_districts(); ++d) {
            const double rate = outflow_rate(omega.omega, flows, t, d);
            const double r = static_cast<double>(flows.outflow_at(t, d));
            if (r > 0.0) {
                if (rate <= 0.0) return kNegInf;
                ll += r * std::log(rate);
            }
            ll -= rate;
        }
    }
    return ll;
}

QpProblem score_fisher(const ExitRateVector& omega, const LatentFlows& flows) {
    const int L = omega.max_lag();
    check_history(flows, L);
    const Eigen::Index nfree = L - 1;
    QpProblem out;
    out.gradient = Eigen::VectorXd::Zero(nfree);
    out.hessian = Eigen::MatrixXd::Zero(nfree, nfree);
    Eigen::VectorXd u(nfree);
    for (Eigen::Index t = 1; t <= flows.num_flow_days(); ++t) {
        for (Eigen::Index d = 0; d < flows.num_districts(); ++d) {
            const double rate = outflow_rate(omega.omega, flows, t, d);
            const double r = static_cast<double>(flows.outflow_at(t, d));
            if (r > 0.0 && rate <= 0.0) {
                throw ZeroRateError("positive outflow with zero rate at t=" + std::to_string(t) +
                                    ", d=" + std::to_string(d));
            }
            const double tail = static_cast<double>(flows.inflow_at(t - L, d));
            for (int l = 1; l < L; ++l) {
                u[l - 1] = static_cast<double>(flows.inflow_at(t - l, d)) - tail;
            }
            const double ratio = r > 0.0 ? r / rate : 0.0;
            out.gradient += u * (ratio - 1.0);
            if (r > 0.0) {
                out.hessian += (r / (rate * rate)) * (u * u.transpose());
            }
        }
    }
    return out;
}

double qp_kkt_residual(const QpProblem& p, const Eigen::VectorXd& w) {
    const Eigen::Index n = p.gradient.size();
    const Eigen::VectorXd grad = p.hessian * w - p.gradient;  // of the minimization form
    const double slack = 1.0 - w.sum();
    // Recover multipliers: nu from free coordinates, mu from bound-active ones.
    double nu = 0.0;
    if (slack < kKktTol) {
        double acc = 0.0;
        int count = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (w[i] > kKktTol) {
                acc += -grad[i];
                ++count;
            }
        }
        nu = count > 0 ? acc / count : 0.0;
        if (nu < 0.0) nu = 0.0;
    }
    double res = 0.0;
    res = std::max(res, -slack);           // primal feasibility of the sum constraint
    res = std::max(res, -w.minCoeff());    // primal feasibility of the bounds
    res = std::max(res, -nu * slack);      // complementary slackness (nu >= 0 by above)
    for (Eigen::Index i = 0; i < n; ++i) {
        const double mu = grad[i] + nu;
        if (w[i] > kKktTol) {
            res = std::max(res, std::abs(mu));  // stationarity on free coordinates
        } else {
            res = std::max(res, -mu);           // dual feasibility on active bounds
            res = std::max(res, std::abs(mu * w[i]));
        }
    }
    return res;
}

Eigen::VectorXd qp_solve(const QpProblem& problem) {
    const Eigen::Index n = problem.gradient.size();
    if (problem.hessian.rows() != n || problem.hessian.cols() != n) {
        throw DimensionMismatchError("QP hessian/gradient dimensions disagree");
    }
    if (n == 0) return Eigen::VectorXd();

    // Working set: bound_active per coordinate plus the sum constraint.
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    std::vector<bool> bound_active(static_cast<std::size_t>(n), true);
    bool sum_active = false;
    const double ridge_base = std::max(1.0, problem.hessian.trace() / static_cast<double>(n));

    const auto solve_eqp = [&](Eigen::VectorXd& direction) {
        std::vector<Eigen::Index> free_idx;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!bound_active[static_cast<std::size_t>(i)]) free_idx.push_back(i);
        }
        direction = Eigen::VectorXd::Zero(n);
        const Eigen::Index nf = static_cast<Eigen::Index>(free_idx.size());
        if (nf == 0) return;
        const Eigen::VectorXd r = problem.gradient - problem.hessian * w;
        const Eigen::Index dim = sum_active ? nf + 1 : nf;
        Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(dim, dim);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim);
        for (Eigen::Index a = 0; a < nf; ++a) {
            rhs[a] = r[free_idx[static_cast<std::size_t>(a)]];
            for (Eigen::Index b = 0; b < nf; ++b) {
                kkt(a, b) = problem.hessian(free_idx[static_cast<std::size_t>(a)],
                                            free_idx[static_cast<std::size_t>(b)]);
            }
        }
        if (sum_active) {
            for (Eigen::Index a = 0; a < nf; ++a) {
                kkt(a, nf) = 1.0;
                kkt(nf, a) = 1.0;
            }
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
        if (!lu.isInvertible()) {
            for (Eigen::Index a = 0; a < nf; ++a) kkt(a, a) += 1e-12 * ridge_base;
            lu.compute(kkt);
            if (!lu.isInvertible()) {
                throw NumericalFailureError("QP equality subproblem is singular");
            }
        }
        const Eigen::VectorXd sol = lu.solve(rhs);
        for (Eigen::Index a = 0; a < nf; ++a) {
            direction[free_idx[static_cast<std::size_t>(a)]] = sol[a];
        }
    };

    const int max_cycles = 50 + 20 * static_cast<int>(n);
    for (int cycle = 0; cycle < max_cycles; ++cycle) {
        Eigen::VectorXd d;
        solve_eqp(d);
        if (d.lpNorm<Eigen::Infinity>() < 1e-12) {
            // Check multipliers and release the most negative constraint.
            const Eigen::VectorXd grad = problem.hessian * w - problem.gradient;
            double nu = 0.0;
            if (sum_active) {
                for (Eigen::Index i = 0; i < n; ++i) {
                    if (!bound_active[static_cast<std::size_t>(i)]) {
                        nu = -grad[i];
                        break;
                    }
                }
            }
            double worst = -kKktTol;
            int worst_bound = -1;
            bool release_sum = false;
            if (sum_active && nu < worst) {
                worst = nu;
                release_sum = true;
            }
            for (Eigen::Index i = 0; i < n; ++i) {
                if (!bound_active[static_cast<std::size_t>(i)]) continue;
                const double mu = grad[i] + nu;
                if (mu < worst) {
                    worst = mu;
                    worst_bound = static_cast<int>(i);
                    release_sum = false;
                }
            }
            if (worst_bound < 0 && !release_sum) return w;  // KKT satisfied
            if (release_sum) {
                sum_active = false;
            } else {
                bound_active[static_cast<std::size_t>(worst_bound)] = false;
            }
            continue;
        }
        // Step toward the EQP solution, stopping at the first blocking constraint.
        double alpha = 1.0;
        int blocking_bound = -1;
        bool blocking_sum = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (!bound_active[static_cast<std::size_t>(i)] && d[i] < 0.0) {
                const double a = -w[i] / d[i];
                if (a < alpha) {
                    alpha = a;
                    blocking_bound = static_cast<int>(i);
                    blocking_sum = false;
                }
            }
        }
        if (!sum_active) {
            const double dsum = d.sum();
            if (dsum > 1e-15) {
                const double a = (1.0 - w.sum()) / dsum;
                if (a < alpha) {
                    alpha = a;
                    blocking_sum = true;
                    blocking_bound = -1;
                }
            }
        }
        w += std::max(0.0, alpha) * d;
        if (blocking_bound >= 0) {
            w[blocking_bound] = 0.0;
            bound_active[static_cast<std::size_t>(blocking_bound)] = true;
        } else if (blocking_sum) {
            sum_active = true;
        }
    }
    // Active-set cycling: fall back to projected gradient.
    return projected_gradient_solve(problem);
}

ExitRateFit fit_exit_rates(const LatentFlows& flows, int max_lag, const ExitRateVector& init) {
    if (max_lag < 1) throw DimensionMismatchError("max lag must be >= 1");
    ExitRateFit fit;
    if (max_lag == 1) {
        fit.omega.omega = Eigen::VectorXd::Ones(1);
        fit.covariance = Eigen::MatrixXd::Zero(1, 1);
        return fit;
    }
    check_history(flows, max_lag);
    if (init.max_lag() != max_lag) throw DimensionMismatchError("init has wrong length");

    ExitRateVector omega = init;
    double ll = partial_loglik(omega, flows);
    QpProblem model = score_fisher(omega, flows);
    if (model.gradient.lpNorm<Eigen::Infinity>() == 0.0 &&
        model.hessian.lpNorm<Eigen::Infinity>() == 0.0) {
        fit.omega = init;
        fit.flat_likelihood = true;
        fit.covariance = Eigen::MatrixXd::Zero(max_lag, max_lag);
        return fit;
    }

    int iter = 0;
    bool converged = false;
    for (; iter < kMaxFitIterations; ++iter) {
        const Eigen::VectorXd w_cur = omega.free();
        QpProblem qp;
        qp.hessian = model.hessian;
        qp.gradient = model.gradient + model.hessian * w_cur;
        Eigen::VectorXd w_new = qp_solve(qp);

        ExitRateVector cand = ExitRateVector::from_free(w_new);
        double ll_new = partial_loglik(cand, flows);
        int halvings = 0;
        while (ll_new < ll - 1e-12 && halvings < kMaxHalvings) {
            w_new = 0.5 * (w_new + w_cur);
            cand = ExitRateVector::from_free(w_new);
            ll_new = partial_loglik(cand, flows);
            ++halvings;
        }
        if (ll_new < ll - 1e-12) {
            // No ascent step left at this quadratic model; treat as converged.
            converged = true;
            ++iter;
            break;
        }
        const double change = (cand.omega - omega.omega).lpNorm<Eigen::Infinity>();
        omega = cand;
        ll = ll_new;
        model = score_fisher(omega, flows);
        if (change < kFitTol) {
            converged = true;
            ++iter;
            break;
        }
    }

    // Clean the final iterate onto the simplex exactly.
    Eigen::VectorXd v = omega.omega.cwiseMax(0.0);
    const double total = v.sum();
    if (total > 0.0) v /= total;
    fit.omega.omega = v;
    fit.converged = converged;
    fit.iterations = iter;

    // Covariance: inverse Fisher over free parameters, mapped to the full
    // vector with the implied last entry (delta method).
    const Eigen::Index nfree = max_lag - 1;
    Eigen::MatrixXd fisher = score_fisher(fit.omega, flows).hessian;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(fisher);
    Eigen::VectorXd inv_vals = eig.eigenvalues();
    const double cutoff = std::max(inv_vals.cwiseAbs().maxCoeff(), 1.0) * 1e-12;
    for (Eigen::Index i = 0; i < inv_vals.size(); ++i) {
        inv_vals[i] = inv_vals[i] > cutoff ? 1.0 / inv_vals[i] : 0.0;
    }
    const Eigen::MatrixXd cov_free =
        eig.eigenvectors() * inv_vals.asDiagonal() * eig.eigenvectors().transpose();
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(max_lag, nfree);
    jac.topRows(nfree) = Eigen::MatrixXd::Identity(nfree, nfree);
    jac.bottomRows(1) = Eigen::RowVectorXd::Constant(nfree, -1.0);
    fit.covariance = jac * cov_free * jac.transpose();
    return fit;
}

LosSummary los_summaries(const ExitRateVector& omega, const std::vector<double>& quantiles) {
    LosSummary out;
    const int L = omega.max_lag();
    out.cumulative_exit.resize(L);
    double cum = 0.0;
    for (int l = 1; l <= L; ++l) {
        out.mean_los += static_cast<double>(l) * omega.omega[l - 1];
        cum += omega.omega[l - 1];
        out.cumulative_exit[l - 1] = cum;
    }
    for (const double q : quantiles) {
        int day = L;
        for (int l = 1; l <= L; ++l) {
            if (out.cumulative_exit[l - 1] >= q - 1e-12) {
                day = l;
                break;
            }
        }
        out.quantile_days[q] = day;
    }
    return out;
}

}  // namespace occuflow
