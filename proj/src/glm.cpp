#include "occuflow/glm.hpp"

#include <cmath>

#include "occuflow/errors.hpp"

namespace occuflow {

namespace {

constexpr double kWeightFloor = 1e-10;
constexpr double kDevianceTol = 1e-8;
constexpr int kMaxIterations = 100;
constexpr int kMaxHalvings = 10;

Eigen::MatrixXd solve_spd(const Eigen::MatrixXd& a, const Eigen::MatrixXd& rhs) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    if (ldlt.info() != Eigen::Success) {
        throw SingularInformationError("penalized information factorization failed");
    }
    const Eigen::VectorXd d = ldlt.vectorD();
    const double dmax = d.maxCoeff();
    if (dmax <= 0.0 || d.minCoeff() < dmax * 1e-14) {
        throw SingularInformationError("penalized information is numerically singular");
    }
    return ldlt.solve(rhs);
}

}  // namespace

double poisson_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& mu) {
    double dev = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        double term = mu[i] - y[i];
        if (y[i] > 0.0) term += y[i] * std::log(y[i] / mu[i]);
        dev += 2.0 * term;
    }
    return dev;
}

InflowFit fit_poisson(const DesignMatrix& design, const Eigen::VectorXd& y,
                      const Eigen::VectorXd& offset_in) {
    const Eigen::Index n = design.rows();
    const Eigen::Index p = design.cols();
    if (y.size() != n) {
        throw DimensionMismatchError("response length " + std::to_string(y.size()) +
                                     " does not match design rows " + std::to_string(n));
    }
    if (y.minCoeff() < 0.0) throw DimensionMismatchError("negative count in response");
    const Eigen::VectorXd offset =
        offset_in.size() == 0 ? Eigen::VectorXd::Zero(n) : offset_in;
    if (offset.size() != n) throw DimensionMismatchError("offset length mismatch");

    const Eigen::MatrixXd S = design.penalty_matrix();
    const auto penalized_dev = [&](const Eigen::VectorXd& beta, const Eigen::VectorXd& mu) {
        return poisson_deviance(y, mu) + beta.dot(S * beta);
    };

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd eta = ((y.array() + 0.5).log() - offset.array()).matrix();
    // One unpenalized least-squares pass on the working response seeds beta.
    {
        Eigen::VectorXd mu0 = (eta + offset).array().exp();
        Eigen::VectorXd w = mu0.array().max(kWeightFloor);
        const Eigen::MatrixXd xtwx =
            design.X.transpose() * w.asDiagonal() * design.X + S;
        const Eigen::VectorXd xtwz = design.X.transpose() * (w.asDiagonal() * eta);
        beta = solve_spd(xtwx, xtwz);
    }

    Eigen::VectorXd mu = (design.X * beta + offset).array().exp();
    double dev = penalized_dev(beta, mu);
    int iter = 0;
    bool converged = false;
    for (; iter < kMaxIterations; ++iter) {
        eta = design.X * beta;
        Eigen::VectorXd w = mu.array().max(kWeightFloor);
        const Eigen::VectorXd z = eta + ((y - mu).array() / w.array()).matrix();
        const Eigen::MatrixXd xtwx =
            design.X.transpose() * w.asDiagonal() * design.X + S;
        const Eigen::VectorXd xtwz = design.X.transpose() * (w.asDiagonal() * z);
        Eigen::VectorXd beta_new = solve_spd(xtwx, xtwz);

        Eigen::VectorXd step = beta_new - beta;
        Eigen::VectorXd mu_new = (design.X * beta_new + offset).array().exp();
        double dev_new = penalized_dev(beta_new, mu_new);
        int halvings = 0;
        while ((!std::isfinite(dev_new) || dev_new > dev * (1.0 + 1e-12)) &&
               halvings < kMaxHalvings) {
            step *= 0.5;
            beta_new = beta + step;
            mu_new = (design.X * beta_new + offset).array().exp();
            dev_new = penalized_dev(beta_new, mu_new);
            ++halvings;
        }
        if (!std::isfinite(dev_new)) {
            throw NonconvergenceError("IRLS produced non-finite deviance");
        }
        const double rel_change = std::abs(dev - dev_new) / (std::abs(dev_new) + 0.1);
        beta = beta_new;
        mu = mu_new;
        dev = dev_new;
        if (rel_change < kDevianceTol) {
            converged = true;
            ++iter;
            break;
        }
    }
    if (!converged) {
        throw NonconvergenceError("IRLS did not converge in " +
                                  std::to_string(kMaxIterations) + " iterations");
    }

    InflowFit fit;
    fit.coefficients = beta;
    fit.names = design.names;
    fit.iterations = iter;
    fit.deviance = poisson_deviance(y, mu);
    double ll = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        ll += y[i] * std::log(mu[i]) - mu[i] - std::lgamma(y[i] + 1.0);
    }
    fit.loglik = ll;
    const Eigen::VectorXd w = mu.array().max(kWeightFloor);
    const Eigen::MatrixXd info = design.X.transpose() * w.asDiagonal() * design.X + S;
    fit.covariance = solve_spd(info, Eigen::MatrixXd::Identity(p, p));
    return fit;
}

Eigen::VectorXd predict_intensity(const InflowFit& fit, const DesignMatrix& design,
                                  const Eigen::VectorXd& offset) {
    if (design.cols() != fit.coefficients.size()) {
        throw DimensionMismatchError("design width " + std::to_string(design.cols()) +
                                     " does not match coefficient length " +
                                     std::to_string(fit.coefficients.size()));
    }
    Eigen::VectorXd eta = design.X * fit.coefficients;
    if (offset.size() > 0) {
        if (offset.size() != eta.size()) throw DimensionMismatchError("offset length mismatch");
        eta += offset;
    }
    return eta.array().exp();
}

}  // namespace occuflow
