#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "occuflow/design.hpp"

namespace occuflow {

// Fitted penalized Poisson regression with log link.
struct InflowFit {
    Eigen::VectorXd coefficients;
    Eigen::MatrixXd covariance;  // inverse penalized Fisher information
    std::vector<std::string> names;
    double deviance = 0.0;
    double loglik = 0.0;
    int iterations = 0;
};

// Maximizes the penalized Poisson log-likelihood by IRLS with step-halving.
// Converges on relative penalized-deviance change < 1e-8; throws
// NonconvergenceError past 100 iterations and SingularInformationError when
// the penalized information is numerically singular.
InflowFit fit_poisson(const DesignMatrix& design, const Eigen::VectorXd& y,
                      const Eigen::VectorXd& offset = Eigen::VectorXd());

// exp(X beta + offset), elementwise; strictly positive.
Eigen::VectorXd predict_intensity(const InflowFit& fit, const DesignMatrix& design,
                                  const Eigen::VectorXd& offset = Eigen::VectorXd());

double poisson_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& mu);

}  // namespace occuflow
