#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "occuflow/basis.hpp"
#include "occuflow/panel.hpp"

namespace occuflow {

struct PenaltyBlock {
    Eigen::Index start = 0;   // first column covered by this block
    Eigen::MatrixXd matrix;   // symmetric PSD
    double weight = 0.0;
};

// Model matrix for the inflow regression. Rows are (flow day, district)
// cells in flow-day-major order; columns are intercept, covariates, weekday
// dummies and smooth-basis columns.
struct DesignMatrix {
    Eigen::MatrixXd X;
    std::vector<std::string> names;
    std::vector<PenaltyBlock> penalties;
    // (flow day index 0..T_flow-1, district index) of each row.
    std::vector<std::pair<int, int>> row_index;

    Eigen::Index rows() const { return X.rows(); }
    Eigen::Index cols() const { return X.cols(); }
    // Assembled penalty matrix S = sum of weight * block, full p x p.
    Eigen::MatrixXd penalty_matrix() const;
};

// Covariate construction settings. Raw covariates are copied through;
// `log7` columns are treated as raw daily infection counts per age group and
// transformed to the logged 7-day average per 100,000 of the week strictly
// before each flow day.
struct CovariateConfig {
    std::vector<std::string> raw;
    std::vector<std::string> log7;
    bool weekday = false;
    // Added to the per-100,000 average before the log; guards zero-infection
    // weeks. With 0 a zero week raises NonPositiveLogInputError.
    double log_epsilon = 1.0;
    BasisSpec basis;
};

DesignMatrix build_covariates(const OccupancyPanel& panel, const CovariateConfig& config);

extern const char* const kWeekdayDummyNames[6];

}  // namespace occuflow
