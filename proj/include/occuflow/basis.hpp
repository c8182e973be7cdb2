#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace occuflow {

// Fixed-rank smooth bases for the inflow linear predictor: a cubic B-spline
// over time and a low-rank radial (thin-plate-type) surface over district
// centroids. Penalty weights are fixed, not selected automatically.
struct BasisSpec {
    int time_rank = 0;          // number of B-spline basis functions; 0 disables
    double time_penalty = 1.0;  // weight on the second-difference penalty
    int space_rank = 0;         // number of radial knots; 0 disables
    double space_penalty = 1.0; // ridge weight on the radial coefficients

    bool time_enabled() const { return time_rank > 0; }
    bool space_enabled() const { return space_rank > 0; }
};

// Raw (uncentered) cubic B-spline basis with `rank` functions on equally
// spaced interior knots over [lo, hi]; rows sum to one on the interval.
Eigen::MatrixXd bspline_basis(const Eigen::VectorXd& x, double lo, double hi, int rank);

// (rank-2) x rank second-difference matrix; penalty is D^T D.
Eigen::MatrixXd second_difference_matrix(int rank);

// Deterministic farthest-point sampling over rows of `coords` (n x 2).
// Starts from the point nearest the centroid mean and greedily adds the
// point farthest from the selected set.
std::vector<Eigen::Index> farthest_point_knots(const Eigen::MatrixXd& coords, int k);

// Thin-plate radial functions r^2 log r evaluated at each row of `points`
// against each knot row (value 0 at r = 0).
Eigen::MatrixXd radial_basis(const Eigen::MatrixXd& points, const Eigen::MatrixXd& knots);

// One block of basis columns with its penalty over those columns.
struct BasisBlock {
    Eigen::MatrixXd columns;
    std::vector<std::string> names;
    Eigen::MatrixXd penalty;  // symmetric PSD, columns x columns
    double weight = 0.0;
};

// Evaluated smooth blocks, column-centered so an unpenalized intercept stays
// identified. `times` gives the per-row time value; `coords` the per-row
// (lon, lat), required when the space basis is enabled.
std::vector<BasisBlock> build_basis(const Eigen::VectorXd& times, const Eigen::MatrixXd& coords,
                                    const BasisSpec& spec);

}  // namespace occuflow
