#include "occuflow/basis.hpp"

#include <algorithm>
#include <cmath>

#include "occuflow/errors.hpp"

namespace occuflow {

Eigen::MatrixXd bspline_basis(const Eigen::VectorXd& x, double lo, double hi, int rank) {
    constexpr int kOrder = 4;  // cubic
    if (rank < kOrder) {
        throw InsufficientKnotsError("cubic B-spline basis needs rank >= 4, got " +
                                     std::to_string(rank));
    }
    if (!(hi > lo)) throw InsufficientKnotsError("degenerate time range for B-spline basis");
    const int n_interior = rank - kOrder;
    std::vector<double> knots;
    for (int i = 0; i < kOrder; ++i) knots.push_back(lo);
    for (int i = 1; i <= n_interior; ++i) {
        knots.push_back(lo + (hi - lo) * static_cast<double>(i) / (n_interior + 1));
    }
    for (int i = 0; i < kOrder; ++i) knots.push_back(hi);

    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(x.size(), rank);
    const int n_knots = static_cast<int>(knots.size());
    std::vector<double> b(static_cast<std::size_t>(n_knots - 1));
    for (Eigen::Index row = 0; row < x.size(); ++row) {
        double xv = std::clamp(x[row], lo, hi);
        // Cox-de Boor recursion, degree 0 upward.
        for (int j = 0; j < n_knots - 1; ++j) {
            const bool last_span = knots[j] < hi && knots[j + 1] >= hi;
            b[j] = (xv >= knots[j] && (xv < knots[j + 1] || (last_span && xv == hi))) ? 1.0 : 0.0;
        }
        for (int deg = 1; deg < kOrder; ++deg) {
            for (int j = 0; j + deg + 1 < n_knots; ++j) {
                double v = 0.0;
                const double den1 = knots[j + deg] - knots[j];
                if (den1 > 0.0) v += (xv - knots[j]) / den1 * b[j];
                const double den2 = knots[j + deg + 1] - knots[j + 1];
                if (den2 > 0.0) v += (knots[j + deg + 1] - xv) / den2 * b[j + 1];
                b[j] = v;
            }
        }
        for (int j = 0; j < rank; ++j) basis(row, j) = b[j];
    }
    return basis;
}

Eigen::MatrixXd second_difference_matrix(int rank) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(std::max(0, rank - 2), rank);
    for (int i = 0; i + 2 < rank; ++i) {
        d(i, i) = 1.0;
        d(i, i + 1) = -2.0;
        d(i, i + 2) = 1.0;
    }
    return d;
}

std::vector<Eigen::Index> farthest_point_knots(const Eigen::MatrixXd& coords, int k) {
    const Eigen::Index n = coords.rows();
    if (k > n) {
        throw InsufficientKnotsError("requested " + std::to_string(k) + " knots from " +
                                     std::to_string(n) + " centroids");
    }
    const Eigen::RowVector2d mean = coords.colwise().mean();
    Eigen::Index first = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = (coords.row(i) - mean).squaredNorm();
        if (d < best) {
            best = d;
            first = i;
        }
    }
    std::vector<Eigen::Index> chosen{first};
    Eigen::VectorXd min_dist(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        min_dist[i] = (coords.row(i) - coords.row(first)).squaredNorm();
    }
    while (static_cast<int>(chosen.size()) < k) {
        Eigen::Index next = 0;
        double far = -1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (min_dist[i] > far) {
                far = min_dist[i];
                next = i;
            }
        }
        chosen.push_back(next);
        for (Eigen::Index i = 0; i < n; ++i) {
            min_dist[i] = std::min(min_dist[i], (coords.row(i) - coords.row(next)).squaredNorm());
        }
    }
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

Eigen::MatrixXd radial_basis(const Eigen::MatrixXd& points, const Eigen::MatrixXd& knots) {
    Eigen::MatrixXd out(points.rows(), knots.rows());
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        for (Eigen::Index j = 0; j < knots.rows(); ++j) {
            const double r2 = (points.row(i) - knots.row(j)).squaredNorm();
            out(i, j) = r2 > 0.0 ? 0.5 * r2 * std::log(r2) : 0.0;  // r^2 log r
        }
    }
    return out;
}

std::vector<BasisBlock> build_basis(const Eigen::VectorXd& times, const Eigen::MatrixXd& coords,
                                    const BasisSpec& spec) {
    std::vector<BasisBlock> blocks;
    if (spec.time_enabled()) {
        BasisBlock block;
        block.columns = bspline_basis(times, times.minCoeff(), times.maxCoeff(), spec.time_rank);
        const Eigen::MatrixXd d2 = second_difference_matrix(spec.time_rank);
        block.penalty = d2.transpose() * d2;
        block.weight = spec.time_penalty;
        for (int j = 0; j < spec.time_rank; ++j) {
            block.names.push_back("s_time." + std::to_string(j + 1));
        }
        blocks.push_back(std::move(block));
    }
    if (spec.space_enabled()) {
        if (spec.space_rank < 3) {
            throw InsufficientKnotsError("space basis needs rank >= 3");
        }
        if (coords.rows() != times.size()) {
            throw InsufficientKnotsError("space basis requested without per-row centroids");
        }
        // Unique centroids define the knot candidates.
        std::vector<Eigen::Index> unique_rows;
        for (Eigen::Index i = 0; i < coords.rows(); ++i) {
            bool dup = false;
            for (const auto j : unique_rows) {
                if ((coords.row(i) - coords.row(j)).squaredNorm() == 0.0) {
                    dup = true;
                    break;
                }
            }
            if (!dup) unique_rows.push_back(i);
        }
        Eigen::MatrixXd candidates(static_cast<Eigen::Index>(unique_rows.size()), 2);
        for (std::size_t i = 0; i < unique_rows.size(); ++i) {
            candidates.row(static_cast<Eigen::Index>(i)) = coords.row(unique_rows[i]);
        }
        const auto knot_rows = farthest_point_knots(candidates, spec.space_rank);
        Eigen::MatrixXd knots(spec.space_rank, 2);
        for (int i = 0; i < spec.space_rank; ++i) knots.row(i) = candidates.row(knot_rows[i]);

        BasisBlock radial;
        radial.columns = radial_basis(coords, knots);
        radial.penalty = Eigen::MatrixXd::Identity(spec.space_rank, spec.space_rank);
        radial.weight = spec.space_penalty;
        for (int j = 0; j < spec.space_rank; ++j) {
            radial.names.push_back("s_space." + std::to_string(j + 1));
        }
        blocks.push_back(std::move(radial));

        BasisBlock linear;
        linear.columns = coords;
        linear.penalty = Eigen::MatrixXd::Zero(2, 2);
        linear.weight = 0.0;
        linear.names = {"s_space.lon", "s_space.lat"};
        blocks.push_back(std::move(linear));
    }
    // Center all smooth columns; the constant is carried by the intercept.
    for (auto& block : blocks) {
        block.columns.rowwise() -= block.columns.colwise().mean();
    }
    return blocks;
}

}  // namespace occuflow
