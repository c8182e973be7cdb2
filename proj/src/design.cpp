#include "occuflow/design.hpp"

#include <cmath>

#include "occuflow/errors.hpp"

namespace occuflow {

const char* const kWeekdayDummyNames[6] = {"Monday",   "Tuesday", "Wednesday",
                                           "Thursday", "Saturday", "Sunday"};

namespace {

// Column index of the dummy set for a weekday, or -1 for the Friday reference.
int weekday_dummy_slot(int weekday) {
    switch (static_cast<Weekday>(weekday)) {
        case Weekday::kMonday: return 0;
        case Weekday::kTuesday: return 1;
        case Weekday::kWednesday: return 2;
        case Weekday::kThursday: return 3;
        case Weekday::kSaturday: return 4;
        case Weekday::kSunday: return 5;
        case Weekday::kFriday: return -1;
        default: return -1;
    }
}

}  // namespace

Eigen::MatrixXd DesignMatrix::penalty_matrix() const {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(cols(), cols());
    for (const auto& block : penalties) {
        const Eigen::Index w = block.matrix.rows();
        s.block(block.start, block.start, w, w) += block.weight * block.matrix;
    }
    return s;
}

DesignMatrix build_covariates(const OccupancyPanel& panel, const CovariateConfig& config) {
    const Eigen::Index T = panel.num_days();
    const Eigen::Index D = panel.num_districts();
    if (T < 2) throw PanelTooShortError("design needs at least 2 panel days");
    const Eigen::Index Tf = T - 1;
    const Eigen::Index n = Tf * D;

    for (const auto& name : config.raw) {
        if (!panel.covariates.count(name)) {
            throw UnknownCovariateError("covariate '" + name + "' not in panel");
        }
    }
    for (const auto& name : config.log7) {
        if (!panel.covariates.count(name)) {
            throw UnknownCovariateError("covariate '" + name + "' not in panel");
        }
    }

    DesignMatrix design;
    design.row_index.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index r = 0; r < Tf; ++r) {
        for (Eigen::Index d = 0; d < D; ++d) {
            design.row_index.emplace_back(static_cast<int>(r), static_cast<int>(d));
        }
    }

    std::vector<Eigen::VectorXd> columns;
    columns.push_back(Eigen::VectorXd::Ones(n));
    design.names.push_back("(Intercept)");

    for (const auto& name : config.raw) {
        const auto& values = panel.covariates.at(name);
        Eigen::VectorXd col(n);
        for (Eigen::Index row = 0; row < n; ++row) {
            const auto [r, d] = design.row_index[static_cast<std::size_t>(row)];
            col[row] = values(r + 1, d);
        }
        columns.push_back(std::move(col));
        design.names.push_back(name);
    }

    for (const auto& name : config.log7) {
        const auto& counts = panel.covariates.at(name);
        Eigen::VectorXd col(n);
        for (Eigen::Index row = 0; row < n; ++row) {
            const auto [r, d] = design.row_index[static_cast<std::size_t>(row)];
            const Eigen::Index day = r + 1;  // panel day of this flow cell
            const Eigen::Index lo = std::max<Eigen::Index>(0, day - 7);
            double mean = 0.0;
            for (Eigen::Index s = lo; s < day; ++s) mean += counts(s, d);
            mean /= static_cast<double>(day - lo);
            const double scale =
                panel.has_population() ? panel.population(d) * 1e-5 : 1.0;
            const double per100k = mean / scale;
            const double shifted = per100k + config.log_epsilon;
            if (shifted <= 0.0) {
                throw NonPositiveLogInputError("log of non-positive 7-day average for '" + name +
                                               "' at " + panel.dates[day].to_iso());
            }
            col[row] = std::log(shifted);
        }
        columns.push_back(std::move(col));
        design.names.push_back("log7." + name);
    }

    if (config.weekday) {
        Eigen::MatrixXd dummies = Eigen::MatrixXd::Zero(n, 6);
        for (Eigen::Index row = 0; row < n; ++row) {
            const auto [r, d] = design.row_index[static_cast<std::size_t>(row)];
            const int slot = weekday_dummy_slot(panel.dates[r + 1].weekday());
            if (slot >= 0) dummies(row, slot) = 1.0;
        }
        for (int j = 0; j < 6; ++j) {
            columns.push_back(dummies.col(j));
            design.names.push_back(kWeekdayDummyNames[j]);
        }
    }

    const Eigen::Index p = static_cast<Eigen::Index>(columns.size());

    std::vector<BasisBlock> blocks;
    if (config.basis.time_enabled() || config.basis.space_enabled()) {
        Eigen::VectorXd times(n);
        Eigen::MatrixXd coords;
        if (config.basis.space_enabled()) {
            if (!panel.has_centroids()) {
                throw InsufficientKnotsError("space basis requested but panel lacks centroids");
            }
            coords.resize(n, 2);
        }
        for (Eigen::Index row = 0; row < n; ++row) {
            const auto [r, d] = design.row_index[static_cast<std::size_t>(row)];
            times[row] = static_cast<double>(r + 1);
            if (config.basis.space_enabled()) {
                coords(row, 0) = panel.districts[static_cast<std::size_t>(d)].lon;
                coords(row, 1) = panel.districts[static_cast<std::size_t>(d)].lat;
            }
        }
        blocks = build_basis(times, coords, config.basis);
    }

    Eigen::Index total = p;
    for (const auto& block : blocks) total += block.columns.cols();

    design.X.resize(n, total);
    for (Eigen::Index j = 0; j < p; ++j) design.X.col(j) = columns[static_cast<std::size_t>(j)];
    Eigen::Index offset = p;
    for (const auto& block : blocks) {
        const Eigen::Index w = block.columns.cols();
        design.X.middleCols(offset, w) = block.columns;
        for (const auto& name : block.names) design.names.push_back(name);
        if (block.weight > 0.0 && block.penalty.size() > 0) {
            design.penalties.push_back({offset, block.penalty, block.weight});
        }
        offset += w;
    }
    return design;
}

}  // namespace occuflow
