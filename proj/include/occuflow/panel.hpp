#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "occuflow/csv.hpp"
#include "occuflow/dates.hpp"
#include "occuflow/flows.hpp"

namespace occuflow {

struct District {
    std::string id;
    double lon = std::numeric_limits<double>::quiet_NaN();
    double lat = std::numeric_limits<double>::quiet_NaN();
};

// Rectangular occupancy panel: one nonnegative integer bed count per
// (day, district), days contiguous, districts sorted by id.
struct OccupancyPanel {
    std::vector<District> districts;
    std::vector<Date> dates;
    Eigen::MatrixXi occupancy;                      // T x D
    std::map<std::string, Eigen::MatrixXd> covariates;  // each T x D
    Eigen::VectorXd population;                     // size D, or empty

    Eigen::Index num_days() const { return occupancy.rows(); }
    Eigen::Index num_districts() const { return occupancy.cols(); }
    bool has_population() const { return population.size() > 0; }
    bool has_centroids() const;
    int district_index(const std::string& id) const;  // -1 if absent
};

// Signed first differences of occupancy, one row per flow day t = 1..T-1
// (row r is occupancy[r+1] - occupancy[r]).
struct DeltaSeries {
    Eigen::MatrixXi delta;  // (T-1) x D

    Eigen::Index num_flow_days() const { return delta.rows(); }
    Eigen::Index num_districts() const { return delta.cols(); }
};

// Column names for panel ingestion. Covariate, population and centroid
// columns are optional.
struct IngestSchema {
    std::string date_col = "date";
    std::string district_col = "district_id";
    std::string occupancy_col = "occupancy";
    std::vector<std::string> covariate_cols;
    std::string population_col;
    std::string lon_col;
    std::string lat_col;
};

OccupancyPanel load_panel(const std::string& path, const IngestSchema& schema);
OccupancyPanel load_panel_table(const CsvTable& table, const IngestSchema& schema);
void write_panel_csv(const OccupancyPanel& panel, const IngestSchema& schema,
                     const std::string& path);

DeltaSeries compute_deltas(const OccupancyPanel& panel);

struct RegionMap {
    std::map<std::string, std::string> district_to_region;
};

RegionMap load_region_map(const std::string& path);
RegionMap region_map_from_table(const CsvTable& table);

// Per-region daily totals of latent flow draws over the observed window.
struct RegionFlows {
    std::vector<std::string> regions;  // sorted
    Eigen::MatrixXi inflow;            // T_flow x R
    Eigen::MatrixXi outflow;           // T_flow x R
};

RegionFlows aggregate_flows(const LatentFlows& flows, const std::vector<District>& districts,
                            const RegionMap& map);

// Group-by-sum of real-valued per-district columns (used for aggregating
// summarized flow estimates).
std::pair<std::vector<std::string>, Eigen::MatrixXd> aggregate_columns(
    const Eigen::MatrixXd& per_district, const std::vector<District>& districts,
    const RegionMap& map);

}  // namespace occuflow
