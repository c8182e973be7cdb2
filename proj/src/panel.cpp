#include "occuflow/panel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "occuflow/errors.hpp"

namespace occuflow {

namespace {

double parse_double(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw SchemaError("cannot parse '" + s + "' as number for " + what);
    }
}

long parse_count(const std::string& s, const std::string& what) {
    const double v = parse_double(s, what);
    const long n = std::lround(v);
    if (std::abs(v - static_cast<double>(n)) > 1e-9) {
        throw SchemaError("non-integer value '" + s + "' for " + what);
    }
    return n;
}

}  // namespace

bool OccupancyPanel::has_centroids() const {
    for (const auto& d : districts) {
        if (std::isnan(d.lon) || std::isnan(d.lat)) return false;
    }
    return !districts.empty();
}

int OccupancyPanel::district_index(const std::string& id) const {
    for (std::size_t i = 0; i < districts.size(); ++i) {
        if (districts[i].id == id) return static_cast<int>(i);
    }
    return -1;
}

OccupancyPanel load_panel_table(const CsvTable& table, const IngestSchema& schema) {
    const std::size_t c_date = table.column(schema.date_col);
    const std::size_t c_district = table.column(schema.district_col);
    const std::size_t c_occ = table.column(schema.occupancy_col);
    std::vector<std::size_t> c_cov;
    for (const auto& name : schema.covariate_cols) c_cov.push_back(table.column(name));
    const bool has_pop = !schema.population_col.empty();
    const bool has_lonlat = !schema.lon_col.empty() && !schema.lat_col.empty();
    const std::size_t c_pop = has_pop ? table.column(schema.population_col) : 0;
    const std::size_t c_lon = has_lonlat ? table.column(schema.lon_col) : 0;
    const std::size_t c_lat = has_lonlat ? table.column(schema.lat_col) : 0;

    std::set<std::string> district_ids;
    std::set<std::int64_t> day_set;
    for (const auto& row : table.rows) {
        district_ids.insert(row[c_district]);
        day_set.insert(Date::parse_iso(row[c_date]).days_since_epoch());
    }
    if (district_ids.empty()) throw SchemaError("panel has no rows");

    OccupancyPanel panel;
    for (const auto& id : district_ids) panel.districts.push_back({id});
    const std::int64_t day_lo = *day_set.begin();
    const std::int64_t day_hi = *day_set.rbegin();
    const Eigen::Index T = static_cast<Eigen::Index>(day_hi - day_lo + 1);
    const Eigen::Index D = static_cast<Eigen::Index>(panel.districts.size());
    for (Eigen::Index t = 0; t < T; ++t) panel.dates.push_back(Date(day_lo + t));

    std::unordered_map<std::string, int> dindex;
    for (Eigen::Index d = 0; d < D; ++d) dindex[panel.districts[d].id] = static_cast<int>(d);

    panel.occupancy.setConstant(T, D, -1);
    for (const auto& name : schema.covariate_cols) {
        panel.covariates[name] = Eigen::MatrixXd::Zero(T, D);
    }
    if (has_pop) panel.population = Eigen::VectorXd::Zero(D);

    Eigen::MatrixXi seen = Eigen::MatrixXi::Zero(T, D);
    for (const auto& row : table.rows) {
        const Eigen::Index t = static_cast<Eigen::Index>(
            Date::parse_iso(row[c_date]).days_since_epoch() - day_lo);
        const Eigen::Index d = dindex[row[c_district]];
        if (seen(t, d)) {
            throw DuplicateCellError("duplicate row for (" + row[c_date] + ", " +
                                     row[c_district] + ")");
        }
        seen(t, d) = 1;
        const long occ = parse_count(row[c_occ], "occupancy");
        if (occ < 0) {
            throw NegativeOccupancyError("negative occupancy " + std::to_string(occ) + " at (" +
                                         row[c_date] + ", " + row[c_district] + ")");
        }
        panel.occupancy(t, d) = static_cast<int>(occ);
        for (std::size_t k = 0; k < c_cov.size(); ++k) {
            panel.covariates[schema.covariate_cols[k]](t, d) =
                parse_double(row[c_cov[k]], schema.covariate_cols[k]);
        }
        if (has_pop) panel.population(d) = parse_double(row[c_pop], "population");
        if (has_lonlat) {
            panel.districts[d].lon = parse_double(row[c_lon], "longitude");
            panel.districts[d].lat = parse_double(row[c_lat], "latitude");
        }
    }

    for (Eigen::Index d = 0; d < D; ++d) {
        for (Eigen::Index t = 0; t < T; ++t) {
            if (!seen(t, d)) {
                throw MissingDayError("district " + panel.districts[d].id + " has no row for " +
                                      panel.dates[t].to_iso());
            }
        }
    }
    return panel;
}

OccupancyPanel load_panel(const std::string& path, const IngestSchema& schema) {
    return load_panel_table(read_csv(path), schema);
}

void write_panel_csv(const OccupancyPanel& panel, const IngestSchema& schema,
                     const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw SchemaError("cannot open for writing: " + path);
    out << schema.date_col << ',' << schema.district_col << ',' << schema.occupancy_col;
    for (const auto& name : schema.covariate_cols) out << ',' << name;
    const bool has_pop = !schema.population_col.empty() && panel.has_population();
    const bool has_lonlat = !schema.lon_col.empty() && panel.has_centroids();
    if (has_pop) out << ',' << schema.population_col;
    if (has_lonlat) out << ',' << schema.lon_col << ',' << schema.lat_col;
    out << '\n';
    std::ostringstream num;
    num.precision(17);
    for (Eigen::Index t = 0; t < panel.num_days(); ++t) {
        for (Eigen::Index d = 0; d < panel.num_districts(); ++d) {
            out << panel.dates[t].to_iso() << ',' << panel.districts[d].id << ','
                << panel.occupancy(t, d);
            for (const auto& name : schema.covariate_cols) {
                num.str("");
                num << panel.covariates.at(name)(t, d);
                out << ',' << num.str();
            }
            if (has_pop) {
                num.str("");
                num << panel.population(d);
                out << ',' << num.str();
            }
            if (has_lonlat) {
                num.str("");
                num << panel.districts[d].lon << ',' << panel.districts[d].lat;
                out << ',' << num.str();
            }
            out << '\n';
        }
    }
}

DeltaSeries compute_deltas(const OccupancyPanel& panel) {
    const Eigen::Index T = panel.num_days();
    if (T < 2) {
        throw PanelTooShortError("need at least 2 days to difference, got " + std::to_string(T));
    }
    DeltaSeries out;
    out.delta = panel.occupancy.bottomRows(T - 1) - panel.occupancy.topRows(T - 1);
    return out;
}

RegionMap region_map_from_table(const CsvTable& table) {
    if (table.header.size() < 2) {
        throw SchemaError("region map needs two columns (district_id, region_id)");
    }
    RegionMap map;
    for (const auto& row : table.rows) {
        map.district_to_region[row[0]] = row[1];
    }
    return map;
}

RegionMap load_region_map(const std::string& path) {
    return region_map_from_table(read_csv(path));
}

std::pair<std::vector<std::string>, Eigen::MatrixXd> aggregate_columns(
    const Eigen::MatrixXd& per_district, const std::vector<District>& districts,
    const RegionMap& map) {
    std::set<std::string> region_set;
    for (const auto& d : districts) {
        const auto it = map.district_to_region.find(d.id);
        if (it == map.district_to_region.end()) {
            throw UnmappedDistrictError("district '" + d.id + "' missing from region map");
        }
        region_set.insert(it->second);
    }
    std::vector<std::string> regions(region_set.begin(), region_set.end());
    std::unordered_map<std::string, Eigen::Index> rindex;
    for (std::size_t i = 0; i < regions.size(); ++i) rindex[regions[i]] = static_cast<Eigen::Index>(i);

    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(per_district.rows(),
                                                static_cast<Eigen::Index>(regions.size()));
    for (Eigen::Index d = 0; d < per_district.cols(); ++d) {
        out.col(rindex[map.district_to_region.at(districts[static_cast<std::size_t>(d)].id)]) +=
            per_district.col(d);
    }
    return {std::move(regions), std::move(out)};
}

RegionFlows aggregate_flows(const LatentFlows& flows, const std::vector<District>& districts,
                            const RegionMap& map) {
    auto [regions, inflow] = aggregate_columns(flows.observed_inflow().cast<double>(), districts, map);
    auto [regions2, outflow] = aggregate_columns(flows.outflow.cast<double>(), districts, map);
    RegionFlows out;
    out.regions = std::move(regions);
    out.inflow = inflow.array().round().cast<int>();
    out.outflow = outflow.array().round().cast<int>();
    return out;
}

}  // namespace occuflow
