#pragma once

#include <vector>

#include "a2opt/dataset.hpp"
#include "a2opt/network.hpp"

namespace a2opt {

class SimError : public std::runtime_error {
public:
    explicit SimError(const std::string& what) : std::runtime_error(what) {}
};

struct SimulatorConfig {
    // coverage: radius = d0 * 10^((P_tx - PL0 - (A2 - H_ys)) / (10 * eta))
    double pl_exponent = 3.5;     // eta
    double pl_ref_db = 30.0;      // PL0
    double ref_distance_m = 1.0;  // d0
    double hysteresis_db = 0.0;   // H_ys

    // served-rate curve: r = cap * (1 - exp(-L/L_sat)) / (1 + max(0, L/L_sat - 1)^p)
    double sat_mbit_per_mbps = 3.0;  // L_sat = cap * this
    double congestion_p = 2.0;
    double se_base = 0.2;      // cap = bandwidth * (se_base + se_per_cqi * cqi)
    double se_per_cqi = 0.28;

    // reporting adjustment m(A2) = (1 - k_m*u) * (1 - k_c*(1-u)), u = position in range
    double kappa_measure = 0.2;
    double kappa_conn = 0.2;

    double a2_lo_dbm = -105.0;
    double a2_hi_dbm = -95.0;
    double a2_default_dbm = -100.0;
    double max_delta_db = 5.0;

    void validate() const;
};

// One cell-day under some threshold configuration.
struct CellState {
    int cell_id = 0;
    Matrix hourly;  // 24 x kFeatureDim
    double a2_dbm = -100.0;
    double coverage_m = 0.0;
    double load_mbit = 0.0;         // daily mean traffic
    double throughput_mbps = 0.0;   // daily mean served rate
    std::vector<double> hourly_throughput;
};

struct SimulationState {
    int day = 0;
    std::vector<CellState> cells;  // sorted by cell id, aligned with graph indices
};

double coverage_radius(const SimulatorConfig& cfg, double tx_power_dbm, double a2_dbm);
double cell_capacity_mbps(const SimulatorConfig& cfg, double bandwidth_mhz, double avg_cqi);
double load_to_throughput(const SimulatorConfig& cfg, double load_mbit, double cap_mbps);
double adjustment_factor(const SimulatorConfig& cfg, double a2_dbm);

// Area-proportional load moves between graph neighbors. Shrinking cells release
// 1 - (C_after/C_before)^2 of their holding, split among neighbors by C_after^2;
// growing cells then pull 1 - (C_before/C_after)^2 of each neighbor's holding.
// Competing growers overlap independently: the source loses 1 - prod(1 - f_g)
// in total, split proportionally to the claims, so it always keeps a positive
// remainder. Total is conserved; isolated cells keep their load. Fractions
// depend on coverages only, never on the loads.
std::vector<double> redistribute(const std::vector<double>& loads, const std::vector<double>& cov_before,
                                 const std::vector<double>& cov_after, const NetworkGraph& graph);

// Builds the day-state from measured records; the recorded a2 is the baseline
// configuration the coverage changes are measured against.
SimulationState make_state(const SimulatorConfig& cfg, const std::vector<CellRecord>& day_records,
                           const NetworkGraph& graph);

// Baseline coverage -> redistribution -> served-rate curve -> reporting
// adjustment, in that order. Users and traffic move by the same fractions.
SimulationState step(const SimulatorConfig& cfg, const SimulationState& base, const std::vector<double>& a2_by_cell,
                     const NetworkGraph& graph);

std::vector<CellRecord> state_to_records(const SimulationState& state);

double network_throughput(const SimulationState& state);  // sum of per-cell daily means

struct SearchResult {
    std::vector<double> a2_by_cell;
    double total_throughput = 0.0;
    int sweeps_used = 0;
};

// Networks of up to kJointSearchMaxCells cells are solved by exhaustive joint
// enumeration (the coupling between neighboring thresholds defeats per-cell
// sweeps there). Larger networks use coordinate ascent over the per-cell
// candidate sets: cells in id order, each cell tries every candidate with the
// others held fixed, stopping when a full pass changes nothing or after
// `max_sweeps` passes. Ties prefer the candidate closest to the default, then
// the lower dBm (configs compared cell-by-cell in the joint case).
inline constexpr size_t kJointSearchMaxCells = 3;
SearchResult brute_force_optimal(const SimulatorConfig& cfg, const SimulationState& base, const NetworkGraph& graph,
                                 const std::vector<std::vector<double>>& candidates, const std::vector<double>& start,
                                 int max_sweeps);

// Convenience: one shared candidate list, start at the default configuration.
SearchResult brute_force_optimal(const SimulatorConfig& cfg, const SimulationState& base, const NetworkGraph& graph,
                                 const std::vector<double>& grid, int max_sweeps);

std::vector<double> default_a2_grid(const SimulatorConfig& cfg);  // integer dBm, lo..hi

}  // namespace a2opt
