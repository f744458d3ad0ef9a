#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "a2opt/matrix.hpp"

namespace a2opt {

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr int kFeatureDim = 6;
inline constexpr int kHoursPerDay = 24;

// Column order of the feature block, used identically in CSV files, aggregated
// feature rows and model inputs.
namespace feature {
inline constexpr int kUsers = 0;
inline constexpr int kTraffic = 1;
inline constexpr int kPrb = 2;
inline constexpr int kCqi = 3;
inline constexpr int kBandwidth = 4;
inline constexpr int kTxPower = 5;
}  // namespace feature

// One cell-hour of measurements.
struct CellRecord {
    int cell_id = 0;
    int day = 0;   // 1-based
    int hour = 0;  // 0..23
    double users = 0;
    double traffic_mbit = 0;
    double prb_ratio = 0;
    double avg_cqi = 1;
    double bandwidth_mhz = 1;
    double tx_power_dbm = 0;
    double a2_dbm = -100;
    double throughput_mbps = 0;
};

struct HandoverStat {
    int src = 0;
    int dst = 0;
    double avg_count = 0;
};

// One cell-day after aggregation: inputs for the prediction models.
struct DailySample {
    int cell_id = 0;
    int day = 0;
    Matrix mean_features;  // 1 x kFeatureDim
    Matrix temporal;       // K x kFeatureDim, contiguous hour blocks
    double beta = 1.0;     // throughput ratio against graph neighbors
    double alpha = 0.0;    // daily mean throughput, Mbps
    double a2_dbm = -100;
    double delta_action = 0.0;  // filled when the sample joins a training pair
};

// Throws DataError when a record violates a field range; `where` prefixes the message.
void validate_record(const CellRecord& r, const std::string& where);

Matrix record_features(const CellRecord& r);  // 1 x kFeatureDim

// ---- CSV interfaces (fixed headers, round-trip exact) ----------------------
std::vector<CellRecord> load_cells_csv(const std::string& path);
void save_cells_csv(const std::string& path, const std::vector<CellRecord>& records);
std::vector<HandoverStat> load_handover_csv(const std::string& path);
void save_handover_csv(const std::string& path, const std::vector<HandoverStat>& stats);

// ---- aggregation -----------------------------------------------------------
// `cell_day` must hold the 24 hours of one cell-day, each hour exactly once.
// Returns (mean feature row, K x d block means); blocks are contiguous in hour
// order and the last block absorbs the remainder when K does not divide 24.
std::pair<Matrix, Matrix> daily_aggregate(const std::vector<CellRecord>& cell_day, int k);

// beta = alpha / mean(neighbor alphas). No neighbors: 1 (isolated cell serves
// its own reference). A zero neighbor mean is an error.
double throughput_ratio(double alpha, const std::vector<double>& neighbor_alphas);

struct NetworkGraph;
// Aggregates one day of records (all cells, 24 hours each) into per-cell
// samples ordered by cell id. Every graph cell must be present.
std::vector<DailySample> make_daily_samples(const std::vector<CellRecord>& day_records,
                                            const NetworkGraph& graph, int k);

}  // namespace a2opt
