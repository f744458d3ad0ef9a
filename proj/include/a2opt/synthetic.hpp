#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "a2opt/dataset.hpp"

namespace a2opt {

// Synthetic network generator. Cells are dropped uniformly on a square; the
// handover kernel decays with distance, so thresholding it yields a
// planar-like graph. Hourly features follow per-cell diurnal profiles.
struct SyntheticNetworkConfig {
    int cell_count = 100;
    int days = 10;
    double area_m = 5000.0;

    // handover kernel: count = scale * exp(-distance / length) + noise
    double kernel_scale = 50.0;
    double kernel_length_m = 500.0;
    double kernel_noise = 2.0;
    double kernel_floor = 0.05;  // pairs whose deterministic part falls below are dropped

    // diurnal traffic: lognormal base load, one evening peak per cell
    double load_log_mean = 4.1;  // exp(...) ~ 60 Mbit/h median
    double load_log_sigma = 0.7;

    // spatial field: cell profiles blend anchor values with Gaussian weights of
    // length spatial_corr_m, so nearby cells share traffic character. 0 = iid.
    double spatial_corr_m = 0.0;
    int spatial_anchors = 6;
    int peak_hour_lo = 17;
    int peak_hour_hi = 21;
    double peak_amp_lo = 0.5;
    double peak_amp_hi = 1.5;
    double peak_width_h = 3.0;
    double day_noise = 0.03;
    double hour_noise = 0.05;

    double mbit_per_user = 5.0;
    double prb_mbit_per_mhz = 12.0;  // nominal hourly capacity per MHz for the PRB ratio
    double cqi_lo = 6.0;
    double cqi_hi = 14.0;
    double cqi_noise = 0.3;
    std::vector<double> bandwidth_set = {5.0, 10.0, 20.0};
    std::vector<double> power_set = {40.0, 43.0, 46.0};

    double default_a2_dbm = -100.0;
    uint64_t seed = 1;
};

struct SyntheticData {
    std::vector<int> cell_ids;
    std::vector<std::pair<double, double>> positions;  // ground truth, not exported
    std::vector<CellRecord> records;                   // day-major, throughput unset (0)
    std::vector<HandoverStat> handover;
};

SyntheticData generate_synthetic(const SyntheticNetworkConfig& cfg);

}  // namespace a2opt
