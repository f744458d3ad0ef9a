#include "a2opt/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "a2opt/rng.hpp"

namespace a2opt {

namespace {

double clamp(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

// circular hour distance, so late-evening peaks wrap past midnight
double hour_dist(double a, double b) {
    double d = std::abs(a - b);
    return std::min(d, 24.0 - d);
}

}  // namespace

SyntheticData generate_synthetic(const SyntheticNetworkConfig& cfg) {
    if (cfg.cell_count < 1) throw DataError("generate_synthetic: cell_count must be >= 1");
    if (cfg.days < 1) throw DataError("generate_synthetic: days must be >= 1");
    if (cfg.bandwidth_set.empty() || cfg.power_set.empty())
        throw DataError("generate_synthetic: bandwidth/power value sets must be non-empty");

    Rng rng(cfg.seed);
    SyntheticData out;
    int n = cfg.cell_count;

    for (int i = 0; i < n; ++i) out.cell_ids.push_back(i + 1);
    for (int i = 0; i < n; ++i)
        out.positions.emplace_back(rng.uniform(0.0, cfg.area_m), rng.uniform(0.0, cfg.area_m));

    struct CellProfile {
        double base_load, peak_hour, amp, cqi_base, bandwidth, power;
    };
    std::vector<CellProfile> prof(n);
    if (cfg.spatial_corr_m > 0.0) {
        // Anchor field: each anchor carries one traffic character; cells blend
        // anchors by Gaussian distance weight plus a small idiosyncratic part,
        // so profiles vary smoothly over the map.
        struct Anchor {
            double x, y, load_z, amp, cqi, peak;
        };
        int na = std::max(1, cfg.spatial_anchors);
        std::vector<Anchor> anchors(na);
        for (Anchor& a : anchors) {
            a.x = rng.uniform(0.0, cfg.area_m);
            a.y = rng.uniform(0.0, cfg.area_m);
            a.load_z = rng.normal();
            a.amp = rng.uniform(cfg.peak_amp_lo, cfg.peak_amp_hi);
            a.cqi = rng.uniform(cfg.cqi_lo, cfg.cqi_hi);
            a.peak = rng.uniform_int(cfg.peak_hour_lo, cfg.peak_hour_hi);
        }
        double two_s2 = 2.0 * cfg.spatial_corr_m * cfg.spatial_corr_m;
        for (int i = 0; i < n; ++i) {
            double wsum = 0.0, load_z = 0.0, amp = 0.0, cqi = 0.0;
            double wbest = -1.0;
            const Anchor* nearest = &anchors[0];
            for (const Anchor& a : anchors) {
                double dx = out.positions[i].first - a.x;
                double dy = out.positions[i].second - a.y;
                double w = std::exp(-(dx * dx + dy * dy) / two_s2);
                wsum += w;
                load_z += w * a.load_z;
                amp += w * a.amp;
                cqi += w * a.cqi;
                if (w > wbest) {
                    wbest = w;
                    nearest = &a;
                }
            }
            if (wsum > 1e-300) {
                load_z /= wsum;
                amp /= wsum;
                cqi /= wsum;
            } else {
                load_z = nearest->load_z;
                amp = nearest->amp;
                cqi = nearest->cqi;
            }
            prof[i].base_load =
                std::exp(cfg.load_log_mean + cfg.load_log_sigma * (0.8 * load_z + 0.6 * rng.normal()));
            int peak = static_cast<int>(nearest->peak) + rng.uniform_int(-1, 1);
            prof[i].peak_hour = (peak % 24 + 24) % 24;
            prof[i].amp = clamp(amp + 0.15 * (cfg.peak_amp_hi - cfg.peak_amp_lo) * rng.normal(),
                                cfg.peak_amp_lo, cfg.peak_amp_hi);
            prof[i].cqi_base = clamp(cqi + 0.5 * rng.normal(), cfg.cqi_lo, cfg.cqi_hi);
            prof[i].bandwidth =
                cfg.bandwidth_set[rng.uniform_int(0, static_cast<int>(cfg.bandwidth_set.size()) - 1)];
            prof[i].power = cfg.power_set[rng.uniform_int(0, static_cast<int>(cfg.power_set.size()) - 1)];
        }
    } else {
        for (int i = 0; i < n; ++i) {
            prof[i].base_load = std::exp(cfg.load_log_mean + cfg.load_log_sigma * rng.normal());
            prof[i].peak_hour = rng.uniform_int(cfg.peak_hour_lo, cfg.peak_hour_hi);
            prof[i].amp = rng.uniform(cfg.peak_amp_lo, cfg.peak_amp_hi);
            prof[i].cqi_base = rng.uniform(cfg.cqi_lo, cfg.cqi_hi);
            prof[i].bandwidth =
                cfg.bandwidth_set[rng.uniform_int(0, static_cast<int>(cfg.bandwidth_set.size()) - 1)];
            prof[i].power = cfg.power_set[rng.uniform_int(0, static_cast<int>(cfg.power_set.size()) - 1)];
        }
    }

    // Directed handover counts from a distance kernel; both directions share the
    // deterministic part, so the pair is symmetric in expectation.
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double dx = out.positions[i].first - out.positions[j].first;
            double dy = out.positions[i].second - out.positions[j].second;
            double det = cfg.kernel_scale * std::exp(-std::sqrt(dx * dx + dy * dy) / cfg.kernel_length_m);
            if (det < cfg.kernel_floor) continue;
            double count = std::max(0.0, det + cfg.kernel_noise * rng.normal());
            out.handover.push_back({out.cell_ids[i], out.cell_ids[j], count});
        }
    }

    for (int day = 1; day <= cfg.days; ++day) {
        for (int i = 0; i < n; ++i) {
            double day_factor = std::max(0.1, 1.0 + cfg.day_noise * rng.normal());
            for (int h = 0; h < kHoursPerDay; ++h) {
                const CellProfile& p = prof[i];
                double dh = hour_dist(h, p.peak_hour);
                double shape = 1.0 + p.amp * std::exp(-dh * dh / (2.0 * cfg.peak_width_h * cfg.peak_width_h));
                double traffic =
                    std::max(0.0, p.base_load * shape * day_factor * (1.0 + cfg.hour_noise * rng.normal()));
                CellRecord r;
                r.cell_id = out.cell_ids[i];
                r.day = day;
                r.hour = h;
                r.traffic_mbit = traffic;
                r.users = std::max(0.0, traffic / cfg.mbit_per_user * (1.0 + 0.1 * rng.normal()));
                r.prb_ratio = clamp(traffic / (p.bandwidth * cfg.prb_mbit_per_mhz) * (1.0 + 0.05 * rng.normal()),
                                    0.0, 1.0);
                r.avg_cqi = clamp(p.cqi_base + cfg.cqi_noise * rng.normal(), 1.0, 15.0);
                r.bandwidth_mhz = p.bandwidth;
                r.tx_power_dbm = p.power;
                r.a2_dbm = cfg.default_a2_dbm;
                r.throughput_mbps = 0.0;
                out.records.push_back(r);
            }
        }
    }
    return out;
}

}  // namespace a2opt
