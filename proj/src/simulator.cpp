#include "a2opt/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace a2opt {

namespace {

struct Transfer {
    int from, to;
    double frac;  // fraction of `from`'s current holding
};

// Two ordered phases; fractions are functions of the coverages and graph only.
struct TransferPlan {
    std::vector<Transfer> release;
    std::vector<Transfer> attract;
};

TransferPlan compute_plan(const std::vector<double>& cov_before, const std::vector<double>& cov_after,
                          const NetworkGraph& graph) {
    size_t n = graph.cell_count();
    TransferPlan plan;

    for (size_t i = 0; i < n; ++i) {
        double ratio2 = (cov_after[i] / cov_before[i]) * (cov_after[i] / cov_before[i]);
        if (ratio2 >= 1.0 || graph.degree(static_cast<int>(i)) == 0) continue;
        double released = 1.0 - ratio2;
        double wsum = 0.0;
        for (int j : graph.neighbors(static_cast<int>(i))) wsum += cov_after[j] * cov_after[j];
        for (int j : graph.neighbors(static_cast<int>(i)))
            plan.release.push_back({static_cast<int>(i), j, released * cov_after[j] * cov_after[j] / wsum});
    }

    // competing growers overlap independently: a source loses 1 - prod(1 - f_g)
    // in total (so it always keeps a positive remainder), split by claim size;
    // a lone grower pulls exactly its own fraction
    std::vector<double> claim_sum(n, 0.0), keep_prod(n, 1.0);
    std::vector<double> grow_frac(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
        double ratio2 = (cov_after[i] / cov_before[i]) * (cov_after[i] / cov_before[i]);
        if (ratio2 <= 1.0 || graph.degree(static_cast<int>(i)) == 0) continue;
        grow_frac[i] = 1.0 - 1.0 / ratio2;
        for (int j : graph.neighbors(static_cast<int>(i))) {
            claim_sum[j] += grow_frac[i];
            keep_prod[j] *= 1.0 - grow_frac[i];
        }
    }
    for (size_t i = 0; i < n; ++i) {
        if (grow_frac[i] == 0.0) continue;
        for (int j : graph.neighbors(static_cast<int>(i)))
            plan.attract.push_back({j, static_cast<int>(i), (1.0 - keep_prod[j]) * grow_frac[i] / claim_sum[j]});
    }
    return plan;
}

void apply_phase(const std::vector<Transfer>& phase, std::vector<double>& values) {
    // fully-claimed sources can overdraw by an ulp (their fractions are
    // quotients summing to 1); scale those back so no value goes negative
    std::vector<double> outflow(values.size(), 0.0);
    for (const Transfer& t : phase) outflow[t.from] += values[t.from] * t.frac;
    std::vector<double> scale(values.size(), 1.0);
    for (size_t i = 0; i < values.size(); ++i)
        if (outflow[i] > values[i]) scale[i] = values[i] / outflow[i];

    std::vector<double> delta(values.size(), 0.0);
    for (const Transfer& t : phase) {
        double moved = values[t.from] * t.frac * scale[t.from];
        delta[t.from] -= moved;
        delta[t.to] += moved;
    }
    for (size_t i = 0; i < values.size(); ++i) values[i] = std::max(values[i] + delta[i], 0.0);
}

void apply_plan(const TransferPlan& plan, std::vector<double>& values) {
    apply_phase(plan.release, values);
    apply_phase(plan.attract, values);
}

double day_mean_cqi(const Matrix& hourly) {
    double s = 0;
    for (int h = 0; h < kHoursPerDay; ++h) s += hourly.at(h, feature::kCqi);
    return s / kHoursPerDay;
}

}  // namespace

void SimulatorConfig::validate() const {
    if (!(pl_exponent > 0)) throw SimError("simulator: pl_exponent must be > 0");
    if (!(ref_distance_m > 0)) throw SimError("simulator: ref_distance_m must be > 0");
    if (!(sat_mbit_per_mbps > 0)) throw SimError("simulator: sat_mbit_per_mbps must be > 0");
    if (!(congestion_p > 0)) throw SimError("simulator: congestion_p must be > 0");
    if (!(kappa_measure >= 0 && kappa_measure < 1)) throw SimError("simulator: kappa_measure must be in [0,1)");
    if (!(kappa_conn >= 0 && kappa_conn < 1)) throw SimError("simulator: kappa_conn must be in [0,1)");
    if (!(a2_lo_dbm < a2_hi_dbm)) throw SimError("simulator: a2 range is empty");
    if (!(a2_default_dbm >= a2_lo_dbm && a2_default_dbm <= a2_hi_dbm))
        throw SimError("simulator: default a2 outside range");
    if (!(max_delta_db > 0)) throw SimError("simulator: max_delta_db must be > 0");
    if (!(se_base + se_per_cqi * 1.0 > 0)) throw SimError("simulator: spectral efficiency must stay positive");
}

double coverage_radius(const SimulatorConfig& cfg, double tx_power_dbm, double a2_dbm) {
    double num = tx_power_dbm - cfg.pl_ref_db - (a2_dbm - cfg.hysteresis_db);
    return cfg.ref_distance_m * std::pow(10.0, num / (10.0 * cfg.pl_exponent));
}

double cell_capacity_mbps(const SimulatorConfig& cfg, double bandwidth_mhz, double avg_cqi) {
    if (!(bandwidth_mhz > 0)) throw SimError("cell_capacity: bandwidth must be > 0");
    return bandwidth_mhz * (cfg.se_base + cfg.se_per_cqi * avg_cqi);
}

double load_to_throughput(const SimulatorConfig& cfg, double load_mbit, double cap_mbps) {
    if (!(load_mbit >= 0)) throw SimError("load_to_throughput: load must be >= 0");
    if (!(cap_mbps > 0)) throw SimError("load_to_throughput: capacity must be > 0");
    double l_sat = cap_mbps * cfg.sat_mbit_per_mbps;
    double x = load_mbit / l_sat;
    double over = std::max(0.0, x - 1.0);
    return cap_mbps * (1.0 - std::exp(-x)) / (1.0 + std::pow(over, cfg.congestion_p));
}

double adjustment_factor(const SimulatorConfig& cfg, double a2_dbm) {
    double u = (a2_dbm - cfg.a2_lo_dbm) / (cfg.a2_hi_dbm - cfg.a2_lo_dbm);
    u = std::min(1.0, std::max(0.0, u));
    return (1.0 - cfg.kappa_measure * u) * (1.0 - cfg.kappa_conn * (1.0 - u));
}

std::vector<double> redistribute(const std::vector<double>& loads, const std::vector<double>& cov_before,
                                 const std::vector<double>& cov_after, const NetworkGraph& graph) {
    size_t n = graph.cell_count();
    if (loads.size() != n || cov_before.size() != n || cov_after.size() != n)
        throw SimError("redistribute: vector sizes disagree with the graph");
    for (double l : loads)
        if (!(l >= 0)) throw SimError("redistribute: loads must be >= 0");
    for (size_t i = 0; i < n; ++i)
        if (!(cov_before[i] > 0) || !(cov_after[i] > 0)) throw SimError("redistribute: coverages must be > 0");

    std::vector<double> out = loads;
    apply_plan(compute_plan(cov_before, cov_after, graph), out);
    return out;
}

SimulationState make_state(const SimulatorConfig& cfg, const std::vector<CellRecord>& day_records,
                           const NetworkGraph& graph) {
    cfg.validate();
    if (day_records.empty()) throw SimError("make_state: no records");
    int day = day_records.front().day;
    std::map<int, std::vector<const CellRecord*>> by_cell;
    for (const CellRecord& r : day_records) {
        if (r.day != day) throw SimError("make_state: records span more than one day");
        by_cell[r.cell_id].push_back(&r);
    }

    SimulationState st;
    st.day = day;
    for (size_t i = 0; i < graph.cell_count(); ++i) {
        int id = graph.cell_ids[i];
        auto it = by_cell.find(id);
        if (it == by_cell.end()) throw SimError("make_state: cell " + std::to_string(id) + " has no records");
        if (it->second.size() != kHoursPerDay)
            throw SimError("make_state: cell " + std::to_string(id) + " has " +
                           std::to_string(it->second.size()) + " hourly records, expected 24");
        CellState cs;
        cs.cell_id = id;
        cs.hourly = Matrix(kHoursPerDay, kFeatureDim);
        cs.hourly_throughput.assign(kHoursPerDay, 0.0);
        std::vector<bool> seen(kHoursPerDay, false);
        cs.a2_dbm = it->second.front()->a2_dbm;
        for (const CellRecord* r : it->second) {
            if (seen[r->hour]) throw SimError("make_state: duplicate hour for cell " + std::to_string(id));
            seen[r->hour] = true;
            if (r->a2_dbm != cs.a2_dbm)
                throw SimError("make_state: cell " + std::to_string(id) + " changes a2 within the day");
            Matrix f = record_features(*r);
            for (int c = 0; c < kFeatureDim; ++c) cs.hourly.at(r->hour, c) = f.at(0, c);
            cs.hourly_throughput[r->hour] = r->throughput_mbps;
        }
        double tx = cs.hourly.at(0, feature::kTxPower);
        cs.coverage_m = coverage_radius(cfg, tx, cs.a2_dbm);
        double lsum = 0, tsum = 0;
        for (int h = 0; h < kHoursPerDay; ++h) {
            lsum += cs.hourly.at(h, feature::kTraffic);
            tsum += cs.hourly_throughput[h];
        }
        cs.load_mbit = lsum / kHoursPerDay;
        cs.throughput_mbps = tsum / kHoursPerDay;
        st.cells.push_back(std::move(cs));
    }
    return st;
}

SimulationState step(const SimulatorConfig& cfg, const SimulationState& base, const std::vector<double>& a2_by_cell,
                     const NetworkGraph& graph) {
    cfg.validate();
    size_t n = graph.cell_count();
    if (base.cells.size() != n || a2_by_cell.size() != n)
        throw SimError("step: state/config sizes disagree with the graph");
    for (double a2 : a2_by_cell)
        if (!std::isfinite(a2)) throw SimError("step: a2 must be finite");

    std::vector<double> cov_before(n), cov_after(n);
    for (size_t i = 0; i < n; ++i) {
        double tx = base.cells[i].hourly.at(0, feature::kTxPower);
        cov_before[i] = coverage_radius(cfg, tx, base.cells[i].a2_dbm);
        cov_after[i] = coverage_radius(cfg, tx, a2_by_cell[i]);
    }
    TransferPlan plan = compute_plan(cov_before, cov_after, graph);

    SimulationState out;
    out.day = base.day;
    out.cells.resize(n);
    std::vector<double> traffic(n), users(n);
    std::vector<Matrix> hourly;
    hourly.reserve(n);
    for (size_t i = 0; i < n; ++i) hourly.push_back(base.cells[i].hourly);

    for (int h = 0; h < kHoursPerDay; ++h) {
        for (size_t i = 0; i < n; ++i) {
            traffic[i] = hourly[i].at(h, feature::kTraffic);
            users[i] = hourly[i].at(h, feature::kUsers);
        }
        apply_plan(plan, traffic);
        apply_plan(plan, users);
        for (size_t i = 0; i < n; ++i) {
            hourly[i].at(h, feature::kTraffic) = traffic[i];
            hourly[i].at(h, feature::kUsers) = users[i];
        }
    }

    for (size_t i = 0; i < n; ++i) {
        CellState& cs = out.cells[i];
        cs.cell_id = base.cells[i].cell_id;
        cs.hourly = std::move(hourly[i]);
        cs.a2_dbm = a2_by_cell[i];
        cs.coverage_m = cov_after[i];
        cs.hourly_throughput.assign(kHoursPerDay, 0.0);
        double cap = cell_capacity_mbps(cfg, cs.hourly.at(0, feature::kBandwidth), day_mean_cqi(cs.hourly));
        double adj = adjustment_factor(cfg, a2_by_cell[i]);
        double lsum = 0, tsum = 0;
        for (int h = 0; h < kHoursPerDay; ++h) {
            double load = cs.hourly.at(h, feature::kTraffic);
            cs.hourly_throughput[h] = load_to_throughput(cfg, load, cap) * adj;
            lsum += load;
            tsum += cs.hourly_throughput[h];
        }
        cs.load_mbit = lsum / kHoursPerDay;
        cs.throughput_mbps = tsum / kHoursPerDay;
    }
    return out;
}

std::vector<CellRecord> state_to_records(const SimulationState& state) {
    std::vector<CellRecord> out;
    for (const CellState& cs : state.cells) {
        for (int h = 0; h < kHoursPerDay; ++h) {
            CellRecord r;
            r.cell_id = cs.cell_id;
            r.day = state.day;
            r.hour = h;
            r.users = cs.hourly.at(h, feature::kUsers);
            r.traffic_mbit = cs.hourly.at(h, feature::kTraffic);
            r.prb_ratio = cs.hourly.at(h, feature::kPrb);
            r.avg_cqi = cs.hourly.at(h, feature::kCqi);
            r.bandwidth_mhz = cs.hourly.at(h, feature::kBandwidth);
            r.tx_power_dbm = cs.hourly.at(h, feature::kTxPower);
            r.a2_dbm = cs.a2_dbm;
            r.throughput_mbps = cs.hourly_throughput[h];
            out.push_back(r);
        }
    }
    return out;
}

double network_throughput(const SimulationState& state) {
    double s = 0;
    for (const CellState& cs : state.cells) s += cs.throughput_mbps;
    return s;
}

SearchResult brute_force_optimal(const SimulatorConfig& cfg, const SimulationState& base, const NetworkGraph& graph,
                                 const std::vector<std::vector<double>>& candidates, const std::vector<double>& start,
                                 int max_sweeps) {
    cfg.validate();
    size_t n = graph.cell_count();
    if (candidates.size() != n || start.size() != n)
        throw SimError("brute_force_optimal: candidate/start sizes disagree with the graph");
    for (const std::vector<double>& c : candidates)
        if (c.empty()) throw SimError("brute_force_optimal: empty candidate set");
    if (max_sweeps < 1) throw SimError("brute_force_optimal: max_sweeps must be >= 1");

    auto objective = [&](const std::vector<double>& a2) { return network_throughput(step(cfg, base, a2, graph)); };
    // preference order under exact ties: closest to default, then lower dBm
    auto prefer = [&](double a, double b) {
        double da = std::abs(a - cfg.a2_default_dbm), db = std::abs(b - cfg.a2_default_dbm);
        if (da != db) return da < db;
        return a < b;
    };

    SearchResult res;
    res.a2_by_cell = start;
    res.total_throughput = objective(res.a2_by_cell);

    if (n <= kJointSearchMaxCells) {
        // Tiny networks are solved exactly. Per-cell sweeps stall on this
        // objective: the redistribution couples neighbors through the sum of
        // their threshold moves, so the landscape has diagonal ridges that no
        // single-coordinate change can follow.
        auto config_prefer = [&](const std::vector<double>& a, const std::vector<double>& b) {
            for (size_t i = 0; i < n; ++i) {
                if (a[i] == b[i]) continue;
                return prefer(a[i], b[i]);
            }
            return false;
        };
        std::vector<size_t> pick(n, 0);
        std::vector<double> trial(n);
        while (true) {
            for (size_t i = 0; i < n; ++i) trial[i] = candidates[i][pick[i]];
            double val = objective(trial);
            if (val > res.total_throughput ||
                (val == res.total_throughput && config_prefer(trial, res.a2_by_cell))) {
                res.total_throughput = val;
                res.a2_by_cell = trial;
            }
            size_t i = 0;
            while (i < n && ++pick[i] == candidates[i].size()) pick[i++] = 0;
            if (i == n) break;
        }
        res.sweeps_used = 1;
        return res;
    }

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool changed = false;
        ++res.sweeps_used;
        for (size_t i = 0; i < n; ++i) {
            double best_a2 = res.a2_by_cell[i];
            double best_val = res.total_throughput;
            for (double cand : candidates[i]) {
                if (cand == res.a2_by_cell[i]) continue;
                std::vector<double> trial = res.a2_by_cell;
                trial[i] = cand;
                double val = objective(trial);
                if (val > best_val || (val == best_val && prefer(cand, best_a2))) {
                    best_val = val;
                    best_a2 = cand;
                }
            }
            if (best_a2 != res.a2_by_cell[i]) {
                res.a2_by_cell[i] = best_a2;
                res.total_throughput = best_val;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return res;
}

SearchResult brute_force_optimal(const SimulatorConfig& cfg, const SimulationState& base, const NetworkGraph& graph,
                                 const std::vector<double>& grid, int max_sweeps) {
    std::vector<std::vector<double>> candidates(graph.cell_count(), grid);
    std::vector<double> start(graph.cell_count(), cfg.a2_default_dbm);
    return brute_force_optimal(cfg, base, graph, candidates, start, max_sweeps);
}

std::vector<double> default_a2_grid(const SimulatorConfig& cfg) {
    std::vector<double> grid;
    for (double v = cfg.a2_lo_dbm; v <= cfg.a2_hi_dbm + 1e-9; v += 1.0) grid.push_back(v);
    return grid;
}

}  // namespace a2opt
