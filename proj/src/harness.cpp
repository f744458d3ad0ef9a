#include "a2opt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "a2opt/rng.hpp"
#include "a2opt/text.hpp"

namespace a2opt {

namespace {

const std::vector<std::pair<Policy, const char*>>& policy_table() {
    static const std::vector<std::pair<Policy, const char*>> table = {
        {Policy::kDefault, "default"},
        {Policy::kOptimal, "optimal"},
        {Policy::kExpert, "expert"},
        {Policy::kNegativeSlope, "negative-slope"},
        {Policy::kActorCritic, "actor-critic"},
        {Policy::kModel, "model"},
        {Policy::kRatioOnly, "ratio-only"},
        {Policy::kThroughputOnly, "throughput-only"},
    };
    return table;
}

bool is_model_family(Policy p) {
    return p == Policy::kModel || p == Policy::kRatioOnly || p == Policy::kThroughputOnly ||
           p == Policy::kActorCritic;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

std::vector<std::string> doubles_to_strings(const std::vector<double>& vs) {
    std::vector<std::string> out;
    out.reserve(vs.size());
    for (double v : vs) out.push_back(to_decimal(v));
    return out;
}

}  // namespace

std::string policy_name(Policy p) {
    for (const auto& [policy, name] : policy_table())
        if (policy == p) return name;
    throw DataError("policy_name: unknown policy");
}

Policy parse_policy(const std::string& name) {
    for (const auto& [policy, pname] : policy_table())
        if (name == pname) return policy;
    throw DataError("parse_policy: unknown policy '" + name + "'");
}

void ExperimentConfig::validate() const {
    sim.validate();
    grid.validate();
    train_cfg.validate();
    actor_cfg.validate();
    if (days < 3) throw DataError("config: days must be at least 3");
    if (repeats < 1) throw DataError("config: repeats must be positive");
    if (policies.empty()) throw DataError("config: at least one policy");
    for (size_t i = 0; i < policies.size(); ++i)
        for (size_t j = i + 1; j < policies.size(); ++j)
            if (policies[i] == policies[j])
                throw DataError("config: duplicate policy '" + policy_name(policies[i]) + "'");
    if (nu < 1) throw DataError("config: nu must be positive");
    if (phi < 0) throw DataError("config: phi must be non-negative");
    if (handover_tau < 0) throw DataError("config: handover_tau must be non-negative");
    // a freeze before the first trained day would leave the learning arms with no model
    if (freeze_after_day != 0 && freeze_after_day < 3)
        throw DataError("config: freeze_after_day must be 0 or at least 3");
    if (max_sweeps < 1) throw DataError("config: max_sweeps must be positive");
    if (!ratio_arm.empty()) {
        Policy p = parse_policy(ratio_arm);
        if (std::find(policies.begin(), policies.end(), p) == policies.end())
            throw DataError("config: ratio_arm '" + ratio_arm + "' is not among the policies");
    }
    if (mse_variants.empty()) throw DataError("config: at least one variant for the accuracy run");
    for (size_t i = 0; i < mse_variants.size(); ++i)
        for (size_t j = i + 1; j < mse_variants.size(); ++j)
            if (mse_variants[i] == mse_variants[j])
                throw DataError("config: duplicate variant '" + variant_name(mse_variants[i]) + "'");
    if (synth.cell_count < 1) throw DataError("config: synth.cell_count must be positive");
}

ExperimentConfig ExperimentConfig::from_key_values(const KeyValues& kv) {
    ExperimentConfig c;

    auto get_int = [&](const std::string& key, int fallback) {
        return static_cast<int>(kv.get_long(key, fallback));
    };

    c.days = get_int("days", c.days);
    c.repeats = get_int("repeats", c.repeats);
    c.seed = static_cast<uint64_t>(kv.get_long("seed", static_cast<long>(c.seed)));
    if (kv.has("policies")) {
        c.policies.clear();
        for (const std::string& name : kv.get_list("policies", {})) c.policies.push_back(parse_policy(name));
    }
    c.nu = get_int("nu", c.nu);
    c.phi = get_int("phi", c.phi);
    c.expert_r1 = kv.get_double("expert_r1", c.expert_r1);
    c.expert_r2 = kv.get_double("expert_r2", c.expert_r2);
    c.handover_tau = kv.get_double("handover_tau", c.handover_tau);
    c.freeze_after_day = get_int("freeze_after_day", c.freeze_after_day);
    c.warm_start = kv.get_bool("warm_start", c.warm_start);
    c.max_sweeps = get_int("max_sweeps", c.max_sweeps);
    c.ratio_arm = kv.get_string("ratio_arm", c.ratio_arm);
    c.data_dir = kv.get_string("data_dir", c.data_dir);
    if (kv.has("mse_variants")) {
        c.mse_variants.clear();
        for (const std::string& name : kv.get_list("mse_variants", {})) c.mse_variants.push_back(parse_variant(name));
    }

    auto get_dlist = [&](const std::string& key, std::vector<double>& out) {
        if (!kv.has(key)) return;
        out.clear();
        for (const std::string& tok : kv.get_list(key, {})) out.push_back(parse_double(tok));
    };

    c.synth.cell_count = get_int("synth.cell_count", c.synth.cell_count);
    c.synth.area_m = kv.get_double("synth.area_m", c.synth.area_m);
    c.synth.kernel_scale = kv.get_double("synth.kernel_scale", c.synth.kernel_scale);
    c.synth.kernel_length_m = kv.get_double("synth.kernel_length_m", c.synth.kernel_length_m);
    c.synth.kernel_noise = kv.get_double("synth.kernel_noise", c.synth.kernel_noise);
    c.synth.kernel_floor = kv.get_double("synth.kernel_floor", c.synth.kernel_floor);
    c.synth.load_log_mean = kv.get_double("synth.load_log_mean", c.synth.load_log_mean);
    c.synth.load_log_sigma = kv.get_double("synth.load_log_sigma", c.synth.load_log_sigma);
    c.synth.spatial_corr_m = kv.get_double("synth.spatial_corr_m", c.synth.spatial_corr_m);
    c.synth.spatial_anchors = get_int("synth.spatial_anchors", c.synth.spatial_anchors);
    c.synth.peak_hour_lo = get_int("synth.peak_hour_lo", c.synth.peak_hour_lo);
    c.synth.peak_hour_hi = get_int("synth.peak_hour_hi", c.synth.peak_hour_hi);
    c.synth.peak_amp_lo = kv.get_double("synth.peak_amp_lo", c.synth.peak_amp_lo);
    c.synth.peak_amp_hi = kv.get_double("synth.peak_amp_hi", c.synth.peak_amp_hi);
    c.synth.peak_width_h = kv.get_double("synth.peak_width_h", c.synth.peak_width_h);
    c.synth.day_noise = kv.get_double("synth.day_noise", c.synth.day_noise);
    c.synth.hour_noise = kv.get_double("synth.hour_noise", c.synth.hour_noise);
    c.synth.mbit_per_user = kv.get_double("synth.mbit_per_user", c.synth.mbit_per_user);
    c.synth.prb_mbit_per_mhz = kv.get_double("synth.prb_mbit_per_mhz", c.synth.prb_mbit_per_mhz);
    c.synth.cqi_lo = kv.get_double("synth.cqi_lo", c.synth.cqi_lo);
    c.synth.cqi_hi = kv.get_double("synth.cqi_hi", c.synth.cqi_hi);
    c.synth.cqi_noise = kv.get_double("synth.cqi_noise", c.synth.cqi_noise);
    get_dlist("synth.bandwidth_set", c.synth.bandwidth_set);
    get_dlist("synth.power_set", c.synth.power_set);
    c.synth.default_a2_dbm = kv.get_double("synth.default_a2_dbm", c.synth.default_a2_dbm);

    c.sim.pl_exponent = kv.get_double("sim.pl_exponent", c.sim.pl_exponent);
    c.sim.pl_ref_db = kv.get_double("sim.pl_ref_db", c.sim.pl_ref_db);
    c.sim.ref_distance_m = kv.get_double("sim.ref_distance_m", c.sim.ref_distance_m);
    c.sim.hysteresis_db = kv.get_double("sim.hysteresis_db", c.sim.hysteresis_db);
    c.sim.sat_mbit_per_mbps = kv.get_double("sim.sat_mbit_per_mbps", c.sim.sat_mbit_per_mbps);
    c.sim.congestion_p = kv.get_double("sim.congestion_p", c.sim.congestion_p);
    c.sim.se_base = kv.get_double("sim.se_base", c.sim.se_base);
    c.sim.se_per_cqi = kv.get_double("sim.se_per_cqi", c.sim.se_per_cqi);
    c.sim.kappa_measure = kv.get_double("sim.kappa_measure", c.sim.kappa_measure);
    c.sim.kappa_conn = kv.get_double("sim.kappa_conn", c.sim.kappa_conn);
    c.sim.a2_lo_dbm = kv.get_double("sim.a2_lo_dbm", c.sim.a2_lo_dbm);
    c.sim.a2_hi_dbm = kv.get_double("sim.a2_hi_dbm", c.sim.a2_hi_dbm);
    c.sim.a2_default_dbm = kv.get_double("sim.a2_default_dbm", c.sim.a2_default_dbm);
    c.sim.max_delta_db = kv.get_double("sim.max_delta_db", c.sim.max_delta_db);

    if (kv.has("train.variant")) c.train_cfg.variant = parse_variant(kv.get_string("train.variant", ""));
    c.train_cfg.hidden_dim = get_int("train.hidden_dim", c.train_cfg.hidden_dim);
    c.train_cfg.k_blocks = get_int("train.k_blocks", c.train_cfg.k_blocks);
    c.train_cfg.n_cap = get_int("train.n_cap", c.train_cfg.n_cap);
    c.train_cfg.lr = kv.get_double("train.lr", c.train_cfg.lr);
    c.train_cfg.epochs = get_int("train.epochs", c.train_cfg.epochs);
    c.train_cfg.lambda_beta = kv.get_double("train.lambda_beta", c.train_cfg.lambda_beta);
    c.train_cfg.lambda_alpha = kv.get_double("train.lambda_alpha", c.train_cfg.lambda_alpha);
    if (kv.has("train.fill")) {
        std::string fill = kv.get_string("train.fill", "");
        if (fill == "mean")
            c.train_cfg.fill = EmptyGroupFill::kMeanOfOthers;
        else if (fill == "zeros")
            c.train_cfg.fill = EmptyGroupFill::kZeros;
        else
            throw DataError("config: train.fill must be 'mean' or 'zeros'");
    }

    c.actor_cfg.hidden_dim = get_int("actor.hidden_dim", c.actor_cfg.hidden_dim);
    c.actor_cfg.lr = kv.get_double("actor.lr", c.actor_cfg.lr);
    c.actor_cfg.epochs = get_int("actor.epochs", c.actor_cfg.epochs);
    c.actor_cfg.lambda3 = kv.get_double("actor.lambda3", c.actor_cfg.lambda3);
    c.actor_cfg.delta_lo = kv.get_double("actor.delta_lo", c.actor_cfg.delta_lo);
    c.actor_cfg.delta_hi = kv.get_double("actor.delta_hi", c.actor_cfg.delta_hi);

    c.grid.a2_lo_dbm = get_int("grid.a2_lo_dbm", c.grid.a2_lo_dbm);
    c.grid.a2_hi_dbm = get_int("grid.a2_hi_dbm", c.grid.a2_hi_dbm);
    c.grid.max_delta_db = get_int("grid.max_delta_db", c.grid.max_delta_db);
    c.grid.default_a2_dbm = get_int("grid.default_a2_dbm", c.grid.default_a2_dbm);

    kv.require_all_consumed();
    c.validate();
    return c;
}

std::string ExperimentConfig::echo() const {
    std::ostringstream out;
    auto put = [&](const std::string& key, const std::string& value) {
        if (!value.empty()) out << key << " = " << value << "\n";
    };
    auto put_d = [&](const std::string& key, double v) { put(key, to_decimal(v)); };
    auto put_i = [&](const std::string& key, long v) { put(key, std::to_string(v)); };

    put_i("days", days);
    put_i("repeats", repeats);
    put_i("seed", static_cast<long>(seed));
    std::vector<std::string> pnames;
    for (Policy p : policies) pnames.push_back(policy_name(p));
    put("policies", join(pnames, ","));
    put_i("nu", nu);
    put_i("phi", phi);
    put_d("expert_r1", expert_r1);
    put_d("expert_r2", expert_r2);
    put_d("handover_tau", handover_tau);
    put_i("freeze_after_day", freeze_after_day);
    put("warm_start", warm_start ? "true" : "false");
    put_i("max_sweeps", max_sweeps);
    put("ratio_arm", ratio_arm);
    put("data_dir", data_dir);
    std::vector<std::string> vnames;
    for (Variant v : mse_variants) vnames.push_back(variant_name(v));
    put("mse_variants", join(vnames, ","));

    put_i("synth.cell_count", synth.cell_count);
    put_d("synth.area_m", synth.area_m);
    put_d("synth.kernel_scale", synth.kernel_scale);
    put_d("synth.kernel_length_m", synth.kernel_length_m);
    put_d("synth.kernel_noise", synth.kernel_noise);
    put_d("synth.kernel_floor", synth.kernel_floor);
    put_d("synth.load_log_mean", synth.load_log_mean);
    put_d("synth.load_log_sigma", synth.load_log_sigma);
    put_d("synth.spatial_corr_m", synth.spatial_corr_m);
    put_i("synth.spatial_anchors", synth.spatial_anchors);
    put_i("synth.peak_hour_lo", synth.peak_hour_lo);
    put_i("synth.peak_hour_hi", synth.peak_hour_hi);
    put_d("synth.peak_amp_lo", synth.peak_amp_lo);
    put_d("synth.peak_amp_hi", synth.peak_amp_hi);
    put_d("synth.peak_width_h", synth.peak_width_h);
    put_d("synth.day_noise", synth.day_noise);
    put_d("synth.hour_noise", synth.hour_noise);
    put_d("synth.mbit_per_user", synth.mbit_per_user);
    put_d("synth.prb_mbit_per_mhz", synth.prb_mbit_per_mhz);
    put_d("synth.cqi_lo", synth.cqi_lo);
    put_d("synth.cqi_hi", synth.cqi_hi);
    put_d("synth.cqi_noise", synth.cqi_noise);
    put("synth.bandwidth_set", join(doubles_to_strings(synth.bandwidth_set), ","));
    put("synth.power_set", join(doubles_to_strings(synth.power_set), ","));
    put_d("synth.default_a2_dbm", synth.default_a2_dbm);

    put_d("sim.pl_exponent", sim.pl_exponent);
    put_d("sim.pl_ref_db", sim.pl_ref_db);
    put_d("sim.ref_distance_m", sim.ref_distance_m);
    put_d("sim.hysteresis_db", sim.hysteresis_db);
    put_d("sim.sat_mbit_per_mbps", sim.sat_mbit_per_mbps);
    put_d("sim.congestion_p", sim.congestion_p);
    put_d("sim.se_base", sim.se_base);
    put_d("sim.se_per_cqi", sim.se_per_cqi);
    put_d("sim.kappa_measure", sim.kappa_measure);
    put_d("sim.kappa_conn", sim.kappa_conn);
    put_d("sim.a2_lo_dbm", sim.a2_lo_dbm);
    put_d("sim.a2_hi_dbm", sim.a2_hi_dbm);
    put_d("sim.a2_default_dbm", sim.a2_default_dbm);
    put_d("sim.max_delta_db", sim.max_delta_db);

    put("train.variant", variant_name(train_cfg.variant));
    put_i("train.hidden_dim", train_cfg.hidden_dim);
    put_i("train.k_blocks", train_cfg.k_blocks);
    put_i("train.n_cap", train_cfg.n_cap);
    put_d("train.lr", train_cfg.lr);
    put_i("train.epochs", train_cfg.epochs);
    put_d("train.lambda_beta", train_cfg.lambda_beta);
    put_d("train.lambda_alpha", train_cfg.lambda_alpha);
    put("train.fill", train_cfg.fill == EmptyGroupFill::kMeanOfOthers ? "mean" : "zeros");

    put_i("actor.hidden_dim", actor_cfg.hidden_dim);
    put_d("actor.lr", actor_cfg.lr);
    put_i("actor.epochs", actor_cfg.epochs);
    put_d("actor.lambda3", actor_cfg.lambda3);
    put_d("actor.delta_lo", actor_cfg.delta_lo);
    put_d("actor.delta_hi", actor_cfg.delta_hi);

    put_i("grid.a2_lo_dbm", grid.a2_lo_dbm);
    put_i("grid.a2_hi_dbm", grid.a2_hi_dbm);
    put_i("grid.max_delta_db", grid.max_delta_db);
    put_i("grid.default_a2_dbm", grid.default_a2_dbm);

    return out.str();
}

namespace {

struct Dataset {
    std::vector<CellRecord> day1_records;
    NetworkGraph graph;
};

Dataset prepare_dataset(const ExperimentConfig& cfg, uint64_t synth_seed) {
    Dataset ds;
    if (!cfg.data_dir.empty()) {
        std::vector<CellRecord> records = load_cells_csv(cfg.data_dir + "/cells.csv");
        std::vector<HandoverStat> stats = load_handover_csv(cfg.data_dir + "/handover.csv");
        std::vector<int> ids;
        for (const CellRecord& r : records) {
            if (ids.empty() || ids.back() != r.cell_id) ids.push_back(r.cell_id);
            if (r.day == 1) ds.day1_records.push_back(r);
        }
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        ds.graph = build_graph(stats, ids, cfg.handover_tau);
    } else {
        SyntheticNetworkConfig scfg = cfg.synth;
        scfg.days = 1;
        scfg.seed = synth_seed;
        SyntheticData data = generate_synthetic(scfg);
        ds.day1_records = std::move(data.records);
        ds.graph = build_graph(data.handover, data.cell_ids, cfg.handover_tau);
    }
    if (ds.day1_records.empty()) throw DataError("closed loop: no day-1 records");
    return ds;
}

std::vector<double> plan_to_a2(const ActionPlan& plan, const NetworkGraph& graph) {
    std::vector<double> a2(graph.cell_count());
    for (size_t i = 0; i < a2.size(); ++i) a2[i] = plan.a2_for(graph.cell_ids[i]);
    return a2;
}

std::vector<double> current_a2(const SimulationState& state) {
    std::vector<double> a2(state.cells.size());
    for (size_t i = 0; i < a2.size(); ++i) a2[i] = state.cells[i].a2_dbm;
    return a2;
}

// One training shared by every learning arm of a repeat on the first trained
// day: their buffers still coincide there, so the result is arm-independent.
struct SharedDay3 {
    bool ready = false;
    TrainResult models;
};

struct ArmRun {
    Policy policy;
    std::vector<double> throughput;                  // index: day - 1
    std::vector<std::vector<DailySample>> samples;   // index: day - 1
};

SelectionMode mode_for(Policy p) {
    switch (p) {
        case Policy::kRatioOnly: return SelectionMode::kRatioOnly;
        case Policy::kThroughputOnly: return SelectionMode::kThroughputOnly;
        default: return SelectionMode::kMulti;
    }
}

SearchResult capped_search(const ExperimentConfig& cfg, const SimulationState& base, const NetworkGraph& graph) {
    std::vector<double> start = current_a2(base);
    std::vector<std::vector<double>> candidates(start.size());
    for (size_t i = 0; i < start.size(); ++i) {
        int cur = static_cast<int>(std::lround(start[i]));
        for (int d : cfg.grid.feasible_deltas(cur)) candidates[i].push_back(cur + d);
    }
    return brute_force_optimal(cfg.sim, base, graph, candidates, start, cfg.max_sweeps);
}

ArmRun simulate_arm(const ExperimentConfig& cfg, Policy policy, const Dataset& ds, const SimulationState& day1,
                    const std::vector<DailySample>& samples1, const ActionPlan& shared_init, uint64_t rep_seed,
                    SharedDay3* shared) {
    ArmRun run;
    run.policy = policy;
    run.throughput.push_back(network_throughput(day1));
    run.samples.push_back(samples1);

    SimulationState state = day1;
    TrainResult models;
    bool has_models = false;
    std::optional<Actor> actor;

    for (int day = 2; day <= cfg.days; ++day) {
        const std::vector<DailySample>& yesterday = run.samples.back();
        std::vector<double> a2;
        try {
            switch (policy) {
                case Policy::kDefault:
                    a2 = current_a2(state);
                    break;
                case Policy::kOptimal:
                    a2 = capped_search(cfg, state, ds.graph).a2_by_cell;
                    break;
                case Policy::kExpert:
                    a2 = plan_to_a2(expert_rule(yesterday, cfg.grid, cfg.expert_r1, cfg.expert_r2), ds.graph);
                    break;
                case Policy::kNegativeSlope:
                    a2 = plan_to_a2(negative_slope_init(yesterday, cfg.grid, cfg.phi), ds.graph);
                    break;
                default: {
                    if (day == 2) {
                        a2 = plan_to_a2(shared_init, ds.graph);
                        break;
                    }
                    bool train_today = cfg.freeze_after_day == 0 || day <= cfg.freeze_after_day;
                    if (train_today || !has_models) {
                        std::vector<DayPair> buffer = build_pairs(run.samples);
                        TrainConfig tc = cfg.train_cfg;
                        tc.seed = derive_seed(rep_seed, 1000 + static_cast<uint64_t>(day));
                        if (day == 3 && shared && shared->ready) {
                            models = shared->models;
                        } else {
                            const RewardModel* wb = cfg.warm_start && has_models ? &models.beta_model : nullptr;
                            const RewardModel* wa = cfg.warm_start && has_models ? &models.alpha_model : nullptr;
                            models = train(buffer, ds.graph, tc, wb, wa);
                            if (day == 3 && shared) {
                                shared->models = models;
                                shared->ready = true;
                            }
                        }
                        has_models = true;
                        if (policy == Policy::kActorCritic) {
                            ActorConfig ac = cfg.actor_cfg;
                            ac.seed = derive_seed(rep_seed, 2000 + static_cast<uint64_t>(day));
                            actor = train_actor(models.beta_model, buffer, ds.graph, ac).actor;
                        }
                    }
                    if (policy == Policy::kActorCritic)
                        a2 = plan_to_a2(actor_plan(*actor, yesterday, ds.graph, cfg.grid), ds.graph);
                    else
                        a2 = plan_to_a2(recommend(models.beta_model, models.alpha_model, yesterday, ds.graph,
                                                  cfg.grid, cfg.nu, mode_for(policy)),
                                        ds.graph);
                    break;
                }
            }
            state = step(cfg.sim, state, a2, ds.graph);
            state.day = day;
            run.throughput.push_back(network_throughput(state));
            run.samples.push_back(make_daily_samples(state_to_records(state), ds.graph, cfg.train_cfg.k_blocks));
        } catch (const std::exception& e) {
            throw DataError("closed loop, day " + std::to_string(day) + ", policy " + policy_name(policy) + ": " +
                            e.what());
        }
    }
    return run;
}

}  // namespace

std::string resolve_primary_arm(const std::vector<Policy>& policies, const std::string& ratio_arm) {
    if (policies.empty()) throw DataError("resolve_primary_arm: no policies");
    if (!ratio_arm.empty()) return ratio_arm;
    for (Policy p : policies)
        if (is_model_family(p)) return policy_name(p);
    return policy_name(policies.front());
}

MetricsReport run_closed_loop(const ExperimentConfig& cfg) {
    cfg.validate();
    MetricsReport report;
    for (Policy p : cfg.policies) report.policies.push_back(policy_name(p));
    report.days = cfg.days;
    report.repeats = cfg.repeats;
    report.primary_arm = resolve_primary_arm(cfg.policies, cfg.ratio_arm);
    report.config_echo = cfg.echo();

    Policy primary = parse_policy(report.primary_arm);

    for (int rep = 0; rep < cfg.repeats; ++rep) {
        uint64_t rep_seed = derive_seed(cfg.seed, static_cast<uint64_t>(rep));
        Dataset ds = prepare_dataset(cfg, derive_seed(rep_seed, 1));

        SimulationState base = make_state(cfg.sim, ds.day1_records, ds.graph);
        SimulationState day1 = step(cfg.sim, base, current_a2(base), ds.graph);
        day1.day = 1;
        std::vector<DailySample> samples1 =
            make_daily_samples(state_to_records(day1), ds.graph, cfg.train_cfg.k_blocks);
        ActionPlan shared_init = random_init(samples1, cfg.grid, derive_seed(rep_seed, 2));

        SharedDay3 day3_cache;

        ArmRun default_run =
            simulate_arm(cfg, Policy::kDefault, ds, day1, samples1, shared_init, rep_seed, nullptr);
        for (Policy p : cfg.policies) {
            ArmRun run = p == Policy::kDefault
                             ? default_run
                             : simulate_arm(cfg, p, ds, day1, samples1, shared_init, rep_seed, &day3_cache);
            for (int day = 1; day <= cfg.days; ++day)
                report.trajectory.push_back({day, policy_name(p), rep, run.throughput[day - 1],
                                             run.throughput[day - 1] - default_run.throughput[day - 1]});
            if (p == primary) {
                std::vector<std::pair<double, int>> order;  // (-|1-beta|, cell index)
                for (size_t i = 0; i < samples1.size(); ++i)
                    order.emplace_back(-std::fabs(1.0 - samples1[i].beta), static_cast<int>(i));
                std::sort(order.begin(), order.end());
                size_t take = std::min<size_t>(5, order.size());
                if (rep == 0)
                    for (int day = 1; day <= cfg.days; ++day)
                        for (size_t k = 0; k < take; ++k) {
                            const DailySample& s = run.samples[day - 1][order[k].second];
                            report.ratios.push_back({day, s.cell_id, s.beta});
                        }
                BalanceCount bc{rep, 0, static_cast<int>(take)};
                for (size_t k = 0; k < take; ++k) {
                    int idx = order[k].second;
                    double before = std::fabs(1.0 - samples1[idx].beta);
                    double after = std::fabs(1.0 - run.samples.back()[idx].beta);
                    if (after < before) ++bc.improved;
                }
                report.balance.push_back(bc);
            }
        }
    }
    return report;
}

MetricsReport run_mse_eval(const ExperimentConfig& cfg) {
    cfg.validate();
    MetricsReport report;
    report.days = cfg.days;
    report.repeats = 1;
    report.config_echo = cfg.echo();

    Dataset ds = prepare_dataset(cfg, derive_seed(cfg.seed, 1));
    SimulationState base = make_state(cfg.sim, ds.day1_records, ds.graph);
    SimulationState state = step(cfg.sim, base, current_a2(base), ds.graph);
    state.day = 1;

    std::vector<std::vector<DailySample>> days;
    days.push_back(make_daily_samples(state_to_records(state), ds.graph, cfg.train_cfg.k_blocks));
    std::vector<int> grid_values = cfg.grid.values();
    for (int day = 2; day <= cfg.days; ++day) {
        // diversification: per-cell uniform thresholds, deliberately not capped
        // against yesterday so the buffer covers the whole grid
        Rng rng(derive_seed(cfg.seed, 500 + static_cast<uint64_t>(day)));
        std::vector<double> a2(ds.graph.cell_count());
        for (double& v : a2) v = grid_values[static_cast<size_t>(rng.uniform_int(0, static_cast<int>(grid_values.size()) - 1))];
        state = step(cfg.sim, state, a2, ds.graph);
        state.day = day;
        days.push_back(make_daily_samples(state_to_records(state), ds.graph, cfg.train_cfg.k_blocks));
    }

    for (int day = 3; day <= cfg.days; ++day) {
        std::vector<std::vector<DailySample>> train_days(days.begin(), days.begin() + (day - 1));
        std::vector<DayPair> buffer = build_pairs(train_days);
        DayPair test_pair = build_pairs({days[static_cast<size_t>(day - 2)], days[static_cast<size_t>(day - 1)]})[0];
        for (Variant v : cfg.mse_variants) {
            TrainConfig tc = cfg.train_cfg;
            tc.variant = v;
            tc.seed = derive_seed(cfg.seed, 1000 + static_cast<uint64_t>(day));
            try {
                TrainResult tr = train(buffer, ds.graph, tc);
                auto [mse_beta, mse_alpha] = evaluate_mse(tr.beta_model, tr.alpha_model, test_pair, ds.graph);
                report.mse.push_back({day, variant_name(v), "ratio", mse_beta});
                report.mse.push_back({day, variant_name(v), "throughput", mse_alpha});
            } catch (const std::exception& e) {
                throw DataError("accuracy run, day " + std::to_string(day) + ", variant " + variant_name(v) +
                                ": " + e.what());
            }
        }
    }
    report.avg_rank = average_ranks(report.mse);
    return report;
}

std::map<std::string, double> average_ranks(const std::vector<MseRow>& rows) {
    // rank within each (day, target) block, ties sharing the mean position
    std::map<std::pair<int, std::string>, std::vector<const MseRow*>> blocks;
    for (const MseRow& r : rows) blocks[{r.day, r.target}].push_back(&r);

    std::map<std::string, double> sum;
    std::map<std::string, int> count;
    for (auto& [key, block] : blocks) {
        std::vector<const MseRow*> sorted = block;
        std::stable_sort(sorted.begin(), sorted.end(),
                         [](const MseRow* a, const MseRow* b) { return a->mse < b->mse; });
        size_t i = 0;
        while (i < sorted.size()) {
            size_t j = i;
            while (j < sorted.size() && sorted[j]->mse == sorted[i]->mse) ++j;
            double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
            for (size_t k = i; k < j; ++k) {
                std::string name = sorted[k]->variant + "/" + sorted[k]->target;
                sum[name] += rank;
                count[name] += 1;
            }
            i = j;
        }
    }
    std::map<std::string, double> avg;
    for (const auto& [name, total] : sum) avg[name] = total / count[name];
    return avg;
}

}  // namespace a2opt
