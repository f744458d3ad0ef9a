#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "a2opt/action.hpp"
#include "a2opt/actor_critic.hpp"
#include "a2opt/config_file.hpp"
#include "a2opt/network.hpp"
#include "a2opt/reward_model.hpp"
#include "a2opt/simulator.hpp"
#include "a2opt/synthetic.hpp"

namespace a2opt {

// One arm of a closed-loop comparison. The rule arms act on yesterday's
// ratios; the model family retrains daily and recommends; optimal re-searches
// the capped move window against the simulator itself.
enum class Policy {
    kDefault,
    kOptimal,
    kExpert,
    kNegativeSlope,
    kActorCritic,
    kModel,
    kRatioOnly,
    kThroughputOnly,
};

std::string policy_name(Policy p);
Policy parse_policy(const std::string& name);

struct ExperimentConfig {
    SyntheticNetworkConfig synth;  // synth.days and synth.seed are driven by the run
    SimulatorConfig sim;
    TrainConfig train_cfg;
    ActorConfig actor_cfg;
    ActionGrid grid;

    int days = 10;
    int repeats = 5;
    uint64_t seed = 1;
    std::vector<Policy> policies = {Policy::kDefault, Policy::kOptimal, Policy::kExpert, Policy::kModel};
    int nu = 3;
    int phi = 4;  // negative-slope half-range
    double expert_r1 = -2.0;
    double expert_r2 = -2.0;
    double handover_tau = kDefaultHandoverTau;
    int freeze_after_day = 0;  // 0: retrain every day
    bool warm_start = false;
    int max_sweeps = 50;
    std::string ratio_arm;  // empty: first model-family arm, else the first arm
    std::string data_dir;   // non-empty: read cells.csv/handover.csv instead of generating
    std::vector<Variant> mse_variants = {Variant::kMlp, Variant::kGcn, Variant::kAgGcn, Variant::kTagGcn};

    void validate() const;
    static ExperimentConfig from_key_values(const KeyValues& kv);
    // Every knob above as deterministic key = value text; parseable by
    // from_key_values, so a rerun of an echoed config reproduces the run.
    std::string echo() const;
};

struct TrajectoryRow {
    int day = 0;
    std::string policy;
    int repeat = 0;
    double throughput = 0;
    double diff_to_default = 0;
};

struct RatioRow {
    int day = 0;
    int cell_id = 0;
    double beta = 0;
};

struct MseRow {
    int day = 0;
    std::string variant;
    std::string target;  // "ratio" | "throughput"
    double mse = 0;
};

// Of the tracked cells of one repeat (the five with the largest day-1
// |1 - beta| under the primary arm), how many end the run more balanced
// than they started.
struct BalanceCount {
    int repeat = 0;
    int improved = 0;
    int tracked = 0;
};

struct MetricsReport {
    std::vector<std::string> policies;  // arm order as run
    int days = 0;
    int repeats = 0;
    std::string primary_arm;            // whose cells ratio_trajectories follows
    std::vector<TrajectoryRow> trajectory;
    std::vector<RatioRow> ratios;       // repeat 0, primary arm, 5 most unbalanced day-1 cells
    std::vector<BalanceCount> balance;  // one entry per repeat, primary arm; not written to CSV
    std::vector<MseRow> mse;
    std::map<std::string, double> avg_rank;  // "variant/target" -> average rank
    std::string config_echo;
};

// Day 1 runs the default thresholds, day 2 the shared random initialization
// (identical across the learning arms of one repeat), every later day each
// arm's policy. Deterministic for a fixed config.
MetricsReport run_closed_loop(const ExperimentConfig& cfg);

// Forward-chaining protocol over one diversified dataset: evaluation day t
// trains every variant on pairs (1,2)..(t-2,t-1) and tests on (t-1,t).
MetricsReport run_mse_eval(const ExperimentConfig& cfg);

// Average rank per variant and target, ties sharing the mean position.
std::map<std::string, double> average_ranks(const std::vector<MseRow>& rows);

// The arm the ratio file follows: the named one if set, else the first
// learning arm, else the first arm.
std::string resolve_primary_arm(const std::vector<Policy>& policies, const std::string& ratio_arm);

// trajectory.csv / ratio_trajectories.csv / mse.csv / summary.txt / config.txt;
// same report in, byte-identical files out.
void emit_report(const MetricsReport& report, const std::string& out_dir);
MetricsReport load_report(const std::string& dir);
std::string render_summary(const MetricsReport& report);

}  // namespace a2opt
