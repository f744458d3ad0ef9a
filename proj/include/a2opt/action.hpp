#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "a2opt/dataset.hpp"
#include "a2opt/network.hpp"
#include "a2opt/reward_model.hpp"

namespace a2opt {

// Integer A2 grid with a per-day movement cap. The default threshold must be
// a member, so every policy can fall back to "do nothing".
struct ActionGrid {
    int a2_lo_dbm = -105;
    int a2_hi_dbm = -95;
    int max_delta_db = 5;
    int default_a2_dbm = -100;

    void validate() const;
    int size() const { return a2_hi_dbm - a2_lo_dbm + 1; }
    std::vector<int> values() const;
    // Deltas a with |a| <= max_delta and current + a inside the grid, ascending.
    std::vector<int> feasible_deltas(int current_a2_dbm) const;
};

struct PlanEntry {
    int cell_id = 0;
    int delta_db = 0;
    int a2_dbm = 0;  // threshold after applying the delta
};

// One day's threshold moves, entries ascending by cell id. `day` is the day
// the new thresholds take effect.
struct ActionPlan {
    int day = 0;
    std::vector<PlanEntry> entries;

    void validate(const ActionGrid& grid) const;
    int a2_for(int cell_id) const;  // throws DataError for unknown cells
};

enum class SelectionMode { kMulti, kRatioOnly, kThroughputOnly };

std::string mode_name(SelectionMode m);
SelectionMode parse_mode(const std::string& name);

// Stage 1 on one cell's prediction table: deltas ranked by the ratio score
// -sqrt(|1 - beta_hat|), ties toward smaller |a| then lower a, truncated to
// min(nu, table size). Returned in rank order.
std::vector<int> stage1_candidates(const std::vector<int>& deltas, const std::vector<double>& beta_hat, int nu);

// Full per-cell selection. Multi mode picks the throughput argmax inside the
// stage-1 set; the single-objective modes scan the whole table with the same
// tie convention, so nu = 1 and nu = table size reduce to them exactly.
int select_action(const std::vector<int>& deltas, const std::vector<double>& beta_hat,
                  const std::vector<double>& alpha_hat, int nu, SelectionMode mode);

// Two-stage recommendation over one day of inputs. Both models share the
// cell's precomputed state row; only the head sees each candidate delta.
ActionPlan recommend(const RewardModel& beta_model, const RewardModel& alpha_model,
                     const std::vector<DailySample>& inputs, const NetworkGraph& graph, const ActionGrid& grid,
                     int nu, SelectionMode mode);

// a = r1 (beta - 1) for beta >= 1 else r2 (beta - 1), rounded to the nearest
// whole dB and clamped to the cap and the grid bounds.
ActionPlan expert_rule(const std::vector<DailySample>& inputs, const ActionGrid& grid, double r1 = -2.0,
                       double r2 = -2.0);

// Linear ramp over the day's ratio spread: the minimum-ratio cell moves +phi,
// the maximum-ratio cell -phi. A flat spread degenerates to all zeros.
ActionPlan negative_slope_init(const std::vector<DailySample>& inputs, const ActionGrid& grid, int phi);

// Per-cell uniform draw of a threshold from the grid.
ActionPlan random_init(const std::vector<DailySample>& inputs, const ActionGrid& grid, uint64_t seed);

// Keeps every threshold where it is.
ActionPlan hold_plan(const std::vector<DailySample>& inputs);

// CSV round trip, header cell_id,day,delta,a2_dbm, rows sorted by day then cell.
void save_plans(const std::string& path, const std::vector<ActionPlan>& plans);
std::vector<ActionPlan> load_plans(const std::string& path);

}  // namespace a2opt
