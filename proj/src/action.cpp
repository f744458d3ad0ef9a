#include "a2opt/action.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "a2opt/rng.hpp"
#include "a2opt/text.hpp"

namespace a2opt {

namespace {

// Shared tie convention: higher score, then smaller move, then lower delta.
bool score_before(double score_i, int delta_i, double score_j, int delta_j) {
    if (score_i != score_j) return score_i > score_j;
    if (std::abs(delta_i) != std::abs(delta_j)) return std::abs(delta_i) < std::abs(delta_j);
    return delta_i < delta_j;
}

double ratio_score(double beta_hat) { return -std::sqrt(std::abs(1.0 - beta_hat)); }

int clamp_delta(long raw, int current_a2, const ActionGrid& grid) {
    long lo = std::max<long>(-grid.max_delta_db, grid.a2_lo_dbm - current_a2);
    long hi = std::min<long>(grid.max_delta_db, grid.a2_hi_dbm - current_a2);
    return static_cast<int>(std::clamp(raw, lo, hi));
}

int common_day(const std::vector<DailySample>& inputs, const char* ctx) {
    if (inputs.empty()) throw DataError(std::string(ctx) + ": empty day");
    for (const DailySample& s : inputs)
        if (s.day != inputs[0].day) throw DataError(std::string(ctx) + ": mixed days in one plan");
    return inputs[0].day;
}

ActionPlan plan_shell(const std::vector<DailySample>& inputs, const char* ctx) {
    ActionPlan plan;
    plan.day = common_day(inputs, ctx) + 1;
    plan.entries.resize(inputs.size());
    for (size_t i = 0; i < inputs.size(); ++i) plan.entries[i].cell_id = inputs[i].cell_id;
    for (size_t i = 1; i < inputs.size(); ++i)
        if (plan.entries[i].cell_id <= plan.entries[i - 1].cell_id)
            throw DataError(std::string(ctx) + ": cells must be ascending and unique");
    return plan;
}

}  // namespace

void ActionGrid::validate() const {
    if (a2_lo_dbm > a2_hi_dbm) throw DataError("ActionGrid: empty grid");
    if (default_a2_dbm < a2_lo_dbm || default_a2_dbm > a2_hi_dbm)
        throw DataError("ActionGrid: default threshold outside the grid");
    if (max_delta_db < 0) throw DataError("ActionGrid: negative delta cap");
}

std::vector<int> ActionGrid::values() const {
    std::vector<int> out;
    for (int v = a2_lo_dbm; v <= a2_hi_dbm; ++v) out.push_back(v);
    return out;
}

std::vector<int> ActionGrid::feasible_deltas(int current_a2_dbm) const {
    std::vector<int> out;
    for (int a = -max_delta_db; a <= max_delta_db; ++a) {
        int next = current_a2_dbm + a;
        if (next >= a2_lo_dbm && next <= a2_hi_dbm) out.push_back(a);
    }
    if (out.empty()) throw DataError("ActionGrid: no feasible move from " + std::to_string(current_a2_dbm));
    return out;
}

void ActionPlan::validate(const ActionGrid& grid) const {
    for (size_t i = 0; i < entries.size(); ++i) {
        const PlanEntry& e = entries[i];
        if (i > 0 && e.cell_id <= entries[i - 1].cell_id)
            throw DataError("ActionPlan: cells must be ascending and unique");
        if (e.a2_dbm < grid.a2_lo_dbm || e.a2_dbm > grid.a2_hi_dbm)
            throw DataError("ActionPlan: cell " + std::to_string(e.cell_id) + " leaves the grid");
        if (std::abs(e.delta_db) > grid.max_delta_db)
            throw DataError("ActionPlan: cell " + std::to_string(e.cell_id) + " exceeds the delta cap");
    }
}

int ActionPlan::a2_for(int cell_id) const {
    for (const PlanEntry& e : entries)
        if (e.cell_id == cell_id) return e.a2_dbm;
    throw DataError("ActionPlan: no entry for cell " + std::to_string(cell_id));
}

std::string mode_name(SelectionMode m) {
    switch (m) {
        case SelectionMode::kMulti: return "multi";
        case SelectionMode::kRatioOnly: return "ratio-only";
        case SelectionMode::kThroughputOnly: return "throughput-only";
    }
    throw DataError("mode_name: unknown mode");
}

SelectionMode parse_mode(const std::string& name) {
    if (name == "multi") return SelectionMode::kMulti;
    if (name == "ratio-only") return SelectionMode::kRatioOnly;
    if (name == "throughput-only") return SelectionMode::kThroughputOnly;
    throw DataError("parse_mode: unknown mode '" + name + "'");
}

std::vector<int> stage1_candidates(const std::vector<int>& deltas, const std::vector<double>& beta_hat, int nu) {
    if (deltas.empty() || deltas.size() != beta_hat.size())
        throw DataError("stage1_candidates: table sizes disagree");
    if (nu < 1) throw DataError("stage1_candidates: nu must be >= 1");
    std::vector<size_t> order(deltas.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t i, size_t j) {
        return score_before(ratio_score(beta_hat[i]), deltas[i], ratio_score(beta_hat[j]), deltas[j]);
    });
    size_t keep = std::min<size_t>(static_cast<size_t>(nu), deltas.size());
    std::vector<int> out;
    for (size_t k = 0; k < keep; ++k) out.push_back(deltas[order[k]]);
    return out;
}

int select_action(const std::vector<int>& deltas, const std::vector<double>& beta_hat,
                  const std::vector<double>& alpha_hat, int nu, SelectionMode mode) {
    if (deltas.empty() || deltas.size() != beta_hat.size() || deltas.size() != alpha_hat.size())
        throw DataError("select_action: table sizes disagree");

    auto argbest = [&](const std::vector<int>& set, auto score_of) {
        int best = set[0];
        double best_score = score_of(best);
        for (size_t k = 1; k < set.size(); ++k) {
            double s = score_of(set[k]);
            if (score_before(s, set[k], best_score, best)) {
                best = set[k];
                best_score = s;
            }
        }
        return best;
    };
    auto index_of = [&](int delta) {
        for (size_t i = 0; i < deltas.size(); ++i)
            if (deltas[i] == delta) return i;
        throw DataError("select_action: delta fell out of the table");
    };

    switch (mode) {
        case SelectionMode::kRatioOnly:
            return argbest(deltas, [&](int d) { return ratio_score(beta_hat[index_of(d)]); });
        case SelectionMode::kThroughputOnly:
            return argbest(deltas, [&](int d) { return alpha_hat[index_of(d)]; });
        case SelectionMode::kMulti: {
            std::vector<int> cand = stage1_candidates(deltas, beta_hat, nu);
            return argbest(cand, [&](int d) { return alpha_hat[index_of(d)]; });
        }
    }
    throw DataError("select_action: unknown mode");
}

ActionPlan recommend(const RewardModel& beta_model, const RewardModel& alpha_model,
                     const std::vector<DailySample>& inputs, const NetworkGraph& graph, const ActionGrid& grid,
                     int nu, SelectionMode mode) {
    grid.validate();
    if (nu < 1) throw DataError("recommend: nu must be >= 1");
    ActionPlan plan = plan_shell(inputs, "recommend");

    Matrix states_b = states_for_day(beta_model, inputs, graph);
    Matrix states_a = states_for_day(alpha_model, inputs, graph);
    for (size_t i = 0; i < inputs.size(); ++i) {
        std::vector<int> deltas = grid.feasible_deltas(static_cast<int>(inputs[i].a2_dbm));
        std::vector<double> bh, ah;
        for (int a : deltas) {
            bh.push_back(head_eval(beta_model, states_b, static_cast<int>(i), a));
            ah.push_back(head_eval(alpha_model, states_a, static_cast<int>(i), a));
        }
        int a = select_action(deltas, bh, ah, nu, mode);
        plan.entries[i].delta_db = a;
        plan.entries[i].a2_dbm = static_cast<int>(inputs[i].a2_dbm) + a;
    }
    plan.validate(grid);
    return plan;
}

ActionPlan expert_rule(const std::vector<DailySample>& inputs, const ActionGrid& grid, double r1, double r2) {
    grid.validate();
    if (!(r1 < 0) || !(r2 < 0)) throw DataError("expert_rule: weights must be negative");
    ActionPlan plan = plan_shell(inputs, "expert_rule");
    for (size_t i = 0; i < inputs.size(); ++i) {
        double beta = inputs[i].beta;
        double raw = (beta >= 1.0 ? r1 : r2) * (beta - 1.0);
        int current = static_cast<int>(inputs[i].a2_dbm);
        int a = clamp_delta(std::lround(raw), current, grid);
        plan.entries[i].delta_db = a;
        plan.entries[i].a2_dbm = current + a;
    }
    plan.validate(grid);
    return plan;
}

ActionPlan negative_slope_init(const std::vector<DailySample>& inputs, const ActionGrid& grid, int phi) {
    grid.validate();
    if (phi < 0) throw DataError("negative_slope_init: phi must be >= 0");
    ActionPlan plan = plan_shell(inputs, "negative_slope_init");
    double rho = inputs[0].beta, tau = inputs[0].beta;
    for (const DailySample& s : inputs) {
        rho = std::min(rho, s.beta);
        tau = std::max(tau, s.beta);
    }
    for (size_t i = 0; i < inputs.size(); ++i) {
        int current = static_cast<int>(inputs[i].a2_dbm);
        long raw = 0;
        if (tau > rho)
            raw = std::lround(2.0 * (inputs[i].beta - rho) * phi / (rho - tau) + phi);
        int a = clamp_delta(raw, current, grid);
        plan.entries[i].delta_db = a;
        plan.entries[i].a2_dbm = current + a;
    }
    plan.validate(grid);
    return plan;
}

ActionPlan random_init(const std::vector<DailySample>& inputs, const ActionGrid& grid, uint64_t seed) {
    grid.validate();
    ActionPlan plan = plan_shell(inputs, "random_init");
    Rng rng(seed);
    for (size_t i = 0; i < inputs.size(); ++i) {
        // Drawn thresholds are uniform on the grid; from the default threshold
        // the cap clamp below never binds, keeping the support exact.
        int drawn = rng.uniform_int(grid.a2_lo_dbm, grid.a2_hi_dbm);
        int current = static_cast<int>(inputs[i].a2_dbm);
        int a = clamp_delta(drawn - current, current, grid);
        plan.entries[i].delta_db = a;
        plan.entries[i].a2_dbm = current + a;
    }
    plan.validate(grid);
    return plan;
}

ActionPlan hold_plan(const std::vector<DailySample>& inputs) {
    ActionPlan plan = plan_shell(inputs, "hold_plan");
    for (size_t i = 0; i < inputs.size(); ++i) plan.entries[i].a2_dbm = static_cast<int>(inputs[i].a2_dbm);
    return plan;
}

void save_plans(const std::string& path, const std::vector<ActionPlan>& plans) {
    std::ofstream out(path);
    if (!out) throw DataError("save_plans: cannot open " + path);
    out << "cell_id,day,delta,a2_dbm\n";
    for (const ActionPlan& p : plans)
        for (const PlanEntry& e : p.entries)
            out << e.cell_id << ',' << p.day << ',' << e.delta_db << ',' << e.a2_dbm << '\n';
    if (!out) throw DataError("save_plans: write failed for " + path);
}

std::vector<ActionPlan> load_plans(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("load_plans: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "cell_id,day,delta,a2_dbm")
        throw DataError("load_plans: bad header in " + path);
    std::vector<ActionPlan> plans;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> tok = split(line, ',');
        if (tok.size() != 4) throw DataError("load_plans: bad row '" + line + "'");
        int day = static_cast<int>(parse_long(tok[1]));
        if (plans.empty() || plans.back().day != day) {
            if (!plans.empty() && day < plans.back().day)
                throw DataError("load_plans: days out of order in " + path);
            plans.push_back(ActionPlan{day, {}});
        }
        PlanEntry e;
        e.cell_id = static_cast<int>(parse_long(tok[0]));
        e.delta_db = static_cast<int>(parse_long(tok[2]));
        e.a2_dbm = static_cast<int>(parse_long(tok[3]));
        plans.back().entries.push_back(e);
    }
    return plans;
}

}  // namespace a2opt
