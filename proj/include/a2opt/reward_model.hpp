#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "a2opt/autodiff.hpp"
#include "a2opt/dataset.hpp"
#include "a2opt/latent.hpp"
#include "a2opt/network.hpp"
#include "a2opt/rng.hpp"

namespace a2opt {

// The model family, ordered by what each adds: MLP sees only the center cell,
// GCN adds a homogeneous neighbor mean, AgGcn adds quadrant grouping, TagGcn
// adds the temporal encoder.
enum class Variant { kMlp, kGcn, kAgGcn, kTagGcn };

std::string variant_name(Variant v);  // "mlp", "gcn", "ag-gcn", "tag-gcn"
Variant parse_variant(const std::string& name);

enum class EmptyGroupFill { kMeanOfOthers, kZeros };

struct TrainConfig {
    Variant variant = Variant::kTagGcn;
    int hidden_dim = 16;  // width of group transforms, temporal encoder and state
    int k_blocks = 4;     // temporal rows per day; must match the samples
    int n_cap = 0;        // latent-neighbor cap; 0 takes the full graph degree
    double lr = 1e-3;
    int epochs = 300;
    double lambda_beta = 1e-4;
    double lambda_alpha = 1e-4;
    uint64_t seed = 1;
    EmptyGroupFill fill = EmptyGroupFill::kMeanOfOthers;

    void validate() const;
};

// One training pair: day-t inputs with day-(t+1) targets, all in graph order.
struct DayPair {
    std::vector<DailySample> inputs;
    std::vector<double> action;  // per-cell threshold delta between the days
    std::vector<double> target_beta;
    std::vector<double> target_alpha;
};

// Chains consecutive days into pairs {(1,2), ..., (T-1,T)}. Every day must
// cover the same cells in the same order.
std::vector<DayPair> build_pairs(const std::vector<std::vector<DailySample>>& days);

// A trained single-target predictor. Weights are plain named matrices; the
// mapper-owned statistics standardize both the latent mapping and every
// feature input, and predictions come out multiplied by target_scale (targets
// are trained divided by their buffer mean, keeping the positive output head
// in a well-scaled range).
struct RewardModel {
    Variant variant = Variant::kTagGcn;
    int hidden_dim = 16;
    int k_blocks = 4;
    int n_cap = 0;
    EmptyGroupFill fill = EmptyGroupFill::kMeanOfOthers;
    LatentMapper mapper;
    double target_scale = 1.0;
    std::map<std::string, Matrix> weights;
};

struct TrainResult {
    RewardModel beta_model;
    RewardModel alpha_model;
    std::vector<double> history;  // combined loss per epoch
};

// Fits both predictors jointly on the full buffer (one combined loss; the
// parameter sets are disjoint). Deterministic for a fixed config. Passing
// warm-start models continues from their weights instead of a fresh init.
TrainResult train(const std::vector<DayPair>& buffer, const NetworkGraph& graph, const TrainConfig& cfg,
                  const RewardModel* warm_beta = nullptr, const RewardModel* warm_alpha = nullptr);

// Action-independent per-cell state rows (n x hidden_dim) for one day of
// inputs. The action enters only through the prediction head, so candidate
// actions can share these rows.
Matrix states_for_day(const RewardModel& m, const std::vector<DailySample>& inputs, const NetworkGraph& graph);

// Head evaluation on one state row, in original target units.
double head_eval(const RewardModel& m, const Matrix& states, int cell_index, double action);

// states_for_day + head_eval for every cell.
std::vector<double> predict(const RewardModel& m, const std::vector<DailySample>& inputs, const NetworkGraph& graph,
                            const std::vector<double>& actions);

// Mean squared prediction error over cells, per target, in original units.
std::pair<double, double> evaluate_mse(const RewardModel& beta_model, const RewardModel& alpha_model,
                                       const DayPair& test_pair, const NetworkGraph& graph);

// Flat text round trip: header fields plus named matrices, decimals written
// shortest-round-trip so loads are bit-exact.
void save_model(const std::string& path, const RewardModel& m);
RewardModel load_model(const std::string& path);

namespace detail {

// Everything one cell contributes to the graph as constants.
struct PreparedCell {
    double beta = 1.0;
    double action = 0.0;
    double target_beta = 0.0;   // normalized
    double target_alpha = 0.0;  // normalized
    Matrix xbar;                // 1 x d, standardized daily mean
    Matrix gcn_pool;            // 1 x d, mean over graph neighbors
    std::array<Matrix, 4> pooled;  // 1 x d per quadrant group
    std::vector<Matrix> p_rows;    // K rows, 1 x d each, standardized
};

struct PreparedPair {
    std::vector<PreparedCell> cells;
};

struct Prepared {
    LatentMapper mapper;
    double beta_scale = 1.0;
    double alpha_scale = 1.0;
    std::vector<PreparedPair> pairs;
};

Prepared prepare_buffer(const std::vector<DayPair>& buffer, const NetworkGraph& graph, const TrainConfig& cfg);

// Prediction-time preparation with the trained mapper; targets stay zero.
PreparedPair prepare_day(const RewardModel& m, const std::vector<DailySample>& inputs, const NetworkGraph& graph);

// Parameter node ids by role name ("group_w1", "rnn_win", "state_w", ...).
struct ParamSet {
    std::map<std::string, ad::NodeId> ids;
};

std::vector<std::string> param_names(Variant v);
std::map<std::string, Matrix> init_weights(Variant v, int hidden_dim, Rng& rng);

// Adds the weights as trainable params (prefix + name) or frozen constants.
ParamSet add_params(ad::Graph& g, const std::string& prefix, const std::map<std::string, Matrix>& weights,
                    bool frozen);

// Builds the action-independent state vector (1 x hidden_dim) for one cell.
ad::NodeId build_state(ad::Graph& g, const ParamSet& ps, Variant v, int hidden_dim, const PreparedCell& cell);

// State + head. `action_node` < 0 adds the cell's action as a constant.
struct BuiltCell {
    ad::NodeId state;
    ad::NodeId pred_norm;  // positive head output, normalized units
};
BuiltCell build_cell(ad::Graph& g, const ParamSet& ps, Variant v, int hidden_dim, const PreparedCell& cell,
                     ad::NodeId action_node = -1);

// Full-batch training loss over the prepared buffer, both models in one graph.
struct LossGraph {
    ad::Graph g;
    ad::NodeId loss_beta = -1;   // normalized mse + l2
    ad::NodeId loss_alpha = -1;
    ad::NodeId total = -1;
};
LossGraph build_loss_graph(const Prepared& prep, const TrainConfig& cfg,
                           const std::map<std::string, Matrix>& beta_weights,
                           const std::map<std::string, Matrix>& alpha_weights);

}  // namespace detail

}  // namespace a2opt
