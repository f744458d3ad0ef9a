#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "a2opt/action.hpp"
#include "a2opt/dataset.hpp"
#include "a2opt/network.hpp"
#include "a2opt/reward_model.hpp"

namespace a2opt {

// Policy net sharing the critic's backbone shape. The head maps the state row
// to one scalar squashed onto (delta_lo, delta_hi), so every emitted action is
// inside the move range by construction. Data-pipeline fields (variant,
// k_blocks, mapper, ...) are inherited from the critic at training time.
struct Actor {
    Variant variant = Variant::kTagGcn;
    int hidden_dim = 16;
    int k_blocks = 4;
    int n_cap = 0;
    EmptyGroupFill fill = EmptyGroupFill::kMeanOfOthers;
    LatentMapper mapper;
    double delta_lo = -5.0;
    double delta_hi = 5.0;
    std::map<std::string, Matrix> weights;  // backbone + head_w (hidden_dim x 1)
};

struct ActorConfig {
    int hidden_dim = 16;
    double lr = 1e-3;
    int epochs = 300;
    double lambda3 = 1e-4;
    uint64_t seed = 1;
    double delta_lo = -5.0;
    double delta_hi = 5.0;

    void validate() const;
};

struct ActorResult {
    Actor actor;
    std::vector<double> history;  // loss per epoch
};

// Continuous per-cell actions for one day of inputs.
std::vector<double> actor_forward(const Actor& actor, const std::vector<DailySample>& inputs,
                                  const NetworkGraph& graph);

// Minimizes mean sqrt(|1 - beta_hat(a_hat)|) + lambda3 * ||actor params||^2
// over the buffer, with the ratio critic frozen: its state rows and head enter
// the graph as constants, so only the actor receives gradient. The kinked
// outer derivative is applied by hand with its magnitude clipped at 10.
ActorResult train_actor(const RewardModel& critic, const std::vector<DayPair>& buffer, const NetworkGraph& graph,
                        const ActorConfig& cfg);

// Continuous actions rounded to whole dB and clamped to the cell's feasible
// window, as a plan the simulator can apply.
ActionPlan actor_plan(const Actor& actor, const std::vector<DailySample>& inputs, const NetworkGraph& graph,
                      const ActionGrid& grid);

void save_actor(const std::string& path, const Actor& actor);
Actor load_actor(const std::string& path);

namespace detail {

// One graph holding every pair-cell term: actor params trainable, critic
// frozen as constants. `beta_hat` nodes are in critic target units.
struct ActorLossGraph {
    ad::Graph g;
    std::vector<ad::NodeId> beta_hat;
    std::vector<ad::NodeId> action;  // matching squashed-action nodes
    ad::NodeId l2 = -1;              // absent when lambda3 == 0
    ad::NodeId sink = -1;            // last node, evaluate target
    double lambda3 = 0.0;
};

ActorLossGraph build_actor_loss(const RewardModel& critic, const std::vector<DayPair>& buffer,
                                const NetworkGraph& graph, const ActorConfig& cfg,
                                const std::map<std::string, Matrix>& actor_weights);

// Forward value of the full actor loss; leaves node values current.
double actor_loss_value(ActorLossGraph& lg);

// Seeds the handwritten outer derivative and sweeps; call after a forward.
void actor_loss_backward(ActorLossGraph& lg);

std::map<std::string, Matrix> init_actor_weights(Variant v, int hidden_dim, Rng& rng);

}  // namespace detail

}  // namespace a2opt
