#pragma once

#include <cstdint>
#include <vector>

#include "a2opt/autodiff.hpp"
#include "a2opt/matrix.hpp"

namespace a2opt {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    // Decoupled penalty applied directly to the parameter at update time.
    // Training pipelines keep this at 0 and put the penalty term in the loss
    // instead, so the recorded loss includes it.
    double l2 = 0.0;
};

// Adam over the parameters of one expression graph. Moment buffers are keyed
// by parameter order, which is fixed at graph construction.
class Adam {
public:
    explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

    // One update from the adjoints currently stored in the graph. Throws if
    // any parameter adjoint is non-finite, naming the parameter.
    void step(ad::Graph& g);

    int64_t steps_taken() const { return step_; }
    const AdamConfig& config() const { return cfg_; }

private:
    AdamConfig cfg_;
    int64_t step_ = 0;
    std::vector<Matrix> m_, v_;
};

}  // namespace a2opt
