#include "a2opt/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace a2opt {

void Adam::step(ad::Graph& g) {
    const std::vector<ad::NodeId>& ids = g.param_ids();
    if (m_.empty()) {
        for (ad::NodeId id : ids) {
            const Matrix& p = g.value(id);
            m_.emplace_back(p.rows, p.cols);
            v_.emplace_back(p.rows, p.cols);
        }
    }
    if (m_.size() != ids.size())
        throw std::runtime_error("adam: parameter count changed between steps");

    ++step_;
    double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
    double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));

    for (size_t k = 0; k < ids.size(); ++k) {
        const Matrix& grad = g.adjoint(ids[k]);
        if (!grad.all_finite())
            throw std::runtime_error("adam: non-finite adjoint for parameter '" + g.param_name(ids[k]) + "'");
        Matrix& p = g.param_value(g.param_name(ids[k]));
        Matrix& m = m_[k];
        Matrix& v = v_[k];
        for (size_t i = 0; i < p.size(); ++i) {
            double gi = grad.data[i];
            m.data[i] = cfg_.beta1 * m.data[i] + (1.0 - cfg_.beta1) * gi;
            v.data[i] = cfg_.beta2 * v.data[i] + (1.0 - cfg_.beta2) * gi * gi;
            double mhat = m.data[i] / bc1;
            double vhat = v.data[i] / bc2;
            p.data[i] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
            if (cfg_.l2 != 0.0) p.data[i] -= cfg_.lr * cfg_.l2 * p.data[i];
        }
    }
}

}  // namespace a2opt
