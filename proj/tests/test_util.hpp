#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "a2opt/autodiff.hpp"
#include "a2opt/dataset.hpp"
#include "a2opt/matrix.hpp"
#include "a2opt/network.hpp"
#include "a2opt/rng.hpp"

namespace a2opt::testutil {

inline NetworkGraph path_graph(int n) {
    NetworkGraph g;
    for (int i = 0; i < n; ++i) {
        g.cell_ids.push_back(i + 1);
        std::vector<int> nb;
        if (i > 0) nb.push_back(i - 1);
        if (i + 1 < n) nb.push_back(i + 1);
        g.adj.push_back(nb);
    }
    return g;
}

inline DailySample random_sample(int cell_id, int day, int k, Rng& rng) {
    DailySample s;
    s.cell_id = cell_id;
    s.day = day;
    s.mean_features = Matrix(1, kFeatureDim);
    s.mean_features.at(0, feature::kUsers) = rng.uniform(20, 120);
    s.mean_features.at(0, feature::kTraffic) = rng.uniform(100, 600);
    s.mean_features.at(0, feature::kPrb) = rng.uniform(0.1, 0.9);
    s.mean_features.at(0, feature::kCqi) = rng.uniform(5, 14);
    s.mean_features.at(0, feature::kBandwidth) = 10.0;
    s.mean_features.at(0, feature::kTxPower) = 43.0;
    s.temporal = Matrix(k, kFeatureDim);
    for (int r = 0; r < k; ++r)
        for (int j = 0; j < kFeatureDim; ++j)
            s.temporal.at(r, j) = s.mean_features.at(0, j) * rng.uniform(0.7, 1.3);
    s.beta = rng.uniform(0.6, 1.4);
    s.alpha = rng.uniform(5, 20);
    s.a2_dbm = -100 + (day > 1 ? rng.uniform_int(-2, 2) : 0);
    return s;
}

inline std::vector<std::vector<DailySample>> random_days(int n, int n_days, int k, uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<DailySample>> days;
    for (int d = 1; d <= n_days; ++d) {
        std::vector<DailySample> day;
        for (int i = 0; i < n; ++i) day.push_back(random_sample(i + 1, d, k, rng));
        days.push_back(day);
    }
    return days;
}

// Central finite differences of `root` w.r.t. one parameter, entry by entry.
inline Matrix fd_gradient(ad::Graph& g, ad::NodeId root, const std::string& pname, double h = 1e-5) {
    Matrix& p = g.param_value(pname);
    Matrix grad(p.rows, p.cols);
    for (size_t i = 0; i < p.size(); ++i) {
        double keep = p.data[i];
        p.data[i] = keep + h;
        double up = g.evaluate(root).data[0];
        p.data[i] = keep - h;
        double dn = g.evaluate(root).data[0];
        p.data[i] = keep;
        grad.data[i] = (up - dn) / (2.0 * h);
    }
    g.evaluate(root);
    return grad;
}

// Relative mismatch with an absolute floor, so near-zero entries are compared
// absolutely instead of amplifying finite-difference noise.
inline double max_rel_err(const Matrix& got, const Matrix& want, double floor_ = 1e-4) {
    double worst = 0.0;
    for (size_t i = 0; i < got.size(); ++i) {
        double denom = std::max(std::abs(want.data[i]), floor_);
        worst = std::max(worst, std::abs(got.data[i] - want.data[i]) / denom);
    }
    return worst;
}

}  // namespace a2opt::testutil
