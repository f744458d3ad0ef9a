#include <array>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "a2opt/dataset.hpp"
#include "a2opt/network.hpp"
#include "a2opt/reward_model.hpp"
#include "a2opt/rng.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace a2opt;

namespace {

using testutil::path_graph;
using testutil::random_days;

// Model with the given weights over an identity mapper, so latent coordinates
// read off the first two features directly.
RewardModel raw_coordinate_model(Variant v, int hidden_dim, int k, uint64_t seed) {
    RewardModel m;
    m.variant = v;
    m.hidden_dim = hidden_dim;
    m.k_blocks = k;
    m.mapper.mean = Matrix(1, kFeatureDim);
    m.mapper.std = Matrix(1, kFeatureDim);
    m.mapper.std.fill(1.0);
    m.mapper.proj = Matrix(2, kFeatureDim);
    m.mapper.proj.at(0, feature::kUsers) = 1.0;
    m.mapper.proj.at(1, feature::kTraffic) = 1.0;
    Rng rng(seed);
    m.weights = detail::init_weights(v, hidden_dim, rng);
    return m;
}

double total_sq_norm(const std::map<std::string, Matrix>& w) {
    double s = 0;
    for (const auto& [name, mat] : w) s += mat.squared_norm();
    return s;
}

const std::array<Variant, 4> kAllVariants = {Variant::kMlp, Variant::kGcn, Variant::kAgGcn, Variant::kTagGcn};

}  // namespace

TEST_CASE("variant names round trip") {
    for (Variant v : kAllVariants) CHECK(parse_variant(variant_name(v)) == v);
    CHECK(variant_name(Variant::kTagGcn) == "tag-gcn");
    CHECK_THROWS_AS(parse_variant("resnet"), DataError);
}

TEST_CASE("config validation rejects out-of-range fields") {
    TrainConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    TrainConfig bad = cfg;
    bad.hidden_dim = 0;
    CHECK_THROWS_AS(bad.validate(), DataError);
    bad = cfg;
    bad.k_blocks = 25;
    CHECK_THROWS_AS(bad.validate(), DataError);
    bad = cfg;
    bad.lr = 0;
    CHECK_THROWS_AS(bad.validate(), DataError);
    bad = cfg;
    bad.epochs = 0;
    CHECK_THROWS_AS(bad.validate(), DataError);
    bad = cfg;
    bad.lambda_beta = -1;
    CHECK_THROWS_AS(bad.validate(), DataError);
    bad = cfg;
    bad.n_cap = -1;
    CHECK_THROWS_AS(bad.validate(), DataError);
}

TEST_CASE("day pairs chain consecutive days with their threshold moves") {
    auto days = random_days(4, 3, 2, 7);
    auto pairs = build_pairs(days);
    REQUIRE(pairs.size() == 2);
    for (size_t p = 0; p < pairs.size(); ++p) {
        const auto& in = days[p];
        const auto& next = days[p + 1];
        REQUIRE(pairs[p].inputs.size() == in.size());
        for (size_t i = 0; i < in.size(); ++i) {
            CHECK(pairs[p].inputs[i].cell_id == in[i].cell_id);
            CHECK(pairs[p].action[i] == next[i].a2_dbm - in[i].a2_dbm);
            CHECK(pairs[p].inputs[i].delta_action == pairs[p].action[i]);
            CHECK(pairs[p].target_beta[i] == next[i].beta);
            CHECK(pairs[p].target_alpha[i] == next[i].alpha);
        }
    }

    CHECK_THROWS_AS(build_pairs({days[0]}), DataError);
    auto ragged = days;
    ragged[1].pop_back();
    CHECK_THROWS_AS(build_pairs(ragged), DataError);
    auto scrambled = days;
    std::swap(scrambled[1][0].cell_id, scrambled[1][1].cell_id);
    CHECK_THROWS_AS(build_pairs(scrambled), DataError);
}

TEST_CASE("every training gradient matches central differences") {
    NetworkGraph graph = path_graph(5);
    auto pairs = build_pairs(random_days(5, 3, 2, 11));

    for (Variant v : kAllVariants) {
        CAPTURE(variant_name(v));
        TrainConfig cfg;
        cfg.variant = v;
        cfg.hidden_dim = 3;
        cfg.k_blocks = 2;
        cfg.lambda_beta = 1e-3;
        cfg.lambda_alpha = v == Variant::kMlp ? 0.0 : 1e-3;
        detail::Prepared prep = detail::prepare_buffer(pairs, graph, cfg);

        Rng rng(3);
        auto wb = detail::init_weights(v, cfg.hidden_dim, rng);
        auto wa = detail::init_weights(v, cfg.hidden_dim, rng);
        detail::LossGraph lg = detail::build_loss_graph(prep, cfg, wb, wa);
        lg.g.backward(lg.total);

        for (ad::NodeId pid : lg.g.param_ids()) {
            const std::string& name = lg.g.param_name(pid);
            CAPTURE(name);
            Matrix fd = testutil::fd_gradient(lg.g, lg.total, name);
            CHECK(testutil::max_rel_err(lg.g.adjoint(pid), fd) < 1e-4);
        }
    }
}

TEST_CASE("each variant sees exactly its own pooling scope") {
    // Two input days that agree on every neighbor-mean but move two cells to
    // different quadrants, with feature sums kept exactly representable.
    int n = 5, k = 2;
    auto base = random_days(n, 1, k, 21)[0];
    auto set_xy = [](DailySample& s, double users, double traffic) {
        s.mean_features.at(0, feature::kUsers) = users;
        s.mean_features.at(0, feature::kTraffic) = traffic;
    };
    set_xy(base[0], 45, 105);
    set_xy(base[1], 40, 90);
    set_xy(base[2], 50, 100);
    set_xy(base[3], 60, 110);
    set_xy(base[4], 55, 95);

    auto moved = base;
    set_xy(moved[1], 48, 106);  // 40 + 60 == 48 + 52, 90 + 110 == 106 + 94
    set_xy(moved[3], 52, 94);

    NetworkGraph graph = path_graph(n);
    for (Variant v : kAllVariants) {
        CAPTURE(variant_name(v));
        RewardModel m = raw_coordinate_model(v, 4, k, 5);
        Matrix sa = states_for_day(m, base, graph);
        Matrix sb = states_for_day(m, moved, graph);

        double center_diff = 0, moved_diff = 0;
        for (int j = 0; j < m.hidden_dim; ++j) {
            center_diff = std::max(center_diff, std::abs(sa.at(2, j) - sb.at(2, j)));
            moved_diff = std::max(moved_diff, std::abs(sa.at(1, j) - sb.at(1, j)));
        }
        CHECK(moved_diff > 1e-6);  // the moved cells always see their own change
        if (v == Variant::kMlp || v == Variant::kGcn) {
            CHECK(center_diff == 0.0);  // neighbor mean is bitwise preserved
        } else {
            CHECK(center_diff > 1e-6);  // grouping notices the quadrant change
        }
    }
}

TEST_CASE("prediction reproduces the training-graph head exactly") {
    NetworkGraph graph = path_graph(5);
    auto pairs = build_pairs(random_days(5, 3, 2, 31));

    for (Variant v : kAllVariants) {
        CAPTURE(variant_name(v));
        TrainConfig cfg;
        cfg.variant = v;
        cfg.hidden_dim = 3;
        cfg.k_blocks = 2;
        detail::Prepared prep = detail::prepare_buffer(pairs, graph, cfg);

        RewardModel m;
        m.variant = v;
        m.hidden_dim = cfg.hidden_dim;
        m.k_blocks = cfg.k_blocks;
        m.mapper = prep.mapper;
        m.target_scale = prep.beta_scale;
        Rng rng(9);
        m.weights = detail::init_weights(v, cfg.hidden_dim, rng);

        const DayPair& pair = pairs[0];
        std::vector<double> pred = predict(m, pair.inputs, graph, pair.action);

        ad::Graph g;
        detail::ParamSet ps = detail::add_params(g, "", m.weights, true);
        for (size_t i = 0; i < pair.inputs.size(); ++i) {
            detail::BuiltCell cell =
                detail::build_cell(g, ps, v, cfg.hidden_dim, prep.pairs[0].cells[i]);
            double want = g.evaluate(cell.pred_norm).at(0, 0) * m.target_scale;
            CHECK(pred[i] == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("mse evaluation matches direct arithmetic") {
    NetworkGraph graph = path_graph(4);
    auto pairs = build_pairs(random_days(4, 3, 2, 41));
    TrainConfig cfg;
    cfg.hidden_dim = 3;
    cfg.k_blocks = 2;
    cfg.epochs = 2;
    auto res = train(pairs, graph, cfg);

    const DayPair& pair = pairs[1];
    auto pb = predict(res.beta_model, pair.inputs, graph, pair.action);
    auto pa = predict(res.alpha_model, pair.inputs, graph, pair.action);
    double want_b = 0, want_a = 0;
    for (size_t i = 0; i < pb.size(); ++i) {
        want_b += (pb[i] - pair.target_beta[i]) * (pb[i] - pair.target_beta[i]);
        want_a += (pa[i] - pair.target_alpha[i]) * (pa[i] - pair.target_alpha[i]);
    }
    want_b /= static_cast<double>(pb.size());
    want_a /= static_cast<double>(pa.size());

    auto [mse_b, mse_a] = evaluate_mse(res.beta_model, res.alpha_model, pair, graph);
    CHECK(mse_b == doctest::Approx(want_b).epsilon(1e-12));
    CHECK(mse_a == doctest::Approx(want_a).epsilon(1e-12));
    CHECK(mse_a > 0);
}

TEST_CASE("training reduces the loss on a fixed buffer") {
    NetworkGraph graph = path_graph(5);
    auto pairs = build_pairs(random_days(5, 4, 2, 51));
    TrainConfig cfg;
    cfg.hidden_dim = 4;
    cfg.k_blocks = 2;
    cfg.lr = 1e-2;
    cfg.epochs = 30;
    cfg.lambda_beta = 0;
    cfg.lambda_alpha = 0;
    auto res = train(pairs, graph, cfg);
    REQUIRE(res.history.size() == 30);
    CHECK(res.history[10] < res.history[0]);
    CHECK(res.history.back() < 0.5 * res.history.front());
    for (double h : res.history) CHECK(std::isfinite(h));
}

TEST_CASE("a crushing penalty drives the weights toward zero") {
    NetworkGraph graph = path_graph(4);
    auto pairs = build_pairs(random_days(4, 3, 2, 61));
    TrainConfig cfg;
    cfg.hidden_dim = 3;
    cfg.k_blocks = 2;
    cfg.lr = 5e-3;
    cfg.epochs = 400;
    cfg.lambda_beta = 10;
    cfg.lambda_alpha = 10;
    auto res = train(pairs, graph, cfg);

    Rng rng(cfg.seed);
    auto init_b = detail::init_weights(cfg.variant, cfg.hidden_dim, rng);
    double before = total_sq_norm(init_b);
    double after = total_sq_norm(res.beta_model.weights);
    CHECK(after < 0.05 * before);
    for (const auto& [name, mat] : res.beta_model.weights)
        for (double x : mat.data) CHECK(std::abs(x) < 0.05);
}

TEST_CASE("the same seed reproduces training bit for bit") {
    NetworkGraph graph = path_graph(4);
    auto pairs = build_pairs(random_days(4, 3, 2, 71));
    TrainConfig cfg;
    cfg.hidden_dim = 3;
    cfg.k_blocks = 2;
    cfg.epochs = 5;
    auto r1 = train(pairs, graph, cfg);
    auto r2 = train(pairs, graph, cfg);
    CHECK(r1.history == r2.history);
    CHECK(r1.beta_model.weights == r2.beta_model.weights);
    CHECK(r1.alpha_model.weights == r2.alpha_model.weights);
    CHECK(r1.beta_model.target_scale == r2.beta_model.target_scale);

    TrainConfig other = cfg;
    other.seed = 99;
    auto r3 = train(pairs, graph, other);
    CHECK(r3.beta_model.weights != r1.beta_model.weights);
}

TEST_CASE("duplicating the buffer changes neither loss nor gradients") {
    NetworkGraph graph = path_graph(4);
    auto pairs = build_pairs(random_days(4, 3, 2, 81));
    auto doubled = pairs;
    doubled.insert(doubled.end(), pairs.begin(), pairs.end());

    TrainConfig cfg;
    cfg.hidden_dim = 3;
    cfg.k_blocks = 2;
    detail::Prepared p1 = detail::prepare_buffer(pairs, graph, cfg);
    detail::Prepared p2 = detail::prepare_buffer(doubled, graph, cfg);
    CHECK(p1.beta_scale == doctest::Approx(p2.beta_scale).epsilon(1e-14));
    CHECK(p1.alpha_scale == doctest::Approx(p2.alpha_scale).epsilon(1e-14));

    Rng rng(5);
    auto wb = detail::init_weights(cfg.variant, cfg.hidden_dim, rng);
    auto wa = detail::init_weights(cfg.variant, cfg.hidden_dim, rng);
    detail::LossGraph g1 = detail::build_loss_graph(p1, cfg, wb, wa);
    detail::LossGraph g2 = detail::build_loss_graph(p2, cfg, wb, wa);
    g1.g.backward(g1.total);
    g2.g.backward(g2.total);
    CHECK(g1.g.value(g1.total).at(0, 0) == doctest::Approx(g2.g.value(g2.total).at(0, 0)).epsilon(1e-12));
    for (ad::NodeId pid : g1.g.param_ids()) {
        const std::string& name = g1.g.param_name(pid);
        CAPTURE(name);
        CHECK(testutil::max_rel_err(g1.g.adjoint(pid), g2.g.adjoint(g2.g.param_id(name)), 1e-6) < 1e-9);
    }
}

TEST_CASE("warm start resumes from the given weights") {
    NetworkGraph graph = path_graph(4);
    auto pairs = build_pairs(random_days(4, 3, 2, 91));
    TrainConfig cfg;
    cfg.hidden_dim = 3;
    cfg.k_blocks = 2;
    cfg.epochs = 5;
    auto first = train(pairs, graph, cfg);

    TrainConfig one = cfg;
    one.epochs = 1;
    auto resumed = train(pairs, graph, one, &first.beta_model, &first.alpha_model);
    // The resumed loss starts where the final trained weights put it, which is
    // below the fresh-init loss of the first run.
    CHECK(resumed.history[0] < first.history[0]);

    RewardModel broken = first.beta_model;
    broken.weights.erase("head_w");
    CHECK_THROWS_AS(train(pairs, graph, one, &broken, &first.alpha_model), DataError);
}

TEST_CASE("model files round trip bit for bit") {
    NetworkGraph graph = path_graph(4);
    auto pairs = build_pairs(random_days(4, 3, 2, 101));
    TrainConfig cfg;
    cfg.hidden_dim = 3;
    cfg.k_blocks = 2;
    cfg.epochs = 3;
    cfg.n_cap = 1;
    cfg.fill = EmptyGroupFill::kZeros;
    auto res = train(pairs, graph, cfg);

    std::string path = "roundtrip_model.txt";
    save_model(path, res.beta_model);
    RewardModel back = load_model(path);
    CHECK(back.variant == res.beta_model.variant);
    CHECK(back.hidden_dim == res.beta_model.hidden_dim);
    CHECK(back.k_blocks == res.beta_model.k_blocks);
    CHECK(back.n_cap == res.beta_model.n_cap);
    CHECK(back.fill == res.beta_model.fill);
    CHECK(back.target_scale == res.beta_model.target_scale);
    CHECK(back.mapper.mean == res.beta_model.mapper.mean);
    CHECK(back.mapper.std == res.beta_model.mapper.std);
    CHECK(back.mapper.proj == res.beta_model.mapper.proj);
    CHECK(back.weights == res.beta_model.weights);

    std::vector<double> actions(4, 0.0);
    auto p1 = predict(res.beta_model, pairs[0].inputs, graph, actions);
    auto p2 = predict(back, pairs[0].inputs, graph, actions);
    CHECK(p1 == p2);
    std::remove(path.c_str());

    CHECK_THROWS_AS(load_model("no_such_model_file.txt"), DataError);
}

TEST_CASE("prediction interfaces validate their inputs") {
    NetworkGraph graph = path_graph(3);
    auto days = random_days(3, 2, 2, 111);
    auto pairs = build_pairs(days);
    TrainConfig cfg;
    cfg.hidden_dim = 3;
    cfg.k_blocks = 2;
    cfg.epochs = 2;
    auto res = train(pairs, graph, cfg);

    CHECK_THROWS_AS(train({}, graph, cfg), DataError);
    TrainConfig wrong_k = cfg;
    wrong_k.k_blocks = 3;
    CHECK_THROWS_AS(train(pairs, graph, wrong_k), DataError);

    Matrix states = states_for_day(res.beta_model, days[0], graph);
    CHECK(states.rows == 3);
    CHECK(states.cols == cfg.hidden_dim);
    CHECK_THROWS_AS(head_eval(res.beta_model, states, 5, 0.0), DataError);
    CHECK_THROWS_AS(predict(res.beta_model, days[0], graph, {0.0}), DataError);

    auto short_day = days[0];
    short_day.pop_back();
    CHECK_THROWS_AS(states_for_day(res.beta_model, short_day, graph), DataError);
}
