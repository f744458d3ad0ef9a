#include "a2opt/actor_critic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "a2opt/optimizer.hpp"
#include "a2opt/rng.hpp"
#include "a2opt/text.hpp"

namespace a2opt {

void ActorConfig::validate() const {
    if (hidden_dim < 1) throw DataError("ActorConfig: hidden_dim must be >= 1");
    if (!(lr > 0)) throw DataError("ActorConfig: lr must be positive");
    if (epochs < 1) throw DataError("ActorConfig: epochs must be >= 1");
    if (lambda3 < 0) throw DataError("ActorConfig: lambda3 must be >= 0");
    if (!(delta_lo < delta_hi)) throw DataError("ActorConfig: empty action range");
}

namespace detail {

std::map<std::string, Matrix> init_actor_weights(Variant v, int hidden_dim, Rng& rng) {
    std::map<std::string, Matrix> w = init_weights(v, hidden_dim, rng);
    // The actor head sees only the state row, not an appended action.
    Matrix head(hidden_dim, 1);
    double amp = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
    for (double& x : head.data) x = rng.uniform(-amp, amp);
    w["head_w"] = head;
    return w;
}

ActorLossGraph build_actor_loss(const RewardModel& critic, const std::vector<DayPair>& buffer,
                                const NetworkGraph& graph, const ActorConfig& cfg,
                                const std::map<std::string, Matrix>& actor_weights) {
    cfg.validate();
    if (buffer.empty()) throw DataError("build_actor_loss: empty training buffer");
    const Matrix& critic_head = critic.weights.at("head_w");

    // The actor reuses the critic's data pipeline, so both sides see the same
    // standardized inputs.
    RewardModel pipeline;
    pipeline.variant = critic.variant;
    pipeline.hidden_dim = cfg.hidden_dim;
    pipeline.k_blocks = critic.k_blocks;
    pipeline.n_cap = critic.n_cap;
    pipeline.fill = critic.fill;
    pipeline.mapper = critic.mapper;

    ActorLossGraph lg;
    lg.lambda3 = cfg.lambda3;
    ParamSet ps = add_params(lg.g, "", actor_weights, false);
    double span = cfg.delta_hi - cfg.delta_lo;

    for (const DayPair& pair : buffer) {
        Matrix critic_states = states_for_day(critic, pair.inputs, graph);
        PreparedPair pp = prepare_day(pipeline, pair.inputs, graph);
        for (size_t i = 0; i < pp.cells.size(); ++i) {
            ad::NodeId s = build_state(lg.g, ps, critic.variant, cfg.hidden_dim, pp.cells[i]);
            ad::NodeId raw = lg.g.matmul(s, ps.ids.at("head_w"));
            ad::NodeId act = lg.g.add(lg.g.scale(lg.g.sigmoid(raw), span),
                                      lg.g.constant(Matrix::scalar(cfg.delta_lo)));

            Matrix row(1, critic.hidden_dim);
            for (int j = 0; j < critic.hidden_dim; ++j) row.at(0, j) = critic_states.at(static_cast<int>(i), j);
            ad::NodeId head_in = lg.g.concat(lg.g.constant(row), act);
            ad::NodeId pred = lg.g.softplus(lg.g.matmul(head_in, lg.g.constant(critic_head)));
            lg.beta_hat.push_back(lg.g.scale(pred, critic.target_scale));
            lg.action.push_back(act);
        }
    }

    if (cfg.lambda3 > 0) {
        ad::NodeId chain = -1;
        for (const auto& [name, id] : ps.ids) {
            const Matrix& v = lg.g.value(id);
            ad::NodeId sq = lg.g.sq_error(id, lg.g.constant(Matrix(v.rows, v.cols)));
            chain = chain < 0 ? sq : lg.g.add(chain, sq);
        }
        lg.l2 = lg.g.scale(chain, cfg.lambda3);
        lg.sink = lg.l2;
    } else {
        lg.sink = lg.beta_hat.back();
    }
    return lg;
}

double actor_loss_value(ActorLossGraph& lg) {
    lg.g.evaluate(lg.sink);
    double sum = 0;
    for (ad::NodeId id : lg.beta_hat) sum += std::sqrt(std::abs(1.0 - lg.g.value(id).at(0, 0)));
    double loss = sum / static_cast<double>(lg.beta_hat.size());
    if (lg.l2 >= 0) loss += lg.g.value(lg.l2).at(0, 0);
    return loss;
}

void actor_loss_backward(ActorLossGraph& lg) {
    lg.g.zero_adjoints();
    double inv_n = 1.0 / static_cast<double>(lg.beta_hat.size());
    for (ad::NodeId id : lg.beta_hat) {
        double x = 1.0 - lg.g.value(id).at(0, 0);
        double seed = 0;
        if (x != 0) {
            double mag = std::min(0.5 / std::sqrt(std::abs(x)), 10.0);
            seed = (x > 0 ? -mag : mag) * inv_n;
        }
        lg.g.accumulate_adjoint(id, Matrix::scalar(seed));
    }
    if (lg.l2 >= 0) lg.g.accumulate_adjoint(lg.l2, Matrix::scalar(1.0));
    lg.g.run_backward();
}

}  // namespace detail

ActorResult train_actor(const RewardModel& critic, const std::vector<DayPair>& buffer, const NetworkGraph& graph,
                        const ActorConfig& cfg) {
    Rng rng(cfg.seed);
    std::map<std::string, Matrix> weights = detail::init_actor_weights(critic.variant, cfg.hidden_dim, rng);
    detail::ActorLossGraph lg = detail::build_actor_loss(critic, buffer, graph, cfg, weights);

    Adam opt({cfg.lr});
    ActorResult res;
    for (int e = 0; e < cfg.epochs; ++e) {
        res.history.push_back(detail::actor_loss_value(lg));
        detail::actor_loss_backward(lg);
        opt.step(lg.g);
    }

    Actor& a = res.actor;
    a.variant = critic.variant;
    a.hidden_dim = cfg.hidden_dim;
    a.k_blocks = critic.k_blocks;
    a.n_cap = critic.n_cap;
    a.fill = critic.fill;
    a.mapper = critic.mapper;
    a.delta_lo = cfg.delta_lo;
    a.delta_hi = cfg.delta_hi;
    for (const auto& [name, mat] : weights) a.weights[name] = lg.g.param_value(name);
    return res;
}

std::vector<double> actor_forward(const Actor& actor, const std::vector<DailySample>& inputs,
                                  const NetworkGraph& graph) {
    RewardModel pipeline;
    pipeline.variant = actor.variant;
    pipeline.hidden_dim = actor.hidden_dim;
    pipeline.k_blocks = actor.k_blocks;
    pipeline.n_cap = actor.n_cap;
    pipeline.fill = actor.fill;
    pipeline.mapper = actor.mapper;
    detail::PreparedPair pp = detail::prepare_day(pipeline, inputs, graph);

    ad::Graph g;
    detail::ParamSet ps = detail::add_params(g, "", actor.weights, true);
    double span = actor.delta_hi - actor.delta_lo;
    std::vector<ad::NodeId> acts;
    for (const detail::PreparedCell& cell : pp.cells) {
        ad::NodeId s = detail::build_state(g, ps, actor.variant, actor.hidden_dim, cell);
        ad::NodeId raw = g.matmul(s, ps.ids.at("head_w"));
        acts.push_back(g.add(g.scale(g.sigmoid(raw), span), g.constant(Matrix::scalar(actor.delta_lo))));
    }
    if (!acts.empty()) g.evaluate(acts.back());
    std::vector<double> out;
    for (ad::NodeId id : acts) out.push_back(g.value(id).at(0, 0));
    return out;
}

ActionPlan actor_plan(const Actor& actor, const std::vector<DailySample>& inputs, const NetworkGraph& graph,
                      const ActionGrid& grid) {
    grid.validate();
    std::vector<double> acts = actor_forward(actor, inputs, graph);
    ActionPlan plan = hold_plan(inputs);
    for (size_t i = 0; i < inputs.size(); ++i) {
        int current = static_cast<int>(inputs[i].a2_dbm);
        long lo = std::max<long>(-grid.max_delta_db, grid.a2_lo_dbm - current);
        long hi = std::min<long>(grid.max_delta_db, grid.a2_hi_dbm - current);
        int a = static_cast<int>(std::clamp(std::lround(acts[i]), lo, hi));
        plan.entries[i].delta_db = a;
        plan.entries[i].a2_dbm = current + a;
    }
    plan.validate(grid);
    return plan;
}

void save_actor(const std::string& path, const Actor& actor) {
    std::ofstream out(path);
    if (!out) throw DataError("save_actor: cannot open " + path);
    out << "a2opt-actor 1\n";
    out << "variant " << variant_name(actor.variant) << '\n';
    out << "hidden_dim " << actor.hidden_dim << '\n';
    out << "k_blocks " << actor.k_blocks << '\n';
    out << "n_cap " << actor.n_cap << '\n';
    out << "fill " << (actor.fill == EmptyGroupFill::kZeros ? "zeros" : "mean") << '\n';
    out << "delta_lo " << to_decimal(actor.delta_lo) << '\n';
    out << "delta_hi " << to_decimal(actor.delta_hi) << '\n';
    auto write_matrix = [&](const std::string& name, const Matrix& m) {
        out << name << ' ' << m.rows << ' ' << m.cols << '\n';
        for (int i = 0; i < m.rows; ++i)
            for (int j = 0; j < m.cols; ++j) out << to_decimal(m.at(i, j)) << (j + 1 < m.cols ? ' ' : '\n');
    };
    write_matrix("feat_mean", actor.mapper.mean);
    write_matrix("feat_std", actor.mapper.std);
    write_matrix("latent_proj", actor.mapper.proj);
    for (const auto& [name, mat] : actor.weights) write_matrix(name, mat);
    if (!out) throw DataError("save_actor: write failed for " + path);
}

Actor load_actor(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("load_actor: cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "a2opt-actor 1") throw DataError("load_actor: bad header in " + path);

    Actor a;
    auto field = [&](const std::string& key) {
        if (!std::getline(in, line)) throw DataError("load_actor: truncated at " + key);
        if (line.rfind(key + ' ', 0) != 0) throw DataError("load_actor: expected " + key);
        return line.substr(key.size() + 1);
    };
    a.variant = parse_variant(field("variant"));
    a.hidden_dim = static_cast<int>(parse_long(field("hidden_dim")));
    a.k_blocks = static_cast<int>(parse_long(field("k_blocks")));
    a.n_cap = static_cast<int>(parse_long(field("n_cap")));
    std::string fill = field("fill");
    if (fill != "zeros" && fill != "mean") throw DataError("load_actor: bad fill mode");
    a.fill = fill == "zeros" ? EmptyGroupFill::kZeros : EmptyGroupFill::kMeanOfOthers;
    a.delta_lo = parse_double(field("delta_lo"));
    a.delta_hi = parse_double(field("delta_hi"));

    auto read_matrix = [&](std::string* name_out) {
        if (!std::getline(in, line)) return false;
        std::vector<std::string> head = split(line, ' ');
        if (head.size() != 3) throw DataError("load_actor: bad matrix header '" + line + "'");
        int rows = static_cast<int>(parse_long(head[1]));
        int cols = static_cast<int>(parse_long(head[2]));
        Matrix m(rows, cols);
        for (int i = 0; i < rows; ++i) {
            if (!std::getline(in, line)) throw DataError("load_actor: truncated matrix " + head[0]);
            std::vector<std::string> tok = split(line, ' ');
            if (static_cast<int>(tok.size()) != cols) throw DataError("load_actor: bad matrix row in " + head[0]);
            for (int j = 0; j < cols; ++j) m.at(i, j) = parse_double(tok[j]);
        }
        *name_out = head[0];
        if (*name_out == "feat_mean") a.mapper.mean = m;
        else if (*name_out == "feat_std") a.mapper.std = m;
        else if (*name_out == "latent_proj") a.mapper.proj = m;
        else a.weights[*name_out] = m;
        return true;
    };
    std::string name;
    int matrices = 0;
    while (read_matrix(&name)) ++matrices;
    if (matrices < 4) throw DataError("load_actor: missing matrices in " + path);
    for (const std::string& pname : detail::param_names(a.variant))
        if (!a.weights.count(pname)) throw DataError("load_actor: missing parameter '" + pname + "'");
    return a;
}

}  // namespace a2opt
