#include "a2opt/reward_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "a2opt/optimizer.hpp"
#include "a2opt/text.hpp"

namespace a2opt {

namespace {

double stable_softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

Matrix standardize_row(const Matrix& row, const LatentMapper& mapper) {
    Matrix out(1, row.cols);
    for (int j = 0; j < row.cols; ++j)
        out.at(0, j) = (row.at(0, j) - mapper.mean.at(0, j)) / mapper.std.at(0, j);
    return out;
}

void check_day(const std::vector<DailySample>& inputs, const NetworkGraph& graph, int k_blocks,
               const char* ctx) {
    if (inputs.size() != graph.cell_count())
        throw DataError(std::string(ctx) + ": expected " + std::to_string(graph.cell_count()) + " cells, got " +
                        std::to_string(inputs.size()));
    for (size_t i = 0; i < inputs.size(); ++i) {
        if (inputs[i].cell_id != graph.cell_ids[i])
            throw DataError(std::string(ctx) + ": cell order mismatch at index " + std::to_string(i));
        if (inputs[i].mean_features.cols != kFeatureDim || inputs[i].mean_features.rows != 1)
            throw DataError(std::string(ctx) + ": bad feature row for cell " + std::to_string(inputs[i].cell_id));
        if (inputs[i].temporal.rows != k_blocks || inputs[i].temporal.cols != kFeatureDim)
            throw DataError(std::string(ctx) + ": temporal block of cell " + std::to_string(inputs[i].cell_id) +
                            " is " + shape_str(inputs[i].temporal) + ", expected " +
                            shape_str(k_blocks, kFeatureDim));
    }
}

// Pooled inputs for one day: standardized means, neighbor mean, group means.
void fill_day_cells(std::vector<detail::PreparedCell>& cells, const std::vector<DailySample>& inputs,
                    const NetworkGraph& graph, const LatentMapper& mapper, int n_cap, EmptyGroupFill fill) {
    size_t n = inputs.size();
    Matrix raw(static_cast<int>(n), kFeatureDim);
    for (size_t i = 0; i < n; ++i)
        for (int j = 0; j < kFeatureDim; ++j) raw.at(static_cast<int>(i), j) = inputs[i].mean_features.at(0, j);
    Matrix coords = mapper.project_rows(raw);

    std::vector<Matrix> xs(n);
    for (size_t i = 0; i < n; ++i) xs[i] = standardize_row(inputs[i].mean_features, mapper);

    for (size_t v = 0; v < n; ++v) {
        detail::PreparedCell& c = cells[v];
        c.beta = inputs[v].beta;
        c.xbar = xs[v];
        c.p_rows.clear();
        for (int r = 0; r < inputs[v].temporal.rows; ++r) {
            Matrix row(1, kFeatureDim);
            for (int j = 0; j < kFeatureDim; ++j) row.at(0, j) = inputs[v].temporal.at(r, j);
            c.p_rows.push_back(standardize_row(row, mapper));
        }

        c.gcn_pool = Matrix(1, kFeatureDim);
        const std::vector<int>& gn = graph.neighbors(static_cast<int>(v));
        if (!gn.empty()) {
            for (int u : gn)
                for (int j = 0; j < kFeatureDim; ++j) c.gcn_pool.at(0, j) += xs[u].at(0, j);
            for (int j = 0; j < kFeatureDim; ++j) c.gcn_pool.at(0, j) /= static_cast<double>(gn.size());
        }

        AugmentedNeighborhood aug = augment(graph, coords, static_cast<int>(v), n_cap);
        std::array<std::vector<int>, 4> groups = build_groups(coords, static_cast<int>(v), aug.all());
        std::vector<int> filled;
        for (int gi = 0; gi < 4; ++gi) {
            c.pooled[gi] = Matrix(1, kFeatureDim);
            if (groups[gi].empty()) continue;
            for (int u : groups[gi])
                for (int j = 0; j < kFeatureDim; ++j) c.pooled[gi].at(0, j) += xs[u].at(0, j);
            for (int j = 0; j < kFeatureDim; ++j) c.pooled[gi].at(0, j) /= static_cast<double>(groups[gi].size());
            filled.push_back(gi);
        }
        if (fill == EmptyGroupFill::kMeanOfOthers && !filled.empty() && filled.size() < 4) {
            Matrix avg(1, kFeatureDim);
            for (int gi : filled)
                for (int j = 0; j < kFeatureDim; ++j) avg.at(0, j) += c.pooled[gi].at(0, j);
            for (int j = 0; j < kFeatureDim; ++j) avg.at(0, j) /= static_cast<double>(filled.size());
            for (int gi = 0; gi < 4; ++gi)
                if (groups[gi].empty()) c.pooled[gi] = avg;
        }
    }
}

}  // namespace

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::kMlp: return "mlp";
        case Variant::kGcn: return "gcn";
        case Variant::kAgGcn: return "ag-gcn";
        case Variant::kTagGcn: return "tag-gcn";
    }
    throw DataError("variant_name: unknown variant");
}

Variant parse_variant(const std::string& name) {
    if (name == "mlp") return Variant::kMlp;
    if (name == "gcn") return Variant::kGcn;
    if (name == "ag-gcn") return Variant::kAgGcn;
    if (name == "tag-gcn") return Variant::kTagGcn;
    throw DataError("parse_variant: unknown variant '" + name + "'");
}

void TrainConfig::validate() const {
    if (hidden_dim < 1) throw DataError("TrainConfig: hidden_dim must be >= 1");
    if (k_blocks < 1 || k_blocks > kHoursPerDay) throw DataError("TrainConfig: k_blocks must be in [1, 24]");
    if (n_cap < 0) throw DataError("TrainConfig: n_cap must be >= 0");
    if (!(lr > 0)) throw DataError("TrainConfig: lr must be positive");
    if (epochs < 1) throw DataError("TrainConfig: epochs must be >= 1");
    if (lambda_beta < 0 || lambda_alpha < 0) throw DataError("TrainConfig: lambda must be >= 0");
}

std::vector<DayPair> build_pairs(const std::vector<std::vector<DailySample>>& days) {
    if (days.size() < 2) throw DataError("build_pairs: need at least 2 days");
    for (size_t d = 1; d < days.size(); ++d) {
        if (days[d].size() != days[0].size()) throw DataError("build_pairs: day cell counts differ");
        for (size_t i = 0; i < days[d].size(); ++i)
            if (days[d][i].cell_id != days[0][i].cell_id)
                throw DataError("build_pairs: cell order differs between days");
    }
    std::vector<DayPair> pairs;
    for (size_t d = 0; d + 1 < days.size(); ++d) {
        DayPair p;
        p.inputs = days[d];
        for (size_t i = 0; i < days[d].size(); ++i) {
            double a = days[d + 1][i].a2_dbm - days[d][i].a2_dbm;
            p.inputs[i].delta_action = a;
            p.action.push_back(a);
            p.target_beta.push_back(days[d + 1][i].beta);
            p.target_alpha.push_back(days[d + 1][i].alpha);
        }
        pairs.push_back(std::move(p));
    }
    return pairs;
}

namespace detail {

Prepared prepare_buffer(const std::vector<DayPair>& buffer, const NetworkGraph& graph, const TrainConfig& cfg) {
    cfg.validate();
    if (buffer.empty()) throw DataError("prepare_buffer: empty training buffer");
    size_t n = graph.cell_count();
    for (const DayPair& p : buffer) {
        check_day(p.inputs, graph, cfg.k_blocks, "prepare_buffer");
        if (p.action.size() != n || p.target_beta.size() != n || p.target_alpha.size() != n)
            throw DataError("prepare_buffer: pair target sizes disagree with the graph");
    }

    Matrix stacked(static_cast<int>(buffer.size() * n), kFeatureDim);
    int r = 0;
    for (const DayPair& p : buffer)
        for (const DailySample& s : p.inputs) {
            for (int j = 0; j < kFeatureDim; ++j) stacked.at(r, j) = s.mean_features.at(0, j);
            ++r;
        }

    Prepared prep;
    prep.mapper = fit_latent_mapper(stacked);

    double sb = 0, sa = 0;
    for (const DayPair& p : buffer)
        for (size_t i = 0; i < n; ++i) {
            sb += p.target_beta[i];
            sa += p.target_alpha[i];
        }
    double count = static_cast<double>(buffer.size() * n);
    prep.beta_scale = sb / count > 1e-12 ? sb / count : 1.0;
    prep.alpha_scale = sa / count > 1e-12 ? sa / count : 1.0;

    for (const DayPair& p : buffer) {
        PreparedPair pp;
        pp.cells.resize(n);
        fill_day_cells(pp.cells, p.inputs, graph, prep.mapper, cfg.n_cap, cfg.fill);
        for (size_t i = 0; i < n; ++i) {
            pp.cells[i].action = p.action[i];
            pp.cells[i].target_beta = p.target_beta[i] / prep.beta_scale;
            pp.cells[i].target_alpha = p.target_alpha[i] / prep.alpha_scale;
        }
        prep.pairs.push_back(std::move(pp));
    }
    return prep;
}

PreparedPair prepare_day(const RewardModel& m, const std::vector<DailySample>& inputs, const NetworkGraph& graph) {
    check_day(inputs, graph, m.k_blocks, "prepare_day");
    PreparedPair pp;
    pp.cells.resize(inputs.size());
    fill_day_cells(pp.cells, inputs, graph, m.mapper, m.n_cap, m.fill);
    return pp;
}

std::vector<std::string> param_names(Variant v) {
    switch (v) {
        case Variant::kMlp: return {"state_w", "head_w"};
        case Variant::kGcn: return {"gcn_w", "state_w", "head_w"};
        case Variant::kAgGcn: return {"group_w1", "group_w2", "group_w3", "group_w4", "state_w", "head_w"};
        case Variant::kTagGcn:
            return {"group_w1", "group_w2", "group_w3", "group_w4",
                    "rnn_win",  "rnn_wh",   "rnn_b",    "state_w",  "head_w"};
    }
    throw DataError("param_names: unknown variant");
}

namespace {

int state_input_width(Variant v, int dp) {
    switch (v) {
        case Variant::kMlp: return 1 + kFeatureDim;
        case Variant::kGcn: return 1 + kFeatureDim + dp;
        case Variant::kAgGcn: return 1 + kFeatureDim + 4 * dp;
        case Variant::kTagGcn: return 1 + 5 * dp;
    }
    throw DataError("state_input_width: unknown variant");
}

std::pair<int, int> param_shape(const std::string& name, Variant v, int dp) {
    if (name == "gcn_w" || name == "rnn_win" || name.rfind("group_w", 0) == 0) return {kFeatureDim, dp};
    if (name == "rnn_wh") return {dp, dp};
    if (name == "rnn_b") return {1, dp};
    if (name == "state_w") return {state_input_width(v, dp), dp};
    if (name == "head_w") return {dp + 1, 1};
    throw DataError("param_shape: unknown parameter '" + name + "'");
}

}  // namespace

std::map<std::string, Matrix> init_weights(Variant v, int hidden_dim, Rng& rng) {
    std::map<std::string, Matrix> w;
    for (const std::string& name : param_names(v)) {
        auto [rows, cols] = param_shape(name, v, hidden_dim);
        Matrix m(rows, cols);
        if (name != "rnn_b") {
            double r = 1.0 / std::sqrt(static_cast<double>(rows));
            for (double& x : m.data) x = rng.uniform(-r, r);
        }
        w.emplace(name, std::move(m));
    }
    return w;
}

ParamSet add_params(ad::Graph& g, const std::string& prefix, const std::map<std::string, Matrix>& weights,
                    bool frozen) {
    ParamSet ps;
    for (const auto& [name, value] : weights)
        ps.ids[name] = frozen ? g.constant(value) : g.param(prefix + name, value);
    return ps;
}

ad::NodeId build_state(ad::Graph& g, const ParamSet& ps, Variant v, int hidden_dim, const PreparedCell& cell) {
    ad::NodeId beta_in = g.constant(Matrix::scalar(cell.beta));
    ad::NodeId in = -1;
    switch (v) {
        case Variant::kMlp: {
            in = g.concat(beta_in, g.constant(cell.xbar));
            break;
        }
        case Variant::kGcn: {
            ad::NodeId z = g.tanh(g.matmul(g.constant(cell.gcn_pool), ps.ids.at("gcn_w")));
            in = g.concat(g.concat(beta_in, g.constant(cell.xbar)), z);
            break;
        }
        case Variant::kAgGcn:
        case Variant::kTagGcn: {
            ad::NodeId h = -1;
            for (int gi = 0; gi < 4; ++gi) {
                ad::NodeId z = g.tanh(
                    g.matmul(g.constant(cell.pooled[gi]), ps.ids.at("group_w" + std::to_string(gi + 1))));
                h = gi == 0 ? z : g.concat(h, z);
            }
            if (v == Variant::kAgGcn) {
                in = g.concat(g.concat(beta_in, g.constant(cell.xbar)), h);
            } else {
                ad::NodeId hk = g.constant(Matrix(1, hidden_dim));
                for (const Matrix& row : cell.p_rows) {
                    ad::NodeId pre = g.add(g.add(g.matmul(g.constant(row), ps.ids.at("rnn_win")),
                                                 g.matmul(hk, ps.ids.at("rnn_wh"))),
                                           ps.ids.at("rnn_b"));
                    hk = g.tanh(pre);
                }
                in = g.concat(g.concat(beta_in, hk), h);
            }
            break;
        }
        default:
            throw DataError("build_state: unknown variant");
    }
    return g.tanh(g.matmul(in, ps.ids.at("state_w")));
}

BuiltCell build_cell(ad::Graph& g, const ParamSet& ps, Variant v, int hidden_dim, const PreparedCell& cell,
                     ad::NodeId action_node) {
    BuiltCell out;
    out.state = build_state(g, ps, v, hidden_dim, cell);
    ad::NodeId a = action_node >= 0 ? action_node : g.constant(Matrix::scalar(cell.action));
    out.pred_norm = g.softplus(g.matmul(g.concat(out.state, a), ps.ids.at("head_w")));
    return out;
}

namespace {

ad::NodeId l2_penalty(ad::Graph& g, const ParamSet& ps, double lambda) {
    ad::NodeId chain = -1;
    for (const auto& [name, id] : ps.ids) {
        const Matrix& v = g.value(id);
        ad::NodeId sq = g.sq_error(id, g.constant(Matrix(v.rows, v.cols)));
        chain = chain < 0 ? sq : g.add(chain, sq);
    }
    return g.scale(chain, lambda);
}

}  // namespace

LossGraph build_loss_graph(const Prepared& prep, const TrainConfig& cfg,
                           const std::map<std::string, Matrix>& beta_weights,
                           const std::map<std::string, Matrix>& alpha_weights) {
    LossGraph lg;
    ParamSet ps_b = add_params(lg.g, "b.", beta_weights, false);
    ParamSet ps_a = add_params(lg.g, "a.", alpha_weights, false);

    ad::NodeId err_b = -1, err_a = -1;
    size_t count = 0;
    for (const PreparedPair& pp : prep.pairs) {
        for (const PreparedCell& cell : pp.cells) {
            BuiltCell cb = build_cell(lg.g, ps_b, cfg.variant, cfg.hidden_dim, cell);
            ad::NodeId eb = lg.g.sq_error(cb.pred_norm, lg.g.constant(Matrix::scalar(cell.target_beta)));
            err_b = err_b < 0 ? eb : lg.g.add(err_b, eb);

            BuiltCell ca = build_cell(lg.g, ps_a, cfg.variant, cfg.hidden_dim, cell);
            ad::NodeId ea = lg.g.sq_error(ca.pred_norm, lg.g.constant(Matrix::scalar(cell.target_alpha)));
            err_a = err_a < 0 ? ea : lg.g.add(err_a, ea);
            ++count;
        }
    }

    ad::NodeId mse_b = lg.g.scale(err_b, 1.0 / static_cast<double>(count));
    ad::NodeId mse_a = lg.g.scale(err_a, 1.0 / static_cast<double>(count));
    lg.loss_beta = cfg.lambda_beta > 0 ? lg.g.add(mse_b, l2_penalty(lg.g, ps_b, cfg.lambda_beta)) : mse_b;
    lg.loss_alpha = cfg.lambda_alpha > 0 ? lg.g.add(mse_a, l2_penalty(lg.g, ps_a, cfg.lambda_alpha)) : mse_a;
    lg.total = lg.g.add(lg.loss_beta, lg.loss_alpha);
    return lg;
}

}  // namespace detail

TrainResult train(const std::vector<DayPair>& buffer, const NetworkGraph& graph, const TrainConfig& cfg,
                  const RewardModel* warm_beta, const RewardModel* warm_alpha) {
    detail::Prepared prep = detail::prepare_buffer(buffer, graph, cfg);

    Rng rng(cfg.seed);
    std::map<std::string, Matrix> wb =
        warm_beta ? warm_beta->weights : detail::init_weights(cfg.variant, cfg.hidden_dim, rng);
    std::map<std::string, Matrix> wa =
        warm_alpha ? warm_alpha->weights : detail::init_weights(cfg.variant, cfg.hidden_dim, rng);
    for (const std::string& name : detail::param_names(cfg.variant)) {
        if (!wb.count(name) || !wa.count(name))
            throw DataError("train: warm-start weights missing parameter '" + name + "'");
    }

    detail::LossGraph lg = detail::build_loss_graph(prep, cfg, wb, wa);
    Adam opt({cfg.lr});
    TrainResult res;
    for (int e = 0; e < cfg.epochs; ++e) {
        lg.g.backward(lg.total);
        res.history.push_back(lg.g.value(lg.total).at(0, 0));
        opt.step(lg.g);
    }

    auto finish = [&](RewardModel& m, const std::string& prefix, double scale) {
        m.variant = cfg.variant;
        m.hidden_dim = cfg.hidden_dim;
        m.k_blocks = cfg.k_blocks;
        m.n_cap = cfg.n_cap;
        m.fill = cfg.fill;
        m.mapper = prep.mapper;
        m.target_scale = scale;
        for (const std::string& name : detail::param_names(cfg.variant))
            m.weights[name] = lg.g.param_value(prefix + name);
    };
    finish(res.beta_model, "b.", prep.beta_scale);
    finish(res.alpha_model, "a.", prep.alpha_scale);
    return res;
}

Matrix states_for_day(const RewardModel& m, const std::vector<DailySample>& inputs, const NetworkGraph& graph) {
    detail::PreparedPair pp = detail::prepare_day(m, inputs, graph);
    ad::Graph g;
    detail::ParamSet ps = detail::add_params(g, "", m.weights, true);
    std::vector<ad::NodeId> states;
    for (const detail::PreparedCell& cell : pp.cells)
        states.push_back(detail::build_state(g, ps, m.variant, m.hidden_dim, cell));
    if (!states.empty()) g.evaluate(states.back());
    Matrix out(static_cast<int>(states.size()), m.hidden_dim);
    for (size_t i = 0; i < states.size(); ++i) {
        const Matrix& s = g.value(states[i]);
        for (int j = 0; j < m.hidden_dim; ++j) out.at(static_cast<int>(i), j) = s.at(0, j);
    }
    return out;
}

double head_eval(const RewardModel& m, const Matrix& states, int cell_index, double action) {
    const Matrix& w = m.weights.at("head_w");
    if (states.cols != m.hidden_dim || w.rows != m.hidden_dim + 1)
        throw DataError("head_eval: state width disagrees with the head");
    if (cell_index < 0 || cell_index >= states.rows) throw DataError("head_eval: cell index out of range");
    double acc = action * w.at(m.hidden_dim, 0);
    for (int j = 0; j < m.hidden_dim; ++j) acc += states.at(cell_index, j) * w.at(j, 0);
    return stable_softplus(acc) * m.target_scale;
}

std::vector<double> predict(const RewardModel& m, const std::vector<DailySample>& inputs, const NetworkGraph& graph,
                            const std::vector<double>& actions) {
    if (actions.size() != inputs.size()) throw DataError("predict: action count disagrees with the day");
    Matrix s = states_for_day(m, inputs, graph);
    std::vector<double> out;
    for (size_t i = 0; i < inputs.size(); ++i)
        out.push_back(head_eval(m, s, static_cast<int>(i), actions[i]));
    return out;
}

std::pair<double, double> evaluate_mse(const RewardModel& beta_model, const RewardModel& alpha_model,
                                       const DayPair& test_pair, const NetworkGraph& graph) {
    size_t n = graph.cell_count();
    if (test_pair.target_beta.size() != n || test_pair.target_alpha.size() != n)
        throw DataError("evaluate_mse: target sizes disagree with the graph");
    std::vector<double> pb = predict(beta_model, test_pair.inputs, graph, test_pair.action);
    std::vector<double> pa = predict(alpha_model, test_pair.inputs, graph, test_pair.action);
    double mb = 0, ma = 0;
    for (size_t i = 0; i < n; ++i) {
        double db = pb[i] - test_pair.target_beta[i];
        double da = pa[i] - test_pair.target_alpha[i];
        mb += db * db;
        ma += da * da;
    }
    return {mb / static_cast<double>(n), ma / static_cast<double>(n)};
}

namespace {

void write_matrix(std::ofstream& out, const std::string& name, const Matrix& m) {
    out << "matrix " << name << ' ' << m.rows << ' ' << m.cols << '\n';
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < m.cols; ++j) {
            if (j) out << ' ';
            out << to_decimal(m.at(i, j));
        }
        out << '\n';
    }
}

Matrix read_matrix(std::ifstream& in, const std::string& want_name) {
    std::string tag, name;
    int rows = 0, cols = 0;
    if (!(in >> tag >> name >> rows >> cols) || tag != "matrix" || name != want_name)
        throw DataError("load_model: expected matrix '" + want_name + "'");
    if (rows < 1 || cols < 1) throw DataError("load_model: bad shape for '" + want_name + "'");
    Matrix m(rows, cols);
    std::string tok;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            if (!(in >> tok)) throw DataError("load_model: truncated matrix '" + want_name + "'");
            m.at(i, j) = parse_double(tok);
        }
    return m;
}

}  // namespace

void save_model(const std::string& path, const RewardModel& m) {
    std::ofstream out(path);
    if (!out) throw DataError("save_model: cannot write " + path);
    out << "a2opt-model 1\n";
    out << "variant " << variant_name(m.variant) << '\n';
    out << "hidden_dim " << m.hidden_dim << '\n';
    out << "k_blocks " << m.k_blocks << '\n';
    out << "n_cap " << m.n_cap << '\n';
    out << "fill " << (m.fill == EmptyGroupFill::kMeanOfOthers ? "mean" : "zeros") << '\n';
    out << "target_scale " << to_decimal(m.target_scale) << '\n';
    write_matrix(out, "feat_mean", m.mapper.mean);
    write_matrix(out, "feat_std", m.mapper.std);
    write_matrix(out, "latent_proj", m.mapper.proj);
    for (const std::string& name : detail::param_names(m.variant)) write_matrix(out, name, m.weights.at(name));
    if (!out) throw DataError("save_model: write failed for " + path);
}

RewardModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("load_model: cannot read " + path);
    std::string tag, value;
    int version = 0;
    if (!(in >> tag >> version) || tag != "a2opt-model" || version != 1)
        throw DataError("load_model: " + path + " is not a model file");
    RewardModel m;
    if (!(in >> tag >> value) || tag != "variant") throw DataError("load_model: missing variant");
    m.variant = parse_variant(value);
    if (!(in >> tag >> m.hidden_dim) || tag != "hidden_dim") throw DataError("load_model: missing hidden_dim");
    if (!(in >> tag >> m.k_blocks) || tag != "k_blocks") throw DataError("load_model: missing k_blocks");
    if (!(in >> tag >> m.n_cap) || tag != "n_cap") throw DataError("load_model: missing n_cap");
    if (!(in >> tag >> value) || tag != "fill" || (value != "mean" && value != "zeros"))
        throw DataError("load_model: missing fill mode");
    m.fill = value == "mean" ? EmptyGroupFill::kMeanOfOthers : EmptyGroupFill::kZeros;
    if (!(in >> tag >> value) || tag != "target_scale") throw DataError("load_model: missing target_scale");
    m.target_scale = parse_double(value);
    m.mapper.mean = read_matrix(in, "feat_mean");
    m.mapper.std = read_matrix(in, "feat_std");
    m.mapper.proj = read_matrix(in, "latent_proj");
    for (const std::string& name : detail::param_names(m.variant)) m.weights[name] = read_matrix(in, name);
    return m;
}

}  // namespace a2opt
