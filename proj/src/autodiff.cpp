#include "a2opt/autodiff.hpp"

#include <cmath>
#include <utility>

namespace a2opt::ad {

namespace {

double stable_softplus(double x) {
    if (x > 0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

double stable_sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

// C = A * B
void matmul_into(Matrix& c, const Matrix& a, const Matrix& b) {
    c.fill(0.0);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            double aik = a.at(i, k);
            if (aik == 0.0) continue;
            const double* brow = &b.data[static_cast<size_t>(k) * b.cols];
            double* crow = &c.data[static_cast<size_t>(i) * c.cols];
            for (int j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
        }
}

// dA += dC * B^T
void acc_matmul_bt(Matrix& da, const Matrix& dc, const Matrix& b) {
    for (int i = 0; i < da.rows; ++i)
        for (int k = 0; k < da.cols; ++k) {
            const double* dcrow = &dc.data[static_cast<size_t>(i) * dc.cols];
            const double* brow = &b.data[static_cast<size_t>(k) * b.cols];
            double s = 0.0;
            for (int j = 0; j < b.cols; ++j) s += dcrow[j] * brow[j];
            da.at(i, k) += s;
        }
}

// dB += A^T * dC
void acc_at_matmul(Matrix& db, const Matrix& a, const Matrix& dc) {
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            double aik = a.at(i, k);
            if (aik == 0.0) continue;
            const double* dcrow = &dc.data[static_cast<size_t>(i) * dc.cols];
            double* dbrow = &db.data[static_cast<size_t>(k) * db.cols];
            for (int j = 0; j < dc.cols; ++j) dbrow[j] += aik * dcrow[j];
        }
}

}  // namespace

NodeId Graph::push(Node n) {
    n.adjoint = Matrix(n.value.rows, n.value.cols);
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size()) - 1;
}

const Graph::Node& Graph::checked(NodeId id, const char* ctx) const {
    if (id < 0 || id >= static_cast<NodeId>(nodes_.size()))
        throw ShapeError(std::string(ctx) + ": node id " + std::to_string(id) + " out of range");
    return nodes_[id];
}

NodeId Graph::constant(Matrix value) {
    Node n;
    n.op = Op::Const;
    n.value = std::move(value);
    return push(std::move(n));
}

NodeId Graph::param(const std::string& name, Matrix init) {
    if (name.empty()) throw ShapeError("param: name must be non-empty");
    for (NodeId id : param_ids_)
        if (nodes_[id].name == name) throw ShapeError("param: duplicate name '" + name + "'");
    Node n;
    n.op = Op::Param;
    n.value = std::move(init);
    n.name = name;
    NodeId id = push(std::move(n));
    param_ids_.push_back(id);
    return id;
}

NodeId Graph::matmul(NodeId a, NodeId b) {
    const Node& na = checked(a, "matmul");
    const Node& nb = checked(b, "matmul");
    if (na.value.cols != nb.value.rows)
        throw ShapeError("matmul: inner dimensions disagree, " + shape_str(na.value) + " vs " + shape_str(nb.value));
    Node n;
    n.op = Op::MatMul;
    n.a = a;
    n.b = b;
    n.value = Matrix(na.value.rows, nb.value.cols);
    return push(std::move(n));
}

NodeId Graph::add(NodeId a, NodeId b) {
    const Node& na = checked(a, "add");
    const Node& nb = checked(b, "add");
    if (!na.value.same_shape(nb.value))
        throw ShapeError("add: shapes disagree, " + shape_str(na.value) + " vs " + shape_str(nb.value));
    Node n;
    n.op = Op::Add;
    n.a = a;
    n.b = b;
    n.value = Matrix(na.value.rows, na.value.cols);
    return push(std::move(n));
}

NodeId Graph::mul(NodeId a, NodeId b) {
    const Node& na = checked(a, "mul");
    const Node& nb = checked(b, "mul");
    if (!na.value.same_shape(nb.value))
        throw ShapeError("mul: shapes disagree, " + shape_str(na.value) + " vs " + shape_str(nb.value));
    Node n;
    n.op = Op::Mul;
    n.a = a;
    n.b = b;
    n.value = Matrix(na.value.rows, na.value.cols);
    return push(std::move(n));
}

NodeId Graph::tanh(NodeId a) {
    const Node& na = checked(a, "tanh");
    Node n;
    n.op = Op::Tanh;
    n.a = a;
    n.value = Matrix(na.value.rows, na.value.cols);
    return push(std::move(n));
}

NodeId Graph::sigmoid(NodeId a) {
    const Node& na = checked(a, "sigmoid");
    Node n;
    n.op = Op::Sigmoid;
    n.a = a;
    n.value = Matrix(na.value.rows, na.value.cols);
    return push(std::move(n));
}

NodeId Graph::softplus(NodeId a) {
    const Node& na = checked(a, "softplus");
    Node n;
    n.op = Op::Softplus;
    n.a = a;
    n.value = Matrix(na.value.rows, na.value.cols);
    return push(std::move(n));
}

NodeId Graph::concat(NodeId a, NodeId b) {
    const Node& na = checked(a, "concat");
    const Node& nb = checked(b, "concat");
    if (na.value.rows != nb.value.rows)
        throw ShapeError("concat: row counts disagree, " + shape_str(na.value) + " vs " + shape_str(nb.value));
    Node n;
    n.op = Op::Concat;
    n.a = a;
    n.b = b;
    n.value = Matrix(na.value.rows, na.value.cols + nb.value.cols);
    return push(std::move(n));
}

NodeId Graph::mean_rows(NodeId a, std::vector<int> rows) {
    const Node& na = checked(a, "mean_rows");
    if (rows.empty()) throw ShapeError("mean_rows: row set must be non-empty");
    for (int r : rows)
        if (r < 0 || r >= na.value.rows)
            throw ShapeError("mean_rows: row " + std::to_string(r) + " outside " + shape_str(na.value));
    Node n;
    n.op = Op::MeanRows;
    n.a = a;
    n.row_set = std::move(rows);
    n.value = Matrix(1, na.value.cols);
    return push(std::move(n));
}

NodeId Graph::sq_error(NodeId a, NodeId b) {
    const Node& na = checked(a, "sq_error");
    const Node& nb = checked(b, "sq_error");
    if (!na.value.same_shape(nb.value))
        throw ShapeError("sq_error: shapes disagree, " + shape_str(na.value) + " vs " + shape_str(nb.value));
    Node n;
    n.op = Op::SqError;
    n.a = a;
    n.b = b;
    n.value = Matrix(1, 1);
    return push(std::move(n));
}

NodeId Graph::scale(NodeId a, double s) {
    const Node& na = checked(a, "scale");
    if (!std::isfinite(s)) throw ShapeError("scale: factor must be finite");
    Node n;
    n.op = Op::Scale;
    n.a = a;
    n.factor = s;
    n.value = Matrix(na.value.rows, na.value.cols);
    return push(std::move(n));
}

void Graph::compute(Node& n) {
    switch (n.op) {
        case Op::Const:
        case Op::Param:
            break;
        case Op::MatMul:
            matmul_into(n.value, nodes_[n.a].value, nodes_[n.b].value);
            break;
        case Op::Add: {
            const Matrix& x = nodes_[n.a].value;
            const Matrix& y = nodes_[n.b].value;
            for (size_t i = 0; i < n.value.size(); ++i) n.value.data[i] = x.data[i] + y.data[i];
            break;
        }
        case Op::Mul: {
            const Matrix& x = nodes_[n.a].value;
            const Matrix& y = nodes_[n.b].value;
            for (size_t i = 0; i < n.value.size(); ++i) n.value.data[i] = x.data[i] * y.data[i];
            break;
        }
        case Op::Tanh: {
            const Matrix& x = nodes_[n.a].value;
            for (size_t i = 0; i < n.value.size(); ++i) n.value.data[i] = std::tanh(x.data[i]);
            break;
        }
        case Op::Sigmoid: {
            const Matrix& x = nodes_[n.a].value;
            for (size_t i = 0; i < n.value.size(); ++i) n.value.data[i] = stable_sigmoid(x.data[i]);
            break;
        }
        case Op::Softplus: {
            const Matrix& x = nodes_[n.a].value;
            for (size_t i = 0; i < n.value.size(); ++i) n.value.data[i] = stable_softplus(x.data[i]);
            break;
        }
        case Op::Concat: {
            const Matrix& x = nodes_[n.a].value;
            const Matrix& y = nodes_[n.b].value;
            for (int r = 0; r < n.value.rows; ++r) {
                for (int c = 0; c < x.cols; ++c) n.value.at(r, c) = x.at(r, c);
                for (int c = 0; c < y.cols; ++c) n.value.at(r, x.cols + c) = y.at(r, c);
            }
            break;
        }
        case Op::MeanRows: {
            const Matrix& x = nodes_[n.a].value;
            n.value.fill(0.0);
            for (int r : n.row_set)
                for (int c = 0; c < x.cols; ++c) n.value.at(0, c) += x.at(r, c);
            double inv = 1.0 / static_cast<double>(n.row_set.size());
            for (double& v : n.value.data) v *= inv;
            break;
        }
        case Op::SqError: {
            const Matrix& x = nodes_[n.a].value;
            const Matrix& y = nodes_[n.b].value;
            double s = 0.0;
            for (size_t i = 0; i < x.size(); ++i) {
                double d = x.data[i] - y.data[i];
                s += d * d;
            }
            n.value.data[0] = s;
            break;
        }
        case Op::Scale: {
            const Matrix& x = nodes_[n.a].value;
            for (size_t i = 0; i < n.value.size(); ++i) n.value.data[i] = n.factor * x.data[i];
            break;
        }
    }
}

const Matrix& Graph::evaluate(NodeId root) {
    checked(root, "evaluate");
    for (NodeId id = 0; id <= root; ++id) compute(nodes_[id]);
    return nodes_[root].value;
}

void Graph::touch(NodeId id) { nodes_[id].seeded = true; }

void Graph::propagate(Node& n) {
    const Matrix& g = n.adjoint;
    switch (n.op) {
        case Op::Const:
        case Op::Param:
            break;
        case Op::MatMul:
            acc_matmul_bt(nodes_[n.a].adjoint, g, nodes_[n.b].value);
            acc_at_matmul(nodes_[n.b].adjoint, nodes_[n.a].value, g);
            touch(n.a);
            touch(n.b);
            break;
        case Op::Add: {
            Matrix& da = nodes_[n.a].adjoint;
            Matrix& db = nodes_[n.b].adjoint;
            for (size_t i = 0; i < g.size(); ++i) {
                da.data[i] += g.data[i];
                db.data[i] += g.data[i];
            }
            touch(n.a);
            touch(n.b);
            break;
        }
        case Op::Mul: {
            Matrix& da = nodes_[n.a].adjoint;
            Matrix& db = nodes_[n.b].adjoint;
            const Matrix& x = nodes_[n.a].value;
            const Matrix& y = nodes_[n.b].value;
            for (size_t i = 0; i < g.size(); ++i) {
                da.data[i] += g.data[i] * y.data[i];
                db.data[i] += g.data[i] * x.data[i];
            }
            touch(n.a);
            touch(n.b);
            break;
        }
        case Op::Tanh: {
            Matrix& da = nodes_[n.a].adjoint;
            for (size_t i = 0; i < g.size(); ++i) da.data[i] += g.data[i] * (1.0 - n.value.data[i] * n.value.data[i]);
            touch(n.a);
            break;
        }
        case Op::Sigmoid: {
            Matrix& da = nodes_[n.a].adjoint;
            for (size_t i = 0; i < g.size(); ++i) da.data[i] += g.data[i] * n.value.data[i] * (1.0 - n.value.data[i]);
            touch(n.a);
            break;
        }
        case Op::Softplus: {
            Matrix& da = nodes_[n.a].adjoint;
            const Matrix& x = nodes_[n.a].value;
            for (size_t i = 0; i < g.size(); ++i) da.data[i] += g.data[i] * stable_sigmoid(x.data[i]);
            touch(n.a);
            break;
        }
        case Op::Concat: {
            Matrix& da = nodes_[n.a].adjoint;
            Matrix& db = nodes_[n.b].adjoint;
            for (int r = 0; r < g.rows; ++r) {
                for (int c = 0; c < da.cols; ++c) da.at(r, c) += g.at(r, c);
                for (int c = 0; c < db.cols; ++c) db.at(r, c) += g.at(r, da.cols + c);
            }
            touch(n.a);
            touch(n.b);
            break;
        }
        case Op::MeanRows: {
            Matrix& da = nodes_[n.a].adjoint;
            double inv = 1.0 / static_cast<double>(n.row_set.size());
            for (int r : n.row_set)
                for (int c = 0; c < da.cols; ++c) da.at(r, c) += g.at(0, c) * inv;
            touch(n.a);
            break;
        }
        case Op::SqError: {
            Matrix& da = nodes_[n.a].adjoint;
            Matrix& db = nodes_[n.b].adjoint;
            const Matrix& x = nodes_[n.a].value;
            const Matrix& y = nodes_[n.b].value;
            double s = 2.0 * g.data[0];
            for (size_t i = 0; i < x.size(); ++i) {
                double d = s * (x.data[i] - y.data[i]);
                da.data[i] += d;
                db.data[i] -= d;
            }
            touch(n.a);
            touch(n.b);
            break;
        }
        case Op::Scale: {
            Matrix& da = nodes_[n.a].adjoint;
            for (size_t i = 0; i < g.size(); ++i) da.data[i] += n.factor * g.data[i];
            touch(n.a);
            break;
        }
    }
}

void Graph::backward(NodeId root) {
    const Node& r = checked(root, "backward");
    if (r.value.rows != 1 || r.value.cols != 1)
        throw ShapeError("backward: root must be 1x1, got " + shape_str(r.value));
    evaluate(root);
    zero_adjoints();
    nodes_[root].adjoint.data[0] = 1.0;
    nodes_[root].seeded = true;
    run_backward();
}

void Graph::zero_adjoints() {
    for (Node& n : nodes_) {
        if (n.seeded) n.adjoint.fill(0.0);
        n.seeded = false;
    }
}

void Graph::accumulate_adjoint(NodeId node, const Matrix& seed) {
    checked(node, "accumulate_adjoint");
    Node& n = nodes_[node];
    if (!n.adjoint.same_shape(seed))
        throw ShapeError("accumulate_adjoint: seed " + shape_str(seed) + " vs node " + shape_str(n.value));
    for (size_t i = 0; i < seed.size(); ++i) n.adjoint.data[i] += seed.data[i];
    n.seeded = true;
}

void Graph::run_backward() {
    for (NodeId id = static_cast<NodeId>(nodes_.size()) - 1; id >= 0; --id)
        if (nodes_[id].seeded) propagate(nodes_[id]);
}

const Matrix& Graph::value(NodeId node) const { return checked(node, "value").value; }

const Matrix& Graph::adjoint(NodeId node) const { return checked(node, "adjoint").adjoint; }

void Graph::set_value(NodeId node, const Matrix& v) {
    checked(node, "set_value");
    Node& n = nodes_[node];
    if (n.op != Op::Const && n.op != Op::Param)
        throw ShapeError("set_value: node " + std::to_string(node) + " is not a leaf");
    if (!n.value.same_shape(v))
        throw ShapeError("set_value: shape " + shape_str(v) + " vs node " + shape_str(n.value));
    n.value = v;
}

const std::string& Graph::param_name(NodeId id) const {
    const Node& n = checked(id, "param_name");
    if (n.op != Op::Param) throw ShapeError("param_name: node " + std::to_string(id) + " is not a parameter");
    return n.name;
}

NodeId Graph::param_id(const std::string& name) const {
    for (NodeId id : param_ids_)
        if (nodes_[id].name == name) return id;
    throw ShapeError("param_id: no parameter named '" + name + "'");
}

Matrix& Graph::param_value(const std::string& name) { return nodes_[param_id(name)].value; }

}  // namespace a2opt::ad
