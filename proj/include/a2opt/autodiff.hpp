#pragma once

#include <string>
#include <vector>

#include "a2opt/matrix.hpp"

namespace a2opt::ad {

using NodeId = int;

// Reverse-mode expression graph over dense matrices.
//
// Nodes are appended in construction order, so node ids form a topological
// order and a single forward / reverse sweep suffices. All shape validation
// happens in the builder methods; evaluate() and the backward passes never
// raise shape errors. Node values and adjoints are allocated once at
// construction, so repeated evaluate/backward cycles do not allocate.
class Graph {
public:
    // ---- leaves ------------------------------------------------------------
    NodeId constant(Matrix value);
    NodeId param(const std::string& name, Matrix init);

    // ---- primitives --------------------------------------------------------
    NodeId matmul(NodeId a, NodeId b);
    NodeId add(NodeId a, NodeId b);                    // elementwise
    NodeId mul(NodeId a, NodeId b);                    // elementwise
    NodeId tanh(NodeId a);
    NodeId sigmoid(NodeId a);
    NodeId softplus(NodeId a);
    NodeId concat(NodeId a, NodeId b);                 // glue along columns; same row count
    NodeId mean_rows(NodeId a, std::vector<int> rows); // mean over a row subset -> 1 x cols
    NodeId sq_error(NodeId a, NodeId b);               // sum of squared differences -> 1 x 1
    NodeId scale(NodeId a, double s);

    // ---- numeric passes ----------------------------------------------------
    // Recomputes every node up to and including `root`, returns its value.
    const Matrix& evaluate(NodeId root);

    // Full reverse sweep from a scalar root: forward pass, adjoints reset,
    // root seeded with 1. Throws if `root` is not 1x1.
    void backward(NodeId root);

    // Seeded variant for losses whose outer derivative is applied by the
    // caller: reset with zero_adjoints(), accumulate seeds on evaluated
    // nodes, then sweep. Values must be current (evaluate a sink first).
    void zero_adjoints();
    void accumulate_adjoint(NodeId node, const Matrix& seed);
    void run_backward();

    // ---- access ------------------------------------------------------------
    const Matrix& value(NodeId node) const;
    const Matrix& adjoint(NodeId node) const;
    void set_value(NodeId node, const Matrix& v);      // leaves only

    int node_count() const { return static_cast<int>(nodes_.size()); }
    const std::vector<NodeId>& param_ids() const { return param_ids_; }
    const std::string& param_name(NodeId id) const;
    NodeId param_id(const std::string& name) const;
    Matrix& param_value(const std::string& name);

private:
    enum class Op { Const, Param, MatMul, Add, Mul, Tanh, Sigmoid, Softplus, Concat, MeanRows, SqError, Scale };

    struct Node {
        Op op;
        NodeId a = -1, b = -1;
        double factor = 0.0;        // Scale
        std::vector<int> row_set;   // MeanRows
        Matrix value;
        Matrix adjoint;
        bool seeded = false;        // adjoint touched since last reset
        std::string name;           // Param
    };

    NodeId push(Node n);
    const Node& checked(NodeId id, const char* ctx) const;
    void compute(Node& n);
    void propagate(Node& n);
    void touch(NodeId id);

    std::vector<Node> nodes_;
    std::vector<NodeId> param_ids_;
};

}  // namespace a2opt::ad
