#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ganpred/tensor.hpp"

namespace ganpred::ad {

// Define-by-run reverse-mode automatic differentiation. A Tape owns the
// graph for one loss evaluation; graphs are rebuilt every training step and
// never reused. Node values are validated to be finite after every op.

enum class Op {
    kLeaf,
    kMatMul,
    kAdd,       // same shape, or rhs is a 1xM row bias broadcast over rows
    kMul,       // elementwise product
    kRelu,
    kLeakyRelu,
    kTanh,
    kSoftmax,   // row-wise, max-subtracted
    kMean,      // mean over all entries -> 1x1
    kSum,       // sum over all entries -> 1x1
    kHinge,     // elementwise max(0, 1 - x)
    kScale,     // multiply by a constant
    kConcat,    // column-wise concatenation
    kSlice,     // column range [begin, end)
};

struct Var {
    int id = -1;
    bool valid() const { return id >= 0; }
};

class GradientMap {
public:
    const Tensor& at(Var v) const;
    bool contains(Var v) const;

private:
    friend class Tape;
    std::vector<Tensor> grads_;
    std::vector<bool> has_;
};

class Tape {
public:
    Var leaf(Tensor value);
    Var matmul(Var a, Var b);
    Var add(Var a, Var b);
    Var mul(Var a, Var b);
    Var relu(Var x);
    Var leaky_relu(Var x, double slope);
    Var tanh(Var x);
    Var softmax(Var x);
    Var mean(Var x);
    Var sum(Var x);
    Var hinge(Var x);
    Var scale(Var x, double factor);
    Var concat(Var a, Var b);
    Var slice(Var x, std::size_t col_begin, std::size_t col_end);

    const Tensor& value(Var v) const;
    double scalar_value(Var v) const;
    std::size_t size() const { return nodes_.size(); }

    // Gradients of a scalar-valued root with respect to every leaf on the
    // tape. Leaves that do not feed the root get zero gradients.
    // relu/hinge subgradient convention at the kink: 0. leaky_relu at 0: slope.
    GradientMap backward(Var root) const;

private:
    struct Node {
        Op op;
        Tensor value;
        int parent_a = -1;
        int parent_b = -1;
        double alpha = 0.0;        // scale factor or leaky slope
        std::size_t col_begin = 0; // slice bounds
        std::size_t col_end = 0;
    };

    Var push(Node node, const char* op_name);
    const Node& node(Var v) const;

    std::vector<Node> nodes_;
};

// Builds a scalar loss on the given tape from leaf Vars created for each
// parameter tensor, in order.
using LossBuilder = std::function<Var(Tape&, std::span<const Var>)>;

// Max over all parameter entries of |analytic - numeric| / (|numeric| + 1e-8),
// numeric being the central finite difference with the given step. The loss
// builder must be deterministic; this is verified by evaluating twice.
double finite_diff_check(const LossBuilder& build, const std::vector<Tensor>& params,
                         double step);

}  // namespace ganpred::ad
