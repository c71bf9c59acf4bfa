#include "ganpred/autodiff.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ganpred/errors.hpp"

namespace ganpred::ad {

const Tensor& GradientMap::at(Var v) const {
    if (!contains(v)) {
        throw std::invalid_argument("GradientMap: no gradient recorded for node " +
                                    std::to_string(v.id));
    }
    return grads_[static_cast<std::size_t>(v.id)];
}

bool GradientMap::contains(Var v) const {
    return v.id >= 0 && static_cast<std::size_t>(v.id) < has_.size() &&
           has_[static_cast<std::size_t>(v.id)];
}

Var Tape::push(Node node, const char* op_name) {
    if (!node.value.all_finite()) {
        throw NumericError(std::string(op_name) + ": non-finite result");
    }
    nodes_.push_back(std::move(node));
    return Var{static_cast<int>(nodes_.size()) - 1};
}

const Tape::Node& Tape::node(Var v) const {
    if (v.id < 0 || static_cast<std::size_t>(v.id) >= nodes_.size()) {
        throw std::invalid_argument("Tape: invalid node id " + std::to_string(v.id));
    }
    return nodes_[static_cast<std::size_t>(v.id)];
}

const Tensor& Tape::value(Var v) const { return node(v).value; }

double Tape::scalar_value(Var v) const {
    const Tensor& t = value(v);
    if (t.size() != 1) {
        throw std::invalid_argument("Tape: node is not scalar-valued");
    }
    return t[0];
}

Var Tape::leaf(Tensor value) {
    if (value.empty()) throw std::invalid_argument("leaf: empty tensor");
    return push({Op::kLeaf, std::move(value)}, "leaf");
}

Var Tape::matmul(Var a, Var b) {
    Node n{Op::kMatMul, ad::matmul(value(a), value(b)), a.id, b.id};
    return push(std::move(n), "matmul");
}

Var Tape::add(Var a, Var b) {
    const Tensor& ta = value(a);
    const Tensor& tb = value(b);
    Tensor out = ta.same_shape(tb) ? ad::add(ta, tb) : add_row_broadcast(ta, tb);
    return push({Op::kAdd, std::move(out), a.id, b.id}, "add");
}

Var Tape::mul(Var a, Var b) {
    return push({Op::kMul, hadamard(value(a), value(b)), a.id, b.id}, "mul");
}

Var Tape::relu(Var x) {
    Tensor out = value(x);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = out[i] > 0.0 ? out[i] : 0.0;
    return push({Op::kRelu, std::move(out), x.id}, "relu");
}

Var Tape::leaky_relu(Var x, double slope) {
    Tensor out = value(x);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i] <= 0.0) out[i] *= slope;
    }
    Node n{Op::kLeakyRelu, std::move(out), x.id};
    n.alpha = slope;
    return push(std::move(n), "leaky_relu");
}

Var Tape::tanh(Var x) {
    Tensor out = value(x);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(out[i]);
    return push({Op::kTanh, std::move(out), x.id}, "tanh");
}

Var Tape::softmax(Var x) {
    return push({Op::kSoftmax, softmax_rows(value(x)), x.id}, "softmax");
}

Var Tape::mean(Var x) {
    return push({Op::kMean, Tensor::scalar(mean_all(value(x))), x.id}, "mean");
}

Var Tape::sum(Var x) {
    return push({Op::kSum, Tensor::scalar(sum_all(value(x))), x.id}, "sum");
}

Var Tape::hinge(Var x) {
    Tensor out = value(x);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double margin = 1.0 - out[i];
        out[i] = margin > 0.0 ? margin : 0.0;
    }
    return push({Op::kHinge, std::move(out), x.id}, "hinge");
}

Var Tape::scale(Var x, double factor) {
    Node n{Op::kScale, scaled(value(x), factor), x.id};
    n.alpha = factor;
    return push(std::move(n), "scale");
}

Var Tape::concat(Var a, Var b) {
    return push({Op::kConcat, concat_cols(value(a), value(b)), a.id, b.id}, "concat");
}

Var Tape::slice(Var x, std::size_t col_begin, std::size_t col_end) {
    Node n{Op::kSlice, slice_cols(value(x), col_begin, col_end), x.id};
    n.col_begin = col_begin;
    n.col_end = col_end;
    return push(std::move(n), "slice");
}

GradientMap Tape::backward(Var root) const {
    const Node& root_node = node(root);
    if (root_node.value.size() != 1) {
        throw std::invalid_argument("backward: root must be scalar-valued");
    }

    std::vector<Tensor> grad(nodes_.size());
    std::vector<bool> has(nodes_.size(), false);
    grad[static_cast<std::size_t>(root.id)] = Tensor::scalar(1.0);
    has[static_cast<std::size_t>(root.id)] = true;

    auto accumulate = [&](int parent, Tensor contribution) {
        const auto p = static_cast<std::size_t>(parent);
        if (has[p]) {
            grad[p] = ad::add(grad[p], contribution);
        } else {
            grad[p] = std::move(contribution);
            has[p] = true;
        }
    };

    // Nodes are created parents-first, so descending id order is a reverse
    // topological order.
    for (int id = root.id; id >= 0; --id) {
        const auto i = static_cast<std::size_t>(id);
        if (!has[i]) continue;
        const Node& n = nodes_[i];
        const Tensor& g = grad[i];

        switch (n.op) {
            case Op::kLeaf:
                break;
            case Op::kMatMul: {
                const Tensor& a = nodes_[static_cast<std::size_t>(n.parent_a)].value;
                const Tensor& b = nodes_[static_cast<std::size_t>(n.parent_b)].value;
                accumulate(n.parent_a, ad::matmul(g, transpose(b)));
                accumulate(n.parent_b, ad::matmul(transpose(a), g));
                break;
            }
            case Op::kAdd: {
                const Tensor& a = nodes_[static_cast<std::size_t>(n.parent_a)].value;
                const Tensor& b = nodes_[static_cast<std::size_t>(n.parent_b)].value;
                accumulate(n.parent_a, g);
                if (a.same_shape(b)) {
                    accumulate(n.parent_b, g);
                } else {
                    accumulate(n.parent_b, column_sums(g));
                }
                break;
            }
            case Op::kMul: {
                const Tensor& a = nodes_[static_cast<std::size_t>(n.parent_a)].value;
                const Tensor& b = nodes_[static_cast<std::size_t>(n.parent_b)].value;
                accumulate(n.parent_a, hadamard(g, b));
                accumulate(n.parent_b, hadamard(g, a));
                break;
            }
            case Op::kRelu: {
                const Tensor& x = nodes_[static_cast<std::size_t>(n.parent_a)].value;
                Tensor d = g;
                for (std::size_t k = 0; k < d.size(); ++k) {
                    if (x[k] <= 0.0) d[k] = 0.0;
                }
                accumulate(n.parent_a, std::move(d));
                break;
            }
            case Op::kLeakyRelu: {
                const Tensor& x = nodes_[static_cast<std::size_t>(n.parent_a)].value;
                Tensor d = g;
                for (std::size_t k = 0; k < d.size(); ++k) {
                    if (x[k] <= 0.0) d[k] *= n.alpha;
                }
                accumulate(n.parent_a, std::move(d));
                break;
            }
            case Op::kTanh: {
                Tensor d = g;
                for (std::size_t k = 0; k < d.size(); ++k) {
                    d[k] *= 1.0 - n.value[k] * n.value[k];
                }
                accumulate(n.parent_a, std::move(d));
                break;
            }
            case Op::kSoftmax: {
                const Tensor& s = n.value;
                Tensor d(s.rows(), s.cols());
                for (std::size_t r = 0; r < s.rows(); ++r) {
                    double dot = 0.0;
                    for (std::size_t c = 0; c < s.cols(); ++c) dot += g(r, c) * s(r, c);
                    for (std::size_t c = 0; c < s.cols(); ++c) {
                        d(r, c) = s(r, c) * (g(r, c) - dot);
                    }
                }
                accumulate(n.parent_a, std::move(d));
                break;
            }
            case Op::kMean: {
                const Tensor& x = nodes_[static_cast<std::size_t>(n.parent_a)].value;
                accumulate(n.parent_a,
                           Tensor(x.rows(), x.cols(), g[0] / static_cast<double>(x.size())));
                break;
            }
            case Op::kSum: {
                const Tensor& x = nodes_[static_cast<std::size_t>(n.parent_a)].value;
                accumulate(n.parent_a, Tensor(x.rows(), x.cols(), g[0]));
                break;
            }
            case Op::kHinge: {
                const Tensor& x = nodes_[static_cast<std::size_t>(n.parent_a)].value;
                Tensor d = g;
                for (std::size_t k = 0; k < d.size(); ++k) {
                    d[k] = x[k] < 1.0 ? -d[k] : 0.0;
                }
                accumulate(n.parent_a, std::move(d));
                break;
            }
            case Op::kScale:
                accumulate(n.parent_a, scaled(g, n.alpha));
                break;
            case Op::kConcat: {
                const Tensor& a = nodes_[static_cast<std::size_t>(n.parent_a)].value;
                accumulate(n.parent_a, slice_cols(g, 0, a.cols()));
                accumulate(n.parent_b, slice_cols(g, a.cols(), g.cols()));
                break;
            }
            case Op::kSlice: {
                const Tensor& x = nodes_[static_cast<std::size_t>(n.parent_a)].value;
                Tensor d(x.rows(), x.cols());
                for (std::size_t r = 0; r < g.rows(); ++r) {
                    for (std::size_t c = 0; c < g.cols(); ++c) {
                        d(r, n.col_begin + c) = g(r, c);
                    }
                }
                accumulate(n.parent_a, std::move(d));
                break;
            }
        }
    }

    GradientMap out;
    out.grads_.resize(nodes_.size());
    out.has_.assign(nodes_.size(), false);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].op != Op::kLeaf) continue;
        out.has_[i] = true;
        out.grads_[i] = has[i] ? std::move(grad[i])
                               : Tensor(nodes_[i].value.rows(), nodes_[i].value.cols());
    }
    return out;
}

double finite_diff_check(const LossBuilder& build, const std::vector<Tensor>& params,
                         double step) {
    if (step <= 0.0) throw std::invalid_argument("finite_diff_check: step must be positive");

    auto evaluate = [&](const std::vector<Tensor>& p) {
        Tape tape;
        std::vector<Var> leaves;
        leaves.reserve(p.size());
        for (const Tensor& t : p) leaves.push_back(tape.leaf(t));
        return tape.scalar_value(build(tape, leaves));
    };

    if (evaluate(params) != evaluate(params)) {
        throw NumericError("finite_diff_check: loss function is not deterministic");
    }

    Tape tape;
    std::vector<Var> leaves;
    leaves.reserve(params.size());
    for (const Tensor& t : params) leaves.push_back(tape.leaf(t));
    const GradientMap grads = tape.backward(build(tape, leaves));

    double worst = 0.0;
    std::vector<Tensor> probe = params;
    for (std::size_t p = 0; p < params.size(); ++p) {
        const Tensor& analytic = grads.at(leaves[p]);
        for (std::size_t i = 0; i < probe[p].size(); ++i) {
            const double saved = probe[p][i];
            probe[p][i] = saved + step;
            const double hi = evaluate(probe);
            probe[p][i] = saved - step;
            const double lo = evaluate(probe);
            probe[p][i] = saved;
            const double numeric = (hi - lo) / (2.0 * step);
            const double err = std::abs(analytic[i] - numeric) / (std::abs(numeric) + 1e-8);
            worst = std::max(worst, err);
        }
    }
    return worst;
}

}  // namespace ganpred::ad
