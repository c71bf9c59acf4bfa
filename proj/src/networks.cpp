#include "ganpred/networks.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ganpred/errors.hpp"
#include "ganpred/rng.hpp"

namespace ganpred {

using ad::Tape;
using ad::Tensor;
using ad::Var;

std::size_t MlpParams::input_dim() const {
    if (layers.empty()) throw std::invalid_argument("MlpParams: no layers");
    return layers.front().weight.rows();
}

std::size_t MlpParams::output_dim() const {
    if (layers.empty()) throw std::invalid_argument("MlpParams: no layers");
    return layers.back().weight.cols();
}

void MlpParams::validate() const {
    if (layers.empty()) throw std::invalid_argument("MlpParams: no layers");
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const DenseLayer& l = layers[i];
        if (l.bias.rows() != 1 || l.bias.cols() != l.weight.cols()) {
            throw std::invalid_argument("MlpParams: bias shape mismatch at layer " +
                                        std::to_string(i));
        }
        if (i > 0 && layers[i - 1].weight.cols() != l.weight.rows()) {
            throw std::invalid_argument("MlpParams: layer dims do not chain at layer " +
                                        std::to_string(i));
        }
        if (!l.weight.all_finite() || !l.bias.all_finite()) {
            throw NumericError("MlpParams: non-finite parameter at layer " + std::to_string(i));
        }
    }
}

Tensor init_weight_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("init_weight_matrix: zero dimension");
    Rng rng(seed);
    // Uniform with std sqrt(2/fan_in): limit = sqrt(3) * std.
    const double limit = std::sqrt(6.0 / static_cast<double>(rows));
    Tensor w(rows, cols);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = rng.uniform(-limit, limit);
    return w;
}

MlpParams init_mlp(const MlpSpec& spec, std::uint64_t seed) {
    if (spec.input_dim == 0 || spec.output_dim == 0) {
        throw std::invalid_argument("init_mlp: zero dimension");
    }
    for (std::size_t h : spec.hidden) {
        if (h == 0) throw std::invalid_argument("init_mlp: zero hidden dimension");
    }
    MlpParams mlp;
    std::size_t in = spec.input_dim;
    for (std::size_t i = 0; i <= spec.hidden.size(); ++i) {
        const bool last = i == spec.hidden.size();
        const std::size_t out = last ? spec.output_dim : spec.hidden[i];
        DenseLayer layer;
        layer.weight = init_weight_matrix(in, out, mix_seed(seed, i));
        layer.bias = Tensor(1, out, 0.0);
        layer.activation = last ? spec.output_activation : spec.hidden_activation;
        mlp.layers.push_back(std::move(layer));
        in = out;
    }
    return mlp;
}

Generator init_generator(const GeneratorSpec& spec, std::uint64_t seed) {
    if (spec.noise_dim == 0 || spec.condition_dim == 0 || spec.output_dim == 0) {
        throw std::invalid_argument("init_generator: zero dimension");
    }
    MlpSpec trunk;
    trunk.input_dim = spec.noise_dim + spec.condition_dim;
    trunk.hidden = spec.hidden;
    trunk.output_dim = spec.output_dim;
    trunk.hidden_activation = Activation::kRelu;
    trunk.output_activation = spec.output_activation;
    return Generator{spec, init_mlp(trunk, seed)};
}

std::size_t ProjectionDiscriminator::label_dim() const {
    return classification ? phi_matrix.rows() : phi_net.input_dim();
}

void ProjectionDiscriminator::validate() const {
    feature_net.validate();
    const std::size_t u = feature_net.output_dim();
    if (output_weight.rows() != u || output_weight.cols() != 1) {
        throw std::invalid_argument("ProjectionDiscriminator: output_weight must be u x 1");
    }
    if (classification) {
        if (phi_matrix.cols() != u) {
            throw std::invalid_argument("ProjectionDiscriminator: phi_matrix columns != u");
        }
    } else {
        phi_net.validate();
        if (phi_net.output_dim() != u) {
            throw std::invalid_argument("ProjectionDiscriminator: phi_net output dim != u");
        }
    }
}

ProjectionDiscriminator init_discriminator(const DiscriminatorSpec& spec, std::uint64_t seed) {
    if (spec.input_dim == 0 || spec.label_dim == 0 || spec.feature_dim == 0) {
        throw std::invalid_argument("init_discriminator: zero dimension");
    }
    ProjectionDiscriminator disc;
    disc.classification = spec.classification;

    MlpSpec feature;
    feature.input_dim = spec.input_dim;
    feature.hidden = spec.hidden;
    feature.output_dim = spec.feature_dim;
    feature.hidden_activation = Activation::kLeakyRelu;
    feature.output_activation = Activation::kLeakyRelu;
    disc.feature_net = init_mlp(feature, mix_seed(seed, 101));

    disc.output_weight = init_weight_matrix(spec.feature_dim, 1, mix_seed(seed, 102));

    if (spec.classification) {
        disc.phi_matrix = init_weight_matrix(spec.label_dim, spec.feature_dim, mix_seed(seed, 103));
    } else {
        MlpSpec phi;
        phi.input_dim = spec.label_dim;
        phi.hidden = spec.hidden;
        phi.output_dim = spec.feature_dim;
        phi.hidden_activation = Activation::kLeakyRelu;
        phi.output_activation = Activation::kIdentity;
        disc.phi_net = init_mlp(phi, mix_seed(seed, 103));
    }
    return disc;
}

namespace {

Var apply_activation(Tape& tape, Var x, Activation act) {
    switch (act) {
        case Activation::kIdentity: return x;
        case Activation::kRelu: return tape.relu(x);
        case Activation::kLeakyRelu: return tape.leaky_relu(x, kLeakyReluSlope);
        case Activation::kTanh: return tape.tanh(x);
        case Activation::kSoftmax: return tape.softmax(x);
    }
    throw std::invalid_argument("unknown activation");
}

}  // namespace

MlpVars mlp_leaves(Tape& tape, const MlpParams& mlp) {
    MlpVars vars;
    for (const DenseLayer& layer : mlp.layers) {
        vars.params.push_back(tape.leaf(layer.weight));
        vars.params.push_back(tape.leaf(layer.bias));
    }
    return vars;
}

Var mlp_forward(Tape& tape, const MlpParams& mlp, const MlpVars& vars, Var input) {
    if (vars.params.size() != 2 * mlp.layers.size()) {
        throw std::invalid_argument("mlp_forward: vars do not match layer count");
    }
    Var h = input;
    for (std::size_t i = 0; i < mlp.layers.size(); ++i) {
        h = tape.add(tape.matmul(h, vars.params[2 * i]), vars.params[2 * i + 1]);
        h = apply_activation(tape, h, mlp.layers[i].activation);
    }
    return h;
}

DiscriminatorVars discriminator_leaves(Tape& tape, const ProjectionDiscriminator& disc) {
    DiscriminatorVars vars;
    vars.feature_net = mlp_leaves(tape, disc.feature_net);
    vars.output_weight = tape.leaf(disc.output_weight);
    if (disc.classification) {
        vars.phi_matrix = tape.leaf(disc.phi_matrix);
    } else {
        vars.phi_net = mlp_leaves(tape, disc.phi_net);
    }
    return vars;
}

Var label_embedding(Tape& tape, const ProjectionDiscriminator& disc,
                    const DiscriminatorVars& vars, Var labels) {
    if (disc.classification) {
        return tape.matmul(labels, vars.phi_matrix);
    }
    return mlp_forward(tape, disc.phi_net, vars.phi_net, labels);
}

Var projection_scores(Tape& tape, const ProjectionDiscriminator& disc,
                      const DiscriminatorVars& vars, Var features, Var labels) {
    Var embed = label_embedding(tape, disc, vars, labels);
    Var output_term = tape.matmul(embed, vars.output_weight);  // [n x 1]
    // Row-wise inner product <features_i, embed_i> as (features . embed) * 1.
    Var ones = tape.leaf(Tensor(disc.feature_dim(), 1, 1.0));
    Var inner_term = tape.matmul(tape.mul(features, embed), ones);
    return tape.add(output_term, inner_term);
}

Tensor mlp_apply(const MlpParams& mlp, const Tensor& input) {
    Tape tape;
    MlpVars vars = mlp_leaves(tape, mlp);
    return tape.value(mlp_forward(tape, mlp, vars, tape.leaf(input)));
}

Tensor generator_apply(const Generator& gen, const Tensor& noise, const Tensor& condition) {
    if (noise.cols() != gen.spec.noise_dim || condition.cols() != gen.spec.condition_dim ||
        noise.rows() != condition.rows()) {
        throw std::invalid_argument("generator_apply: input dims do not match spec");
    }
    return mlp_apply(gen.trunk, concat_cols(noise, condition));
}

Tensor feature_forward(const ProjectionDiscriminator& disc, const Tensor& inputs) {
    if (inputs.cols() != disc.input_dim()) {
        throw std::invalid_argument("feature_forward: input dim mismatch");
    }
    return mlp_apply(disc.feature_net, inputs);
}

namespace {

double single_pair_score(const ProjectionDiscriminator& disc, const Tensor& x, const Tensor& y) {
    Tape tape;
    DiscriminatorVars vars = discriminator_leaves(tape, disc);
    Var features = mlp_forward(tape, disc.feature_net, vars.feature_net, tape.leaf(x));
    Var scores = projection_scores(tape, disc, vars, features, tape.leaf(y));
    return tape.scalar_value(scores);
}

}  // namespace

double discriminator_forward_regression(const ProjectionDiscriminator& disc, const Tensor& x,
                                        const Tensor& y) {
    if (disc.classification) {
        throw std::invalid_argument("discriminator_forward_regression: classification model");
    }
    if (x.rows() != 1 || y.rows() != 1 || x.cols() != disc.input_dim() ||
        y.cols() != disc.label_dim()) {
        throw std::invalid_argument("discriminator_forward_regression: dim mismatch");
    }
    return single_pair_score(disc, x, y);
}

double discriminator_forward_classification(const ProjectionDiscriminator& disc, const Tensor& x,
                                            const Tensor& y_onehot) {
    if (!disc.classification) {
        throw std::invalid_argument("discriminator_forward_classification: regression model");
    }
    if (x.rows() != 1 || y_onehot.rows() != 1 || x.cols() != disc.input_dim() ||
        y_onehot.cols() != disc.label_dim()) {
        throw std::invalid_argument("discriminator_forward_classification: dim mismatch");
    }
    std::size_t ones = 0;
    for (std::size_t i = 0; i < y_onehot.size(); ++i) {
        if (y_onehot[i] == 1.0) {
            ++ones;
        } else if (y_onehot[i] != 0.0) {
            throw std::invalid_argument(
                "discriminator_forward_classification: label is not one-hot");
        }
    }
    if (ones != 1) {
        throw std::invalid_argument("discriminator_forward_classification: label is not one-hot");
    }
    return single_pair_score(disc, x, y_onehot);
}

std::vector<Tensor*> mlp_params(MlpParams& mlp) {
    std::vector<Tensor*> out;
    for (DenseLayer& layer : mlp.layers) {
        out.push_back(&layer.weight);
        out.push_back(&layer.bias);
    }
    return out;
}

std::vector<Tensor*> generator_params(Generator& gen) { return mlp_params(gen.trunk); }

std::vector<Tensor*> discriminator_params(ProjectionDiscriminator& disc) {
    std::vector<Tensor*> out = mlp_params(disc.feature_net);
    out.push_back(&disc.output_weight);
    if (disc.classification) {
        out.push_back(&disc.phi_matrix);
    } else {
        for (Tensor* t : mlp_params(disc.phi_net)) out.push_back(t);
    }
    return out;
}

std::vector<Var> generator_param_vars(const MlpVars& trunk) { return trunk.params; }

std::vector<Var> discriminator_param_vars(const ProjectionDiscriminator& disc,
                                          const DiscriminatorVars& vars) {
    std::vector<Var> out = vars.feature_net.params;
    out.push_back(vars.output_weight);
    if (disc.classification) {
        out.push_back(vars.phi_matrix);
    } else {
        for (Var v : vars.phi_net.params) out.push_back(v);
    }
    return out;
}

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::kIdentity: return "identity";
        case Activation::kRelu: return "relu";
        case Activation::kLeakyRelu: return "leaky_relu";
        case Activation::kTanh: return "tanh";
        case Activation::kSoftmax: return "softmax";
    }
    throw std::invalid_argument("unknown activation");
}

Activation activation_from_name(const std::string& name) {
    if (name == "identity") return Activation::kIdentity;
    if (name == "relu") return Activation::kRelu;
    if (name == "leaky_relu") return Activation::kLeakyRelu;
    if (name == "tanh") return Activation::kTanh;
    if (name == "softmax") return Activation::kSoftmax;
    throw DataError("unknown activation name: " + name);
}

}  // namespace ganpred
