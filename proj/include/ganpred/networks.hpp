#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ganpred/autodiff.hpp"
#include "ganpred/tensor.hpp"

namespace ganpred {

enum class Activation { kIdentity, kRelu, kLeakyRelu, kTanh, kSoftmax };

// Slope of every leaky relu in the project (discriminator hidden layers).
inline constexpr double kLeakyReluSlope = 0.2;

struct DenseLayer {
    ad::Tensor weight;  // in x out
    ad::Tensor bias;    // 1 x out
    Activation activation = Activation::kIdentity;
};

struct MlpParams {
    std::vector<DenseLayer> layers;

    std::size_t input_dim() const;
    std::size_t output_dim() const;
    // Checks the layer dims chain and all entries are finite.
    void validate() const;
};

struct MlpSpec {
    std::size_t input_dim = 0;
    std::vector<std::size_t> hidden;
    std::size_t output_dim = 0;
    Activation hidden_activation = Activation::kRelu;
    Activation output_activation = Activation::kIdentity;
};

// He-style fan-in scaled uniform weights (std sqrt(2/fan_in)), zero biases.
// Deterministic for a given seed.
MlpParams init_mlp(const MlpSpec& spec, std::uint64_t seed);
ad::Tensor init_weight_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed);

// Generator: maps concat(noise, condition) through the trunk MLP.
// Output activation identity for regression, softmax for classification.
struct GeneratorSpec {
    std::size_t noise_dim = 0;
    std::size_t condition_dim = 0;
    std::size_t output_dim = 0;
    std::vector<std::size_t> hidden;
    Activation output_activation = Activation::kIdentity;
};

struct Generator {
    GeneratorSpec spec;
    MlpParams trunk;
};

Generator init_generator(const GeneratorSpec& spec, std::uint64_t seed);

// Projection discriminator. Score of a pair (x, y):
//   score = W_o . phi(y) + features(x)^T . phi(y)
// with phi(y) an MLP for regression and the plain matrix product y * W_phi
// for classification (one-hot y selects a row of W_phi).
struct ProjectionDiscriminator {
    bool classification = false;
    MlpParams feature_net;    // p -> u
    ad::Tensor output_weight; // u x 1 column
    MlpParams phi_net;        // q -> u (regression form)
    ad::Tensor phi_matrix;    // q x u (classification form)

    std::size_t input_dim() const { return feature_net.input_dim(); }
    std::size_t label_dim() const;
    std::size_t feature_dim() const { return feature_net.output_dim(); }
    void validate() const;
};

struct DiscriminatorSpec {
    bool classification = false;
    std::size_t input_dim = 0;
    std::size_t label_dim = 0;
    std::size_t feature_dim = 16;
    std::vector<std::size_t> hidden;  // used by feature_net and phi_net
};

ProjectionDiscriminator init_discriminator(const DiscriminatorSpec& spec, std::uint64_t seed);

// ---- Tape-based forwards (training path) ----

// Leaf Vars for each parameter tensor, in the same order as *_params() below.
struct MlpVars {
    std::vector<ad::Var> params;  // W0, b0, W1, b1, ...
};

MlpVars mlp_leaves(ad::Tape& tape, const MlpParams& mlp);
ad::Var mlp_forward(ad::Tape& tape, const MlpParams& mlp, const MlpVars& vars, ad::Var input);

struct DiscriminatorVars {
    MlpVars feature_net;
    ad::Var output_weight;
    MlpVars phi_net;     // regression form
    ad::Var phi_matrix;  // classification form
};

DiscriminatorVars discriminator_leaves(ad::Tape& tape, const ProjectionDiscriminator& disc);

// Label embedding phi(y): MLP (regression) or y * W_phi (classification).
// Accepts a batch of label rows; soft labels are allowed on this path.
ad::Var label_embedding(ad::Tape& tape, const ProjectionDiscriminator& disc,
                        const DiscriminatorVars& vars, ad::Var labels);

// Batched scores [n x 1] given precomputed features [n x u] (on- or
// off-tape) and label rows [n x q].
ad::Var projection_scores(ad::Tape& tape, const ProjectionDiscriminator& disc,
                          const DiscriminatorVars& vars, ad::Var features, ad::Var labels);

// ---- Plain forwards (inference path; same graph code on a scratch tape) ----

ad::Tensor mlp_apply(const MlpParams& mlp, const ad::Tensor& input);

// One generator evaluation per row of (noise, condition).
ad::Tensor generator_apply(const Generator& gen, const ad::Tensor& noise,
                           const ad::Tensor& condition);

// Feature extraction M_F(x) for a batch of input rows.
ad::Tensor feature_forward(const ProjectionDiscriminator& disc, const ad::Tensor& inputs);

// Spec'd single-pair scores. The classification form validates that the
// label is exactly one-hot; soft labels are rejected.
double discriminator_forward_regression(const ProjectionDiscriminator& disc,
                                        const ad::Tensor& x, const ad::Tensor& y);
double discriminator_forward_classification(const ProjectionDiscriminator& disc,
                                            const ad::Tensor& x, const ad::Tensor& y_onehot);

// Trainable parameter slots, ordered to match the *_leaves() Vars.
std::vector<ad::Tensor*> mlp_params(MlpParams& mlp);
std::vector<ad::Tensor*> generator_params(Generator& gen);
std::vector<ad::Tensor*> discriminator_params(ProjectionDiscriminator& disc);
std::vector<ad::Var> generator_param_vars(const MlpVars& trunk);
std::vector<ad::Var> discriminator_param_vars(const ProjectionDiscriminator& disc,
                                              const DiscriminatorVars& vars);

const char* activation_name(Activation a);
Activation activation_from_name(const std::string& name);

}  // namespace ganpred
