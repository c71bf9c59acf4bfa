#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ganpred/prediction.hpp"
#include "ganpred/rng.hpp"

using namespace ganpred;
using ad::Tensor;

namespace {

ModelBundle regression_fixture(std::uint64_t seed) {
    ModelBundle m;
    m.task = Task::kRegression;
    m.generator = init_generator({4, 2, 1, {8}, Activation::kIdentity}, mix_seed(seed, 1));
    m.discriminator = init_discriminator({false, 2, 1, 6, {8}}, mix_seed(seed, 2));
    m.condition_on_features = false;
    m.target_hist_range = {{-3.0, 3.0}};
    return m;
}

ModelBundle classification_fixture(std::uint64_t seed, std::size_t q = 3) {
    ModelBundle m;
    m.task = Task::kClassification;
    m.discriminator = init_discriminator({true, 2, q, 6, {8}}, mix_seed(seed, 2));
    m.generator = init_generator({4, 6, q, {8}, Activation::kSoftmax}, mix_seed(seed, 1));
    m.condition_on_features = true;
    return m;
}

// Kills the noise path: zero the first-layer weight rows that read z.
void ignore_noise(Generator& gen) {
    for (std::size_t r = 0; r < gen.spec.noise_dim; ++r) {
        for (std::size_t c = 0; c < gen.trunk.layers[0].weight.cols(); ++c) {
            gen.trunk.layers[0].weight(r, c) = 0.0;
        }
    }
}

// Forces constant softmax output by zeroing everything and setting the final
// bias to the log of the wanted probabilities.
void force_constant_output(Generator& gen, const std::vector<double>& probs) {
    for (DenseLayer& l : gen.trunk.layers) {
        for (std::size_t i = 0; i < l.weight.size(); ++i) l.weight[i] = 0.0;
        for (std::size_t i = 0; i < l.bias.size(); ++i) l.bias[i] = 0.0;
    }
    DenseLayer& last = gen.trunk.layers.back();
    for (std::size_t i = 0; i < probs.size(); ++i) last.bias[i] = std::log(probs[i]);
}

}  // namespace

TEST_CASE("mc_predict: shape, determinism and the degenerate generator") {
    ModelBundle m = regression_fixture(1);
    const Tensor x = Tensor::row({0.3, -0.7});

    const auto s = mc_predict(m, x, 256, 9);
    CHECK(s.draws.rows() == 256);
    CHECK(s.draws.cols() == 1);
    CHECK(s.k() == 256);

    const auto s2 = mc_predict(m, x, 256, 9);
    CHECK(s.draws == s2.draws);
    const auto s3 = mc_predict(m, x, 256, 10);
    CHECK_FALSE(s.draws == s3.draws);

    CHECK_THROWS_AS(mc_predict(m, x, 1, 9), std::invalid_argument);

    SUBCASE("noise-independent generator collapses to one bin with zero entropy") {
        ignore_noise(m.generator);
        const auto sd = mc_predict(m, x, 64, 5);
        for (std::size_t i = 1; i < sd.draws.rows(); ++i) {
            CHECK(sd.draws(i, 0) == sd.draws(0, 0));
        }
        std::vector<double> column(sd.draws.rows());
        for (std::size_t i = 0; i < column.size(); ++i) column[i] = sd.draws(i, 0);
        const auto dist = estimate_density(column, 16);
        std::size_t occupied = 0;
        for (double mass : dist.mass) {
            if (mass > 0) ++occupied;
        }
        CHECK(occupied == 1);
        CHECK(entropy(dist) == 0.0);
    }
}

TEST_CASE("predict_class: argmax, ties, distribution normalization") {
    ModelBundle m = classification_fixture(2, 2);
    const Tensor x = Tensor::row({0.1, 0.2});

    SUBCASE("constant [0.9, 0.1] output predicts class 0") {
        force_constant_output(m.generator, {0.9, 0.1});
        const auto cp = predict_class(m, x, 32, 3);
        CHECK(cp.predicted_class == 0);
        CHECK(cp.mean_scores[0] == doctest::Approx(0.9).epsilon(1e-12));
    }

    SUBCASE("exact tie goes to the lowest class index") {
        force_constant_output(m.generator, {0.5, 0.5});
        const auto cp = predict_class(m, x, 32, 3);
        CHECK(cp.predicted_class == 0);
    }

    SUBCASE("per-class distributions are normalized over shared [0,1] bins") {
        const auto cp = predict_class(m, x, 128, 3, 32);
        REQUIRE(cp.class_dists.size() == 2);
        for (const auto& d : cp.class_dists) {
            d.validate();
            CHECK(d.bin_edges.front() == 0.0);
            CHECK(d.bin_edges.back() == 1.0);
            CHECK(d.bin_edges == cp.class_dists[0].bin_edges);
        }
    }

    SUBCASE("regression model is rejected") {
        ModelBundle r = regression_fixture(3);
        CHECK_THROWS_AS(predict_class(r, x, 16, 1), std::invalid_argument);
    }
}

TEST_CASE("property: predicted class is invariant to positive rescaling of draws") {
    Rng rng(44);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t k = 2 + rng.index(20);
        const std::size_t q = 2 + rng.index(5);
        Tensor draws(k, q);
        for (std::size_t i = 0; i < draws.size(); ++i) draws[i] = rng.uniform(0.0, 1.0);
        const double factor = rng.uniform(0.01, 50.0);
        Tensor scaled_draws = draws;
        for (std::size_t i = 0; i < scaled_draws.size(); ++i) scaled_draws[i] *= factor;
        CHECK(predicted_class_from_scores(draws) == predicted_class_from_scores(scaled_draws));
    }
}

TEST_CASE("predict_with_uncertainty: regression record is self-consistent") {
    ModelBundle m = regression_fixture(7);
    const Tensor x = Tensor::row({0.5, 0.5});
    PredictOptions opts;
    opts.k = 128;
    opts.bins = 32;

    const auto pred = predict_with_uncertainty(m, x, opts, 11);
    REQUIRE(pred.dists.size() == 1);
    CHECK(pred.point.cols() == 1);
    CHECK_FALSE(pred.predicted_class.has_value());
    CHECK(pred.eta.kind == UncertaintyValue::Kind::kRegressionEntropy);
    CHECK(pred.eta.values.size() == 1);
    CHECK(pred.eta.scalar() >= 0.0);

    // The point estimate must be recomputable from the stored distribution.
    CHECK(pred.point[0] == point_estimate(pred.dists[0], opts.point_method));

    // Distributions use the model's fixed range.
    CHECK(pred.dists[0].bin_edges.front() == m.target_hist_range[0][0]);
    CHECK(pred.dists[0].bin_edges.back() == m.target_hist_range[0][1]);
}

TEST_CASE("predict_with_uncertainty: classification record carries class and eta <= 0") {
    ModelBundle m = classification_fixture(8);
    const Tensor x = Tensor::row({-0.4, 1.0});
    PredictOptions opts;
    opts.k = 64;
    opts.bins = 32;

    const auto pred = predict_with_uncertainty(m, x, opts, 13);
    REQUIRE(pred.predicted_class.has_value());
    CHECK(pred.dists.size() == 3);
    CHECK(pred.eta.kind == UncertaintyValue::Kind::kClassificationNegSymKl);
    CHECK(pred.eta.scalar() <= 0.0);
    CHECK(pred.point.cols() == 3);
}
