#include "ganpred/prediction.hpp"

#include <stdexcept>

#include "ganpred/rng.hpp"

namespace ganpred {

using ad::Tensor;

PredictionSamples mc_predict(const ModelBundle& model, const Tensor& x, std::size_t k,
                             std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("mc_predict: k must be at least 2");
    if (x.rows() != 1 || x.cols() != model.input_dim()) {
        throw std::invalid_argument("mc_predict: input dim mismatch");
    }

    const Tensor cond_row = model.condition_on_features
                                ? feature_forward(model.discriminator, x)
                                : x;

    // One batched generator pass: k rows of fresh noise, condition repeated.
    Rng rng(seed);
    Tensor noise(k, model.generator.spec.noise_dim);
    for (std::size_t i = 0; i < noise.size(); ++i) noise[i] = rng.normal();
    Tensor cond(k, cond_row.cols());
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < cond_row.cols(); ++j) cond(i, j) = cond_row[j];
    }
    return PredictionSamples{generator_apply(model.generator, noise, cond)};
}

std::size_t predicted_class_from_scores(const Tensor& draws) {
    std::size_t best = 0;
    double best_mean = -1.0;
    for (std::size_t c = 0; c < draws.cols(); ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < draws.rows(); ++i) total += draws(i, c);
        const double mean = total / static_cast<double>(draws.rows());
        if (c == 0 || mean > best_mean) {
            best = c;
            best_mean = mean;
        }
    }
    return best;
}

ClassPrediction predict_class(const ModelBundle& model, const Tensor& x, std::size_t k,
                              std::uint64_t seed, std::size_t bins) {
    if (model.task != Task::kClassification) {
        throw std::invalid_argument("predict_class: not a classification model");
    }
    const PredictionSamples samples = mc_predict(model, x, k, seed);
    const Tensor& draws = samples.draws;

    ClassPrediction out;
    out.predicted_class = predicted_class_from_scores(draws);
    out.mean_scores = Tensor(1, draws.cols());
    std::vector<double> column(draws.rows());
    for (std::size_t c = 0; c < draws.cols(); ++c) {
        double total = 0.0;
        for (std::size_t i = 0; i < draws.rows(); ++i) {
            column[i] = draws(i, c);
            total += column[i];
        }
        out.mean_scores[c] = total / static_cast<double>(draws.rows());
        // Shared fixed bins on [0,1] so cross-class divergences share support.
        out.class_dists.push_back(estimate_density(column, bins, FixedRange{0.0, 1.0}));
    }
    return out;
}

PredictionWithUncertainty predict_with_uncertainty(const ModelBundle& model, const Tensor& x,
                                                   const PredictOptions& options,
                                                   std::uint64_t seed) {
    PredictionWithUncertainty out;
    if (model.task == Task::kClassification) {
        ClassPrediction cp = predict_class(model, x, options.k, seed, options.bins);
        out.point = cp.mean_scores;
        out.dists = std::move(cp.class_dists);
        out.predicted_class = cp.predicted_class;
        out.eta = classification_uncertainty(out.dists, cp.predicted_class);
        return out;
    }

    const PredictionSamples samples = mc_predict(model, x, options.k, seed);
    const Tensor& draws = samples.draws;
    if (model.target_hist_range.size() != draws.cols()) {
        throw std::invalid_argument("predict_with_uncertainty: model lacks target ranges");
    }
    out.point = Tensor(1, draws.cols());
    std::vector<double> column(draws.rows());
    for (std::size_t j = 0; j < draws.cols(); ++j) {
        for (std::size_t i = 0; i < draws.rows(); ++i) column[i] = draws(i, j);
        const auto [lo, hi] = model.target_hist_range[j];
        out.dists.push_back(estimate_density(column, options.bins, FixedRange{lo, hi}));
        out.point[j] = point_estimate(out.dists.back(), options.point_method);
    }
    out.eta = regression_uncertainty(out.dists);
    return out;
}

}  // namespace ganpred
