#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ganpred/distribution.hpp"
#include "ganpred/model.hpp"
#include "ganpred/uncertainty.hpp"

namespace ganpred {

// k generator outputs for one input, one draw per row. Rows differ only in
// the noise vector.
struct PredictionSamples {
    ad::Tensor draws;  // k x q
    std::size_t k() const { return draws.rows(); }
};

struct PredictOptions {
    std::size_t k = 256;
    std::size_t bins = 64;
    PointMethod point_method = PointMethod::kMode;
};

struct ClassPrediction {
    std::size_t predicted_class = 0;                 // argmax of mean scores, ties -> lowest
    ad::Tensor mean_scores;                          // 1 x q
    std::vector<EmpiricalDistribution> class_dists;  // per class, shared [0,1] bins
};

struct PredictionWithUncertainty {
    ad::Tensor point;                           // 1 x q
    std::vector<EmpiricalDistribution> dists;   // per target (regression) or per class
    UncertaintyValue eta;
    std::optional<std::size_t> predicted_class; // classification only
};

// k generator forwards at fixed input with fresh standard-normal noise.
// Deterministic for a given seed.
PredictionSamples mc_predict(const ModelBundle& model, const ad::Tensor& x, std::size_t k,
                             std::uint64_t seed);

// Class index from the per-draw score matrix: argmax of the column means,
// ties resolved to the lowest index.
std::size_t predicted_class_from_scores(const ad::Tensor& draws);

ClassPrediction predict_class(const ModelBundle& model, const ad::Tensor& x, std::size_t k,
                              std::uint64_t seed, std::size_t bins = 64);

// Full prediction record: point estimate, per-target/class distributions and
// the uncertainty value. Regression histograms use the fixed per-target
// ranges stored in the model.
PredictionWithUncertainty predict_with_uncertainty(const ModelBundle& model,
                                                   const ad::Tensor& x,
                                                   const PredictOptions& options,
                                                   std::uint64_t seed);

}  // namespace ganpred
