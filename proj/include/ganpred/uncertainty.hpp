#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ganpred/distribution.hpp"

namespace ganpred {

// Uncertainty of a prediction. Regression: one Shannon entropy per target
// dimension (higher = less certain). Classification: minus the symmetric KL
// divergence between the predicted class's score distribution and the pooled
// other classes (always <= 0; values near 0 = uncertain).
struct UncertaintyValue {
    enum class Kind { kRegressionEntropy, kClassificationNegSymKl };
    Kind kind = Kind::kRegressionEntropy;
    std::vector<double> values;

    // Single-number summary: the only entry for q=1 regression and for
    // classification. Throws for multi-target regression.
    double scalar() const;
};

// Shannon entropy -sum p ln p in nats; zero-mass bins contribute 0.
double entropy(const EmpiricalDistribution& dist);

// Uniform mixture of the non-predicted classes' mass vectors, renormalized.
// All distributions must share bin edges.
EmpiricalDistribution pool_other_classes(std::span<const EmpiricalDistribution> dists,
                                         std::size_t predicted_class);

// D_KL(p||r) + D_KL(r||p) after additive smoothing (eps 1e-9) and
// renormalization of both mass vectors. Requires shared bin edges.
double symmetric_kl(const EmpiricalDistribution& p, const EmpiricalDistribution& r);

UncertaintyValue regression_uncertainty(std::span<const EmpiricalDistribution> per_target);
UncertaintyValue classification_uncertainty(std::span<const EmpiricalDistribution> per_class,
                                            std::size_t predicted_class);

// Dispatcher over a prediction's distributions; predicted_class must be
// present in classification mode.
UncertaintyValue uncertainty(std::span<const EmpiricalDistribution> dists, bool classification,
                             std::optional<std::size_t> predicted_class);

// Conventional baseline: cross-entropy loss -ln(prob of the predicted
// class). A zero probability returns the documented cap 1e9.
double softmax_loss_uncertainty(std::span<const double> class_probs,
                                std::size_t predicted_class);

}  // namespace ganpred
