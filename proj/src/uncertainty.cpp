#include "ganpred/uncertainty.hpp"

#include <cmath>
#include <stdexcept>

#include "ganpred/errors.hpp"

namespace ganpred {

namespace {

constexpr double kSmoothingEps = 1e-9;
constexpr double kZeroProbCap = 1e9;

void require_shared_edges(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
    if (a.bin_edges != b.bin_edges) {
        throw std::invalid_argument("distributions do not share bin edges");
    }
}

std::vector<double> smoothed(const std::vector<double>& mass) {
    std::vector<double> out(mass.size());
    double total = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i) total += mass[i] + kSmoothingEps;
    for (std::size_t i = 0; i < mass.size(); ++i) out[i] = (mass[i] + kSmoothingEps) / total;
    return out;
}

}  // namespace

double UncertaintyValue::scalar() const {
    if (values.size() != 1) {
        throw std::invalid_argument("UncertaintyValue: no single-number summary for " +
                                    std::to_string(values.size()) + " targets");
    }
    return values[0];
}

double entropy(const EmpiricalDistribution& dist) {
    dist.validate();
    double h = 0.0;
    for (double p : dist.mass) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

EmpiricalDistribution pool_other_classes(std::span<const EmpiricalDistribution> dists,
                                         std::size_t predicted_class) {
    if (dists.size() < 2) {
        throw std::invalid_argument("pool_other_classes: need at least 2 classes");
    }
    if (predicted_class >= dists.size()) {
        throw std::invalid_argument("pool_other_classes: predicted class out of range");
    }
    for (const auto& d : dists) require_shared_edges(dists[0], d);

    EmpiricalDistribution pooled;
    pooled.bin_edges = dists[0].bin_edges;
    pooled.mass.assign(dists[0].mass.size(), 0.0);
    for (std::size_t c = 0; c < dists.size(); ++c) {
        if (c == predicted_class) continue;
        pooled.sample_count += dists[c].sample_count;
        for (std::size_t b = 0; b < pooled.mass.size(); ++b) {
            pooled.mass[b] += dists[c].mass[b];
        }
    }
    double total = 0.0;
    for (double m : pooled.mass) total += m;
    for (double& m : pooled.mass) m /= total;
    return pooled;
}

double symmetric_kl(const EmpiricalDistribution& p, const EmpiricalDistribution& r) {
    p.validate();
    r.validate();
    require_shared_edges(p, r);
    const std::vector<double> ps = smoothed(p.mass);
    const std::vector<double> rs = smoothed(r.mass);
    double d = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        // One commutative expression per bin keeps the result exactly
        // symmetric in (p, r).
        d += ps[i] * std::log(ps[i] / rs[i]) + rs[i] * std::log(rs[i] / ps[i]);
    }
    return d;
}

UncertaintyValue regression_uncertainty(std::span<const EmpiricalDistribution> per_target) {
    if (per_target.empty()) {
        throw std::invalid_argument("regression_uncertainty: no distributions");
    }
    UncertaintyValue eta;
    eta.kind = UncertaintyValue::Kind::kRegressionEntropy;
    for (const auto& d : per_target) eta.values.push_back(entropy(d));
    return eta;
}

UncertaintyValue classification_uncertainty(std::span<const EmpiricalDistribution> per_class,
                                            std::size_t predicted_class) {
    const EmpiricalDistribution pooled = pool_other_classes(per_class, predicted_class);
    UncertaintyValue eta;
    eta.kind = UncertaintyValue::Kind::kClassificationNegSymKl;
    eta.values = {-symmetric_kl(per_class[predicted_class], pooled)};
    return eta;
}

UncertaintyValue uncertainty(std::span<const EmpiricalDistribution> dists, bool classification,
                             std::optional<std::size_t> predicted_class) {
    if (!classification) return regression_uncertainty(dists);
    if (!predicted_class.has_value()) {
        throw std::invalid_argument("uncertainty: classification requires the predicted class");
    }
    return classification_uncertainty(dists, *predicted_class);
}

double softmax_loss_uncertainty(std::span<const double> class_probs,
                                std::size_t predicted_class) {
    if (predicted_class >= class_probs.size()) {
        throw std::invalid_argument("softmax_loss_uncertainty: class out of range");
    }
    double total = 0.0;
    for (double p : class_probs) {
        if (p < 0.0 || !std::isfinite(p)) {
            throw std::invalid_argument("softmax_loss_uncertainty: invalid probability vector");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-6) {
        throw std::invalid_argument("softmax_loss_uncertainty: probabilities do not sum to 1");
    }
    const double p = class_probs[predicted_class];
    if (p <= 0.0) return kZeroProbCap;
    return -std::log(p);
}

}  // namespace ganpred
