#include "ganpred/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ganpred/errors.hpp"

namespace ganpred {

void EmpiricalDistribution::validate() const {
    if (mass.empty() || bin_edges.size() != mass.size() + 1) {
        throw std::invalid_argument("EmpiricalDistribution: edge/mass length mismatch");
    }
    for (std::size_t i = 0; i + 1 < bin_edges.size(); ++i) {
        if (!(bin_edges[i] < bin_edges[i + 1])) {
            throw std::invalid_argument("EmpiricalDistribution: edges not strictly increasing");
        }
    }
    double total = 0.0;
    for (double m : mass) {
        if (m < 0.0 || !std::isfinite(m)) {
            throw std::invalid_argument("EmpiricalDistribution: negative or non-finite mass");
        }
        total += m;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("EmpiricalDistribution: mass sums to " +
                                    std::to_string(total));
    }
}

EmpiricalDistribution estimate_density(std::span<const double> samples, std::size_t bins,
                                       const RangePolicy& policy) {
    if (samples.size() < 2) {
        throw std::invalid_argument("estimate_density: need at least 2 samples");
    }
    if (bins < 2) {
        throw std::invalid_argument("estimate_density: need at least 2 bins");
    }
    for (double s : samples) {
        if (!std::isfinite(s)) throw NumericError("estimate_density: non-finite sample");
    }

    double lo, hi;
    if (std::holds_alternative<AutoRange>(policy)) {
        const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
        const double span = *mx - *mn;
        const double pad = span > 0.0 ? 0.05 * span : 1e-6;
        lo = *mn - pad;
        hi = *mx + pad;
    } else {
        const FixedRange& r = std::get<FixedRange>(policy);
        if (!(r.lo < r.hi)) {
            throw std::invalid_argument("estimate_density: fixed range must have lo < hi");
        }
        lo = r.lo;
        hi = r.hi;
    }

    EmpiricalDistribution dist;
    dist.sample_count = samples.size();
    dist.bin_edges.resize(bins + 1);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t b = 0; b <= bins; ++b) {
        dist.bin_edges[b] = lo + width * static_cast<double>(b);
    }
    dist.bin_edges.back() = hi;

    dist.mass.assign(bins, 0.0);
    const double weight = 1.0 / static_cast<double>(samples.size());
    for (double s : samples) {
        auto b = static_cast<std::ptrdiff_t>(std::floor((s - lo) / width));
        b = std::clamp<std::ptrdiff_t>(b, 0, static_cast<std::ptrdiff_t>(bins) - 1);
        dist.mass[static_cast<std::size_t>(b)] += weight;
    }
    return dist;
}

double point_estimate(const EmpiricalDistribution& dist, PointMethod method) {
    dist.validate();
    switch (method) {
        case PointMethod::kMode: {
            std::size_t best = 0;
            for (std::size_t b = 1; b < dist.bins(); ++b) {
                if (dist.mass[b] > dist.mass[best]) best = b;
            }
            return dist.bin_midpoint(best);
        }
        case PointMethod::kMean: {
            double acc = 0.0;
            for (std::size_t b = 0; b < dist.bins(); ++b) {
                acc += dist.mass[b] * dist.bin_midpoint(b);
            }
            return acc;
        }
        case PointMethod::kMedian: {
            double cum = 0.0;
            for (std::size_t b = 0; b < dist.bins(); ++b) {
                cum += dist.mass[b];
                if (cum >= 0.5) return dist.bin_midpoint(b);
            }
            return dist.bin_midpoint(dist.bins() - 1);
        }
    }
    throw std::invalid_argument("unknown point method");
}

const char* point_method_name(PointMethod m) {
    switch (m) {
        case PointMethod::kMode: return "mode";
        case PointMethod::kMean: return "mean";
        case PointMethod::kMedian: return "median";
    }
    throw std::invalid_argument("unknown point method");
}

PointMethod point_method_from_name(const std::string& name) {
    if (name == "mode") return PointMethod::kMode;
    if (name == "mean") return PointMethod::kMean;
    if (name == "median") return PointMethod::kMedian;
    throw ConfigError("unknown point method: " + name);
}

}  // namespace ganpred
