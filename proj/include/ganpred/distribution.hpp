#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ganpred {

// Binned probability mass function estimated from Monte Carlo samples.
struct EmpiricalDistribution {
    std::vector<double> bin_edges;  // strictly increasing, length B+1
    std::vector<double> mass;       // length B, sums to 1
    std::size_t sample_count = 0;

    std::size_t bins() const { return mass.size(); }
    double bin_midpoint(std::size_t b) const {
        return 0.5 * (bin_edges[b] + bin_edges[b + 1]);
    }
    void validate() const;
};

// Histogram range selection. Auto pads the sample span by 5% on each side
// (1e-6 when the span is zero). Fixed uses a caller-supplied range shared
// across predictions, which keeps entropies comparable between test points;
// samples outside the range are counted into the boundary bins.
struct AutoRange {};
struct FixedRange {
    double lo;
    double hi;
};
using RangePolicy = std::variant<AutoRange, FixedRange>;

EmpiricalDistribution estimate_density(std::span<const double> samples, std::size_t bins,
                                       const RangePolicy& policy = AutoRange{});

enum class PointMethod { kMode, kMean, kMedian };

// Mode: midpoint of the highest-mass bin, ties resolved to the lowest index.
// Mean/median are computed over bin midpoints weighted by mass.
double point_estimate(const EmpiricalDistribution& dist, PointMethod method);

const char* point_method_name(PointMethod m);
PointMethod point_method_from_name(const std::string& name);

}  // namespace ganpred
