#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ganpred/tensor.hpp"

namespace ganpred {

// Ordered daily close prices. Dates are ISO-8601 strings, strictly
// increasing; prices strictly positive.
struct PriceSeries {
    struct Record {
        std::string date;
        double close = 0.0;
    };
    std::vector<Record> records;

    std::size_t size() const { return records.size(); }
    void validate() const;
};

struct SupervisedDataset {
    ad::Tensor inputs;   // n x p
    ad::Tensor targets;  // n x q
    std::string split;   // "train" or "test"
    std::string provenance;

    std::size_t size() const { return inputs.rows(); }
    std::size_t input_dim() const { return inputs.cols(); }
    std::size_t target_dim() const { return targets.cols(); }
    void validate() const;
};

// Simple (arithmetic) returns r_t = (p_t - p_{t-1}) / p_{t-1}.
std::vector<double> prices_to_returns(const PriceSeries& series);

// Sliding-window supervision: input row t holds the previous `lookback`
// returns; the target is the compound forward return over the next
// `horizon` days. Inputs and targets never overlap in time.
SupervisedDataset make_windows(std::span<const double> returns, std::size_t lookback = 30,
                               std::size_t horizon = 5);

// Convex mix with fresh uniform noise: (1-a)*x + a*n, n ~ Unif[0,1]^p.
ad::Tensor mix_noise(const ad::Tensor& x, double a, std::uint64_t seed);
// Deterministic kernel used by mix_noise, exposed for direct testing.
ad::Tensor mix_noise_with(const ad::Tensor& x, const ad::Tensor& noise, double a);

// y = sin(2x) + sigma(x) * eps with sigma(x) = 0.05 + 0.25 * |x| / 2,
// x ~ Unif(-2, 2), eps ~ N(0, 1). Ground-truth noise scale per input.
SupervisedDataset synth_heteroscedastic(std::size_t n, std::uint64_t seed);
double heteroscedastic_sigma(double x);

// q Gaussian clusters (std 0.5) at circle-spaced centers (radius 2) in R^2,
// one-hot targets, classes balanced round-robin.
SupervisedDataset synth_blobs(std::size_t n, std::size_t classes, std::uint64_t seed);
std::pair<double, double> blob_center(std::size_t cls, std::size_t classes);

// CSV with header "date,close". Rows are validated (positive price, no
// duplicate dates) and sorted by date.
PriceSeries load_prices_csv(const std::string& path);

// Columnar text container for datasets (header with p, q, split; one row of
// p+q values per record).
std::string dataset_to_string(const SupervisedDataset& dataset);
SupervisedDataset dataset_from_string(const std::string& text);
void save_dataset(const SupervisedDataset& dataset, const std::string& path);
SupervisedDataset load_dataset(const std::string& path);

}  // namespace ganpred
