#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ganpred/data.hpp"
#include "ganpred/prediction.hpp"

namespace ganpred {

// Pearson correlation. nullopt when either input has zero variance
// (undefined, never coerced to 0).
std::optional<double> pearson(std::span<const double> a, std::span<const double> b);

// Welch's unequal-variance t-statistic for mean(a) - mean(b).
double welch_t(std::span<const double> a, std::span<const double> b);

double median(std::vector<double> values);

enum class ErrorKind { kAbsolute, kSquared };

// Correlation between the uncertainty values and the per-point prediction
// error, single-target regression only.
std::optional<double> uncertainty_error_correlation(
    std::span<const PredictionWithUncertainty> predictions, std::span<const double> targets,
    ErrorKind error_kind = ErrorKind::kAbsolute);

struct EvalReport {
    Task task = Task::kRegression;
    std::size_t n = 0;
    // Regression columns.
    std::optional<double> pearson_point_vs_target;
    std::optional<double> pearson_uncertainty_vs_error;
    // Classification columns.
    std::optional<double> accuracy;
    std::optional<double> welch_t_wrong_vs_correct;
    std::size_t n_correct = 0;
    std::size_t n_wrong = 0;
};

struct EvalOptions {
    std::size_t k = 256;
    std::size_t bins = 64;
    PointMethod point_method = PointMethod::kMode;
    ErrorKind error_kind = ErrorKind::kAbsolute;
};

// Row i of the dataset is predicted with seed mix_seed(seed, i); every
// command that scores a dataset uses the same derivation so results agree
// across commands.
std::vector<PredictionWithUncertainty> predict_dataset(const ModelBundle& model,
                                                       const SupervisedDataset& dataset,
                                                       const EvalOptions& options,
                                                       std::uint64_t seed);

EvalReport evaluate(const ModelBundle& model, const SupervisedDataset& dataset,
                    const EvalOptions& options, std::uint64_t seed);

// One-hot target row -> class index.
std::size_t onehot_argmax(const ad::Tensor& targets, std::size_t row);

struct SweepPoint {
    double a = 0.0;
    double accuracy = 0.0;
    double median_eta = 0.0;
};

// For each mix level a: blend every test input with uniform noise, then
// compute accuracy and the median uncertainty. a=0 reproduces the plain
// evaluation exactly (same per-row prediction seeds).
std::vector<SweepPoint> noise_sweep(const ModelBundle& model, const SupervisedDataset& dataset,
                                    std::span<const double> a_values, const EvalOptions& options,
                                    std::uint64_t seed);

std::string eval_report_to_string(const EvalReport& report,
                                  const std::vector<std::pair<std::string, std::string>>& cfg);
std::string sweep_to_csv(std::span<const SweepPoint> points);

}  // namespace ganpred
