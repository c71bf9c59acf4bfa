#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ganpred/data.hpp"
#include "ganpred/model.hpp"

namespace ganpred {

struct TrainConfig {
    Task task = Task::kRegression;
    std::size_t epochs = 200;
    std::size_t batch_size = 64;
    double lr_gen = 2e-4;
    double lr_disc = 2e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
    std::size_t disc_steps_per_gen_step = 1;
    std::size_t noise_dim = 8;
    std::size_t feature_dim = 16;
    std::vector<std::size_t> gen_hidden = {64, 64};
    std::vector<std::size_t> disc_hidden = {64};
    std::uint64_t seed = 1;
    double divergence_limit = 1e6;

    void validate() const;
    // Ordered key/value snapshot embedded in the model file and reports.
    std::vector<std::pair<std::string, std::string>> snapshot() const;
};

struct EpochRecord {
    std::size_t epoch = 0;
    double d_loss = 0.0;
    double g_loss = 0.0;
    double wall_sec = 0.0;  // in-memory only, never written to report files
};

struct TrainReport {
    std::vector<EpochRecord> epochs;
    std::size_t disc_updates = 0;
    std::size_t gen_updates = 0;
};

struct TrainResult {
    ModelBundle model;
    TrainReport report;
};

// Discriminator hinge loss: mean(max(0, 1 - real)) + mean(max(0, 1 + fake)).
double disc_hinge_loss(std::span<const double> real_scores, std::span<const double> fake_scores);

// Generator loss: -mean(fake scores).
double gen_hinge_loss(std::span<const double> fake_scores);

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Standard Adam with bias correction over a fixed list of parameter slots.
class Adam {
public:
    Adam(AdamConfig config, std::span<ad::Tensor* const> params);

    // Applies one update; grads must align with the construction-order slots.
    void step(std::span<ad::Tensor* const> params, std::span<const ad::Tensor> grads);

    std::int64_t steps() const { return step_count_; }

private:
    AdamConfig config_;
    std::vector<ad::Tensor> first_moment_;
    std::vector<ad::Tensor> second_moment_;
    std::int64_t step_count_ = 0;
};

// Adversarial training: per batch, the discriminator is updated on real
// pairs vs generator fakes (hinge loss), then the generator every
// disc_steps_per_gen_step batches. Deterministic for a given seed.
TrainResult train(const SupervisedDataset& dataset, const TrainConfig& config);

// Emits "epoch d_loss g_loss" lines (plus a format-version header) for the
// report file. No timestamps: byte-identical across re-runs.
std::string train_report_to_string(const TrainReport& report,
                                   const std::vector<std::pair<std::string, std::string>>& cfg);

}  // namespace ganpred
