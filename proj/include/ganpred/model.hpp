#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "ganpred/networks.hpp"

namespace ganpred {

enum class Task { kRegression, kClassification };

const char* task_name(Task t);
Task task_from_name(const std::string& name);

// Everything needed to run predictions: generator, discriminator (with its
// feature net), how the generator is conditioned, fixed per-target histogram
// ranges captured from the training targets, and the resolved training
// config for provenance.
struct ModelBundle {
    Task task = Task::kRegression;
    Generator generator;
    ProjectionDiscriminator discriminator;
    // false: generator conditions on raw inputs; true: on feature_net output.
    bool condition_on_features = false;
    // Regression only: [lo, hi] histogram range per target dimension.
    std::vector<std::array<double, 2>> target_hist_range;
    // Resolved training config, ordered key/value, echoed into reports.
    std::vector<std::pair<std::string, std::string>> config_snapshot;

    std::size_t input_dim() const { return discriminator.input_dim(); }
    std::size_t target_dim() const { return generator.spec.output_dim; }
    void validate() const;
};

// Versioned flat-text container. 64-bit values are written as hex floats so
// the round trip is bit-exact; the file ends with an FNV-1a checksum over
// every preceding byte.
std::string model_to_string(const ModelBundle& model);
ModelBundle model_from_string(const std::string& text);
void save_model(const ModelBundle& model, const std::string& path);
ModelBundle load_model(const std::string& path);

}  // namespace ganpred
