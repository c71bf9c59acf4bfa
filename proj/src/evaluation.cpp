#include "ganpred/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "ganpred/errors.hpp"
#include "ganpred/rng.hpp"

namespace ganpred {

using ad::Tensor;

namespace {

double mean_of(std::span<const double> v) {
    double total = 0.0;
    for (double x : v) total += x;
    return total / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v, double mean) {
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return acc / static_cast<double>(v.size() - 1);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw std::invalid_argument("pearson: length mismatch");
    if (a.size() < 2) throw std::invalid_argument("pearson: need at least 2 points");
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cov += (a[i] - ma) * (b[i] - mb);
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
    }
    if (va == 0.0 || vb == 0.0) return std::nullopt;
    return cov / std::sqrt(va * vb);
}

double welch_t(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) {
        throw std::invalid_argument("welch_t: each group needs at least 2 points");
    }
    const double ma = mean_of(a);
    const double mb = mean_of(b);
    const double va = sample_variance(a, ma);
    const double vb = sample_variance(b, mb);
    if (va == 0.0 && vb == 0.0) {
        throw DataError("welch_t: zero variance in both groups, statistic undefined");
    }
    return (ma - mb) /
           std::sqrt(va / static_cast<double>(a.size()) + vb / static_cast<double>(b.size()));
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median: empty input");
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return 0.5 * (values[mid - 1] + values[mid]);
}

std::optional<double> uncertainty_error_correlation(
    std::span<const PredictionWithUncertainty> predictions, std::span<const double> targets,
    ErrorKind error_kind) {
    if (predictions.size() != targets.size()) {
        throw std::invalid_argument("uncertainty_error_correlation: length mismatch");
    }
    std::vector<double> etas(predictions.size());
    std::vector<double> errors(predictions.size());
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (predictions[i].eta.kind != UncertaintyValue::Kind::kRegressionEntropy) {
            throw std::invalid_argument(
                "uncertainty_error_correlation: regression predictions required");
        }
        etas[i] = predictions[i].eta.scalar();
        const double err = predictions[i].point[0] - targets[i];
        errors[i] = error_kind == ErrorKind::kAbsolute ? std::abs(err) : err * err;
    }
    return pearson(etas, errors);
}

std::vector<PredictionWithUncertainty> predict_dataset(const ModelBundle& model,
                                                       const SupervisedDataset& dataset,
                                                       const EvalOptions& options,
                                                       std::uint64_t seed) {
    if (dataset.input_dim() != model.input_dim()) {
        throw DataError("predict_dataset: dataset input dim " +
                        std::to_string(dataset.input_dim()) + " != model input dim " +
                        std::to_string(model.input_dim()));
    }
    PredictOptions popts{options.k, options.bins, options.point_method};
    std::vector<PredictionWithUncertainty> out;
    out.reserve(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        Tensor x(1, dataset.input_dim());
        for (std::size_t j = 0; j < dataset.input_dim(); ++j) x[j] = dataset.inputs(i, j);
        out.push_back(predict_with_uncertainty(model, x, popts, mix_seed(seed, i)));
    }
    return out;
}

std::size_t onehot_argmax(const Tensor& targets, std::size_t row) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < targets.cols(); ++c) {
        if (targets(row, c) > targets(row, best)) best = c;
    }
    return best;
}

EvalReport evaluate(const ModelBundle& model, const SupervisedDataset& dataset,
                    const EvalOptions& options, std::uint64_t seed) {
    if (dataset.target_dim() != model.target_dim()) {
        throw DataError("evaluate: dataset target dim != model target dim");
    }
    const auto predictions = predict_dataset(model, dataset, options, seed);

    EvalReport report;
    report.task = model.task;
    report.n = dataset.size();

    if (model.task == Task::kRegression) {
        if (model.target_dim() != 1) {
            throw DataError("evaluate: regression evaluation expects a single target");
        }
        std::vector<double> points(predictions.size());
        std::vector<double> targets(predictions.size());
        for (std::size_t i = 0; i < predictions.size(); ++i) {
            points[i] = predictions[i].point[0];
            targets[i] = dataset.targets(i, 0);
        }
        report.pearson_point_vs_target = pearson(points, targets);
        report.pearson_uncertainty_vs_error =
            uncertainty_error_correlation(predictions, targets, options.error_kind);
        return report;
    }

    std::vector<double> eta_correct;
    std::vector<double> eta_wrong;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const bool correct = *predictions[i].predicted_class == onehot_argmax(dataset.targets, i);
        (correct ? eta_correct : eta_wrong).push_back(predictions[i].eta.scalar());
    }
    report.n_correct = eta_correct.size();
    report.n_wrong = eta_wrong.size();
    report.accuracy = static_cast<double>(eta_correct.size()) /
                      static_cast<double>(predictions.size());
    if (eta_correct.size() >= 2 && eta_wrong.size() >= 2) {
        report.welch_t_wrong_vs_correct = welch_t(eta_wrong, eta_correct);
    }
    return report;
}

std::vector<SweepPoint> noise_sweep(const ModelBundle& model, const SupervisedDataset& dataset,
                                    std::span<const double> a_values, const EvalOptions& options,
                                    std::uint64_t seed) {
    if (model.task != Task::kClassification) {
        throw DataError("noise_sweep: classification model required");
    }
    std::vector<SweepPoint> points;
    for (std::size_t ai = 0; ai < a_values.size(); ++ai) {
        const double a = a_values[ai];
        if (a < 0.0 || a > 1.0) throw ConfigError("noise_sweep: a values must lie in [0, 1]");

        SupervisedDataset noisy = dataset;
        // Noise stream is independent of the prediction stream so a=0
        // reproduces the direct evaluation bit for bit.
        Rng noise_rng(mix_seed(mix_seed(seed, 0x5eed), ai));
        Tensor noise(dataset.inputs.rows(), dataset.inputs.cols());
        for (std::size_t i = 0; i < noise.size(); ++i) noise[i] = noise_rng.uniform();
        noisy.inputs = mix_noise_with(dataset.inputs, noise, a);

        const auto predictions = predict_dataset(model, noisy, options, seed);
        std::size_t correct = 0;
        std::vector<double> etas(predictions.size());
        for (std::size_t i = 0; i < predictions.size(); ++i) {
            etas[i] = predictions[i].eta.scalar();
            if (*predictions[i].predicted_class == onehot_argmax(noisy.targets, i)) ++correct;
        }
        points.push_back({a,
                          static_cast<double>(correct) / static_cast<double>(predictions.size()),
                          median(std::move(etas))});
    }
    return points;
}

std::string eval_report_to_string(
    const EvalReport& report, const std::vector<std::pair<std::string, std::string>>& cfg) {
    std::ostringstream out;
    out << "# ganpred-eval v1\n";
    for (const auto& [key, value] : cfg) out << "# cfg " << key << " = " << value << "\n";
    out << "task " << task_name(report.task) << "\n";
    out << "n " << report.n << "\n";
    auto emit = [&](const char* name, const std::optional<double>& v) {
        out << name << " " << (v.has_value() ? format_double(*v) : "undefined") << "\n";
    };
    if (report.task == Task::kRegression) {
        emit("pearson_point_vs_target", report.pearson_point_vs_target);
        emit("pearson_uncertainty_vs_error", report.pearson_uncertainty_vs_error);
    } else {
        emit("accuracy", report.accuracy);
        emit("welch_t_wrong_vs_correct", report.welch_t_wrong_vs_correct);
        out << "n_correct " << report.n_correct << "\n";
        out << "n_wrong " << report.n_wrong << "\n";
    }
    return out.str();
}

std::string sweep_to_csv(std::span<const SweepPoint> points) {
    std::ostringstream out;
    out << "# ganpred-sweep v1\n";
    out << "a,accuracy,median_eta\n";
    for (const SweepPoint& p : points) {
        out << format_double(p.a) << "," << format_double(p.accuracy) << ","
            << format_double(p.median_eta) << "\n";
    }
    return out.str();
}

}  // namespace ganpred
