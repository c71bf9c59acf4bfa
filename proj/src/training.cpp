#include "ganpred/training.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ganpred/errors.hpp"
#include "ganpred/rng.hpp"

namespace ganpred {

using ad::GradientMap;
using ad::Tape;
using ad::Tensor;
using ad::Var;

void TrainConfig::validate() const {
    if (epochs < 1) throw ConfigError("train config: epochs must be >= 1");
    if (batch_size < 1) throw ConfigError("train config: batch size must be >= 1");
    if (lr_gen <= 0.0 || lr_disc <= 0.0) {
        throw ConfigError("train config: learning rates must be positive");
    }
    if (beta1 < 0.0 || beta1 >= 1.0 || beta2 < 0.0 || beta2 >= 1.0) {
        throw ConfigError("train config: betas must lie in [0, 1)");
    }
    if (adam_eps <= 0.0) throw ConfigError("train config: adam eps must be positive");
    if (disc_steps_per_gen_step < 1) {
        throw ConfigError("train config: disc steps per gen step must be >= 1");
    }
    if (noise_dim == 0 || feature_dim == 0) {
        throw ConfigError("train config: noise and feature dims must be positive");
    }
}

std::vector<std::pair<std::string, std::string>> TrainConfig::snapshot() const {
    auto fmt = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    auto dims = [](const std::vector<std::size_t>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(v[i]);
        }
        return s;
    };
    return {
        {"task", task_name(task)},
        {"epochs", std::to_string(epochs)},
        {"batch_size", std::to_string(batch_size)},
        {"lr_gen", fmt(lr_gen)},
        {"lr_disc", fmt(lr_disc)},
        {"beta1", fmt(beta1)},
        {"beta2", fmt(beta2)},
        {"adam_eps", fmt(adam_eps)},
        {"disc_steps_per_gen_step", std::to_string(disc_steps_per_gen_step)},
        {"noise_dim", std::to_string(noise_dim)},
        {"feature_dim", std::to_string(feature_dim)},
        {"gen_hidden", dims(gen_hidden)},
        {"disc_hidden", dims(disc_hidden)},
        {"seed", std::to_string(seed)},
    };
}

double disc_hinge_loss(std::span<const double> real_scores,
                       std::span<const double> fake_scores) {
    if (real_scores.empty() || fake_scores.empty()) {
        throw std::invalid_argument("disc_hinge_loss: empty score vector");
    }
    double real_term = 0.0;
    for (double s : real_scores) real_term += std::max(0.0, 1.0 - s);
    double fake_term = 0.0;
    for (double s : fake_scores) fake_term += std::max(0.0, 1.0 + s);
    return real_term / static_cast<double>(real_scores.size()) +
           fake_term / static_cast<double>(fake_scores.size());
}

double gen_hinge_loss(std::span<const double> fake_scores) {
    if (fake_scores.empty()) {
        throw std::invalid_argument("gen_hinge_loss: empty score vector");
    }
    double total = 0.0;
    for (double s : fake_scores) total += s;
    return -total / static_cast<double>(fake_scores.size());
}

Adam::Adam(AdamConfig config, std::span<ad::Tensor* const> params) : config_(config) {
    first_moment_.reserve(params.size());
    second_moment_.reserve(params.size());
    for (const Tensor* p : params) {
        first_moment_.emplace_back(p->rows(), p->cols());
        second_moment_.emplace_back(p->rows(), p->cols());
    }
}

void Adam::step(std::span<ad::Tensor* const> params, std::span<const ad::Tensor> grads) {
    if (params.size() != first_moment_.size() || grads.size() != first_moment_.size()) {
        throw std::invalid_argument("adam: parameter/gradient count mismatch");
    }
    ++step_count_;
    const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_count_));
    const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_count_));
    for (std::size_t p = 0; p < params.size(); ++p) {
        Tensor& param = *params[p];
        const Tensor& grad = grads[p];
        if (!param.same_shape(grad)) {
            throw std::invalid_argument("adam: gradient shape mismatch at slot " +
                                        std::to_string(p));
        }
        if (!grad.all_finite()) {
            throw NumericError("adam: non-finite gradient at slot " + std::to_string(p));
        }
        Tensor& m = first_moment_[p];
        Tensor& v = second_moment_[p];
        for (std::size_t i = 0; i < param.size(); ++i) {
            m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * grad[i];
            v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * grad[i] * grad[i];
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            param[i] -= config_.lr * m_hat / (std::sqrt(v_hat) + config_.eps);
        }
    }
}

namespace {

struct Batch {
    Tensor inputs;   // b x p
    Tensor targets;  // b x q
};

Batch gather(const SupervisedDataset& data, std::span<const std::size_t> rows) {
    Batch b{Tensor(rows.size(), data.input_dim()), Tensor(rows.size(), data.target_dim())};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < data.input_dim(); ++j) {
            b.inputs(i, j) = data.inputs(rows[i], j);
        }
        for (std::size_t j = 0; j < data.target_dim(); ++j) {
            b.targets(i, j) = data.targets(rows[i], j);
        }
    }
    return b;
}

Tensor draw_noise(Rng& rng, std::size_t rows, std::size_t dim) {
    Tensor z(rows, dim);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = rng.normal();
    return z;
}

void check_divergence(double loss, double limit, std::size_t epoch, const char* which) {
    if (!std::isfinite(loss) || std::abs(loss) > limit) {
        throw NumericError(std::string("training diverged: ") + which + " loss " +
                           std::to_string(loss) + " at epoch " + std::to_string(epoch));
    }
}

std::vector<Tensor> collect_grads(const GradientMap& grads, std::span<const Var> vars) {
    std::vector<Tensor> out;
    out.reserve(vars.size());
    for (Var v : vars) out.push_back(grads.at(v));
    return out;
}

void require_one_hot_targets(const SupervisedDataset& data) {
    for (std::size_t i = 0; i < data.size(); ++i) {
        std::size_t ones = 0;
        for (std::size_t j = 0; j < data.target_dim(); ++j) {
            const double v = data.targets(i, j);
            if (v == 1.0) {
                ++ones;
            } else if (v != 0.0) {
                throw DataError("classification training: target row " + std::to_string(i) +
                                " is not one-hot");
            }
        }
        if (ones != 1) {
            throw DataError("classification training: target row " + std::to_string(i) +
                            " is not one-hot");
        }
    }
}

}  // namespace

TrainResult train(const SupervisedDataset& dataset, const TrainConfig& config) {
    config.validate();
    dataset.validate();
    if (dataset.size() == 0) throw DataError("train: empty dataset");
    const bool classification = config.task == Task::kClassification;
    if (classification) {
        if (dataset.target_dim() < 2) {
            throw DataError("train: classification needs at least 2 target columns");
        }
        require_one_hot_targets(dataset);
    }

    const std::size_t p = dataset.input_dim();
    const std::size_t q = dataset.target_dim();

    TrainResult result;
    ModelBundle& model = result.model;
    model.task = config.task;
    model.condition_on_features = classification;

    DiscriminatorSpec disc_spec;
    disc_spec.classification = classification;
    disc_spec.input_dim = p;
    disc_spec.label_dim = q;
    disc_spec.feature_dim = config.feature_dim;
    disc_spec.hidden = config.disc_hidden;
    model.discriminator = init_discriminator(disc_spec, mix_seed(config.seed, 2));

    GeneratorSpec gen_spec;
    gen_spec.noise_dim = config.noise_dim;
    gen_spec.condition_dim = classification ? config.feature_dim : p;
    gen_spec.output_dim = q;
    gen_spec.hidden = config.gen_hidden;
    gen_spec.output_activation =
        classification ? Activation::kSoftmax : Activation::kIdentity;
    model.generator = init_generator(gen_spec, mix_seed(config.seed, 1));

    // Fixed histogram ranges per target, captured from the training targets
    // so entropies are comparable across predictions.
    if (!classification) {
        for (std::size_t j = 0; j < q; ++j) {
            double lo = dataset.targets(0, j);
            double hi = lo;
            for (std::size_t i = 1; i < dataset.size(); ++i) {
                lo = std::min(lo, dataset.targets(i, j));
                hi = std::max(hi, dataset.targets(i, j));
            }
            const double span = hi - lo;
            const double pad = span > 0.0 ? 0.05 * span : 1e-6;
            model.target_hist_range.push_back({lo - pad, hi + pad});
        }
    }
    model.config_snapshot = config.snapshot();

    const std::vector<Tensor*> gen_slots = generator_params(model.generator);
    const std::vector<Tensor*> disc_slots = discriminator_params(model.discriminator);
    Adam gen_opt({config.lr_gen, config.beta1, config.beta2, config.adam_eps}, gen_slots);
    Adam disc_opt({config.lr_disc, config.beta1, config.beta2, config.adam_eps}, disc_slots);

    Rng noise_rng(mix_seed(config.seed, 3));

    std::vector<std::size_t> order(dataset.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    TrainReport& report = result.report;
    std::size_t batches_since_gen = 0;
    double last_g_loss = 0.0;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        Rng shuffle_rng(mix_seed(config.seed, 1000 + epoch));
        shuffle_rng.shuffle(order);

        double d_loss_sum = 0.0;
        std::size_t d_steps = 0;
        double g_loss_sum = 0.0;
        std::size_t g_steps = 0;

        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t len = std::min(config.batch_size, order.size() - start);
            const Batch batch = gather(dataset, std::span(order).subspan(start, len));

            // Condition for the generator; constant w.r.t. both updates.
            const Tensor condition =
                classification ? feature_forward(model.discriminator, batch.inputs)
                               : batch.inputs;

            // --- Discriminator update ---
            {
                const Tensor fakes = generator_apply(model.generator,
                                                     draw_noise(noise_rng, len, config.noise_dim),
                                                     condition);
                Tape tape;
                DiscriminatorVars dvars = discriminator_leaves(tape, model.discriminator);
                Var features = mlp_forward(tape, model.discriminator.feature_net,
                                           dvars.feature_net, tape.leaf(batch.inputs));
                Var real_scores =
                    projection_scores(tape, model.discriminator, dvars, features,
                                      tape.leaf(batch.targets));
                Var fake_scores =
                    projection_scores(tape, model.discriminator, dvars, features,
                                      tape.leaf(fakes));
                Var loss = tape.add(tape.mean(tape.hinge(real_scores)),
                                    tape.mean(tape.hinge(tape.scale(fake_scores, -1.0))));
                const double loss_value = tape.scalar_value(loss);
                check_divergence(loss_value, config.divergence_limit, epoch, "discriminator");

                const GradientMap grads = tape.backward(loss);
                const std::vector<Var> dparam_vars =
                    discriminator_param_vars(model.discriminator, dvars);
                disc_opt.step(disc_slots, collect_grads(grads, dparam_vars));
                d_loss_sum += loss_value;
                ++d_steps;
                ++report.disc_updates;
            }

            // --- Generator update every disc_steps_per_gen_step batches ---
            if (++batches_since_gen >= config.disc_steps_per_gen_step) {
                batches_since_gen = 0;
                Tape tape;
                MlpVars gvars = mlp_leaves(tape, model.generator.trunk);
                Var z = tape.leaf(draw_noise(noise_rng, len, config.noise_dim));
                Var cond = tape.leaf(condition);
                Var fakes = mlp_forward(tape, model.generator.trunk, gvars,
                                        tape.concat(z, cond));
                // Discriminator params enter as leaves; their gradients are
                // computed but not applied.
                DiscriminatorVars dvars = discriminator_leaves(tape, model.discriminator);
                Var features = tape.leaf(feature_forward(model.discriminator, batch.inputs));
                Var fake_scores =
                    projection_scores(tape, model.discriminator, dvars, features, fakes);
                Var loss = tape.scale(tape.mean(fake_scores), -1.0);
                const double loss_value = tape.scalar_value(loss);
                check_divergence(loss_value, config.divergence_limit, epoch, "generator");

                const GradientMap grads = tape.backward(loss);
                gen_opt.step(gen_slots, collect_grads(grads, generator_param_vars(gvars)));
                g_loss_sum += loss_value;
                ++g_steps;
                ++report.gen_updates;
            }
        }

        EpochRecord rec;
        rec.epoch = epoch;
        rec.d_loss = d_steps > 0 ? d_loss_sum / static_cast<double>(d_steps) : 0.0;
        rec.g_loss = g_steps > 0 ? g_loss_sum / static_cast<double>(g_steps) : last_g_loss;
        last_g_loss = rec.g_loss;
        rec.wall_sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.epochs.push_back(rec);
    }

    model.validate();
    return result;
}

std::string train_report_to_string(
    const TrainReport& report, const std::vector<std::pair<std::string, std::string>>& cfg) {
    std::ostringstream out;
    out << "# ganpred-train-report v1\n";
    for (const auto& [key, value] : cfg) out << "# cfg " << key << " = " << value << "\n";
    out << "# columns: epoch d_loss g_loss\n";
    char buf[96];
    for (const EpochRecord& rec : report.epochs) {
        std::snprintf(buf, sizeof buf, "%zu %.17g %.17g\n", rec.epoch, rec.d_loss, rec.g_loss);
        out << buf;
    }
    return out.str();
}

}  // namespace ganpred
