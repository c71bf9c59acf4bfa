#include "ganpred/model.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ganpred/errors.hpp"

namespace ganpred {

using ad::Tensor;

const char* task_name(Task t) {
    return t == Task::kRegression ? "regression" : "classification";
}

Task task_from_name(const std::string& name) {
    if (name == "regression") return Task::kRegression;
    if (name == "classification") return Task::kClassification;
    throw DataError("unknown task name: " + name);
}

void ModelBundle::validate() const {
    generator.trunk.validate();
    discriminator.validate();
    const bool cls = task == Task::kClassification;
    if (discriminator.classification != cls) {
        throw DataError("model: task does not match discriminator form");
    }
    const std::size_t expected_cond =
        condition_on_features ? discriminator.feature_dim() : discriminator.input_dim();
    if (generator.spec.condition_dim != expected_cond) {
        throw DataError("model: generator condition dim inconsistent with conditioning mode");
    }
    if (generator.spec.output_dim != discriminator.label_dim()) {
        throw DataError("model: generator output dim != discriminator label dim");
    }
    if (!cls && target_hist_range.size() != target_dim()) {
        throw DataError("model: missing target histogram ranges");
    }
}

namespace {

constexpr const char* kMagic = "# ganpred-model v1";

std::string hex_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double parse_double(const std::string& token, int line_no) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == nullptr || *end != '\0' || token.empty()) {
        throw DataError("model: bad numeric token '" + token + "' at line " +
                        std::to_string(line_no));
    }
    return v;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

void write_matrix(std::ostringstream& out, const Tensor& m) {
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out << (c == 0 ? "" : " ") << hex_double(m(r, c));
        }
        out << "\n";
    }
}

void write_mlp(std::ostringstream& out, const std::string& name, const MlpParams& mlp) {
    out << "net " << name << " " << mlp.layers.size() << "\n";
    for (const DenseLayer& layer : mlp.layers) {
        out << "layer " << layer.weight.rows() << " " << layer.weight.cols() << " "
            << activation_name(layer.activation) << "\n";
        write_matrix(out, layer.weight);
        write_matrix(out, layer.bias);
    }
}

// Line-oriented reader tracking line numbers for error messages.
class Reader {
public:
    explicit Reader(const std::string& text) : in_(text) {}

    std::vector<std::string> expect_line(const std::string& head) {
        std::vector<std::string> tokens = next_tokens();
        if (tokens.empty() || tokens[0] != head) {
            throw DataError("model: expected '" + head + "' at line " + std::to_string(line_no_));
        }
        tokens.erase(tokens.begin());
        return tokens;
    }

    std::vector<std::string> next_tokens() {
        std::string line;
        if (!std::getline(in_, line)) {
            throw DataError("model: unexpected end of file after line " +
                            std::to_string(line_no_));
        }
        ++line_no_;
        std::vector<std::string> tokens;
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
        return tokens;
    }

    std::string next_raw_line() {
        std::string line;
        if (!std::getline(in_, line)) {
            throw DataError("model: unexpected end of file after line " +
                            std::to_string(line_no_));
        }
        ++line_no_;
        return line;
    }

    int line() const { return line_no_; }

private:
    std::istringstream in_;
    int line_no_ = 0;
};

Tensor read_matrix(Reader& r, std::size_t rows, std::size_t cols) {
    Tensor m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const auto tokens = r.next_tokens();
        if (tokens.size() != cols) {
            throw DataError("model: expected " + std::to_string(cols) + " values at line " +
                            std::to_string(r.line()));
        }
        for (std::size_t j = 0; j < cols; ++j) {
            m(i, j) = parse_double(tokens[j], r.line());
        }
    }
    return m;
}

MlpParams read_mlp(Reader& r, const std::string& name) {
    const auto header = r.expect_line("net");
    if (header.size() != 2 || header[0] != name) {
        throw DataError("model: expected net '" + name + "' at line " + std::to_string(r.line()));
    }
    const auto n_layers = static_cast<std::size_t>(std::stoul(header[1]));
    MlpParams mlp;
    for (std::size_t i = 0; i < n_layers; ++i) {
        const auto ltok = r.expect_line("layer");
        if (ltok.size() != 3) {
            throw DataError("model: malformed layer header at line " + std::to_string(r.line()));
        }
        const auto rows = static_cast<std::size_t>(std::stoul(ltok[0]));
        const auto cols = static_cast<std::size_t>(std::stoul(ltok[1]));
        DenseLayer layer;
        layer.activation = activation_from_name(ltok[2]);
        layer.weight = read_matrix(r, rows, cols);
        layer.bias = read_matrix(r, 1, cols);
        mlp.layers.push_back(std::move(layer));
    }
    return mlp;
}

}  // namespace

std::string model_to_string(const ModelBundle& model) {
    model.validate();
    std::ostringstream out;
    out << kMagic << "\n";
    out << "task " << task_name(model.task) << "\n";
    out << "input_dim " << model.input_dim() << "\n";
    out << "target_dim " << model.target_dim() << "\n";
    out << "noise_dim " << model.generator.spec.noise_dim << "\n";
    out << "condition_dim " << model.generator.spec.condition_dim << "\n";
    out << "feature_dim " << model.discriminator.feature_dim() << "\n";
    out << "condition_on_features " << (model.condition_on_features ? 1 : 0) << "\n";
    out << "target_ranges " << model.target_hist_range.size() << "\n";
    for (std::size_t j = 0; j < model.target_hist_range.size(); ++j) {
        out << "target_range " << j << " " << hex_double(model.target_hist_range[j][0]) << " "
            << hex_double(model.target_hist_range[j][1]) << "\n";
    }
    out << "config " << model.config_snapshot.size() << "\n";
    for (const auto& [key, value] : model.config_snapshot) {
        out << "cfg " << key << " " << value << "\n";
    }
    write_mlp(out, "generator", model.generator.trunk);
    write_mlp(out, "feature_net", model.discriminator.feature_net);
    if (model.task == Task::kClassification) {
        out << "phi_matrix " << model.discriminator.phi_matrix.rows() << " "
            << model.discriminator.phi_matrix.cols() << "\n";
        write_matrix(out, model.discriminator.phi_matrix);
    } else {
        write_mlp(out, "phi_net", model.discriminator.phi_net);
    }
    out << "output_weight " << model.discriminator.output_weight.rows() << "\n";
    write_matrix(out, transpose(model.discriminator.output_weight));

    std::string body = out.str();
    char checksum[32];
    std::snprintf(checksum, sizeof checksum, "%016" PRIx64, fnv1a(body));
    return body + "checksum " + checksum + "\n";
}

ModelBundle model_from_string(const std::string& text) {
    // Verify checksum first: everything before the final "checksum" line.
    const std::size_t mark = text.rfind("checksum ");
    if (mark == std::string::npos) {
        throw DataError("model: missing checksum line");
    }
    const std::string body = text.substr(0, mark);
    std::string recorded = text.substr(mark + 9);
    while (!recorded.empty() && (recorded.back() == '\n' || recorded.back() == '\r')) {
        recorded.pop_back();
    }
    char expect[32];
    std::snprintf(expect, sizeof expect, "%016" PRIx64, fnv1a(body));
    if (recorded != expect) {
        throw DataError("model: checksum mismatch (file corrupted?)");
    }

    Reader r(body);
    if (r.next_raw_line() != kMagic) {
        throw DataError("model: bad or missing format header");
    }

    ModelBundle model;
    model.task = task_from_name(r.expect_line("task").at(0));
    const auto input_dim = std::stoul(r.expect_line("input_dim").at(0));
    const auto target_dim = std::stoul(r.expect_line("target_dim").at(0));
    const auto noise_dim = std::stoul(r.expect_line("noise_dim").at(0));
    const auto condition_dim = std::stoul(r.expect_line("condition_dim").at(0));
    const auto feature_dim = std::stoul(r.expect_line("feature_dim").at(0));
    model.condition_on_features = r.expect_line("condition_on_features").at(0) == "1";

    const auto n_ranges = std::stoul(r.expect_line("target_ranges").at(0));
    for (std::size_t j = 0; j < n_ranges; ++j) {
        const auto tok = r.expect_line("target_range");
        if (tok.size() != 3) throw DataError("model: malformed target_range");
        model.target_hist_range.push_back(
            {parse_double(tok[1], r.line()), parse_double(tok[2], r.line())});
    }

    const auto n_cfg = std::stoul(r.expect_line("config").at(0));
    for (std::size_t i = 0; i < n_cfg; ++i) {
        auto tok = r.expect_line("cfg");
        if (tok.empty()) throw DataError("model: malformed cfg line");
        std::string key = tok[0];
        std::string value;
        for (std::size_t k = 1; k < tok.size(); ++k) {
            if (k > 1) value += ' ';
            value += tok[k];
        }
        model.config_snapshot.emplace_back(std::move(key), std::move(value));
    }

    model.generator.trunk = read_mlp(r, "generator");
    model.generator.spec.noise_dim = noise_dim;
    model.generator.spec.condition_dim = condition_dim;
    model.generator.spec.output_dim = model.generator.trunk.output_dim();
    model.generator.spec.output_activation = model.generator.trunk.layers.back().activation;
    for (std::size_t i = 0; i + 1 < model.generator.trunk.layers.size(); ++i) {
        model.generator.spec.hidden.push_back(model.generator.trunk.layers[i].weight.cols());
    }

    model.discriminator.classification = model.task == Task::kClassification;
    model.discriminator.feature_net = read_mlp(r, "feature_net");
    if (model.task == Task::kClassification) {
        const auto tok = r.expect_line("phi_matrix");
        if (tok.size() != 2) throw DataError("model: malformed phi_matrix header");
        model.discriminator.phi_matrix =
            read_matrix(r, std::stoul(tok[0]), std::stoul(tok[1]));
    } else {
        model.discriminator.phi_net = read_mlp(r, "phi_net");
    }
    const auto wo_len = std::stoul(r.expect_line("output_weight").at(0));
    model.discriminator.output_weight = transpose(read_matrix(r, 1, wo_len));

    if (model.input_dim() != input_dim || model.target_dim() != target_dim ||
        model.discriminator.feature_dim() != feature_dim) {
        throw DataError("model: header dims do not match stored networks");
    }
    model.validate();
    return model;
}

void save_model(const ModelBundle& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open model file for writing: " + path);
    out << model_to_string(model);
    if (!out) throw DataError("failed writing model file: " + path);
}

ModelBundle load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return model_from_string(buf.str());
}

}  // namespace ganpred
