#include "ganpred/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ganpred/errors.hpp"
#include "ganpred/rng.hpp"

namespace ganpred {

using ad::Tensor;

void PriceSeries::validate() const {
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].close <= 0.0 || !std::isfinite(records[i].close)) {
            throw DataError("price series: nonpositive price at record " + std::to_string(i));
        }
        if (i > 0 && !(records[i - 1].date < records[i].date)) {
            throw DataError("price series: dates not strictly increasing at record " +
                            std::to_string(i));
        }
    }
}

void SupervisedDataset::validate() const {
    if (inputs.rows() != targets.rows()) {
        throw DataError("dataset: input/target row counts differ");
    }
    if (!inputs.all_finite() || !targets.all_finite()) {
        throw DataError("dataset: non-finite values");
    }
}

std::vector<double> prices_to_returns(const PriceSeries& series) {
    if (series.size() < 2) {
        throw DataError("prices_to_returns: need at least 2 records");
    }
    series.validate();
    std::vector<double> returns(series.size() - 1);
    for (std::size_t t = 1; t < series.size(); ++t) {
        returns[t - 1] =
            (series.records[t].close - series.records[t - 1].close) / series.records[t - 1].close;
    }
    return returns;
}

SupervisedDataset make_windows(std::span<const double> returns, std::size_t lookback,
                               std::size_t horizon) {
    if (lookback == 0 || horizon == 0) {
        throw std::invalid_argument("make_windows: lookback and horizon must be positive");
    }
    if (returns.size() < lookback + horizon) {
        throw DataError("make_windows: series too short (" + std::to_string(returns.size()) +
                        " returns for lookback " + std::to_string(lookback) + " + horizon " +
                        std::to_string(horizon) + ")");
    }
    const std::size_t count = returns.size() - lookback - horizon + 1;
    SupervisedDataset out;
    out.inputs = Tensor(count, lookback);
    out.targets = Tensor(count, 1);
    for (std::size_t w = 0; w < count; ++w) {
        const std::size_t t = w + lookback - 1;  // last day visible to the input
        for (std::size_t i = 0; i < lookback; ++i) {
            out.inputs(w, i) = returns[t - lookback + 1 + i];
        }
        double compound = 1.0;
        for (std::size_t h = 1; h <= horizon; ++h) compound *= 1.0 + returns[t + h];
        out.targets(w, 0) = compound - 1.0;
    }
    out.provenance = "make_windows lookback=" + std::to_string(lookback) +
                     " horizon=" + std::to_string(horizon);
    return out;
}

Tensor mix_noise_with(const Tensor& x, const Tensor& noise, double a) {
    if (a < 0.0 || a > 1.0) {
        throw std::invalid_argument("mix_noise: a must be in [0, 1]");
    }
    if (!x.same_shape(noise)) {
        throw std::invalid_argument("mix_noise: noise shape mismatch");
    }
    Tensor out = x;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = (1.0 - a) * x[i] + a * noise[i];
    }
    return out;
}

Tensor mix_noise(const Tensor& x, double a, std::uint64_t seed) {
    Rng rng(seed);
    Tensor noise(x.rows(), x.cols());
    for (std::size_t i = 0; i < noise.size(); ++i) noise[i] = rng.uniform();
    return mix_noise_with(x, noise, a);
}

double heteroscedastic_sigma(double x) { return 0.05 + 0.25 * std::abs(x) / 2.0; }

SupervisedDataset synth_heteroscedastic(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("synth_heteroscedastic: n must be positive");
    Rng rng(seed);
    SupervisedDataset out;
    out.inputs = Tensor(n, 1);
    out.targets = Tensor(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = rng.uniform(-2.0, 2.0);
        out.inputs(i, 0) = x;
        out.targets(i, 0) = std::sin(2.0 * x) + heteroscedastic_sigma(x) * rng.normal();
    }
    out.provenance = "synth_heteroscedastic n=" + std::to_string(n) +
                     " seed=" + std::to_string(seed) +
                     " y=sin(2x)+sigma(x)*eps sigma(x)=0.05+0.25*|x|/2";
    return out;
}

std::pair<double, double> blob_center(std::size_t cls, std::size_t classes) {
    const double angle =
        2.0 * std::numbers::pi * static_cast<double>(cls) / static_cast<double>(classes);
    return {2.0 * std::cos(angle), 2.0 * std::sin(angle)};
}

SupervisedDataset synth_blobs(std::size_t n, std::size_t classes, std::uint64_t seed) {
    if (classes < 2) throw std::invalid_argument("synth_blobs: need at least 2 classes");
    if (n == 0) throw std::invalid_argument("synth_blobs: n must be positive");
    Rng rng(seed);
    SupervisedDataset out;
    out.inputs = Tensor(n, 2);
    out.targets = Tensor(n, classes);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t cls = i % classes;  // round-robin keeps classes balanced
        const auto [cx, cy] = blob_center(cls, classes);
        out.inputs(i, 0) = cx + 0.5 * rng.normal();
        out.inputs(i, 1) = cy + 0.5 * rng.normal();
        out.targets(i, cls) = 1.0;
    }
    out.provenance = "synth_blobs n=" + std::to_string(n) + " q=" + std::to_string(classes) +
                     " seed=" + std::to_string(seed) + " std=0.5 radius=2";
    return out;
}

namespace {

bool looks_like_iso_date(const std::string& s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
        if (s[i] < '0' || s[i] > '9') return false;
    }
    return true;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

PriceSeries load_prices_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open price CSV: " + path);

    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "date,close") {
        throw DataError(path + ":1: expected header 'date,close', got '" + line + "'");
    }

    PriceSeries series;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) {
            throw DataError(path + ":" + std::to_string(line_no) + ": missing comma");
        }
        PriceSeries::Record rec;
        rec.date = line.substr(0, comma);
        if (!looks_like_iso_date(rec.date)) {
            throw DataError(path + ":" + std::to_string(line_no) + ": bad ISO-8601 date '" +
                            rec.date + "'");
        }
        const std::string price_str = line.substr(comma + 1);
        char* end = nullptr;
        rec.close = std::strtod(price_str.c_str(), &end);
        if (end == nullptr || *end != '\0' || price_str.empty()) {
            throw DataError(path + ":" + std::to_string(line_no) + ": bad price '" + price_str +
                            "'");
        }
        if (rec.close <= 0.0 || !std::isfinite(rec.close)) {
            throw DataError(path + ":" + std::to_string(line_no) + ": nonpositive price " +
                            price_str);
        }
        series.records.push_back(std::move(rec));
    }
    if (series.records.empty()) throw DataError(path + ": no data rows");

    std::stable_sort(series.records.begin(), series.records.end(),
                     [](const auto& a, const auto& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < series.records.size(); ++i) {
        if (series.records[i - 1].date == series.records[i].date) {
            throw DataError(path + ": duplicate date " + series.records[i].date);
        }
    }
    return series;
}

std::string dataset_to_string(const SupervisedDataset& dataset) {
    dataset.validate();
    std::ostringstream out;
    out << "# ganpred-dataset v1\n";
    out << "p " << dataset.input_dim() << "\n";
    out << "q " << dataset.target_dim() << "\n";
    out << "n " << dataset.size() << "\n";
    out << "split " << (dataset.split.empty() ? "train" : dataset.split) << "\n";
    out << "provenance " << dataset.provenance << "\n";
    out << "data\n";
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        for (std::size_t j = 0; j < dataset.input_dim(); ++j) {
            out << (j == 0 ? "" : " ") << format_double(dataset.inputs(i, j));
        }
        for (std::size_t j = 0; j < dataset.target_dim(); ++j) {
            out << " " << format_double(dataset.targets(i, j));
        }
        out << "\n";
    }
    return out.str();
}

SupervisedDataset dataset_from_string(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    auto next_line = [&]() {
        if (!std::getline(in, line)) {
            throw DataError("dataset: unexpected end of file at line " + std::to_string(line_no));
        }
        ++line_no;
    };

    next_line();
    if (line != "# ganpred-dataset v1") {
        throw DataError("dataset: bad or missing format header");
    }

    auto read_field = [&](const std::string& key) {
        next_line();
        if (line.rfind(key + " ", 0) != 0) {
            throw DataError("dataset: expected '" + key + "' at line " + std::to_string(line_no));
        }
        return line.substr(key.size() + 1);
    };

    const auto p = static_cast<std::size_t>(std::stoul(read_field("p")));
    const auto q = static_cast<std::size_t>(std::stoul(read_field("q")));
    const auto n = static_cast<std::size_t>(std::stoul(read_field("n")));
    SupervisedDataset out;
    out.split = read_field("split");
    out.provenance = read_field("provenance");
    next_line();
    if (line != "data") throw DataError("dataset: expected 'data' at line " +
                                        std::to_string(line_no));
    if (n == 0 || p == 0 || q == 0) throw DataError("dataset: empty dimensions");

    out.inputs = Tensor(n, p);
    out.targets = Tensor(n, q);
    for (std::size_t i = 0; i < n; ++i) {
        next_line();
        std::istringstream ls(line);
        for (std::size_t j = 0; j < p + q; ++j) {
            double v;
            if (!(ls >> v)) {
                throw DataError("dataset: row " + std::to_string(i) + " at line " +
                                std::to_string(line_no) + " has fewer than " +
                                std::to_string(p + q) + " values");
            }
            if (j < p) {
                out.inputs(i, j) = v;
            } else {
                out.targets(i, j - p) = v;
            }
        }
    }
    out.validate();
    return out;
}

void save_dataset(const SupervisedDataset& dataset, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open dataset file for writing: " + path);
    out << dataset_to_string(dataset);
    if (!out) throw DataError("failed writing dataset file: " + path);
}

SupervisedDataset load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open dataset file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return dataset_from_string(buf.str());
}

}  // namespace ganpred
