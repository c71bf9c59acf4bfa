#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "ganpred/data.hpp"
#include "ganpred/errors.hpp"
#include "ganpred/rng.hpp"

using namespace ganpred;
using ad::Tensor;

namespace {

PriceSeries series_from(std::initializer_list<std::pair<const char*, double>> rows) {
    PriceSeries s;
    for (const auto& [date, close] : rows) s.records.push_back({date, close});
    return s;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() / "ganpred_test_data";
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const char* name, const std::string& content) const {
        const std::string full = (path / name).string();
        std::ofstream out(full);
        out << content;
        return full;
    }
};

}  // namespace

TEST_CASE("prices_to_returns") {
    CHECK(prices_to_returns(series_from({{"2020-01-01", 100.0}, {"2020-01-02", 110.0}}))[0] ==
          doctest::Approx(0.10).epsilon(1e-15));

    const auto flat = prices_to_returns(
        series_from({{"2020-01-01", 50.0}, {"2020-01-02", 50.0}, {"2020-01-03", 50.0}}));
    for (double r : flat) CHECK(r == 0.0);

    const auto mixed = prices_to_returns(
        series_from({{"2020-01-01", 100.0}, {"2020-01-02", 110.0}, {"2020-01-03", 99.0}}));
    CHECK(mixed[0] == doctest::Approx(0.10));
    CHECK(mixed[1] == doctest::Approx(-0.10));

    CHECK_THROWS_AS(prices_to_returns(series_from({{"2020-01-01", 100.0}})), DataError);
    CHECK_THROWS_AS(
        prices_to_returns(series_from({{"2020-01-01", 100.0}, {"2020-01-02", -3.0}})), DataError);
}

TEST_CASE("property: compounding the returns recovers the final price ratio") {
    Rng rng(21);
    PriceSeries s;
    double price = 100.0;
    for (int day = 0; day < 200; ++day) {
        char date[16];
        std::snprintf(date, sizeof date, "2020-%02d-%02d", 1 + day / 28, 1 + day % 28);
        s.records.push_back({date, price});
        price *= 1.0 + rng.uniform(-0.03, 0.03);
    }
    const auto returns = prices_to_returns(s);
    double compound = 1.0;
    for (double r : returns) compound *= 1.0 + r;
    CHECK(compound == doctest::Approx(s.records.back().close / s.records.front().close)
                          .epsilon(1e-9));
}

TEST_CASE("make_windows: counts, boundaries, leakage") {
    std::vector<double> returns(40, 0.0);

    SUBCASE("n=40 gives 6 windows") {
        const auto ds = make_windows(returns, 30, 5);
        CHECK(ds.size() == 6);
        CHECK(ds.input_dim() == 30);
        CHECK(ds.target_dim() == 1);
    }

    SUBCASE("n=35 gives exactly 1 window") {
        returns.resize(35);
        CHECK(make_windows(returns, 30, 5).size() == 1);
        returns.resize(34);
        CHECK_THROWS_AS(make_windows(returns, 30, 5), DataError);
    }

    SUBCASE("zero returns give zero targets") {
        const auto ds = make_windows(returns, 30, 5);
        for (std::size_t i = 0; i < ds.size(); ++i) CHECK(ds.targets(i, 0) == 0.0);
    }

    SUBCASE("inputs never see target days") {
        // Mark each day with its own index; the last input entry of window w
        // must precede the first day the target compounds over.
        std::vector<double> marked(60);
        for (std::size_t i = 0; i < marked.size(); ++i) marked[i] = static_cast<double>(i);
        const auto ds = make_windows(marked, 10, 3);
        for (std::size_t w = 0; w < ds.size(); ++w) {
            const double last_input_day = ds.inputs(w, 9);
            double compound = 1.0;
            for (std::size_t h = 1; h <= 3; ++h) {
                compound *= 1.0 + marked[static_cast<std::size_t>(last_input_day) + h];
            }
            CHECK(ds.targets(w, 0) == doctest::Approx(compound - 1.0));
        }
    }

    SUBCASE("window targets match a hand compound") {
        std::vector<double> r{0.1, 0.2, -0.1, 0.05, 0.0, 0.02};
        const auto ds = make_windows(r, 2, 3);
        // First window inputs r[0..1], target over r[2..4].
        CHECK(ds.inputs(0, 0) == 0.1);
        CHECK(ds.inputs(0, 1) == 0.2);
        CHECK(ds.targets(0, 0) ==
              doctest::Approx(0.9 * 1.05 * 1.0 - 1.0).epsilon(1e-12));
    }
}

TEST_CASE("mix_noise") {
    const Tensor x = Tensor::row({0.2, 0.8, 0.5});

    SUBCASE("a=0 returns x bitwise") {
        CHECK(mix_noise(x, 0.0, 5) == x);
    }

    SUBCASE("a=1 is pure noise, independent of x") {
        const Tensor other = Tensor::row({0.9, 0.1, 0.0});
        CHECK(mix_noise(x, 1.0, 5) == mix_noise(other, 1.0, 5));
    }

    SUBCASE("hand arithmetic through the kernel") {
        const Tensor noise = Tensor::row({1.0});
        const Tensor in = Tensor::row({0.5});
        CHECK(mix_noise_with(in, noise, 0.2)[0] == doctest::Approx(0.6).epsilon(1e-15));
    }

    SUBCASE("stays in the unit box and is seed-deterministic") {
        Rng rng(9);
        for (int trial = 0; trial < 20; ++trial) {
            Tensor v(1, 8);
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.uniform();
            const double a = rng.uniform();
            const Tensor mixed = mix_noise(v, a, 100 + trial);
            CHECK(mixed == mix_noise(v, a, 100 + trial));
            for (std::size_t i = 0; i < mixed.size(); ++i) {
                CHECK(mixed[i] >= 0.0);
                CHECK(mixed[i] <= 1.0);
            }
        }
    }

    SUBCASE("a out of range") {
        CHECK_THROWS_AS(mix_noise(x, -0.1, 1), std::invalid_argument);
        CHECK_THROWS_AS(mix_noise(x, 1.1, 1), std::invalid_argument);
    }
}

TEST_CASE("synth_heteroscedastic") {
    SUBCASE("deterministic and sigma formula") {
        const auto a = synth_heteroscedastic(100, 4);
        const auto b = synth_heteroscedastic(100, 4);
        CHECK(a.inputs == b.inputs);
        CHECK(a.targets == b.targets);
        CHECK(heteroscedastic_sigma(0.0) == doctest::Approx(0.05));
        CHECK(heteroscedastic_sigma(2.0) == doctest::Approx(0.30));
        CHECK(heteroscedastic_sigma(-2.0) == doctest::Approx(0.30));
    }

    SUBCASE("thin-slab residual std matches sigma(x) within 20%") {
        const auto ds = synth_heteroscedastic(10000, 8);
        for (double x0 : {0.0, 1.0, -1.8}) {
            std::vector<double> residuals;
            for (std::size_t i = 0; i < ds.size(); ++i) {
                const double x = ds.inputs(i, 0);
                if (std::abs(x - x0) < 0.1) {
                    residuals.push_back(ds.targets(i, 0) - std::sin(2.0 * x));
                }
            }
            REQUIRE(residuals.size() > 50);
            double mean = 0.0;
            for (double r : residuals) mean += r;
            mean /= static_cast<double>(residuals.size());
            double var = 0.0;
            for (double r : residuals) var += (r - mean) * (r - mean);
            var /= static_cast<double>(residuals.size() - 1);
            CHECK(std::sqrt(var) ==
                  doctest::Approx(heteroscedastic_sigma(x0)).epsilon(0.20));
        }
    }
}

TEST_CASE("synth_blobs") {
    const auto ds = synth_blobs(300, 3, 5);
    CHECK(ds.size() == 300);
    CHECK(ds.input_dim() == 2);
    CHECK(ds.target_dim() == 3);

    SUBCASE("balanced one-hot classes") {
        std::vector<int> counts(3, 0);
        for (std::size_t i = 0; i < ds.size(); ++i) {
            int ones = 0;
            for (std::size_t c = 0; c < 3; ++c) {
                if (ds.targets(i, c) == 1.0) {
                    ++counts[c];
                    ++ones;
                }
            }
            CHECK(ones == 1);
        }
        for (int c : counts) CHECK(c == 100);
    }

    SUBCASE("center geometry: pairwise distance 2*2*sin(pi/q)") {
        const auto [ax, ay] = blob_center(0, 3);
        const auto [bx, by] = blob_center(1, 3);
        const double dist = std::hypot(ax - bx, ay - by);
        CHECK(dist == doctest::Approx(4.0 * std::sin(std::numbers::pi / 3.0)).epsilon(1e-12));
    }

    SUBCASE("deterministic") {
        CHECK(synth_blobs(60, 3, 9).inputs == synth_blobs(60, 3, 9).inputs);
    }
}

TEST_CASE("load_prices_csv") {
    TempDir tmp;

    SUBCASE("valid two-row file") {
        const auto path =
            tmp.file("ok.csv", "date,close\n2020-01-01,100.5\n2020-01-02,101.25\n");
        const auto series = load_prices_csv(path);
        REQUIRE(series.size() == 2);
        CHECK(series.records[0].date == "2020-01-01");
        CHECK(series.records[1].close == 101.25);
    }

    SUBCASE("out-of-order dates are sorted ascending") {
        const auto path =
            tmp.file("unsorted.csv", "date,close\n2020-01-03,3\n2020-01-01,1\n2020-01-02,2\n");
        const auto series = load_prices_csv(path);
        CHECK(series.records[0].close == 1.0);
        CHECK(series.records[2].close == 3.0);
    }

    SUBCASE("nonpositive price reports the line number") {
        const auto path = tmp.file("neg.csv", "date,close\n2020-01-01,100\n2020-01-02,-1\n");
        CHECK_THROWS_WITH_AS(load_prices_csv(path), doctest::Contains(":3:"), DataError);
    }

    SUBCASE("duplicate dates are rejected") {
        const auto path = tmp.file("dup.csv", "date,close\n2020-01-01,1\n2020-01-01,2\n");
        CHECK_THROWS_AS(load_prices_csv(path), DataError);
    }

    SUBCASE("bad header and missing file") {
        const auto path = tmp.file("hdr.csv", "time,price\n2020-01-01,1\n");
        CHECK_THROWS_AS(load_prices_csv(path), DataError);
        CHECK_THROWS_AS(load_prices_csv((tmp.path / "absent.csv").string()), DataError);
    }
}

TEST_CASE("dataset container round trip") {
    auto ds = synth_blobs(12, 3, 2);
    ds.split = "test";
    const std::string text = dataset_to_string(ds);
    CHECK(text.rfind("# ganpred-dataset v1\n", 0) == 0);

    const auto back = dataset_from_string(text);
    CHECK(back.inputs == ds.inputs);
    CHECK(back.targets == ds.targets);
    CHECK(back.split == "test");
    CHECK(back.provenance == ds.provenance);

    TempDir tmp;
    const std::string path = (tmp.path / "ds.txt").string();
    save_dataset(ds, path);
    CHECK(load_dataset(path).inputs == ds.inputs);

    CHECK_THROWS_AS(dataset_from_string("nonsense"), DataError);
}
