#include <doctest.h>

#include <cmath>
#include <vector>

#include "ganpred/autodiff.hpp"
#include "ganpred/errors.hpp"
#include "ganpred/rng.hpp"

using namespace ganpred;
using namespace ganpred::ad;

namespace {

Tensor random_tensor(Rng& rng, std::size_t rows, std::size_t cols, double lo = -1.0,
                     double hi = 1.0) {
    Tensor t(rows, cols);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(lo, hi);
    return t;
}

}  // namespace

TEST_CASE("tensor shape algebra and basic ops") {
    Rng rng(11);
    const Tensor a = random_tensor(rng, 2, 3);
    const Tensor b = random_tensor(rng, 3, 4);
    const Tensor c = matmul(a, b);
    CHECK(c.rows() == 2);
    CHECK(c.cols() == 4);

    // Hand-rolled check of one entry.
    double expect = 0.0;
    for (std::size_t k = 0; k < 3; ++k) expect += a(1, k) * b(k, 2);
    CHECK(c(1, 2) == doctest::Approx(expect).epsilon(1e-15));

    CHECK_THROWS_AS(matmul(a, a), std::invalid_argument);
    CHECK_THROWS_AS(Tensor(0, 3), std::invalid_argument);

    const Tensor t = transpose(a);
    CHECK(t.rows() == 3);
    CHECK(t(2, 1) == a(1, 2));
}

TEST_CASE("forward ops compute the documented values") {
    Tape tape;

    SUBCASE("matmul shape") {
        Var a = tape.leaf(Tensor(2, 3, 1.0));
        Var b = tape.leaf(Tensor(3, 4, 1.0));
        Var c = tape.matmul(a, b);
        CHECK(tape.value(c).shape() == std::array<std::size_t, 2>{2, 4});
        CHECK(tape.value(c)(0, 0) == doctest::Approx(3.0));
    }

    SUBCASE("relu") {
        Var x = tape.leaf(Tensor::row({-1.0, 0.0, 2.0}));
        Var y = tape.relu(x);
        CHECK(tape.value(y)[0] == 0.0);
        CHECK(tape.value(y)[1] == 0.0);
        CHECK(tape.value(y)[2] == 2.0);
    }

    SUBCASE("softmax of equal logits is uniform") {
        Var x = tape.leaf(Tensor::row({0.0, 0.0, 0.0}));
        Var y = tape.softmax(x);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(tape.value(y)[i] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
        }
    }

    SUBCASE("hinge") {
        Var x = tape.leaf(Tensor::row({2.0, 0.0, -2.0}));
        Var y = tape.hinge(x);
        CHECK(tape.value(y)[0] == 0.0);
        CHECK(tape.value(y)[1] == 1.0);
        CHECK(tape.value(y)[2] == 3.0);
    }

    SUBCASE("non-finite results are rejected") {
        Var x = tape.leaf(Tensor::row({1e308}));
        CHECK_THROWS_AS(tape.scale(x, 1e308), NumericError);
    }
}

TEST_CASE("backward: product rule on f = x*y") {
    Tape tape;
    Var x = tape.leaf(Tensor::scalar(2.0));
    Var y = tape.leaf(Tensor::scalar(3.0));
    Var f = tape.mul(x, y);
    auto grads = tape.backward(f);
    CHECK(grads.at(x)[0] == doctest::Approx(3.0));
    CHECK(grads.at(y)[0] == doctest::Approx(2.0));
}

TEST_CASE("backward: relu subgradient is 0 at negatives and at zero") {
    Tape tape;
    Var x = tape.leaf(Tensor::row({-1.0, 2.0}));
    Var f = tape.sum(tape.relu(x));
    auto grads = tape.backward(f);
    CHECK(grads.at(x)[0] == 0.0);
    CHECK(grads.at(x)[1] == 1.0);

    Tape tape2;
    Var z = tape2.leaf(Tensor::row({0.0}));
    auto g2 = tape2.backward(tape2.sum(tape2.relu(z)));
    CHECK(g2.at(z)[0] == 0.0);

    // Strictly positive/negative sides of the kink.
    Tape tape3;
    Var w = tape3.leaf(Tensor::row({-1e-12, 1e-12}));
    auto g3 = tape3.backward(tape3.sum(tape3.relu(w)));
    CHECK(g3.at(w)[0] == 0.0);
    CHECK(g3.at(w)[1] == 1.0);
}

TEST_CASE("backward: non-scalar root is rejected; unreached leaves get zeros") {
    Tape tape;
    Var x = tape.leaf(Tensor::row({1.0, 2.0}));
    Var y = tape.relu(x);
    CHECK_THROWS_AS(tape.backward(y), std::invalid_argument);

    Var unused = tape.leaf(Tensor(2, 2, 5.0));
    Var f = tape.sum(y);
    auto grads = tape.backward(f);
    CHECK(grads.contains(unused));
    CHECK(grads.at(unused)(1, 1) == 0.0);
}

TEST_CASE("backward: two-layer MLP gradients match finite differences") {
    Rng rng(42);
    const std::size_t in = 4, hidden = 5, out = 3;
    std::vector<Tensor> params = {
        random_tensor(rng, in, hidden), random_tensor(rng, 1, hidden),
        random_tensor(rng, hidden, out), random_tensor(rng, 1, out)};
    const Tensor input = random_tensor(rng, 2, in);
    const Tensor target = random_tensor(rng, 2, out);

    auto build = [&](Tape& t, std::span<const Var> p) {
        Var x = t.leaf(input);
        Var h = t.tanh(t.add(t.matmul(x, p[0]), p[1]));
        Var yhat = t.add(t.matmul(h, p[2]), p[3]);
        // Squared error via mul.
        Var diff = t.add(yhat, t.scale(t.leaf(target), -1.0));
        return t.mean(t.mul(diff, diff));
    };

    CHECK(finite_diff_check(build, params, 1e-5) < 1e-4);
}

TEST_CASE("finite_diff_check known-analytic cases") {
    SUBCASE("quadratic loss") {
        std::vector<Tensor> params = {Tensor::row({0.7, -1.3, 2.1})};
        auto build = [](Tape& t, std::span<const Var> p) {
            return t.sum(t.mul(p[0], p[0]));
        };
        CHECK(finite_diff_check(build, params, 1e-5) < 1e-6);
    }

    SUBCASE("linear loss is exact") {
        std::vector<Tensor> params = {Tensor::row({0.25, -0.5})};
        auto build = [](Tape& t, std::span<const Var> p) { return t.sum(p[0]); };
        CHECK(finite_diff_check(build, params, 1e-5) < 1e-8);
    }

    SUBCASE("3-layer tanh MLP with ~50 params") {
        Rng rng(7);
        std::vector<Tensor> params = {
            random_tensor(rng, 2, 4), random_tensor(rng, 1, 4),
            random_tensor(rng, 4, 4), random_tensor(rng, 1, 4),
            random_tensor(rng, 4, 2), random_tensor(rng, 1, 2)};
        const Tensor input = random_tensor(rng, 3, 2);
        auto build = [&](Tape& t, std::span<const Var> p) {
            Var h = t.tanh(t.add(t.matmul(t.leaf(input), p[0]), p[1]));
            h = t.tanh(t.add(t.matmul(h, p[2]), p[3]));
            h = t.tanh(t.add(t.matmul(h, p[4]), p[5]));
            return t.mean(h);
        };
        CHECK(finite_diff_check(build, params, 1e-5) < 1e-4);
    }

    SUBCASE("non-deterministic loss is detected") {
        auto build = [](Tape& t, std::span<const Var> p) {
            static int calls = 0;
            return t.scale(t.sum(p[0]), 1.0 + 0.5 * (calls++));
        };
        std::vector<Tensor> params = {Tensor::row({1.0})};
        CHECK_THROWS_AS(finite_diff_check(build, params, 1e-5), NumericError);
    }
}

TEST_CASE("property: every differentiable op matches finite differences") {
    // Random inputs kept away from relu/hinge kinks by the magnitude floor.
    Rng rng(2024);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t n = 1 + rng.index(3);
        const std::size_t m = 2 + rng.index(4);
        Tensor a = random_tensor(rng, n, m);
        Tensor b = random_tensor(rng, n, m);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (std::abs(a[i]) < 0.05) a[i] = 0.1;
            if (std::abs(1.0 - a[i]) < 0.05) a[i] = 0.8;  // away from hinge kink
            if (std::abs(b[i]) < 0.05) b[i] = -0.1;
        }
        const Tensor w = random_tensor(rng, m, 3);
        const Tensor bias = random_tensor(rng, 1, 3);

        std::vector<Tensor> params = {a, b, w, bias};
        auto build = [&](Tape& t, std::span<const Var> p) {
            Var r = t.relu(p[0]);
            Var lr = t.leaky_relu(p[0], 0.2);
            Var th = t.tanh(p[1]);
            Var mixed = t.add(t.mul(r, th), lr);
            Var lin = t.add(t.matmul(mixed, p[2]), p[3]);
            Var sm = t.softmax(lin);
            Var joined = t.concat(sm, t.hinge(p[0]));
            Var cut = t.slice(joined, 1, 3 + m);
            return t.add(t.mean(cut), t.scale(t.sum(joined), 0.25));
        };
        CHECK(finite_diff_check(build, params, 1e-5) < 1e-4);
    }
}

TEST_CASE("property: gradient of a sum of graphs is the sum of gradients") {
    Rng rng(5);
    const Tensor x0 = random_tensor(rng, 2, 3);
    auto grad_of = [&](bool first, bool second) {
        Tape t;
        Var x = t.leaf(x0);
        std::vector<Var> terms;
        if (first) terms.push_back(t.mean(t.tanh(x)));
        if (second) terms.push_back(t.scale(t.sum(t.mul(x, x)), 0.5));
        Var total = terms[0];
        for (std::size_t i = 1; i < terms.size(); ++i) total = t.add(total, terms[i]);
        return t.backward(total).at(x);
    };
    const Tensor g1 = grad_of(true, false);
    const Tensor g2 = grad_of(false, true);
    const Tensor g12 = grad_of(true, true);
    for (std::size_t i = 0; i < g12.size(); ++i) {
        CHECK(g12[i] == doctest::Approx(g1[i] + g2[i]).epsilon(1e-12));
    }
}

TEST_CASE("property: softmax rows sum to one and shift invariance") {
    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        Tensor logits = random_tensor(rng, 2, 5, -3.0, 3.0);
        Tensor shifted = logits;
        const double c = rng.uniform(-10.0, 10.0);
        for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] += c;

        const Tensor s = softmax_rows(logits);
        const Tensor s2 = softmax_rows(shifted);
        for (std::size_t r = 0; r < s.rows(); ++r) {
            double total = 0.0;
            for (std::size_t j = 0; j < s.cols(); ++j) total += s(r, j);
            CHECK(std::abs(total - 1.0) < 1e-12);
        }
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(s[i] == doctest::Approx(s2[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("add broadcasts a row bias and accumulates its gradient over rows") {
    Tape tape;
    Var x = tape.leaf(Tensor(3, 2, 1.0));
    Var bias = tape.leaf(Tensor::row({0.5, -0.5}));
    Var y = tape.add(x, bias);
    CHECK(tape.value(y)(2, 0) == 1.5);
    CHECK(tape.value(y)(2, 1) == 0.5);
    auto grads = tape.backward(tape.sum(y));
    CHECK(grads.at(bias)[0] == doctest::Approx(3.0));
    CHECK(grads.at(bias)[1] == doctest::Approx(3.0));
}
