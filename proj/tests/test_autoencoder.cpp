#include <cmath>
#include <random>
#include <sstream>

#include "armae/autoencoder.hpp"
#include "doctest.h"

using namespace armae;

namespace {

BinaryMatrix random_matrix(std::mt19937_64& rng, std::size_t rows,
                           std::size_t items, double density) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < items; ++i) names.push_back("i" + std::to_string(i));
    BinaryMatrix m(std::move(names), rows);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t i = 0; i < items; ++i)
            if (unif(rng) < density) m.set(r, static_cast<ItemId>(i), true);
    return m;
}

// central finite differences on the mean batch loss
double numeric_grad(AEModel model, const std::vector<std::vector<double>>& batch,
                    std::size_t layer, bool bias, std::size_t index) {
    const double h = 1e-5;
    auto loss_at = [&](double delta) {
        AEModel probe = model;
        auto& p = bias ? probe.layers[layer].biases : probe.layers[layer].weights;
        p[index] += delta;
        double acc = 0.0;
        for (const auto& row : batch) acc += mse_loss(forward(probe, row), row);
        return acc / static_cast<double>(batch.size());
    };
    return (loss_at(h) - loss_at(-h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("init_model shapes and determinism") {
    const AEModel a = init_model(10, 3);
    REQUIRE(a.layers.size() == 6);
    for (const auto& layer : a.layers) {
        CHECK(layer.weights.size() == 100);
        CHECK(layer.biases.size() == 10);
    }
    CHECK(a == init_model(10, 3));
    CHECK(a != init_model(10, 4));
    CHECK_THROWS(init_model(1, 0));
}

TEST_CASE("forward basics") {
    AEModel zero = init_model(4, 0);
    for (auto& layer : zero.layers) {
        std::fill(layer.weights.begin(), layer.weights.end(), 0.0);
        std::fill(layer.biases.begin(), layer.biases.end(), 0.0);
    }
    const std::vector<double> input = {1.0, 0.0, 1.0, 0.0};
    for (double v : forward(zero, input)) CHECK(v == 0.0);

    const AEModel m = init_model(6, 12);
    const std::vector<double> x = {1, 1, 0, 0, 1, 0};
    for (double v : forward(m, x)) {
        CHECK(v > -1.0);
        CHECK(v < 1.0);
    }
    CHECK_THROWS(forward(m, std::vector<double>{1.0, 0.0}));
}

TEST_CASE("forward reduces to a scalar tanh chain on diagonal layers") {
    const std::size_t n = 4;
    const double scale = 0.7;
    AEModel probe;
    for (std::size_t l = 0; l < 6; ++l) {
        LayerParams layer{n, n, std::vector<double>(n * n, 0.0),
                          std::vector<double>(n, 0.0)};
        for (std::size_t i = 0; i < n; ++i) layer.weights[i * n + i] = scale;
        probe.layers.push_back(std::move(layer));
    }
    std::vector<double> input(n, 0.0);
    input[2] = 1.0;
    double expect = 1.0;
    for (int l = 0; l < 6; ++l) expect = std::tanh(scale * expect);
    const auto out = forward(probe, input);
    for (std::size_t i = 0; i < n; ++i) {
        if (i == 2)
            CHECK(out[i] == doctest::Approx(expect).epsilon(1e-12));
        else
            CHECK(out[i] == 0.0);
    }
}

TEST_CASE("mse_loss") {
    CHECK(mse_loss(std::vector<double>{1, 2}, std::vector<double>{1, 2}) == 0.0);
    CHECK(mse_loss(std::vector<double>{0, 0}, std::vector<double>{1, 1}) == 1.0);
    CHECK(mse_loss(std::vector<double>{0.5}, std::vector<double>{0.0}) == 0.25);
    CHECK_THROWS(mse_loss(std::vector<double>{1}, std::vector<double>{1, 2}));
}

TEST_CASE("backprop gradient matches finite differences") {
    std::mt19937_64 rng(77);
    const std::size_t items = 3;
    const AEModel model = init_model(items, 123);
    std::vector<std::vector<double>> batch;
    std::uniform_int_distribution<int> bit(0, 1);
    for (int r = 0; r < 4; ++r) {
        std::vector<double> row(items);
        for (auto& v : row) v = bit(rng);
        batch.push_back(row);
    }
    const auto [loss, grad] = batch_gradient(model, batch);
    CHECK(loss >= 0.0);

    for (std::size_t l = 0; l < 6; ++l) {
        for (std::size_t i = 0; i < grad.weights[l].size(); ++i) {
            const double num = numeric_grad(model, batch, l, false, i);
            const double ana = grad.weights[l][i];
            const double denom = std::max(std::abs(num), 1e-8);
            CAPTURE(l);
            CAPTURE(i);
            CHECK(std::abs(ana - num) / denom < 1e-3);
        }
        for (std::size_t i = 0; i < grad.biases[l].size(); ++i) {
            const double num = numeric_grad(model, batch, l, true, i);
            const double denom = std::max(std::abs(num), 1e-8);
            CHECK(std::abs(grad.biases[l][i] - num) / denom < 1e-3);
        }
    }
}

TEST_CASE("first Adam step has magnitude about lr") {
    // from zero moments: m_hat = g, v_hat = g^2, so the step is
    // lr * g / (|g| + eps) which is lr in magnitude for any g != 0
    AEModel model = init_model(3, 9);
    const AEModel before = model;
    AdamState adam = init_adam(model);
    BinaryMatrix data({"a", "b", "c"}, 2);
    data.set(0, 0, true);
    data.set(1, 1, true);
    TrainConfig cfg;
    cfg.batch_size = 2;  // single batch, single Adam step
    cfg.seed = 1;
    train_epoch(model, adam, data, cfg, 0);
    CHECK(adam.step == 1);
    for (std::size_t l = 0; l < 6; ++l) {
        for (std::size_t i = 0; i < model.layers[l].weights.size(); ++i) {
            const double delta =
                std::abs(model.layers[l].weights[i] - before.layers[l].weights[i]);
            CHECK(delta <= cfg.learning_rate * 1.0001);
        }
    }
}

TEST_CASE("training on identical rows reduces loss") {
    BinaryMatrix data({"a", "b", "c", "d"}, 16);
    for (std::size_t r = 0; r < 16; ++r) {
        data.set(r, 0, true);
        data.set(r, 2, true);
    }
    TrainConfig cfg;
    cfg.seed = 4;
    cfg.batch_size = 16;
    cfg.learning_rate = 1e-2;
    AEModel model = init_model(4, cfg.seed);
    AdamState adam = init_adam(model);
    const double initial = dataset_loss(model, data);
    double loss = initial;
    for (std::size_t e = 0; e < 50; ++e) loss = train_epoch(model, adam, data, cfg, e);
    CHECK(loss < initial);
    CHECK(loss < 0.05);
}

TEST_CASE("train_until_plateau stopping semantics") {
    std::mt19937_64 rng(31);
    const BinaryMatrix data = random_matrix(rng, 60, 5, 0.3);

    TrainConfig huge;
    huge.seed = 8;
    huge.loss_delta_threshold = 1e9;
    const auto [untrained, epochs1] = train_until_plateau(data, huge);
    CHECK(epochs1 == 1);
    AEModel expect = init_model(data.items(), huge.seed);
    CHECK(untrained == expect);

    TrainConfig zero;
    zero.seed = 8;
    zero.loss_delta_threshold = 0.0;
    zero.max_epochs = 7;
    const auto [trained, epochs2] = train_until_plateau(data, zero);
    CHECK(epochs2 == 7);
    CHECK(trained != expect);
}

TEST_CASE("train_until_plateau deterministic per seed") {
    std::mt19937_64 rng(57);
    const BinaryMatrix data = random_matrix(rng, 40, 6, 0.4);
    TrainConfig cfg;
    cfg.seed = 21;
    cfg.max_epochs = 5;
    cfg.loss_delta_threshold = 0.0;
    const auto [m1, e1] = train_until_plateau(data, cfg);
    const auto [m2, e2] = train_until_plateau(data, cfg);
    CHECK(e1 == e2);
    CHECK(m1 == m2);
}

TEST_CASE("model save/load round-trip is lossless") {
    const AEModel m = init_model(5, 77);
    std::stringstream buf;
    save_model(buf, m);
    const AEModel back = load_model(buf);
    CHECK(m == back);
}
