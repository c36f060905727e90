#include "armae/autoencoder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include "armae/kernels.hpp"
#include "json.hpp"

namespace armae {
namespace {

constexpr std::size_t kLayerCount = 6;

struct ForwardTrace {
    // activations[0] is the input; activations[k+1] = tanh(W_k a_k + b_k)
    std::vector<std::vector<double>> activations;
};

ForwardTrace forward_trace(const AEModel& model, std::span<const double> input) {
    const auto& k = kern::active();
    ForwardTrace t;
    t.activations.reserve(kLayerCount + 1);
    t.activations.emplace_back(input.begin(), input.end());
    for (const auto& layer : model.layers) {
        std::vector<double> z(layer.out);
        k.matvec(layer.weights.data(), t.activations.back().data(),
                 layer.biases.data(), z.data(), layer.out, layer.in);
        for (double& v : z) v = std::tanh(v);
        t.activations.push_back(std::move(z));
    }
    return t;
}

std::uint64_t epoch_shuffle_seed(std::uint64_t base, std::uint64_t epoch) {
    // splitmix64 step keeps per-epoch shuffles decorrelated
    std::uint64_t x = base + 0x9e3779b97f4a7c15ULL * (epoch + 1);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

}  // namespace

AEModel init_model(std::size_t item_count, std::uint64_t seed) {
    if (item_count < 2)
        throw std::invalid_argument("init_model needs item_count >= 2");
    AEModel model;
    model.seed = seed;
    std::mt19937_64 rng(seed);
    const double bound = 1.0 / std::sqrt(static_cast<double>(item_count));
    std::uniform_real_distribution<double> unif(-bound, bound);
    for (std::size_t l = 0; l < kLayerCount; ++l) {
        LayerParams layer;
        layer.in = item_count;
        layer.out = item_count;
        layer.weights.resize(item_count * item_count);
        layer.biases.resize(item_count);
        for (double& w : layer.weights) w = unif(rng);
        for (double& b : layer.biases) b = unif(rng);
        model.layers.push_back(std::move(layer));
    }
    return model;
}

AdamState init_adam(const AEModel& model) {
    AdamState s;
    for (const auto& layer : model.layers) {
        s.weight_moments.push_back({std::vector<double>(layer.weights.size(), 0.0),
                                    std::vector<double>(layer.weights.size(), 0.0)});
        s.bias_moments.push_back({std::vector<double>(layer.biases.size(), 0.0),
                                  std::vector<double>(layer.biases.size(), 0.0)});
    }
    return s;
}

std::vector<double> forward(const AEModel& model, std::span<const double> input) {
    if (input.size() != model.width())
        throw std::invalid_argument("forward: input length != model width");
    return forward_trace(model, input).activations.back();
}

double mse_loss(std::span<const double> output, std::span<const double> target) {
    if (output.size() != target.size())
        throw std::invalid_argument("mse_loss: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < output.size(); ++i) {
        const double d = output[i] - target[i];
        acc += d * d;
    }
    return acc / static_cast<double>(output.size());
}

std::pair<double, Gradients> batch_gradient(
    const AEModel& model, const std::vector<std::vector<double>>& batch) {
    const auto& k = kern::active();
    const std::size_t width = model.width();
    Gradients g;
    for (const auto& layer : model.layers) {
        g.weights.emplace_back(layer.weights.size(), 0.0);
        g.biases.emplace_back(layer.biases.size(), 0.0);
    }

    double loss_sum = 0.0;
    std::vector<double> delta(width), next_delta(width);
    for (const auto& row : batch) {
        if (row.size() != width)
            throw std::invalid_argument("batch_gradient: row length != width");
        ForwardTrace t = forward_trace(model, row);
        const auto& out = t.activations.back();
        loss_sum += mse_loss(out, row);

        // dL/da for the output layer, then walk back through tanh layers
        for (std::size_t j = 0; j < width; ++j)
            delta[j] = 2.0 * (out[j] - row[j]) / static_cast<double>(width);
        for (std::size_t l = kLayerCount; l-- > 0;) {
            const auto& act = t.activations[l + 1];
            for (std::size_t j = 0; j < width; ++j)
                delta[j] *= 1.0 - act[j] * act[j];  // through tanh
            k.ger_acc(g.weights[l].data(), delta.data(),
                      t.activations[l].data(), width, width);
            for (std::size_t j = 0; j < width; ++j) g.biases[l][j] += delta[j];
            if (l > 0) {
                k.matvec_t(model.layers[l].weights.data(), delta.data(),
                           next_delta.data(), width, width);
                std::swap(delta, next_delta);
            }
        }
    }

    const double inv = 1.0 / static_cast<double>(batch.size());
    for (auto& w : g.weights)
        for (double& v : w) v *= inv;
    for (auto& b : g.biases)
        for (double& v : b) v *= inv;
    return {loss_sum * inv, g};
}

double train_epoch(AEModel& model, AdamState& adam, const BinaryMatrix& data,
                   const TrainConfig& cfg, std::uint64_t epoch_index) {
    if (model.width() != data.items())
        throw std::invalid_argument("train_epoch: model width != item count");
    const auto& k = kern::active();
    const std::size_t width = model.width();

    std::vector<std::size_t> order(data.rows());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(epoch_shuffle_seed(cfg.seed, epoch_index));
    std::shuffle(order.begin(), order.end(), rng);

    double loss_sum = 0.0;
    std::vector<std::vector<double>> batch;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
        const std::size_t end = std::min(start + cfg.batch_size, order.size());
        batch.clear();
        for (std::size_t i = start; i < end; ++i) {
            std::vector<double> row(width);
            data.row_values(order[i], row.data());
            batch.push_back(std::move(row));
        }
        auto [loss, grad] = batch_gradient(model, batch);
        loss_sum += loss * static_cast<double>(batch.size());

        adam.step += 1;
        const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(adam.step));
        const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(adam.step));
        for (std::size_t l = 0; l < model.layers.size(); ++l) {
            auto& layer = model.layers[l];
            k.adam_update(layer.weights.data(), adam.weight_moments[l].m.data(),
                          adam.weight_moments[l].v.data(), grad.weights[l].data(),
                          layer.weights.size(), cfg.learning_rate, cfg.adam_beta1,
                          cfg.adam_beta2, cfg.adam_epsilon, bc1, bc2);
            k.adam_update(layer.biases.data(), adam.bias_moments[l].m.data(),
                          adam.bias_moments[l].v.data(), grad.biases[l].data(),
                          layer.biases.size(), cfg.learning_rate, cfg.adam_beta1,
                          cfg.adam_beta2, cfg.adam_epsilon, bc1, bc2);
        }
    }
    return loss_sum / static_cast<double>(data.rows());
}

double dataset_loss(const AEModel& model, const BinaryMatrix& data) {
    const std::size_t width = model.width();
    std::vector<double> row(width);
    double acc = 0.0;
    for (std::size_t r = 0; r < data.rows(); ++r) {
        data.row_values(r, row.data());
        acc += mse_loss(forward(model, row), row);
    }
    return acc / static_cast<double>(data.rows());
}

std::pair<AEModel, std::size_t> train_until_plateau(const BinaryMatrix& data,
                                                    const TrainConfig& cfg) {
    AEModel model = init_model(data.items(), cfg.seed);
    AdamState adam = init_adam(model);
    // loss_0 anchors the first delta so an oversized threshold stops before
    // any update takes effect
    double prev_loss = dataset_loss(model, data);
    for (std::size_t e = 1; e <= cfg.max_epochs; ++e) {
        AEModel snapshot = model;
        const double loss = train_epoch(model, adam, data, cfg, e - 1);
        if (std::abs(prev_loss - loss) < cfg.loss_delta_threshold)
            return {std::move(snapshot), e};
        prev_loss = loss;
    }
    return {std::move(model), cfg.max_epochs};
}

void save_model(std::ostream& out, const AEModel& model) {
    nlohmann::ordered_json j;
    j["seed"] = model.seed;
    auto layers = nlohmann::ordered_json::array();
    for (const auto& layer : model.layers) {
        nlohmann::ordered_json lj;
        lj["in"] = layer.in;
        lj["out"] = layer.out;
        lj["weights"] = layer.weights;
        lj["biases"] = layer.biases;
        layers.push_back(std::move(lj));
    }
    j["layers"] = std::move(layers);
    out << j.dump() << '\n';
}

void save_model(const std::string& path, const AEModel& model) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    save_model(out, model);
}

AEModel load_model(std::istream& in) {
    auto j = nlohmann::json::parse(in);
    AEModel model;
    model.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& lj : j.at("layers")) {
        LayerParams layer;
        layer.in = lj.at("in").get<std::size_t>();
        layer.out = lj.at("out").get<std::size_t>();
        layer.weights = lj.at("weights").get<std::vector<double>>();
        layer.biases = lj.at("biases").get<std::vector<double>>();
        if (layer.weights.size() != layer.in * layer.out ||
            layer.biases.size() != layer.out)
            throw std::runtime_error("model file: inconsistent layer shapes");
        model.layers.push_back(std::move(layer));
    }
    if (model.layers.size() != kLayerCount)
        throw std::runtime_error("model file: expected 6 layers");
    return model;
}

AEModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return load_model(in);
}

}  // namespace armae
