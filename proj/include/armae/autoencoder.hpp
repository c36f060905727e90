#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "armae/dataset.hpp"

namespace armae {

struct LayerParams {
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<double> weights;  // row-major [out x in]
    std::vector<double> biases;   // [out]

    bool operator==(const LayerParams&) const = default;
};

// Six tanh layers (3 encoder + 3 decoder), every layer item_count wide.
struct AEModel {
    std::vector<LayerParams> layers;
    std::uint64_t seed = 0;

    std::size_t width() const { return layers.empty() ? 0 : layers.front().in; }
    bool operator==(const AEModel&) const = default;
};

struct TrainConfig {
    double learning_rate = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::size_t batch_size = 128;
    std::size_t max_epochs = 100;
    double loss_delta_threshold = 0.1;
    std::uint64_t seed = 0;
};

struct AdamState {
    struct Slot {
        std::vector<double> m;
        std::vector<double> v;
    };
    std::vector<Slot> weight_moments;  // per layer
    std::vector<Slot> bias_moments;
    std::uint64_t step = 0;
};

// Gradients of the mean batch loss, same shapes as the model parameters.
struct Gradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> biases;
};

AEModel init_model(std::size_t item_count, std::uint64_t seed);
AdamState init_adam(const AEModel& model);

std::vector<double> forward(const AEModel& model, std::span<const double> input);
double mse_loss(std::span<const double> output, std::span<const double> target);

// Mean loss and parameter gradients for a batch of rows (inputs == targets).
std::pair<double, Gradients> batch_gradient(
    const AEModel& model, const std::vector<std::vector<double>>& batch);

double train_epoch(AEModel& model, AdamState& adam, const BinaryMatrix& data,
                   const TrainConfig& cfg, std::uint64_t epoch_index);

// Mean reconstruction loss of the model over the full dataset, no updates.
double dataset_loss(const AEModel& model, const BinaryMatrix& data);

std::pair<AEModel, std::size_t> train_until_plateau(const BinaryMatrix& data,
                                                    const TrainConfig& cfg);

void save_model(std::ostream& out, const AEModel& model);
void save_model(const std::string& path, const AEModel& model);
AEModel load_model(std::istream& in);
AEModel load_model(const std::string& path);

}  // namespace armae
