#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shapnn/coalition.hpp"
#include "shapnn/data.hpp"
#include "shapnn/game.hpp"

namespace shapnn {

/// Single-hidden-layer feed-forward classifier, double precision.
/// w1 is hidden_dim x input_dim and w2 is output_dim x hidden_dim, both
/// row-major.
struct MlpModel {
    int input_dim = 0;
    int hidden_dim = 0;
    int output_dim = 0;
    std::vector<double> w1;
    std::vector<double> b1;
    std::vector<double> w2;
    std::vector<double> b2;

    bool operator==(const MlpModel&) const = default;
};

struct TrainConfig {
    int epochs = 0;
    double learning_rate = 0.1;
    int batch_size = 32;
    std::uint64_t seed = 0;
};

struct EvalResult {
    double accuracy = 0.0;     // correct / total, exact rational
    double cross_entropy = 0.0;
    int correct = 0;
    int total = 0;
};

struct Gradients {
    std::vector<double> w1;
    std::vector<double> b1;
    std::vector<double> w2;
    std::vector<double> b2;
};

/// Glorot-uniform weights (per-layer bound sqrt(6/(fan_in+fan_out))),
/// zero biases, deterministic for a seed.
MlpModel init_model(int input_dim, int hidden_dim, int output_dim, std::uint64_t seed);

/// Class probabilities for a feature batch, row-major rows x output_dim.
/// Masked hidden neurons contribute exactly 0 to the output layer; passing
/// no mask runs the identical code path with the full coalition.
std::vector<double> forward(const MlpModel& model, const std::vector<double>& features,
                            int rows, const Coalition& mask);
std::vector<double> forward(const MlpModel& model, const std::vector<double>& features, int rows);

/// Mean cross-entropy over a labelled batch (no mask).
double batch_loss(const MlpModel& model, const Dataset& data,
                  const std::vector<int>& batch_rows);

/// Mean-reduced analytic gradient of the cross-entropy over the batch.
Gradients gradient(const MlpModel& model, const Dataset& data,
                   const std::vector<int>& batch_rows);

/// Central-difference gradient of the same loss; training-correctness
/// oracle, independent of the backprop path.
Gradients finite_diff_gradient(const MlpModel& model, const Dataset& data,
                               const std::vector<int>& batch_rows, double step);

/// Mini-batch SGD with seeded shuffling, minimizing mean cross-entropy.
MlpModel train(MlpModel model, const Dataset& data, const TrainConfig& config);

/// Accuracy and cross-entropy under a hidden-neuron mask.
EvalResult evaluate(const MlpModel& model, const Dataset& data, const Coalition& mask);
EvalResult evaluate(const MlpModel& model, const Dataset& data);

/// Euclidean norm of the neuron's incoming weight row (bias excluded).
double weight_norm(const MlpModel& model, int neuron);

/// New model with the given hidden neurons removed; surviving rows of
/// w1/b1 and columns of w2 keep their relative order. The pruned forward
/// pass equals the masked forward pass of the original.
MlpModel prune_neurons(const MlpModel& model, const Coalition& to_remove);

/// Coalitional game over hidden neurons: payoff(S) is the masked accuracy
/// on eval_data minus the empty-coalition accuracy, so payoff(empty) = 0
/// and every payoff lies in [-1, 1]. Hidden activations for eval_data are
/// computed once and shared across payoff calls.
CoalitionalGame as_game(const MlpModel& model, const Dataset& eval_data);

/// JSON serialization; doubles are stored as hex floats so the round trip
/// is bit-exact.
std::string model_to_json(const MlpModel& model);
MlpModel model_from_json(const std::string& text);
void save_model(const MlpModel& model, const std::string& path);
MlpModel load_model(const std::string& path);

} // namespace shapnn
