#pragma once

// Small fully connected Q-network: ReLU hidden layers, linear output.
// Weights are stored row-major [outputs x inputs].

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "hybridnet/rng.hpp"

namespace hybridnet {

struct DenseLayer {
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  std::vector<double> weights;
  std::vector<double> biases;

  double& w(std::size_t out, std::size_t in) { return weights[out * inputs + in]; }
  double w(std::size_t out, std::size_t in) const { return weights[out * inputs + in]; }
};

struct MlpParams {
  std::vector<DenseLayer> layers;

  // All-zero parameters for a topology such as {4, 32, 32, 32, 15}.
  static MlpParams zeros(std::span<const std::size_t> topology);
  // Each layer uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)].
  static MlpParams uniform_init(std::span<const std::size_t> topology, Rng& rng);

  std::vector<std::size_t> topology() const;
  std::size_t input_size() const { return layers.front().inputs; }
  std::size_t output_size() const { return layers.back().outputs; }
  std::size_t parameter_count() const;

  // Every weight and bias buffer, in layer order (w0, b0, w1, b1, ...).
  std::vector<std::span<double>> tensors();
  std::vector<std::span<const double>> tensors() const;

  bool all_finite() const;
};

struct Transition {
  std::vector<double> state;
  std::size_t action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
};

// Throws ShapeError if the input length does not match the first layer.
std::vector<double> mlp_forward(const MlpParams& params, std::span<const double> input);

// y_j = r_j + gamma max_a Q(s_{j+1}, a) using the same network.
std::vector<double> td_targets(std::span<const Transition> batch, const MlpParams& params, double discount);

// Mean over the batch of 0.5 (y_j - Q(s_j, a_j))^2.
double mse_loss(const MlpParams& params, std::span<const Transition> batch, std::span<const double> targets);

// Gradient of mse_loss with the targets held constant.
MlpParams mse_grad(const MlpParams& params, std::span<const Transition> batch, std::span<const double> targets);

// Loss and gradient in one pass; grad must already have the params' shape.
double mse_loss_and_grad(const MlpParams& params, std::span<const Transition> batch, std::span<const double> targets,
                         MlpParams& grad);

struct AdamParams {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon_hat = 1e-8;
};

struct AdamState {
  MlpParams first_moment;
  MlpParams second_moment;
  std::uint64_t step_count = 0;
  AdamParams hyper;

  static AdamState for_params(const MlpParams& params, AdamParams hyper = {});
};

void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state);

// Layer tensors as CSV, preceded by "# topology" and "# seed" comment lines.
void write_weights_csv(const MlpParams& params, std::uint64_t seed, const std::filesystem::path& path);
MlpParams read_weights_csv(const std::filesystem::path& path, std::uint64_t* seed = nullptr);

}  // namespace hybridnet
