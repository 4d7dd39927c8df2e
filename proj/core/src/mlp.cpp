#include "hybridnet/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "hybridnet/errors.hpp"

namespace hybridnet {

namespace {

void check_topology(std::span<const std::size_t> topology) {
  if (topology.size() < 2) throw ShapeError("MLP topology needs an input and an output layer");
  for (std::size_t n : topology)
    if (n == 0) throw ShapeError("MLP layer widths must be positive");
}

// Per-sample activations kept for backpropagation. acts[0] is the input,
// acts[i+1] the output of layer i (post-ReLU for hidden layers).
struct ForwardTrace {
  std::vector<std::vector<double>> acts;

  explicit ForwardTrace(const MlpParams& p) {
    acts.resize(p.layers.size() + 1);
    acts[0].resize(p.input_size());
    for (std::size_t i = 0; i < p.layers.size(); ++i) acts[i + 1].resize(p.layers[i].outputs);
  }
};

void forward_into(const MlpParams& p, std::span<const double> input, ForwardTrace& trace) {
  if (input.size() != p.input_size())
    throw ShapeError("MLP input has length " + std::to_string(input.size()) + ", expected " +
                     std::to_string(p.input_size()));
  std::copy(input.begin(), input.end(), trace.acts[0].begin());
  const std::size_t last = p.layers.size() - 1;
  for (std::size_t i = 0; i < p.layers.size(); ++i) {
    const DenseLayer& layer = p.layers[i];
    const double* x = trace.acts[i].data();
    double* y = trace.acts[i + 1].data();
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      const double* w = layer.weights.data() + o * layer.inputs;
      double z = layer.biases[o];
      for (std::size_t k = 0; k < layer.inputs; ++k) z += w[k] * x[k];
      y[o] = (i == last || z > 0.0) ? z : 0.0;
    }
  }
}

void check_batch(const MlpParams& p, std::span<const Transition> batch, std::span<const double> targets) {
  if (batch.empty()) throw std::invalid_argument("empty minibatch");
  if (targets.size() != batch.size()) throw ShapeError("targets not aligned with minibatch");
  for (const auto& t : batch)
    if (t.action >= p.output_size()) throw ShapeError("transition action outside the network's output range");
}

void zero(MlpParams& p) {
  for (auto& layer : p.layers) {
    std::fill(layer.weights.begin(), layer.weights.end(), 0.0);
    std::fill(layer.biases.begin(), layer.biases.end(), 0.0);
  }
}

}  // namespace

MlpParams MlpParams::zeros(std::span<const std::size_t> topology) {
  check_topology(topology);
  MlpParams p;
  for (std::size_t i = 0; i + 1 < topology.size(); ++i) {
    DenseLayer layer;
    layer.inputs = topology[i];
    layer.outputs = topology[i + 1];
    layer.weights.assign(layer.inputs * layer.outputs, 0.0);
    layer.biases.assign(layer.outputs, 0.0);
    p.layers.push_back(std::move(layer));
  }
  return p;
}

MlpParams MlpParams::uniform_init(std::span<const std::size_t> topology, Rng& rng) {
  MlpParams p = zeros(topology);
  for (auto& layer : p.layers) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(layer.inputs));
    for (double& w : layer.weights) w = (2.0 * uniform01(rng) - 1.0) * bound;
    for (double& b : layer.biases) b = (2.0 * uniform01(rng) - 1.0) * bound;
  }
  return p;
}

std::vector<std::size_t> MlpParams::topology() const {
  std::vector<std::size_t> t;
  if (layers.empty()) return t;
  t.push_back(layers.front().inputs);
  for (const auto& layer : layers) t.push_back(layer.outputs);
  return t;
}

std::size_t MlpParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& layer : layers) n += layer.weights.size() + layer.biases.size();
  return n;
}

std::vector<std::span<double>> MlpParams::tensors() {
  std::vector<std::span<double>> out;
  for (auto& layer : layers) {
    out.emplace_back(layer.weights);
    out.emplace_back(layer.biases);
  }
  return out;
}

std::vector<std::span<const double>> MlpParams::tensors() const {
  std::vector<std::span<const double>> out;
  for (const auto& layer : layers) {
    out.emplace_back(layer.weights);
    out.emplace_back(layer.biases);
  }
  return out;
}

bool MlpParams::all_finite() const {
  for (auto t : tensors())
    for (double v : t)
      if (!std::isfinite(v)) return false;
  return true;
}

std::vector<double> mlp_forward(const MlpParams& params, std::span<const double> input) {
  ForwardTrace trace(params);
  forward_into(params, input, trace);
  return std::move(trace.acts.back());
}

std::vector<double> td_targets(std::span<const Transition> batch, const MlpParams& params, double discount) {
  if (batch.empty()) throw std::invalid_argument("td_targets: empty minibatch");
  std::vector<double> y;
  y.reserve(batch.size());
  ForwardTrace trace(params);
  for (const auto& t : batch) {
    if (discount == 0.0) {
      y.push_back(t.reward);
      continue;
    }
    forward_into(params, t.next_state, trace);
    const auto& q = trace.acts.back();
    y.push_back(t.reward + discount * *std::max_element(q.begin(), q.end()));
  }
  return y;
}

double mse_loss(const MlpParams& params, std::span<const Transition> batch, std::span<const double> targets) {
  check_batch(params, batch, targets);
  ForwardTrace trace(params);
  double sum = 0.0;
  for (std::size_t j = 0; j < batch.size(); ++j) {
    forward_into(params, batch[j].state, trace);
    const double r = targets[j] - trace.acts.back()[batch[j].action];
    sum += 0.5 * r * r;
  }
  return sum / static_cast<double>(batch.size());
}

double mse_loss_and_grad(const MlpParams& params, std::span<const Transition> batch, std::span<const double> targets,
                         MlpParams& grad) {
  check_batch(params, batch, targets);
  zero(grad);
  ForwardTrace trace(params);
  const std::size_t n_layers = params.layers.size();
  std::vector<std::vector<double>> delta(n_layers);
  for (std::size_t i = 0; i < n_layers; ++i) delta[i].resize(params.layers[i].outputs);

  const double inv_b = 1.0 / static_cast<double>(batch.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < batch.size(); ++j) {
    forward_into(params, batch[j].state, trace);
    const std::size_t a = batch[j].action;
    const double residual = targets[j] - trace.acts.back()[a];
    sum += 0.5 * residual * residual;

    // dL/dq_a = -(y - q_a) / B; every other output has zero error.
    std::fill(delta.back().begin(), delta.back().end(), 0.0);
    delta.back()[a] = -residual * inv_b;

    for (std::size_t i = n_layers; i-- > 0;) {
      const DenseLayer& layer = params.layers[i];
      DenseLayer& g = grad.layers[i];
      const double* x = trace.acts[i].data();
      const auto& d = delta[i];
      for (std::size_t o = 0; o < layer.outputs; ++o) {
        if (d[o] == 0.0) continue;
        g.biases[o] += d[o];
        double* gw = g.weights.data() + o * layer.inputs;
        for (std::size_t k = 0; k < layer.inputs; ++k) gw[k] += d[o] * x[k];
      }
      if (i == 0) break;
      // Back through the weights, then the ReLU of the previous layer.
      auto& prev = delta[i - 1];
      std::fill(prev.begin(), prev.end(), 0.0);
      for (std::size_t o = 0; o < layer.outputs; ++o) {
        if (d[o] == 0.0) continue;
        const double* w = layer.weights.data() + o * layer.inputs;
        for (std::size_t k = 0; k < layer.inputs; ++k) prev[k] += w[k] * d[o];
      }
      for (std::size_t k = 0; k < prev.size(); ++k)
        if (!(x[k] > 0.0)) prev[k] = 0.0;
    }
  }
  return sum * inv_b;
}

MlpParams mse_grad(const MlpParams& params, std::span<const Transition> batch, std::span<const double> targets) {
  MlpParams grad = MlpParams::zeros(params.topology());
  mse_loss_and_grad(params, batch, targets, grad);
  return grad;
}

AdamState AdamState::for_params(const MlpParams& params, AdamParams hyper) {
  const auto topo = params.topology();
  return AdamState{MlpParams::zeros(topo), MlpParams::zeros(topo), 0, hyper};
}

void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state) {
  auto p = params.tensors();
  auto g = grads.tensors();
  auto m = state.first_moment.tensors();
  auto v = state.second_moment.tensors();
  if (p.size() != g.size() || p.size() != m.size() || p.size() != v.size())
    throw ShapeError("adam_step: parameter, gradient and moment shapes differ");

  ++state.step_count;
  const auto& h = state.hyper;
  const double t = static_cast<double>(state.step_count);
  const double c1 = 1.0 - std::pow(h.beta1, t);
  const double c2 = 1.0 - std::pow(h.beta2, t);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i].size() != g[i].size()) throw ShapeError("adam_step: tensor size mismatch");
    for (std::size_t k = 0; k < p[i].size(); ++k) {
      const double gk = g[i][k];
      m[i][k] = h.beta1 * m[i][k] + (1.0 - h.beta1) * gk;
      v[i][k] = h.beta2 * v[i][k] + (1.0 - h.beta2) * gk * gk;
      const double m_hat = m[i][k] / c1;
      const double v_hat = v[i][k] / c2;
      p[i][k] -= h.learning_rate * m_hat / (std::sqrt(v_hat) + h.epsilon_hat);
    }
  }
}

void write_weights_csv(const MlpParams& params, std::uint64_t seed, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "# topology:";
  const auto topo = params.topology();
  for (std::size_t i = 0; i < topo.size(); ++i) out << (i ? "," : " ") << topo[i];
  out << "\n# seed: " << seed << "\nlayer,tensor,row,col,value\n";
  out.precision(17);
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const auto& layer = params.layers[l];
    for (std::size_t o = 0; o < layer.outputs; ++o)
      for (std::size_t k = 0; k < layer.inputs; ++k) out << l << ",w," << o << ',' << k << ',' << layer.w(o, k) << '\n';
    for (std::size_t o = 0; o < layer.outputs; ++o) out << l << ",b," << o << ",0," << layer.biases[o] << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

MlpParams read_weights_csv(const std::filesystem::path& path, std::uint64_t* seed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::vector<std::size_t> topo;
  MlpParams p;
  bool have_topology = false;
  while (std::getline(in, line)) {
    if (line.rfind("# topology:", 0) == 0) {
      std::stringstream ss(line.substr(11));
      std::string item;
      while (std::getline(ss, item, ',')) topo.push_back(std::stoul(item));
      p = MlpParams::zeros(topo);
      have_topology = true;
    } else if (line.rfind("# seed:", 0) == 0) {
      if (seed) *seed = std::stoull(line.substr(7));
    } else if (line.empty() || line.rfind("layer,", 0) == 0) {
      continue;
    } else {
      if (!have_topology) throw std::runtime_error(path.string() + ": weights before topology header");
      std::stringstream ss(line);
      std::string l, kind, row, col, value;
      std::getline(ss, l, ',');
      std::getline(ss, kind, ',');
      std::getline(ss, row, ',');
      std::getline(ss, col, ',');
      std::getline(ss, value, ',');
      auto& layer = p.layers.at(std::stoul(l));
      if (kind == "w")
        layer.weights.at(std::stoul(row) * layer.inputs + std::stoul(col)) = std::stod(value);
      else
        layer.biases.at(std::stoul(row)) = std::stod(value);
    }
  }
  if (!have_topology) throw std::runtime_error(path.string() + ": missing topology header");
  return p;
}

}  // namespace hybridnet
