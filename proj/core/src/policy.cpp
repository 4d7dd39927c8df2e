#include "hybridnet/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hybridnet {

double epsilon(std::size_t t) {
  if (t < 1) throw std::domain_error("epsilon: iterations start at 1");
  return std::max(std::pow(0.99, static_cast<double>(t - 1)), 0.1);
}

std::size_t argmax_lowest(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax_lowest: empty input");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

std::size_t epsilon_greedy(std::span<const double> values, double eps, Rng& rng) {
  if (uniform01(rng) < eps) return static_cast<std::size_t>(uniform_index(rng, values.size()));
  return argmax_lowest(values);
}

}  // namespace hybridnet
