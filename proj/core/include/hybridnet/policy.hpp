#pragma once

#include <cstddef>
#include <span>

#include "hybridnet/rng.hpp"

namespace hybridnet {

// max(0.99^(t-1), 0.1) for iteration t >= 1.
double epsilon(std::size_t t);

// Index of the largest value; ties go to the lowest index.
std::size_t argmax_lowest(std::span<const double> values);

// With probability eps a uniformly random index, otherwise argmax_lowest.
// Always consumes one uniform draw, plus one more when exploring.
std::size_t epsilon_greedy(std::span<const double> values, double eps, Rng& rng);

}  // namespace hybridnet
