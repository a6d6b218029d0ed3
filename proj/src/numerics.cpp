// Copyright 2026 The trajpref Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "trajpref/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trajpref
{

double log_sum_exp(std::span<const double> values)
{
  if (values.empty()) {
    return -std::numeric_limits<double>::infinity();
  }
  const double m = *std::max_element(values.begin(), values.end());
  if (!std::isfinite(m)) {
    return m;
  }
  double acc = 0.0;
  for (double v : values) {
    acc += std::exp(v - m);
  }
  return m + std::log(acc);
}

std::vector<double> log_softmax(std::span<const double> logits)
{
  const double lse = log_sum_exp(logits);
  std::vector<double> out(logits.begin(), logits.end());
  for (double & v : out) {
    v -= lse;
  }
  return out;
}

std::vector<double> softmax(std::span<const double> logits)
{
  auto out = log_softmax(logits);
  for (double & v : out) {
    v = std::exp(v);
  }
  return out;
}

double softplus(double x)
{
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

}  // namespace trajpref
