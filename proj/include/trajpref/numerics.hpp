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

#ifndef TRAJPREF__NUMERICS_HPP_
#define TRAJPREF__NUMERICS_HPP_

#include <span>
#include <vector>

namespace trajpref
{

/// log(sum(exp(v))) with max subtraction; -inf for an empty span.
double log_sum_exp(std::span<const double> values);

std::vector<double> log_softmax(std::span<const double> logits);
std::vector<double> softmax(std::span<const double> logits);

/// log(1 + exp(x)) without overflow.
double softplus(double x);

inline double log_sigmoid(double x) { return -softplus(-x); }

}  // namespace trajpref

#endif  // TRAJPREF__NUMERICS_HPP_
