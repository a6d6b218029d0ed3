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

#ifndef TRAJPREF__CHECKPOINT_HPP_
#define TRAJPREF__CHECKPOINT_HPP_

#include <filesystem>
#include <string>

#include "trajpref/predictor.hpp"

namespace trajpref
{

inline constexpr int kCheckpointVersion = 1;

/// JSON checkpoint with a shape manifest, the init seed and every tensor in
/// column-major order. Values round-trip bit-exactly.
std::string format_checkpoint(const PredictorParams & params);
PredictorParams parse_checkpoint(const std::string & text);

void save_checkpoint(const std::filesystem::path & path, const PredictorParams & params);
PredictorParams load_checkpoint(const std::filesystem::path & path);

}  // namespace trajpref

#endif  // TRAJPREF__CHECKPOINT_HPP_
