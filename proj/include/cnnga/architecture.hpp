// Copyright 2026 The cnnga Authors.
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

#ifndef CNNGA_ARCHITECTURE_HPP_
#define CNNGA_ARCHITECTURE_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "cnnga/genome.hpp"

namespace cnnga {

struct InputShape {
  int height = 32;
  int width = 32;
  int channels = 3;
  friend bool operator==(const InputShape&, const InputShape&) = default;
};

// conv(3x3, stride 1, same) -> batch-norm -> ReLU, twice, then the shortcut
// is added. The shortcut is a biased 1x1 conv when in_channels != conv2_out.
struct SkipBlock {
  int in_channels = 0;
  int conv1_out = 0;
  int conv2_out = 0;
  std::optional<int> adapter_out;
  int height = 0;
  int width = 0;
  friend bool operator==(const SkipBlock&, const SkipBlock&) = default;
};

// 2x2 kernel, 2x2 stride.
struct PoolBlock {
  PoolType pool_type = PoolType::kMax;
  int channels = 0;
  int height_in = 0;
  int width_in = 0;
  int height_out = 0;
  int width_out = 0;
  friend bool operator==(const PoolBlock&, const PoolBlock&) = default;
};

using Block = std::variant<SkipBlock, PoolBlock>;

// global-average-pool -> linear(in_features -> num_classes) -> softmax
struct ClassifierHead {
  int in_features = 0;
  int num_classes = 0;
  friend bool operator==(const ClassifierHead&, const ClassifierHead&) = default;
};

struct ArchitectureIR {
  InputShape input_shape;
  std::vector<Block> blocks;
  ClassifierHead head;
  int num_classes = 0;
  friend bool operator==(const ArchitectureIR&, const ArchitectureIR&) = default;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

// Throws ValidationError when the genome fails validate() against the input
// height and width, and std::invalid_argument on num_classes < 2 or a
// non-positive input shape.
ArchitectureIR decode(const Genome& genome, const InputShape& input_shape, int num_classes);

// Learnable parameters: conv weights and biases, batch-norm scale and shift,
// adapter weights and bias, linear head weights and bias.
std::int64_t count_parameters(const ArchitectureIR& arch);

nlohmann::json to_json(const ArchitectureIR& arch);
// Throws nlohmann::json::exception or std::invalid_argument on a bad layout.
ArchitectureIR architecture_from_json(const nlohmann::json& j);

}  // namespace cnnga

#endif  // CNNGA_ARCHITECTURE_HPP_
