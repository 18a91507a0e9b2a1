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

#include "cnnga/architecture.hpp"

#include <algorithm>
#include <string>

namespace cnnga {

namespace {

std::string join_messages(const ValidationReport& report) {
  std::string out = "genome failed validation";
  for (const auto& m : report.messages) out += "; " + m;
  return out;
}

int positive_field(const nlohmann::json& j, const char* key) {
  int v = j.at(key).get<int>();
  if (v < 1) throw std::invalid_argument(std::string("architecture field '") + key + "' must be positive");
  return v;
}

}  // namespace

ValidationError::ValidationError(ValidationReport report)
    : std::runtime_error(join_messages(report)), report_(std::move(report)) {}

ArchitectureIR decode(const Genome& genome, const InputShape& input_shape, int num_classes) {
  if (num_classes < 2) throw std::invalid_argument("num_classes must be at least 2");
  if (input_shape.height < 1 || input_shape.width < 1 || input_shape.channels < 1) {
    throw std::invalid_argument("input shape dimensions must be positive");
  }
  ValidationReport report = validate(genome, std::min(input_shape.height, input_shape.width));
  if (!report.valid) throw ValidationError(std::move(report));

  ArchitectureIR arch;
  arch.input_shape = input_shape;
  arch.num_classes = num_classes;
  int channels = input_shape.channels;
  int height = input_shape.height;
  int width = input_shape.width;
  for (const LayerGene& gene : genome.layers()) {
    if (gene.is_skip()) {
      SkipBlock block;
      block.in_channels = channels;
      block.conv1_out = gene.as_skip().f1;
      block.conv2_out = gene.as_skip().f2;
      if (channels != block.conv2_out) block.adapter_out = block.conv2_out;
      block.height = height;
      block.width = width;
      channels = block.conv2_out;
      arch.blocks.emplace_back(block);
    } else {
      PoolBlock block;
      block.pool_type = gene.as_pool().pool_type;
      block.channels = channels;
      block.height_in = height;
      block.width_in = width;
      height /= 2;
      width /= 2;
      block.height_out = height;
      block.width_out = width;
      arch.blocks.emplace_back(block);
    }
  }
  arch.head = ClassifierHead{channels, num_classes};
  return arch;
}

std::int64_t count_parameters(const ArchitectureIR& arch) {
  std::int64_t total = 0;
  for (const Block& block : arch.blocks) {
    const auto* skip = std::get_if<SkipBlock>(&block);
    if (skip == nullptr) continue;
    const std::int64_t in = skip->in_channels;
    const std::int64_t c1 = skip->conv1_out;
    const std::int64_t c2 = skip->conv2_out;
    total += 9 * in * c1 + c1 + 2 * c1;
    total += 9 * c1 * c2 + c2 + 2 * c2;
    if (skip->adapter_out) total += in * *skip->adapter_out + *skip->adapter_out;
  }
  const std::int64_t features = arch.head.in_features;
  const std::int64_t classes = arch.head.num_classes;
  total += features * classes + classes;
  return total;
}

nlohmann::json to_json(const ArchitectureIR& arch) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const Block& block : arch.blocks) {
    if (const auto* skip = std::get_if<SkipBlock>(&block)) {
      nlohmann::json b = {
          {"type", "skip"},
          {"in_channels", skip->in_channels},
          {"conv1_out", skip->conv1_out},
          {"conv2_out", skip->conv2_out},
          {"adapter_out", skip->adapter_out ? nlohmann::json(*skip->adapter_out) : nlohmann::json(nullptr)},
          {"kernel", {3, 3}},
          {"stride", {1, 1}},
          {"padding", "same"},
          {"batch_norm", true},
          {"activation", "relu"},
          {"height", skip->height},
          {"width", skip->width},
      };
      blocks.push_back(std::move(b));
    } else {
      const auto& pool = std::get<PoolBlock>(block);
      blocks.push_back({
          {"type", "pool"},
          {"pool_type", std::string(pool_type_name(pool.pool_type))},
          {"kernel", {2, 2}},
          {"stride", {2, 2}},
          {"channels", pool.channels},
          {"height_in", pool.height_in},
          {"width_in", pool.width_in},
          {"height_out", pool.height_out},
          {"width_out", pool.width_out},
      });
    }
  }
  return {
      {"input_shape", {arch.input_shape.height, arch.input_shape.width, arch.input_shape.channels}},
      {"blocks", std::move(blocks)},
      {"head",
       {{"pool", "global_average"},
        {"in_features", arch.head.in_features},
        {"num_classes", arch.head.num_classes},
        {"activation", "softmax"}}},
      {"num_classes", arch.num_classes},
  };
}

ArchitectureIR architecture_from_json(const nlohmann::json& j) {
  ArchitectureIR arch;
  const auto& shape = j.at("input_shape");
  if (!shape.is_array() || shape.size() != 3) {
    throw std::invalid_argument("input_shape must be [height, width, channels]");
  }
  arch.input_shape = {shape[0].get<int>(), shape[1].get<int>(), shape[2].get<int>()};
  for (const auto& b : j.at("blocks")) {
    const auto type = b.at("type").get<std::string>();
    if (type == "skip") {
      SkipBlock skip;
      skip.in_channels = positive_field(b, "in_channels");
      skip.conv1_out = positive_field(b, "conv1_out");
      skip.conv2_out = positive_field(b, "conv2_out");
      if (!b.at("adapter_out").is_null()) skip.adapter_out = b.at("adapter_out").get<int>();
      skip.height = positive_field(b, "height");
      skip.width = positive_field(b, "width");
      arch.blocks.emplace_back(skip);
    } else if (type == "pool") {
      PoolBlock pool;
      const auto name = b.at("pool_type").get<std::string>();
      if (name == "max") {
        pool.pool_type = PoolType::kMax;
      } else if (name == "mean") {
        pool.pool_type = PoolType::kMean;
      } else {
        throw std::invalid_argument("unknown pool_type '" + name + "'");
      }
      pool.channels = positive_field(b, "channels");
      pool.height_in = positive_field(b, "height_in");
      pool.width_in = positive_field(b, "width_in");
      pool.height_out = positive_field(b, "height_out");
      pool.width_out = positive_field(b, "width_out");
      arch.blocks.emplace_back(pool);
    } else {
      throw std::invalid_argument("unknown block type '" + type + "'");
    }
  }
  const auto& head = j.at("head");
  arch.head = {positive_field(head, "in_features"), positive_field(head, "num_classes")};
  arch.num_classes = positive_field(j, "num_classes");
  return arch;
}

}  // namespace cnnga
