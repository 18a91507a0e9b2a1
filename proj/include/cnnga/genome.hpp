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

#ifndef CNNGA_GENOME_HPP_
#define CNNGA_GENOME_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <variant>
#include <vector>

namespace cnnga {

enum class PoolType { kMax, kMean };

std::string_view pool_type_name(PoolType type);

// Skip layer: two 3x3 convs with an identity (or adapted) shortcut.
struct SkipGene {
  int f1 = 0;
  int f2 = 0;
  friend bool operator==(const SkipGene&, const SkipGene&) = default;
};

struct PoolGene {
  PoolType pool_type = PoolType::kMax;
  friend bool operator==(const PoolGene&, const PoolGene&) = default;
};

// Type tag 1 is a skip layer, tag 2 a pooling layer.
class LayerGene {
 public:
  LayerGene(SkipGene skip) : payload_(skip) {}  // NOLINT
  LayerGene(PoolGene pool) : payload_(pool) {}  // NOLINT

  static LayerGene skip(int f1, int f2) { return SkipGene{f1, f2}; }
  static LayerGene pool(PoolType type) { return PoolGene{type}; }

  int type_tag() const { return is_skip() ? 1 : 2; }
  bool is_skip() const { return std::holds_alternative<SkipGene>(payload_); }
  bool is_pool() const { return std::holds_alternative<PoolGene>(payload_); }
  const SkipGene& as_skip() const { return std::get<SkipGene>(payload_); }
  const PoolGene& as_pool() const { return std::get<PoolGene>(payload_); }

  friend bool operator==(const LayerGene&, const LayerGene&) = default;
  friend auto operator<=>(const LayerGene& a, const LayerGene& b) {
    return a.ordering_key() <=> b.ordering_key();
  }

 private:
  std::tuple<int, int, int> ordering_key() const;

  std::variant<SkipGene, PoolGene> payload_;
};

// Ordered, non-empty sequence of layer genes. Construction from an empty
// sequence throws, and no mutating member can shrink it below one gene.
class Genome {
 public:
  explicit Genome(std::vector<LayerGene> layers);
  Genome(std::initializer_list<LayerGene> layers)
      : Genome(std::vector<LayerGene>(layers)) {}

  std::size_t size() const { return layers_.size(); }
  std::span<const LayerGene> layers() const { return layers_; }
  const LayerGene& operator[](std::size_t i) const { return layers_[i]; }

  std::size_t skip_count() const;
  std::size_t pool_count() const;

  void insert(std::size_t position, LayerGene gene);
  // Throws std::logic_error if it would leave the genome empty.
  void erase(std::size_t position);
  void replace(std::size_t position, LayerGene gene);

  friend bool operator==(const Genome&, const Genome&) = default;

 private:
  std::vector<LayerGene> layers_;
};

// Canonical text form: "S:<f1>:<f2>" or "P:max" / "P:mean" joined by '-'.
// Also used as the on-disk and CLI genome format.
std::string canonical_serialize(const Genome& genome);

class GenomeParseError : public std::runtime_error {
 public:
  GenomeParseError(std::string token, std::size_t offset, const std::string& why);
  const std::string& token() const { return token_; }
  std::size_t offset() const { return offset_; }

 private:
  std::string token_;
  std::size_t offset_;
};

// Inverse of canonical_serialize. Throws GenomeParseError naming the
// offending token and its byte offset.
Genome parse_genome(std::string_view text);

// Lowercase hex SHA-224 of canonical_serialize(genome); 56 characters.
using Identifier = std::string;
Identifier identifier(const Genome& genome);
Identifier sha224_hex(std::string_view bytes);

struct ValidationReport {
  bool valid = true;
  std::size_t pool_count = 0;
  std::size_t max_pools_allowed = 0;
  std::vector<std::string> messages;
};

// max_pools_allowed = floor(log2(input_spatial)), so the smallest feature map
// stays at least 1x1.
ValidationReport validate(const Genome& genome, int input_spatial);

}  // namespace cnnga

#endif  // CNNGA_GENOME_HPP_
