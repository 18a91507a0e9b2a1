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

#include "cnnga/genome.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <limits>
#include <memory>

namespace cnnga {

std::string_view pool_type_name(PoolType type) {
  return type == PoolType::kMax ? "max" : "mean";
}

std::tuple<int, int, int> LayerGene::ordering_key() const {
  if (is_skip()) return {1, as_skip().f1, as_skip().f2};
  return {2, static_cast<int>(as_pool().pool_type), 0};
}

Genome::Genome(std::vector<LayerGene> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw std::invalid_argument("genome must hold at least one layer");
}

std::size_t Genome::skip_count() const {
  return static_cast<std::size_t>(
      std::count_if(layers_.begin(), layers_.end(), [](const LayerGene& g) { return g.is_skip(); }));
}

std::size_t Genome::pool_count() const { return layers_.size() - skip_count(); }

void Genome::insert(std::size_t position, LayerGene gene) {
  if (position > layers_.size()) throw std::out_of_range("insert position past end of genome");
  layers_.insert(layers_.begin() + static_cast<std::ptrdiff_t>(position), gene);
}

void Genome::erase(std::size_t position) {
  if (position >= layers_.size()) throw std::out_of_range("erase position past end of genome");
  if (layers_.size() == 1) throw std::logic_error("cannot remove the last layer of a genome");
  layers_.erase(layers_.begin() + static_cast<std::ptrdiff_t>(position));
}

void Genome::replace(std::size_t position, LayerGene gene) {
  layers_.at(position) = gene;
}

std::string canonical_serialize(const Genome& genome) {
  std::string out;
  out.reserve(genome.size() * 9);
  for (std::size_t i = 0; i < genome.size(); ++i) {
    if (i > 0) out += '-';
    const LayerGene& gene = genome[i];
    if (gene.is_skip()) {
      out += "S:";
      out += std::to_string(gene.as_skip().f1);
      out += ':';
      out += std::to_string(gene.as_skip().f2);
    } else {
      out += "P:";
      out += pool_type_name(gene.as_pool().pool_type);
    }
  }
  return out;
}

GenomeParseError::GenomeParseError(std::string token, std::size_t offset, const std::string& why)
    : std::runtime_error("invalid genome token '" + token + "' at byte " +
                         std::to_string(offset) + ": " + why),
      token_(std::move(token)),
      offset_(offset) {}

namespace {

// Canonical positive decimal: digits only, no leading zero, fits in int.
bool parse_positive(std::string_view text, int& value) {
  if (text.empty() || text.front() == '0') return false;
  if (!std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return false;
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size() && value > 0;
}

LayerGene parse_token(std::string_view token, std::size_t offset) {
  const std::string tok(token);
  if (token.empty()) throw GenomeParseError(tok, offset, "empty layer token");
  if (token == "P:max") return LayerGene::pool(PoolType::kMax);
  if (token == "P:mean") return LayerGene::pool(PoolType::kMean);
  if (token.starts_with("S:")) {
    std::string_view rest = token.substr(2);
    auto colon = rest.find(':');
    int f1 = 0;
    int f2 = 0;
    if (colon == std::string_view::npos || !parse_positive(rest.substr(0, colon), f1) ||
        !parse_positive(rest.substr(colon + 1), f2)) {
      throw GenomeParseError(tok, offset, "expected S:<f1>:<f2> with positive integers");
    }
    return LayerGene::skip(f1, f2);
  }
  throw GenomeParseError(tok, offset, "expected S:<f1>:<f2>, P:max or P:mean");
}

}  // namespace

Genome parse_genome(std::string_view text) {
  std::vector<LayerGene> layers;
  std::size_t start = 0;
  while (true) {
    std::size_t end = text.find('-', start);
    std::string_view token = text.substr(start, end == std::string_view::npos ? end : end - start);
    layers.push_back(parse_token(token, start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return Genome(std::move(layers));
}

Identifier sha224_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha224(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &length) != 1) {
    throw std::runtime_error("SHA-224 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(length * 2);
  for (unsigned int i = 0; i < length; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xf];
  }
  return hex;
}

Identifier identifier(const Genome& genome) { return sha224_hex(canonical_serialize(genome)); }

ValidationReport validate(const Genome& genome, int input_spatial) {
  ValidationReport report;
  if (input_spatial < 1) {
    report.valid = false;
    report.messages.push_back("input spatial size must be at least 1");
    return report;
  }
  std::size_t max_pools = 0;
  while ((1LL << (max_pools + 1)) <= input_spatial) ++max_pools;
  report.max_pools_allowed = max_pools;
  report.pool_count = genome.pool_count();
  if (report.pool_count > report.max_pools_allowed) {
    report.valid = false;
    report.messages.push_back(std::to_string(report.pool_count) + " pooling layers exceed the " +
                              std::to_string(max_pools) + " allowed for input size " +
                              std::to_string(input_spatial));
  }
  for (std::size_t i = 0; i < genome.size(); ++i) {
    if (genome[i].is_skip() && (genome[i].as_skip().f1 <= 0 || genome[i].as_skip().f2 <= 0)) {
      report.valid = false;
      report.messages.push_back("layer " + std::to_string(i) + " has a non-positive feature-map count");
    }
  }
  return report;
}

}  // namespace cnnga
