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

#ifndef CNNGA_CACHE_HPP_
#define CNNGA_CACHE_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>

#include "cnnga/genome.hpp"

namespace cnnga {

// Identifier -> fitness. Entries are never evicted, and an existing entry is
// never replaced. Only the engine's control thread touches it.
//
// File format: one "<identifier-hex> <fitness-decimal>" record per line,
// UTF-8, sorted by identifier.
class FitnessCache {
 public:
  std::optional<double> lookup(const Identifier& id) const;
  // Returns false and keeps the old value when `id` is already present.
  bool insert(const Identifier& id, double fitness);

  std::size_t size() const { return entries_.size(); }
  bool contains(const Identifier& id) const { return entries_.contains(id); }
  const std::map<Identifier, double>& entries() const { return entries_; }

  // Malformed lines are skipped with a warning. Throws std::runtime_error
  // if the file cannot be opened.
  static FitnessCache load(const std::filesystem::path& path);
  void store(const std::filesystem::path& path) const;

  friend bool operator==(const FitnessCache&, const FitnessCache&) = default;

 private:
  std::map<Identifier, double> entries_;
};

}  // namespace cnnga

#endif  // CNNGA_CACHE_HPP_
