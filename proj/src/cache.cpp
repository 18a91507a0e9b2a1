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

#include "cnnga/cache.hpp"

#include <spdlog/spdlog.h>

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "cnnga/io.hpp"

namespace cnnga {

namespace {

bool is_identifier(std::string_view text) {
  return text.size() == 56 && text.find_first_not_of("0123456789abcdef") == std::string_view::npos;
}

}  // namespace

std::optional<double> FitnessCache::lookup(const Identifier& id) const {
  auto it = entries_.find(id);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

bool FitnessCache::insert(const Identifier& id, double fitness) {
  auto [it, inserted] = entries_.emplace(id, fitness);
  if (!inserted && it->second != fitness) {
    spdlog::warn("cache keeps {} = {} and ignores new value {}", id, it->second, fitness);
  }
  return inserted;
}

FitnessCache FitnessCache::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open cache file '" + path.string() + "'");
  FitnessCache cache;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto space = line.find(' ');
    double fitness = 0.0;
    bool ok = space != std::string::npos && is_identifier(std::string_view(line).substr(0, space));
    if (ok) {
      const char* first = line.data() + space + 1;
      const char* last = line.data() + line.size();
      auto [ptr, ec] = std::from_chars(first, last, fitness);
      ok = ec == std::errc() && ptr == last && first != last && fitness >= 0.0 && fitness <= 1.0;
    }
    if (!ok) {
      spdlog::warn("{}:{}: skipping malformed cache record", path.string(), line_no);
      continue;
    }
    cache.insert(line.substr(0, space), fitness);
  }
  return cache;
}

void FitnessCache::store(const std::filesystem::path& path) const {
  std::string text;
  text.reserve(entries_.size() * 80);
  for (const auto& [id, fitness] : entries_) {
    text += id;
    text += ' ';
    text += format_double(fitness);
    text += '\n';
  }
  write_file_atomic(path, text);
}

}  // namespace cnnga
