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

#ifndef CNNGA_IO_HPP_
#define CNNGA_IO_HPP_

#include <filesystem>
#include <string>
#include <string_view>

namespace cnnga {

// Writes to a sibling temporary file, then renames it over `path`, so
// readers see either the old or the new contents.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// Throws std::runtime_error when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace cnnga

#endif  // CNNGA_IO_HPP_
