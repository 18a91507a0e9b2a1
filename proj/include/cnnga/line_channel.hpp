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

#ifndef CNNGA_LINE_CHANNEL_HPP_
#define CNNGA_LINE_CHANNEL_HPP_

#include <chrono>
#include <memory>
#include <string>
#include <string_view>

namespace cnnga {

enum class ReadStatus { kLine, kTimeout, kClosed };

// Bidirectional newline-delimited text channel to one external worker.
// I/O failures throw TransportError.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  // Appends the terminating '\n'; `line` must not contain one.
  virtual void write_line(std::string_view line) = 0;
  // A zero timeout waits indefinitely. The line is returned without '\n'.
  virtual ReadStatus read_line(std::string& line, std::chrono::milliseconds timeout) = 0;
};

// Runs `command` through /bin/sh -c with its stdin and stdout attached to
// the channel. Stderr is inherited.
std::unique_ptr<LineChannel> spawn_child_channel(const std::string& command);

// Connects to "host:port".
std::unique_ptr<LineChannel> connect_tcp_channel(const std::string& endpoint);

}  // namespace cnnga

#endif  // CNNGA_LINE_CHANNEL_HPP_
