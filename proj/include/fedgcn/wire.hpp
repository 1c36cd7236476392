/*
 * Copyright 2026 The fedgcn-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fedgcn {

// Length-prefixed record: {u32 node_id, u32 hop, u32 payload_len} followed by
// payload_len little-endian 8-byte words.
struct WireRecord {
  std::uint32_t node_id = 0;
  std::uint32_t hop = 0;
  std::vector<std::uint64_t> payload;

  friend bool operator==(const WireRecord&, const WireRecord&) = default;
};

inline constexpr std::uint32_t kModelHop = 0xFFFFFFFFu;
inline constexpr std::size_t kRecordHeaderBytes = 12;

std::size_t encoded_size(std::span<const WireRecord> records) noexcept;
std::vector<std::byte> encode_records(std::span<const WireRecord> records);
// Throws ProtocolError on truncated or trailing bytes.
std::vector<WireRecord> decode_records(std::span<const std::byte> bytes);

}  // namespace fedgcn
