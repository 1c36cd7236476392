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

#include "fedgcn/wire.hpp"

#include <cstring>

#include "fedgcn/errors.hpp"

namespace fedgcn {
namespace {

void put_u32(std::vector<std::byte>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::vector<std::byte>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_le(std::span<const std::byte> bytes, std::size_t at, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) {
    v |= static_cast<std::uint64_t>(std::to_integer<unsigned>(bytes[at + static_cast<std::size_t>(i)]))
         << (8 * i);
  }
  return v;
}

}  // namespace

std::size_t encoded_size(std::span<const WireRecord> records) noexcept {
  std::size_t n = 0;
  for (const auto& r : records) n += kRecordHeaderBytes + 8 * r.payload.size();
  return n;
}

std::vector<std::byte> encode_records(std::span<const WireRecord> records) {
  std::vector<std::byte> out;
  out.reserve(encoded_size(records));
  for (const auto& r : records) {
    if (r.payload.size() > 0xFFFFFFFFu) throw ProtocolError("record payload too long");
    put_u32(out, r.node_id);
    put_u32(out, r.hop);
    put_u32(out, static_cast<std::uint32_t>(r.payload.size()));
    for (auto w : r.payload) put_u64(out, w);
  }
  return out;
}

std::vector<WireRecord> decode_records(std::span<const std::byte> bytes) {
  std::vector<WireRecord> out;
  std::size_t at = 0;
  while (at < bytes.size()) {
    if (bytes.size() - at < kRecordHeaderBytes) throw ProtocolError("truncated record header");
    WireRecord r;
    r.node_id = static_cast<std::uint32_t>(get_le(bytes, at, 4));
    r.hop = static_cast<std::uint32_t>(get_le(bytes, at + 4, 4));
    const auto len = static_cast<std::size_t>(get_le(bytes, at + 8, 4));
    at += kRecordHeaderBytes;
    if ((bytes.size() - at) / 8 < len) throw ProtocolError("truncated record payload");
    r.payload.resize(len);
    for (std::size_t i = 0; i < len; ++i, at += 8) r.payload[i] = get_le(bytes, at, 8);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace fedgcn
