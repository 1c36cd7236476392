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

#include "fedgcn/secure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "fedgcn/errors.hpp"
#include "fedgcn/rng.hpp"

namespace fedgcn {

FixedPointCodec::FixedPointCodec(int scale_bits)
    : scale_bits_(scale_bits), scale_(std::ldexp(1.0, scale_bits)) {
  if (scale_bits < 0 || scale_bits > 52) throw ParameterError("scale_bits must be in [0, 52]");
}

double FixedPointCodec::max_abs() const noexcept { return std::ldexp(1.0, 63 - scale_bits_); }

std::uint64_t FixedPointCodec::encode(double v) const {
  if (!std::isfinite(v) || std::abs(v) >= max_abs()) {
    throw BoundsError("value " + std::to_string(v) + " outside the fixed-point range");
  }
  const auto q = static_cast<std::int64_t>(std::llround(v * scale_));
  return static_cast<std::uint64_t>(q);
}

double FixedPointCodec::decode(std::uint64_t r) const noexcept {
  return static_cast<double>(static_cast<std::int64_t>(r)) / scale_;
}

std::vector<std::uint64_t> FixedPointCodec::encode(std::span<const double> v) const {
  std::vector<std::uint64_t> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = encode(v[i]);
  return out;
}

std::vector<double> FixedPointCodec::decode(std::span<const std::uint64_t> r) const {
  std::vector<double> out(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out[i] = decode(r[i]);
  return out;
}

RoundKeys::RoundKeys(int num_clients, std::map<std::pair<int, int>, std::uint64_t> pair_seeds)
    : num_clients_(num_clients), seeds_(std::move(pair_seeds)) {
  if (num_clients < 1) throw ParameterError("need at least one client");
}

RoundKeys RoundKeys::establish(std::uint64_t master, std::uint64_t round, int num_clients) {
  std::map<std::pair<int, int>, std::uint64_t> seeds;
  for (int a = 0; a < num_clients; ++a) {
    for (int b = a + 1; b < num_clients; ++b) {
      seeds[{a, b}] = derive_seed({master, round, static_cast<std::uint64_t>(a),
                                   static_cast<std::uint64_t>(b)});
    }
  }
  return RoundKeys(num_clients, std::move(seeds));
}

std::uint64_t RoundKeys::pair_seed(int a, int b) const {
  const auto it = seeds_.find({std::min(a, b), std::max(a, b)});
  if (it == seeds_.end()) {
    throw KeyError("no pairwise seed for clients " + std::to_string(a) + " and " +
                   std::to_string(b));
  }
  return it->second;
}

void RoundKeys::revoke(int a, int b) { seeds_.erase({std::min(a, b), std::max(a, b)}); }

MaskedVector mask_encrypt(std::span<const std::uint64_t> values, int client,
                          const RoundKeys& keys, std::span<const int> participants,
                          std::uint64_t slot) {
  if (client < 0 || client >= keys.num_clients()) throw ProtocolError("unknown client");
  if (std::find(participants.begin(), participants.end(), client) == participants.end()) {
    throw ProtocolError("client is not a participant of this slot");
  }
  MaskedVector out{client, std::vector<std::uint64_t>(values.begin(), values.end())};
  for (int peer : participants) {
    if (peer == client) continue;
    Rng stream(derive_seed({keys.pair_seed(client, peer), slot}));
    const bool add = client < peer;
    for (auto& r : out.residues) {
      const std::uint64_t m = stream();
      r = add ? r + m : r - m;
    }
  }
  return out;
}

MaskedVector mask_encrypt(std::span<const std::uint64_t> values, int client,
                          const RoundKeys& keys, std::uint64_t slot) {
  std::vector<int> all(static_cast<std::size_t>(keys.num_clients()));
  for (int k = 0; k < keys.num_clients(); ++k) all[static_cast<std::size_t>(k)] = k;
  return mask_encrypt(values, client, keys, all, slot);
}

std::vector<std::uint64_t> secure_sum(std::span<const MaskedVector> masked) {
  if (masked.empty()) throw ProtocolError("secure sum over no inputs");
  std::vector<std::uint64_t> sum = masked.front().residues;
  for (std::size_t k = 1; k < masked.size(); ++k) {
    if (masked[k].residues.size() != sum.size()) {
      throw ProtocolError("masked vectors differ in length");
    }
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += masked[k].residues[i];
  }
  return sum;
}

std::vector<std::uint64_t> pack_bools(const std::vector<bool>& bits) {
  std::vector<std::uint64_t> words((bits.size() + 63) / 64, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i]) words[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  return words;
}

std::vector<bool> unpack_bools(std::span<const std::uint64_t> words, std::size_t n) {
  if (n > 64 * words.size()) {
    throw BoundsError("cannot unpack " + std::to_string(n) + " bits from " +
                      std::to_string(words.size()) + " words");
  }
  std::vector<bool> bits(n);
  for (std::size_t i = 0; i < n; ++i) bits[i] = (words[i / 64] >> (i % 64)) & 1;
  return bits;
}

double estimate_ciphertext_bytes(std::uint64_t n, const SizeModel& model, bool packed) {
  if (model.slots == 0) throw ParameterError("size model needs at least one slot");
  const std::uint64_t effective = packed ? (n + 63) / 64 : n;
  const std::uint64_t ciphertexts = (effective + model.slots - 1) / model.slots;
  return static_cast<double>(ciphertexts) * model.ciphertext_bytes;
}

namespace {

class PlainChannel final : public SecureChannel {
 public:
  std::string name() const override { return "plain"; }
  void begin_round(std::uint64_t) override {}

  Blob encrypt(const EncryptContext&, std::span<const double> values) const override {
    Blob b(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) b[i] = std::bit_cast<std::uint64_t>(values[i]);
    return b;
  }

  Blob aggregate(std::span<const Blob> blobs, PayloadKind) const override {
    if (blobs.empty()) throw ProtocolError("aggregate over no blobs");
    Blob sum = blobs.front();
    for (std::size_t k = 1; k < blobs.size(); ++k) {
      if (blobs[k].size() != sum.size()) throw ProtocolError("blobs differ in length");
      for (std::size_t i = 0; i < sum.size(); ++i) {
        sum[i] = std::bit_cast<std::uint64_t>(std::bit_cast<double>(sum[i]) +
                                              std::bit_cast<double>(blobs[k][i]));
      }
    }
    return sum;
  }

  std::vector<double> decrypt(const Blob& blob, PayloadKind) const override {
    std::vector<double> v(blob.size());
    for (std::size_t i = 0; i < blob.size(); ++i) v[i] = std::bit_cast<double>(blob[i]);
    return v;
  }
};

class MaskedChannel : public SecureChannel {
 public:
  explicit MaskedChannel(const ChannelOptions& o)
      : options_(o),
        feature_codec_(o.feature_scale_bits),
        model_codec_(o.model_scale_bits),
        keys_(RoundKeys::establish(o.master_secret, 0, o.num_clients)) {}

  std::string name() const override { return "masked"; }

  void begin_round(std::uint64_t round) override {
    keys_ = RoundKeys::establish(options_.master_secret, round, options_.num_clients);
  }

  Blob encrypt(const EncryptContext& ctx, std::span<const double> values) const override {
    const auto plain = codec(ctx.kind).encode(values);
    const auto masked = ctx.participants.empty()
                            ? mask_encrypt(plain, ctx.client, keys_, ctx.slot)
                            : mask_encrypt(plain, ctx.client, keys_, ctx.participants, ctx.slot);
    return masked.residues;
  }

  Blob aggregate(std::span<const Blob> blobs, PayloadKind) const override {
    std::vector<MaskedVector> mv;
    mv.reserve(blobs.size());
    for (const auto& b : blobs) mv.push_back({0, b});
    return secure_sum(mv);
  }

  std::vector<double> decrypt(const Blob& blob, PayloadKind kind) const override {
    return codec(kind).decode(blob);
  }

 protected:
  const FixedPointCodec& codec(PayloadKind kind) const {
    return kind == PayloadKind::kModel ? model_codec_ : feature_codec_;
  }

  ChannelOptions options_;

 private:
  FixedPointCodec feature_codec_;
  FixedPointCodec model_codec_;
  RoundKeys keys_;
};

// Masked aggregation whose wire cost is charged as FHE ciphertexts packed
// across the whole message.
class SizeModelChannel final : public MaskedChannel {
 public:
  using MaskedChannel::MaskedChannel;
  std::string name() const override { return "masked+sizemodel"; }

  std::uint64_t wire_bytes(std::span<const WireRecord> message, PayloadKind kind) const override {
    std::uint64_t elements = 0;
    for (const auto& r : message) elements += r.payload.size();
    const SizeModel& m =
        kind == PayloadKind::kModel ? options_.model_size_model : options_.feature_size_model;
    return kRecordHeaderBytes * message.size() +
           static_cast<std::uint64_t>(estimate_ciphertext_bytes(elements, m, false));
  }
};

}  // namespace

std::unique_ptr<SecureChannel> make_channel(const std::string& name, const ChannelOptions& options) {
  if (name == "plain") return std::make_unique<PlainChannel>();
  if (name == "masked") return std::make_unique<MaskedChannel>(options);
  if (name == "masked+sizemodel") return std::make_unique<SizeModelChannel>(options);
  throw ConfigError("unknown channel '" + name + "' (expected plain, masked or masked+sizemodel)");
}

}  // namespace fedgcn
