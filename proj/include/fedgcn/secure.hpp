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

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fedgcn/wire.hpp"

namespace fedgcn {

// Two's-complement fixed point over the ring Z / 2^64.
class FixedPointCodec {
 public:
  explicit FixedPointCodec(int scale_bits = 20);

  int scale_bits() const noexcept { return scale_bits_; }
  // Largest magnitude that encodes without wrapping.
  double max_abs() const noexcept;
  // Throws BoundsError when |v| >= max_abs() or v is not finite.
  std::uint64_t encode(double v) const;
  double decode(std::uint64_t r) const noexcept;
  std::vector<std::uint64_t> encode(std::span<const double> v) const;
  std::vector<double> decode(std::span<const std::uint64_t> r) const;
  // Rounds v onto the codec grid.
  double quantize(double v) const { return decode(encode(v)); }

 private:
  int scale_bits_;
  double scale_;
};

// Pairwise seeds shared by each client pair for one round.
class RoundKeys {
 public:
  RoundKeys(int num_clients, std::map<std::pair<int, int>, std::uint64_t> pair_seeds);
  // Derives every pair seed from a master secret and the round number.
  static RoundKeys establish(std::uint64_t master, std::uint64_t round, int num_clients);

  int num_clients() const noexcept { return num_clients_; }
  // Throws KeyError when the pair has no seed.
  std::uint64_t pair_seed(int a, int b) const;
  void revoke(int a, int b);

 private:
  int num_clients_;
  std::map<std::pair<int, int>, std::uint64_t> seeds_;
};

struct MaskedVector {
  int client = 0;
  std::vector<std::uint64_t> residues;
};

// Adds the pairwise masks of `client` against every other member of
// `participants` (which must contain `client`). For a pair a < b, a adds the
// stream derived from (seed_ab, slot) and b subtracts it, so the masks cancel
// in the sum over all participants.
MaskedVector mask_encrypt(std::span<const std::uint64_t> values, int client,
                          const RoundKeys& keys, std::span<const int> participants,
                          std::uint64_t slot = 0);
// All K clients participate.
MaskedVector mask_encrypt(std::span<const std::uint64_t> values, int client,
                          const RoundKeys& keys, std::uint64_t slot = 0);

// Coordinate-wise sum mod 2^64. Throws ProtocolError on empty input or length
// mismatch.
std::vector<std::uint64_t> secure_sum(std::span<const MaskedVector> masked);

std::vector<std::uint64_t> pack_bools(const std::vector<bool>& bits);
// Throws BoundsError when n exceeds 64 * words.size().
std::vector<bool> unpack_bools(std::span<const std::uint64_t> words, std::size_t n);

struct SizeModel {
  double ciphertext_bytes = 398e3;
  std::size_t slots = 4096;
  std::size_t plaintext_element_bytes = 8;

  static SizeModel bgv() { return {398e3, 4096, 8}; }
  static SizeModel ckks() { return {266e3, 4096, 8}; }
};

// ceil(n_eff / slots) * ciphertext_bytes, with n_eff = ceil(n / 64) when the
// elements are Boolean-packed.
double estimate_ciphertext_bytes(std::uint64_t n, const SizeModel& model, bool packed);

enum class PayloadKind { kFeatures, kModel };

struct EncryptContext {
  int client = 0;
  // Clients contributing to this slot's sum; empty means all clients.
  std::span<const int> participants;
  std::uint64_t slot = 0;
  PayloadKind kind = PayloadKind::kFeatures;
};

using Blob = std::vector<std::uint64_t>;

// Additively homomorphic aggregation channel. Clients encrypt vectors, the
// server aggregates blobs without decrypting them, and the owner decrypts the
// aggregate.
class SecureChannel {
 public:
  virtual ~SecureChannel() = default;
  virtual std::string name() const = 0;
  virtual void begin_round(std::uint64_t round) = 0;
  virtual Blob encrypt(const EncryptContext& ctx, std::span<const double> values) const = 0;
  virtual Blob aggregate(std::span<const Blob> blobs, PayloadKind kind) const = 0;
  virtual std::vector<double> decrypt(const Blob& blob, PayloadKind kind) const = 0;
  // Bytes one message costs on the wire.
  virtual std::uint64_t wire_bytes(std::span<const WireRecord> message, PayloadKind kind) const {
    (void)kind;
    return encoded_size(message);
  }
};

struct ChannelOptions {
  int num_clients = 1;
  std::uint64_t master_secret = 0;
  int feature_scale_bits = 20;
  int model_scale_bits = 40;
  SizeModel feature_size_model = SizeModel::bgv();
  SizeModel model_size_model = SizeModel::ckks();
};

// "plain", "masked" or "masked+sizemodel". Throws ConfigError otherwise.
std::unique_ptr<SecureChannel> make_channel(const std::string& name, const ChannelOptions& options);

}  // namespace fedgcn
