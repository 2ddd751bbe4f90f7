// Copyright 2026 The pmpir Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PMPIR_WIRE_HPP_
#define PMPIR_WIRE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "pmpir/errors.hpp"

namespace pmpir::sim {

// Frame layout (all little-endian):
//   u32  length of everything after this prefix
//   u8   kind
//   u64  params hash (binds family/q/n/k/d/S)
//   u64  x header_count   kind-specific routing ids and counts
//   u64  x payload        field symbols
// Download accounting counts payload symbols only; headers are free, f0 is
// never present in any field.
enum class MsgKind : std::uint8_t {
  query = 1,
  response = 2,
  repair_req = 3,
  repair_sym = 4,
};

struct WireMessage {
  MsgKind kind;
  std::uint64_t params_hash;
  std::vector<std::uint64_t> header;
  std::vector<std::uint64_t> payload;

  bool operator==(const WireMessage&) const = default;
};

// Fixed per-kind header word counts.
//   query:      server_id, num_queries, file_count, stripes
//   response:   server_id, payload_count
//   repair_req: helper_id, failed_id
//   repair_sym: helper_id, failed_id, payload_count
std::size_t header_words(MsgKind kind);

std::string encode_frame(const WireMessage& msg);

// Throws MalformedFrame on truncation, bad kind, length disagreement or
// trailing bytes.
WireMessage decode_frame(const std::string& bytes);

}  // namespace pmpir::sim

#endif  // PMPIR_WIRE_HPP_
