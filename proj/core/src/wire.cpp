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

#include "pmpir/wire.hpp"

namespace pmpir::sim {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) {
    out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
  }
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) {
    out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
  }
}

std::uint64_t get_u64(const std::string& bytes, std::size_t pos) {
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b) {
    v |= static_cast<std::uint64_t>(
             static_cast<std::uint8_t>(bytes[pos + b]))
         << (8 * b);
  }
  return v;
}

}  // namespace

std::size_t header_words(MsgKind kind) {
  switch (kind) {
    case MsgKind::query: return 4;
    case MsgKind::response: return 2;
    case MsgKind::repair_req: return 2;
    case MsgKind::repair_sym: return 3;
  }
  fail(Errc::malformed_frame, "unknown message kind");
}

std::string encode_frame(const WireMessage& msg) {
  if (msg.header.size() != header_words(msg.kind)) {
    fail(Errc::malformed_frame, "header word count does not match kind");
  }
  std::string body;
  body.push_back(static_cast<char>(msg.kind));
  put_u64(body, msg.params_hash);
  for (std::uint64_t h : msg.header) put_u64(body, h);
  for (std::uint64_t s : msg.payload) put_u64(body, s);

  std::string out;
  put_u32(out, static_cast<std::uint32_t>(body.size()));
  out += body;
  return out;
}

WireMessage decode_frame(const std::string& bytes) {
  if (bytes.size() < 4) fail(Errc::malformed_frame, "shorter than a prefix");
  std::uint32_t len = 0;
  for (int b = 0; b < 4; ++b) {
    len |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(bytes[b]))
           << (8 * b);
  }
  if (bytes.size() != 4u + len) {
    fail(Errc::malformed_frame, "length prefix disagrees with frame size");
  }
  if (len < 1 + 8) fail(Errc::malformed_frame, "frame too short for header");

  std::uint8_t kind_byte = static_cast<std::uint8_t>(bytes[4]);
  if (kind_byte < 1 || kind_byte > 4) {
    fail(Errc::malformed_frame, "unknown message kind");
  }
  WireMessage msg;
  msg.kind = static_cast<MsgKind>(kind_byte);
  msg.params_hash = get_u64(bytes, 5);

  std::size_t pos = 13;
  std::size_t hw = header_words(msg.kind);
  if (len < 1 + 8 + hw * 8 || (len - 1 - 8 - hw * 8) % 8 != 0) {
    fail(Errc::malformed_frame, "frame size does not fit the kind layout");
  }
  msg.header.reserve(hw);
  for (std::size_t t = 0; t < hw; ++t, pos += 8) {
    msg.header.push_back(get_u64(bytes, pos));
  }
  std::size_t payload_count = (len - 1 - 8 - hw * 8) / 8;
  msg.payload.reserve(payload_count);
  for (std::size_t t = 0; t < payload_count; ++t, pos += 8) {
    msg.payload.push_back(get_u64(bytes, pos));
  }
  return msg;
}

}  // namespace pmpir::sim
