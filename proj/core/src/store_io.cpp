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

#include "pmpir/store_io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

namespace pmpir::pm {

namespace {

constexpr std::array<char, 4> kMagic = {'P', 'M', 'P', 'R'};

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) {
    out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
  }
}

class Reader {
 public:
  Reader(const std::string& bytes, const std::string& name)
      : bytes_(bytes), name_(name) {}

  std::uint16_t u16() {
    need(2);
    std::uint16_t v = static_cast<std::uint8_t>(bytes_[pos_]) |
                      (static_cast<std::uint16_t>(
                           static_cast<std::uint8_t>(bytes_[pos_ + 1]))
                       << 8);
    pos_ += 2;
    return v;
  }
  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(bytes_[pos_++]);
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) {
      v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(
               bytes_[pos_ + b]))
           << (8 * b);
    }
    pos_ += 8;
    return v;
  }
  void expect_magic() {
    need(4);
    if (std::memcmp(bytes_.data() + pos_, kMagic.data(), 4) != 0) {
      fail(Errc::corrupt_store, name_ + ": bad magic");
    }
    pos_ += 4;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t count) {
    if (pos_ + count > bytes_.size()) {
      fail(Errc::corrupt_store, name_ + ": truncated");
    }
  }
  const std::string& bytes_;
  std::string name_;
  std::size_t pos_ = 0;
};

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(Errc::corrupt_store, "cannot open " + path.string());
  }
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  return bytes;
}

}  // namespace

void write_node_store(const NodeStore& store,
                      const std::filesystem::path& directory) {
  const CodeParams& p = store.params;
  std::filesystem::create_directories(directory);
  for (std::size_t i = 1; i <= p.n; ++i) {
    std::string out;
    out.append(kMagic.data(), kMagic.size());
    put_u16(out, kNodeFormatVersion);
    out.push_back(static_cast<char>(p.family));
    put_u64(out, p.q);
    put_u64(out, p.n);
    put_u64(out, p.k);
    put_u64(out, p.d);
    put_u64(out, store.file_count);
    put_u64(out, p.stripes);
    for (gf::Elem sym : store.server_slice(i)) put_u64(out, sym);

    std::filesystem::path path =
        directory / ("node_" + std::to_string(i) + ".bin");
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f.write(out.data(), static_cast<std::streamsize>(out.size()))) {
      fail(Errc::corrupt_store, "cannot write " + path.string());
    }
  }
}

NodeHeader read_node_header(const std::filesystem::path& node_file) {
  std::string bytes = slurp(node_file);
  Reader r(bytes, node_file.string());
  r.expect_magic();
  NodeHeader h;
  h.version = r.u16();
  if (h.version != kNodeFormatVersion) {
    fail(Errc::corrupt_store, node_file.string() + ": unsupported version " +
                                  std::to_string(h.version));
  }
  std::uint8_t fam = r.u8();
  if (fam > 1) {
    fail(Errc::corrupt_store, node_file.string() + ": unknown family byte");
  }
  h.family = static_cast<Family>(fam);
  h.q = r.u64();
  h.n = r.u64();
  h.k = r.u64();
  h.d = r.u64();
  h.file_count = r.u64();
  h.stripes = r.u64();
  return h;
}

NodeStore read_node_store(const std::filesystem::path& directory,
                          const CodeParams& params) {
  // Probe node_1 for the file count, then insist every node agrees.
  std::filesystem::path first = directory / "node_1.bin";
  NodeHeader h0 = read_node_header(first);
  if (h0.family != params.family || h0.q != params.q || h0.n != params.n ||
      h0.k != params.k || h0.d != params.d || h0.stripes != params.stripes) {
    fail(Errc::header_mismatch,
         first.string() + ": header disagrees with expected parameters");
  }

  NodeStore store(params, h0.file_count);
  std::size_t per_server = h0.file_count * params.stripes * params.alpha;
  for (std::size_t i = 1; i <= params.n; ++i) {
    std::filesystem::path path =
        directory / ("node_" + std::to_string(i) + ".bin");
    std::string bytes = slurp(path);
    Reader r(bytes, path.string());
    r.expect_magic();
    std::uint16_t version = r.u16();
    std::uint8_t fam = r.u8();
    std::uint64_t q = r.u64(), n = r.u64(), k = r.u64(), d = r.u64();
    std::uint64_t file_count = r.u64(), stripes = r.u64();
    if (version != h0.version || fam != static_cast<std::uint8_t>(h0.family) ||
        q != h0.q || n != h0.n || k != h0.k || d != h0.d ||
        file_count != h0.file_count || stripes != h0.stripes) {
      fail(Errc::header_mismatch,
           path.string() + ": header disagrees with node_1.bin");
    }
    if (r.remaining() != per_server * 8) {
      fail(Errc::corrupt_store, path.string() + ": wrong symbol count");
    }
    for (std::size_t t = 0; t < per_server; ++t) {
      std::uint64_t sym = r.u64();
      if (sym >= params.q) {
        fail(Errc::corrupt_store, path.string() + ": symbol out of field");
      }
      std::size_t f = t / (params.stripes * params.alpha);
      std::size_t rest = t % (params.stripes * params.alpha);
      std::size_t s = rest / params.alpha;
      std::size_t j = rest % params.alpha;
      store.at(i, f + 1, s + 1, j + 1) = sym;
    }
  }
  return store;
}

}  // namespace pmpir::pm
