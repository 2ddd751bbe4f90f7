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

#ifndef PMPIR_STORE_IO_HPP_
#define PMPIR_STORE_IO_HPP_

#include <filesystem>

#include "pmpir/pm_codes.hpp"

namespace pmpir::pm {

// Node file format, one file per server, named node_<i>.bin:
//   magic  "PMPR"                         4 bytes
//   version u16 LE                        (currently 1)
//   family  u8                            (0 = MBR, 1 = MSR)
//   q, n, k, d, F, S                      u64 LE each
//   symbols u64 LE, ordered (file asc, stripe asc, column asc)
// The packing order is fixed so stores are bit-reproducible.

inline constexpr std::uint16_t kNodeFormatVersion = 1;

void write_node_store(const NodeStore& store,
                      const std::filesystem::path& directory);

// Parsed header of a single node file.
struct NodeHeader {
  std::uint16_t version;
  Family family;
  std::uint64_t q;
  std::uint64_t n, k, d, file_count, stripes;
};

// Reads all n node files back into a NodeStore. Throws CorruptStore on
// missing/truncated/garbled files and HeaderMismatch when the files disagree
// with each other or with `params`.
NodeStore read_node_store(const std::filesystem::path& directory,
                          const CodeParams& params);

// Header probe used to discover parameters before validation.
NodeHeader read_node_header(const std::filesystem::path& node_file);

}  // namespace pmpir::pm

#endif  // PMPIR_STORE_IO_HPP_
