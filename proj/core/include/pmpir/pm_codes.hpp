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

#ifndef PMPIR_PM_CODES_HPP_
#define PMPIR_PM_CODES_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "pmpir/nested_rs.hpp"

namespace pmpir::pm {

enum class Family : std::uint8_t { mbr = 0, msr = 1 };

const char* family_name(Family family);

// Validated (n, k, d) geometry with all derived quantities. MBR: alpha = d,
// S = n - k, B = k(d-k) + k(k+1)/2. MSR (restricted to d = 2k-2):
// alpha = k - 1, S = n - 2*alpha, B = alpha(alpha+1). beta = 1 for both.
// Evaluation points default to x = (1..n); for MSR the values x_i^alpha must
// be pairwise distinct or validation rejects the field.
struct CodeParams {
  Family family;
  std::size_t n, k, d;
  std::uint64_t q;
  std::size_t alpha;       // symbols stored per server per stripe
  std::size_t stripes;     // S
  std::size_t file_size;   // B, per stripe
  std::size_t psi_width;   // d (MBR) or 2*alpha (MSR): columns of the encoder
  gf::Field field;
  rs::EvalPoints points;

  // Total symbols in one file = stripes * file_size.
  std::size_t symbols_per_file() const { return stripes * file_size; }
  // Cut-set bound value sum_{i=0}^{k-1} min(alpha, (d-i)*beta); equals
  // file_size for every accepted parameter set.
  std::size_t cut_set_bound() const;
  // MSR only: x_i^alpha for each server.
  std::vector<gf::Elem> msr_lambdas() const;

  std::uint64_t header_hash() const;  // binds (family, q, n, k, d, S)

  bool operator==(const CodeParams&) const = default;
};

CodeParams validate_params(Family family, std::size_t n, std::size_t k,
                           std::size_t d, std::uint64_t q);

// One file arranged as S stripes of the product-matrix message layout.
// MBR: rows = cols = d per stripe, symmetric with a zero block at
// rows, cols >= k+1. MSR: rows = 2*alpha, cols = alpha, two stacked
// symmetric alpha x alpha blocks.
struct MessageArray {
  std::size_t rows, cols, stripes;
  std::vector<gf::Elem> data;  // indexed [s][i][j], all 0-based internally

  MessageArray(std::size_t rows, std::size_t cols, std::size_t stripes)
      : rows(rows), cols(cols), stripes(stripes),
        data(rows * cols * stripes, 0) {}

  // 1-based accessors matching the protocol notation M[i, j, s].
  gf::Elem at(std::size_t i, std::size_t j, std::size_t s) const {
    return data[((s - 1) * rows + (i - 1)) * cols + (j - 1)];
  }
  gf::Elem& at(std::size_t i, std::size_t j, std::size_t s) {
    return data[((s - 1) * rows + (i - 1)) * cols + (j - 1)];
  }

  bool operator==(const MessageArray&) const = default;
};

// Deterministic bijection from S*B raw file symbols to the message layout:
// per stripe, upper-triangle row-major fill of the symmetric block(s), then
// (MBR) the off-diagonal block row-major. Throws LengthMismatch.
MessageArray pack_message(std::span<const gf::Elem> file,
                          const CodeParams& params);

// Inverse of pack_message; verifies the symmetry / zero-block invariants and
// throws InvariantViolation when they do not hold.
std::vector<gf::Elem> unpack_message(const MessageArray& m,
                                     const CodeParams& params);

// Shares of all files across the n servers: store[i][f][s][j] linearized,
// where server row (i, f, s) holds alpha symbols.
struct NodeStore {
  CodeParams params;
  std::size_t file_count;
  std::vector<gf::Elem> data;

  NodeStore(CodeParams p, std::size_t files)
      : params(std::move(p)), file_count(files),
        data(params.n * files * params.stripes * params.alpha, 0) {}

  // 1-based (server, file, stripe, column).
  gf::Elem at(std::size_t i, std::size_t f, std::size_t s,
              std::size_t j) const {
    return data[offset(i, f, s) + (j - 1)];
  }
  gf::Elem& at(std::size_t i, std::size_t f, std::size_t s, std::size_t j) {
    return data[offset(i, f, s) + (j - 1)];
  }
  std::span<const gf::Elem> row(std::size_t i, std::size_t f,
                                std::size_t s) const {
    return {data.data() + offset(i, f, s), params.alpha};
  }
  // All of one server's symbols, ordered (f, s, j).
  std::span<const gf::Elem> server_slice(std::size_t i) const {
    std::size_t per = file_count * params.stripes * params.alpha;
    return {data.data() + (i - 1) * per, per};
  }

  bool operator==(const NodeStore&) const = default;

 private:
  std::size_t offset(std::size_t i, std::size_t f, std::size_t s) const {
    return (((i - 1) * file_count + (f - 1)) * params.stripes + (s - 1)) *
           params.alpha;
  }
};

// C = Psi * M columnwise per stripe; server i holds row i.
// `database` is the concatenation of F files, each S*B symbols.
NodeStore encode(std::span<const gf::Elem> database, const CodeParams& params);

// One server's contribution to a data-collector read: its rows for a single
// file, all stripes.
struct ServerShare {
  std::size_t server_id;                       // 1-based
  std::vector<std::vector<gf::Elem>> rows;     // rows[s-1] has alpha symbols
};

ServerShare extract_share(const NodeStore& store, std::size_t server_id,
                          std::size_t file_index);

// Recovers the message array of one file from shares of any k distinct
// servers. Throws NotEnoughShares / BadSubset.
MessageArray reconstruct_data(std::span<const ServerShare> shares,
                              const CodeParams& params);

// Repair: helper i projects its row onto the failed server's encoding vector
// and contributes one symbol per stripe per file.
struct HelperSymbols {
  std::size_t server_id;
  std::vector<gf::Elem> symbols;  // ordered (f, s)
};

// What a helper sends for the repair of `failed_id` (beta = 1 symbol per
// stripe per file), computed from the helper's own symbols ordered (f, s, j).
std::vector<gf::Elem> repair_projection(const CodeParams& params,
                                        std::size_t file_count,
                                        std::span<const gf::Elem> server_data,
                                        std::size_t failed_id);

HelperSymbols helper_repair_symbols(const NodeStore& store,
                                    std::size_t helper_id,
                                    std::size_t failed_id);

// Rebuilds the failed server's full content (ordered (f, s, j)) from exactly
// d helper contributions. Throws NotEnoughHelpers / HelperOverlap.
std::vector<gf::Elem> repair_node(std::size_t failed_id,
                                  std::span<const HelperSymbols> helpers,
                                  std::size_t file_count,
                                  const CodeParams& params);

}  // namespace pmpir::pm

#endif  // PMPIR_PM_CODES_HPP_
