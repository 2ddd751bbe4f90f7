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

#ifndef PMPIR_STORAGE_SIM_HPP_
#define PMPIR_STORAGE_SIM_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pmpir/pir_mbr.hpp"
#include "pmpir/pir_msr.hpp"
#include "pmpir/store_io.hpp"
#include "pmpir/wire.hpp"

namespace pmpir::sim {

// One storage node. It owns only its own symbols and talks exclusively in
// wire frames; nothing here can observe another server or the client's
// target index.
class ServerInstance {
 public:
  ServerInstance(pm::CodeParams params, std::size_t file_count, std::size_t id,
                 std::vector<gf::Elem> data);

  std::size_t id() const { return id_; }
  std::uint64_t symbols_in() const { return symbols_in_; }
  std::uint64_t symbols_out() const { return symbols_out_; }
  const std::vector<gf::Elem>& data() const { return data_; }  // (f, s, j)

  // Decodes one request frame, serves it, returns the encoded reply frame.
  std::string handle_frame(const std::string& frame);

  // Failure/repair drill support.
  void replace_data(std::vector<gf::Elem> data);

 private:
  pm::CodeParams params_;
  std::size_t file_count_;
  std::size_t id_;
  std::vector<gf::Elem> data_;
  std::uint64_t symbols_in_ = 0;
  std::uint64_t symbols_out_ = 0;
};

class Cluster {
 public:
  Cluster(pm::CodeParams params, std::size_t file_count,
          std::vector<ServerInstance> servers)
      : params_(std::move(params)), file_count_(file_count),
        servers_(std::move(servers)) {}

  static Cluster from_store(const pm::NodeStore& store);

  const pm::CodeParams& params() const { return params_; }
  std::size_t file_count() const { return file_count_; }
  ServerInstance& server(std::size_t id) { return servers_[id - 1]; }
  const ServerInstance& server(std::size_t id) const {
    return servers_[id - 1];
  }
  std::size_t size() const { return servers_.size(); }

 private:
  pm::CodeParams params_;
  std::size_t file_count_;
  std::vector<ServerInstance> servers_;
};

// Loads node_<i>.bin files and verifies they agree with `params`.
Cluster cluster_load(const std::filesystem::path& directory,
                     const pm::CodeParams& params);

// Client-side record of one retrieval. The rate is file_size / total
// downloaded symbols, kept as an exact fraction. f0 appears here and only
// here; no server-visible message carries it.
struct Transcript {
  pm::Family family;
  std::size_t n, k, d;
  std::uint64_t q;
  std::size_t file_count;
  std::uint64_t seed;
  std::size_t f0;
  std::vector<std::uint64_t> per_server_downloads;
  std::uint64_t total_downloaded = 0;
  std::size_t file_size = 0;  // S * B
  Fraction rate;
  double wall_time_seconds = 0.0;

  std::string to_json() const;
};

struct RetrievalOptions {
  mbr::Pattern pattern = mbr::Pattern::descending;
  // nullopt = try tail, grouped, search in order
  std::optional<msr::Strategy> strategy;
};

struct RetrievalOutcome {
  std::vector<gf::Elem> file;
  Transcript transcript;
  pir::Ledger ledger;
};

RetrievalOutcome run_retrieval(Cluster& cluster, std::size_t f0,
                               std::uint64_t seed,
                               const RetrievalOptions& options = {});

struct RepairOutcome {
  std::size_t failed_id;
  std::vector<gf::Elem> restored;        // (f, s, j)
  std::uint64_t downloaded_symbols = 0;  // d per stripe per file in total
};

// Drives the repair over the wire and installs the rebuilt row on the failed
// instance. Helpers must be exactly d servers not including the failed one.
RepairOutcome run_repair(Cluster& cluster, std::size_t failed_id,
                         std::span<const std::size_t> helper_ids);

// Privacy audit over the query generator only. Works for any prime q >= 2
// and any sane geometry, independent of whether the code itself fits the
// field (the pattern and mask never touch evaluation points).
struct AuditReport {
  std::size_t trials = 0;
  bool structural_pass = false;
  std::uint64_t structural_failures = 0;
  std::size_t cells_total = 0;
  std::size_t cells_above_threshold = 0;
  double min_pvalue = 1.0;
  double pvalue_threshold = 1e-6;

  double fraction_above() const {
    return cells_total == 0
               ? 1.0
               : static_cast<double>(cells_above_threshold) / cells_total;
  }
  std::string to_json() const;
};

AuditReport audit_privacy(pm::Family family, std::size_t n, std::size_t k,
                          std::size_t d, std::uint64_t q,
                          std::size_t file_count, std::size_t trials,
                          std::uint64_t seed, bool plant_leak = false);

}  // namespace pmpir::sim

#endif  // PMPIR_STORAGE_SIM_HPP_
