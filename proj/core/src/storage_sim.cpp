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

#include "pmpir/storage_sim.hpp"

#include <algorithm>
#include <chrono>

#include <nlohmann/json.hpp>

#include "pmpir/stats.hpp"

namespace pmpir::sim {

ServerInstance::ServerInstance(pm::CodeParams params, std::size_t file_count,
                               std::size_t id, std::vector<gf::Elem> data)
    : params_(std::move(params)), file_count_(file_count), id_(id),
      data_(std::move(data)) {
  if (data_.size() != file_count_ * params_.stripes * params_.alpha) {
    fail(Errc::corrupt_store, "server data slice has wrong size");
  }
}

void ServerInstance::replace_data(std::vector<gf::Elem> data) {
  if (data.size() != data_.size()) {
    fail(Errc::corrupt_store, "replacement data has wrong size");
  }
  data_ = std::move(data);
}

std::string ServerInstance::handle_frame(const std::string& frame) {
  WireMessage msg = decode_frame(frame);
  if (msg.params_hash != params_.header_hash()) {
    fail(Errc::header_mismatch, "frame params hash does not match store");
  }
  switch (msg.kind) {
    case MsgKind::query: {
      std::size_t server_id = msg.header[0];
      std::size_t num_queries = msg.header[1];
      std::size_t files = msg.header[2];
      std::size_t stripes = msg.header[3];
      if (server_id != id_ || files != file_count_ ||
          stripes != params_.stripes) {
        fail(Errc::header_mismatch, "query header disagrees with server");
      }
      symbols_in_ += msg.payload.size();
      pir::Schedule schedule = params_.family == pm::Family::mbr
                                   ? mbr::make_schedule(params_)
                                   : msr::make_schedule(params_);
      std::vector<gf::Elem> reply =
          pir::respond(params_, file_count_, data_, id_, msg.payload,
                       num_queries, schedule);
      symbols_out_ += reply.size();
      WireMessage out{MsgKind::response,
                      params_.header_hash(),
                      {id_, reply.size()},
                      std::move(reply)};
      return encode_frame(out);
    }
    case MsgKind::repair_req: {
      std::size_t helper_id = msg.header[0];
      std::size_t failed_id = msg.header[1];
      if (helper_id != id_) {
        fail(Errc::header_mismatch, "repair request sent to wrong server");
      }
      std::vector<gf::Elem> symbols =
          pm::repair_projection(params_, file_count_, data_, failed_id);
      symbols_out_ += symbols.size();
      WireMessage out{MsgKind::repair_sym,
                      params_.header_hash(),
                      {id_, failed_id, symbols.size()},
                      std::move(symbols)};
      return encode_frame(out);
    }
    default:
      fail(Errc::malformed_frame, "server cannot handle this message kind");
  }
}

Cluster Cluster::from_store(const pm::NodeStore& store) {
  std::vector<ServerInstance> servers;
  servers.reserve(store.params.n);
  for (std::size_t i = 1; i <= store.params.n; ++i) {
    auto slice = store.server_slice(i);
    servers.emplace_back(store.params, store.file_count, i,
                         std::vector<gf::Elem>(slice.begin(), slice.end()));
  }
  return Cluster(store.params, store.file_count, std::move(servers));
}

Cluster cluster_load(const std::filesystem::path& directory,
                     const pm::CodeParams& params) {
  pm::NodeStore store = pm::read_node_store(directory, params);
  return Cluster::from_store(store);
}

std::string Transcript::to_json() const {
  nlohmann::json j;
  j["family"] = pm::family_name(family);
  j["params"] = {{"n", n}, {"k", k}, {"d", d}, {"q", q}};
  j["file_count"] = file_count;
  j["seed"] = seed;
  j["f0"] = f0;
  j["per_server_downloads"] = per_server_downloads;
  j["total_downloaded"] = total_downloaded;
  j["file_size"] = file_size;
  j["rate"] = rate.str();
  j["rate_decimal"] = rate.to_double();
  j["wall_time_seconds"] = wall_time_seconds;
  return j.dump(2);
}

RetrievalOutcome run_retrieval(Cluster& cluster, std::size_t f0,
                               std::uint64_t seed,
                               const RetrievalOptions& options) {
  const pm::CodeParams& params = cluster.params();
  if (cluster.file_count() == 0) {
    fail(Errc::bad_file_index, "cluster holds no files");
  }
  auto start = std::chrono::steady_clock::now();

  pir::Schedule schedule;
  pir::QuerySet queries;
  msr::RetrievalPlan plan;
  if (params.family == pm::Family::mbr) {
    schedule = mbr::make_schedule(params);
    queries = mbr::make_queries(params, cluster.file_count(), f0, seed,
                                options.pattern);
  } else {
    schedule = msr::make_schedule(params);
    plan = options.strategy ? msr::plan(params, *options.strategy)
                            : msr::plan_auto(params);
    queries = msr::make_queries(params, plan, cluster.file_count(), f0, seed);
  }

  Transcript transcript;
  transcript.family = params.family;
  transcript.n = params.n;
  transcript.k = params.k;
  transcript.d = params.d;
  transcript.q = params.q;
  transcript.file_count = cluster.file_count();
  transcript.seed = seed;
  transcript.f0 = f0;
  transcript.per_server_downloads.assign(params.n, 0);
  transcript.file_size = params.symbols_per_file();

  // One query frame per server, one response frame back; only response
  // payload symbols count toward the download totals.
  pir::ResponseBundle bundle;
  for (std::size_t i = 1; i <= params.n; ++i) {
    WireMessage query_msg{
        MsgKind::query,
        params.header_hash(),
        {i, queries.num_queries, queries.file_count, queries.stripes},
        queries.server_query(i)};
    std::string reply_bytes =
        cluster.server(i).handle_frame(encode_frame(query_msg));
    WireMessage reply = decode_frame(reply_bytes);
    if (reply.kind != MsgKind::response || reply.header[0] != i ||
        reply.header[1] != reply.payload.size()) {
      fail(Errc::malformed_frame, "unexpected reply to a query frame");
    }
    scatter_response(bundle, schedule, i, queries.num_queries, reply.payload);
    transcript.per_server_downloads[i - 1] = reply.payload.size();
    transcript.total_downloaded += reply.payload.size();
  }

  pir::RetrievalResult result =
      params.family == pm::Family::mbr
          ? mbr::reconstruct(bundle, queries, params)
          : msr::reconstruct(bundle, queries, plan, params);

  transcript.rate =
      Fraction(static_cast<std::int64_t>(transcript.file_size),
               static_cast<std::int64_t>(transcript.total_downloaded));
  transcript.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  RetrievalOutcome outcome;
  outcome.file = std::move(result.file);
  outcome.transcript = std::move(transcript);
  outcome.ledger = std::move(result.ledger);
  return outcome;
}

RepairOutcome run_repair(Cluster& cluster, std::size_t failed_id,
                         std::span<const std::size_t> helper_ids) {
  const pm::CodeParams& params = cluster.params();
  if (helper_ids.size() != params.d) {
    fail(Errc::not_enough_helpers,
         "need exactly d = " + std::to_string(params.d) + " helpers");
  }
  RepairOutcome outcome;
  outcome.failed_id = failed_id;

  std::vector<pm::HelperSymbols> contributions;
  contributions.reserve(helper_ids.size());
  for (std::size_t helper : helper_ids) {
    if (helper == failed_id) {
      fail(Errc::helper_overlap, "failed server cannot be its own helper");
    }
    WireMessage req{MsgKind::repair_req,
                    params.header_hash(),
                    {helper, failed_id},
                    {}};
    std::string reply_bytes =
        cluster.server(helper).handle_frame(encode_frame(req));
    WireMessage reply = decode_frame(reply_bytes);
    if (reply.kind != MsgKind::repair_sym || reply.header[0] != helper ||
        reply.header[1] != failed_id ||
        reply.header[2] != reply.payload.size()) {
      fail(Errc::malformed_frame, "unexpected reply to a repair request");
    }
    outcome.downloaded_symbols += reply.payload.size();
    contributions.push_back(pm::HelperSymbols{helper, reply.payload});
  }

  outcome.restored = pm::repair_node(failed_id, contributions,
                                     cluster.file_count(), params);
  cluster.server(failed_id).replace_data(outcome.restored);
  return outcome;
}

std::string AuditReport::to_json() const {
  nlohmann::json j;
  j["trials"] = trials;
  j["structural_pass"] = structural_pass;
  j["structural_failures"] = structural_failures;
  j["cells_total"] = cells_total;
  j["cells_above_threshold"] = cells_above_threshold;
  j["fraction_above"] = fraction_above();
  j["min_pvalue"] = min_pvalue;
  j["pvalue_threshold"] = pvalue_threshold;
  return j.dump(2);
}

AuditReport audit_privacy(pm::Family family, std::size_t n, std::size_t k,
                          std::size_t d, std::uint64_t q,
                          std::size_t file_count, std::size_t trials,
                          std::uint64_t seed, bool plant_leak) {
  if (trials < 1) fail(Errc::invalid_geometry, "need at least one trial");
  if (file_count < 1) fail(Errc::bad_file_index, "need at least one file");
  gf::Field field = gf::Field::make(q);  // primality only; n may exceed q - 1

  // Geometry-only derivation of the query shape.
  std::size_t num_queries, stripes;
  std::vector<std::vector<std::size_t>> cells;
  if (family == pm::Family::mbr) {
    if (k == 0 || k > d || d >= n || n < 2 * k) {
      fail(Errc::invalid_geometry, "invalid MBR geometry");
    }
    num_queries = k;
    stripes = n - k;
    cells = mbr::pattern_cells(n, k, stripes, mbr::Pattern::descending);
  } else {
    if (k < 2 || d != 2 * k - 2 || n < d + 2) {
      fail(Errc::invalid_geometry, "invalid MSR geometry");
    }
    std::size_t alpha = k - 1;
    num_queries = 2 * alpha;
    stripes = n - 2 * alpha;
    cells = stripes >= 2 * alpha ? msr::tail_cells(n, alpha, stripes)
                                 : msr::grouped_cells(n, alpha, stripes);
  }

  AuditReport report;
  report.trials = trials;
  report.structural_pass = true;
  report.cells_total = n * num_queries * stripes * file_count;

  // counts[(i, l, s, f)][v]: distribution of the visible query values
  std::vector<std::vector<std::uint64_t>> counts(
      report.cells_total, std::vector<std::uint64_t>(q, 0));

  SplitMix64 master(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    std::uint64_t trial_seed = master.next();
    std::size_t f0 = (t % file_count) + 1;

    pir::QuerySet qs;
    qs.num_queries = num_queries;
    qs.n = n;
    qs.stripes = stripes;
    qs.file_count = file_count;
    qs.f0 = f0;
    qs.seed = trial_seed;
    qs.q = q;
    qs.lambda = pir::draw_lambdas(trial_seed, q, num_queries, stripes,
                                  file_count);
    qs.cells = cells;
    if (plant_leak) {
      // Negative control: a broken generator folding f0 into the mask.
      qs.lambda[0] = (qs.lambda[0] + f0) % q;
    }

    // Structural check: stripping the public pattern from what each server
    // sees must reproduce the honest seeded stream exactly.
    std::vector<gf::Elem> honest = pir::draw_lambdas(
        trial_seed, q, num_queries, stripes, file_count);
    std::size_t cell = 0;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t l = 1; l <= num_queries; ++l) {
        for (std::size_t s = 1; s <= stripes; ++s) {
          for (std::size_t f = 1; f <= file_count; ++f) {
            gf::Elem visible = qs.query_value(l, i, s, f);
            gf::Elem pattern =
                (f == f0 && cells[l - 1][s - 1] == i) ? 1 : 0;
            gf::Elem recovered = field.sub(visible, pattern);
            if (recovered !=
                honest[((l - 1) * stripes + (s - 1)) * file_count + (f - 1)]) {
              ++report.structural_failures;
              report.structural_pass = false;
            }
            counts[cell][visible] += 1;
            ++cell;
          }
        }
      }
    }
  }

  for (const auto& c : counts) {
    double stat = stats::chi_square_statistic(c);
    double p = stats::chi_square_pvalue(stat, q - 1);
    report.min_pvalue = std::min(report.min_pvalue, p);
    if (p > report.pvalue_threshold) ++report.cells_above_threshold;
  }
  return report;
}

}  // namespace pmpir::sim
