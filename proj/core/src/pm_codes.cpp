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

#include "pmpir/pm_codes.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

namespace pmpir::pm {

const char* family_name(Family family) {
  return family == Family::mbr ? "mbr" : "msr";
}

std::size_t CodeParams::cut_set_bound() const {
  std::size_t total = 0;
  for (std::size_t i = 0; i < k; ++i) {
    total += std::min(alpha, d - i);  // beta = 1
  }
  return total;
}

std::vector<gf::Elem> CodeParams::msr_lambdas() const {
  std::vector<gf::Elem> lambdas(n);
  for (std::size_t i = 0; i < n; ++i) {
    lambdas[i] = field.pow(points.x[i], alpha);
  }
  return lambdas;
}

std::uint64_t CodeParams::header_hash() const {
  // FNV-1a over the canonical parameter tuple.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<std::uint64_t>(family));
  mix(q);
  mix(n);
  mix(k);
  mix(d);
  mix(stripes);
  return h;
}

CodeParams validate_params(Family family, std::size_t n, std::size_t k,
                           std::size_t d, std::uint64_t q) {
  if (n == 0 || k == 0 || d == 0) {
    fail(Errc::invalid_geometry, "parameters must be positive");
  }
  if (k > d) fail(Errc::invalid_geometry, "requires k <= d");
  if (d >= n) fail(Errc::invalid_geometry, "requires d <= n - 1");

  std::size_t alpha, stripes, file_size, psi_width;
  if (family == Family::mbr) {
    if (n < 2 * k) {
      // The retrieval pattern places one cell per stripe on distinct
      // servers, which needs k <= S = n - k.
      fail(Errc::invalid_geometry, "MBR scheme requires n >= 2k");
    }
    alpha = d;
    stripes = n - k;
    file_size = k * (d - k) + k * (k + 1) / 2;
    psi_width = d;
  } else {
    if (d != 2 * k - 2) {
      fail(Errc::invalid_geometry, "MSR scheme requires d = 2k - 2");
    }
    alpha = k - 1;
    if (n < 2 * alpha + 2) {
      fail(Errc::invalid_geometry, "MSR scheme requires S = n - 2*alpha >= 2");
    }
    stripes = n - 2 * alpha;
    file_size = alpha * (alpha + 1);
    psi_width = 2 * alpha;
  }

  if (q < n + 1) {
    fail(Errc::field_too_small,
         "need q >= n + 1 = " + std::to_string(n + 1));
  }
  gf::Field field = gf::Field::make(q);
  rs::EvalPoints points = rs::EvalPoints::consecutive(field, n);

  CodeParams params{family, n,     k,         d,         q,
                    alpha,  stripes, file_size, psi_width, field,
                    points};

  if (params.cut_set_bound() != file_size) {
    fail(Errc::invalid_geometry, "cut-set bound not met with equality");
  }
  if (family == Family::msr) {
    std::vector<gf::Elem> lambdas = params.msr_lambdas();
    std::unordered_set<gf::Elem> seen(lambdas.begin(), lambdas.end());
    if (seen.size() != lambdas.size()) {
      fail(Errc::field_too_small,
           "x_i^alpha values collide over F_" + std::to_string(q) +
               "; use a larger prime");
    }
  }
  return params;
}

MessageArray pack_message(std::span<const gf::Elem> file,
                          const CodeParams& params) {
  if (file.size() != params.symbols_per_file()) {
    fail(Errc::length_mismatch,
         "file has " + std::to_string(file.size()) + " symbols, expected " +
             std::to_string(params.symbols_per_file()));
  }
  const std::size_t k = params.k, d = params.d, alpha = params.alpha;
  std::size_t rows = (params.family == Family::mbr) ? d : 2 * alpha;
  std::size_t cols = (params.family == Family::mbr) ? d : alpha;
  MessageArray m(rows, cols, params.stripes);

  std::size_t pos = 0;
  for (std::size_t s = 1; s <= params.stripes; ++s) {
    if (params.family == Family::mbr) {
      // symmetric k x k block, upper triangle row-major
      for (std::size_t i = 1; i <= k; ++i) {
        for (std::size_t j = i; j <= k; ++j) {
          m.at(i, j, s) = file[pos];
          m.at(j, i, s) = file[pos];
          ++pos;
        }
      }
      // k x (d-k) block and its mirror; rows/cols >= k+1 stay zero
      for (std::size_t i = 1; i <= k; ++i) {
        for (std::size_t j = k + 1; j <= d; ++j) {
          m.at(i, j, s) = file[pos];
          m.at(j, i, s) = file[pos];
          ++pos;
        }
      }
    } else {
      // two independent symmetric alpha x alpha blocks, stacked
      for (std::size_t block = 0; block < 2; ++block) {
        std::size_t base = block * alpha;
        for (std::size_t i = 1; i <= alpha; ++i) {
          for (std::size_t j = i; j <= alpha; ++j) {
            m.at(base + i, j, s) = file[pos];
            m.at(base + j, i, s) = file[pos];
            ++pos;
          }
        }
      }
    }
  }
  return m;
}

std::vector<gf::Elem> unpack_message(const MessageArray& m,
                                     const CodeParams& params) {
  const std::size_t k = params.k, d = params.d, alpha = params.alpha;
  for (std::size_t s = 1; s <= params.stripes; ++s) {
    if (params.family == Family::mbr) {
      for (std::size_t i = 1; i <= d; ++i) {
        for (std::size_t j = i; j <= d; ++j) {
          if (m.at(i, j, s) != m.at(j, i, s)) {
            fail(Errc::invariant_violation, "message matrix not symmetric");
          }
          if (i >= k + 1 && j >= k + 1 && m.at(i, j, s) != 0) {
            fail(Errc::invariant_violation, "nonzero entry in zero block");
          }
        }
      }
    } else {
      for (std::size_t block = 0; block < 2; ++block) {
        std::size_t base = block * alpha;
        for (std::size_t i = 1; i <= alpha; ++i) {
          for (std::size_t j = i; j <= alpha; ++j) {
            if (m.at(base + i, j, s) != m.at(base + j, i, s)) {
              fail(Errc::invariant_violation,
                   "message block not symmetric");
            }
          }
        }
      }
    }
  }

  std::vector<gf::Elem> file;
  file.reserve(params.symbols_per_file());
  for (std::size_t s = 1; s <= params.stripes; ++s) {
    if (params.family == Family::mbr) {
      for (std::size_t i = 1; i <= k; ++i) {
        for (std::size_t j = i; j <= k; ++j) file.push_back(m.at(i, j, s));
      }
      for (std::size_t i = 1; i <= k; ++i) {
        for (std::size_t j = k + 1; j <= d; ++j) file.push_back(m.at(i, j, s));
      }
    } else {
      for (std::size_t block = 0; block < 2; ++block) {
        std::size_t base = block * alpha;
        for (std::size_t i = 1; i <= alpha; ++i) {
          for (std::size_t j = i; j <= alpha; ++j) {
            file.push_back(m.at(base + i, j, s));
          }
        }
      }
    }
  }
  return file;
}

NodeStore encode(std::span<const gf::Elem> database,
                 const CodeParams& params) {
  std::size_t per_file = params.symbols_per_file();
  if (per_file == 0 || database.size() == 0 ||
      database.size() % per_file != 0) {
    fail(Errc::length_mismatch,
         "database size must be a positive multiple of S*B = " +
             std::to_string(per_file));
  }
  std::size_t file_count = database.size() / per_file;
  gf::Mat psi = vandermonde(params.field, params.points.x, params.psi_width);

  NodeStore store(params, file_count);
  for (std::size_t f = 1; f <= file_count; ++f) {
    MessageArray m = pack_message(
        database.subspan((f - 1) * per_file, per_file), params);
    for (std::size_t s = 1; s <= params.stripes; ++s) {
      gf::Mat stripe(params.field, m.rows, m.cols);
      for (std::size_t i = 1; i <= m.rows; ++i) {
        for (std::size_t j = 1; j <= m.cols; ++j) {
          stripe.at(i - 1, j - 1) = m.at(i, j, s);
        }
      }
      gf::Mat c = psi.mul(stripe);  // n x alpha
      for (std::size_t i = 1; i <= params.n; ++i) {
        for (std::size_t j = 1; j <= params.alpha; ++j) {
          store.at(i, f, s, j) = c.at(i - 1, j - 1);
        }
      }
    }
  }
  return store;
}

ServerShare extract_share(const NodeStore& store, std::size_t server_id,
                          std::size_t file_index) {
  ServerShare share;
  share.server_id = server_id;
  share.rows.resize(store.params.stripes);
  for (std::size_t s = 1; s <= store.params.stripes; ++s) {
    auto row = store.row(server_id, file_index, s);
    share.rows[s - 1].assign(row.begin(), row.end());
  }
  return share;
}

namespace {

void check_share_ids(std::span<const ServerShare> shares,
                     const CodeParams& params) {
  if (shares.size() != params.k) {
    fail(Errc::not_enough_shares,
         "need exactly k = " + std::to_string(params.k) + " shares, got " +
             std::to_string(shares.size()));
  }
  std::unordered_set<std::size_t> ids;
  for (const auto& sh : shares) {
    if (sh.server_id < 1 || sh.server_id > params.n) {
      fail(Errc::bad_subset, "server id out of range");
    }
    if (!ids.insert(sh.server_id).second) {
      fail(Errc::bad_subset, "duplicate server id in share set");
    }
  }
}

// phi_i = (1, x_i, ..., x_i^(width-1)) for the given 1-based server ids.
gf::Mat vandermonde_rows(const CodeParams& params,
                         std::span<const std::size_t> ids, std::size_t width) {
  gf::Mat m(params.field, ids.size(), width);
  for (std::size_t r = 0; r < ids.size(); ++r) {
    gf::Elem v = 1;
    for (std::size_t c = 0; c < width; ++c) {
      m.at(r, c) = v;
      v = params.field.mul(v, params.points.x[ids[r] - 1]);
    }
  }
  return m;
}

MessageArray reconstruct_mbr(std::span<const ServerShare> shares,
                             const CodeParams& params) {
  const std::size_t k = params.k, d = params.d;
  std::vector<std::size_t> ids(k);
  for (std::size_t t = 0; t < k; ++t) ids[t] = shares[t].server_id;

  gf::Mat psi_sub = vandermonde_rows(params, ids, d);
  gf::Mat phi(params.field, k, k);        // first k columns
  gf::Mat delta(params.field, k, d - k);  // last d-k columns
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      if (c < k) {
        phi.at(r, c) = psi_sub.at(r, c);
      } else {
        delta.at(r, c - k) = psi_sub.at(r, c);
      }
    }
  }
  gf::Mat phi_inv = mat_invert(phi);

  MessageArray m(d, d, params.stripes);
  for (std::size_t s = 1; s <= params.stripes; ++s) {
    gf::Mat received(params.field, k, d);
    for (std::size_t t = 0; t < k; ++t) {
      const auto& row = shares[t].rows[s - 1];
      if (row.size() != d) {
        fail(Errc::not_enough_shares, "share row has wrong width");
      }
      for (std::size_t c = 0; c < d; ++c) received.at(t, c) = row[c];
    }
    // received = [ Phi*S + Delta*T^t | Phi*T ]
    gf::Mat tail(params.field, k, d - k);
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < d - k; ++c) {
        tail.at(r, c) = received.at(r, k + c);
      }
    }
    gf::Mat t_block = phi_inv.mul(tail);  // k x (d-k)
    gf::Mat head(params.field, k, k);
    gf::Mat delta_tt = delta.mul(t_block.transpose());
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < k; ++c) {
        head.at(r, c) = params.field.sub(received.at(r, c), delta_tt.at(r, c));
      }
    }
    gf::Mat s_block = phi_inv.mul(head);  // k x k, symmetric

    for (std::size_t i = 1; i <= k; ++i) {
      for (std::size_t j = 1; j <= k; ++j) {
        m.at(i, j, s) = s_block.at(i - 1, j - 1);
      }
      for (std::size_t j = k + 1; j <= d; ++j) {
        m.at(i, j, s) = t_block.at(i - 1, j - k - 1);
        m.at(j, i, s) = t_block.at(i - 1, j - k - 1);
      }
    }
  }
  return m;
}

MessageArray reconstruct_msr(std::span<const ServerShare> shares,
                             const CodeParams& params) {
  const gf::Field& f = params.field;
  const std::size_t k = params.k, alpha = params.alpha;
  std::vector<std::size_t> ids(k);
  for (std::size_t t = 0; t < k; ++t) ids[t] = shares[t].server_id;

  std::vector<gf::Elem> lambdas = params.msr_lambdas();
  gf::Mat phi = vandermonde_rows(params, ids, alpha);  // k x alpha

  // For recovering z = S * phi_i from the off-diagonal inner products, the
  // alpha x alpha system uses the other k-1 = alpha rows of phi.
  std::vector<gf::Mat> phi_minus;
  phi_minus.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    gf::Mat mi(f, alpha, alpha);
    std::size_t rr = 0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      for (std::size_t c = 0; c < alpha; ++c) mi.at(rr, c) = phi.at(j, c);
      ++rr;
    }
    phi_minus.push_back(mat_invert(mi));
  }
  // S = Z * (Phi_A^t)^-1 over the first alpha contacted servers.
  gf::Mat phi_a_t(f, alpha, alpha);
  for (std::size_t i = 0; i < alpha; ++i) {
    for (std::size_t c = 0; c < alpha; ++c) phi_a_t.at(c, i) = phi.at(i, c);
  }
  gf::Mat phi_a_t_inv = mat_invert(phi_a_t);

  MessageArray m(2 * alpha, alpha, params.stripes);
  for (std::size_t s = 1; s <= params.stripes; ++s) {
    // P[i][j] = <row_i, phi_j> = A_ij + lambda_i * B_ij
    gf::Mat p(f, k, k);
    for (std::size_t i = 0; i < k; ++i) {
      const auto& row = shares[i].rows[s - 1];
      if (row.size() != alpha) {
        fail(Errc::not_enough_shares, "share row has wrong width");
      }
      for (std::size_t j = 0; j < k; ++j) {
        gf::Elem acc = 0;
        for (std::size_t c = 0; c < alpha; ++c) {
          acc = f.add(acc, f.mul(row[c], phi.at(j, c)));
        }
        p.at(i, j) = acc;
      }
    }
    // off-diagonal split using distinct lambda values
    gf::Mat a(f, k, k), b(f, k, k);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        gf::Elem li = lambdas[ids[i] - 1], lj = lambdas[ids[j] - 1];
        gf::Elem diff = f.sub(p.at(i, j), p.at(j, i));
        gf::Elem bij = f.mul(diff, f.inv(f.sub(li, lj)));
        gf::Elem aij = f.sub(p.at(i, j), f.mul(li, bij));
        a.at(i, j) = aij;
        a.at(j, i) = aij;
        b.at(i, j) = bij;
        b.at(j, i) = bij;
      }
    }
    // z_i = S * phi_i from { <phi_j, z_i> = A_ij : j != i }
    auto recover_block = [&](const gf::Mat& inner) {
      gf::Mat z(f, alpha, k);  // column i holds S * phi_i
      for (std::size_t i = 0; i < k; ++i) {
        std::vector<gf::Elem> rhs;
        rhs.reserve(alpha);
        for (std::size_t j = 0; j < k; ++j) {
          if (j != i) rhs.push_back(inner.at(j, i));
        }
        std::vector<gf::Elem> zi = phi_minus[i].mul_vec(rhs);
        for (std::size_t r = 0; r < alpha; ++r) z.at(r, i) = zi[r];
      }
      gf::Mat za(f, alpha, alpha);
      for (std::size_t r = 0; r < alpha; ++r) {
        for (std::size_t c = 0; c < alpha; ++c) za.at(r, c) = z.at(r, c);
      }
      return za.mul(phi_a_t_inv);  // alpha x alpha symmetric block
    };
    gf::Mat s1 = recover_block(a);
    gf::Mat s2 = recover_block(b);
    for (std::size_t i = 1; i <= alpha; ++i) {
      for (std::size_t j = 1; j <= alpha; ++j) {
        m.at(i, j, s) = s1.at(i - 1, j - 1);
        m.at(alpha + i, j, s) = s2.at(i - 1, j - 1);
      }
    }
  }
  return m;
}

}  // namespace

MessageArray reconstruct_data(std::span<const ServerShare> shares,
                              const CodeParams& params) {
  check_share_ids(shares, params);
  return params.family == Family::mbr ? reconstruct_mbr(shares, params)
                                      : reconstruct_msr(shares, params);
}

std::vector<gf::Elem> repair_projection(const CodeParams& params,
                                        std::size_t file_count,
                                        std::span<const gf::Elem> server_data,
                                        std::size_t failed_id) {
  const gf::Field& f = params.field;
  if (failed_id < 1 || failed_id > params.n) {
    fail(Errc::bad_subset, "failed server id out of range");
  }
  if (server_data.size() != file_count * params.stripes * params.alpha) {
    fail(Errc::length_mismatch, "server data slice has wrong size");
  }
  // MBR projects onto the failed server's full encoding row, MSR onto its
  // width-alpha prefix.
  std::size_t proj_width =
      params.family == Family::mbr ? params.d : params.alpha;
  std::vector<gf::Elem> proj(proj_width);
  gf::Elem v = 1;
  for (std::size_t c = 0; c < proj_width; ++c) {
    proj[c] = v;
    v = f.mul(v, params.points.x[failed_id - 1]);
  }

  std::vector<gf::Elem> out;
  out.reserve(file_count * params.stripes);
  for (std::size_t file = 1; file <= file_count; ++file) {
    for (std::size_t s = 1; s <= params.stripes; ++s) {
      const gf::Elem* row =
          server_data.data() +
          ((file - 1) * params.stripes + (s - 1)) * params.alpha;
      gf::Elem acc = 0;
      for (std::size_t c = 0; c < proj_width; ++c) {
        acc = f.add(acc, f.mul(row[c], proj[c]));
      }
      out.push_back(acc);
    }
  }
  return out;
}

HelperSymbols helper_repair_symbols(const NodeStore& store,
                                    std::size_t helper_id,
                                    std::size_t failed_id) {
  HelperSymbols out;
  out.server_id = helper_id;
  out.symbols = repair_projection(store.params, store.file_count,
                                  store.server_slice(helper_id), failed_id);
  return out;
}

std::vector<gf::Elem> repair_node(std::size_t failed_id,
                                  std::span<const HelperSymbols> helpers,
                                  std::size_t file_count,
                                  const CodeParams& params) {
  const gf::Field& f = params.field;
  if (helpers.size() != params.d) {
    fail(Errc::not_enough_helpers,
         "need exactly d = " + std::to_string(params.d) + " helpers, got " +
             std::to_string(helpers.size()));
  }
  std::unordered_set<std::size_t> ids;
  for (const auto& h : helpers) {
    if (h.server_id == failed_id) {
      fail(Errc::helper_overlap, "failed server cannot help itself");
    }
    if (h.server_id < 1 || h.server_id > params.n ||
        !ids.insert(h.server_id).second) {
      fail(Errc::bad_subset, "invalid helper set");
    }
    if (h.symbols.size() != file_count * params.stripes) {
      fail(Errc::not_enough_helpers, "helper contribution has wrong size");
    }
  }

  std::vector<std::size_t> helper_ids(params.d);
  for (std::size_t t = 0; t < params.d; ++t) helper_ids[t] = helpers[t].server_id;
  // d x d (MBR: width d; MSR: width 2*alpha = d) system matrix
  gf::Mat psi_h = vandermonde_rows(params, helper_ids, params.psi_width);
  gf::Mat psi_h_inv = mat_invert(psi_h);

  gf::Elem lambda_f = f.pow(params.points.x[failed_id - 1], params.alpha);

  std::vector<gf::Elem> restored;
  restored.reserve(file_count * params.stripes * params.alpha);
  std::vector<gf::Elem> received(params.d);
  for (std::size_t file = 1; file <= file_count; ++file) {
    for (std::size_t s = 1; s <= params.stripes; ++s) {
      std::size_t idx = (file - 1) * params.stripes + (s - 1);
      for (std::size_t t = 0; t < params.d; ++t) {
        received[t] = helpers[t].symbols[idx];
      }
      std::vector<gf::Elem> w = psi_h_inv.mul_vec(received);
      if (params.family == Family::mbr) {
        // w = M * psi_failed; the failed row is its transpose by symmetry
        restored.insert(restored.end(), w.begin(), w.end());
      } else {
        // w = [S1*phi_f ; S2*phi_f]; row = (S1*phi_f)^t + lambda_f (S2*phi_f)^t
        for (std::size_t j = 0; j < params.alpha; ++j) {
          restored.push_back(
              f.add(w[j], f.mul(lambda_f, w[params.alpha + j])));
        }
      }
    }
  }
  return restored;
}

}  // namespace pmpir::pm
