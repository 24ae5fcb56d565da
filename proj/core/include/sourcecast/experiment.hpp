/**
 * \file experiment.hpp
 *
 * Grid and stress-test runners comparing the online construction against
 * independent per-receiver flow decomposition on random graph ensembles,
 * with `.dat` table emission and a JSON summary per run.
 *
 * The cost columns are deterministic work counts (queue pops plus edge
 * examinations) so that output files are byte-identical across reruns with
 * the same seed; wall-clock medians are measured too but only surfaced on
 * the console.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sourcecast/online.hpp"
#include "sourcecast/topology.hpp"

namespace sourcecast {

inline constexpr const char* kToolVersion = "sourcecast 0.1.0";
inline constexpr const char* kRngId = "mt19937_64";

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);

struct TrialResult {
  std::uint32_t n = 0;
  GraphModel model = GraphModel::Er;
  double edge_density = 0.0;
  std::uint32_t ws_k = 0;
  double ws_beta = 0.0;
  double receiver_density = 0.0;
  std::uint64_t seed = 0;

  std::uint32_t receiver_count = 0;
  std::vector<std::uint32_t> k_ek;
  std::vector<std::uint32_t> k_online;
  std::uint32_t group_k_ek = 0;
  std::uint32_t group_k_online = 0;
  std::uint32_t zone_count = 0;
  std::uint32_t edges_in_em = 0;

  std::uint64_t cost_ek = 0;      // deterministic op count
  std::uint64_t cost_online = 0;  // deterministic op count
  std::uint64_t wall_ns_ek = 0;       // median of 3, console info only
  std::uint64_t wall_ns_online = 0;   // median of 3, console info only

  std::uint32_t invariant_violations = 0;
  bool dominance_ok = true;  // k_i(online) <= f_i(ek) for all i
  bool coding_checked = false;
  bool coding_ok = false;
  std::uint32_t field_degree = 0;

  std::uint32_t gap() const { return group_k_ek - group_k_online; }
};

// Generates graph and session, runs independent per-receiver decomposition
// (fresh residual each) and the online construction over identical inputs,
// self-checks the result, and runs the rank + decode round trip (three random
// symbol blocks) whenever the online group flow is positive. A trial with
// group flow zero is recorded as degenerate, not an error.
TrialResult run_trial(const TopologySpec& topo, const SessionSpec& session);

// Same measurements over a fixed topology (used for the fixture trials).
TrialResult run_fixture_trial(const Fixture& fixture);

struct GridSpec {
  GraphModel model = GraphModel::Ws;
  std::uint32_t n_min = 10, n_max = 100, n_step = 10;
  std::vector<double> edge_densities = {0.10, 0.20, 0.30};
  std::vector<double> receiver_densities = {0.25};
  std::uint32_t trials = 30;
  std::uint64_t base_seed = 42;
  double ws_beta = 0.1;
  // WS only: when nonzero, use this even mean degree for every n instead of
  // deriving it from the edge density (stress runs pin k=4).
  std::uint32_t ws_fixed_degree = 0;
  unsigned jobs = 1;
};

// Fixed-schema table: one row per n value.
struct DatRow {
  std::uint32_t n = 0;
  std::uint32_t trials = 0;
  double mean_receivers = 0.0;
  double mean_k_ek = 0.0;
  double mean_k_online = 0.0;
  double mean_cost_ratio = 0.0;  // online / per-receiver decomposition
  double mean_zones = 0.0;
  std::uint32_t gap_count = 0;  // trials with K_online < K_ek
};

struct DatTable {
  std::vector<std::string> header;  // emitted as '#'-prefixed lines
  std::vector<DatRow> rows;
  double edge_density = 0.0;
  double receiver_density = 0.0;
};

void write_dat(const DatTable& table, const std::string& path);

struct RunReport {
  std::vector<DatTable> tables;  // one per (edge density, receiver density)
  std::vector<std::string> table_paths;
  std::string summary_path;

  std::uint64_t trials_total = 0;
  std::uint64_t gap_trials = 0;
  std::uint32_t max_gap = 0;
  std::uint64_t invariant_violations = 0;
  std::uint64_t dominance_failures = 0;
  std::uint64_t coding_checked_trials = 0;
  std::uint64_t coding_failures = 0;
  std::vector<std::string> witness_paths;  // graphs dumped for gap >= 2 etc.

  bool assertions_held() const {
    return max_gap <= 1 && invariant_violations == 0 && dominance_failures == 0 &&
           coding_failures == 0;
  }
};

// One `.dat` per (edge density, receiver density) pair under out_dir, plus a
// JSON summary. For the WS model the even mean degree is derived from the
// edge density as k = 2*max(1, round(density*(n-1)/2)).
RunReport run_grid(const GridSpec& spec, const std::string& out_dir);

struct StressSpec {
  std::uint32_t n_min = 50, n_max = 300, n_step = 50;
  std::uint32_t trials = 20;
  std::uint64_t base_seed = 42;
  unsigned jobs = 1;
};

// WS with k=4, rewiring 0.1, receiver density 30%: sparse per-node capacity
// under a dense receiver set. Rows with K_online < K_ek are flagged; a gap of
// two or more flow units dumps the witness graph and fails the run.
RunReport run_stress(const StressSpec& spec, const std::string& out_dir);

std::uint32_t ws_degree_for_density(double edge_density, std::uint32_t n);

}  // namespace sourcecast
