#include "sourcecast/experiment.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <thread>

#include "sourcecast/coding.hpp"
#include "sourcecast/maxflow.hpp"

namespace sourcecast {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t p : parts) h = splitmix64(h ^ p);
  return h;
}

namespace {

std::uint64_t median_of_three(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  if (a > b) std::swap(a, b);
  if (b > c) std::swap(b, c);
  if (a > b) std::swap(a, b);
  return b;
}

struct Constructed {
  std::vector<FlowDecomposition> decomps;
  OnlineResult online;
};

TrialResult measure(const DirectedMultigraph& g, NodeId source,
                    const std::vector<NodeId>& receivers, std::uint64_t coding_seed) {
  TrialResult t;
  t.n = g.node_count();
  t.receiver_count = static_cast<std::uint32_t>(receivers.size());

  using clock = std::chrono::steady_clock;
  std::uint64_t wall_ek[3];
  std::uint64_t wall_online[3];
  std::vector<FlowDecomposition> decomps;
  OnlineResult online;

  // Three timed repetitions per construction; op counts from the first.
  for (int rep = 0; rep < 3; ++rep) {
    SearchStats ek_stats;
    auto t0 = clock::now();
    std::vector<FlowDecomposition> d;
    d.reserve(receivers.size());
    for (NodeId r : receivers) d.push_back(ek_decompose(g, source, r, &ek_stats));
    auto t1 = clock::now();
    wall_ek[rep] =
        std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
    if (rep == 0) {
      t.cost_ek = ek_stats.ops;
      decomps = std::move(d);
    }
  }
  for (int rep = 0; rep < 3; ++rep) {
    SearchStats online_stats;
    auto t0 = clock::now();
    OnlineResult res = online_construct(g, source, receivers, &online_stats);
    auto t1 = clock::now();
    wall_online[rep] =
        std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
    if (rep == 0) {
      t.cost_online = online_stats.ops;
      online = std::move(res);
    }
  }
  t.wall_ns_ek = median_of_three(wall_ek[0], wall_ek[1], wall_ek[2]);
  t.wall_ns_online = median_of_three(wall_online[0], wall_online[1], wall_online[2]);

  const GroupFlowReport ek_report = group_max_flow(decomps);
  const PerReceiverThroughput online_report = throughput(online);
  t.group_k_ek = ek_report.group_k;
  t.group_k_online = online_report.group_k;
  for (const auto& pr : ek_report.per_receiver) t.k_ek.push_back(pr.value);
  t.k_online = online_report.k;
  t.zone_count = online.zone_count;
  t.edges_in_em = static_cast<std::uint32_t>(online.multicast_edges.size());

  for (std::size_t i = 0; i < receivers.size(); ++i) {
    if (t.k_online[i] > t.k_ek[i]) t.dominance_ok = false;
  }

  t.invariant_violations =
      static_cast<std::uint32_t>(check_invariants(g, source, receivers, online).size());

  if (t.group_k_online >= 1) {
    t.coding_checked = true;
    t.field_degree = online.zone_count <= 255 ? 8 : 16;
    const FieldSpec field{t.field_degree};
    try {
      const SourceCodeAssignment assignment = build_assignment(online, field);
      bool ok = true;
      for (std::size_t i = 0; i < receivers.size() && ok; ++i) {
        ok = receiver_rank(assignment, online.per_receiver_colors[i]) == assignment.k;
      }
      std::mt19937_64 rng(coding_seed);
      const GaloisField gf(field);
      for (int round = 0; round < 3 && ok; ++round) {
        SymbolBlock x;
        for (std::uint32_t j = 0; j < assignment.k; ++j) {
          x.x.push_back(static_cast<std::uint32_t>(rng() & (gf.size() - 1)));
        }
        const auto observations = simulate_round(g, online, assignment, x);
        for (const auto& obs : observations) {
          if (decode(assignment, obs).x != x.x) {
            ok = false;
            break;
          }
        }
      }
      t.coding_ok = ok;
    } catch (const std::exception&) {
      t.coding_ok = false;
    }
  }
  return t;
}

}  // namespace

TrialResult run_trial(const TopologySpec& topo, const SessionSpec& session) {
  const DirectedMultigraph g = generate_topology(topo);
  const Session s = sample_session(g, session);
  const std::uint64_t coding_seed = derive_seed(topo.seed, {session.seed, 3});
  TrialResult t = measure(g, s.source, s.receivers, coding_seed);
  t.model = topo.model;
  t.edge_density = topo.edge_density;
  t.ws_k = topo.ws_k;
  t.ws_beta = topo.ws_beta;
  t.receiver_density = session.receiver_density;
  t.seed = topo.seed;
  return t;
}

TrialResult run_fixture_trial(const Fixture& fixture) {
  return measure(fixture.graph, fixture.source, fixture.receivers,
                 derive_seed(0, {3}));
}

std::uint32_t ws_degree_for_density(double edge_density, std::uint32_t n) {
  auto half = static_cast<std::uint32_t>(
      std::max<long long>(1, std::llround(edge_density * (n - 1) / 2.0)));
  std::uint32_t k = 2 * half;
  if (k >= n) k = (n - 1) / 2 * 2;  // clamp to the largest even degree < n
  return k;
}

void write_dat(const DatTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (const std::string& line : table.header) out << "# " << line << "\n";
  char buf[256];
  for (const DatRow& r : table.rows) {
    std::snprintf(buf, sizeof buf, "%u %u %.6f %.6f %.6f %.6f %.6f %u\n", r.n, r.trials,
                  r.mean_receivers, r.mean_k_ek, r.mean_k_online, r.mean_cost_ratio,
                  r.mean_zones, r.gap_count);
    out << buf;
  }
}

namespace {

struct CellKey {
  double edge_density;
  double receiver_density;
};

struct TaskPlan {
  std::size_t table_index;
  std::size_t row_index;
  std::uint32_t n;
  std::uint32_t trial;
  TopologySpec topo;
  SessionSpec session;
};

std::string model_name(GraphModel m) { return m == GraphModel::Er ? "er" : "ws"; }

std::string density_tag(double d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", d);
  return buf;
}

std::string dump_witness(const std::string& out_dir, const TrialResult& t,
                         const TopologySpec& topo, const SessionSpec& session,
                         const char* kind) {
  const DirectedMultigraph g = generate_topology(topo);
  const Session s = sample_session(g, session);
  const std::string path = out_dir + "/witness_" + kind + "_n" + std::to_string(t.n) +
                           "_seed" + std::to_string(topo.seed) + ".json";
  std::ofstream out(path, std::ios::binary);
  out << write_graph_json(g, s.source, s.receivers);
  return path;
}

RunReport run_plan(const GridSpec& spec, const std::string& out_dir,
                   const std::string& table_stem_prefix, const std::string& spec_echo) {
  if (spec.n_min == 0 || spec.n_step == 0 || spec.n_min > spec.n_max) {
    throw std::invalid_argument("invalid n range");
  }
  if (spec.trials == 0) throw std::invalid_argument("trials must be >= 1");
  if (spec.edge_densities.empty() || spec.receiver_densities.empty()) {
    throw std::invalid_argument("density lists must be nonempty");
  }
  const bool fixed_degree = spec.model == GraphModel::Ws && spec.ws_fixed_degree != 0;
  if (!fixed_degree) {
    for (double d : spec.edge_densities) {
      if (!(d > 0.0) || d > 1.0) throw std::invalid_argument("edge density out of range");
    }
  }
  for (double d : spec.receiver_densities) {
    if (!(d > 0.0) || d >= 1.0) throw std::invalid_argument("receiver density out of range");
  }
  std::filesystem::create_directories(out_dir);

  std::vector<std::uint32_t> n_values;
  for (std::uint32_t n = spec.n_min; n <= spec.n_max; n += spec.n_step) n_values.push_back(n);

  RunReport report;
  std::vector<TaskPlan> tasks;
  std::vector<CellKey> cells;
  for (double ed : spec.edge_densities) {
    for (double rd : spec.receiver_densities) {
      cells.push_back({ed, rd});
    }
  }
  const std::uint64_t model_tag = spec.model == GraphModel::Er ? 1 : 2;
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    for (std::size_t ri = 0; ri < n_values.size(); ++ri) {
      const std::uint32_t n = n_values[ri];
      for (std::uint32_t trial = 0; trial < spec.trials; ++trial) {
        TaskPlan task;
        task.table_index = ci;
        task.row_index = ri;
        task.n = n;
        task.trial = trial;
        const std::uint64_t trial_seed = derive_seed(
            spec.base_seed,
            {model_tag, n, static_cast<std::uint64_t>(cells[ci].edge_density * 1e6),
             static_cast<std::uint64_t>(cells[ci].receiver_density * 1e6), trial});
        task.topo.model = spec.model;
        task.topo.n = n;
        task.topo.seed = derive_seed(trial_seed, {1});
        task.topo.edge_density = cells[ci].edge_density;
        if (spec.model == GraphModel::Ws) {
          task.topo.ws_k = fixed_degree ? spec.ws_fixed_degree
                                        : ws_degree_for_density(cells[ci].edge_density, n);
          task.topo.ws_beta = spec.ws_beta;
        }
        task.session.receiver_density = cells[ci].receiver_density;
        task.session.seed = derive_seed(trial_seed, {2});
        tasks.push_back(task);
      }
    }
  }

  std::vector<TrialResult> results(tasks.size());
  const unsigned jobs = std::max(1u, spec.jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) break;
      results[idx] = run_trial(tasks[idx].topo, tasks[idx].session);
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Deterministic reduce in task order.
  struct RowAccum {
    std::uint64_t trials = 0;
    double receivers = 0, k_ek = 0, k_online = 0, ratio = 0, zones = 0;
    std::uint32_t gaps = 0;
  };
  std::vector<std::vector<RowAccum>> accum(cells.size(),
                                           std::vector<RowAccum>(n_values.size()));
  for (std::size_t idx = 0; idx < tasks.size(); ++idx) {
    const TaskPlan& task = tasks[idx];
    const TrialResult& t = results[idx];
    RowAccum& acc = accum[task.table_index][task.row_index];
    acc.trials += 1;
    acc.receivers += t.receiver_count;
    acc.k_ek += t.group_k_ek;
    acc.k_online += t.group_k_online;
    acc.ratio += static_cast<double>(t.cost_online) / static_cast<double>(t.cost_ek);
    acc.zones += t.zone_count;
    if (t.group_k_online < t.group_k_ek) ++acc.gaps;

    report.trials_total += 1;
    const std::uint32_t gap = t.gap();
    if (gap > 0) ++report.gap_trials;
    report.max_gap = std::max(report.max_gap, gap);
    report.invariant_violations += t.invariant_violations;
    if (!t.dominance_ok) ++report.dominance_failures;
    if (t.coding_checked) ++report.coding_checked_trials;
    if (t.coding_checked && !t.coding_ok) ++report.coding_failures;
    if (gap >= 2 || !t.dominance_ok || t.invariant_violations > 0) {
      report.witness_paths.push_back(
          dump_witness(out_dir, t, task.topo, task.session,
                       gap >= 2 ? "gap" : (!t.dominance_ok ? "dominance" : "invariant")));
    }
  }

  nlohmann::ordered_json summary;
  summary["tool"] = kToolVersion;
  summary["rng"] = kRngId;
  summary["seed_derivation"] = "splitmix64 chain over (base, model, n, densities, trial)";
  summary["spec"] = spec_echo;
  auto json_tables = nlohmann::ordered_json::array();

  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    DatTable table;
    table.edge_density = cells[ci].edge_density;
    table.receiver_density = cells[ci].receiver_density;
    table.header.push_back(kToolVersion);
    const std::string cell_tag =
        (fixed_degree ? " ws_degree=" + std::to_string(spec.ws_fixed_degree)
                      : " edge_density=" + density_tag(cells[ci].edge_density)) +
        " receiver_density=" + density_tag(cells[ci].receiver_density);
    table.header.push_back(spec_echo + cell_tag);
    table.header.push_back(std::string("rng=") + kRngId +
                           " seed_derivation=splitmix64(base,model,n,densities,trial)");
    table.header.push_back(
        "columns: n trials mean_receivers mean_K_ek mean_K_online mean_cost_ratio "
        "mean_zones gap_count");
    for (std::size_t ri = 0; ri < n_values.size(); ++ri) {
      const RowAccum& acc = accum[ci][ri];
      DatRow row;
      row.n = n_values[ri];
      row.trials = static_cast<std::uint32_t>(acc.trials);
      row.mean_receivers = acc.receivers / acc.trials;
      row.mean_k_ek = acc.k_ek / acc.trials;
      row.mean_k_online = acc.k_online / acc.trials;
      row.mean_cost_ratio = acc.ratio / acc.trials;
      row.mean_zones = acc.zones / acc.trials;
      row.gap_count = acc.gaps;
      table.rows.push_back(row);
    }
    std::string filename = table_stem_prefix;
    if (!fixed_degree) filename += "_d" + density_tag(cells[ci].edge_density);
    filename += "_r" + density_tag(cells[ci].receiver_density) + ".dat";
    const std::string path = out_dir + "/" + filename;
    write_dat(table, path);
    report.table_paths.push_back(path);

    nlohmann::ordered_json jt;
    jt["edge_density"] = cells[ci].edge_density;
    jt["receiver_density"] = cells[ci].receiver_density;
    jt["file"] = filename;
    auto rows = nlohmann::ordered_json::array();
    for (const DatRow& r : table.rows) {
      rows.push_back({{"n", r.n},
                      {"trials", r.trials},
                      {"mean_receivers", r.mean_receivers},
                      {"mean_k_ek", r.mean_k_ek},
                      {"mean_k_online", r.mean_k_online},
                      {"mean_cost_ratio", r.mean_cost_ratio},
                      {"mean_zones", r.mean_zones},
                      {"gap_count", r.gap_count}});
    }
    jt["rows"] = std::move(rows);
    json_tables.push_back(std::move(jt));
    report.tables.push_back(std::move(table));
  }

  summary["tables"] = std::move(json_tables);
  summary["totals"] = {{"trials", report.trials_total},
                       {"gap_trials", report.gap_trials},
                       {"max_gap", report.max_gap},
                       {"invariant_violations", report.invariant_violations},
                       {"dominance_failures", report.dominance_failures},
                       {"coding_failures", report.coding_failures}};
  auto witness_names = nlohmann::ordered_json::array();
  for (const auto& p : report.witness_paths) {
    witness_names.push_back(std::filesystem::path(p).filename().string());
  }
  summary["witnesses"] = std::move(witness_names);
  report.summary_path = out_dir + "/" + table_stem_prefix + "_summary.json";
  std::ofstream out(report.summary_path, std::ios::binary);
  out << summary.dump(2) << "\n";
  return report;
}

}  // namespace

RunReport run_grid(const GridSpec& spec, const std::string& out_dir) {
  char echo[256];
  std::snprintf(echo, sizeof echo,
                "grid model=%s n=%u..%u step %u trials=%u base_seed=%llu beta=%.2f",
                model_name(spec.model).c_str(), spec.n_min, spec.n_max, spec.n_step,
                spec.trials, static_cast<unsigned long long>(spec.base_seed), spec.ws_beta);
  return run_plan(spec, out_dir, model_name(spec.model), echo);
}

RunReport run_stress(const StressSpec& spec, const std::string& out_dir) {
  GridSpec grid;
  grid.model = GraphModel::Ws;
  grid.n_min = spec.n_min;
  grid.n_max = spec.n_max;
  grid.n_step = spec.n_step;
  grid.trials = spec.trials;
  grid.base_seed = spec.base_seed;
  grid.ws_beta = 0.1;
  grid.ws_fixed_degree = 4;
  grid.jobs = spec.jobs;
  grid.receiver_densities = {0.30};
  grid.edge_densities = {0.0};  // tag only; the degree is pinned
  char echo[256];
  std::snprintf(echo, sizeof echo,
                "stress ws k=4 beta=0.10 n=%u..%u step %u trials=%u base_seed=%llu",
                spec.n_min, spec.n_max, spec.n_step, spec.trials,
                static_cast<unsigned long long>(spec.base_seed));
  return run_plan(grid, out_dir, "stress_ws_k4", echo);
}

}  // namespace sourcecast
