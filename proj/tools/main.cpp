// Command-line surface: construct multicast subgraphs, verify decodability,
// run the grid/stress experiment harnesses and export fixtures or DOT
// renderings. All randomness flows from --seed; outputs are byte-identical
// across reruns with identical flags.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "sourcecast/coding.hpp"
#include "sourcecast/experiment.hpp"
#include "sourcecast/graph.hpp"
#include "sourcecast/maxflow.hpp"
#include "sourcecast/online.hpp"
#include "sourcecast/topology.hpp"

namespace sc = sourcecast;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 1;
constexpr int kExitAssertionFailed = 2;
constexpr int kExitRankFailure = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
}

std::vector<sc::NodeId> parse_id_list(const std::string& csv) {
  std::vector<sc::NodeId> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(static_cast<sc::NodeId>(std::stoul(item)));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

struct ConstructOptions {
  std::string graph_path;
  std::string fixture;
  std::string model;
  std::uint32_t n = 0;
  double density = 0.0;
  std::uint32_t ws_k = 0;
  double ws_beta = 0.1;
  std::uint64_t seed = 42;
  std::string receivers_csv;
  double receiver_density = 0.0;
  std::int64_t source = -1;
  std::string out_path;
};

int cmd_construct(const ConstructOptions& opt) {
  int sources_given = (!opt.graph_path.empty() ? 1 : 0) + (!opt.fixture.empty() ? 1 : 0) +
                      (!opt.model.empty() ? 1 : 0);
  if (sources_given != 1) {
    std::cerr << "construct: give exactly one of --graph, --fixture, --model\n"
              << "usage: sourcecast construct (--graph FILE | --fixture NAME | --model "
                 "er|ws --n N ...) [--receivers LIST | --receiver-density D] [--seed S] "
                 "[--out FILE]\n";
    return kExitBadInput;
  }

  sc::DirectedMultigraph graph;
  std::optional<sc::NodeId> source;
  std::vector<sc::NodeId> receivers;

  if (!opt.fixture.empty()) {
    auto f = sc::fixture_by_name(opt.fixture);
    if (!f) {
      std::cerr << "construct: unknown fixture '" << opt.fixture << "' (try fig4, fig5)\n";
      return kExitBadInput;
    }
    graph = std::move(f->graph);
    source = f->source;
    receivers = f->receivers;
  } else if (!opt.graph_path.empty()) {
    sc::GraphFile file = sc::load_graph_file(opt.graph_path);
    graph = std::move(file.graph);
    source = file.source;
    receivers = file.receivers;
  } else {
    sc::TopologySpec spec;
    spec.n = opt.n;
    spec.seed = sc::derive_seed(opt.seed, {1});
    if (opt.model == "er") {
      spec.model = sc::GraphModel::Er;
      spec.edge_density = opt.density;
    } else if (opt.model == "ws") {
      spec.model = sc::GraphModel::Ws;
      spec.edge_density = opt.density;
      spec.ws_k = opt.ws_k != 0 ? opt.ws_k : sc::ws_degree_for_density(opt.density, opt.n);
      spec.ws_beta = opt.ws_beta;
    } else {
      std::cerr << "construct: --model must be er or ws\n";
      return kExitBadInput;
    }
    graph = sc::generate_topology(spec);
  }

  if (opt.source >= 0) source = static_cast<sc::NodeId>(opt.source);
  if (!opt.receivers_csv.empty()) receivers = parse_id_list(opt.receivers_csv);

  if (receivers.empty() && opt.receiver_density > 0.0) {
    sc::SessionSpec session;
    session.receiver_density = opt.receiver_density;
    session.seed = sc::derive_seed(opt.seed, {2});
    sc::Session s = sc::sample_session(graph, session);
    if (!source) source = s.source;
    // Re-sample receivers around an explicit source by dropping it from the draw.
    receivers.clear();
    for (sc::NodeId r : s.receivers) {
      if (r != *source) receivers.push_back(r);
    }
    if (receivers.empty()) receivers = s.receivers;
  }
  if (!source) {
    std::cerr << "construct: no source (give --source or a graph file with one)\n";
    return kExitBadInput;
  }
  if (receivers.empty()) {
    std::cerr << "construct: no receivers (give --receivers or --receiver-density)\n";
    return kExitBadInput;
  }

  sc::OnlineResult result = sc::online_construct(graph, *source, receivers);
  auto violations = sc::check_invariants(graph, *source, receivers, result);
  if (!violations.empty()) {
    const std::string witness = "witness_construct_invariants.json";
    spill(witness, sc::write_graph_json(graph, *source, receivers));
    std::cerr << "construct: internal invariant violation; witness dumped to " << witness
              << "\n";
    for (const auto& v : violations) std::cerr << "  " << v << "\n";
    return kExitAssertionFailed;
  }

  auto t = sc::throughput(result);
  for (std::size_t i = 0; i < receivers.size(); ++i) {
    std::cout << "receiver " << receivers[i] << ": k=" << t.k[i] << "\n";
  }
  std::cout << "group K = " << t.group_k << "\n";
  std::cout << "zones = " << result.zone_count << "\n";
  if (!opt.out_path.empty()) {
    spill(opt.out_path, sc::online_result_to_json(result));
    std::cout << "result written to " << opt.out_path << "\n";
  }
  return kExitOk;
}

struct VerifyOptions {
  std::string result_path;
  std::string graph_path;
  std::string field = "gf8";
};

int cmd_verify(const VerifyOptions& opt) {
  sc::GraphFile file = sc::load_graph_file(opt.graph_path);
  sc::OnlineResult result =
      sc::online_result_from_json(slurp(opt.result_path), file.graph);
  auto violations =
      sc::check_invariants(file.graph, result.source, result.receivers, result);
  if (!violations.empty()) {
    std::cerr << "verify: result file fails structural checks:\n";
    for (const auto& v : violations) std::cerr << "  " << v << "\n";
    return kExitBadInput;
  }

  const auto t = sc::throughput(result);
  if (t.group_k == 0) {
    std::cout << "no feasible code: group K = 0\n";
    return kExitRankFailure;
  }
  sc::FieldSpec field = opt.field == "gf16" ? sc::FieldSpec::gf16() : sc::FieldSpec::gf8();
  sc::SourceCodeAssignment assignment;
  try {
    assignment = sc::build_assignment(result, field);
  } catch (const sc::field_too_small_error& e) {
    std::cerr << "verify: " << e.what() << "\n";
    return kExitBadInput;
  }

  bool all_ok = true;
  sc::NodeId first_bad = 0;
  for (std::size_t i = 0; i < result.receivers.size(); ++i) {
    const auto rank = sc::receiver_rank(assignment, result.per_receiver_colors[i]);
    const bool ok = rank == assignment.k;
    std::cout << "receiver " << result.receivers[i] << ": rank " << rank << "/"
              << assignment.k << (ok ? " ok" : " FAIL") << "\n";
    if (!ok && all_ok) {
      all_ok = false;
      first_bad = result.receivers[i];
    }
  }

  if (all_ok) {
    sc::GaloisField gf(field);
    std::mt19937_64 rng(0xC0DEC0DEULL);
    for (int round = 0; round < 3 && all_ok; ++round) {
      sc::SymbolBlock x;
      for (std::uint32_t j = 0; j < assignment.k; ++j) {
        x.x.push_back(static_cast<std::uint32_t>(rng() & (gf.size() - 1)));
      }
      const auto observations = sc::simulate_round(file.graph, result, assignment, x);
      for (const auto& obs : observations) {
        if (sc::decode(assignment, obs).x != x.x) {
          all_ok = false;
          first_bad = obs.receiver;
          break;
        }
      }
    }
    std::cout << (all_ok ? "decode round trip: exact\n" : "decode round trip: FAILED\n");
  }

  if (!all_ok) {
    std::cerr << "verify: receiver " << first_bad << " cannot decode\n";
    return kExitRankFailure;
  }
  return kExitOk;
}

void print_report(const sc::RunReport& report) {
  for (const auto& path : report.table_paths) std::cout << "wrote " << path << "\n";
  std::cout << "wrote " << report.summary_path << "\n";
  std::cout << "trials: " << report.trials_total << ", gap trials: " << report.gap_trials
            << ", max gap: " << report.max_gap
            << ", invariant violations: " << report.invariant_violations
            << ", coding failures: " << report.coding_failures << "\n";
  for (const auto& w : report.witness_paths) std::cout << "witness: " << w << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multicast subgraph construction and source-coding toolkit"};
  app.require_subcommand(1);

  ConstructOptions c;
  auto* construct = app.add_subcommand("construct", "build a multicast subgraph online");
  construct->add_option("--graph", c.graph_path, "graph JSON file");
  construct->add_option("--fixture", c.fixture, "fixture name (fig4, fig5)");
  construct->add_option("--model", c.model, "random model: er or ws");
  construct->add_option("--n", c.n, "node count for --model");
  construct->add_option("--density", c.density, "edge density for --model");
  construct->add_option("--ws-k", c.ws_k, "WS even mean degree (default from density)");
  construct->add_option("--ws-beta", c.ws_beta, "WS rewiring probability")->capture_default_str();
  construct->add_option("--seed", c.seed, "seed for generation and sampling")->capture_default_str();
  construct->add_option("--receivers", c.receivers_csv, "comma-separated receiver ids");
  construct->add_option("--receiver-density", c.receiver_density,
                        "sample receivers at this density");
  construct->add_option("--source", c.source, "source node id");
  construct->add_option("--out", c.out_path, "write the result JSON here");

  VerifyOptions v;
  auto* verify = app.add_subcommand("verify", "check ranks and decode round trip");
  verify->add_option("--result", v.result_path, "result JSON from construct")->required();
  verify->add_option("--graph", v.graph_path, "graph JSON file")->required();
  verify->add_option("--field", v.field, "gf8 or gf16")->capture_default_str()
      ->check(CLI::IsMember({"gf8", "gf16"}));

  sc::GridSpec grid;
  std::string grid_model = "ws";
  std::string grid_densities = "0.10,0.20,0.30";
  std::string grid_receiver_densities = "0.25";
  std::string grid_out;
  auto* gridcmd = app.add_subcommand("grid", "throughput-equivalence grid");
  gridcmd->add_option("--model", grid_model, "er or ws")->capture_default_str()
      ->check(CLI::IsMember({"er", "ws"}));
  gridcmd->add_option("--n-min", grid.n_min, "smallest n")->capture_default_str();
  gridcmd->add_option("--n-max", grid.n_max, "largest n")->capture_default_str();
  gridcmd->add_option("--n-step", grid.n_step, "n increment")->capture_default_str();
  gridcmd->add_option("--densities", grid_densities, "edge densities, CSV")->capture_default_str();
  gridcmd->add_option("--receiver-densities", grid_receiver_densities,
                      "receiver densities, CSV")->capture_default_str();
  gridcmd->add_option("--trials", grid.trials, "trials per cell")->capture_default_str();
  gridcmd->add_option("--seed", grid.base_seed, "base seed")->capture_default_str();
  gridcmd->add_option("--beta", grid.ws_beta, "WS rewiring probability")->capture_default_str();
  gridcmd->add_option("--jobs", grid.jobs, "worker threads")->capture_default_str();
  gridcmd->add_option("--out", grid_out, "output directory")->required();

  sc::StressSpec stress;
  std::string stress_out;
  bool stress_long = false;
  auto* stresscmd = app.add_subcommand("stress", "sparse-degree dense-receiver sweep");
  stresscmd->add_option("--n-min", stress.n_min, "smallest n")->capture_default_str();
  stresscmd->add_option("--n-max", stress.n_max, "largest n")->capture_default_str();
  stresscmd->add_option("--n-step", stress.n_step, "n increment")->capture_default_str();
  stresscmd->add_option("--trials", stress.trials, "trials per n")->capture_default_str();
  stresscmd->add_option("--seed", stress.base_seed, "base seed")->capture_default_str();
  stresscmd->add_option("--jobs", stress.jobs, "worker threads")->capture_default_str();
  stresscmd->add_flag("--long", stress_long, "sweep n in [800,900] step 10 (report only)");
  stresscmd->add_option("--out", stress_out, "output directory")->required();

  std::string fixture_name;
  std::string fixture_out;
  auto* fixturecmd = app.add_subcommand("fixture", "export a named fixture graph");
  fixturecmd->add_option("--name", fixture_name, "fig4 or fig5")->required();
  fixturecmd->add_option("--out", fixture_out, "write graph JSON here (default stdout)");

  std::string dot_graph;
  std::string dot_result;
  std::string dot_out;
  auto* dotcmd = app.add_subcommand("export-dot", "render a graph (optionally zoned) as DOT");
  dotcmd->add_option("--graph", dot_graph, "graph JSON file")->required();
  dotcmd->add_option("--result", dot_result, "result JSON providing the zone labeling");
  dotcmd->add_option("--out", dot_out, "write DOT here (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*construct) return cmd_construct(c);
    if (*verify) return cmd_verify(v);
    if (*gridcmd) {
      grid.model = grid_model == "er" ? sc::GraphModel::Er : sc::GraphModel::Ws;
      grid.edge_densities = parse_double_list(grid_densities);
      grid.receiver_densities = parse_double_list(grid_receiver_densities);
      const sc::RunReport report = sc::run_grid(grid, grid_out);
      print_report(report);
      return report.assertions_held() ? kExitOk : kExitAssertionFailed;
    }
    if (*stresscmd) {
      if (stress_long) {
        stress.n_min = 800;
        stress.n_max = 900;
        stress.n_step = 10;
      }
      const sc::RunReport report = sc::run_stress(stress, stress_out);
      print_report(report);
      return report.assertions_held() ? kExitOk : kExitAssertionFailed;
    }
    if (*fixturecmd) {
      auto f = sc::fixture_by_name(fixture_name);
      if (!f) {
        std::cerr << "unknown fixture '" << fixture_name << "' (try fig4, fig5)\n";
        return kExitBadInput;
      }
      const std::string text = sc::write_graph_json(f->graph, f->source, f->receivers);
      if (fixture_out.empty()) {
        std::cout << text;
      } else {
        spill(fixture_out, text);
        std::cout << "wrote " << fixture_out << "\n";
      }
      return kExitOk;
    }
    if (*dotcmd) {
      sc::GraphFile file = sc::load_graph_file(dot_graph);
      if (!file.source) {
        std::cerr << "export-dot: graph file has no source field\n";
        return kExitBadInput;
      }
      std::string text;
      if (!dot_result.empty()) {
        sc::OnlineResult result = sc::online_result_from_json(slurp(dot_result), file.graph);
        text = sc::to_dot(file.graph, &result.labeling, *file.source, file.receivers);
      } else {
        text = sc::to_dot(file.graph, nullptr, *file.source, file.receivers);
      }
      if (dot_out.empty()) {
        std::cout << text;
      } else {
        spill(dot_out, text);
        std::cout << "wrote " << dot_out << "\n";
      }
      return kExitOk;
    }
  } catch (const sc::internal_error& e) {
    const std::string witness = "witness_internal_error.txt";
    spill(witness, e.what());
    std::cerr << "internal invariant violation; diagnostics dumped to " << witness << "\n";
    return kExitAssertionFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}
