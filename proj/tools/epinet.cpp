// epinet: command-line front end for the epidemic / network-structure toolkit.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "epinet/epidemic.hpp"
#include "epinet/genmodels.hpp"
#include "epinet/graph.hpp"
#include "epinet/harness.hpp"
#include "epinet/ncp.hpp"
#include "epinet/perturb.hpp"
#include "epinet/rng.hpp"

using nlohmann::ordered_json;

namespace {

epinet::Model parse_model(const std::string& s) {
  if (s == "sir") return epinet::Model::sir;
  if (s == "seir") return epinet::Model::seir;
  throw std::invalid_argument("unknown model: " + s + " (expected sir or seir)");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  return f;
}

ordered_json sample_json(const epinet::NcpSample& s) {
  ordered_json j;
  j["seed"] = s.seed;
  j["size"] = s.size;
  j["cut"] = s.cut;
  j["volume"] = s.volume;
  j["conductance"] = s.conductance;
  if (!s.members.empty()) j["members"] = s.members;
  return j;
}

// Read whitespace/comma-separated numeric tokens, '#' comments allowed.
std::vector<double> read_number_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  std::vector<double> out;
  std::string line;
  while (std::getline(f, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ss(line);
    double v;
    while (ss >> v) out.push_back(v);
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  return out;
}

int cmd_eigen(const std::string& path, double tol) {
  const epinet::Graph g = epinet::load_edge_list(path);
  const epinet::PowerResult r = epinet::lambda1(g, tol);
  std::cout << fmt(r.value) << "," << fmt(r.residual) << "\n";
  return 0;
}

int cmd_rewire(const std::string& path, const std::string& mode, long long count,
               std::uint64_t seed, const std::string& out) {
  const epinet::Graph g = epinet::load_edge_list(path);
  epinet::Rng rng = epinet::SeedMix(seed).mix("rewire-" + mode).rng();
  epinet::Graph h = mode == "gnp"   ? epinet::rewire_gnp(g, count, rng)
                    : mode == "cm" ? epinet::rewire_cm(g, count, rng)
                                   : throw std::invalid_argument("mode must be gnp or cm");
  epinet::save_edge_list(h, out);
  return 0;
}

int cmd_sparsify(const std::string& path, double keep, const std::string& out) {
  const epinet::Graph g = epinet::load_edge_list(path);
  epinet::save_edge_list(epinet::sparsify_common_neighbors(g, keep), out);
  return 0;
}

int cmd_shuffle_triangles(const std::string& path, long long count, std::uint64_t seed,
                          const std::string& out) {
  const epinet::Graph g = epinet::load_edge_list(path);
  const epinet::TriangleData td = epinet::triangle_weights(g);
  epinet::Rng rng = epinet::SeedMix(seed).mix("shuffle-triangles").rng();
  const epinet::HyperedgeList shuffled = epinet::shuffle_triangles(td.h, g.n, count, rng);
  std::ofstream f = open_out(out);
  for (const auto& t : shuffled.tris) f << t[0] << " " << t[1] << " " << t[2] << "\n";
  if (!f) throw std::runtime_error("write failed: " + out);
  return 0;
}

int cmd_simulate(const std::string& path, double beta, double gamma, const std::string& model,
                 double qpercent, double exposed_mean, long long detect_threshold,
                 int seed_node, std::uint64_t rng_seed, int max_steps) {
  const epinet::Graph g = epinet::load_edge_list(path);
  epinet::EpidemicParams p;
  p.model = parse_model(model);
  p.beta = beta;
  p.gamma = gamma;
  p.exposed_mean = exposed_mean;
  p.q_capacity_fraction = qpercent / 100.0;
  p.detect_threshold = detect_threshold;
  p.max_steps = max_steps;
  epinet::Rng rng = epinet::SeedMix(rng_seed).mix("simulate").rng();
  const epinet::EpidemicOutcome out = epinet::run_epidemic(g, p, seed_node, rng);
  ordered_json params;
  params["model"] = model;
  params["beta"] = beta;
  params["gamma"] = gamma;
  params["exposed_mean"] = exposed_mean;
  params["q_capacity_fraction"] = p.q_capacity_fraction;
  params["detect_threshold"] = detect_threshold;
  params["node_detect_delay"] = p.node_detect_delay;
  params["neighbor_q_delay"] = p.neighbor_q_delay;
  params["max_steps"] = p.effective_max_steps();
  params["seed_node"] = seed_node;
  params["rng_seed"] = rng_seed;
  ordered_json j;
  j["params"] = params;
  j["new_infections"] = out.new_infections;
  j["net_infections"] = out.net_infections;
  j["total"] = out.total_infected;
  j["end_time"] = out.end_time;
  j["truncated"] = out.truncated;
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_ncp(const std::string& path, const std::string& mode, int seeds, int trials,
            std::uint64_t rng_seed, const std::string& out) {
  const epinet::Graph g = epinet::load_edge_list(path);
  epinet::Rng rng = epinet::SeedMix(rng_seed).mix("ncp-" + mode).rng();
  std::vector<epinet::NcpSample> samples;
  if (mode == "epidemic") {
    samples = epinet::epidemic_ncp(g, seeds, trials, rng).samples;
  } else if (mode == "ppr") {
    samples = epinet::ppr_ncp(g, seeds, rng).sets;
  } else {
    throw std::invalid_argument("mode must be epidemic or ppr");
  }
  std::ofstream f = open_out(out);
  for (const auto& s : samples) f << sample_json(s).dump() << "\n";
  if (!f) throw std::runtime_error("write failed: " + out);
  return 0;
}

int cmd_aancp(const std::string& profile_path, long long nodes) {
  std::ifstream f(profile_path);
  if (!f) throw std::runtime_error("cannot open: " + profile_path);
  epinet::NcpProfile prof(nodes);
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const ordered_json j = ordered_json::parse(line);
    prof.add(j.at("size").get<long long>(), j.at("conductance").get<double>());
  }
  std::cout << fmt(epinet::aancp(prof, nodes)) << "\n";
  return 0;
}

int cmd_missed_sets(const std::string& path, const std::string& sets_path,
                    const std::string& flags_path, const std::string& out) {
  const epinet::Graph g = epinet::load_edge_list(path);
  std::ifstream f(sets_path);
  if (!f) throw std::runtime_error("cannot open: " + sets_path);
  std::vector<epinet::NcpSample> sets;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const ordered_json j = ordered_json::parse(line);
    epinet::NcpSample s;
    s.seed = j.value("seed", -1);
    s.size = j.at("size").get<long long>();
    s.cut = j.value("cut", 0LL);
    s.volume = j.value("volume", 0LL);
    s.conductance = j.at("conductance").get<double>();
    s.members = j.at("members").get<std::vector<int>>();
    sets.push_back(std::move(s));
  }
  const std::vector<double> flags = read_number_file(flags_path);
  if ((long long)flags.size() != g.n)
    throw std::invalid_argument("susceptible file has " + std::to_string(flags.size()) +
                                " values for a graph of " + std::to_string(g.n) + " nodes");
  const epinet::MissedSets ms = epinet::missed_sets(sets, flags);
  std::ofstream o = open_out(out);
  for (int sb = 0; sb < epinet::NcpProfile::kSizeBins; ++sb)
    for (int cb = 0; cb < epinet::NcpProfile::kCondBins; ++cb) {
      const std::size_t idx = (std::size_t)sb * epinet::NcpProfile::kCondBins + cb;
      if (ms.weight[idx] < 0) continue;
      ordered_json j;
      j["size_bin"] = sb;
      j["cond_bin"] = cb;
      j["size_lo"] = ms.bins.size_bin_lo(sb);
      j["size_hi"] = ms.bins.size_bin_hi(sb);
      j["cond_lo"] = ms.bins.cond_bin_lo(cb);
      j["cond_hi"] = ms.bins.cond_bin_hi(cb);
      j["count"] = ms.bins.count_at(sb, cb);
      j["weight"] = ms.weight[idx];
      o << j.dump() << "\n";
    }
  if (!o) throw std::runtime_error("write failed: " + out);
  return 0;
}

int cmd_generate(const std::string& model, int n, int iterations, const std::string& base,
                 int walks, bool snapshots, std::uint64_t rng_seed, const std::string& out) {
  epinet::Rng rng = epinet::SeedMix(rng_seed).mix("generate-" + model).rng();
  epinet::SnapshotFn snap;
  if (snapshots)
    snap = [&out](int iter, const epinet::Graph& g) {
      epinet::save_edge_list(g, out + "-" + std::to_string(iter));
    };
  epinet::Graph g;
  if (model == "geometric") {
    g = epinet::local_geometric(n, rng);
  } else if (model == "geocomm") {
    epinet::GenConfig cfg;
    cfg.n = n;
    cfg.iterations = iterations;
    g = epinet::geometric_communities(cfg, rng, snap);
  } else if (model == "rwcomm") {
    if (base.empty()) throw std::invalid_argument("rwcomm requires --base");
    const epinet::Graph b = epinet::load_edge_list(base);
    g = epinet::random_walk_communities(b, walks, rng, snap);
  } else {
    throw std::invalid_argument("model must be geometric, geocomm, or rwcomm");
  }
  epinet::save_edge_list(g, out);
  return 0;
}

struct SweepConfig {
  std::vector<std::string> graph_paths;
  epinet::SweepSpec spec;
};

SweepConfig parse_sweep_cfg(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  SweepConfig cfg;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(f, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (key == "graphs") {
      std::stringstream ss(val);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        const std::string p = trim(tok);
        if (!p.empty()) cfg.graph_paths.push_back(p);
      }
    } else if (key == "betas") {
      cfg.spec.betas = parse_double_list(val);
    } else if (key == "qlevels") {
      cfg.spec.q_levels = parse_double_list(val);
    } else if (key == "seeds") {
      cfg.spec.seeds_per_cell = std::stoi(val);
    } else if (key == "model") {
      cfg.spec.model = parse_model(val);
    } else if (key == "master_seed") {
      cfg.spec.master_seed = std::stoull(val);
    } else if (key == "workers") {
      cfg.spec.workers = std::stoi(val);
    } else if (key == "gamma") {
      cfg.spec.gamma = std::stod(val);
    } else if (key == "exposed_mean") {
      cfg.spec.exposed_mean = std::stod(val);
    } else {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": unknown key " + key);
    }
  }
  if (cfg.graph_paths.empty()) throw std::invalid_argument(path + ": graphs= is required");
  // Variant name = file basename; order in the file is the plot order.
  for (const std::string& p : cfg.graph_paths)
    cfg.spec.variant_names.push_back(std::filesystem::path(p).filename().string());
  return cfg;
}

int cmd_sweep(const std::string& cfg_path, const std::string& out_dir, int workers_override) {
  SweepConfig cfg = parse_sweep_cfg(cfg_path);
  if (workers_override > 0) cfg.spec.workers = workers_override;
  std::vector<epinet::Graph> graphs;
  graphs.reserve(cfg.graph_paths.size());
  for (const std::string& p : cfg.graph_paths) graphs.push_back(epinet::load_edge_list(p));
  std::vector<const epinet::Graph*> ptrs;
  for (const auto& g : graphs) ptrs.push_back(&g);

  std::filesystem::create_directories(out_dir);
  const std::string cells_path = out_dir + "/cells.ndjson";

  // Stream records as cells finish (completion order, crash-durable), then
  // rewrite the file in canonical order so reruns compare byte-for-byte.
  std::ofstream stream = open_out(cells_path);
  epinet::SweepResult res = epinet::run_sweep(cfg.spec, ptrs,
                                              [&](const epinet::CellResult& c) {
                                                stream << epinet::cell_ndjson_line(cfg.spec, c)
                                                       << "\n";
                                                stream.flush();
                                              });
  stream.close();
  epinet::write_cells_ndjson(res, cells_path);
  epinet::write_u_shape_csv(res, out_dir + "/u_shape.csv");
  epinet::write_susceptible_csv(res, out_dir + "/susceptible_counts.csv");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulate epidemics with local quarantine, perturb graph structure, "
               "and profile multi-scale community structure"};
  app.require_subcommand(1);

  std::string graph_path, out_path, mode, model = "seir", base_path, sets_path, flags_path;
  std::string cfg_path;
  double tol = 1e-8, keep = 0.5, beta = 0.1, gamma = 0.05, qpercent = 0.0, exposed_mean = 5.0;
  long long count = 0, detect_threshold = 100, nodes = 0;
  int seed_node = 0, seeds = 100, trials = 20, n = 5000, iterations = 50, walks = 10000;
  int max_steps = 0, workers = 0;
  std::uint64_t seed = 0;
  bool snapshots = false;

  auto* eigen = app.add_subcommand("eigen", "print lambda1,residual for a graph");
  eigen->add_option("graph", graph_path)->required();
  eigen->add_option("--tol", tol);

  auto* rewire = app.add_subcommand("rewire", "degree-agnostic or degree-preserving rewiring");
  rewire->add_option("graph", graph_path)->required();
  rewire->add_option("--mode", mode)->required()->check(CLI::IsMember({"gnp", "cm"}));
  rewire->add_option("--count", count)->required();
  rewire->add_option("--seed", seed);
  rewire->add_option("-o,--out", out_path)->required();

  auto* sparsify = app.add_subcommand("sparsify", "common-neighbor sparsification");
  sparsify->add_option("graph", graph_path)->required();
  sparsify->add_option("--keep", keep)->required();
  sparsify->add_option("-o,--out", out_path)->required();

  auto* shuf = app.add_subcommand("shuffle-triangles", "endpoint-shuffle the triangle list");
  shuf->add_option("graph", graph_path)->required();
  shuf->add_option("--count", count)->required();
  shuf->add_option("--seed", seed);
  shuf->add_option("-o,--out", out_path)->required();

  auto* sim = app.add_subcommand("simulate", "run one epidemic, print an NDJSON record");
  sim->add_option("graph", graph_path)->required();
  sim->add_option("--beta", beta)->required();
  sim->add_option("--gamma", gamma);
  sim->add_option("--model", model)->check(CLI::IsMember({"sir", "seir"}));
  sim->add_option("--qpercent", qpercent);
  sim->add_option("--exposed-mean", exposed_mean);
  sim->add_option("--detect-threshold", detect_threshold);
  sim->add_option("--seed-node", seed_node)->required();
  sim->add_option("--rng-seed", seed);
  sim->add_option("--max-steps", max_steps);

  auto* ncp = app.add_subcommand("ncp", "sample a network community profile");
  ncp->add_option("graph", graph_path)->required();
  ncp->add_option("--mode", mode)->required()->check(CLI::IsMember({"epidemic", "ppr"}));
  ncp->add_option("--seeds", seeds)->required();
  ncp->add_option("--trials", trials);
  ncp->add_option("--rng-seed", seed);
  ncp->add_option("-o,--out", out_path)->required();

  auto* aancp = app.add_subcommand("aancp", "area above a stored profile");
  aancp->add_option("profile", sets_path)->required();
  aancp->add_option("--nodes", nodes)->required();

  auto* missed = app.add_subcommand("missed-sets", "weight stored sets by susceptibility");
  missed->add_option("graph", graph_path)->required();
  missed->add_option("--sets", sets_path)->required();
  missed->add_option("--susceptible", flags_path)->required();
  missed->add_option("-o,--out", out_path)->required();

  auto* gen = app.add_subcommand("generate", "synthesize a network");
  gen->add_option("--model", model)->required()
      ->check(CLI::IsMember({"geometric", "geocomm", "rwcomm"}));
  gen->add_option("--n", n);
  gen->add_option("--iterations", iterations);
  gen->add_option("--base", base_path);
  gen->add_option("--walks", walks);
  gen->add_flag("--snapshots", snapshots);
  gen->add_option("--rng-seed", seed);
  gen->add_option("-o,--out", out_path)->required();

  auto* sweep = app.add_subcommand("sweep", "run a variant x beta x q x seed sweep");
  sweep->add_option("--spec", cfg_path)->required();
  sweep->add_option("-o,--out", out_path)->required();
  sweep->add_option("--workers", workers);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*eigen) return cmd_eigen(graph_path, tol);
    if (*rewire) return cmd_rewire(graph_path, mode, count, seed, out_path);
    if (*sparsify) return cmd_sparsify(graph_path, keep, out_path);
    if (*shuf) return cmd_shuffle_triangles(graph_path, count, seed, out_path);
    if (*sim)
      return cmd_simulate(graph_path, beta, gamma, model, qpercent, exposed_mean,
                          detect_threshold, seed_node, seed, max_steps);
    if (*ncp) return cmd_ncp(graph_path, mode, seeds, trials, seed, out_path);
    if (*aancp) return cmd_aancp(sets_path, nodes);
    if (*missed) return cmd_missed_sets(graph_path, sets_path, flags_path, out_path);
    if (*gen)
      return cmd_generate(model, n, iterations, base_path, walks, snapshots, seed, out_path);
    if (*sweep) return cmd_sweep(cfg_path, out_path, workers);
  } catch (const std::exception& e) {
    std::cerr << "epinet: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
