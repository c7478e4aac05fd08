#include "anontx/cli/app.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "CLI11.hpp"
#include "anontx/keygraph/key_sharing_graph.hpp"
#include "anontx/lab/dcnet.hpp"
#include "anontx/lab/verdict.hpp"
#include "anontx/protocols/anon.hpp"
#include "anontx/protocols/collision.hpp"
#include "anontx/protocols/entanglement.hpp"
#include "anontx/qsim/dense_state.hpp"
#include "json.hpp"

namespace anontx::cli {

namespace {

using nlohmann::json;

/// Raised for anything the user got wrong; maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t require_seed(const RunConfig& c) {
  if (!c.seed) throw ConfigError(c.command + " is stochastic: --seed is required");
  return *c.seed;
}

PlayerId require_player(const std::optional<PlayerId>& p, const char* flag,
                         int n) {
  if (!p) throw ConfigError(std::string("--") + flag + " is required");
  if (*p < 0 || *p >= n) {
    throw ConfigError(std::string("--") + flag + " must be in [0, n)");
  }
  return *p;
}

qsim::Complex parse_complex(const std::string& text) {
  std::istringstream ss(text);
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(ss >> re)) throw ConfigError("bad amplitude '" + text + "'");
  if (ss >> comma) {
    if (comma != ',' || !(ss >> im)) {
      throw ConfigError("amplitude must be 're' or 're,im'");
    }
  }
  return {re, im};
}

keygraph::KeySharingGraph load_graph(const RunConfig& c) {
  if (!c.graph_file.empty()) {
    std::ifstream in(c.graph_file);
    if (!in) throw ConfigError("cannot open graph file " + c.graph_file);
    const bool is_json = c.graph_file.size() >= 5 &&
                         c.graph_file.compare(c.graph_file.size() - 5, 5,
                                              ".json") == 0;
    auto g = is_json ? keygraph::graph_from_json(json::parse(in))
                     : keygraph::read_edge_list(in, c.n > 0 ? c.n : -1);
    if (c.n > 0 && g.num_nodes() != c.n) {
      throw ConfigError("graph file node count differs from --n");
    }
    return g;
  }
  if (c.topology == "complete") return keygraph::KeySharingGraph::complete(c.n);
  if (c.topology == "cycle") return keygraph::KeySharingGraph::cycle(c.n);
  if (c.topology == "star") return keygraph::KeySharingGraph::star(c.n);
  if (c.topology == "path") return keygraph::KeySharingGraph::path(c.n);
  throw ConfigError("unknown topology '" + c.topology + "'");
}

std::string default_out_path(const RunConfig& c) {
  if (!c.out.empty()) return c.out;
  const char* dir = std::getenv(kOutDirEnv);
  if (dir == nullptr || *dir == '\0') return {};
  std::string name = c.command + "-n" + std::to_string(c.n);
  if (c.seed) name += "-s" + std::to_string(*c.seed);
  return (std::filesystem::path(dir) / (name + ".json")).string();
}

void emit_json(const RunConfig& c, const json& j) {
  const std::string path = default_out_path(c);
  if (path.empty()) return;
  write_atomically(path, j.dump(2) + "\n");
}

const char* outcome_name(protocols::CollisionOutcome o) {
  return o == protocols::CollisionOutcome::ExactlyOne ? "ExactlyOne"
                                                      : "NotExactlyOne";
}

json optional_json(const std::optional<int>& v) {
  return v ? json(*v) : json(nullptr);
}

int cmd_anon(const RunConfig& c, std::ostream& out) {
  RngStream rng(require_seed(c));
  auto players = protocols::make_players(c.n);
  const PlayerId s = require_player(c.sender, "sender", c.n);
  players[s].role = protocols::Role::Sender;
  players[s].data_item = static_cast<Bit>(c.d.value_or(0));
  for (PlayerId w : c.withhold) players[w].deviation = protocols::Deviation::Withhold;
  const auto r = protocols::anon_run(players, rng);
  json verdicts = {{"decoded", r.decoded ? json(*r.decoded) : json(nullptr)}};
  emit_json(c, protocols::to_json("anon", r.transcript, r.ledger, verdicts));
  if (!r.decoded) {
    out << "aborted\n";
    return kProtocolAbort;
  }
  out << "decoded=" << int(*r.decoded) << "\n";
  return kOk;
}

double epr_fidelity(const qsim::GhzPhaseState& pair) {
  const auto dense = qsim::to_dense(pair);
  const double h = std::sqrt(0.5);
  return std::norm(h * dense.amplitude(0) + h * dense.amplitude(3));
}

int cmd_ae(const RunConfig& c, std::ostream& out) {
  RngStream rng(require_seed(c));
  const PlayerId s = require_player(c.sender, "sender", c.n);
  const PlayerId r = require_player(c.receiver, "receiver", c.n);
  const auto res = protocols::ae_establish(c.n, s, r, rng);
  const double f = epr_fidelity(res.epr);
  json verdicts = {{"epr_phase_numerator", res.epr.phase_numerator()},
                   {"epr_phase_denom_exp", res.epr.phase_denom_exp()},
                   {"fidelity", f}};
  emit_json(c, protocols::to_json("ae", res.transcript, res.ledger, verdicts));
  out << "epr_phase_numerator=" << res.epr.phase_numerator()
      << " fidelity=" << f << "\n";
  return kOk;
}

int cmd_anonq(const RunConfig& c, std::ostream& out) {
  RngStream rng(require_seed(c));
  const PlayerId s = require_player(c.sender, "sender", c.n);
  const PlayerId r = require_player(c.receiver, "receiver", c.n);
  const qsim::Qubit input{parse_complex(c.alpha), parse_complex(c.beta)};
  if (std::abs(input.norm_squared() - 1.0) > 1e-10) {
    throw ConfigError("input qubit is not normalized");
  }
  const auto res = protocols::anonq_send(c.n, s, r, input, rng);
  const double f = qsim::fidelity(input, res.received);
  json verdicts = {{"fidelity", f}};
  emit_json(c, protocols::to_json("anonq", res.transcript, res.ledger, verdicts));
  out << "fidelity=" << f << "\n";
  return kOk;
}

int cmd_collision(const RunConfig& c, std::ostream& out) {
  RngStream rng(require_seed(c));
  const auto v = protocols::collision_detect(c.n, c.wishers, rng);
  json parities = json::array();
  for (Bit p : v.parities) parities.push_back(int(p));
  json verdicts = {{"parities", parities},
                   {"verdict", outcome_name(v.verdict)},
                   {"first_odd_round", optional_json(v.first_odd_round)}};
  emit_json(c, protocols::to_json("collision", v.transcript, v.ledger, verdicts));
  out << "verdict=" << outcome_name(v.verdict);
  if (v.first_odd_round) out << " first_odd_round=" << *v.first_odd_round;
  out << " rounds=" << v.parities.size() << "\n";
  return kOk;
}

int cmd_dcnet(const RunConfig& c, std::ostream& out) {
  RngStream rng(require_seed(c));
  const auto g = load_graph(c);
  const PlayerId s = require_player(c.sender, "sender", g.num_nodes());
  const auto d = static_cast<Bit>(c.d.value_or(0));
  const Bits keys = lab::random_keys(g, rng);
  const auto round = lab::dcnet_round({g, keys, s, d});
  const auto traced = lab::trace_dcnet(g, keys, round.announcements, d);
  json verdicts = {{"decoded", int(round.decoded)},
                   {"traced", optional_json(traced)}};
  emit_json(c, protocols::to_json("dcnet", lab::dcnet_transcript(round),
                                  lab::dcnet_ledger(g, keys), verdicts));
  out << "decoded=" << int(round.decoded) << " traced=";
  if (traced) {
    out << *traced;
  } else {
    out << "none";
  }
  out << "\n";
  return kOk;
}

int cmd_keygraph(const RunConfig& c, std::ostream& out) {
  const auto g = load_graph(c);
  const int n = g.num_nodes();
  const auto deg = keygraph::min_degree(g);
  const int tol = keygraph::tolerance(g);
  json report = {{"graph", keygraph::graph_to_json(g)},
                 {"edges", g.num_edges()},
                 {"min_degree", deg.min_degree},
                 {"anonymity_requirement_met", deg.anonymity_requirement_met},
                 {"tolerance", tol}};
  out << "edges=" << g.num_edges() << " min_degree=" << deg.min_degree
      << (deg.anonymity_requirement_met ? " PASS" : " FAIL")
      << " tolerance=" << tol;
  if (!c.colluders.empty()) {
    const bool part = keygraph::is_partitioning_set(g, c.colluders);
    report["colluders"] = c.colluders;
    report["partitions"] = part;
    out << " partitions=" << (part ? "true" : "false");
  }
  if (n >= 3) {
    const int t = c.t.value_or(0);
    if (t < 0 || t > n - 2) throw ConfigError("--t must be in [0, n-2]");
    const auto bound = keygraph::key_lower_bound(n, t);
    report["key_lower_bound"] = {{"t", t}, {"keys", bound.keys}};
    out << " key_lower_bound(t=" << t << ")=" << bound.keys;
  }
  out << "\n";
  emit_json(c, report);
  return kOk;
}

int cmd_verdict(const RunConfig& c, std::ostream& out) {
  lab::Scenario s;
  s.protocol = lab::protocol_from_string(c.protocol);
  s.n = c.n;
  s.d = static_cast<Bit>(c.d.value_or(1));
  s.input = {parse_complex(c.alpha), parse_complex(c.beta)};
  if (s.protocol == lab::ProtocolKind::DcNet) s.graph = load_graph(c);

  PlayerSet corrupted = c.colluders;
  if (corrupted.empty() && c.t) {
    if (*c.t < 0 || *c.t > c.n - 2) throw ConfigError("--t must be in [0, n-2]");
    // Default coalition: the highest-numbered t players.
    for (int i = 0; i < *c.t; ++i) corrupted.push_back(c.n - 1 - i);
  }
  lab::VerdictOptions opt;
  opt.method = lab::method_from_string(c.mode);
  opt.trials = c.trials;
  if (opt.method == lab::Method::Sampled) opt.seed = require_seed(c);
  const auto target = lab::target_from_string(c.target);
  const auto v = c.traceless ? lab::traceless_verdict(s, target, corrupted, opt)
                             : lab::anonymity_verdict(s, target, corrupted, opt);
  emit_json(c, lab::to_json(s, v));
  out << "posterior_max=" << v.posterior_max << " baseline=" << v.baseline;
  if (v.total_variation) out << " tv=" << *v.total_variation;
  out << (v.verdict ? " PASS" : " FAIL") << "\n";
  return v.verdict ? kOk : kVerdictFailure;
}

int cmd_sweep(const RunConfig& c, std::ostream& out) {
  require_seed(c);
  const std::string csv = sweep_csv(c);
  if (c.out.empty()) {
    out << csv;
  } else {
    write_atomically(c.out, csv);
  }
  return kOk;
}

void write_error(std::ostream& err, const std::string& kind,
                 const std::string& message, int code) {
  err << json{{"error", kind}, {"message", message}, {"exit_code", code}}.dump()
      << "\n";
}

// ---------------------------------------------------------------- sweep ---

struct Cell {
  std::vector<std::int64_t> coords;
};

std::string collision_row(const RunConfig& c, const Cell& cell) {
  const int n = static_cast<int>(cell.coords[0]);
  const int k = static_cast<int>(cell.coords[1]);
  const std::uint64_t stream = cell_stream_id(*c.seed, cell.coords);
  RngStream rng(*c.seed, stream);
  // Random k-subset of wishers drawn from the cell's own stream.
  std::vector<PlayerId> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  for (int i = 0; i < k; ++i) {
    std::swap(all[i], all[i + rng.below(n - i)]);
  }
  const PlayerSet wishers(all.begin(), all.begin() + k);
  const auto v = protocols::collision_detect(n, wishers, rng);
  std::optional<int> expected;
  if (k == 0) expected = 0;
  if (k >= 2) expected = protocols::decompose_k(k).j;
  const bool ok =
      (v.verdict == protocols::CollisionOutcome::ExactlyOne) == (k == 1) &&
      v.first_odd_round == expected &&
      static_cast<int>(v.parities.size()) <= protocols::collision_round_count(n);
  std::ostringstream row;
  row << "collision," << n << "," << k << "," << stream << ","
      << outcome_name(v.verdict) << ","
      << (v.first_odd_round ? std::to_string(*v.first_odd_round) : "") << ","
      << (expected ? std::to_string(*expected) : "") << ","
      << v.parities.size() << "," << (ok ? "true" : "false") << ",";
  return row.str();
}

std::string anon_row(const RunConfig& c, const Cell& cell) {
  const int n = static_cast<int>(cell.coords[0]);
  const int sender = static_cast<int>(cell.coords[1]);
  const Bit d = static_cast<Bit>(cell.coords[2]);
  const std::uint64_t stream = cell_stream_id(*c.seed, cell.coords);
  RngStream rng(*c.seed, stream);
  const auto r = protocols::anon_send(n, sender, d, rng);
  const bool ok = r.decoded && *r.decoded == d;
  std::ostringstream row;
  row << "anon," << n << "," << sender << "," << int(d) << "," << stream << ","
      << (r.decoded ? std::to_string(*r.decoded) : "") << ","
      << (ok ? "true" : "false") << ",";
  return row.str();
}

std::string tolerance_row(const RunConfig&, const Cell& cell) {
  const int n = static_cast<int>(cell.coords[0]);
  const auto mask = static_cast<std::uint64_t>(cell.coords[1]);
  const auto g = keygraph::KeySharingGraph::from_edge_mask(n, mask);
  const int tol = keygraph::tolerance(g);
  bool monotone = true;
  const int pairs = n * (n - 1) / 2;
  for (int e = 0; e < pairs; ++e) {
    if ((mask >> e) & 1) continue;
    const auto bigger =
        keygraph::KeySharingGraph::from_edge_mask(n, mask | (std::uint64_t{1} << e));
    if (keygraph::tolerance(bigger) < tol) monotone = false;
  }
  std::ostringstream row;
  row << "tolerance," << n << "," << mask << "," << g.num_edges() << ","
      << keygraph::min_degree(g).min_degree << "," << tol << ","
      << (monotone ? "true" : "false") << ",";
  return row.str();
}

}  // namespace

std::uint64_t cell_stream_id(std::uint64_t seed,
                             const std::vector<std::int64_t>& coords) {
  std::uint64_t h = mix64(seed);
  for (std::int64_t x : coords) h = mix64(h ^ static_cast<std::uint64_t>(x));
  return h;
}

void write_atomically(const std::string& path, const std::string& contents) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) {
    std::filesystem::create_directories(target.parent_path());
  }
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << contents;
    if (!f.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

std::string sweep_csv(const RunConfig& c) {
  if (!c.seed) throw ConfigError("sweep needs --seed");
  if (c.n_min > c.n_max) throw ConfigError("empty grid: --n-min > --n-max");

  std::vector<Cell> cells;
  std::string header;
  std::string (*row_fn)(const RunConfig&, const Cell&) = nullptr;
  if (c.kind == "collision") {
    if (c.n_min < 2) throw ConfigError("collision sweep needs n >= 2");
    header = "kind,n,k,stream,verdict,first_odd_round,expected_round,rounds,match,error";
    for (int n = c.n_min; n <= c.n_max; ++n)
      for (int k = 0; k <= n; ++k) cells.push_back({{n, k}});
    row_fn = collision_row;
  } else if (c.kind == "anon") {
    if (c.n_min < 3) throw ConfigError("anon sweep needs n >= 3");
    header = "kind,n,sender,d,stream,decoded,match,error";
    for (int n = c.n_min; n <= c.n_max; ++n)
      for (int s = 0; s < n; ++s)
        for (int d = 0; d < 2; ++d) cells.push_back({{n, s, d}});
    row_fn = anon_row;
  } else if (c.kind == "tolerance") {
    if (c.n_min < 2 || c.n_max > keygraph::kGraphSearchNodeLimit) {
      throw ConfigError("tolerance sweep covers 2 <= n <= 6");
    }
    header = "kind,n,edge_mask,edges,min_degree,tolerance,monotone,error";
    for (int n = c.n_min; n <= c.n_max; ++n) {
      const int pairs = n * (n - 1) / 2;
      for (std::int64_t m = 0; m < (std::int64_t{1} << pairs); ++m) {
        cells.push_back({{n, m}});
      }
    }
    row_fn = tolerance_row;
  } else {
    throw ConfigError("unknown sweep kind '" + c.kind +
                      "' (collision, anon, tolerance)");
  }
  if (cells.empty()) throw ConfigError("empty grid");

  std::vector<std::string> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        rows[i] = row_fn(c, cells[i]);
      } catch (const std::exception& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), ',', ';');
        std::ostringstream row;
        row << c.kind;
        for (auto x : cells[i].coords) row << "," << x;
        row << ",error:" << msg;
        rows[i] = row.str();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned count =
      c.threads > 0 ? static_cast<unsigned>(c.threads) : std::min(hw, 8u);
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < count; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::string csv = header + "\n";
  for (const auto& r : rows) csv += r + "\n";
  return csv;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.command != "sweep" && c.command != "keygraph" &&
        c.graph_file.empty() && c.n < 2) {
      throw ConfigError("--n must be >= 2");
    }
    auto check = [&](const PlayerSet& s, const char* what) {
      for (PlayerId p : s) {
        if (p < 0 || p >= c.n) {
          throw ConfigError(std::string(what) + " index out of range");
        }
      }
    };
    if (c.command != "sweep") {
      if (c.n > 0) {
        check(c.wishers, "wisher");
        check(c.colluders, "colluder");
        check(c.withhold, "withhold");
      }
    }
    if (c.command == "anon") return cmd_anon(c, out);
    if (c.command == "ae") return cmd_ae(c, out);
    if (c.command == "anonq") return cmd_anonq(c, out);
    if (c.command == "collision") return cmd_collision(c, out);
    if (c.command == "dcnet") return cmd_dcnet(c, out);
    if (c.command == "keygraph") return cmd_keygraph(c, out);
    if (c.command == "verdict") return cmd_verdict(c, out);
    if (c.command == "sweep") return cmd_sweep(c, out);
    throw ConfigError("unknown command '" + c.command + "'");
  } catch (const ConfigError& e) {
    write_error(err, "config", e.what(), kConfigError);
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    write_error(err, "config", e.what(), kConfigError);
    return kConfigError;
  } catch (const std::exception& e) {
    write_error(err, "runtime", e.what(), kConfigError);
    return kConfigError;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Anonymous transmission over shared GHZ states: protocols, "
               "adversary analysis and key-graph audits"};
  app.require_subcommand(1);
  RunConfig c;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", c.n, "Number of players");
    sub->add_option("--seed", c.seed, "64-bit seed (required for stochastic runs)");
    sub->add_option("--out", c.out, "Report path (default: $" +
                                        std::string(kOutDirEnv) + ")");
  };

  auto* anon = app.add_subcommand("anon", "Send one classical bit anonymously");
  add_common(anon);
  anon->add_option("--sender", c.sender)->required();
  anon->add_option("--d", c.d, "Bit to send")->check(CLI::Range(0, 1));
  anon->add_option("--withhold", c.withhold, "Players that skip the broadcast")
      ->delimiter(',');

  auto* ae = app.add_subcommand("ae", "Establish anonymous entanglement");
  add_common(ae);
  ae->add_option("--sender", c.sender)->required();
  ae->add_option("--receiver", c.receiver)->required();

  auto* anonq = app.add_subcommand("anonq", "Teleport a qubit anonymously");
  add_common(anonq);
  anonq->add_option("--sender", c.sender)->required();
  anonq->add_option("--receiver", c.receiver)->required();
  anonq->add_option("--alpha", c.alpha, "Amplitude of |0> as 're' or 're,im'");
  anonq->add_option("--beta", c.beta, "Amplitude of |1> as 're' or 're,im'");

  auto* coll = app.add_subcommand("collision", "Run collision detection");
  add_common(coll);
  coll->add_option("--wishers", c.wishers, "Players wanting to send")
      ->delimiter(',');

  auto add_graph = [&](CLI::App* sub) {
    sub->add_option("--topology", c.topology, "complete|cycle|star|path");
    sub->add_option("--graph", c.graph_file,
                    "Edge-list text or adjacency JSON (*.json)");
  };

  auto* dc = app.add_subcommand("dcnet", "Classical DC-net round plus trace-back");
  add_common(dc);
  add_graph(dc);
  dc->add_option("--sender", c.sender)->required();
  dc->add_option("--d", c.d)->check(CLI::Range(0, 1));

  auto* kg = app.add_subcommand("keygraph", "Audit a key-sharing graph");
  add_common(kg);
  add_graph(kg);
  kg->add_option("--colluders", c.colluders)->delimiter(',');
  kg->add_option("--t", c.t, "Collusion size for the key bound");

  auto* ver = app.add_subcommand("verdict", "Anonymity / tracelessness verdict");
  add_common(ver);
  add_graph(ver);
  ver->add_option("--protocol", c.protocol, "anon|ae|anonq|dcnet");
  ver->add_option("--target", c.target, "sender|receiver");
  ver->add_option("--t", c.t, "Corrupt the t highest-numbered players");
  ver->add_option("--colluders", c.colluders, "Explicit corrupted set")
      ->delimiter(',');
  ver->add_option("--mode", c.mode, "exact|sampled");
  ver->add_option("--trials", c.trials, "Runs per candidate (sampled)");
  ver->add_option("--d", c.d)->check(CLI::Range(0, 1));
  ver->add_option("--alpha", c.alpha);
  ver->add_option("--beta", c.beta);
  ver->add_flag("--traceless", c.traceless, "Adversary hijacks every player");

  auto* sw = app.add_subcommand("sweep", "Grid sweep to CSV");
  sw->add_option("--kind", c.kind, "collision|anon|tolerance")->required();
  sw->add_option("--n-min", c.n_min);
  sw->add_option("--n-max", c.n_max);
  sw->add_option("--seed", c.seed);
  sw->add_option("--threads", c.threads);
  sw->add_option("--out", c.out, "CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    write_error(err, "config", e.what(), kConfigError);
    return kConfigError;
  }
  c.command = app.get_subcommands().front()->get_name();
  return run(c, out, err);
}

}  // namespace anontx::cli
