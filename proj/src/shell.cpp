#include "jackflow/shell.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "jackflow/acceptance.hpp"
#include "jackflow/ctmc.hpp"
#include "jackflow/diffusion.hpp"
#include "jackflow/ensembles.hpp"
#include "jackflow/jack.hpp"
#include "jackflow/parallel.hpp"
#include "jackflow/rng.hpp"

namespace jackflow::shell {

using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_real(std::string_view key, std::string_view text) {
  const std::string t(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v))
    throw ConfigError(std::string(key), "expected a real number, got '" + t + "'");
  return v;
}

template <class Int>
Int parse_int(std::string_view key, std::string_view text) {
  Int v{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw ConfigError(std::string(key), "expected an integer, got '" + std::string(text) + "'");
  return v;
}

std::string normalize_key(std::string_view key) {
  std::string k(key);
  for (auto& c : k)
    if (c == '-') c = '_';
  return k;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{"n",       "theta",   "beta",  "time",  "epsilon",   "paths",
                                             "seed",    "out",     "format", "dt",   "delta",     "snapshots",
                                             "workers", "start_variance", "partition", "s"};
  return keys;
}

Theta RunConfig::resolved_theta() const {
  if (theta) return Theta(*theta);
  if (beta) return Theta::from_beta(*beta);
  return Theta(1.0);
}

void RunConfig::validate() const {
  if (theta && beta && std::abs(*beta - 2.0 * *theta) > 1e-12 * std::abs(*beta))
    throw ConfigError("beta", "beta = " + num(*beta) + " contradicts theta = " + num(*theta) + " (beta must be 2 theta)");
  for (std::size_t i = 0; i < snapshots.size(); ++i) {
    if (snapshots[i] > time) throw ConfigError("snapshots", "snapshot time " + num(snapshots[i]) + " exceeds time");
    if (i > 0 && snapshots[i] < snapshots[i - 1]) throw ConfigError("snapshots", "snapshot times must be nondecreasing");
  }
}

void set_config_value(RunConfig& cfg, std::string_view raw_key, std::string_view raw_value) {
  const std::string key = normalize_key(raw_key);
  const std::string value = trim(raw_value);
  const auto positive = [&](double v) {
    if (!(v > 0.0)) throw ConfigError(key, "must be positive, got " + value);
    return v;
  };
  if (key == "n") {
    const int v = parse_int<int>(key, value);
    if (v < 1 || v > 64) throw ConfigError(key, "must lie in [1, 64], got " + value);
    cfg.n = v;
  } else if (key == "theta") {
    cfg.theta = positive(parse_real(key, value));
  } else if (key == "beta") {
    cfg.beta = positive(parse_real(key, value));
  } else if (key == "time") {
    const double v = parse_real(key, value);
    if (v < 0.0) throw ConfigError(key, "must be nonnegative, got " + value);
    cfg.time = v;
  } else if (key == "epsilon") {
    const double v = parse_real(key, value);
    if (!(v > 0.0 && v <= 1.0)) throw ConfigError(key, "must lie in (0, 1], got " + value);
    cfg.epsilon = v;
  } else if (key == "paths") {
    const auto v = parse_int<long long>(key, value);
    if (v < 1) throw ConfigError(key, "must be at least 1, got " + value);
    cfg.paths = static_cast<std::size_t>(v);
  } else if (key == "seed") {
    cfg.seed = parse_int<std::uint64_t>(key, value);
  } else if (key == "out") {
    if (value.empty()) throw ConfigError(key, "must not be empty");
    cfg.out = value;
  } else if (key == "format") {
    if (value != "csv" && value != "json") throw ConfigError(key, "must be csv or json, got '" + value + "'");
    cfg.format = value;
  } else if (key == "dt") {
    cfg.dt = positive(parse_real(key, value));
  } else if (key == "delta") {
    const double v = parse_real(key, value);
    if (v < 0.0) throw ConfigError(key, "must be nonnegative, got " + value);
    cfg.delta = v;
  } else if (key == "snapshots") {
    cfg.snapshots.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const double v = parse_real(key, trim(item));
      if (v < 0.0) throw ConfigError(key, "snapshot times must be nonnegative");
      cfg.snapshots.push_back(v);
    }
  } else if (key == "workers") {
    const int v = parse_int<int>(key, value);
    if (v < 0) throw ConfigError(key, "must be nonnegative, got " + value);
    cfg.workers = v;
  } else if (key == "start_variance") {
    cfg.start_variance = positive(parse_real(key, value));
  } else if (key == "partition") {
    try {
      (void)parse_partition(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key, e.what());
    }
    cfg.partition = value;
  } else if (key == "s") {
    const double v = parse_real(key, value);
    if (v < 0.0) throw ConfigError(key, "must be nonnegative, got " + value);
    cfg.s = v;
  } else {
    throw ConfigError(key, "unknown key");
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::stringstream ss{std::string(text)};
  std::string line;
  while (std::getline(ss, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(body, "expected key = value");
    set_config_value(cfg, trim(std::string_view(body).substr(0, eq)), std::string_view(body).substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_value(const RunConfig& cfg, std::string_view key) {
  const std::string k = normalize_key(key);
  if (k == "n") return std::to_string(cfg.n);
  if (k == "theta") return num(cfg.resolved_theta().value());
  if (k == "beta") return num(cfg.resolved_theta().beta());
  if (k == "time") return num(cfg.time);
  if (k == "epsilon") return num(cfg.epsilon);
  if (k == "paths") return std::to_string(cfg.paths);
  if (k == "seed") return std::to_string(cfg.seed);
  if (k == "out") return cfg.out;
  if (k == "format") return cfg.format;
  if (k == "dt") return num(cfg.dt);
  if (k == "delta") return num(cfg.delta);
  if (k == "snapshots") {
    std::string s;
    for (std::size_t i = 0; i < cfg.snapshots.size(); ++i) s += (i ? "," : "") + num(cfg.snapshots[i]);
    return s;
  }
  if (k == "workers") return std::to_string(cfg.workers);
  if (k == "start_variance") return num(cfg.start_variance);
  if (k == "partition") return cfg.partition;
  if (k == "s") return num(cfg.s);
  throw ConfigError(k, "unknown key");
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// A tidy table; written as CSV or as a JSON array of row objects.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<bool> numeric;  // per column, for JSON typing
};

std::string write_table(const Table& t, const std::filesystem::path& dir, const std::string& stem,
                        const std::string& format) {
  const auto path = dir / (stem + (format == "json" ? ".json" : ".csv"));
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (format == "json") {
    json arr = json::array();
    for (const auto& r : t.rows) {
      json obj;
      for (std::size_t c = 0; c < t.header.size(); ++c) {
        if (t.numeric[c]) obj[t.header[c]] = json::parse(r[c]);
        else obj[t.header[c]] = r[c];
      }
      arr.push_back(std::move(obj));
    }
    out << arr.dump(1) << '\n';
  } else {
    for (std::size_t c = 0; c < t.header.size(); ++c) out << (c ? "," : "") << t.header[c];
    out << '\n';
    for (const auto& r : t.rows) {
      for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << r[c];
      out << '\n';
    }
  }
  return path.string();
}

Table snapshot_table() {
  return {{"path", "time", "level", "index", "value"}, {}, {true, true, true, true, true}};
}

void add_levels(Table& t, std::size_t path, double time, const std::vector<std::vector<double>>& levels,
                int first_level) {
  for (std::size_t k = 0; k < levels.size(); ++k)
    for (std::size_t i = 0; i < levels[k].size(); ++i)
      t.rows.push_back({std::to_string(path), num(time), std::to_string(first_level + static_cast<int>(k)),
                        std::to_string(i + 1), num(levels[k][i])});
}

std::vector<std::vector<double>> as_levels(const std::vector<double>& flat, bool multilevel, int n) {
  if (!multilevel) return {flat};
  return ConePoint::unflatten(n, flat).levels;
}

struct Invocation {
  std::string command;  // "chain single", "verify", ...
  std::string suite;    // verify only
  RunConfig cfg;
  std::map<std::string, bool> explicit_keys;
};

json base_manifest(const Invocation& inv, const std::string& started) {
  json m;
  m["command"] = inv.command;
  if (!inv.suite.empty()) m["suite"] = inv.suite;
  json cfg = json::object();
  for (const auto& k : config_keys()) cfg[k] = config_value(inv.cfg, k);
  m["config"] = cfg;
  m["seed"] = inv.cfg.seed;
  m["version"] = JACKFLOW_VERSION;
  m["started"] = started;
  return m;
}

std::filesystem::path prepare_out(const RunConfig& cfg) {
  std::filesystem::path dir(cfg.out);
  std::filesystem::create_directories(dir);
  return dir;
}

void finish_manifest(json& m, const std::filesystem::path& dir, const std::vector<std::string>& outputs) {
  m["outputs"] = outputs;
  m["finished"] = utc_now();
  std::ofstream out(dir / "manifest.json");
  out << m.dump(2) << '\n';
}

int run_jack_eval(const Invocation& inv) {
  const auto& cfg = inv.cfg;
  const auto started = utc_now();
  const Partition lam = parse_partition(cfg.partition);
  const Theta th = cfg.resolved_theta();
  json r;
  r["partition"] = format_partition(lam);
  r["n"] = cfg.n;
  r["theta"] = th.value();
  r["s"] = cfg.s;
  const auto principal = jack_principal(lam, cfg.n, th);
  const auto planch = jack_plancherel(lam, cfg.s, th);
  r["principal"] = principal.value();
  r["log_principal"] = principal.is_zero() ? json(nullptr) : json(principal.log_abs);
  r["plancherel"] = planch.value();
  r["dual_factor"] = dual_factor(lam, th).value();
  r["jack_measure"] = jack_measure_log(lam, cfg.n, cfg.s, th).value();
  std::cout << r.dump(2) << '\n';
  if (inv.explicit_keys.count("out")) {
    const auto dir = prepare_out(cfg);
    auto m = base_manifest(inv, started);
    m["result"] = r;
    finish_manifest(m, dir, {});
  }
  return 0;
}

int run_chain(const Invocation& inv, bool multilevel) {
  const auto& cfg = inv.cfg;
  const auto started = utc_now();
  const Theta th = cfg.resolved_theta();
  ChainConfig cc;
  cc.n = cfg.n;
  cc.theta = th;
  cc.horizon_s = cfg.time / (cfg.epsilon * th.value());
  cc.seed = cfg.seed;
  if (multilevel) cc.initial = InterlacingArray::empty(cfg.n);
  for (double t : cfg.snapshots) cc.snapshot_times.push_back(t / (cfg.epsilon * th.value()));
  cc.validate();
  const auto trajs = batch(cc, cfg.paths, cfg.workers);

  Table events{{"path", "s", "level", "row", "pushed"}, {}, {true, true, true, true, true}};
  Table snaps = snapshot_table();
  std::vector<double> times = cfg.snapshots;
  times.push_back(cfg.time);
  for (std::size_t p = 0; p < trajs.size(); ++p) {
    for (const auto& e : trajs[p].events)
      events.rows.push_back({std::to_string(p), num(e.time), std::to_string(e.level), std::to_string(e.row),
                             e.pushed ? "1" : "0"});
    for (std::size_t k = 0; k < times.size(); ++k) {
      const ChainState& st = k + 1 < times.size() ? trajs[p].snapshots[k] : trajs[p].final_state;
      const ScalingParams sp(cfg.epsilon, times[k], th.value());
      const auto pt = rescale_state(st, sp, cfg.n);
      if (multilevel) add_levels(snaps, p, times[k], std::get<ConePoint>(pt).levels, 1);
      else add_levels(snaps, p, times[k], {std::get<WeylPoint>(pt).coords}, cfg.n);
    }
  }
  const auto dir = prepare_out(cfg);
  std::vector<std::string> outputs{write_table(events, dir, "events", cfg.format),
                                   write_table(snaps, dir, "snapshots", cfg.format)};
  auto m = base_manifest(inv, started);
  m["chain_time"] = cc.horizon_s;
  std::uint64_t total = 0;
  for (const auto& t : trajs) total += t.event_count;
  m["events"] = total;
  finish_manifest(m, dir, outputs);
  return 0;
}

int run_sde(const Invocation& inv, bool multilevel) {
  const auto& cfg = inv.cfg;
  const auto started = utc_now();
  const Theta th = cfg.resolved_theta();
  SdeConfig sc;
  sc.n = cfg.n;
  sc.theta = th;
  sc.t_end = cfg.time;
  sc.dt = cfg.dt;
  sc.delta_stop = cfg.delta;
  sc.snapshot_times = cfg.snapshots;
  sc.seed = cfg.seed;
  std::vector<SdePath> paths;
  if (!multilevel) {
    sc.initial = WeylPoint{std::vector<double>(static_cast<std::size_t>(cfg.n), 0.0)};
    paths = sde_batch(sc, cfg.paths, false, cfg.workers);
  } else {
    if (th.value() < 1.0) throw std::invalid_argument("multilevel SDE needs theta >= 1");
    sc.validate();
    paths.resize(cfg.paths);
    parallel_for(cfg.paths, resolve_workers(cfg.workers), [&](std::size_t i) {
      Rng rng = make_rng(child_seed(cfg.seed, 0xC0), i);
      const auto top = sample_hermite_tridiagonal(EnsembleParams(cfg.n, th, cfg.start_variance), rng);
      SdeConfig c = sc;
      c.initial = sample_corners_given_top(top, th, rng);
      c.seed = child_seed(cfg.seed, i);
      paths[i] = integrate_multilevel(c);
    });
  }
  Table snaps = snapshot_table();
  std::vector<double> times = cfg.snapshots;
  times.push_back(cfg.time);
  json records = json::array();
  for (std::size_t p = 0; p < paths.size(); ++p) {
    for (std::size_t k = 0; k < times.size(); ++k) {
      const auto& flat = k + 1 < times.size() ? paths[p].snapshots[k] : paths[p].final_state;
      add_levels(snaps, p, times[k], as_levels(flat, multilevel, cfg.n), multilevel ? 1 : cfg.n);
    }
    const auto& st = paths[p].stopping;
    json r;
    r["path"] = p;
    r["tau_delta"] = st.tau_delta ? json(*st.tau_delta) : json(nullptr);
    r["hat_tau_delta"] = st.hat_tau_delta ? json(*st.hat_tau_delta) : json(nullptr);
    r["min_gap_seen"] = std::isfinite(st.min_gap_seen) ? json(st.min_gap_seen) : json(nullptr);
    r["accepted_steps"] = paths[p].accepted_steps;
    r["rejected_steps"] = paths[p].rejected_steps;
    r["constraint_held"] = paths[p].constraint_held;
    r["no_collision_guarantee"] = paths[p].no_collision_guarantee;
    r["start_time"] = paths[p].start_time;
    if (paths[p].halted_at) r["halted_at"] = *paths[p].halted_at;
    records.push_back(std::move(r));
  }
  const auto dir = prepare_out(cfg);
  std::vector<std::string> outputs{write_table(snaps, dir, "snapshots", cfg.format)};
  auto m = base_manifest(inv, started);
  m["stopping"] = records;
  finish_manifest(m, dir, outputs);
  return 0;
}

json diagnostics_json(const McmcDiagnostics& d) {
  json j;
  j["acceptance_rate"] = d.acceptance_rate;
  j["autocorr_time"] = d.autocorr_time;
  j["thin"] = d.thin;
  j["chains"] = d.chains;
  j["lag1_after_thinning"] = d.lag1_after_thinning;
  j["under_thinned"] = d.under_thinned;
  return j;
}

int run_sample(const Invocation& inv, bool corners) {
  const auto& cfg = inv.cfg;
  const auto started = utc_now();
  const EnsembleParams ep(cfg.n, cfg.resolved_theta(), cfg.time);
  Table snaps = snapshot_table();
  auto m = base_manifest(inv, started);
  if (corners) {
    const auto cs = sample_corners(ep, cfg.paths, cfg.seed, {}, cfg.workers);
    for (std::size_t i = 0; i < cs.samples.size(); ++i) add_levels(snaps, i, cfg.time, cs.samples[i].levels, 1);
    m["diagnostics"] = diagnostics_json(cs.diagnostics);
    m["fallbacks"] = cs.fallbacks;
  } else {
    const auto hs = sample_hermite(ep, cfg.paths, cfg.seed, {}, cfg.workers);
    for (std::size_t i = 0; i < hs.samples.size(); ++i) add_levels(snaps, i, cfg.time, {hs.samples[i].coords}, cfg.n);
    m["diagnostics"] = diagnostics_json(hs.diagnostics);
  }
  const auto dir = prepare_out(cfg);
  finish_manifest(m, dir, {write_table(snaps, dir, "snapshots", cfg.format)});
  return 0;
}

int run_verify(const Invocation& inv) {
  const auto& cfg = inv.cfg;
  const auto started = utc_now();
  const auto ids = acceptance::suite(inv.suite);
  const std::uint64_t seed = inv.explicit_keys.count("seed") ? cfg.seed : 20240601;
  json criteria = json::array();
  bool ok = true;
  for (int id : ids) {
    const auto r = acceptance::run(id, seed, cfg.workers);
    std::cout << acceptance::summary_line(r) << std::endl;
    json c;
    c["id"] = r.id;
    c["title"] = r.title;
    c["pass"] = r.pass;
    c["detail"] = r.detail;
    c["runtime_s"] = r.runtime_s;
    c["reports"] = json::parse(reports_to_json(r.reports));
    criteria.push_back(std::move(c));
    ok = ok && r.pass;
  }
  const auto dir = prepare_out(cfg);
  const auto reports_path = (dir / "reports.json").string();
  {
    std::ofstream out(reports_path);
    out << criteria.dump(2) << '\n';
  }
  auto m = base_manifest(inv, started);
  m["seed"] = seed;
  m["reports"] = criteria;
  m["pass"] = ok;
  finish_manifest(m, dir, {reports_path});
  return ok ? 0 : 1;
}

int execute(const Invocation& inv) {
  if (inv.command == "jack eval") return run_jack_eval(inv);
  if (inv.command == "chain single") return run_chain(inv, false);
  if (inv.command == "chain multi") return run_chain(inv, true);
  if (inv.command == "sde dyson") return run_sde(inv, false);
  if (inv.command == "sde multilevel") return run_sde(inv, true);
  if (inv.command == "sample hermite") return run_sample(inv, false);
  if (inv.command == "sample corners") return run_sample(inv, true);
  if (inv.command == "verify") return run_verify(inv);
  throw std::invalid_argument("unknown command '" + inv.command + "'");
}

// Re-executes a manifest: same command, same config; only the output directory may change.
int rerun(const std::string& manifest_path, const std::optional<std::string>& out_override) {
  std::ifstream in(manifest_path);
  if (!in) throw std::invalid_argument("cannot read manifest '" + manifest_path + "'");
  json m;
  try {
    m = json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument("malformed manifest: " + std::string(e.what()));
  }
  Invocation inv;
  inv.command = m.at("command").get<std::string>();
  inv.suite = m.value("suite", "");
  for (const auto& [k, v] : m.at("config").items()) {
    set_config_value(inv.cfg, k, v.get<std::string>());
    inv.explicit_keys[k] = true;
  }
  if (out_override) inv.cfg.out = *out_override;
  inv.cfg.validate();
  return execute(inv);
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args) {
  CLI::App app{"jackflow: Jack-measure Markov chains, Dyson diffusions and beta-ensemble checks", "jackflow"};
  app.require_subcommand(1);
  std::map<std::string, std::string> values;
  std::string config_path, suite, manifest;
  std::optional<std::string> rerun_out;
  std::vector<std::pair<CLI::App*, std::string>> leaves;
  std::map<CLI::App*, std::vector<std::pair<std::string, CLI::Option*>>> options;

  const auto add_common = [&](CLI::App* sub, const std::string& command) {
    for (const auto& key : config_keys()) {
      std::string flag = "--" + key;
      for (auto& c : flag)
        if (c == '_') c = '-';
      options[sub].push_back({key, sub->add_option(flag, values[key])});
    }
    sub->add_option("--config", config_path, "flat key = value config file; flags override it");
    leaves.push_back({sub, command});
  };

  auto* jack = app.add_subcommand("jack", "Jack polynomial evaluations");
  jack->require_subcommand(1);
  add_common(jack->add_subcommand("eval", "J(1^N), J(r_s), dual factor and Jack measure of --partition"), "jack eval");
  auto* chain = app.add_subcommand("chain", "exact simulation of the Jack chains");
  chain->require_subcommand(1);
  add_common(chain->add_subcommand("single", "one-level chain on Young diagrams"), "chain single");
  add_common(chain->add_subcommand("multi", "multilevel chain on interlacing arrays"), "chain multi");
  auto* sde = app.add_subcommand("sde", "guarded Euler-Maruyama integration");
  sde->require_subcommand(1);
  add_common(sde->add_subcommand("dyson", "beta Dyson Brownian motion from the origin"), "sde dyson");
  add_common(sde->add_subcommand("multilevel", "interlaced diffusion from a corners start"), "sde multilevel");
  auto* sample = app.add_subcommand("sample", "beta-ensemble samplers");
  sample->require_subcommand(1);
  add_common(sample->add_subcommand("hermite", "Hermite beta ensemble (MCMC)"), "sample hermite");
  add_common(sample->add_subcommand("corners", "Hermite beta corners process"), "sample corners");
  auto* verify = app.add_subcommand("verify", "run an acceptance suite");
  verify->add_option("suite", suite, "identities | rates | convergence | intertwining | sde | all")
      ->required()
      ->check(CLI::IsMember({"identities", "rates", "convergence", "intertwining", "sde", "all"}));
  add_common(verify, "verify");
  auto* rerun_cmd = app.add_subcommand("rerun", "re-execute the run described by a manifest");
  rerun_cmd->add_option("manifest", manifest, "path to manifest.json")->required();
  rerun_cmd->add_option("--out", rerun_out, "output directory (default: the manifest's)");

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (rerun_cmd->parsed()) return rerun(manifest, rerun_out);
    for (const auto& [sub, command] : leaves) {
      if (!sub->parsed()) continue;
      Invocation inv;
      inv.command = command;
      inv.suite = suite;
      if (!config_path.empty()) inv.cfg = load_config(config_path);
      for (const auto& [key, opt] : options[sub]) {
        if (opt->count() == 0) continue;
        set_config_value(inv.cfg, key, values[key]);
        inv.explicit_keys[key] = true;
      }
      inv.cfg.validate();
      return execute(inv);
    }
    std::cerr << app.help();
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << '\n';
    return 1;
  }
}

int cli_dispatch(int argc, const char* const* argv) {
  return cli_dispatch(std::vector<std::string>(argv, argv + argc));
}

}  // namespace jackflow::shell
