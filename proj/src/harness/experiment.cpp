/*
 * Copyright 2026 The fedgcn-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fedgcn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "fedgcn/analysis.hpp"
#include "fedgcn/errors.hpp"
#include "fedgcn/rng.hpp"
#include "fedgcn/secure.hpp"

namespace fedgcn {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
      throw ConfigError("unknown key '" + k + "' in " + where);
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t graph_seed(std::uint64_t s) { return derive_seed({s, 0x62a9}); }
std::uint64_t split_seed(std::uint64_t s) { return derive_seed({s, 0x5e17}); }
std::uint64_t partition_seed(std::uint64_t s) { return derive_seed({s, 0x9a27}); }
std::uint64_t channel_secret(std::uint64_t s) { return derive_seed({s, 0xc4a2}); }

std::unique_ptr<SecureChannel> channel_for(const ExperimentConfig& cfg, int clients,
                                           std::uint64_t seed) {
  ChannelOptions o;
  o.num_clients = clients;
  o.master_secret = channel_secret(seed);
  return make_channel(cfg.channel, o);
}

std::string u64(std::uint64_t v) { return std::to_string(v); }

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return std::nan("");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

struct RunOutcome {
  TrainingResult result;
  ConvergenceTime convergence;
  bool has_convergence = false;
};

RunOutcome train_one(const ExperimentConfig& cfg, const Instance& inst, std::uint64_t seed) {
  auto channel = channel_for(cfg, inst.partition.num_clients, seed);
  FederationConfig fed;
  fed.hops = cfg.hops;
  fed.weighting = cfg.weighting;
  RunOutcome out;
  out.result = run_training(inst.graph, inst.partition, inst.split, fed, cfg.model, cfg.training,
                            *channel, seed);
  const auto curve = out.result.val_curve();
  if (!curve.empty()) {
    out.convergence = convergence_time(curve);
    out.has_convergence = true;
  }
  return out;
}

json run_json(std::uint64_t seed, const RunOutcome& r) {
  const auto& res = r.result;
  double final_val = std::nan("");
  for (auto it = res.rounds.rbegin(); it != res.rounds.rend(); ++it) {
    if (it->evaluated) {
      final_val = it->val_acc;
      break;
    }
  }
  json j;
  j["seed"] = seed;
  j["final_test_acc"] = number_or_null(res.final_test_acc());
  j["final_val_acc"] = number_or_null(final_val);
  j["convergence_time"] = r.has_convergence ? json(r.convergence.index) : json(nullptr);
  j["converged"] = r.has_convergence && r.convergence.converged;
  j["pretrain"] = {{"upload_bytes", res.pretrain.upload_bytes},
                   {"download_bytes", res.pretrain.download_bytes},
                   {"setup_upload_bytes", res.pretrain.setup_upload_bytes},
                   {"setup_download_bytes", res.pretrain.setup_download_bytes},
                   {"upload_elements", res.pretrain.upload_elements},
                   {"download_elements", res.pretrain.download_elements}};
  j["model_bytes_per_round"] = res.model_bytes_per_round;
  j["diverged"] = res.diverged;
  j["diagnostic"] = res.diagnostic;
  return j;
}

std::string csv_line(std::initializer_list<std::string> cells) {
  std::string s;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) s += ',';
    s += c;
    first = false;
  }
  s += '\n';
  return s;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_file_atomic(const fs::path& file, const std::string& contents) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
  fs::path tmp = file;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw ConfigError("cannot write " + tmp.string());
    os << contents;
    if (!os) throw ConfigError("short write to " + tmp.string());
  }
  fs::rename(tmp, file);
}

SbmParams SbmSource::params() const {
  SbmParams p;
  p.num_nodes = nodes;
  p.num_blocks = blocks;
  p.alpha = alpha;
  p.mu = mu;
  p.feature_dim = feature_dim;
  p.feature_noise = feature_noise;
  return p;
}

void ExperimentConfig::validate() const {
  if (clients < 1) throw ConfigError("K must be at least 1");
  if (!(iid_fraction >= 0.0 && iid_fraction <= 1.0)) {
    throw ConfigError("iid_fraction must lie in [0, 1]");
  }
  if (model.num_layers < 1 || model.hidden_dim < 1) {
    throw ConfigError("model needs at least one layer and one hidden unit");
  }
  check_hops(hops, model.num_layers);
  training.validate();
  if (seeds.empty()) throw ConfigError("seeds must not be empty");
  if (channel != "plain" && channel != "masked" && channel != "masked+sizemodel") {
    throw ConfigError("unknown channel '" + channel + "'");
  }
  if (!dataset) {
    try {
      sbm.params().validate();
    } catch (const ParameterError& e) {
      throw ConfigError(std::string("sbm: ") + e.what());
    }
  }
  for (double p : sweep.iid_fractions) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("sweep iid fractions must lie in [0, 1]");
  }
  for (int h : sweep.hops) check_hops(h, model.num_layers);
  if (sweep.workers < 0) throw ConfigError("sweep workers must be nonnegative");
}

json ExperimentConfig::to_json() const {
  json data;
  if (dataset) {
    data["dataset"] = dataset->string();
  } else {
    data["sbm"] = {{"nodes", sbm.nodes},
                   {"blocks", sbm.blocks},
                   {"alpha", sbm.alpha},
                   {"mu", sbm.mu},
                   {"feature_dim", sbm.feature_dim},
                   {"feature_noise", sbm.feature_noise}};
  }
  data["split"] = {{"train_per_class", split.train_per_class}, {"val", split.val}, {"test", split.test}};
  json j;
  j["data"] = data;
  j["clients"] = clients;
  j["iid_fraction"] = iid_fraction;
  j["hops"] = hops;
  j["model"] = {{"layers", model.num_layers}, {"hidden", model.hidden_dim}, {"dropout", training.dropout}};
  j["training"] = {{"lr", training.lr},
                   {"l2", training.l2},
                   {"tau", training.tau},
                   {"rounds", training.rounds},
                   {"eval_every", training.eval_every},
                   {"global_lr", training.global_lr},
                   {"weighting", weighting == Weighting::kUniform ? "uniform" : "train_nodes"}};
  j["channel"] = channel;
  j["seeds"] = seeds;
  j["output_dir"] = output_dir.string();
  j["sweep"] = {{"iid_fractions", sweep.iid_fractions}, {"hops", sweep.hops}, {"workers", sweep.workers}};
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  reject_unknown(j, "config",
                 {"data", "clients", "iid_fraction", "hops", "model", "training", "channel", "seeds",
                  "output_dir", "sweep"});
  if (j.contains("data")) {
    const auto& d = j["data"];
    reject_unknown(d, "data", {"sbm", "dataset", "split"});
    if (d.contains("sbm") && d.contains("dataset")) {
      throw ConfigError("data takes either sbm or dataset, not both");
    }
    if (d.contains("sbm")) {
      const auto& s = d["sbm"];
      reject_unknown(s, "data.sbm", {"nodes", "blocks", "alpha", "mu", "feature_dim", "feature_noise"});
      read(s, "nodes", c.sbm.nodes);
      read(s, "blocks", c.sbm.blocks);
      read(s, "alpha", c.sbm.alpha);
      read(s, "mu", c.sbm.mu);
      read(s, "feature_dim", c.sbm.feature_dim);
      read(s, "feature_noise", c.sbm.feature_noise);
    }
    if (d.contains("dataset")) {
      std::string p;
      read(d, "dataset", p);
      c.dataset = p;
    }
    if (d.contains("split")) {
      const auto& s = d["split"];
      reject_unknown(s, "data.split", {"train_per_class", "val", "test"});
      read(s, "train_per_class", c.split.train_per_class);
      read(s, "val", c.split.val);
      read(s, "test", c.split.test);
    }
  }
  read(j, "clients", c.clients);
  read(j, "iid_fraction", c.iid_fraction);
  read(j, "hops", c.hops);
  if (j.contains("model")) {
    const auto& m = j["model"];
    reject_unknown(m, "model", {"layers", "hidden", "dropout"});
    read(m, "layers", c.model.num_layers);
    read(m, "hidden", c.model.hidden_dim);
    read(m, "dropout", c.training.dropout);
  }
  if (j.contains("training")) {
    const auto& t = j["training"];
    reject_unknown(t, "training", {"lr", "l2", "tau", "rounds", "eval_every", "global_lr", "weighting"});
    read(t, "lr", c.training.lr);
    read(t, "l2", c.training.l2);
    read(t, "tau", c.training.tau);
    read(t, "rounds", c.training.rounds);
    read(t, "eval_every", c.training.eval_every);
    read(t, "global_lr", c.training.global_lr);
    std::string w = "uniform";
    read(t, "weighting", w);
    if (w == "uniform") {
      c.weighting = Weighting::kUniform;
    } else if (w == "train_nodes") {
      c.weighting = Weighting::kByTrainNodes;
    } else {
      throw ConfigError("weighting must be 'uniform' or 'train_nodes'");
    }
  }
  read(j, "channel", c.channel);
  read(j, "seeds", c.seeds);
  std::string out = c.output_dir.string();
  read(j, "output_dir", out);
  c.output_dir = out;
  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    reject_unknown(s, "sweep", {"iid_fractions", "hops", "workers"});
    read(s, "iid_fractions", c.sweep.iid_fractions);
    read(s, "hops", c.sweep.hops);
    read(s, "workers", c.sweep.workers);
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const fs::path& file) {
  std::ifstream is(file);
  if (!is) throw ConfigError("cannot open config " + file.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw ConfigError(file.string() + ": " + e.what());
  }
  return from_json(j);
}

std::string ExperimentConfig::hash() const {
  json j = to_json();
  j.erase("output_dir");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(j.dump())));
  return buf;
}

Instance prepare_instance(const ExperimentConfig& cfg, std::uint64_t seed) {
  Instance inst;
  if (cfg.dataset) {
    auto ds = load_dataset(*cfg.dataset);
    inst.graph = std::move(ds.graph);
    inst.split = ds.split ? *ds.split
                          : random_split(inst.graph, cfg.split.train_per_class, cfg.split.val,
                                         cfg.split.test, split_seed(seed));
  } else {
    inst.graph = sbm_generate(cfg.sbm.params(), graph_seed(seed));
    inst.split = random_split(inst.graph, cfg.split.train_per_class, cfg.split.val, cfg.split.test,
                              split_seed(seed));
  }
  inst.partition = partition_nodes(inst.graph, cfg.clients, cfg.iid_fraction, partition_seed(seed));
  return inst;
}

std::vector<fs::path> cmd_generate(const ExperimentConfig& cfg, const fs::path& out) {
  if (cfg.dataset) throw ConfigError("generate needs an sbm data source");
  std::vector<fs::path> written;
  for (auto seed : cfg.seeds) {
    const fs::path dir = cfg.seeds.size() == 1 ? out : out / ("seed_" + u64(seed));
    const Graph g = sbm_generate(cfg.sbm.params(), graph_seed(seed));
    const Split s = random_split(g, cfg.split.train_per_class, cfg.split.val, cfg.split.test,
                                 split_seed(seed));
    write_dataset(dir, g, s);
    written.push_back(dir);
  }
  return written;
}

std::vector<fs::path> cmd_partition(const ExperimentConfig& cfg, const fs::path& out) {
  const std::string h = cfg.hash();
  std::string csv = "config_hash,seed,node,client\n";
  json summary;
  summary["schema_version"] = kSummarySchemaVersion;
  summary["config_hash"] = h;
  summary["partitions"] = json::array();
  for (auto seed : cfg.seeds) {
    const auto inst = prepare_instance(cfg, seed);
    const auto& part = inst.partition;
    for (std::size_t i = 0; i < part.assignment.size(); ++i) {
      csv += csv_line({h, u64(seed), std::to_string(i), std::to_string(part.assignment[i])});
    }
    json clients = json::array();
    for (int k = 0; k < part.num_clients; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      std::vector<std::size_t> hist(static_cast<std::size_t>(inst.graph.num_classes), 0);
      for (NodeId v : part.client_nodes[ku]) ++hist[static_cast<std::size_t>(inst.graph.labels[v])];
      clients.push_back({{"client", k},
                         {"nodes", part.client_nodes[ku].size()},
                         {"internal_edges", part.internal_edges[ku].size()},
                         {"cross_edges", part.cross_edges[ku].size()},
                         {"label_histogram", hist}});
    }
    summary["partitions"].push_back(
        {{"seed", seed}, {"cross_edges", part.num_cross_edges()}, {"clients", clients}});
  }
  write_file_atomic(out / "partition.csv", csv);
  write_file_atomic(out / "partition.json", summary.dump(2) + "\n");
  return {out / "partition.csv", out / "partition.json"};
}

std::vector<fs::path> cmd_train(const ExperimentConfig& cfg, const fs::path& out) {
  const std::string h = cfg.hash();
  std::string csv = "config_hash,seed,round,t,client,loss,acc,val_acc,test_acc,up_bytes,down_bytes\n";
  json runs = json::array();
  std::vector<double> accs, times;
  for (auto seed : cfg.seeds) {
    const auto inst = prepare_instance(cfg, seed);
    const auto run = train_one(cfg, inst, seed);
    for (const auto& r : run.result.rounds) {
      const std::string rs = std::to_string(r.round), ts = std::to_string(r.t);
      if (r.round > 0) {
        for (std::size_t k = 0; k < r.clients.size(); ++k) {
          const auto& c = r.clients[k];
          csv += csv_line({h, u64(seed), rs, ts, std::to_string(k),
                           c.trained ? format_number(c.loss) : "",
                           r.evaluated ? format_number(c.train_acc) : "", "", "", "", ""});
        }
      }
      double mean_loss = 0;
      int trained = 0;
      for (const auto& c : r.clients) {
        if (c.trained) {
          mean_loss += c.loss;
          ++trained;
        }
      }
      csv += csv_line({h, u64(seed), rs, ts, "all",
                       trained ? format_number(mean_loss / trained) : "",
                       r.evaluated ? format_number(r.train_acc) : "",
                       r.evaluated ? format_number(r.val_acc) : "",
                       r.evaluated ? format_number(r.test_acc) : "", u64(r.up_bytes),
                       u64(r.down_bytes)});
    }
    runs.push_back(run_json(seed, run));
    accs.push_back(run.result.final_test_acc());
    if (run.has_convergence) times.push_back(static_cast<double>(run.convergence.index));
  }
  json summary;
  summary["schema_version"] = kSummarySchemaVersion;
  summary["config_hash"] = h;
  summary["config"] = cfg.to_json();
  summary["centralized_equivalent"] = cfg.clients == 1;
  if (cfg.clients == 1) summary["flags"] = {"centralized-equivalent"};
  summary["runs"] = runs;
  summary["aggregate"] = {{"test_acc_mean", number_or_null(mean_of(accs))},
                          {"test_acc_std", number_or_null(std_of(accs))},
                          {"convergence_time_mean", number_or_null(mean_of(times))}};
  write_file_atomic(out / "rounds.csv", csv);
  write_file_atomic(out / "summary.json", summary.dump(2) + "\n");
  return {out / "rounds.csv", out / "summary.json"};
}

std::vector<fs::path> cmd_analyze(const ExperimentConfig& cfg, const fs::path& out) {
  const std::string h = cfg.hash();
  std::string comm =
      "config_hash,seed,iid_fraction,hops,measured_elements,closed_form_exact,closed_form_approx,"
      "placement_exact,ratio\n";
  std::string bounds =
      "config_hash,seed,iid_fraction,hops,expected_bound,valid,sigma,generic_gap_mean,"
      "generic_gap_max\n";
  const bool sbm = !cfg.dataset;
  const double n = static_cast<double>(cfg.sbm.nodes);
  const double d = static_cast<double>(cfg.sbm.feature_dim);
  const double p = cfg.iid_fraction;
  for (auto seed : cfg.seeds) {
    const auto inst = prepare_instance(cfg, seed);
    const auto shifts = label_shift_sigma(inst.graph, inst.partition);
    const double shift = mean_of(shifts);
    for (int hops = 0; hops <= 2; ++hops) {
      const auto measured = comm_cost_instance(inst.graph, inst.partition, hops);
      std::string exact, approx, placement, ratio, bound, valid, sigma;
      if (sbm) {
        const auto f = comm_cost_closed_form(n, cfg.clients, d, cfg.sbm.alpha, cfg.sbm.mu, p, hops);
        const auto pe =
            comm_cost_placement_exact(n, cfg.clients, d, cfg.sbm.alpha, cfg.sbm.mu, p, hops);
        exact = format_number(f.exact);
        approx = format_number(f.approx);
        placement = format_number(pe.exact);
        ratio = f.exact > 0 ? format_number(static_cast<double>(measured) / f.exact) : "";
        const double s = commensurate_sigma(shift, n, cfg.clients, cfg.sbm.alpha, cfg.sbm.mu);
        const auto cell = sbm_expected_bound(n, cfg.clients, cfg.sbm.alpha, cfg.sbm.mu, p, hops, s);
        bound = format_number(cell.value);
        valid = cell.valid ? "1" : "0";
        sigma = format_number(s);
      }
      comm += csv_line({h, u64(seed), format_number(p), std::to_string(hops), u64(measured), exact,
                        approx, placement, ratio});
      std::string gap_mean, gap_max;
      if (static_cast<std::size_t>(hops) <= cfg.model.num_layers) {
        const auto gaps = gradient_gap_generic(inst.graph, inst.partition, hops);
        gap_mean = format_number(mean_of(gaps));
        gap_max = format_number(*std::max_element(gaps.begin(), gaps.end()));
      }
      bounds += csv_line({h, u64(seed), format_number(p), std::to_string(hops), bound, valid, sigma,
                          gap_mean, gap_max});
    }
  }
  write_file_atomic(out / "comm.csv", comm);
  write_file_atomic(out / "bounds.csv", bounds);
  return {out / "comm.csv", out / "bounds.csv"};
}

std::vector<fs::path> cmd_bench_channel(const ExperimentConfig& cfg, const fs::path& out) {
  const std::string h = cfg.hash();
  std::string csv =
      "config_hash,channel,elements,clients,wire_bytes_per_client,bgv_estimate_bytes,"
      "ckks_estimate_bytes,bgv_packed_bytes,seconds\n";
  const int k = std::max(cfg.clients, 2);
  Rng rng(derive_seed({cfg.seeds.front(), 0xbe7c}));
  for (std::uint64_t size : {1000ULL, 10000ULL, 100000ULL, 1000000ULL}) {
    std::vector<double> values(size);
    for (auto& v : values) v = uniform01(rng) - 0.5;
    for (const char* name : {"plain", "masked", "masked+sizemodel"}) {
      ChannelOptions o;
      o.num_clients = k;
      o.master_secret = channel_secret(cfg.seeds.front());
      auto ch = make_channel(name, o);
      ch->begin_round(1);
      const auto start = std::chrono::steady_clock::now();
      std::vector<Blob> blobs;
      for (int c = 0; c < k; ++c) {
        blobs.push_back(ch->encrypt({c, {}, 0, PayloadKind::kModel}, values));
      }
      const auto sum = ch->decrypt(ch->aggregate(blobs, PayloadKind::kModel), PayloadKind::kModel);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (sum.size() != size) throw ProtocolError("benchmark aggregate has the wrong length");
      std::vector<WireRecord> rec{{0, kModelHop, blobs.front()}};
      csv += csv_line({h, name, u64(size), std::to_string(k),
                       u64(ch->wire_bytes(rec, PayloadKind::kModel)),
                       format_number(estimate_ciphertext_bytes(size, SizeModel::bgv(), false)),
                       format_number(estimate_ciphertext_bytes(size, SizeModel::ckks(), false)),
                       format_number(estimate_ciphertext_bytes(size, SizeModel::bgv(), true)),
                       format_number(secs)});
    }
  }
  write_file_atomic(out / "bench.csv", csv);
  return {out / "bench.csv"};
}

std::vector<fs::path> cmd_sweep(const ExperimentConfig& cfg, const fs::path& out) {
  struct Point {
    double p;
    int hops;
    std::uint64_t seed;
    std::string name() const {
      char buf[64];
      std::snprintf(buf, sizeof buf, "p%.3f_h%d_s%llu", p, hops, static_cast<unsigned long long>(seed));
      return buf;
    }
  };
  std::vector<Point> points;
  for (double p : cfg.sweep.iid_fractions)
    for (int hops : cfg.sweep.hops)
      for (auto seed : cfg.seeds) points.push_back({p, hops, seed});

  const std::string h = cfg.hash();
  std::vector<std::string> rows(points.size());
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= points.size()) return;
      try {
        const auto& pt = points[i];
        ExperimentConfig c = cfg;
        c.iid_fraction = pt.p;
        c.hops = pt.hops;
        const auto inst = prepare_instance(c, pt.seed);
        const auto run = train_one(c, inst, pt.seed);
        json j = run_json(pt.seed, run);
        j["iid_fraction"] = pt.p;
        j["hops"] = pt.hops;
        j["config_hash"] = h;
        write_file_atomic(out / "points" / (pt.name() + ".json"), j.dump(2) + "\n");
        const auto& pre = run.result.pretrain;
        rows[i] = csv_line(
            {h, format_number(pt.p), std::to_string(pt.hops), u64(pt.seed),
             format_number(run.result.final_test_acc()),
             run.has_convergence ? std::to_string(run.convergence.index) : "",
             run.has_convergence && run.convergence.converged ? "1" : "0",
             u64(pre.total_elements()), u64(pre.total_bytes()),
             u64(run.result.model_bytes_per_round), run.result.diverged ? "1" : "0"});
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        next.store(points.size());
      }
    }
  };
  unsigned workers = cfg.sweep.workers > 0 ? static_cast<unsigned>(cfg.sweep.workers)
                                           : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(points.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  std::string csv =
      "config_hash,iid_fraction,hops,seed,final_test_acc,convergence_time,converged,"
      "pretrain_elements,pretrain_bytes,model_bytes_per_round,diverged\n";
  for (const auto& r : rows) csv += r;
  write_file_atomic(out / "sweep.csv", csv);
  return {out / "sweep.csv", out / "points"};
}

}  // namespace fedgcn
