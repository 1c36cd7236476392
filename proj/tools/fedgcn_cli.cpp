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

#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fedgcn/errors.hpp"
#include "fedgcn/experiment.hpp"

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw fedgcn::ConfigError("bad seed '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw fedgcn::ConfigError("--seeds needs at least one seed");
  return out;
}

void report(const std::string& kind, const std::string& message) {
  std::cerr << nlohmann::json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Federated GCN simulator"};
  app.require_subcommand(1, 1);

  std::string config_path, out_dir, seeds;
  int hops = -1;
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"generate", "sample an SBM graph into a dataset directory"},
      {"partition", "assign nodes to clients and report cross-client edges"},
      {"train", "run federated pre-training and FedAvg rounds"},
      {"analyze", "closed-form vs measured communication and gradient-gap bounds"},
      {"bench-channel", "secure aggregation payload sizes and throughput"},
      {"sweep", "grid over iid fraction and hops"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "experiment JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (defaults to the config's)");
    sub->add_option("--seeds", seeds, "comma-separated seeds overriding the config");
    sub->add_option("--hops", hops, "communication hops overriding the config")
        ->check(CLI::IsMember({0, 1, 2}));
  }
  CLI11_PARSE(app, argc, argv);

  try {
    auto cfg = fedgcn::ExperimentConfig::load(config_path);
    if (!seeds.empty()) cfg.seeds = parse_seeds(seeds);
    if (hops >= 0) cfg.hops = hops;
    cfg.validate();
    const std::filesystem::path out = out_dir.empty() ? cfg.output_dir : std::filesystem::path(out_dir);
    const std::string cmd = app.get_subcommands().front()->get_name();

    std::vector<std::filesystem::path> written;
    if (cmd == "generate") written = fedgcn::cmd_generate(cfg, out);
    else if (cmd == "partition") written = fedgcn::cmd_partition(cfg, out);
    else if (cmd == "train") written = fedgcn::cmd_train(cfg, out);
    else if (cmd == "analyze") written = fedgcn::cmd_analyze(cfg, out);
    else if (cmd == "bench-channel") written = fedgcn::cmd_bench_channel(cfg, out);
    else written = fedgcn::cmd_sweep(cfg, out);
    for (const auto& p : written) std::cout << p.string() << "\n";
  } catch (const fedgcn::Error& e) {
    report(e.kind(), e.what());
    return 2;
  } catch (const std::exception& e) {
    report("internal", e.what());
    return 3;
  }
  return 0;
}
