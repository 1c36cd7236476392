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

#include "fedgcn/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fedgcn/errors.hpp"
#include "fedgcn/rng.hpp"

namespace fedgcn {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::string> read_lines(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError(file.string(), 0, "cannot open file");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string::npos) {
    lines.pop_back();
  }
  return lines;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view token, const fs::path& file, std::size_t line) {
  token = trim(token);
  T value{};
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(file.string(), line, "expected a number, got '" + std::string(token) + "'");
  }
  return value;
}

json read_json(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError(file.string(), 0, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    // nlohmann reports a byte offset; recover the line for the message.
    std::ifstream again(file);
    std::size_t line = 1;
    char c;
    for (std::size_t i = 0; i + 1 < e.byte && again.get(c); ++i) {
      if (c == '\n') ++line;
    }
    throw ParseError(file.string(), line, e.what());
  }
}

std::vector<NodeId> id_array(const json& j, const char* key, std::size_t n, const fs::path& file) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw ParseError(file.string(), 1, std::string("missing integer array '") + key + "'");
  }
  std::vector<NodeId> ids;
  for (const auto& v : j[key]) {
    if (!v.is_number_integer() || v.get<long long>() < 0 ||
        static_cast<std::size_t>(v.get<long long>()) >= n) {
      throw IntegrityError(std::string("split '") + key + "' holds an invalid node id");
    }
    ids.push_back(v.get<NodeId>());
  }
  return ids;
}

void write_text_atomically(const fs::path& file, const std::string& contents) {
  const fs::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ParameterError("cannot write " + tmp.string());
    out << contents;
  }
  fs::rename(tmp, file);
}

}  // namespace

Split load_split(const fs::path& file, std::size_t num_nodes) {
  const json j = read_json(file);
  Split s{id_array(j, "train", num_nodes, file), id_array(j, "val", num_nodes, file),
          id_array(j, "test", num_nodes, file)};
  std::set<NodeId> seen;
  for (const auto* part : {&s.train, &s.val, &s.test}) {
    for (NodeId id : *part) {
      if (!seen.insert(id).second) {
        throw IntegrityError("split sets overlap at node " + std::to_string(id));
      }
    }
  }
  return s;
}

void write_split(const fs::path& file, const Split& split) {
  json j = {{"train", split.train}, {"val", split.val}, {"test", split.test}};
  write_text_atomically(file, j.dump() + "\n");
}

Dataset load_dataset(const fs::path& dir, DatasetFormat format) {
  if (format != DatasetFormat::kEdgeListDirectory) throw ParameterError("unsupported format");

  const fs::path manifest_file = dir / "manifest.json";
  const json mj = read_json(manifest_file);
  Manifest manifest;
  try {
    manifest.nodes = mj.at("nodes").get<std::size_t>();
    manifest.edges = mj.at("edges").get<std::size_t>();
    manifest.features = mj.at("features").get<std::size_t>();
    manifest.classes = mj.at("classes").get<int>();
  } catch (const json::exception& e) {
    throw ParseError(manifest_file.string(), 1, e.what());
  }

  const fs::path label_file = dir / "labels.txt";
  const auto label_lines = read_lines(label_file);
  if (label_lines.empty()) throw ParseError(label_file.string(), 1, "file is empty");
  std::vector<int> labels;
  labels.reserve(label_lines.size());
  for (std::size_t i = 0; i < label_lines.size(); ++i) {
    labels.push_back(parse_number<int>(label_lines[i], label_file, i + 1));
  }

  const fs::path feature_file = dir / "features.csv";
  const auto feature_lines = read_lines(feature_file);
  if (feature_lines.empty()) throw ParseError(feature_file.string(), 1, "file is empty");
  std::size_t dim = 0;
  {
    std::string_view first = feature_lines.front();
    dim = static_cast<std::size_t>(std::count(first.begin(), first.end(), ',')) + 1;
  }
  Matrix x(static_cast<Eigen::Index>(feature_lines.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < feature_lines.size(); ++r) {
    std::string_view line = feature_lines[r];
    std::size_t col = 0;
    while (true) {
      const auto comma = line.find(',');
      if (col >= dim) {
        throw ParseError(feature_file.string(), r + 1, "row has more than " + std::to_string(dim) +
                                                           " columns");
      }
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) =
          parse_number<double>(line.substr(0, comma), feature_file, r + 1);
      ++col;
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (col != dim) {
      throw ParseError(feature_file.string(), r + 1,
                       "expected " + std::to_string(dim) + " columns, got " + std::to_string(col));
    }
  }

  const fs::path edge_file = dir / "edges.txt";
  const auto edge_lines = read_lines(edge_file);
  std::vector<Edge> edges;
  edges.reserve(edge_lines.size());
  for (std::size_t i = 0; i < edge_lines.size(); ++i) {
    std::istringstream fields(edge_lines[i]);
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      throw ParseError(edge_file.string(), i + 1, "expected two node ids");
    }
    const auto u = parse_number<NodeId>(a, edge_file, i + 1);
    const auto v = parse_number<NodeId>(b, edge_file, i + 1);
    if (u >= labels.size() || v >= labels.size()) {
      throw ParseError(edge_file.string(), i + 1, "node id out of range");
    }
    edges.emplace_back(u, v);
  }

  auto mismatch = [](const char* what, std::size_t expected, std::size_t got) {
    return IntegrityError(std::string("manifest ") + what + " = " + std::to_string(expected) +
                          " but data has " + std::to_string(got));
  };
  if (manifest.nodes != labels.size()) throw mismatch("nodes", manifest.nodes, labels.size());
  if (manifest.nodes != feature_lines.size()) {
    throw mismatch("nodes", manifest.nodes, feature_lines.size());
  }
  if (manifest.features != dim) throw mismatch("features", manifest.features, dim);
  if (manifest.edges != edges.size()) throw mismatch("edges", manifest.edges, edges.size());
  for (int y : labels) {
    if (y < 0 || y >= manifest.classes) {
      throw IntegrityError("label " + std::to_string(y) + " outside manifest class range");
    }
  }

  Dataset ds;
  ds.manifest = manifest;
  ds.edge_records = edges.size();
  ds.graph = Graph::from_edges(manifest.nodes, edges, std::move(x), std::move(labels),
                               manifest.classes);
  if (fs::exists(dir / "split.json")) ds.split = load_split(dir / "split.json", manifest.nodes);
  return ds;
}

void write_dataset(const fs::path& dir, const Graph& g, const std::optional<Split>& split) {
  fs::create_directories(dir);
  const auto edges = undirected_edges(g);
  {
    std::ostringstream out;
    for (const auto& [u, v] : edges) out << u << ' ' << v << '\n';
    write_text_atomically(dir / "edges.txt", out.str());
  }
  {
    std::ostringstream out;
    out << std::setprecision(17);
    for (Eigen::Index r = 0; r < g.features.rows(); ++r) {
      for (Eigen::Index c = 0; c < g.features.cols(); ++c) {
        if (c) out << ',';
        out << g.features(r, c);
      }
      out << '\n';
    }
    write_text_atomically(dir / "features.csv", out.str());
  }
  {
    std::ostringstream out;
    for (int y : g.labels) out << y << '\n';
    write_text_atomically(dir / "labels.txt", out.str());
  }
  json manifest = {{"nodes", g.num_nodes()},
                   {"edges", edges.size()},
                   {"features", g.feature_dim()},
                   {"classes", g.num_classes}};
  write_text_atomically(dir / "manifest.json", manifest.dump() + "\n");
  if (split) write_split(dir / "split.json", *split);
}

Split random_split(const Graph& g, std::size_t train_per_class, std::size_t num_val,
                   std::size_t num_test, std::uint64_t seed) {
  Rng rng(derive_seed({seed, 0x5111ULL}));
  std::vector<NodeId> order(g.num_nodes());
  std::iota(order.begin(), order.end(), NodeId{0});
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[static_cast<std::size_t>(uniform01(rng) * i)]);
  }
  Split s;
  std::vector<std::size_t> taken(static_cast<std::size_t>(g.num_classes), 0);
  std::vector<NodeId> rest;
  for (NodeId v : order) {
    auto& t = taken[static_cast<std::size_t>(g.labels[v])];
    if (t < train_per_class) {
      s.train.push_back(v);
      ++t;
    } else {
      rest.push_back(v);
    }
  }
  if (num_val + num_test > rest.size()) {
    throw ParameterError("split asks for more validation/test nodes than remain");
  }
  s.val.assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(num_val));
  s.test.assign(rest.begin() + static_cast<std::ptrdiff_t>(num_val),
                rest.begin() + static_cast<std::ptrdiff_t>(num_val + num_test));
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.val.begin(), s.val.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

}  // namespace fedgcn
