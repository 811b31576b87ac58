#include "netdesign/network.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "netdesign/errors.hpp"
#include "netdesign/rng.hpp"

namespace netdesign {

Network::Network(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
  if (n < 2) throw std::invalid_argument("network: node count must be at least 2");
  for (auto& [a, b] : edges) {
    if (a < 0 || a >= n || b < 0 || b >= n) {
      throw std::invalid_argument("network: edge endpoint out of range [0, n)");
    }
    if (a == b) {
      throw std::invalid_argument("network: self-loops are not allowed");
    }
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
  adj_.assign(n_, {});
  for (const auto& [a, b] : edges_) {
    adj_[a].push_back(b);
    adj_[b].push_back(a);
  }
  for (auto& nb : adj_) std::sort(nb.begin(), nb.end());
}

Network from_edge_list(int n, const std::vector<std::pair<int, int>>& pairs) {
  return Network(n, pairs);
}

Eigen::MatrixXd augmented_adjacency(const Network& net) {
  const int n = net.node_count();
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  for (const auto& [i, j] : net.edges()) {
    a(i, j) = 1.0;
    a(j, i) = 1.0;
  }
  return a;
}

std::vector<int> neighborhood_sizes(const Network& net) {
  std::vector<int> sizes(net.node_count());
  for (int i = 0; i < net.node_count(); ++i) sizes[i] = 1 + net.degree(i);
  return sizes;
}

Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& adj) {
  if (adj.rows() != adj.cols()) {
    throw std::invalid_argument("gram_matrix: adjacency must be square");
  }
  return adj.transpose() * adj;
}

Network gen_erdos_renyi(int n, double p, uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_erdos_renyi: n must be at least 2");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("gen_erdos_renyi: p must lie in [0, 1]");
  }
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform() < p) edges.emplace_back(i, j);
    }
  }
  return Network(n, std::move(edges));
}

Network gen_small_world(int n, int k, double beta, uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_small_world: n must be at least 2");
  if (k < 0 || k % 2 != 0 || k >= n) {
    throw std::invalid_argument("gen_small_world: k must be even and in [0, n)");
  }
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw std::invalid_argument("gen_small_world: beta must lie in [0, 1]");
  }
  Rng rng(seed);
  // Ring lattice; adjacency kept as a flat bitmap during rewiring.
  std::vector<char> adj(static_cast<size_t>(n) * n, 0);
  auto connect = [&](int a, int b, char v) {
    adj[static_cast<size_t>(a) * n + b] = v;
    adj[static_cast<size_t>(b) * n + a] = v;
  };
  std::vector<std::pair<int, int>> ring;
  for (int i = 0; i < n; ++i) {
    for (int off = 1; off <= k / 2; ++off) {
      const int j = (i + off) % n;
      ring.emplace_back(i, j);
      connect(i, j, 1);
    }
  }
  for (const auto& [i, j] : ring) {
    if (rng.uniform() >= beta) continue;
    // Rewire the far endpoint; keep the edge if no valid target turns up.
    for (int attempt = 0; attempt < 4 * n; ++attempt) {
      const int t = static_cast<int>(rng.uniform_below(n));
      if (t == i || adj[static_cast<size_t>(i) * n + t]) continue;
      connect(i, j, 0);
      connect(i, t, 1);
      break;
    }
  }
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (adj[static_cast<size_t>(i) * n + j]) edges.emplace_back(i, j);
    }
  }
  return Network(n, std::move(edges));
}

Network gen_power_law(int n, int m, uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_power_law: n must be at least 2");
  if (m < 1 || m >= n) {
    throw std::invalid_argument("gen_power_law: m must satisfy 1 <= m < n");
  }
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  // Attachment chances: every edge endpoint appears once, so sampling the
  // list uniformly is degree-proportional.
  std::vector<int> chances;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      edges.emplace_back(i, j);
      chances.push_back(i);
      chances.push_back(j);
    }
  }
  std::vector<char> picked(n, 0);
  std::vector<int> targets;
  for (int v = m; v < n; ++v) {
    targets.clear();
    while (static_cast<int>(targets.size()) < m) {
      int t;
      if (chances.empty()) {
        t = static_cast<int>(rng.uniform_below(v));
      } else {
        t = chances[rng.uniform_below(chances.size())];
      }
      if (picked[t]) continue;
      picked[t] = 1;
      targets.push_back(t);
    }
    for (int t : targets) {
      picked[t] = 0;
      edges.emplace_back(t, v);
      chances.push_back(t);
      chances.push_back(v);
    }
  }
  return Network(n, std::move(edges));
}

Network gen_sbm(const std::vector<int>& block_sizes,
                const Eigen::MatrixXd& link_probs, uint64_t seed) {
  if (block_sizes.empty()) {
    throw std::invalid_argument("gen_sbm: block_sizes must be non-empty");
  }
  const int k = static_cast<int>(block_sizes.size());
  if (link_probs.rows() != k || link_probs.cols() != k) {
    throw std::invalid_argument("gen_sbm: link_probs must be k x k");
  }
  int n = 0;
  for (int s : block_sizes) {
    if (s < 1) throw std::invalid_argument("gen_sbm: block sizes must be positive");
    n += s;
  }
  if (n < 2) throw std::invalid_argument("gen_sbm: total node count must be at least 2");
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      const double p = link_probs(a, b);
      if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("gen_sbm: link probabilities must lie in [0, 1]");
      }
      if (link_probs(a, b) != link_probs(b, a)) {
        throw std::invalid_argument("gen_sbm: link_probs must be symmetric");
      }
    }
  }
  std::vector<int> block(n);
  {
    int at = 0;
    for (int b = 0; b < k; ++b) {
      for (int c = 0; c < block_sizes[b]; ++c) block[at++] = b;
    }
  }
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.uniform() < link_probs(block[i], block[j])) edges.emplace_back(i, j);
    }
  }
  return Network(n, std::move(edges));
}

std::string to_edge_list(const Network& net) {
  std::ostringstream os;
  os << net.node_count() << "\n";
  for (const auto& [i, j] : net.edges()) os << i << " " << j << "\n";
  return os.str();
}

std::string to_json(const Network& net) {
  nlohmann::json j;
  j["n"] = net.node_count();
  j["edges"] = nlohmann::json::array();
  for (const auto& [a, b] : net.edges()) j["edges"].push_back({a, b});
  return j.dump();
}

namespace {

Network parse_edge_list_text(const std::string& text) {
  std::istringstream is(text);
  int n = 0;
  if (!(is >> n)) {
    throw std::invalid_argument("network parse: missing node count on first line");
  }
  std::vector<std::pair<int, int>> pairs;
  int a, b;
  while (is >> a) {
    if (!(is >> b)) {
      throw std::invalid_argument("network parse: dangling edge endpoint");
    }
    pairs.emplace_back(a, b);
  }
  if (!is.eof()) {
    throw std::invalid_argument("network parse: unexpected token in edge list");
  }
  return Network(n, std::move(pairs));
}

Network parse_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("network parse: bad JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("edges")) {
    throw std::invalid_argument("network parse: JSON needs \"n\" and \"edges\"");
  }
  const int n = j.at("n").get<int>();
  std::vector<std::pair<int, int>> pairs;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2) {
      throw std::invalid_argument("network parse: each edge must be a pair");
    }
    pairs.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return Network(n, std::move(pairs));
}

}  // namespace

Network parse_network(const std::string& text) {
  const auto pos = text.find_first_not_of(" \t\r\n");
  if (pos == std::string::npos) {
    throw std::invalid_argument("network parse: empty input");
  }
  if (text[pos] == '{') return parse_json_text(text);
  return parse_edge_list_text(text);
}

Network read_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open network file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_network(buf.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

void write_network(const Network& net, const std::string& path,
                   NetworkFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open network file for writing: " + path);
  out << (format == NetworkFormat::kJson ? to_json(net) : to_edge_list(net));
  if (!out) throw IoError("failed while writing network file: " + path);
}

}  // namespace netdesign
