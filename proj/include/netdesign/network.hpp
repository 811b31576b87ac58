#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace netdesign {

// Undirected simple graph on nodes 0..n-1. Edges are normalized (min,max)
// pairs, deduplicated and sorted, so equal graphs have equal representations.
// Immutable after construction; safe to share across threads.
class Network {
 public:
  Network(int n, std::vector<std::pair<int, int>> edges);

  int node_count() const { return n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int i) const { return adj_[i]; }
  int degree(int i) const { return static_cast<int>(adj_[i].size()); }
  double mean_degree() const {
    return 2.0 * static_cast<double>(edges_.size()) / n_;
  }

 private:
  int n_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<int>> adj_;
};

Network from_edge_list(int n, const std::vector<std::pair<int, int>>& pairs);

// A = A* + I where A* is the plain adjacency matrix.
Eigen::MatrixXd augmented_adjacency(const Network& net);

// sizes[i] = 1 + degree(i): the size of the closed neighborhood of i.
std::vector<int> neighborhood_sizes(const Network& net);

// A'A; entry (i,j) counts the nodes the closed neighborhoods of i and j share.
Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& adj);

// Random-graph generators. Bit-identical edge sets for identical arguments.
Network gen_erdos_renyi(int n, double p, uint64_t seed);
Network gen_small_world(int n, int k, double beta, uint64_t seed);
Network gen_power_law(int n, int m, uint64_t seed);
Network gen_sbm(const std::vector<int>& block_sizes,
                const Eigen::MatrixXd& link_probs, uint64_t seed);

enum class NetworkFormat { kEdgeList, kJson };

// Edge-list text: first line "n", then one "i j" line per edge.
// JSON alternative: {"edges": [[i,j], ...], "n": n}.
std::string to_edge_list(const Network& net);
std::string to_json(const Network& net);
Network parse_network(const std::string& text);  // auto-detects the format

Network read_network(const std::string& path);
void write_network(const Network& net, const std::string& path,
                   NetworkFormat format = NetworkFormat::kEdgeList);

}  // namespace netdesign
