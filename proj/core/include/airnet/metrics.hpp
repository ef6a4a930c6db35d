#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "airnet/distribution.hpp"
#include "airnet/fitting.hpp"
#include "airnet/snapshot.hpp"

namespace airnet {

enum class DegreeKind { undirected, in, out };

/// pdf over observed degrees; raw by default, geometric bins on request.
DistributionTable degree_distribution(const GraphSnapshot& g, Binning binning = Binning::raw(),
                                      DegreeKind kind = DegreeKind::undirected);

/// OLS of k_out against k_in over all nodes. Requires at least two nodes
/// with flights; constant k_in is degenerate.
LinearFit in_out_correlation(const GraphSnapshot& g);

struct KnnResult {
    /// Mean undirected neighbor degree per node; NaN for isolated nodes.
    std::vector<double> per_node;
    /// (k, mean knn over the degree class), k ascending, isolated excluded.
    std::vector<std::pair<int, double>> by_degree;
};
KnnResult nearest_neighbor_degree(const GraphSnapshot& g);

struct ClusteringOptions {
    /// Count k < 2 nodes as c = 0 in the mean instead of excluding them.
    bool include_low_degree = true;
};
struct ClusteringResult {
    std::vector<double> per_node;                      ///< c_i in [0, 1]
    std::vector<std::pair<int, double>> by_degree;     ///< (k, mean c)
    double mean = 0.0;
};
ClusteringResult clustering(const GraphSnapshot& g, ClusteringOptions options = {});

struct PathHistogramEntry {
    int length = 0;
    long long count = 0;
    double percentage = 0.0;
};
struct PathStats {
    double avg_length = 0.0;  ///< mean shortest path over connected pairs
    int diameter = 0;
    std::vector<PathHistogramEntry> histogram;
    long long pair_count = 0;
    int component_count = 0;
    int largest_component_size = 0;
};

/// BFS from every node of the undirected projection. Histogram, mean length
/// and diameter cover unordered pairs of the largest connected component;
/// the component census reports what was left out. Source vertices may be
/// distributed over worker threads; results do not depend on the count.
PathStats shortest_path_stats(const GraphSnapshot& g, int workers = 1);

struct BetweennessOptions {
    bool normalized = false;  ///< scale by 2/((N-1)(N-2))
    int workers = 1;
};

/// Shortest-path betweenness on the undirected unweighted projection,
/// endpoints excluded, equal-length paths credited fractionally (Brandes
/// accumulation). Unnormalized values count unordered pairs. Per-source
/// contributions are reduced in a fixed order, so results are identical
/// across worker counts.
std::vector<double> betweenness(const GraphSnapshot& g, BetweennessOptions options = {});

struct ReciprocityResult {
    double r = 0.0;           ///< in [-1, 1]; 1 for symmetric adjacency
    double arc_density = 0.0; ///< sum a_ij / (N(N-1))
};

/// Correlation of a_ij with a_ji over ordered node pairs. Uniform adjacency
/// (empty or complete digraph) has no defined value and is degenerate.
ReciprocityResult reciprocity(const GraphSnapshot& g);

struct NodeMetrics {
    AirportId node;
    int k = 0;
    int k_in = 0;
    int k_out = 0;
    double c = 0.0;
    double b = 0.0;
    double knn = 0.0;  ///< NaN for isolated nodes
};
struct NodeMetricsOptions {
    ClusteringOptions clustering;
    BetweennessOptions betweenness;
};
std::vector<NodeMetrics> node_metrics(const GraphSnapshot& g, NodeMetricsOptions options = {});

}  // namespace airnet
