#include "airnet/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <thread>

#include "airnet/error.hpp"

namespace airnet {
namespace {

// Runs fn(source) for every source in [0, n). Work is pulled from a shared
// counter; fn must only write to per-source state.
void for_each_source(int n, int workers, const std::function<void(int)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (int s = 0; s < n; ++s) fn(s);
        return;
    }
    workers = std::min(workers, n);
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int s = next.fetch_add(1); s < n; s = next.fetch_add(1)) fn(s);
        });
    }
    for (auto& t : pool) t.join();
}

std::vector<int> component_labels(const GraphSnapshot& g, int& component_count) {
    const int n = g.node_count();
    std::vector<int> label(static_cast<size_t>(n), -1);
    component_count = 0;
    std::deque<int> queue;
    for (int start = 0; start < n; ++start) {
        if (label[static_cast<size_t>(start)] != -1) continue;
        label[static_cast<size_t>(start)] = component_count;
        queue.push_back(start);
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int w : g.neighbors(v)) {
                if (label[static_cast<size_t>(w)] == -1) {
                    label[static_cast<size_t>(w)] = component_count;
                    queue.push_back(w);
                }
            }
        }
        ++component_count;
    }
    return label;
}

}  // namespace

DistributionTable degree_distribution(const GraphSnapshot& g, Binning binning, DegreeKind kind) {
    std::map<int, long long> counts;
    for (int i = 0; i < g.node_count(); ++i) {
        int k = 0;
        switch (kind) {
            case DegreeKind::undirected: k = static_cast<int>(g.neighbors(i).size()); break;
            case DegreeKind::in: k = static_cast<int>(g.in_neighbors(i).size()); break;
            case DegreeKind::out: k = static_cast<int>(g.out_neighbors(i).size()); break;
        }
        ++counts[k];
    }
    DistributionTable raw = pdf_from_counts(counts);
    if (binning.mode == Binning::Mode::raw) return raw;
    return log_bin(raw, binning.base);
}

LinearFit in_out_correlation(const GraphSnapshot& g) {
    int active = 0;
    std::vector<Point> points;
    points.reserve(static_cast<size_t>(g.node_count()));
    for (int i = 0; i < g.node_count(); ++i) {
        const int k_in = static_cast<int>(g.in_neighbors(i).size());
        const int k_out = static_cast<int>(g.out_neighbors(i).size());
        if (k_in + k_out > 0) ++active;
        points.emplace_back(k_in, k_out);
    }
    if (active < 2) {
        throw InsufficientDataError("in/out correlation needs >= 2 nodes with flights");
    }
    return fit_linear(points);
}

KnnResult nearest_neighbor_degree(const GraphSnapshot& g) {
    const int n = g.node_count();
    KnnResult result;
    result.per_node.assign(static_cast<size_t>(n), std::numeric_limits<double>::quiet_NaN());

    std::map<int, std::pair<double, int>> classes;  // k -> (sum knn, count)
    for (int i = 0; i < n; ++i) {
        auto nb = g.neighbors(i);
        if (nb.empty()) continue;
        double sum = 0.0;
        for (int j : nb) sum += static_cast<double>(g.neighbors(j).size());
        const double knn = sum / static_cast<double>(nb.size());
        result.per_node[static_cast<size_t>(i)] = knn;
        auto& [acc, cnt] = classes[static_cast<int>(nb.size())];
        acc += knn;
        ++cnt;
    }
    result.by_degree.reserve(classes.size());
    for (const auto& [k, acc] : classes) {
        result.by_degree.emplace_back(k, acc.first / acc.second);
    }
    return result;
}

ClusteringResult clustering(const GraphSnapshot& g, ClusteringOptions options) {
    const int n = g.node_count();
    ClusteringResult result;
    result.per_node.assign(static_cast<size_t>(n), 0.0);

    std::map<int, std::pair<double, int>> classes;
    double mean_sum = 0.0;
    int mean_count = 0;
    for (int i = 0; i < n; ++i) {
        auto nb = g.neighbors(i);
        const int k = static_cast<int>(nb.size());
        double c = 0.0;
        if (k >= 2) {
            long long links = 0;
            for (size_t a = 0; a < nb.size(); ++a) {
                for (size_t b = a + 1; b < nb.size(); ++b) {
                    if (g.has_edge(nb[a], nb[b])) ++links;
                }
            }
            c = 2.0 * static_cast<double>(links) / (static_cast<double>(k) * (k - 1));
        }
        result.per_node[static_cast<size_t>(i)] = c;
        auto& [acc, cnt] = classes[k];
        acc += c;
        ++cnt;
        if (k >= 2 || options.include_low_degree) {
            mean_sum += c;
            ++mean_count;
        }
    }
    result.by_degree.reserve(classes.size());
    for (const auto& [k, acc] : classes) {
        result.by_degree.emplace_back(k, acc.first / acc.second);
    }
    result.mean = mean_count > 0 ? mean_sum / mean_count : 0.0;
    return result;
}

PathStats shortest_path_stats(const GraphSnapshot& g, int workers) {
    const int n = g.node_count();
    PathStats stats;

    std::vector<int> label = component_labels(g, stats.component_count);
    std::vector<int> sizes(static_cast<size_t>(stats.component_count), 0);
    for (int v : label) ++sizes[static_cast<size_t>(v)];
    const int largest =
        static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    stats.largest_component_size = sizes[static_cast<size_t>(largest)];

    std::vector<int> members;
    members.reserve(static_cast<size_t>(stats.largest_component_size));
    for (int v = 0; v < n; ++v) {
        if (label[static_cast<size_t>(v)] == largest) members.push_back(v);
    }
    if (members.size() < 2) return stats;  // no pairs to measure

    const int m = static_cast<int>(members.size());
    // Per-source histograms over pairs (source, t) with t later in `members`;
    // integer counts make the merge independent of scheduling.
    std::vector<std::vector<long long>> partial(static_cast<size_t>(m));
    for_each_source(m, workers, [&](int si) {
        const int source = members[static_cast<size_t>(si)];
        std::vector<int> dist(static_cast<size_t>(n), -1);
        std::deque<int> queue;
        dist[static_cast<size_t>(source)] = 0;
        queue.push_back(source);
        auto& hist = partial[static_cast<size_t>(si)];
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int w : g.neighbors(v)) {
                if (dist[static_cast<size_t>(w)] != -1) continue;
                const int d = dist[static_cast<size_t>(v)] + 1;
                dist[static_cast<size_t>(w)] = d;
                queue.push_back(w);
                if (w > source) {
                    if (static_cast<size_t>(d) >= hist.size()) {
                        hist.resize(static_cast<size_t>(d) + 1, 0);
                    }
                    ++hist[static_cast<size_t>(d)];
                }
            }
        }
    });

    std::vector<long long> hist;
    for (const auto& p : partial) {
        if (p.size() > hist.size()) hist.resize(p.size(), 0);
        for (size_t d = 0; d < p.size(); ++d) hist[d] += p[d];
    }

    long long pairs = 0;
    long long length_sum = 0;
    for (size_t d = 1; d < hist.size(); ++d) {
        pairs += hist[d];
        length_sum += static_cast<long long>(d) * hist[d];
        if (hist[d] > 0) stats.diameter = static_cast<int>(d);
    }
    stats.pair_count = pairs;
    stats.avg_length = static_cast<double>(length_sum) / static_cast<double>(pairs);
    for (size_t d = 1; d < hist.size(); ++d) {
        if (hist[d] == 0) continue;
        stats.histogram.push_back({static_cast<int>(d), hist[d],
                                   100.0 * static_cast<double>(hist[d]) /
                                       static_cast<double>(pairs)});
    }
    return stats;
}

std::vector<double> betweenness(const GraphSnapshot& g, BetweennessOptions options) {
    const int n = g.node_count();
    // Brandes dependency accumulation per source, kept per source and reduced
    // in source order so the result is bit-identical for any worker count.
    std::vector<std::vector<double>> partial(static_cast<size_t>(n));
    for_each_source(n, options.workers, [&](int source) {
        std::vector<double>& delta = partial[static_cast<size_t>(source)];
        delta.assign(static_cast<size_t>(n), 0.0);

        std::vector<int> dist(static_cast<size_t>(n), -1);
        std::vector<double> sigma(static_cast<size_t>(n), 0.0);
        std::vector<std::vector<int>> preds(static_cast<size_t>(n));
        std::vector<int> order;
        order.reserve(static_cast<size_t>(n));
        std::deque<int> queue;

        dist[static_cast<size_t>(source)] = 0;
        sigma[static_cast<size_t>(source)] = 1.0;
        queue.push_back(source);
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            order.push_back(v);
            for (int w : g.neighbors(v)) {
                if (dist[static_cast<size_t>(w)] == -1) {
                    dist[static_cast<size_t>(w)] = dist[static_cast<size_t>(v)] + 1;
                    queue.push_back(w);
                }
                if (dist[static_cast<size_t>(w)] == dist[static_cast<size_t>(v)] + 1) {
                    sigma[static_cast<size_t>(w)] += sigma[static_cast<size_t>(v)];
                    preds[static_cast<size_t>(w)].push_back(v);
                }
            }
        }
        std::vector<double> dep(static_cast<size_t>(n), 0.0);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const int w = *it;
            for (int v : preds[static_cast<size_t>(w)]) {
                dep[static_cast<size_t>(v)] += sigma[static_cast<size_t>(v)] /
                                               sigma[static_cast<size_t>(w)] *
                                               (1.0 + dep[static_cast<size_t>(w)]);
            }
            if (w != source) delta[static_cast<size_t>(w)] = dep[static_cast<size_t>(w)];
        }
    });

    std::vector<double> b(static_cast<size_t>(n), 0.0);
    for (const auto& delta : partial) {
        for (int v = 0; v < n; ++v) b[static_cast<size_t>(v)] += delta[static_cast<size_t>(v)];
    }
    // Each unordered pair was visited from both endpoints.
    for (double& v : b) v *= 0.5;

    if (options.normalized && n > 2) {
        const double scale = 2.0 / (static_cast<double>(n - 1) * (n - 2));
        for (double& v : b) v *= scale;
    }
    return b;
}

ReciprocityResult reciprocity(const GraphSnapshot& g) {
    const int n = g.node_count();
    if (n < 2) throw InsufficientDataError("reciprocity needs >= 2 nodes");

    const double a_bar = static_cast<double>(g.arc_count()) /
                         (static_cast<double>(n) * (n - 1));

    std::vector<uint8_t> adj(static_cast<size_t>(n) * static_cast<size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        for (int j : g.out_neighbors(i)) {
            adj[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j)] = 1;
        }
    }
    auto a = [&](int i, int j) {
        return static_cast<double>(
            adj[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j)]);
    };

    double numerator = 0.0;
    double denominator = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double dij = a(i, j) - a_bar;
            const double dji = a(j, i) - a_bar;
            numerator += dij * dji;
            denominator += dij * dij;
        }
    }
    if (denominator == 0.0) {
        throw DegenerateError("reciprocity undefined: uniform adjacency (density " +
                              std::to_string(a_bar) + ")");
    }
    return {numerator / denominator, a_bar};
}

std::vector<NodeMetrics> node_metrics(const GraphSnapshot& g, NodeMetricsOptions options) {
    const auto degrees = degree_sequences(g);
    const auto cluster = clustering(g, options.clustering);
    const auto knn = nearest_neighbor_degree(g);
    const auto b = betweenness(g, options.betweenness);

    std::vector<NodeMetrics> out;
    out.reserve(static_cast<size_t>(g.node_count()));
    for (int i = 0; i < g.node_count(); ++i) {
        const auto& d = degrees[static_cast<size_t>(i)];
        out.push_back({d.node, d.k, d.k_in, d.k_out, cluster.per_node[static_cast<size_t>(i)],
                       b[static_cast<size_t>(i)], knn.per_node[static_cast<size_t>(i)]});
    }
    return out;
}

}  // namespace airnet
