#include "hext/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <tuple>

#include "hext/error.hpp"

namespace hext {

PointCloud PointCloud::from_matrix(Matrix m) {
    if (m.rows() < 1 || m.cols() < 1)
        fail(errc::invalid_input, "point cloud needs at least one point and one dimension");
    for (double v : m.data())
        if (!std::isfinite(v)) fail(errc::invalid_input, "non-finite coordinate in point cloud");
    return PointCloud{std::move(m)};
}

const char* metric_kind_name(MetricKind kind) {
    switch (kind) {
    case MetricKind::euclidean: return "euclidean";
    case MetricKind::cosine: return "cosine";
    case MetricKind::graph: return "graph";
    }
    return "unknown";
}

double point_distance(std::span<const double> a, std::span<const double> b, MetricKind kind) {
    if (kind == MetricKind::euclidean) {
        double acc = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            double d = a[i] - b[i];
            acc += d * d;
        }
        return std::sqrt(acc);
    }
    if (kind == MetricKind::cosine) {
        double ab = 0.0, aa = 0.0, bb = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            ab += a[i] * b[i];
            aa += a[i] * a[i];
            bb += b[i] * b[i];
        }
        if (aa == 0.0 || bb == 0.0)
            fail(errc::degenerate_input, "cosine distance undefined for a zero vector");
        double c = ab / (std::sqrt(aa) * std::sqrt(bb));
        if (c > 1.0) c = 1.0;
        if (c < -1.0) c = -1.0;
        return 1.0 - c;
    }
    fail(errc::invalid_parameter, "graph metric has no direct pair distance");
}

NeighborGraph build_knn_graph(const PointCloud& cloud, const Metric& metric, std::size_t k) {
    const std::size_t n = cloud.size();
    if (metric.kind == MetricKind::graph)
        fail(errc::invalid_parameter, "kNN graph requires a euclidean or cosine metric");
    if (k < 1 || k >= n) fail(errc::invalid_parameter, "k must satisfy 1 <= k < n");

    NeighborGraph g;
    g.k = k;
    g.out_neighbors.resize(n);
    g.adjacency.resize(n);

    // Brute-force scan; candidates ordered by (distance, index) so ties go
    // to the lower index.
    std::vector<std::pair<double, std::size_t>> cand(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t m = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            cand[m++] = {point_distance(cloud.point(i), cloud.point(j), metric.kind), j};
        }
        std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
        auto& out = g.out_neighbors[i];
        out.reserve(k);
        for (std::size_t m2 = 0; m2 < k; ++m2) out.push_back({cand[m2].second, cand[m2].first});
        std::sort(out.begin(), out.end(),
                  [](const NeighborGraph::Edge& a, const NeighborGraph::Edge& b) {
                      return a.target < b.target;
                  });
    }

    // Union of directed edges.
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& e : g.out_neighbors[i]) {
            g.adjacency[i].push_back(e);
            g.adjacency[e.target].push_back({i, e.length});
        }
    for (std::size_t i = 0; i < n; ++i) {
        auto& adj = g.adjacency[i];
        std::sort(adj.begin(), adj.end(),
                  [](const NeighborGraph::Edge& a, const NeighborGraph::Edge& b) {
                      return a.target < b.target;
                  });
        adj.erase(std::unique(adj.begin(), adj.end(),
                              [](const NeighborGraph::Edge& a, const NeighborGraph::Edge& b) {
                                  return a.target == b.target;
                              }),
                  adj.end());
    }
    return g;
}

namespace {

// Heap entries ordered by (distance, owner, node) so the pop sequence is
// reproducible even when distances tie.
using HeapItem = std::tuple<double, std::size_t, std::size_t>;

void check_sources(std::size_t n, std::span<const std::size_t> sources) {
    if (sources.empty()) fail(errc::invalid_parameter, "source set is empty");
    for (std::size_t s : sources)
        if (s >= n) fail(errc::invalid_parameter, "source index out of range");
}

} // namespace

DistanceTable graph_distance_matrix(const NeighborGraph& graph,
                                    std::span<const std::size_t> sources, double radius_cap) {
    const std::size_t n = graph.size();
    if (!(radius_cap > 0.0)) fail(errc::invalid_parameter, "radius cap must be positive");
    check_sources(n, sources);

    DistanceTable table;
    table.sources.assign(sources.begin(), sources.end());
    table.rows.resize(sources.size());

    std::vector<double> dist(n);
    for (std::size_t si = 0; si < sources.size(); ++si) {
        std::fill(dist.begin(), dist.end(), kInfinity);
        std::priority_queue<std::pair<double, std::size_t>,
                            std::vector<std::pair<double, std::size_t>>, std::greater<>>
            heap;
        dist[sources[si]] = 0.0;
        heap.push({0.0, sources[si]});
        while (!heap.empty()) {
            auto [d, u] = heap.top();
            heap.pop();
            if (d > dist[u]) continue;
            for (const auto& e : graph.adjacency[u]) {
                double nd = d + e.length;
                if (nd <= radius_cap && nd < dist[e.target]) {
                    dist[e.target] = nd;
                    heap.push({nd, e.target});
                }
            }
        }
        auto& row = table.rows[si];
        for (std::size_t v = 0; v < n; ++v)
            if (dist[v] <= radius_cap) row.push_back({v, dist[v]});
    }
    return table;
}

BoundaryProximity multi_source_proximity(const NeighborGraph& graph,
                                         std::span<const std::size_t> sources) {
    const std::size_t n = graph.size();
    check_sources(n, sources);

    BoundaryProximity prox;
    prox.distance.assign(n, kInfinity);
    prox.nearest.assign(n, n);

    std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>> heap;
    std::vector<std::size_t> ordered(sources.begin(), sources.end());
    std::sort(ordered.begin(), ordered.end());
    for (std::size_t s : ordered) {
        prox.distance[s] = 0.0;
        if (s < prox.nearest[s]) prox.nearest[s] = s;
        heap.push({0.0, s, s});
    }
    while (!heap.empty()) {
        auto [d, owner, u] = heap.top();
        heap.pop();
        if (d > prox.distance[u] || (d == prox.distance[u] && owner > prox.nearest[u])) continue;
        for (const auto& e : graph.adjacency[u]) {
            double nd = d + e.length;
            std::size_t v = e.target;
            if (nd < prox.distance[v] || (nd == prox.distance[v] && owner < prox.nearest[v])) {
                prox.distance[v] = nd;
                prox.nearest[v] = owner;
                heap.push({nd, owner, v});
            }
        }
    }
    return prox;
}

BoundaryProximity direct_proximity(const PointCloud& cloud, MetricKind kind,
                                   std::span<const std::size_t> sources) {
    const std::size_t n = cloud.size();
    check_sources(n, sources);
    std::vector<std::size_t> ordered(sources.begin(), sources.end());
    std::sort(ordered.begin(), ordered.end());

    BoundaryProximity prox;
    prox.distance.assign(n, kInfinity);
    prox.nearest.assign(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t s : ordered) {
            double d = point_distance(cloud.point(i), cloud.point(s), kind);
            if (d < prox.distance[i]) {
                prox.distance[i] = d;
                prox.nearest[i] = s;
            }
        }
    return prox;
}

double select_bandwidth(const NeighborGraph& graph) {
    const std::size_t n = graph.size();
    if (n == 0) fail(errc::invalid_parameter, "empty graph");
    double h = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double hi = 0.0;
        for (const auto& e : graph.out_neighbors[i]) hi += e.length;
        h += hi / static_cast<double>(graph.out_neighbors[i].size());
    }
    h /= static_cast<double>(n);
    if (h == 0.0) fail(errc::degenerate_bandwidth, "all neighbor distances are zero");
    return h * h;
}

} // namespace hext
