#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "hext/linalg.hpp"

namespace hext {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// n points in d dimensions, one per row. Row order is the canonical point
// indexing used by every downstream structure.
struct PointCloud {
    Matrix points;

    std::size_t size() const { return points.rows(); }
    std::size_t dim() const { return points.cols(); }
    std::span<const double> point(std::size_t i) const { return points.row(i); }

    // Validates shape and finiteness.
    static PointCloud from_matrix(Matrix m);
};

enum class MetricKind { euclidean, cosine, graph };

// Distance designation. The graph kind measures shortest paths over the
// symmetrized kNN graph built with the base metric.
struct Metric {
    MetricKind kind = MetricKind::euclidean;
    MetricKind base = MetricKind::euclidean; // graph only
    std::size_t neighbors = 10;              // graph only

    static Metric euclidean() { return {MetricKind::euclidean, MetricKind::euclidean, 0}; }
    static Metric cosine() { return {MetricKind::cosine, MetricKind::euclidean, 0}; }
    static Metric graph(MetricKind base, std::size_t k) { return {MetricKind::graph, base, k}; }
};

const char* metric_kind_name(MetricKind kind);

// Direct distance between two coordinate vectors under a non-graph metric.
// Cosine is 1 - cos(angle) and rejects zero vectors.
double point_distance(std::span<const double> a, std::span<const double> b, MetricKind kind);

struct NeighborGraph {
    struct Edge {
        std::size_t target;
        double length;
    };

    // Exactly k out-edges per point as selected before symmetrization
    // (ties broken by lower index), sorted by target.
    std::vector<std::vector<Edge>> out_neighbors;
    // Union of directed edges; (i,j) present iff (j,i) present with the
    // same length. No self-edges.
    std::vector<std::vector<Edge>> adjacency;
    std::size_t k = 0;
    bool symmetrized = true;

    std::size_t size() const { return adjacency.size(); }
};

NeighborGraph build_knn_graph(const PointCloud& cloud, const Metric& metric, std::size_t k);

// Per-source Dijkstra rows, entries with distance <= radius_cap only and
// sorted by point index. Unreached points are simply absent.
struct DistanceTable {
    std::vector<std::size_t> sources;
    std::vector<std::vector<std::pair<std::size_t, double>>> rows;
};

DistanceTable graph_distance_matrix(const NeighborGraph& graph,
                                    std::span<const std::size_t> sources, double radius_cap);

// Distance to the closest source per point, plus which source it is.
// Ties go to the lowest source point index; unreachable points carry
// infinity.
struct BoundaryProximity {
    std::vector<double> distance;
    std::vector<std::size_t> nearest;
};

BoundaryProximity multi_source_proximity(const NeighborGraph& graph,
                                         std::span<const std::size_t> sources);
BoundaryProximity direct_proximity(const PointCloud& cloud, MetricKind kind,
                                   std::span<const std::size_t> sources);

// Kernel bandwidth t = h^2, with h the mean over points of the mean
// distance to each point's k nearest neighbors (pre-symmetrization).
double select_bandwidth(const NeighborGraph& graph);

} // namespace hext
