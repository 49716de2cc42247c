#include "hext/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "hext/error.hpp"

namespace hext {

double default_truncation_radius(std::size_t n, double t) {
    return n > 2000 ? 4.0 * std::sqrt(t) : kInfinity;
}

namespace {

double gaussian_weight(double distance, double t) {
    return std::exp(-(distance * distance) / (4.0 * t));
}

// Pairwise scan for the direct metrics.
void collect_direct_support(const PointCloud& cloud, MetricKind kind, double t, double radius,
                            std::vector<Triplet>& out) {
    const std::size_t n = cloud.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = point_distance(cloud.point(i), cloud.point(j), kind);
            if (d <= radius) {
                double w = gaussian_weight(d, t);
                out.push_back({i, j, w});
                out.push_back({j, i, w});
            }
        }
}

// Union of per-source Dijkstra balls. The value from the lower-index
// endpoint's run wins, which keeps the matrix exactly symmetric even if
// two runs round a shared path differently.
void collect_graph_support(std::size_t n, const NeighborGraph& graph, double t, double radius,
                           std::vector<Triplet>& out) {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    DistanceTable table = graph_distance_matrix(graph, all, radius);

    std::vector<std::vector<std::pair<std::size_t, double>>> upper(n);
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        for (const auto& [j, d] : table.rows[i]) {
            if (j <= i) continue;
            auto& row = upper[i];
            auto pos = std::lower_bound(row.begin(), row.end(), j,
                                        [](const auto& a, std::size_t b) { return a.first < b; });
            if (pos == row.end() || pos->first != j) row.insert(pos, {j, d});
        }
    // Mirror a pair seen only from the higher-index run.
    for (std::size_t j = 0; j < table.rows.size(); ++j)
        for (const auto& [i, d] : table.rows[j]) {
            if (i >= j) continue;
            auto& row = upper[i];
            auto pos = std::lower_bound(row.begin(), row.end(), j,
                                        [](const auto& a, std::size_t b) { return a.first < b; });
            if (pos == row.end() || pos->first != j) row.insert(pos, {j, d});
        }

    for (std::size_t i = 0; i < upper.size(); ++i)
        for (const auto& [j, d] : upper[i]) {
            double w = gaussian_weight(d, t);
            out.push_back({i, j, w});
            out.push_back({j, i, w});
        }
}

} // namespace

namespace {

KernelMatrix finish_kernel(std::size_t n, std::vector<Triplet> entries, double t, double radius) {
    KernelMatrix kernel;
    kernel.weights = SparseMatrix::from_triplets(n, n, std::move(entries));
    kernel.bandwidth = t;
    kernel.truncation_radius = radius;
    return kernel;
}

void check_kernel_params(double t, double radius) {
    if (!(t > 0.0)) fail(errc::invalid_parameter, "bandwidth t must be positive");
    if (!(radius > 0.0)) fail(errc::invalid_parameter, "truncation radius must be positive");
}

std::vector<Triplet> diagonal_entries(std::size_t n) {
    std::vector<Triplet> entries;
    entries.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) entries.push_back({i, i, 1.0});
    return entries;
}

} // namespace

KernelMatrix assemble_kernel(const PointCloud& cloud, const Metric& metric, double t,
                             double truncation_radius) {
    check_kernel_params(t, truncation_radius);
    if (metric.kind == MetricKind::graph) {
        NeighborGraph graph =
            build_knn_graph(cloud, Metric{metric.base, metric.base, 0}, metric.neighbors);
        return assemble_kernel(cloud, graph, t, truncation_radius);
    }
    std::vector<Triplet> entries = diagonal_entries(cloud.size());
    collect_direct_support(cloud, metric.kind, t, truncation_radius, entries);
    return finish_kernel(cloud.size(), std::move(entries), t, truncation_radius);
}

KernelMatrix assemble_kernel(const PointCloud& cloud, const NeighborGraph& graph, double t,
                             double truncation_radius) {
    check_kernel_params(t, truncation_radius);
    if (graph.size() != cloud.size()) fail(errc::invalid_parameter, "graph size mismatch");
    std::vector<Triplet> entries = diagonal_entries(cloud.size());
    collect_graph_support(cloud.size(), graph, t, truncation_radius, entries);
    return finish_kernel(cloud.size(), std::move(entries), t, truncation_radius);
}

GraphLaplacian laplacian_from_weights(const SparseMatrix& weights, double t) {
    if (!(t > 0.0)) fail(errc::invalid_parameter, "bandwidth t must be positive");
    const std::size_t n = weights.rows();

    GraphLaplacian lap;
    lap.bandwidth = t;
    lap.degree.assign(n, 0.0);

    std::vector<Triplet> entries;
    entries.reserve(weights.nnz() + n);
    for (std::size_t i = 0; i < n; ++i) {
        auto idx = weights.row_indices(i);
        auto val = weights.row_values(i);
        double diag = 0.0;
        double deg = 0.0;
        for (std::size_t k = 0; k < idx.size(); ++k) {
            deg += val[k];
            if (idx[k] == i) continue;
            double entry = -val[k] / t;
            entries.push_back({i, idx[k], entry});
            diag -= entry; // exact negation of the accumulated off-diagonals
        }
        entries.push_back({i, i, diag});
        lap.degree[i] = deg;
    }
    lap.matrix = SparseMatrix::from_triplets(n, n, std::move(entries));
    return lap;
}

GraphLaplacian assemble_laplacian(const KernelMatrix& kernel) {
    return laplacian_from_weights(kernel.weights, kernel.bandwidth);
}

Matrix boundary_columns(const KernelMatrix& kernel, std::span<const std::size_t> indices) {
    const std::size_t n = kernel.size();
    if (indices.empty()) fail(errc::invalid_boundary, "boundary set is empty");
    std::vector<bool> seen(n, false);
    for (std::size_t b : indices) {
        if (b >= n) fail(errc::invalid_boundary, "boundary index out of range");
        if (seen[b]) fail(errc::invalid_boundary, "duplicate boundary index");
        seen[b] = true;
    }

    Matrix block(n, indices.size());
    // W is symmetric, so column b is row b.
    for (std::size_t j = 0; j < indices.size(); ++j) {
        auto idx = kernel.weights.row_indices(indices[j]);
        auto val = kernel.weights.row_values(indices[j]);
        for (std::size_t k = 0; k < idx.size(); ++k) block(idx[k], j) = val[k];
    }
    return block;
}

void write_coo(std::ostream& out, const SparseMatrix& m) {
    char buf[64];
    for (std::size_t i = 0; i < m.rows(); ++i) {
        auto idx = m.row_indices(i);
        auto val = m.row_values(i);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%zu %zu %.17g\n", i, idx[k], val[k]);
            out << buf;
        }
    }
}

} // namespace hext
