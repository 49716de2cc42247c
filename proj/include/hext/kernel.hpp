#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>

#include "hext/geometry.hpp"
#include "hext/linalg.hpp"

namespace hext {

// Gaussian weight matrix w_ij = exp(-d(x_i,x_j)^2 / (4t)) on the kept
// support, with w_ii = 1 always present. Symmetric by construction.
struct KernelMatrix {
    SparseMatrix weights;
    double bandwidth = 0.0;          // t
    double truncation_radius = kInfinity;

    std::size_t size() const { return weights.rows(); }
};

// Pairs farther apart than the radius are dropped; infinity keeps every
// pair. Under the graph metric the support is limited to pairs reachable
// within the radius by Dijkstra on the kNN graph.
KernelMatrix assemble_kernel(const PointCloud& cloud, const Metric& metric, double t,
                             double truncation_radius = kInfinity);

// Graph-distance weights over an already-built kNN graph.
KernelMatrix assemble_kernel(const PointCloud& cloud, const NeighborGraph& graph, double t,
                             double truncation_radius = kInfinity);

// Dense weights at desk scale, 4*sqrt(t) beyond it (dropped entries are
// then bounded by e^-4).
double default_truncation_radius(std::size_t n, double t);

// L = (1/t)(D - W). The diagonal is stored as the exact negation of the
// accumulated off-diagonal row values, so row sums vanish by construction.
struct GraphLaplacian {
    SparseMatrix matrix;
    double bandwidth = 0.0;       // t
    std::vector<double> degree;   // d_i = sum_j w_ij

    std::size_t size() const { return matrix.rows(); }
};

GraphLaplacian assemble_laplacian(const KernelMatrix& kernel);

// Same construction from an arbitrary nonnegative symmetric weight matrix
// (used by the 1-D finite-element weights, where t plays no role).
GraphLaplacian laplacian_from_weights(const SparseMatrix& weights, double t);

// Column block W(X,B): column j equals column indices[j] of W.
Matrix boundary_columns(const KernelMatrix& kernel, std::span<const std::size_t> indices);

// Debug export, one "row col value" triplet per line with 17 significant
// digits.
void write_coo(std::ostream& out, const SparseMatrix& m);

} // namespace hext
