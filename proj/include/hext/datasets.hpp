#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hext/geometry.hpp"
#include "hext/linalg.hpp"
#include "hext/methods.hpp"

namespace hext {

// The 1-D reference instance: uniform points on (0,2) plus the three
// boundary points {0, 1, 2} appended at the end, with values (0, 1, 0).
struct IntervalSample {
    PointCloud cloud;
    BoundaryCondition bc;
};

IntervalSample sample_interval(std::size_t n_interior, std::uint64_t seed);
inline IntervalSample sample_interval_demo(std::uint64_t seed) { return sample_interval(198, seed); }

// Piecewise-linear harmonic truth for the interval instance.
double interval_truth(double x);

// Uniform samples of the unit disk (interior first) and unit circle
// (appended after), with the circle indices reported.
struct DiskSample {
    PointCloud cloud;
    std::vector<std::size_t> boundary;
};

DiskSample sample_disk(std::size_t n_interior, std::size_t m_boundary, std::uint64_t seed);

// Isotropic Gaussian blobs with per-blob counts; labels are 1-based blob ids.
struct BlobSample {
    PointCloud cloud;
    std::vector<int> labels;
};

BlobSample sample_blobs(const Matrix& centers, double spread, std::span<const std::size_t> counts,
                        std::uint64_t seed);

// File ingestion. All parsers throw parse errors carrying the offending
// line or byte offset.
PointCloud load_points_csv(const std::string& path);
std::map<std::size_t, int> load_labels_csv(const std::string& path);

// Text coordinate format: header "n d nnz", then nnz 0-indexed
// "row col value" lines. Duplicate coordinates are rejected.
SparseMatrix load_sparse_coo(const std::string& path);
PointCloud densify(const SparseMatrix& m);

// IDX containers (big-endian): magic 0x00000803 for image tensors, scaled
// to [0,1] by /255 and flattened row-major; 0x00000801 for label bytes.
PointCloud load_idx_images(const std::string& path);
std::vector<int> load_idx_labels(const std::string& path);

// tf * ln(n/df) weighting followed by L2 row normalization. Documents that
// end up with an empty row are reported as degenerate.
SparseMatrix tfidf_normalize(const SparseMatrix& counts);

} // namespace hext
