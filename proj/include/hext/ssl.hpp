#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hext/geometry.hpp"
#include "hext/kernel.hpp"
#include "hext/methods.hpp"

namespace hext {

// A point cloud with a partial 1-based class assignment.
struct LabeledDataset {
    PointCloud cloud;
    std::map<std::size_t, int> labels; // index -> class in 1..classes
    int classes = 0;

    void validate() const;
};

struct LabelAssignment {
    std::vector<int> labels; // full assignment, size n
    Matrix scores;           // n x classes extension values
};

// Argmax over score columns with ties to the lowest class index; points in
// `labels` keep their given class.
LabelAssignment assign_labels(Matrix scores, const std::map<std::size_t, int>& labels);

// Kernel construction shared by every extension method.
struct GraphConfig {
    MetricKind metric = MetricKind::euclidean; // base distance
    bool graph_distances = true;               // shortest-path distances for the kernel
    std::size_t k = 10;
    double bandwidth = 0.0;         // 0: select t = h^2 from the kNN graph
    double truncation_radius = 0.0; // 0: default policy
};

struct MethodConfig {
    ExtensionMethod method = ExtensionMethod::pim;
    double mu = 0.0; // 0: 1e4 * n/m
    VcmParams vcm{};
    SolveOptions solver{};
};

// Graph, bandwidth, kernel and Laplacian built once per dataset; labeling
// runs repeatedly against it with different labeled subsets. The kNN graph
// is only constructed when something needs it (bandwidth selection, graph
// distances).
class SslPipeline {
public:
    SslPipeline(const PointCloud& cloud, const GraphConfig& config);

    double bandwidth() const { return bandwidth_; }
    const NeighborGraph& graph() const;
    const KernelMatrix& kernel() const { return kernel_; }
    const GraphLaplacian& laplacian() const { return laplacian_; }

    BoundaryProximity proximity(std::span<const std::size_t> sources) const;

    LabelAssignment label(const std::map<std::size_t, int>& labels, int classes,
                          const MethodConfig& config) const;

private:
    const PointCloud* cloud_;
    GraphConfig config_;
    std::optional<NeighborGraph> graph_;
    double bandwidth_ = 0.0;
    KernelMatrix kernel_;
    GraphLaplacian laplacian_;
};

LabelAssignment run_ssl(const LabeledDataset& data, const MethodConfig& method,
                        const GraphConfig& graph);

// Local-and-global-consistency baseline: dense RBF affinity with zero
// diagonal, symmetric normalization, and the closed-form propagation
// F = (1-alpha)(I - alpha S)^-1 Y. The affinity factorization is reused
// across label sets.
class ZhouContext {
public:
    ZhouContext(const PointCloud& cloud, MetricKind metric, double sigma = 0.3,
                double alpha = 0.3);

    LabelAssignment label(const std::map<std::size_t, int>& labels, int classes) const;
    // Fixed-point cross-check F <- alpha S F + (1-alpha) Y, max-norm
    // convergence threshold and sweep cap as given.
    LabelAssignment label_iterative(const std::map<std::size_t, int>& labels, int classes,
                                    double tol = 1e-10, std::size_t max_sweeps = 10000) const;

private:
    std::size_t n_;
    double alpha_;
    Matrix normalized_; // S
    std::unique_ptr<DenseLu> factorization_; // I - alpha S
};

LabelAssignment zhou_lgc(const PointCloud& cloud, const std::map<std::size_t, int>& labels,
                         int classes, MetricKind metric = MetricKind::euclidean,
                         double sigma = 0.3, double alpha = 0.3);

// Repeated evaluation protocol: per trial, draw k labeled points per class
// (deterministically from seed and trial index), feed the identical labeled
// set to every method, and score the unlabeled remainder.
struct TrialRecord {
    std::string method;
    std::size_t k_labels;
    std::size_t trial;
    double error_rate;
};

struct TrialSummary {
    std::string method;
    std::size_t k_labels;
    std::size_t trials;
    double mean_error;
    double stddev_error; // sample standard deviation over trials
};

struct TrialOutcome {
    std::vector<TrialRecord> records;
    std::vector<TrialSummary> summary;
};

TrialOutcome run_trials(const PointCloud& cloud, const std::vector<int>& truth, int classes,
                        std::size_t k_labels, std::size_t n_trials,
                        const std::vector<std::string>& methods, const GraphConfig& graph,
                        const MethodConfig& base, std::uint64_t seed);

} // namespace hext
