#include "hext/ssl.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "hext/error.hpp"
#include "hext/rng.hpp"

namespace hext {

void LabeledDataset::validate() const {
    if (classes < 1) fail(errc::invalid_parameter, "class count must be at least 1");
    if (labels.empty()) fail(errc::invalid_parameter, "need at least one labeled point");
    if (labels.size() >= cloud.size())
        fail(errc::invalid_parameter, "need at least one unlabeled point");
    for (const auto& [idx, cls] : labels) {
        if (idx >= cloud.size()) fail(errc::invalid_parameter, "labeled index out of range");
        if (cls < 1 || cls > classes) fail(errc::invalid_parameter, "class label out of range");
    }
}

namespace {

// One-hot indicator columns over the labeled set, ordered by point index.
BoundaryCondition one_hot_boundary(const std::map<std::size_t, int>& labels, int classes) {
    BoundaryCondition bc;
    bc.indices.reserve(labels.size());
    for (const auto& [idx, cls] : labels) {
        (void)cls;
        bc.indices.push_back(idx);
    }
    bc.values = Matrix(labels.size(), static_cast<std::size_t>(classes));
    std::size_t row = 0;
    for (const auto& [idx, cls] : labels) {
        (void)idx;
        bc.values(row, static_cast<std::size_t>(cls - 1)) = 1.0;
        ++row;
    }
    return bc;
}

} // namespace

LabelAssignment assign_labels(Matrix scores, const std::map<std::size_t, int>& labels) {
    LabelAssignment out;
    out.labels.assign(scores.rows(), 1);
    for (std::size_t i = 0; i < scores.rows(); ++i) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < scores.cols(); ++c)
            if (scores(i, c) > scores(i, best)) best = c;
        out.labels[i] = static_cast<int>(best) + 1;
    }
    for (const auto& [idx, cls] : labels) out.labels[idx] = cls;
    out.scores = std::move(scores);
    return out;
}

SslPipeline::SslPipeline(const PointCloud& cloud, const GraphConfig& config)
    : cloud_(&cloud), config_(config) {
    if (config.metric == MetricKind::graph)
        fail(errc::invalid_parameter, "configure the base metric and graph_distances instead");
    if (config.bandwidth <= 0.0 || config.graph_distances)
        graph_ = build_knn_graph(cloud, Metric{config.metric, config.metric, 0}, config.k);
    bandwidth_ = config.bandwidth > 0.0 ? config.bandwidth : select_bandwidth(*graph_);
    double radius = config.truncation_radius > 0.0
                        ? config.truncation_radius
                        : default_truncation_radius(cloud.size(), bandwidth_);
    if (config.graph_distances)
        kernel_ = assemble_kernel(cloud, *graph_, bandwidth_, radius);
    else
        kernel_ = assemble_kernel(cloud, Metric{config.metric, config.metric, 0}, bandwidth_,
                                  radius);
    laplacian_ = assemble_laplacian(kernel_);
}

const NeighborGraph& SslPipeline::graph() const {
    if (!graph_) fail(errc::invalid_parameter, "pipeline was built without a kNN graph");
    return *graph_;
}

BoundaryProximity SslPipeline::proximity(std::span<const std::size_t> sources) const {
    if (config_.graph_distances) return multi_source_proximity(graph(), sources);
    return direct_proximity(*cloud_, config_.metric, sources);
}

LabelAssignment SslPipeline::label(const std::map<std::size_t, int>& labels, int classes,
                                   const MethodConfig& config) const {
    BoundaryCondition bc = one_hot_boundary(labels, classes);

    HarmonicField field;
    switch (config.method) {
    case ExtensionMethod::glm:
        field = extend_glm(laplacian_, bc, config.solver);
        break;
    case ExtensionMethod::pim: {
        PimParams params = PimParams::defaults(cloud_->size(), bc.count());
        if (config.mu > 0.0) params.mu = config.mu;
        field = extend_pim(laplacian_, kernel_, bc, params, config.solver);
        break;
    }
    case ExtensionMethod::vcm: {
        BoundaryProximity prox = proximity(bc.indices);
        field = extend_vcm(laplacian_, prox, bc, config.vcm, config.solver);
        break;
    }
    case ExtensionMethod::fem1d:
        field = extend_fem1d(*cloud_, bc, config.solver);
        break;
    }
    return assign_labels(std::move(field.values), labels);
}

LabelAssignment run_ssl(const LabeledDataset& data, const MethodConfig& method,
                        const GraphConfig& graph) {
    data.validate();
    SslPipeline pipeline(data.cloud, graph);
    return pipeline.label(data.labels, data.classes, method);
}

ZhouContext::ZhouContext(const PointCloud& cloud, MetricKind metric, double sigma, double alpha)
    : n_(cloud.size()), alpha_(alpha) {
    if (!(sigma > 0.0)) fail(errc::invalid_parameter, "sigma must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) fail(errc::invalid_parameter, "alpha must lie in (0,1)");

    Matrix affinity(n_, n_);
    std::vector<double> degree(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j) {
            double d = point_distance(cloud.point(i), cloud.point(j), metric);
            double w = std::exp(-(d * d) / (2.0 * sigma * sigma));
            affinity(i, j) = w;
            affinity(j, i) = w;
            degree[i] += w;
            degree[j] += w;
        }
    for (std::size_t i = 0; i < n_; ++i)
        if (!(degree[i] > 0.0))
            fail(errc::degenerate_input,
                 "point " + std::to_string(i) + " has zero affinity to every other point");

    normalized_ = Matrix(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
        double di = 1.0 / std::sqrt(degree[i]);
        for (std::size_t j = 0; j < n_; ++j)
            normalized_(i, j) = di * affinity(i, j) / std::sqrt(degree[j]);
    }

    Matrix system(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j)
            system(i, j) = (i == j ? 1.0 : 0.0) - alpha_ * normalized_(i, j);
    factorization_ = std::make_unique<DenseLu>(std::move(system));
}

namespace {

Matrix one_hot_full(std::size_t n, const std::map<std::size_t, int>& labels, int classes) {
    if (labels.empty()) fail(errc::invalid_parameter, "need at least one labeled point");
    Matrix y(n, static_cast<std::size_t>(classes));
    for (const auto& [idx, cls] : labels) {
        if (idx >= n) fail(errc::invalid_parameter, "labeled index out of range");
        if (cls < 1 || cls > classes) fail(errc::invalid_parameter, "class label out of range");
        y(idx, static_cast<std::size_t>(cls - 1)) = 1.0;
    }
    return y;
}

} // namespace

LabelAssignment ZhouContext::label(const std::map<std::size_t, int>& labels, int classes) const {
    Matrix y = one_hot_full(n_, labels, classes);
    Matrix scores(n_, y.cols());
    std::vector<double> rhs(n_);
    for (std::size_t c = 0; c < y.cols(); ++c) {
        for (std::size_t i = 0; i < n_; ++i) rhs[i] = (1.0 - alpha_) * y(i, c);
        std::vector<double> f = factorization_->solve(rhs);
        scores.set_column(c, f);
    }
    return assign_labels(std::move(scores), labels);
}

LabelAssignment ZhouContext::label_iterative(const std::map<std::size_t, int>& labels, int classes,
                                             double tol, std::size_t max_sweeps) const {
    Matrix y = one_hot_full(n_, labels, classes);
    Matrix f = y;
    Matrix next(n_, y.cols());
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        double change = 0.0;
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t c = 0; c < y.cols(); ++c) {
                double acc = 0.0;
                for (std::size_t j = 0; j < n_; ++j) acc += normalized_(i, j) * f(j, c);
                double v = alpha_ * acc + (1.0 - alpha_) * y(i, c);
                change = std::max(change, std::fabs(v - f(i, c)));
                next(i, c) = v;
            }
        std::swap(f, next);
        if (change <= tol) break;
    }
    return assign_labels(std::move(f), labels);
}

LabelAssignment zhou_lgc(const PointCloud& cloud, const std::map<std::size_t, int>& labels,
                         int classes, MetricKind metric, double sigma, double alpha) {
    LabeledDataset data{cloud, labels, classes};
    data.validate();
    ZhouContext context(cloud, metric, sigma, alpha);
    return context.label(labels, classes);
}

namespace {

double sample_stddev(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return 0.0;
    double acc = 0.0;
    for (double x : xs) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / static_cast<double>(xs.size() - 1));
}

} // namespace

TrialOutcome run_trials(const PointCloud& cloud, const std::vector<int>& truth, int classes,
                        std::size_t k_labels, std::size_t n_trials,
                        const std::vector<std::string>& methods, const GraphConfig& graph,
                        const MethodConfig& base, std::uint64_t seed) {
    const std::size_t n = cloud.size();
    if (truth.size() != n) fail(errc::invalid_parameter, "ground truth must cover every point");
    if (classes < 1) fail(errc::invalid_parameter, "class count must be at least 1");
    if (k_labels < 1) fail(errc::invalid_parameter, "k_labels must be at least 1");
    if (n_trials < 1) fail(errc::invalid_parameter, "need at least one trial");
    if (methods.empty()) fail(errc::invalid_parameter, "no methods requested");

    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(classes));
    for (std::size_t i = 0; i < n; ++i) {
        int cls = truth[i];
        if (cls < 1 || cls > classes) fail(errc::invalid_parameter, "truth label out of range");
        members[static_cast<std::size_t>(cls - 1)].push_back(i);
    }
    for (std::size_t c = 0; c < members.size(); ++c)
        if (members[c].size() < k_labels)
            fail(errc::invalid_parameter,
                 "class " + std::to_string(c + 1) + " has fewer than k_labels members");

    bool needs_pipeline = false, needs_zhou = false;
    for (const std::string& m : methods) {
        if (m == "zhou")
            needs_zhou = true;
        else if (m == "glm" || m == "pim" || m == "vcm" || m == "fem1d")
            needs_pipeline = true;
        else
            fail(errc::invalid_parameter, "unknown method '" + m + "'");
    }

    std::optional<SslPipeline> pipeline;
    if (needs_pipeline) pipeline.emplace(cloud, graph);
    std::optional<ZhouContext> zhou;
    if (needs_zhou) zhou.emplace(cloud, graph.metric);

    TrialOutcome outcome;
    std::map<std::string, std::vector<double>> rates;

    std::vector<std::size_t> pool;
    for (std::size_t trial = 0; trial < n_trials; ++trial) {
        Rng rng = Rng::for_trial(seed, trial);
        std::map<std::size_t, int> labeled;
        for (std::size_t c = 0; c < members.size(); ++c) {
            pool = members[c];
            for (std::size_t i = 0; i < k_labels; ++i) {
                std::size_t j = i + rng.below(pool.size() - i);
                std::swap(pool[i], pool[j]);
                labeled[pool[i]] = static_cast<int>(c) + 1;
            }
        }

        if (labeled.size() == n) {
            // nothing left to predict; the error over no points is zero
            for (const std::string& m : methods) {
                outcome.records.push_back({m, k_labels, trial, 0.0});
                rates[m].push_back(0.0);
            }
            continue;
        }

        for (const std::string& m : methods) {
            LabelAssignment assignment;
            if (m == "zhou") {
                assignment = zhou->label(labeled, classes);
            } else {
                MethodConfig config = base;
                if (m == "glm") config.method = ExtensionMethod::glm;
                else if (m == "pim") config.method = ExtensionMethod::pim;
                else if (m == "vcm") config.method = ExtensionMethod::vcm;
                else config.method = ExtensionMethod::fem1d;
                assignment = pipeline->label(labeled, classes, config);
            }

            std::size_t wrong = 0, unlabeled = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (labeled.count(i)) continue;
                ++unlabeled;
                if (assignment.labels[i] != truth[i]) ++wrong;
            }
            double rate = unlabeled == 0
                              ? 0.0
                              : static_cast<double>(wrong) / static_cast<double>(unlabeled);
            outcome.records.push_back({m, k_labels, trial, rate});
            rates[m].push_back(rate);
        }
    }

    for (const std::string& m : methods) {
        const std::vector<double>& xs = rates[m];
        double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
        outcome.summary.push_back({m, k_labels, xs.size(), mean, sample_stddev(xs, mean)});
    }
    return outcome;
}

} // namespace hext
