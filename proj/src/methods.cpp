#include "hext/methods.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "hext/error.hpp"

namespace hext {

const char* extension_method_name(ExtensionMethod method) {
    switch (method) {
    case ExtensionMethod::glm: return "glm";
    case ExtensionMethod::pim: return "pim";
    case ExtensionMethod::vcm: return "vcm";
    case ExtensionMethod::fem1d: return "fem1d";
    }
    return "unknown";
}

void BoundaryCondition::validate(std::size_t n) const {
    if (indices.empty()) fail(errc::invalid_boundary, "boundary set is empty");
    if (values.rows() != indices.size() || values.cols() < 1)
        fail(errc::invalid_boundary, "boundary value shape mismatch");
    std::vector<bool> seen(n, false);
    for (std::size_t b : indices) {
        if (b >= n) fail(errc::invalid_boundary, "boundary index out of range");
        if (seen[b]) fail(errc::invalid_boundary, "duplicate boundary index");
        seen[b] = true;
    }
    for (double v : values.data())
        if (!std::isfinite(v)) fail(errc::invalid_boundary, "non-finite boundary value");
}

PimParams PimParams::defaults(std::size_t n, std::size_t m) {
    PimParams p;
    double ratio = static_cast<double>(n) / static_cast<double>(m);
    p.mu = 1e4 * ratio;
    p.volume_ratio = 1.0;
    p.beta = 2.0 * ratio * p.volume_ratio / p.mu; // = 2e-4
    return p;
}

double VcmParams::layer_radius(double t) const {
    return std::pow(t, 0.5 - delta);
}

void VcmParams::validate() const {
    if (!(delta > 0.0 && delta < 0.5)) fail(errc::invalid_parameter, "delta must lie in (0, 1/2)");
}

namespace {

void merge_report(SolveReport& total, const SolveReport& column) {
    total.iterations = std::max(total.iterations, column.iterations);
    total.final_relative_residual =
        std::max(total.final_relative_residual, column.final_relative_residual);
    total.converged = total.converged && column.converged;
}

// Solve with the configured method; on iterative non-convergence retry with
// the dense factorization when the system is small enough, otherwise raise.
class EscalatingSolver {
public:
    EscalatingSolver(const SparseMatrix& a, SolveOptions opts) : a_(&a), opts_(opts), primary_(a, opts) {}

    std::pair<std::vector<double>, SolveReport> solve(std::span<const double> b) {
        auto [x, report] = primary_.solve(b);
        if (report.converged || primary_.chosen() == SolveMethod::dense_direct) return {std::move(x), report};
        if (a_->rows() > kDenseFeasibleLimit)
            fail(errc::solver_failure, "iterative solve did not converge and system is too large "
                                       "for the dense fallback");
        if (!dense_) {
            SolveOptions dense_opts = opts_;
            dense_opts.method = SolveMethod::dense_direct;
            dense_.emplace(*a_, dense_opts);
        }
        auto [xd, rd] = dense_->solve(b);
        rd.iterations = report.iterations; // iterations spent before escalating
        return {std::move(xd), rd};
    }

private:
    const SparseMatrix* a_;
    SolveOptions opts_;
    LinearSolver primary_;
    std::optional<LinearSolver> dense_;
};

// Every unconstrained point must reach a constrained one through the
// matrix support, else the reduced system is singular.
void check_reachability(const SparseMatrix& m, std::span<const std::size_t> constrained) {
    const std::size_t n = m.rows();
    std::vector<char> reached(n, 0);
    std::vector<std::size_t> queue(constrained.begin(), constrained.end());
    for (std::size_t b : queue) reached[b] = 1;
    while (!queue.empty()) {
        std::size_t u = queue.back();
        queue.pop_back();
        for (std::size_t v : m.row_indices(u))
            if (!reached[v]) {
                reached[v] = 1;
                queue.push_back(v);
            }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!reached[i])
            fail(errc::ill_posed_extension,
                 "point " + std::to_string(i) + " is disconnected from the boundary");
}

// Shared core of glm / vcm / fem1d: assigned values on `constrained`
// (sorted, with matching rows in `assigned`), the reduced system
// L(free, free) u = -L(free, constrained) g on the rest.
HarmonicField solve_constrained(const SparseMatrix& laplacian, ExtensionMethod method,
                                std::span<const std::size_t> constrained, const Matrix& assigned,
                                const SolveOptions& opts) {
    const std::size_t n = laplacian.rows();
    const std::size_t c = assigned.cols();

    std::vector<std::size_t> local(n, n); // position in constrained list, n = free
    for (std::size_t k = 0; k < constrained.size(); ++k) local[constrained[k]] = k;

    std::vector<std::size_t> free_points;
    free_points.reserve(n - constrained.size());
    for (std::size_t i = 0; i < n; ++i)
        if (local[i] == n) free_points.push_back(i);
    if (free_points.empty()) fail(errc::all_constrained, "no unconstrained points remain");

    check_reachability(laplacian, constrained);

    std::vector<std::size_t> free_local(n, n);
    for (std::size_t k = 0; k < free_points.size(); ++k) free_local[free_points[k]] = k;

    // Split L rows over free points into the reduced matrix and the
    // boundary coupling applied to the right-hand sides.
    std::vector<Triplet> entries;
    Matrix rhs(free_points.size(), c);
    for (std::size_t k = 0; k < free_points.size(); ++k) {
        std::size_t i = free_points[k];
        auto idx = laplacian.row_indices(i);
        auto val = laplacian.row_values(i);
        for (std::size_t e = 0; e < idx.size(); ++e) {
            std::size_t j = idx[e];
            if (free_local[j] != n) {
                entries.push_back({k, free_local[j], val[e]});
            } else {
                for (std::size_t col = 0; col < c; ++col)
                    rhs(k, col) -= val[e] * assigned(local[j], col);
            }
        }
    }
    SparseMatrix reduced =
        SparseMatrix::from_triplets(free_points.size(), free_points.size(), std::move(entries));

    HarmonicField field;
    field.method = method;
    field.values = Matrix(n, c);
    field.report.converged = true;
    field.effective_boundary.assign(constrained.begin(), constrained.end());

    EscalatingSolver solver(reduced, opts);
    for (std::size_t col = 0; col < c; ++col) {
        auto [x, report] = solver.solve(rhs.column(col));
        merge_report(field.report, report);
        for (std::size_t k = 0; k < free_points.size(); ++k) field.values(free_points[k], col) = x[k];
    }
    for (std::size_t k = 0; k < constrained.size(); ++k)
        for (std::size_t col = 0; col < c; ++col)
            field.values(constrained[k], col) = assigned(k, col);
    return field;
}

} // namespace

HarmonicField extend_glm(const GraphLaplacian& laplacian, const BoundaryCondition& bc,
                         const SolveOptions& opts) {
    bc.validate(laplacian.size());
    std::vector<std::size_t> order(bc.indices.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return bc.indices[a] < bc.indices[b]; });
    std::vector<std::size_t> sorted(order.size());
    Matrix assigned(order.size(), bc.columns());
    for (std::size_t k = 0; k < order.size(); ++k) {
        sorted[k] = bc.indices[order[k]];
        for (std::size_t col = 0; col < bc.columns(); ++col)
            assigned(k, col) = bc.values(order[k], col);
    }
    return solve_constrained(laplacian.matrix, ExtensionMethod::glm, sorted, assigned, opts);
}

HarmonicField extend_pim(const GraphLaplacian& laplacian, const KernelMatrix& kernel,
                         const BoundaryCondition& bc, const PimParams& params,
                         const SolveOptions& opts) {
    const std::size_t n = laplacian.size();
    bc.validate(n);
    if (!(params.mu > 0.0)) fail(errc::invalid_parameter, "mu must be positive");

    Matrix block = boundary_columns(kernel, bc.indices); // n x m

    // A = L + mu * P, where column indices[j] of P is column j of W(X,B).
    std::vector<Triplet> entries;
    entries.reserve(laplacian.matrix.nnz() + bc.count() * 8);
    for (std::size_t i = 0; i < n; ++i) {
        auto idx = laplacian.matrix.row_indices(i);
        auto val = laplacian.matrix.row_values(i);
        for (std::size_t e = 0; e < idx.size(); ++e) entries.push_back({i, idx[e], val[e]});
    }
    for (std::size_t j = 0; j < bc.count(); ++j) {
        std::size_t b = bc.indices[j];
        auto idx = kernel.weights.row_indices(b); // column b by symmetry
        auto val = kernel.weights.row_values(b);
        for (std::size_t e = 0; e < idx.size(); ++e)
            entries.push_back({idx[e], b, params.mu * val[e]});
    }
    SparseMatrix system = SparseMatrix::from_triplets(n, n, std::move(entries));

    HarmonicField field;
    field.method = ExtensionMethod::pim;
    field.values = Matrix(n, bc.columns());
    field.report.converged = true;

    EscalatingSolver solver(system, opts);
    std::vector<double> rhs(n);
    for (std::size_t col = 0; col < bc.columns(); ++col) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < bc.count(); ++j) acc += block(i, j) * bc.values(j, col);
            rhs[i] = params.mu * acc;
        }
        auto [x, report] = solver.solve(rhs);
        merge_report(field.report, report);
        field.values.set_column(col, x);
    }
    return field;
}

HarmonicField extend_vcm(const GraphLaplacian& laplacian, const BoundaryProximity& proximity,
                         const BoundaryCondition& bc, const VcmParams& params,
                         const SolveOptions& opts) {
    const std::size_t n = laplacian.size();
    bc.validate(n);
    params.validate();
    if (proximity.distance.size() != n || proximity.nearest.size() != n)
        fail(errc::invalid_parameter, "proximity size mismatch");

    const double radius = params.layer_radius(laplacian.bandwidth);
    std::vector<std::size_t> row_of_boundary(n, n);
    for (std::size_t k = 0; k < bc.count(); ++k) row_of_boundary[bc.indices[k]] = k;

    // The layer: points strictly closer to B than the layer radius, plus B.
    std::vector<std::size_t> layer;
    for (std::size_t i = 0; i < n; ++i)
        if (proximity.distance[i] < radius || row_of_boundary[i] != n) layer.push_back(i);
    if (layer.size() == n) fail(errc::all_constrained, "the layer swallows every point");

    Matrix assigned(layer.size(), bc.columns());
    for (std::size_t k = 0; k < layer.size(); ++k) {
        std::size_t i = layer[k];
        std::size_t anchor = proximity.nearest[i];
        if (anchor >= n || row_of_boundary[anchor] == n)
            fail(errc::ill_posed_extension,
                 "layer point " + std::to_string(i) + " has no reachable boundary anchor");
        for (std::size_t col = 0; col < bc.columns(); ++col)
            assigned(k, col) = bc.values(row_of_boundary[anchor], col);
    }
    return solve_constrained(laplacian.matrix, ExtensionMethod::vcm, layer, assigned, opts);
}

HarmonicField extend_fem1d(const PointCloud& cloud, const BoundaryCondition& bc,
                           const SolveOptions& opts) {
    const std::size_t n = cloud.size();
    if (cloud.dim() != 1) fail(errc::invalid_input, "hat-function weights require 1-D points");
    bc.validate(n);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return cloud.points(a, 0) < cloud.points(b, 0);
    });
    for (std::size_t k = 0; k + 1 < n; ++k)
        if (cloud.points(order[k], 0) == cloud.points(order[k + 1], 0))
            fail(errc::invalid_input, "duplicate coordinate in 1-D point set");

    std::vector<bool> is_boundary(n, false);
    for (std::size_t b : bc.indices) is_boundary[b] = true;
    if (!is_boundary[order.front()] || !is_boundary[order.back()])
        fail(errc::ill_posed_extension, "boundary must contain the extreme points");

    // Tridiagonal stiffness in sorted order: neighbors weighted by the
    // inverse gap. The bandwidth factor plays no role here.
    std::vector<Triplet> weights;
    weights.reserve(2 * n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        double gap = cloud.points(order[k + 1], 0) - cloud.points(order[k], 0);
        double w = 1.0 / gap;
        weights.push_back({order[k], order[k + 1], w});
        weights.push_back({order[k + 1], order[k], w});
    }
    GraphLaplacian stiffness =
        laplacian_from_weights(SparseMatrix::from_triplets(n, n, std::move(weights)), 1.0);

    HarmonicField field = extend_glm(stiffness, bc, opts);
    field.method = ExtensionMethod::fem1d;
    return field;
}

namespace {

std::vector<double> interpolate_common(const HarmonicField& field, const PointCloud& cloud,
                                       const Metric& metric, double t,
                                       std::span<const double> query, const BoundaryCondition* bc,
                                       double mu) {
    if (metric.kind == MetricKind::graph)
        fail(errc::invalid_parameter, "off-sample interpolation needs a direct metric");
    if (query.size() != cloud.dim()) fail(errc::invalid_parameter, "query dimension mismatch");
    if (field.values.rows() != cloud.size())
        fail(errc::invalid_parameter, "field and cloud size mismatch");
    if (!(t > 0.0)) fail(errc::invalid_parameter, "bandwidth t must be positive");

    const std::size_t c = field.values.cols();
    std::vector<double> numer(c, 0.0);
    double denom = 0.0;
    for (std::size_t j = 0; j < cloud.size(); ++j) {
        double d = point_distance(query, cloud.point(j), metric.kind);
        double w = std::exp(-(d * d) / (4.0 * t));
        denom += w;
        for (std::size_t col = 0; col < c; ++col) numer[col] += w * field.values(j, col);
    }
    if (bc) {
        for (std::size_t k = 0; k < bc->count(); ++k) {
            std::size_t b = bc->indices[k];
            double d = point_distance(query, cloud.point(b), metric.kind);
            double w = std::exp(-(d * d) / (4.0 * t));
            for (std::size_t col = 0; col < c; ++col)
                numer[col] += t * mu * w * (bc->values(k, col) - field.values(b, col));
        }
    }
    if (denom < std::numeric_limits<double>::min())
        fail(errc::out_of_support, "query point is beyond the kernel support of the samples");
    for (double& v : numer) v /= denom;
    return numer;
}

} // namespace

std::vector<double> interpolate_pim(const HarmonicField& field, const PointCloud& cloud,
                                    const Metric& metric, double t, double mu,
                                    const BoundaryCondition& bc, std::span<const double> query) {
    bc.validate(cloud.size());
    if (!(mu > 0.0)) fail(errc::invalid_parameter, "mu must be positive");
    return interpolate_common(field, cloud, metric, t, query, &bc, mu);
}

std::vector<double> interpolate_vcm(const HarmonicField& field, const PointCloud& cloud,
                                    const Metric& metric, double t, std::span<const double> query) {
    return interpolate_common(field, cloud, metric, t, query, nullptr, 0.0);
}

} // namespace hext
