#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hext/geometry.hpp"
#include "hext/kernel.hpp"
#include "hext/linalg.hpp"
#include "hext/solver.hpp"

namespace hext {

enum class ExtensionMethod { glm, pim, vcm, fem1d };

const char* extension_method_name(ExtensionMethod method);

// Boundary index set with per-point values; values may have several
// columns (one extension per column over the same boundary).
struct BoundaryCondition {
    std::vector<std::size_t> indices; // m distinct in-range indices
    Matrix values;                    // m x c, finite

    std::size_t count() const { return indices.size(); }
    std::size_t columns() const { return values.cols(); }

    void validate(std::size_t n) const;
};

struct PimParams {
    double mu = 0.0;           // coupling in front of W(X,B)
    double beta = 0.0;         // Robin parameter, informational
    double volume_ratio = 1.0; // |boundary| / |domain| estimate, informational

    // mu = 1e4 * n/m, with beta chosen so that mu = (2/beta)(n/m)*volume_ratio
    // holds exactly.
    static PimParams defaults(std::size_t n, std::size_t m);
};

struct VcmParams {
    double delta = 0.1;                // in (0, 1/2)
    double layer_radius(double t) const;

    void validate() const;
};

struct HarmonicField {
    Matrix values; // n x c
    ExtensionMethod method = ExtensionMethod::glm;
    // Aggregate over columns: max iterations, max residual, all converged.
    SolveReport report;
    // Indices whose values were assigned rather than solved for: B for
    // glm/fem1d, the thickened layer for vcm, empty for pim.
    std::vector<std::size_t> effective_boundary;
};

// Dirichlet values on B, discrete-harmonic rows elsewhere, via the reduced
// system on the complement of B.
HarmonicField extend_glm(const GraphLaplacian& laplacian, const BoundaryCondition& bc,
                         const SolveOptions& opts = {});

// Full-size coupled system (L + mu*P) u = mu * W(X,B) g; boundary values are
// unknowns too and are not exactly interpolated.
HarmonicField extend_pim(const GraphLaplacian& laplacian, const KernelMatrix& kernel,
                         const BoundaryCondition& bc, const PimParams& params,
                         const SolveOptions& opts = {});

// Constrains every point within layer_radius(t) of B to the value of its
// nearest boundary point, then solves the reduced system outside the layer.
HarmonicField extend_vcm(const GraphLaplacian& laplacian, const BoundaryProximity& proximity,
                         const BoundaryCondition& bc, const VcmParams& params,
                         const SolveOptions& opts = {});

// 1-D hat-function stiffness weights on the sorted coordinates; the result
// is the piecewise-linear interpolation of g between boundary points.
HarmonicField extend_fem1d(const PointCloud& cloud, const BoundaryCondition& bc,
                           const SolveOptions& opts = {});

// Off-sample evaluation. The pim variant carries the boundary-mismatch
// correction term t*mu*sum_B w(x,b)(g_b - u_b); the vcm variant is the plain
// kernel-weighted average. Both reject queries whose kernel mass underflows.
std::vector<double> interpolate_pim(const HarmonicField& field, const PointCloud& cloud,
                                    const Metric& metric, double t, double mu,
                                    const BoundaryCondition& bc, std::span<const double> query);
std::vector<double> interpolate_vcm(const HarmonicField& field, const PointCloud& cloud,
                                    const Metric& metric, double t, std::span<const double> query);

} // namespace hext
