#include "hext/solver.hpp"

#include <cmath>
#include <limits>

#include "hext/error.hpp"

namespace hext {

namespace {

double residual_floor(std::span<const double> b) {
    double nb = norm2(b);
    return nb > std::numeric_limits<double>::min() ? nb : std::numeric_limits<double>::min();
}

} // namespace

double relative_residual(const SparseMatrix& a, std::span<const double> x,
                         std::span<const double> b) {
    std::vector<double> r = a.multiply(x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    return norm2(r) / residual_floor(b);
}

LinearSolver::LinearSolver(const SparseMatrix& a, SolveOptions opts) : a_(&a), opts_(opts) {
    if (a.rows() != a.cols()) fail(errc::invalid_parameter, "matrix must be square");
    if (opts.tolerance <= 0.0) fail(errc::invalid_parameter, "tolerance must be positive");
    const std::size_t n = a.rows();
    max_iterations_ = opts.max_iterations > 0 ? opts.max_iterations : 10 * n;

    chosen_ = opts.method;
    if (chosen_ == SolveMethod::automatic) {
        if (n <= kDenseAutoLimit)
            chosen_ = SolveMethod::dense_direct;
        else
            chosen_ = a.is_symmetric() ? SolveMethod::conjugate_gradient : SolveMethod::bicgstab;
    }

    if (chosen_ == SolveMethod::dense_direct) {
        lu_.emplace(a.to_dense());
    } else {
        inv_diag_.assign(n, 1.0);
        std::vector<double> d = a.diagonal();
        for (std::size_t i = 0; i < n; ++i)
            if (d[i] != 0.0) inv_diag_[i] = 1.0 / d[i];
    }
}

std::pair<std::vector<double>, SolveReport> LinearSolver::solve(std::span<const double> b) const {
    if (b.size() != a_->rows()) fail(errc::invalid_parameter, "right-hand side size mismatch");
    switch (chosen_) {
    case SolveMethod::conjugate_gradient: return solve_cg(b);
    case SolveMethod::bicgstab: return solve_bicgstab(b);
    default: return solve_dense(b);
    }
}

std::pair<std::vector<double>, SolveReport> LinearSolver::solve_dense(
    std::span<const double> b) const {
    std::vector<double> x = lu_->solve(b);

    SolveReport report;
    report.iterations = 0;
    report.final_relative_residual = relative_residual(*a_, x, b);
    report.converged = report.final_relative_residual <= opts_.tolerance;
    return {std::move(x), report};
}

std::pair<std::vector<double>, SolveReport> LinearSolver::solve_cg(std::span<const double> b) const {
    const std::size_t n = a_->rows();
    const double nb = residual_floor(b);

    std::vector<double> x(n, 0.0);
    std::vector<double> r(b.begin(), b.end()); // r = b - A*0
    std::vector<double> z(n), p(n), q(n);

    SolveReport report;
    if (norm2(r) / nb <= opts_.tolerance) {
        report.final_relative_residual = relative_residual(*a_, x, b);
        report.converged = true;
        return {std::move(x), report};
    }

    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag_[i] * r[i];
    p = z;
    double rho = dot(r, z);

    std::size_t it = 0;
    while (it < max_iterations_) {
        ++it;
        a_->multiply(p, q);
        double pq = dot(p, q);
        if (pq == 0.0) break; // breakdown
        double alpha = rho / pq;
        axpy(alpha, p, x);
        axpy(-alpha, q, r);
        if (norm2(r) / nb <= opts_.tolerance) break;
        for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag_[i] * r[i];
        double rho_next = dot(r, z);
        double beta = rho_next / rho;
        rho = rho_next;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }

    report.iterations = it;
    report.final_relative_residual = relative_residual(*a_, x, b);
    report.converged = report.final_relative_residual <= opts_.tolerance;
    return {std::move(x), report};
}

std::pair<std::vector<double>, SolveReport> LinearSolver::solve_bicgstab(
    std::span<const double> b) const {
    const std::size_t n = a_->rows();
    const double nb = residual_floor(b);

    std::vector<double> x(n, 0.0);
    std::vector<double> r(b.begin(), b.end());
    std::vector<double> r0 = r; // shadow residual
    std::vector<double> p(n, 0.0), v(n, 0.0), s(n), t(n), phat(n), shat(n);

    SolveReport report;
    if (norm2(r) / nb <= opts_.tolerance) {
        report.final_relative_residual = relative_residual(*a_, x, b);
        report.converged = true;
        return {std::move(x), report};
    }

    double rho = 1.0, alpha = 1.0, omega = 1.0;
    std::size_t it = 0;
    while (it < max_iterations_) {
        ++it;
        double rho_next = dot(r0, r);
        if (rho_next == 0.0) break; // breakdown
        if (it == 1) {
            p = r;
        } else {
            double beta = (rho_next / rho) * (alpha / omega);
            for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        rho = rho_next;
        for (std::size_t i = 0; i < n; ++i) phat[i] = inv_diag_[i] * p[i];
        a_->multiply(phat, v);
        double r0v = dot(r0, v);
        if (r0v == 0.0) break;
        alpha = rho / r0v;
        for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        if (norm2(s) / nb <= opts_.tolerance) {
            axpy(alpha, phat, x);
            r = s;
            break;
        }
        for (std::size_t i = 0; i < n; ++i) shat[i] = inv_diag_[i] * s[i];
        a_->multiply(shat, t);
        double tt = dot(t, t);
        if (tt == 0.0) break;
        omega = dot(t, s) / tt;
        for (std::size_t i = 0; i < n; ++i) x[i] += alpha * phat[i] + omega * shat[i];
        for (std::size_t i = 0; i < n; ++i) r[i] = s[i] - omega * t[i];
        if (norm2(r) / nb <= opts_.tolerance) break;
        if (omega == 0.0) break;
    }

    report.iterations = it;
    report.final_relative_residual = relative_residual(*a_, x, b);
    report.converged = report.final_relative_residual <= opts_.tolerance;
    return {std::move(x), report};
}

std::pair<std::vector<double>, SolveReport> solve(const SparseMatrix& a,
                                                  std::span<const double> b, SolveOptions opts) {
    return LinearSolver(a, opts).solve(b);
}

} // namespace hext
