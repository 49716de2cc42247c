#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hext/linalg.hpp"

namespace hext {

enum class SolveMethod {
    automatic,          // dense below the size cutoff, else CG / BiCGSTAB by symmetry
    conjugate_gradient, // symmetric positive definite path
    bicgstab,           // general path
    dense_direct,       // LU with partial pivoting; the verification oracle
};

struct SolveOptions {
    SolveMethod method = SolveMethod::automatic;
    double tolerance = 1e-10;       // relative residual target
    std::size_t max_iterations = 0; // 0 means 10 * n
};

struct SolveReport {
    std::size_t iterations = 0;
    double final_relative_residual = 0.0;
    bool converged = false;
};

// Matrix size up to which `automatic` picks the dense factorization, and up
// to which callers may escalate a failed iterative solve.
inline constexpr std::size_t kDenseAutoLimit = 500;
inline constexpr std::size_t kDenseFeasibleLimit = 4096;

// Reusable solve context: the Jacobi diagonal (iterative paths) or the LU
// factorization (dense path) is computed once and shared across right-hand
// sides.
class LinearSolver {
public:
    LinearSolver(const SparseMatrix& a, SolveOptions opts);

    std::pair<std::vector<double>, SolveReport> solve(std::span<const double> b) const;

    SolveMethod chosen() const { return chosen_; }

private:
    std::pair<std::vector<double>, SolveReport> solve_cg(std::span<const double> b) const;
    std::pair<std::vector<double>, SolveReport> solve_bicgstab(std::span<const double> b) const;
    std::pair<std::vector<double>, SolveReport> solve_dense(std::span<const double> b) const;

    const SparseMatrix* a_;
    SolveOptions opts_;
    SolveMethod chosen_;
    std::size_t max_iterations_;
    std::vector<double> inv_diag_;  // Jacobi preconditioner
    std::optional<DenseLu> lu_;     // dense path
};

// One-shot convenience wrapper.
std::pair<std::vector<double>, SolveReport> solve(const SparseMatrix& a,
                                                  std::span<const double> b,
                                                  SolveOptions opts = {});

// True relative residual ||Ax - b|| / max(||b||, tiny).
double relative_residual(const SparseMatrix& a, std::span<const double> x,
                         std::span<const double> b);

} // namespace hext
