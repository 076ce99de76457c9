#pragma once

#include "qcs/errors.hpp"
#include "qcs/sparse_operator.hpp"
#include "qcs/symmetry.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace qcs {

struct SliceRecord {
  double lower = 0.0;
  double upper = 0.0;
  double shift = 0.0;
  std::size_t count = 0;
  std::size_t restarts = 0;
};

struct SolverStats {
  std::size_t applications = 0; // operator (or inverse) block applications
  std::size_t restarts = 0;
  std::size_t factorizations = 0;
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
  std::vector<SliceRecord> slices;
};

/// Sorted eigenpairs.  Column i of `eigenvectors` belongs to eigenvalues[i];
/// residuals[i] = ||H v - lambda v|| (or ||A v - lambda W v||_{W^-1}).
struct EigenSolution {
  Vector eigenvalues;
  Matrix eigenvectors;
  Vector residuals;
  SolverStats stats;

  std::size_t k() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string &what, EigenSolution partial)
      : Error(what), partial_(std::move(partial)) {}
  const EigenSolution &partial() const { return partial_; }

private:
  EigenSolution partial_;
};

enum class SolverMode {
  automatic,    // slicing for large problems, direct Lanczos for tiny ones
  direct,       // thick-restart block Lanczos on the operator itself
  shift_invert, // sparse LDL^T spectrum slicing
};

struct SolverOptions {
  double tol = 1e-8;                 // absolute residual bound
  std::uint64_t seed = 0x5eed2024ULL;
  std::size_t block_size = 4;
  std::size_t max_restarts = 400;
  SolverMode mode = SolverMode::automatic;
  std::size_t slice_target = 160;    // eigenvalues per shift-invert slice
  std::size_t direct_limit = 64;     // automatic: direct mode below this dimension
  /// Clustering tolerance (relative) used by canonicalize().
  double cluster_tol = 1e-7;
};

/// Called once per completed slice with its eigenpairs in ascending order.
using SliceSink = std::function<void(const EigenSolution &slice)>;

/// k lowest eigenpairs of a symmetric operator.
EigenSolution solve_lowest(const SparseOperator &op, std::size_t k,
                           const SolverOptions &opts = {});

/// Streaming variant: eigenpairs are delivered slice by slice (ascending,
/// canonicalized, full-grid vectors) and not kept.  With a symmetry
/// reduction every sector is sliced separately over common energy windows.
/// Returns the stats and eigenvalues only (eigenvectors left empty).
EigenSolution solve_lowest_streaming(const SparseOperator &op, std::size_t k,
                                     const SolverOptions &opts,
                                     const SymmetryReduction *reduction,
                                     const SliceSink &sink);

/// k lowest pairs of A v = lambda W v with W diagonal and positive.
/// Eigenvectors are W-orthonormal.
EigenSolution solve_lowest_generalized(const SparseOperator &A,
                                       const SparseOperator &W, std::size_t k,
                                       const SolverOptions &opts = {});

/// Full dense symmetric eigendecomposition truncated to k pairs.
EigenSolution dense_oracle(const Matrix &A, std::size_t k,
                           std::size_t max_dimension = 5000);
EigenSolution dense_oracle(const SparseOperator &op, std::size_t k,
                           std::size_t max_dimension = 5000);
EigenSolution dense_oracle_generalized(const Matrix &A, const Matrix &W,
                                       std::size_t k,
                                       std::size_t max_dimension = 5000);

/// Number of eigenvalues strictly below `shift` (Sylvester inertia of an
/// LDL^T factorization of op - shift I).
std::size_t count_eigenvalues_below(const SparseOperator &op, double shift);

/// Makes degenerate clusters reproducible: inside every cluster of nearly
/// equal eigenvalues the vectors are rotated to be eigenvectors of the given
/// reflection permutations (Rayleigh-Ritz per symmetry block), each vector's
/// largest-magnitude component is made positive, and ties are ordered by the
/// index of that component.
void canonicalize(EigenSolution &sol, const SparseOperator &op,
                  const std::vector<std::vector<std::size_t>> &reflections,
                  double cluster_tol);

/// ||H v_i - lambda_i v_i|| recomputed with an independent matvec.
Vector residual_norms(const SparseOperator &op, const EigenSolution &sol);

/// max |<v_i, v_j> - delta_ij|.
double orthonormality_defect(const Matrix &V);

} // namespace qcs
