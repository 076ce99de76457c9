#include "qcs/eigensolve.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

namespace qcs {
namespace {

using Index = Eigen::Index;
using BlockApply = std::function<void(const Matrix &, Matrix &)>;
using ColSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Clock = std::chrono::steady_clock;

enum class Which { largest_magnitude, smallest_algebraic };

struct KrylovResult {
  Vector theta;
  Matrix X;
  Vector rnorm;
  std::size_t restarts = 0;
  std::size_t applications = 0;
  bool converged = false;
};

void fill_random(Eigen::Ref<Vector> v, std::mt19937_64 &rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  for (Index i = 0; i < v.size(); ++i) v[i] = nd(rng);
}

// Orthogonalize `w` against the first `q` columns of V, twice (CGS2).
void project_out(const Matrix &V, Index q, Eigen::Ref<Vector> w) {
  if (q == 0) return;
  for (int pass = 0; pass < 2; ++pass) {
    const Vector c = V.leftCols(q).transpose() * w;
    w.noalias() -= V.leftCols(q) * c;
  }
}

// Orthonormalize the n x b block W (already orthogonal to V[:, :q]) into
// V[:, q:q+b].  Returns R with W = Q R.  Rank-deficient columns are replaced by
// fresh random directions, which keeps the basis full even when the Krylov
// space becomes invariant.
Matrix orthonormalize_block(Matrix &V, Index q, Matrix &W,
                            const Vector &scale, std::mt19937_64 &rng) {
  const Index b = W.cols();
  Matrix R = Matrix::Zero(b, b);
  for (Index c = 0; c < b; ++c) {
    Vector w = W.col(c);
    for (int pass = 0; pass < 2; ++pass) {
      for (Index i = 0; i < c; ++i) {
        const double r = V.col(q + i).dot(w);
        R(i, c) += r;
        w.noalias() -= r * V.col(q + i);
      }
    }
    double nrm = w.norm();
    const double floor = 1e-12 * std::max(scale[c], 1e-300);
    if (nrm > floor) {
      R(c, c) = nrm;
      V.col(q + c) = w / nrm;
      continue;
    }
    // Deflated column: restart with a random direction.
    for (int attempt = 0; attempt < 4; ++attempt) {
      fill_random(w, rng);
      project_out(V, q + c, w);
      nrm = w.norm();
      if (nrm > 1e-8) break;
    }
    V.col(q + c) = w / nrm;
  }
  return R;
}

// Symmetric block Krylov-Schur (thick-restart block Lanczos) with full
// reorthogonalization.  `tol_of(theta)` gives the admissible residual norm
// for a Ritz value.
KrylovResult krylov_schur(const BlockApply &apply, Index n, Index nev,
                          Which which,
                          const std::function<double(double)> &tol_of,
                          Index b, std::size_t max_restarts,
                          std::mt19937_64 &rng) {
  Index m = std::max<Index>(2 * nev + 2 * b, nev + 8 * b);
  m = std::max<Index>(m, 24);
  m = std::min<Index>(m, n - b);
  if (m < nev + b) throw InvalidParameter("Krylov space too small for the requested eigenpairs");

  KrylovResult out;
  Matrix V(n, m + b);
  Matrix H = Matrix::Zero(m + b, m + b);
  Matrix W(n, b);

  {
    Matrix X0(n, b);
    for (Index c = 0; c < b; ++c) fill_random(X0.col(c), rng);
    Vector ones = Vector::Constant(b, X0.norm());
    orthonormalize_block(V, 0, X0, ones, rng);
  }

  Index j = 0;
  for (std::size_t restart = 0;; ++restart) {
    while (j + b <= m) {
      apply(V.middleCols(j, b), W);
      ++out.applications;
      Vector scale(b);
      for (Index c = 0; c < b; ++c) scale[c] = W.col(c).norm();
      const Index q = j + b;
      Matrix C = V.leftCols(q).transpose() * W;
      W.noalias() -= V.leftCols(q) * C;
      const Matrix C2 = V.leftCols(q).transpose() * W;
      W.noalias() -= V.leftCols(q) * C2;
      C += C2;
      const Matrix Dsym = 0.5 * (C.bottomRows(b) + C.bottomRows(b).transpose());
      C.bottomRows(b) = Dsym;
      H.block(0, j, q, b) = C;
      H.block(j, 0, b, q) = C.transpose();
      const Matrix R = orthonormalize_block(V, q, W, scale, rng);
      H.block(q, j, b, b) = R;
      H.block(j, q, b, b) = R.transpose();
      j = q;
    }

    const Eigen::SelfAdjointEigenSolver<Matrix> es(H.topLeftCorner(j, j));
    const Vector &theta = es.eigenvalues();
    std::vector<Index> order(static_cast<std::size_t>(j));
    std::iota(order.begin(), order.end(), Index{0});
    if (which == Which::largest_magnitude) {
      std::stable_sort(order.begin(), order.end(), [&](Index a, Index c) {
        return std::abs(theta[a]) > std::abs(theta[c]);
      });
    } // eigenvalues already ascending for smallest_algebraic

    Matrix Y(j, j);
    Vector th(j);
    for (Index i = 0; i < j; ++i) {
      Y.col(i) = es.eigenvectors().col(order[static_cast<std::size_t>(i)]);
      th[i] = theta[order[static_cast<std::size_t>(i)]];
    }
    const Matrix E = H.block(j, 0, b, j);
    const Matrix EY = E * Y;
    Vector rn(j);
    for (Index i = 0; i < j; ++i) rn[i] = EY.col(i).norm();

    bool done = true;
    for (Index i = 0; i < nev; ++i)
      if (!(rn[i] <= tol_of(th[i]))) { done = false; break; }

    if (done || restart >= max_restarts) {
      out.converged = done;
      out.restarts = restart;
      out.theta = th.head(nev);
      out.rnorm = rn.head(nev);
      out.X = V.leftCols(j) * Y.leftCols(nev);
      return out;
    }

    const Index p = std::min<Index>(j - b, nev + (j - nev) / 2);
    Matrix kept = V.leftCols(j) * Y.leftCols(p);
    const Matrix next = V.middleCols(j, b);
    V.leftCols(p) = kept;
    V.middleCols(p, b) = next;
    H.setZero();
    H.topLeftCorner(p, p).diagonal() = th.head(p);
    H.block(p, 0, b, p) = EY.leftCols(p);
    H.block(0, p, p, b) = EY.leftCols(p).transpose();
    j = p;
  }
}

ColSparse to_col_sparse(const SparseOperator &op) {
  ColSparse A(op.matrix().rows(), op.matrix().cols());
  std::vector<Eigen::Triplet<double, int>> t;
  t.reserve(op.nonzeros() + op.dimension());
  const auto &M = op.matrix();
  for (Index r = 0; r < M.outerSize(); ++r)
    for (CsrMatrix::InnerIterator it(M, r); it; ++it)
      t.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  // make sure every diagonal slot exists so that shifting never changes the pattern
  for (Index i = 0; i < M.rows(); ++i) t.emplace_back(static_cast<int>(i), static_cast<int>(i), 0.0);
  A.setFromTriplets(t.begin(), t.end());
  A.makeCompressed();
  return A;
}

// Shifted sparse LDL^T with a reusable symbolic analysis.
class ShiftedFactor {
public:
  explicit ShiftedFactor(const SparseOperator &op) : base_(to_col_sparse(op)) {
    shifted_ = base_;
    solver_.analyzePattern(shifted_);
  }

  // Factor (A - shift I).  Returns false when a pivot is zero or non-finite.
  bool factor(double shift) {
    shifted_ = base_;
    for (Index i = 0; i < shifted_.rows(); ++i) shifted_.coeffRef(i, i) -= shift;
    solver_.factorize(shifted_);
    ++factorizations;
    if (solver_.info() != Eigen::Success) return false;
    const Vector &D = solver_.vectorD();
    const double dmax = D.cwiseAbs().maxCoeff();
    for (Index i = 0; i < D.size(); ++i)
      if (!std::isfinite(D[i]) || std::abs(D[i]) <= 1e-14 * dmax) return false;
    return true;
  }

  std::size_t negative_pivots() const {
    const Vector &D = solver_.vectorD();
    return static_cast<std::size_t>((D.array() < 0.0).count());
  }

  void solve(const Matrix &X, Matrix &Y) const { Y = solver_.solve(X); }

  std::size_t factorizations = 0;

private:
  ColSparse base_;
  ColSparse shifted_;
  Eigen::SimplicialLDLT<ColSparse, Eigen::Lower, Eigen::AMDOrdering<int>> solver_;
};

// Factor at `shift`, nudging it if it happens to sit on an eigenvalue.
double factor_near(ShiftedFactor &f, double shift, double scale) {
  double s = shift;
  for (int attempt = 0; attempt < 8; ++attempt) {
    if (f.factor(s)) return s;
    s = shift + (attempt % 2 ? -1.0 : 1.0) * 1e-9 * scale * static_cast<double>(1 << attempt);
  }
  throw ConvergenceError("could not factor shifted operator near " + std::to_string(shift), {});
}

double operator_scale(const SparseOperator &op) {
  const auto [lo, hi] = op.gershgorin();
  return std::max({std::abs(lo), std::abs(hi), 1.0});
}

Vector residuals_of(const SparseOperator &op, const Vector &lambda, const Matrix &X) {
  Vector r(lambda.size());
  Vector y(X.rows());
  for (Index i = 0; i < lambda.size(); ++i) {
    op.apply(X.col(i).data(), y.data());
    r[i] = (y - lambda[i] * X.col(i)).norm();
  }
  return r;
}

void sort_solution(EigenSolution &sol) {
  const Index k = sol.eigenvalues.size();
  std::vector<Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return sol.eigenvalues[a] < sol.eigenvalues[b];
  });
  EigenSolution s;
  s.eigenvalues.resize(k);
  s.residuals.resize(k);
  s.eigenvectors.resize(sol.eigenvectors.rows(), k);
  for (Index i = 0; i < k; ++i) {
    const Index o = order[static_cast<std::size_t>(i)];
    s.eigenvalues[i] = sol.eigenvalues[o];
    s.residuals[i] = sol.residuals.size() ? sol.residuals[o] : 0.0;
    if (sol.eigenvectors.cols()) s.eigenvectors.col(i) = sol.eigenvectors.col(o);
  }
  sol.eigenvalues = std::move(s.eigenvalues);
  sol.residuals = std::move(s.residuals);
  sol.eigenvectors = std::move(s.eigenvectors);
}

BlockApply operator_apply(const SparseOperator &op) {
  return [&op](const Matrix &X, Matrix &Y) {
    Y.resize(X.rows(), X.cols());
    for (Index c = 0; c < X.cols(); ++c) op.apply(X.col(c).data(), Y.col(c).data());
  };
}

EigenSolution solve_direct(const SparseOperator &op, std::size_t k,
                           const SolverOptions &opts) {
  const Index n = static_cast<Index>(op.dimension());
  const Index b = static_cast<Index>(std::max<std::size_t>(opts.block_size, 1));
  std::mt19937_64 rng(opts.seed);
  const double tol = opts.tol;
  auto res = krylov_schur(operator_apply(op), n, static_cast<Index>(k),
                          Which::smallest_algebraic,
                          [tol](double) { return 0.5 * tol; }, b,
                          opts.max_restarts, rng);
  EigenSolution sol;
  sol.eigenvalues = res.theta;
  sol.eigenvectors = res.X;
  sol.stats.applications = res.applications;
  sol.stats.restarts = res.restarts;
  sort_solution(sol);
  sol.residuals = residuals_of(op, sol.eigenvalues, sol.eigenvectors);
  if (!res.converged || (sol.residuals.array() > tol).any()) {
    throw ConvergenceError("direct Lanczos did not reach tolerance after " +
                               std::to_string(res.restarts) + " restarts",
                           sol);
  }
  return sol;
}

// All eigenpairs in [lo, hi) given that there are exactly `count` of them.
EigenSolution solve_slice(const SparseOperator &op, ShiftedFactor &f,
                          double lo, double hi, std::size_t count,
                          const SolverOptions &opts, std::mt19937_64 &rng,
                          double scale, SolverStats &stats) {
  const Index n = static_cast<Index>(op.dimension());
  const Index b = static_cast<Index>(std::max<std::size_t>(opts.block_size, 1));
  const double sigma = factor_near(f, 0.5 * (lo + hi), scale);
  const double norm_shifted = scale + std::abs(sigma);

  EigenSolution best;
  double tol = opts.tol;
  for (int attempt = 0; attempt < 3; ++attempt, tol *= 0.01) {
    const double inner = tol;
    auto res = krylov_schur(
        [&f](const Matrix &X, Matrix &Y) { f.solve(X, Y); }, n,
        static_cast<Index>(count), Which::largest_magnitude,
        [inner, norm_shifted](double th) { return 0.1 * inner * std::abs(th) / norm_shifted; },
        b, opts.max_restarts, rng);
    stats.applications += res.applications;
    stats.restarts += res.restarts;

    EigenSolution sol;
    sol.eigenvalues = (1.0 / res.theta.array()).matrix() + Vector::Constant(res.theta.size(), sigma);
    sol.eigenvectors = std::move(res.X);
    // Rayleigh quotients are more accurate than the back-transformed values.
    Vector y(n);
    for (Index i = 0; i < sol.eigenvalues.size(); ++i) {
      sol.eigenvectors.col(i).normalize();
      op.apply(sol.eigenvectors.col(i).data(), y.data());
      sol.eigenvalues[i] = sol.eigenvectors.col(i).dot(y);
    }
    sort_solution(sol);
    sol.residuals = residuals_of(op, sol.eigenvalues, sol.eigenvectors);
    stats.slices.push_back({lo, hi, sigma, count, res.restarts});

    const bool inside = sol.eigenvalues.size() == 0 ||
                        (sol.eigenvalues[0] >= lo - opts.tol &&
                         sol.eigenvalues[sol.eigenvalues.size() - 1] < hi + opts.tol);
    if (res.converged && inside && (sol.residuals.array() <= opts.tol).all()) return sol;
    best = std::move(sol);
  }
  std::ostringstream msg;
  msg << "shift-invert slice [" << lo << ", " << hi << ") failed to converge";
  throw ConvergenceError(msg.str(), best);
}

// Lower bound strictly below the smallest eigenvalue, verified by inertia.
double spectrum_floor(const SparseOperator &op, ShiftedFactor &f,
                      const SolverOptions &opts, double scale) {
  const Index n = static_cast<Index>(op.dimension());
  std::mt19937_64 rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
  // A crude Ritz value from a short unrestarted run.
  auto res = krylov_schur(operator_apply(op), n, 1, Which::smallest_algebraic,
                          [](double) { return std::numeric_limits<double>::infinity(); },
                          1, 0, rng);
  double a = res.theta[0] - 1e-3 * scale;
  for (int it = 0; it < 64; ++it) {
    a = factor_near(f, a, scale);
    if (f.negative_pivots() == 0) return a;
    a -= std::ldexp(1e-2 * scale, it);
  }
  throw ConvergenceError("could not bracket the bottom of the spectrum", {});
}

struct SlicePart {
  std::size_t sector = 0;
  EigenSolution sol;
};

// Spectrum slicing over one or more independent operators (symmetry sectors)
// sharing the same energy boundaries.  `emit` receives, per energy slice
// [a, b), every sector's eigenpairs in that slice.
template <class Emit>
SolverStats slice_lowest(const std::vector<const SparseOperator *> &ops, std::size_t k,
                         const SolverOptions &opts, Emit &&emit) {
  const std::size_t S = ops.size();
  std::vector<std::unique_ptr<ShiftedFactor>> f;
  std::vector<double> scale(S);
  double a = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < S; ++s) {
    f.push_back(std::make_unique<ShiftedFactor>(*ops[s]));
    scale[s] = operator_scale(*ops[s]);
    a = std::min(a, spectrum_floor(*ops[s], *f[s], opts, scale[s]));
  }
  const double global_scale = *std::max_element(scale.begin(), scale.end());
  std::mt19937_64 rng(opts.seed);
  SolverStats stats;
  const std::size_t target = std::max<std::size_t>(opts.slice_target, 8) * S;

  // Factor every sector at exactly the same shift, nudging it off eigenvalues.
  std::vector<std::size_t> below_b(S);
  auto count_below = [&](double shift) {
    for (int attempt = 0; attempt < 8; ++attempt) {
      bool ok = true;
      for (std::size_t s = 0; s < S && ok; ++s) {
        ok = f[s]->factor(shift);
        if (ok) below_b[s] = f[s]->negative_pivots();
      }
      if (ok) return shift;
      shift += (attempt % 2 ? -1.0 : 1.0) * 1e-9 * global_scale * static_cast<double>(1 << attempt);
    }
    throw ConvergenceError("could not factor shifted operator near " + std::to_string(shift), {});
  };

  std::vector<std::size_t> below_a(S, 0);
  std::size_t found = 0;
  double width = 1e-3 * global_scale;

  while (found < k) {
    // Choose b with a comfortable number of eigenvalues in [a, b); once the
    // count has been seen on both sides of the window, bisect.
    double b = 0.0;
    std::size_t count = 0;
    double too_small = a;
    double too_big = std::numeric_limits<double>::infinity();
    bool sized = false;
    for (int it = 0; it < 80; ++it) {
      const double trial = std::isfinite(too_big) && too_small > a
                               ? 0.5 * (too_small + too_big)
                               : std::isfinite(too_big) ? a + 0.5 * (too_big - a) : a + width;
      b = count_below(trial);
      count = 0;
      for (std::size_t s = 0; s < S; ++s) count += below_b[s] - below_a[s];
      const bool last = found + count >= k;
      if (count > 2 * target) {
        too_big = b;
        width = b - a;
        continue;
      }
      if (count < target / 2 && !last) {
        too_small = b;
        width = count == 0 ? 4.0 * (b - a)
                           : (b - a) * std::min(4.0, static_cast<double>(target) / static_cast<double>(count));
        if (std::isfinite(too_big)) width = std::min(width, too_big - a);
        continue;
      }
      sized = true;
      break;
    }
    if (!sized) throw ConvergenceError("spectrum slicing could not size a slice", {});
    const std::vector<std::size_t> upper = below_b;
    std::vector<SlicePart> parts;
    for (std::size_t s = 0; s < S; ++s) {
      const std::size_t m = upper[s] - below_a[s];
      if (m == 0) continue;
      parts.push_back({s, solve_slice(*ops[s], *f[s], a, b, m, opts, rng, scale[s], stats)});
    }
    found += count;
    if (!parts.empty()) emit(std::move(parts));
    below_a = upper;
    if (count > 0)
      width = (b - a) * std::clamp(static_cast<double>(target) / static_cast<double>(count), 0.5, 2.0);
    a = b;
  }
  for (const auto &fs : f) stats.factorizations += fs->factorizations;
  return stats;
}

bool use_slicing(const SparseOperator &op, std::size_t k, const SolverOptions &opts) {
  switch (opts.mode) {
  case SolverMode::direct: return false;
  case SolverMode::shift_invert: return true;
  case SolverMode::automatic: break;
  }
  return op.dimension() > opts.direct_limit && k > 0;
}

void check_request(const SparseOperator &op, std::size_t k, const SolverOptions &opts) {
  if (k == 0) throw InvalidParameter("k must be positive");
  if (k > op.dimension()) throw InvalidParameter("k exceeds the operator dimension");
  if (!(opts.tol > 0.0)) throw InvalidParameter("tol must be positive");
  if (opts.block_size == 0) throw InvalidParameter("block_size must be positive");
}

bool needs_dense(const SparseOperator &op, std::size_t k, const SolverOptions &opts) {
  const std::size_t b = opts.block_size;
  return op.dimension() <= opts.direct_limit || op.dimension() < 2 * k + 10 * b;
}

} // namespace

EigenSolution solve_lowest(const SparseOperator &op, std::size_t k,
                           const SolverOptions &opts) {
  check_request(op, k, opts);
  const auto t0 = Clock::now();
  EigenSolution sol;
  if (needs_dense(op, k, opts)) {
    sol = dense_oracle(op, k, std::max<std::size_t>(op.dimension(), 1));
  } else if (!use_slicing(op, k, opts)) {
    sol = solve_direct(op, k, opts);
  } else {
    std::vector<EigenSolution> parts;
    sol.stats = slice_lowest({&op}, k, opts, [&](std::vector<SlicePart> p) {
      parts.push_back(std::move(p.front().sol));
    });
    const Index n = static_cast<Index>(op.dimension());
    sol.eigenvalues.resize(static_cast<Index>(k));
    sol.residuals.resize(static_cast<Index>(k));
    sol.eigenvectors.resize(n, static_cast<Index>(k));
    Index at = 0;
    for (const auto &p : parts) {
      const Index take = std::min<Index>(p.eigenvalues.size(), static_cast<Index>(k) - at);
      sol.eigenvalues.segment(at, take) = p.eigenvalues.head(take);
      sol.residuals.segment(at, take) = p.residuals.head(take);
      sol.eigenvectors.middleCols(at, take) = p.eigenvectors.leftCols(take);
      at += take;
    }
  }
  sol.stats.seed = opts.seed;
  sol.stats.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return sol;
}

EigenSolution solve_lowest_streaming(const SparseOperator &op, std::size_t k,
                                     const SolverOptions &opts,
                                     const SymmetryReduction *reduction,
                                     const SliceSink &sink) {
  check_request(op, k, opts);
  if (reduction && reduction->full_dimension() != op.dimension())
    throw InvalidParameter("symmetry reduction does not match the operator");
  const auto t0 = Clock::now();
  static const std::vector<std::vector<std::size_t>> no_reflections;
  const auto &reflections = reduction ? reduction->reflections() : no_reflections;

  EigenSolution out;
  std::vector<double> values;
  std::vector<double> resid;
  auto deliver = [&](EigenSolution s) {
    sort_solution(s);
    const Index keep = std::min<Index>(s.eigenvalues.size(), static_cast<Index>(k - values.size()));
    if (keep < s.eigenvalues.size()) {
      s.eigenvalues.conservativeResize(keep);
      s.residuals.conservativeResize(keep);
      s.eigenvectors.conservativeResize(Eigen::NoChange, keep);
    }
    canonicalize(s, op, reflections, opts.cluster_tol);
    for (Index i = 0; i < s.eigenvalues.size(); ++i) {
      values.push_back(s.eigenvalues[i]);
      resid.push_back(s.residuals[i]);
    }
    sink(s);
  };

  if (needs_dense(op, k, opts) || !use_slicing(op, k, opts)) {
    EigenSolution s = solve_lowest(op, k, opts);
    out.stats = s.stats;
    deliver(std::move(s));
  } else {
    std::vector<const SparseOperator *> ops;
    if (reduction && reduction->sector_count() > 1) {
      for (std::size_t s = 0; s < reduction->sector_count(); ++s) ops.push_back(&reduction->sector(s));
    } else {
      ops.push_back(&op);
    }
    const bool reduced = ops.size() > 1;
    out.stats = slice_lowest(ops, k, opts, [&](std::vector<SlicePart> parts) {
      if (values.size() >= k) return;
      EigenSolution merged;
      Index total = 0;
      for (const auto &p : parts) total += p.sol.eigenvalues.size();
      merged.eigenvalues.resize(total);
      merged.residuals.resize(total);
      merged.eigenvectors.resize(static_cast<Index>(op.dimension()), total);
      Index at = 0;
      for (const auto &p : parts) {
        const Index m = p.sol.eigenvalues.size();
        merged.eigenvalues.segment(at, m) = p.sol.eigenvalues;
        merged.residuals.segment(at, m) = p.sol.residuals;
        merged.eigenvectors.middleCols(at, m) =
            reduced ? reduction->expand_columns(p.sector, p.sol.eigenvectors) : p.sol.eigenvectors;
        at += m;
      }
      deliver(std::move(merged));
    });
  }
  out.eigenvalues = Eigen::Map<Vector>(values.data(), static_cast<Index>(values.size()));
  out.residuals = Eigen::Map<Vector>(resid.data(), static_cast<Index>(resid.size()));
  out.stats.seed = opts.seed;
  out.stats.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return out;
}

EigenSolution solve_lowest_generalized(const SparseOperator &A,
                                       const SparseOperator &W, std::size_t k,
                                       const SolverOptions &opts) {
  if (A.dimension() != W.dimension()) throw InvalidParameter("A and W dimensions differ");
  if (!W.is_diagonal()) throw InvalidWeight("weight operator must be diagonal");
  const Vector w = W.diagonal();
  for (Index i = 0; i < w.size(); ++i)
    if (!(w[i] > 0.0)) throw InvalidWeight("weight operator must be positive definite");
  const Vector s = w.cwiseSqrt().cwiseInverse();

  std::vector<SparseOperator::Triplet> upper;
  upper.reserve(A.nonzeros() / 2 + A.dimension());
  const auto &M = A.matrix();
  for (Index r = 0; r < M.outerSize(); ++r)
    for (CsrMatrix::InnerIterator it(M, r); it; ++it)
      if (it.col() >= it.row())
        upper.push_back({static_cast<std::size_t>(it.row()), static_cast<std::size_t>(it.col()),
                         it.value() * (s[it.row()] * s[it.col()])});
  const SparseOperator C = SparseOperator::from_upper(A.grid(), A.dimension(), std::move(upper),
                                                      A.measure(), A.metadata());
  EigenSolution sol = solve_lowest(C, k, opts);
  // residual of the symmetrized problem equals ||A x - lambda W x||_{W^-1}
  sol.eigenvectors = s.asDiagonal() * sol.eigenvectors;
  return sol;
}

EigenSolution dense_oracle(const Matrix &A, std::size_t k, std::size_t max_dimension) {
  if (A.rows() != A.cols()) throw InvalidParameter("dense oracle needs a square matrix");
  if (static_cast<std::size_t>(A.rows()) > max_dimension)
    throw InvalidParameter("dense oracle dimension cap exceeded");
  k = std::min<std::size_t>(k, static_cast<std::size_t>(A.rows()));
  const Eigen::SelfAdjointEigenSolver<Matrix> es(A);
  EigenSolution sol;
  const Index kk = static_cast<Index>(k);
  sol.eigenvalues = es.eigenvalues().head(kk);
  sol.eigenvectors = es.eigenvectors().leftCols(kk);
  sol.residuals.resize(kk);
  for (Index i = 0; i < kk; ++i)
    sol.residuals[i] = (A * sol.eigenvectors.col(i) - sol.eigenvalues[i] * sol.eigenvectors.col(i)).norm();
  return sol;
}

EigenSolution dense_oracle(const SparseOperator &op, std::size_t k, std::size_t max_dimension) {
  if (op.dimension() > max_dimension) throw InvalidParameter("dense oracle dimension cap exceeded");
  return dense_oracle(op.to_dense(), k, max_dimension);
}

EigenSolution dense_oracle_generalized(const Matrix &A, const Matrix &W, std::size_t k,
                                       std::size_t max_dimension) {
  if (static_cast<std::size_t>(A.rows()) > max_dimension)
    throw InvalidParameter("dense oracle dimension cap exceeded");
  const Eigen::LLT<Matrix> llt(W);
  if (llt.info() != Eigen::Success) throw InvalidWeight("weight matrix is not positive definite");
  const Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(A, W);
  k = std::min<std::size_t>(k, static_cast<std::size_t>(A.rows()));
  const Index kk = static_cast<Index>(k);
  EigenSolution sol;
  sol.eigenvalues = es.eigenvalues().head(kk);
  sol.eigenvectors = es.eigenvectors().leftCols(kk);
  sol.residuals.resize(kk);
  const Vector winv = W.diagonal().cwiseInverse().cwiseSqrt();
  for (Index i = 0; i < kk; ++i) {
    const Vector r = A * sol.eigenvectors.col(i) - sol.eigenvalues[i] * (W * sol.eigenvectors.col(i));
    sol.residuals[i] = r.cwiseProduct(winv).norm();
  }
  return sol;
}

std::size_t count_eigenvalues_below(const SparseOperator &op, double shift) {
  ShiftedFactor f(op);
  factor_near(f, shift, operator_scale(op));
  return f.negative_pivots();
}

void canonicalize(EigenSolution &sol, const SparseOperator &op,
                  const std::vector<std::vector<std::size_t>> &reflections,
                  double cluster_tol) {
  const Index k = sol.eigenvalues.size();
  Matrix &V = sol.eigenvectors;
  if (V.cols() != k || k == 0) return;
  const Index n = V.rows();

  auto reflect = [&](const std::vector<std::size_t> &p, const Eigen::Ref<const Vector> &v) {
    Vector out(n);
    for (Index i = 0; i < n; ++i) out[i] = v[static_cast<Index>(p[static_cast<std::size_t>(i)])];
    return out;
  };

  Index start = 0;
  while (start < k) {
    Index end = start + 1;
    const double resid_scale = sol.residuals.size() ? sol.residuals.segment(start, 1).maxCoeff() : 0.0;
    while (end < k) {
      const double tol = cluster_tol * std::max(1.0, std::abs(sol.eigenvalues[end])) +
                         10.0 * std::max(resid_scale, sol.residuals.size() ? sol.residuals[end] : 0.0);
      if (sol.eigenvalues[end] - sol.eigenvalues[end - 1] > tol) break;
      ++end;
    }
    const Index c = end - start;
    if (c > 1 && !reflections.empty()) {
      // Combined symmetry label: distinct weights per reflection keep the
      // sectors apart (eigenvalues of sum_r 2^r P_r).
      Matrix Vc = V.middleCols(start, c);
      Matrix M = Matrix::Zero(c, c);
      for (std::size_t r = 0; r < reflections.size(); ++r) {
        Matrix PV(n, c);
        for (Index j = 0; j < c; ++j) PV.col(j) = reflect(reflections[r], Vc.col(j));
        M += std::ldexp(1.0, static_cast<int>(r)) * (Vc.transpose() * PV);
      }
      M = 0.5 * (M + M.transpose());
      const Eigen::SelfAdjointEigenSolver<Matrix> ms(M);
      const Matrix U = Vc * ms.eigenvectors();
      // Rayleigh-Ritz inside each symmetry sector.
      Matrix HU(n, c);
      for (Index j = 0; j < c; ++j) op.apply(U.col(j).data(), HU.col(j).data());
      Index s0 = 0;
      Matrix out(n, c);
      Vector vals(c);
      while (s0 < c) {
        Index s1 = s0 + 1;
        while (s1 < c && std::abs(ms.eigenvalues()[s1] - ms.eigenvalues()[s0]) < 0.25) ++s1;
        const Index w = s1 - s0;
        Matrix G = U.middleCols(s0, w).transpose() * HU.middleCols(s0, w);
        G = 0.5 * (G + G.transpose());
        const Eigen::SelfAdjointEigenSolver<Matrix> gs(G);
        out.middleCols(s0, w) = U.middleCols(s0, w) * gs.eigenvectors();
        vals.segment(s0, w) = gs.eigenvalues();
        s0 = s1;
      }
      for (Index j = 0; j < c; ++j) {
        out.col(j).normalize();
        V.col(start + j) = out.col(j);
        sol.eigenvalues[start + j] = vals[j];
      }
    }
    // Sign and order.
    std::vector<std::pair<double, Index>> keys;
    for (Index j = start; j < end; ++j) {
      Index imax = 0;
      V.col(j).cwiseAbs().maxCoeff(&imax);
      // ties resolve to the lowest index because maxCoeff keeps the first hit
      if (V(imax, j) < 0.0) V.col(j) = -V.col(j);
      keys.emplace_back(sol.eigenvalues[j], imax);
    }
    if (c > 1) {
      std::vector<Index> order(static_cast<std::size_t>(c));
      std::iota(order.begin(), order.end(), Index{0});
      std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        const auto &ka = keys[static_cast<std::size_t>(a)];
        const auto &kb = keys[static_cast<std::size_t>(b)];
        if (ka.first != kb.first) return ka.first < kb.first;
        return ka.second < kb.second;
      });
      const Matrix Vc = V.middleCols(start, c);
      const Vector ev = sol.eigenvalues.segment(start, c);
      for (Index j = 0; j < c; ++j) {
        V.col(start + j) = Vc.col(order[static_cast<std::size_t>(j)]);
        sol.eigenvalues[start + j] = ev[order[static_cast<std::size_t>(j)]];
      }
    }
    start = end;
  }
  sol.residuals = residuals_of(op, sol.eigenvalues, V);
}

Vector residual_norms(const SparseOperator &op, const EigenSolution &sol) {
  return residuals_of(op, sol.eigenvalues, sol.eigenvectors);
}

double orthonormality_defect(const Matrix &V) {
  const Matrix G = V.transpose() * V;
  return (G - Matrix::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
}

} // namespace qcs
