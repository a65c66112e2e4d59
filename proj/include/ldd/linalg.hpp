#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ldd {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Square or rectangular sparse matrix in compressed row storage.
/// Column indices are strictly increasing within each row.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  /// Builds a CSR matrix from (row, col, value) triplets; duplicate
  /// entries are summed.
  static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> entries);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::span<const int> row_offsets() const { return row_offsets_; }
  std::span<const int> col_indices() const { return col_indices_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;

  double entry(int row, int col) const;

  /// Max absolute relative asymmetry |A_ij - A_ji| / max|A|; 0 for empty.
  double symmetry_defect() const;

  /// Zeroes row and column `dof`, sets the diagonal to 1. Used for
  /// Dirichlet elimination; the RHS correction is the caller's job.
  void eliminate_symmetric(int dof);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_offsets_;
  std::vector<int> col_indices_;
  std::vector<double> values_;
};

/// Zero fill-in incomplete LU factors stored on the pattern of the
/// source matrix, unit lower-triangular convention for L.
class IluPreconditioner {
 public:
  /// Returns std::nullopt if a zero pivot is encountered; the caller is
  /// expected to fall back to an unpreconditioned solve.
  static std::optional<IluPreconditioner> factor(const SparseMatrix& a);

  /// z = (LU)^{-1} r
  void apply(std::span<const double> r, std::span<double> z) const;

  const SparseMatrix& factors() const { return lu_; }

 private:
  SparseMatrix lu_;
  std::vector<int> diag_pos_;
};

struct LinearSolveOptions {
  double rel_tol = 1e-10;
  int restart = 30;
  int max_iters = 2000;
};

struct LinearSolveResult {
  std::vector<double> x;
  double rel_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  bool breakdown = false;
  /// Residual norms per inner iteration (monotone for GMRES).
  std::vector<double> residual_history;
};

/// Restarted GMRES with optional right ILU preconditioning; the reported
/// residual is the true residual ||b - Ax|| / ||b||.
LinearSolveResult gmres(const SparseMatrix& a, std::span<const double> b,
                        const IluPreconditioner* precond, const LinearSolveOptions& opts);

/// Preconditioned conjugate gradients for SPD systems.
LinearSolveResult conjugate_gradient(const SparseMatrix& a, std::span<const double> b,
                                     const IluPreconditioner* precond,
                                     const LinearSolveOptions& opts);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace ldd
