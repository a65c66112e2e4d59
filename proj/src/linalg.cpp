#include "ldd/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ldd {

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::vector<Triplet> entries) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw std::invalid_argument("triplet index out of range");
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  SparseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_offsets_.assign(rows + 1, 0);
  m.col_indices_.reserve(entries.size());
  m.values_.reserve(entries.size());
  std::size_t i = 0;
  for (int r = 0; r < rows; ++r) {
    while (i < entries.size() && entries[i].row == r) {
      double v = entries[i].value;
      int c = entries[i].col;
      ++i;
      while (i < entries.size() && entries[i].row == r && entries[i].col == c) {
        v += entries[i].value;
        ++i;
      }
      m.col_indices_.push_back(c);
      m.values_.push_back(v);
    }
    m.row_offsets_[r + 1] = static_cast<int>(m.col_indices_.size());
  }
  return m;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  assert(static_cast<int>(x.size()) == cols_ && static_cast<int>(y.size()) == rows_);
  for (int r = 0; r < rows_; ++r) {
    double acc = 0.0;
    for (int j = row_offsets_[r]; j < row_offsets_[r + 1]; ++j)
      acc += values_[j] * x[col_indices_[j]];
    y[r] = acc;
  }
}

double SparseMatrix::entry(int row, int col) const {
  for (int j = row_offsets_[row]; j < row_offsets_[row + 1]; ++j)
    if (col_indices_[j] == col) return values_[j];
  return 0.0;
}

double SparseMatrix::symmetry_defect() const {
  double scale = 0.0;
  for (double v : values_) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  double defect = 0.0;
  for (int r = 0; r < rows_; ++r)
    for (int j = row_offsets_[r]; j < row_offsets_[r + 1]; ++j)
      defect = std::max(defect, std::abs(values_[j] - entry(col_indices_[j], r)));
  return defect / scale;
}

void SparseMatrix::eliminate_symmetric(int dof) {
  for (int r = 0; r < rows_; ++r) {
    for (int j = row_offsets_[r]; j < row_offsets_[r + 1]; ++j) {
      if (r == dof || col_indices_[j] == dof)
        values_[j] = (r == dof && col_indices_[j] == dof) ? 1.0 : 0.0;
    }
  }
}

std::optional<IluPreconditioner> IluPreconditioner::factor(const SparseMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("ilu0 expects a square matrix");
  const int n = a.rows();
  IluPreconditioner p;
  p.lu_ = a;
  p.diag_pos_.assign(n, -1);
  auto offs = p.lu_.row_offsets();
  auto cols = p.lu_.col_indices();
  auto vals = p.lu_.values();
  for (int r = 0; r < n; ++r)
    for (int j = offs[r]; j < offs[r + 1]; ++j)
      if (cols[j] == r) p.diag_pos_[r] = j;
  for (int r = 0; r < n; ++r)
    if (p.diag_pos_[r] < 0) return std::nullopt;  // structurally zero diagonal

  // IKJ variant restricted to the pattern of A.
  for (int i = 1; i < n; ++i) {
    for (int jj = offs[i]; jj < offs[i + 1] && cols[jj] < i; ++jj) {
      const int k = cols[jj];
      const double pivot = vals[p.diag_pos_[k]];
      if (pivot == 0.0) return std::nullopt;
      const double lik = vals[jj] / pivot;
      vals[jj] = lik;
      // subtract lik * U(k, j) for j in pattern of row i, j > k
      int kp = p.diag_pos_[k] + 1;
      int ip = jj + 1;
      while (kp < offs[k + 1] && ip < offs[i + 1]) {
        if (cols[kp] < cols[ip]) {
          ++kp;
        } else if (cols[kp] > cols[ip]) {
          ++ip;
        } else {
          vals[ip] -= lik * vals[kp];
          ++kp;
          ++ip;
        }
      }
    }
    if (vals[p.diag_pos_[i]] == 0.0) return std::nullopt;
  }
  return p;
}

void IluPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
  const int n = lu_.rows();
  assert(static_cast<int>(r.size()) == n && static_cast<int>(z.size()) == n);
  auto offs = lu_.row_offsets();
  auto cols = lu_.col_indices();
  auto vals = lu_.values();
  // forward solve L y = r (unit diagonal)
  for (int i = 0; i < n; ++i) {
    double acc = r[i];
    for (int j = offs[i]; j < offs[i + 1] && cols[j] < i; ++j) acc -= vals[j] * z[cols[j]];
    z[i] = acc;
  }
  // backward solve U z = y
  for (int i = n - 1; i >= 0; --i) {
    double acc = z[i];
    int dj = -1;
    for (int j = offs[i + 1] - 1; j >= offs[i] && cols[j] >= i; --j) {
      if (cols[j] == i)
        dj = j;
      else
        acc -= vals[j] * z[cols[j]];
    }
    z[i] = acc / vals[dj];
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

namespace {

void apply_precond(const IluPreconditioner* m, std::span<const double> r, std::span<double> z) {
  if (m)
    m->apply(r, z);
  else
    std::copy(r.begin(), r.end(), z.begin());
}

}  // namespace

LinearSolveResult gmres(const SparseMatrix& a, std::span<const double> b,
                        const IluPreconditioner* precond, const LinearSolveOptions& opts) {
  if (a.rows() != a.cols()) throw std::invalid_argument("gmres expects a square matrix");
  if (static_cast<int>(b.size()) != a.rows()) throw std::invalid_argument("rhs size mismatch");
  if (!(opts.rel_tol > 0.0 && opts.rel_tol < 1.0)) throw std::invalid_argument("rel_tol must be in (0,1)");

  const int n = a.rows();
  LinearSolveResult result;
  result.x.assign(n, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    result.converged = true;
    return result;
  }

  const int m = std::max(1, std::min(opts.restart, n));
  std::vector<std::vector<double>> v(m + 1, std::vector<double>(n, 0.0));
  std::vector<std::vector<double>> h(m + 1, std::vector<double>(m, 0.0));
  std::vector<double> cs(m, 0.0), sn(m, 0.0), gamma(m + 1, 0.0);
  std::vector<double> w(n, 0.0), z(n, 0.0);

  int total_iters = 0;
  double best_res = std::numeric_limits<double>::max();
  std::vector<double> best_x = result.x;

  while (total_iters < opts.max_iters) {
    // r0 = b - A x (true residual, right preconditioning)
    a.multiply(result.x, w);
    for (int i = 0; i < n; ++i) v[0][i] = b[i] - w[i];
    double beta = norm2(v[0]);
    if (beta / bnorm <= opts.rel_tol) {
      result.converged = true;
      result.rel_residual = beta / bnorm;
      result.iterations = total_iters;
      return result;
    }
    for (int i = 0; i < n; ++i) v[0][i] /= beta;
    std::fill(gamma.begin(), gamma.end(), 0.0);
    gamma[0] = beta;

    int k = 0;
    bool happy = false;
    for (; k < m && total_iters < opts.max_iters; ++k, ++total_iters) {
      apply_precond(precond, v[k], z);
      a.multiply(z, w);
      // modified Gram-Schmidt
      for (int j = 0; j <= k; ++j) {
        h[j][k] = dot(w, v[j]);
        for (int i = 0; i < n; ++i) w[i] -= h[j][k] * v[j][i];
      }
      h[k + 1][k] = norm2(w);
      if (h[k + 1][k] > 0.0)
        for (int i = 0; i < n; ++i) v[k + 1][i] = w[i] / h[k + 1][k];

      // apply previous Givens rotations to the new column
      for (int j = 0; j < k; ++j) {
        const double t = cs[j] * h[j][k] + sn[j] * h[j + 1][k];
        h[j + 1][k] = -sn[j] * h[j][k] + cs[j] * h[j + 1][k];
        h[j][k] = t;
      }
      const double denom = std::hypot(h[k][k], h[k + 1][k]);
      if (denom == 0.0) {  // numerical breakdown
        result.breakdown = true;
        break;
      }
      cs[k] = h[k][k] / denom;
      sn[k] = h[k + 1][k] / denom;
      h[k][k] = denom;
      gamma[k + 1] = -sn[k] * gamma[k];
      gamma[k] = cs[k] * gamma[k];
      result.residual_history.push_back(std::abs(gamma[k + 1]) / bnorm);
      if (h[k + 1][k] == 0.0) happy = true;  // happy breakdown: exact solution below
      if (std::abs(gamma[k + 1]) / bnorm <= opts.rel_tol || happy) {
        ++k;
        ++total_iters;
        break;
      }
    }

    // back substitution for the Hessenberg least squares problem
    std::vector<double> y(k, 0.0);
    for (int i = k - 1; i >= 0; --i) {
      double acc = gamma[i];
      for (int j = i + 1; j < k; ++j) acc -= h[i][j] * y[j];
      y[i] = acc / h[i][i];
    }
    std::fill(w.begin(), w.end(), 0.0);
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < n; ++i) w[i] += y[j] * v[j][i];
    apply_precond(precond, w, z);
    for (int i = 0; i < n; ++i) result.x[i] += z[i];

    a.multiply(result.x, w);
    double res = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = b[i] - w[i];
      res += d * d;
    }
    res = std::sqrt(res) / bnorm;
    result.rel_residual = res;
    result.iterations = total_iters;
    if (res < best_res) {
      best_res = res;
      best_x = result.x;
    }
    if (res <= opts.rel_tol) {
      result.converged = true;
      return result;
    }
    if (result.breakdown) break;
  }

  result.x = best_x;
  result.rel_residual = best_res;
  result.converged = best_res <= opts.rel_tol;
  return result;
}

LinearSolveResult conjugate_gradient(const SparseMatrix& a, std::span<const double> b,
                                     const IluPreconditioner* precond,
                                     const LinearSolveOptions& opts) {
  if (a.rows() != a.cols()) throw std::invalid_argument("cg expects a square matrix");
  const int n = a.rows();
  LinearSolveResult result;
  result.x.assign(n, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    result.converged = true;
    return result;
  }
  std::vector<double> r(b.begin(), b.end()), z(n, 0.0), p(n, 0.0), ap(n, 0.0);
  apply_precond(precond, r, z);
  p = z;
  double rz = dot(r, z);
  for (int it = 0; it < opts.max_iters; ++it) {
    a.multiply(p, ap);
    const double pap = dot(p, ap);
    if (pap <= 0.0) {
      result.breakdown = true;
      break;
    }
    const double alpha = rz / pap;
    for (int i = 0; i < n; ++i) {
      result.x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    const double res = norm2(r) / bnorm;
    result.residual_history.push_back(res);
    result.iterations = it + 1;
    result.rel_residual = res;
    if (res <= opts.rel_tol) {
      result.converged = true;
      return result;
    }
    apply_precond(precond, r, z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return result;
}

}  // namespace ldd
