#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dnapl
{

/// Compressed sparse row matrix with sorted column indices in each row.
struct SparseMatrix
{
  std::size_t rows = 0;
  std::vector<std::size_t> row_start;  // rows + 1 entries
  std::vector<std::size_t> column;
  std::vector<double> value;

  std::size_t nonzeros() const { return value.size(); }
  /// Position of entry (r, c) in `value`, or npos if not stored.
  std::size_t find(std::size_t r, std::size_t c) const;
  void multiply(std::span<const double> x, std::span<double> y) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Builds a CSR pattern from (row, col) pairs; duplicate entries are merged.
SparseMatrix make_pattern(std::size_t rows,
                          std::span<const std::pair<std::size_t, std::size_t>> entries);

enum class Preconditioner
{
  None,
  Jacobi,
  IncompleteCholesky
};

struct SolverOptions
{
  double tolerance = 1e-10;  // on ||b - Ax|| / ||b||
  int max_iterations = 5000;
  Preconditioner preconditioner = Preconditioner::IncompleteCholesky;
  /// Modification weight for the incomplete Cholesky factor (0 = IC(0),
  /// 1 = fully modified).
  double modification = 0.97;
};

struct SolveReport
{
  int iterations = 0;
  double relative_residual = 0.0;
  std::vector<double> residual_history;
};

class SolverError : public std::runtime_error
{
 public:
  SolverError(const std::string &what, std::vector<double> history)
      : std::runtime_error(what), history_(std::move(history))
  {
  }
  const std::vector<double> &residual_history() const { return history_; }

 private:
  std::vector<double> history_;
};

/// Modified incomplete Cholesky factor with zero fill, stored as unit-lower L
/// and upper U on the pattern of the matrix it was built from. It stays a
/// valid preconditioner for later matrices with the same pattern.
class IncompleteFactor
{
 public:
  IncompleteFactor(const SparseMatrix &a, double modification);

  /// z = (LU)^-1 r
  void apply(std::span<const double> r, std::span<double> z) const;
  bool matches(const SparseMatrix &a) const
  {
    return a.rows == rows_ && a.column.size() == column_.size();
  }

 private:
  std::size_t rows_ = 0;
  std::vector<std::size_t> row_start_;
  std::vector<std::size_t> column_;
  std::vector<std::size_t> diag_;
  std::vector<double> lu_;
};

/// Preconditioned conjugate gradients for a symmetric positive definite
/// matrix. `x` holds the initial guess on entry and the solution on exit.
/// With the incomplete Cholesky preconditioner, `factor` is used if given
/// (it may come from an earlier matrix with the same pattern).
/// Throws SolverError if the tolerance is not met within max_iterations.
SolveReport conjugate_gradient(const SparseMatrix &a, std::span<const double> b,
                               std::span<double> x, const SolverOptions &options = {},
                               const IncompleteFactor *factor = nullptr);

/// Dense LU with partial pivoting; intended for small systems and test oracles.
std::vector<double> solve_dense(const SparseMatrix &a, std::span<const double> b);

double relative_residual(const SparseMatrix &a, std::span<const double> b,
                         std::span<const double> x);

}  // namespace dnapl
