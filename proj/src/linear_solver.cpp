#include <dnapl/linear_solver.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

namespace dnapl
{

std::size_t SparseMatrix::find(std::size_t r, std::size_t c) const
{
  const auto begin = column.begin() + static_cast<std::ptrdiff_t>(row_start[r]);
  const auto end = column.begin() + static_cast<std::ptrdiff_t>(row_start[r + 1]);
  const auto it = std::lower_bound(begin, end, c);
  if (it == end || *it != c)
    return npos;
  return static_cast<std::size_t>(it - column.begin());
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const
{
  for (std::size_t r = 0; r < rows; ++r)
  {
    double sum = 0.0;
    for (std::size_t p = row_start[r]; p < row_start[r + 1]; ++p)
      sum += value[p] * x[column[p]];
    y[r] = sum;
  }
}

SparseMatrix make_pattern(std::size_t rows,
                          std::span<const std::pair<std::size_t, std::size_t>> entries)
{
  std::vector<std::vector<std::size_t>> cols(rows);
  for (const auto &[r, c] : entries)
    cols[r].push_back(c);

  SparseMatrix m;
  m.rows = rows;
  m.row_start.assign(rows + 1, 0);
  for (std::size_t r = 0; r < rows; ++r)
  {
    auto &row = cols[r];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    m.row_start[r + 1] = m.row_start[r] + row.size();
    m.column.insert(m.column.end(), row.begin(), row.end());
  }
  m.value.assign(m.column.size(), 0.0);
  return m;
}

namespace
{

double dot(std::span<const double> a, std::span<const double> b)
{
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace

// Modified incomplete LU with zero fill; for a symmetric matrix this is the
// modified incomplete Cholesky factor.
IncompleteFactor::IncompleteFactor(const SparseMatrix &a, double omega)
    : rows_(a.rows), row_start_(a.row_start), column_(a.column), diag_(a.rows), lu_(a.value)
{
  const std::size_t n = a.rows;
  for (std::size_t r = 0; r < n; ++r)
    diag_[r] = a.find(r, r);

  for (std::size_t i = 0; i < n; ++i)
  {
    const std::size_t row_begin = row_start_[i];
    const std::size_t row_end = row_start_[i + 1];
    for (std::size_t p = row_begin; p < row_end && column_[p] < i; ++p)
    {
      const std::size_t k = column_[p];
      lu_[p] /= lu_[diag_[k]];
      const double lik = lu_[p];
      for (std::size_t q = diag_[k] + 1; q < row_start_[k + 1]; ++q)
      {
        const std::size_t j = column_[q];
        const double update = lik * lu_[q];
        // row i is tiny, linear scan is cheapest
        std::size_t hit = SparseMatrix::npos;
        for (std::size_t s = p + 1; s < row_end; ++s)
          if (column_[s] == j)
          {
            hit = s;
            break;
          }
        if (hit != SparseMatrix::npos)
          lu_[hit] -= update;
        else
          lu_[diag_[i]] -= omega * update;
      }
    }
    const double original = a.value[diag_[i]];
    if (!(lu_[diag_[i]] > 1e-12 * std::abs(original)))
      lu_[diag_[i]] = original;  // breakdown guard
  }
}

void IncompleteFactor::apply(std::span<const double> r, std::span<double> z) const
{
  const std::size_t n = rows_;
  for (std::size_t i = 0; i < n; ++i)
  {
    double s = r[i];
    for (std::size_t p = row_start_[i]; p < diag_[i]; ++p)
      s -= lu_[p] * z[column_[p]];
    z[i] = s;
  }
  for (std::size_t ii = n; ii-- > 0;)
  {
    double s = z[ii];
    for (std::size_t p = diag_[ii] + 1; p < row_start_[ii + 1]; ++p)
      s -= lu_[p] * z[column_[p]];
    z[ii] = s / lu_[diag_[ii]];
  }
}

double relative_residual(const SparseMatrix &a, std::span<const double> b,
                         std::span<const double> x)
{
  std::vector<double> ax(a.rows);
  a.multiply(x, ax);
  double rr = 0.0;
  for (std::size_t i = 0; i < a.rows; ++i)
    rr += (b[i] - ax[i]) * (b[i] - ax[i]);
  const double nb = norm(b);
  return nb > 0.0 ? std::sqrt(rr) / nb : std::sqrt(rr);
}

SolveReport conjugate_gradient(const SparseMatrix &a, std::span<const double> b,
                               std::span<double> x, const SolverOptions &options,
                               const IncompleteFactor *factor)
{
  const std::size_t n = a.rows;
  SolveReport report;
  const double norm_b = norm(b);
  if (norm_b == 0.0)
  {
    std::fill(x.begin(), x.end(), 0.0);
    report.residual_history.push_back(0.0);
    return report;
  }

  std::vector<double> inv_diag;
  std::optional<IncompleteFactor> own_factor;
  if (options.preconditioner == Preconditioner::Jacobi)
  {
    inv_diag.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      inv_diag[i] = 1.0 / a.value[a.find(i, i)];
  }
  else if (options.preconditioner == Preconditioner::IncompleteCholesky &&
           !(factor && factor->matches(a)))
    factor = &own_factor.emplace(a, options.modification);

  auto precondition = [&](std::span<const double> r, std::span<double> z) {
    switch (options.preconditioner)
    {
      case Preconditioner::None:
        std::copy(r.begin(), r.end(), z.begin());
        break;
      case Preconditioner::Jacobi:
        for (std::size_t i = 0; i < n; ++i)
          z[i] = inv_diag[i] * r[i];
        break;
      case Preconditioner::IncompleteCholesky:
        factor->apply(r, z);
        break;
    }
  };

  std::vector<double> r(n), z(n), p(n), ap(n);
  const double target = options.tolerance * norm_b;

  // The outer loop restarts from the true residual if the recursively updated
  // one has drifted below the target without the true one following.
  for (int restart = 0; restart < 4; ++restart)
  {
    a.multiply(x, ap);
    for (std::size_t i = 0; i < n; ++i)
      r[i] = b[i] - ap[i];
    double res = norm(r);
    report.residual_history.push_back(res / norm_b);
    if (res <= target)
    {
      report.relative_residual = res / norm_b;
      return report;
    }

    precondition(r, z);
    p = z;
    double rz = dot(r, z);
    while (report.iterations < options.max_iterations)
    {
      a.multiply(p, ap);
      const double pap = dot(p, ap);
      if (!(pap > 0.0))
        break;
      const double alpha = rz / pap;
      for (std::size_t i = 0; i < n; ++i)
      {
        x[i] += alpha * p[i];
        r[i] -= alpha * ap[i];
      }
      ++report.iterations;
      res = norm(r);
      report.residual_history.push_back(res / norm_b);
      if (res <= target)
        break;
      precondition(r, z);
      const double rz_next = dot(r, z);
      const double beta = rz_next / rz;
      rz = rz_next;
      for (std::size_t i = 0; i < n; ++i)
        p[i] = z[i] + beta * p[i];
    }
    if (report.iterations >= options.max_iterations)
      break;
  }

  report.relative_residual = relative_residual(a, b, x);
  if (report.relative_residual <= options.tolerance)
    return report;
  throw SolverError("conjugate gradient did not converge: relative residual " +
                        std::to_string(report.relative_residual) + " after " +
                        std::to_string(report.iterations) + " iterations",
                    report.residual_history);
}

std::vector<double> solve_dense(const SparseMatrix &a, std::span<const double> b)
{
  const std::size_t n = a.rows;
  std::vector<double> m(n * n, 0.0);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t p = a.row_start[r]; p < a.row_start[r + 1]; ++p)
      m[r * n + a.column[p]] = a.value[p];
  std::vector<double> x(b.begin(), b.end());

  for (std::size_t col = 0; col < n; ++col)
  {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m[r * n + col]) > std::abs(m[pivot * n + col]))
        pivot = r;
    if (m[pivot * n + col] == 0.0)
      throw SolverError("dense solve: singular matrix", {});
    if (pivot != col)
    {
      std::swap_ranges(m.begin() + static_cast<std::ptrdiff_t>(col * n),
                       m.begin() + static_cast<std::ptrdiff_t>((col + 1) * n),
                       m.begin() + static_cast<std::ptrdiff_t>(pivot * n));
      std::swap(x[col], x[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r)
    {
      const double f = m[r * n + col] / m[col * n + col];
      if (f == 0.0)
        continue;
      for (std::size_t c = col; c < n; ++c)
        m[r * n + c] -= f * m[col * n + c];
      x[r] -= f * x[col];
    }
  }
  for (std::size_t r = n; r-- > 0;)
  {
    double s = x[r];
    for (std::size_t c = r + 1; c < n; ++c)
      s -= m[r * n + c] * x[c];
    x[r] = s / m[r * n + r];
  }
  return x;
}

}  // namespace dnapl
