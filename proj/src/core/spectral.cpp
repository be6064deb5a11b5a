#include "qr/spectral.hpp"

#include "qr/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace qr::spectral {

namespace {

using Vec = Eigen::VectorXd;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

class Operator {
 public:
  Operator(const std::vector<Bitset>& rows, std::size_t cols, bool project)
      : rows_(rows), cols_(cols), project_(project) {}

  std::size_t cols() const { return cols_; }

  void project(Vec& x) const {
    if (project_ && cols_) x.array() -= x.mean();
  }

  /// B x
  Vec apply(const Vec& x) const {
    Vec px = x;
    project(px);
    Vec out(static_cast<Eigen::Index>(rows_.size()));
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      double s = 0;
      rows_[r].for_each([&](std::size_t c) { s += px[static_cast<Eigen::Index>(c)]; });
      out[static_cast<Eigen::Index>(r)] = s;
    }
    return out;
  }

  /// Bᵀ z
  Vec apply_transpose(const Vec& z) const {
    Vec out = Vec::Zero(static_cast<Eigen::Index>(cols_));
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const double zr = z[static_cast<Eigen::Index>(r)];
      if (zr == 0) continue;
      rows_[r].for_each([&](std::size_t c) { out[static_cast<Eigen::Index>(c)] += zr; });
    }
    project(out);
    return out;
  }

  /// ||B||_F²
  double frobenius_squared() const {
    double total = 0;
    for (const auto& row : rows_) {
      const double d = static_cast<double>(row.count());
      total += project_ ? d - d * d / static_cast<double>(cols_) : d;
    }
    return total;
  }

 private:
  const std::vector<Bitset>& rows_;
  std::size_t cols_;
  bool project_;
};

}  // namespace

SingularValue top_singular_value(const std::vector<Bitset>& rows, std::size_t cols, bool project_mean_zero,
                                 const LanczosOptions& options) {
  SingularValue result;
  if (rows.empty() || cols == 0) return result;
  Operator op(rows, cols, project_mean_zero);
  // B = 0 exactly when every row is empty (or, projected, empty or full).
  if (std::all_of(rows.begin(), rows.end(), [&](const Bitset& r) {
        const auto d = r.count();
        return d == 0 || (project_mean_zero && d == cols);
      }))
    return result;
  const auto n = static_cast<Eigen::Index>(cols);

  Vec start(n);
  for (Eigen::Index i = 0; i < n; ++i)
    start[i] = static_cast<double>(splitmix64(static_cast<std::uint64_t>(i)) >> 11) * 0x1.0p-52 - 1.0;
  op.project(start);

  std::size_t matvecs = 0;
  for (int attempt = 0;; ++attempt) {
    double norm = start.norm();
    if (norm == 0) throw Error(ErrorCode::Internal, "Lanczos start vector vanished");
    const auto m_max = static_cast<Eigen::Index>(std::min<std::size_t>(options.cycle_length, cols));
    Eigen::MatrixXd Q(n, m_max);
    std::vector<double> alpha, beta;
    Q.col(0) = start / norm;
    Eigen::Index m = 0;
    double scale = 0;
    for (Eigen::Index j = 0; j < m_max; ++j) {
      Vec w = op.apply_transpose(op.apply(Q.col(j)));
      ++matvecs;
      const double a = Q.col(j).dot(w);
      alpha.push_back(a);
      m = j + 1;
      // Full reorthogonalization, twice.
      for (int pass = 0; pass < 2; ++pass) {
        const Vec coeffs = Q.leftCols(j + 1).transpose() * w;
        w -= Q.leftCols(j + 1) * coeffs;
      }
      op.project(w);
      const double b = w.norm();
      scale = std::max(scale, std::abs(a) + b);
      if (j + 1 == m_max || b <= 1e-13 * std::max(scale, 1.0)) break;
      beta.push_back(b);
      Q.col(j + 1) = w / b;
    }

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      T(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(T);
    Vec x = Q.leftCols(m) * eig.eigenvectors().col(m - 1);
    op.project(x);
    x.normalize();

    const Vec bx = op.apply(x);
    const double sigma = bx.norm();
    double error;
    if (sigma > 0) {
      const Vec u = bx / sigma;
      error = (op.apply_transpose(u) - sigma * x).norm() / std::sqrt(2.0);
    } else {
      error = std::sqrt(op.frobenius_squared());
    }
    matvecs += 2;
    result = {sigma, error, matvecs};
    if (error <= options.tolerance) return result;
    if (matvecs >= options.max_matvecs)
      throw Error(ErrorCode::NoConvergence, "Lanczos stopped after " + std::to_string(matvecs) +
                                                " products with residual " + std::to_string(error));
    start = x;
    if (sigma == 0) {
      // Stuck in the null space; perturb deterministically.
      for (Eigen::Index i = 0; i < n; ++i)
        start[i] += static_cast<double>(splitmix64(static_cast<std::uint64_t>(i + n * (attempt + 1))) >> 11) *
                    0x1.0p-53;
      op.project(start);
    }
  }
}

}  // namespace qr::spectral
