#include "ttortho/dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "ttortho/errors.hpp"

namespace ttortho {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

// Column-major scratch copy; Householder and Jacobi work column by column.
std::vector<double> to_column_major(const DenseMatrix& a) {
  std::vector<double> c(a.rows() * a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c[j * a.rows() + i] = a(i, j);
  return c;
}

// In-place Householder QR on a column-major rows x cols buffer. On return the upper
// triangle holds R, and reflector k is stored in vs[k] (length rows - k, unit norm or zero).
void householder_in_place(std::vector<double>& c, std::size_t rows, std::size_t cols,
                          std::vector<std::vector<double>>& vs) {
  const std::size_t k = std::min(rows, cols);
  vs.assign(k, {});
  for (std::size_t p = 0; p < k; ++p) {
    double* col = c.data() + p * rows;
    const std::size_t len = rows - p;
    std::vector<double> v(col + p, col + rows);
    const double alpha = std::sqrt(dot(v.data(), v.data(), len));
    if (alpha == 0.0) {
      vs[p] = std::vector<double>(len, 0.0);
      continue;
    }
    const double sign = v[0] >= 0.0 ? 1.0 : -1.0;
    v[0] += sign * alpha;
    const double vnorm = std::sqrt(dot(v.data(), v.data(), len));
    for (double& x : v) x /= vnorm;
    col[p] = -sign * alpha;
    std::fill(col + p + 1, col + rows, 0.0);
    for (std::size_t j = p + 1; j < cols; ++j) {
      double* cj = c.data() + j * rows + p;
      const double t = 2.0 * dot(v.data(), cj, len);
      axpy(-t, v.data(), cj, len);
    }
    vs[p] = std::move(v);
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols)
    throw std::invalid_argument("DenseMatrix: data length " + std::to_string(data_.size()) +
                                " != " + std::to_string(rows) + "x" + std::to_string(cols));
  if (!std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); }))
    throw std::invalid_argument("DenseMatrix: non-finite entry");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> values) {
  DenseMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw std::invalid_argument("DenseMatrix::from_rows: ragged rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return DenseMatrix(r, c, std::move(data));
}

std::vector<double> DenseMatrix::column(std::size_t j) const {
  std::vector<double> v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

DenseMatrix DenseMatrix::block(std::size_t rows, std::size_t cols) const {
  if (rows > rows_ || cols > cols_) throw ShapeError("DenseMatrix::block: out of range");
  DenseMatrix b(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) b(i, j) = (*this)(i, j);
  return b;
}

double DenseMatrix::frobenius_norm() const noexcept {
  return std::sqrt(dot(data_.data(), data_.data(), data_.size()));
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw ShapeError("matrix product: inner dimensions differ");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.data().data() + i * b.cols();
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const double ail = a(i, l);
      if (ail == 0.0) continue;
      axpy(ail, b.data().data() + l * b.cols(), ci, b.cols());
    }
  }
  return c;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ShapeError("matrix sum: shapes differ");
  DenseMatrix c = a;
  axpy(1.0, b.data().data(), c.data().data(), c.data().size());
  return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw ShapeError("matrix difference: shapes differ");
  DenseMatrix c = a;
  axpy(-1.0, b.data().data(), c.data().data(), c.data().size());
  return c;
}

DenseMatrix operator*(double alpha, const DenseMatrix& a) {
  DenseMatrix c = a;
  for (double& x : c.data()) x *= alpha;
  return c;
}

QRResult qr_factor(const DenseMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const std::size_t k = std::min(m, n);
  std::vector<double> c = to_column_major(a);
  std::vector<std::vector<double>> vs;
  householder_in_place(c, m, n, vs);

  DenseMatrix r(k, n);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < n; ++j) r(i, j) = c[j * m + i];

  // Q = H_0 H_1 ... H_{k-1} applied to the first k columns of the identity.
  std::vector<double> q(m * k, 0.0);
  for (std::size_t j = 0; j < k; ++j) q[j * m + j] = 1.0;
  for (std::size_t p = k; p-- > 0;) {
    const std::vector<double>& v = vs[p];
    const std::size_t len = m - p;
    for (std::size_t j = p; j < k; ++j) {
      double* qj = q.data() + j * m + p;
      const double t = 2.0 * dot(v.data(), qj, len);
      if (t != 0.0) axpy(-t, v.data(), qj, len);
    }
  }

  DenseMatrix qm(m, k);
  for (std::size_t i = 0; i < k; ++i) {
    const double s = r(i, i) < 0.0 ? -1.0 : 1.0;
    if (s < 0.0)
      for (std::size_t j = i; j < n; ++j) r(i, j) = -r(i, j);
    for (std::size_t row = 0; row < m; ++row) qm(row, i) = s * q[i * m + row];
  }
  return {std::move(qm), std::move(r)};
}

DenseMatrix SVDResult::reconstruct() const {
  DenseMatrix us = u;
  for (std::size_t i = 0; i < us.rows(); ++i)
    for (std::size_t j = 0; j < us.cols(); ++j) us(i, j) *= singular_values[j];
  return us * vt;
}

namespace {

// One-sided Jacobi on a square column-major n x n buffer `w`; accumulates V (column-major).
void jacobi_sweeps(std::vector<double>& w, std::vector<double>& v, std::size_t n) {
  constexpr int kMaxSweeps = 80;
  const double tol = static_cast<double>(n) * kEps;
  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) norms[j] = dot(&w[j * n], &w[j * n], n);
  double off = 0.0;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double* wp = &w[p * n];
        double* wq = &w[q * n];
        const double gamma = dot(wp, wq, n);
        const double alpha = norms[p];
        const double beta = norms[q];
        if (alpha == 0.0 || beta == 0.0) continue;
        const double rel = std::abs(gamma) / (std::sqrt(alpha) * std::sqrt(beta));
        if (rel <= tol) continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        if (!std::isfinite(zeta) || t == 0.0) continue;
        off = std::max(off, rel);
        rotated = true;
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (std::size_t i = 0; i < n; ++i) {
          const double a = wp[i];
          const double b = wq[i];
          wp[i] = cs * a - sn * b;
          wq[i] = sn * a + cs * b;
        }
        double* vp = &v[p * n];
        double* vq = &v[q * n];
        for (std::size_t i = 0; i < n; ++i) {
          const double a = vp[i];
          const double b = vq[i];
          vp[i] = cs * a - sn * b;
          vq[i] = sn * a + cs * b;
        }
        norms[p] = dot(wp, wp, n);
        norms[q] = dot(wq, wq, n);
      }
    }
    if (!rotated) return;
  }
  throw ConvergenceFailure(off);
}

// Replaces the listed zero columns of the column-major m x k basis with unit vectors
// orthogonal to all other columns.
void complete_basis(std::vector<double>& u, std::size_t m, std::size_t k,
                    const std::vector<bool>& missing) {
  std::vector<double> cand(m);
  for (std::size_t j = 0; j < k; ++j) {
    if (!missing[j]) continue;
    double best = -1.0;
    std::vector<double> best_vec;
    for (std::size_t e = 0; e < m; ++e) {
      std::fill(cand.begin(), cand.end(), 0.0);
      cand[e] = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t l = 0; l < k; ++l) {
          if (l == j || (missing[l] && l > j)) continue;
          const double* ul = &u[l * m];
          axpy(-dot(ul, cand.data(), m), ul, cand.data(), m);
        }
      const double nrm = std::sqrt(dot(cand.data(), cand.data(), m));
      if (nrm > best) {
        best = nrm;
        best_vec = cand;
      }
      if (best > 0.5) break;
    }
    for (std::size_t i = 0; i < m; ++i) u[j * m + i] = best_vec[i] / best;
  }
}

SVDResult svd_tall(const DenseMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  QRResult qr = qr_factor(a);
  // W = R (n x n), column-major.
  std::vector<double> w(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) w[j * n + i] = qr.r(i, j);
  std::vector<double> v(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) v[j * n + j] = 1.0;
  jacobi_sweeps(w, v, n);

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(dot(&w[j * n], &w[j * n], n));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  const double smax = n == 0 ? 0.0 : sigma[order[0]];
  const double floor = smax * static_cast<double>(n) * kEps * 1e-3;
  std::vector<double> ur(n * n, 0.0);
  std::vector<bool> missing(n, false);
  SVDResult out{DenseMatrix(m, n), std::vector<double>(n), DenseMatrix(n, n)};
  for (std::size_t jj = 0; jj < n; ++jj) {
    const std::size_t j = order[jj];
    const double s = sigma[j];
    if (s > floor && s > 0.0) {
      for (std::size_t i = 0; i < n; ++i) ur[jj * n + i] = w[j * n + i] / s;
      out.singular_values[jj] = s;
    } else {
      missing[jj] = true;
      out.singular_values[jj] = s;
    }
    for (std::size_t i = 0; i < n; ++i) out.vt(jj, i) = v[j * n + i];
  }
  if (std::any_of(missing.begin(), missing.end(), [](bool b) { return b; }))
    complete_basis(ur, n, n, missing);

  // U = Q * U_R.
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t l = 0; l < n; ++l) {
      const double qil = qr.q(i, l);
      if (qil == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) out.u(i, j) += qil * ur[j * n + l];
    }

  // Sign: first nonzero entry of each left vector positive.
  for (std::size_t j = 0; j < n; ++j) {
    double amax = 0.0;
    for (std::size_t i = 0; i < m; ++i) amax = std::max(amax, std::abs(out.u(i, j)));
    const double thresh = amax * 1e-12;
    double s = 1.0;
    for (std::size_t i = 0; i < m; ++i)
      if (std::abs(out.u(i, j)) > thresh) {
        s = out.u(i, j) < 0.0 ? -1.0 : 1.0;
        break;
      }
    if (s < 0.0) {
      for (std::size_t i = 0; i < m; ++i) out.u(i, j) = -out.u(i, j);
      for (std::size_t i = 0; i < n; ++i) out.vt(j, i) = -out.vt(j, i);
    }
  }
  return out;
}

}  // namespace

SVDResult svd(const DenseMatrix& a) {
  if (a.rows() >= a.cols()) return svd_tall(a);
  SVDResult t = svd_tall(a.transpose());
  SVDResult out{t.vt.transpose(), std::move(t.singular_values), t.u.transpose()};
  // Re-apply the sign rule to the new left vectors.
  for (std::size_t j = 0; j < out.u.cols(); ++j) {
    double amax = 0.0;
    for (std::size_t i = 0; i < out.u.rows(); ++i) amax = std::max(amax, std::abs(out.u(i, j)));
    double s = 1.0;
    for (std::size_t i = 0; i < out.u.rows(); ++i)
      if (std::abs(out.u(i, j)) > amax * 1e-12) {
        s = out.u(i, j) < 0.0 ? -1.0 : 1.0;
        break;
      }
    if (s < 0.0) {
      for (std::size_t i = 0; i < out.u.rows(); ++i) out.u(i, j) = -out.u(i, j);
      for (std::size_t i = 0; i < out.vt.cols(); ++i) out.vt(j, i) = -out.vt(j, i);
    }
  }
  return out;
}

std::size_t truncation_rank(std::span<const double> singular_values, double threshold) {
  if (threshold < 0.0) throw std::invalid_argument("svd_truncate: negative threshold");
  const std::size_t k = singular_values.size();
  if (k == 0) return 0;
  const double limit = threshold * threshold;
  double tail = 0.0;
  std::size_t rank = k;
  while (rank > 1) {
    const double s = singular_values[rank - 1];
    if (tail + s * s > limit) break;
    tail += s * s;
    --rank;
  }
  return rank;
}

SVDResult svd_keep(const SVDResult& s, std::size_t rank) {
  rank = std::min(rank, s.rank());
  return {s.u.block(s.u.rows(), rank),
          std::vector<double>(s.singular_values.begin(),
                              s.singular_values.begin() + static_cast<std::ptrdiff_t>(rank)),
          s.vt.block(rank, s.vt.cols())};
}

SVDResult svd_truncate(const SVDResult& s, double threshold) {
  return svd_keep(s, truncation_rank(s.singular_values, threshold));
}

DenseMatrix cholesky(const DenseMatrix& g) {
  const std::size_t n = g.rows();
  if (g.cols() != n) throw ShapeError("cholesky: matrix is not square");
  const double scale = g.frobenius_norm();
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(g(i, j) - g(j, i)) > 1e-12 * scale)
        throw ShapeError("cholesky: matrix is not symmetric");
      a(i, j) = 0.5 * (g(i, j) + g(j, i));
    }

  DenseMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) throw NumericallySingularGram(j);
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

DenseMatrix invert_upper_triangular(const DenseMatrix& r) {
  const std::size_t n = r.rows();
  if (r.cols() != n) throw ShapeError("invert_upper_triangular: matrix is not square");
  for (std::size_t i = 0; i < n; ++i)
    if (r(i, i) == 0.0) throw SingularTriangular(i);
  DenseMatrix inv(n, n);
  // Solve R x = e_j for each column j; x is zero below row j.
  for (std::size_t j = 0; j < n; ++j) {
    inv(j, j) = 1.0 / r(j, j);
    for (std::size_t i = j; i-- > 0;) {
      double s = 0.0;
      for (std::size_t k = i + 1; k <= j; ++k) s += r(i, k) * inv(k, j);
      inv(i, j) = -s / r(i, i);
    }
  }
  return inv;
}

double condition_number_2(const DenseMatrix& a) {
  if (a.cols() == 0 || a.rows() < a.cols())
    throw ShapeError("condition_number_2: need rows >= cols >= 1");
  const SVDResult s = svd(a);
  const double smin = s.singular_values.back();
  const double smax = s.singular_values.front();
  // Below this the smallest singular value is rounding noise of an exactly singular input.
  const double noise = smax * kEps;
  if (smin == 0.0 || smin <= noise) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

double spectral_norm(const DenseMatrix& a) {
  if (a.empty()) return 0.0;
  return svd(a).singular_values.front();
}

}  // namespace ttortho
