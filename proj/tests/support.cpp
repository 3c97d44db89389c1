#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ttortho::test {

TTVector random_tt(Rng& rng, std::span<const std::size_t> modes,
                   std::span<const std::size_t> ranks) {
  std::normal_distribution<double> normal;
  std::vector<TTCore> cores;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    TTCore c(ranks[k], modes[k], ranks[k + 1]);
    for (double& v : c.data()) v = normal(rng);
    cores.push_back(std::move(c));
  }
  return TTVector(std::move(cores));
}

TTVector random_tt(Rng& rng, std::size_t d, std::size_t n, std::size_t max_rank) {
  std::uniform_int_distribution<std::size_t> pick(1, max_rank);
  std::vector<std::size_t> modes(d, n);
  std::vector<std::size_t> ranks(d + 1, 1);
  for (std::size_t k = 1; k < d; ++k) ranks[k] = pick(rng);
  return random_tt(rng, modes, ranks);
}

DenseMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  std::normal_distribution<double> normal;
  DenseMatrix a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) a(i, j) = normal(rng);
  return a;
}

DenseMatrix columns_of(std::span<const TTVector> set) {
  const std::size_t rows = dense_size(set.front());
  DenseMatrix a(rows, set.size());
  for (std::size_t j = 0; j < set.size(); ++j) {
    const std::vector<double> v = densify(set[j]);
    for (std::size_t i = 0; i < rows; ++i) a(i, j) = v[i];
  }
  return a;
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

double rel_diff(std::span<const double> x, std::span<const double> y) {
  double num = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) num += (x[i] - y[i]) * (x[i] - y[i]);
  const double den = norm2(y);
  return den == 0.0 ? std::sqrt(num) : std::sqrt(num) / den;
}

double max_abs(const DenseMatrix& a) {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

double frobenius_diff(const DenseMatrix& a, const DenseMatrix& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += (a(i, j) - b(i, j)) * (a(i, j) - b(i, j));
  return std::sqrt(s);
}

namespace {

std::vector<double> column(const DenseMatrix& a, std::size_t j) {
  std::vector<double> c(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) c[i] = a(i, j);
  return c;
}

void set_column(DenseMatrix& a, std::size_t j, const std::vector<double>& c) {
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, j) = c[i];
}

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

DenseQR gram_schmidt(const DenseMatrix& a, bool modified, int passes) {
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  DenseQR out{DenseMatrix(n, m), DenseMatrix(m, m)};
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> prev = column(a, i);
    for (int pass = 0; pass < passes; ++pass) {
      std::vector<double> p = prev;
      for (std::size_t j = 0; j < i; ++j) {
        const std::vector<double> qj = column(out.q, j);
        const double c = dot(modified ? p : prev, qj);
        out.r(j, i) += c;
        axpy(-c, qj, p);
      }
      prev = p;
    }
    const double nrm = norm2(prev);
    out.r(i, i) = nrm;
    for (double& v : prev) v /= nrm;
    set_column(out.q, i, prev);
  }
  return out;
}

}  // namespace

DenseQR dense_cgs(const DenseMatrix& a) { return gram_schmidt(a, false, 1); }
DenseQR dense_mgs(const DenseMatrix& a) { return gram_schmidt(a, true, 1); }
DenseQR dense_cgs2(const DenseMatrix& a) { return gram_schmidt(a, false, 2); }
DenseQR dense_mgs2(const DenseMatrix& a) { return gram_schmidt(a, true, 2); }

DenseQR dense_gram(const DenseMatrix& a) {
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  DenseMatrix g(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) g(i, j) = dot(column(a, i), column(a, j));
  // Textbook Cholesky, independent of the library routine.
  DenseMatrix l(m, m);
  for (std::size_t j = 0; j < m; ++j) {
    double d = g(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= 0.0) throw std::runtime_error("dense_gram: not positive definite");
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < m; ++i) {
      double s = g(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  DenseQR out{DenseMatrix(n, m), l.transpose()};
  // Q = A R^-1 by forward substitution on each row: Q R = A.
  for (std::size_t row = 0; row < n; ++row)
    for (std::size_t i = 0; i < m; ++i) {
      double s = a(row, i);
      for (std::size_t k = 0; k < i; ++k) s -= out.q(row, k) * out.r(k, i);
      out.q(row, i) = s / out.r(i, i);
    }
  return out;
}

DenseQR dense_householder(const DenseMatrix& a) {
  const std::size_t n = a.rows();
  const std::size_t m = a.cols();
  std::vector<std::vector<double>> work(m);
  for (std::size_t j = 0; j < m; ++j) work[j] = column(a, j);
  std::vector<std::vector<double>> us(m);
  DenseQR out{DenseMatrix(n, m), DenseMatrix(m, m)};
  for (std::size_t i = 0; i < m; ++i) {
    const std::vector<double>& w = work[i];
    double s = 0.0;
    for (std::size_t j = 0; j < i; ++j) {
      out.r(j, i) = w[j];
      s += w[j] * w[j];
    }
    const double a2 = dot(w, w);
    const double sign = w[i] >= 0.0 ? 1.0 : -1.0;
    const double ri = sign * std::sqrt(std::max(a2 - s, 0.0));
    out.r(i, i) = ri;
    std::vector<double> z = w;
    for (std::size_t j = 0; j < i; ++j) z[j] = 0.0;
    z[i] -= ri;
    const double nz = norm2(z);
    if (nz > 1e3 * 2.220446049250313e-16 * std::sqrt(a2)) {
      for (double& v : z) v /= nz;
      us[i] = z;
      for (std::size_t j = i; j < m; ++j) axpy(-2.0 * dot(work[j], z), z, work[j]);
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<double> q(n, 0.0);
    q[i] = 1.0;
    for (std::size_t j = i + 1; j-- > 0;)
      if (!us[j].empty()) axpy(-2.0 * dot(q, us[j]), us[j], q);
    set_column(out.q, i, q);
  }
  return out;
}

std::vector<double> jacobi_eigenvalues(const DenseMatrix& symmetric) {
  const std::size_t n = symmetric.rows();
  DenseMatrix a = symmetric;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-300) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end(), std::greater<>());
  return ev;
}

DenseMatrix kronecker_laplacian(std::size_t d, std::size_t n) {
  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) total *= n;
  DenseMatrix l(total, total);
  std::size_t stride = 1;
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t row = 0; row < total; ++row) {
      const std::size_t ik = (row / stride) % n;
      l(row, row) += 2.0;
      if (ik > 0) l(row, row - stride) -= 1.0;
      if (ik + 1 < n) l(row, row + stride) -= 1.0;
    }
    stride *= n;
  }
  return l;
}

std::vector<double> matvec(const DenseMatrix& a, std::span<const double> x) {
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

}  // namespace ttortho::test
