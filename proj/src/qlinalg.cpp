#include "qrkhs/qlinalg.hpp"

#include <functional>
#include <ostream>

namespace qrkhs {

std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
  return os << "(" << q.w << " + " << q.x << "i + " << q.y << "j + " << q.z << "k)";
}

Quaternion inner(const QVector& u, const QVector& v) {
  if (u.size() != v.size()) throw DimensionMismatch("inner: dimension mismatch");
  Quaternion s{};
  for (std::size_t i = 0; i < u.size(); ++i) s += conj(u[i]) * v[i];
  return s;
}

QMatrix QMatrix::outer(const QVector& u, const QVector& w) {
  QMatrix m(u.size(), w.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < w.size(); ++j) m(i, j) = u[i] * conj(w[j]);
  return m;
}

QMatrix QMatrix::operator+(const QMatrix& o) const {
  if (o.rows_ != rows_ || o.cols_ != cols_) throw DimensionMismatch("matrix add: shape mismatch");
  QMatrix r(rows_, cols_);
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + o.e_[i];
  return r;
}

QMatrix QMatrix::operator-(const QMatrix& o) const {
  if (o.rows_ != rows_ || o.cols_ != cols_) throw DimensionMismatch("matrix sub: shape mismatch");
  QMatrix r(rows_, cols_);
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] - o.e_[i];
  return r;
}

QMatrix QMatrix::operator*(const QMatrix& o) const {
  if (cols_ != o.rows_) throw DimensionMismatch("matrix mul: shape mismatch");
  QMatrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Quaternion& a = (*this)(i, k);
      for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
    }
  return r;
}

QMatrix QMatrix::operator*(double s) const {
  QMatrix r(rows_, cols_);
  for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] * s;
  return r;
}

QVector mat_apply(const QMatrix& A, const QVector& v) {
  if (A.cols() != v.size()) throw DimensionMismatch("mat_apply: dimension mismatch");
  QVector r(A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i) {
    Quaternion s{};
    for (std::size_t j = 0; j < A.cols(); ++j) s += A(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

QMatrix adjoint(const QMatrix& A) {
  QMatrix r(A.cols(), A.rows());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) r(j, i) = conj(A(i, j));
  return r;
}

double max_abs(const QMatrix& A) {
  double m = 0.0;
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) m = std::max(m, abs(A(i, j)));
  return m;
}

Eigen::MatrixXcd embed_complex(const QMatrix& A) {
  using C = std::complex<double>;
  Eigen::MatrixXcd M(2 * A.rows(), 2 * A.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) {
      const Quaternion& q = A(i, j);
      const C z1(q.w, q.x), z2(q.y, q.z);  // q = z1 + z2 j, complex over {1, i}
      M(2 * i, 2 * j) = z1;
      M(2 * i, 2 * j + 1) = z2;
      M(2 * i + 1, 2 * j) = -std::conj(z2);
      M(2 * i + 1, 2 * j + 1) = std::conj(z1);
    }
  return M;
}

QMatrix unembed_complex(const Eigen::MatrixXcd& M) {
  QMatrix A(M.rows() / 2, M.cols() / 2);
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < A.cols(); ++j) {
      const std::complex<double> z1 = M(2 * i, 2 * j), z2 = M(2 * i, 2 * j + 1);
      A(i, j) = Quaternion{z1.real(), z1.imag(), z2.real(), z2.imag()};
    }
  return A;
}

double default_tol(const QMatrix& A) {
  return 1e-10 * static_cast<double>(std::max<std::size_t>(A.rows(), 1)) * std::max(max_abs(A), 1.0);
}

static void require_hermitian(const QMatrix& A, double tol) {
  if (A.rows() != A.cols()) throw NotHermitian();
  if (max_abs(A - adjoint(A)) > tol) throw NotHermitian();
}

Eigen::VectorXd hermitian_eigenvalues(const QMatrix& A, double herm_tol) {
  require_hermitian(A, herm_tol);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(embed_complex(A), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

bool is_positive(const QMatrix& A, double tol) {
  const Eigen::VectorXd ev = hermitian_eigenvalues(A, tol);
  return ev.size() == 0 || ev.minCoeff() >= -tol;
}

double operator_norm(const QMatrix& A, double herm_tol) {
  const Eigen::VectorXd ev = hermitian_eigenvalues(A, herm_tol);
  return ev.size() == 0 ? 0.0 : ev.cwiseAbs().maxCoeff();
}

QMatrix hermitian_function(const QMatrix& A, double herm_tol, const std::function<double(double)>& f) {
  require_hermitian(A, herm_tol);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(embed_complex(A));
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = f(ev(i));
  const Eigen::MatrixXcd M = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  return unembed_complex(M);
}

}  // namespace qrkhs
