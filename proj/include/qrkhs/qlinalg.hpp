#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "qrkhs/quaternion.hpp"

namespace qrkhs {

struct DimensionMismatch : std::invalid_argument {
  explicit DimensionMismatch(const char* what) : std::invalid_argument(what) {}
};

struct NotHermitian : std::invalid_argument {
  NotHermitian() : std::invalid_argument("matrix is not Hermitian within tolerance") {}
};

/// Dense vector over the right quaternionic module H^d. Scalars multiply from
/// the right: (v * q)_i = v_i * q.
class QVector {
 public:
  QVector() = default;
  explicit QVector(std::size_t d) : e_(d) {}
  QVector(std::initializer_list<Quaternion> init) : e_(init) {}

  std::size_t size() const { return e_.size(); }
  Quaternion& operator[](std::size_t i) { return e_[i]; }
  const Quaternion& operator[](std::size_t i) const { return e_[i]; }

  QVector operator*(const Quaternion& q) const {
    QVector r(size());
    for (std::size_t i = 0; i < size(); ++i) r.e_[i] = e_[i] * q;
    return r;
  }
  QVector operator+(const QVector& o) const {
    check_dim(o);
    QVector r(size());
    for (std::size_t i = 0; i < size(); ++i) r.e_[i] = e_[i] + o.e_[i];
    return r;
  }
  QVector operator-(const QVector& o) const {
    check_dim(o);
    QVector r(size());
    for (std::size_t i = 0; i < size(); ++i) r.e_[i] = e_[i] - o.e_[i];
    return r;
  }

 private:
  void check_dim(const QVector& o) const {
    if (o.size() != size()) throw DimensionMismatch("QVector dimension mismatch");
  }
  std::vector<Quaternion> e_;
};

/// <u|v> = sum_i conj(u_i) v_i. Right linear in v, conjugate linear in u.
Quaternion inner(const QVector& u, const QVector& v);

inline double norm(const QVector& v) { return std::sqrt(inner(v, v).w); }

/// Dense quaternionic matrix acting on QVector from the left.
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), e_(rows * cols) {}

  static QMatrix identity(std::size_t d) {
    QMatrix m(d, d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = Quaternion{1.0};
    return m;
  }

  /// Rank-one |u><w|, mapping v to u * <w|v>.
  static QMatrix outer(const QVector& u, const QVector& w);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Quaternion& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
  const Quaternion& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }

  QMatrix operator+(const QMatrix& o) const;
  QMatrix operator-(const QMatrix& o) const;
  QMatrix operator*(const QMatrix& o) const;
  QMatrix operator*(double s) const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Quaternion> e_;
};

QVector mat_apply(const QMatrix& A, const QVector& v);

/// (A^dagger)_{ij} = conj(A_{ji}).
QMatrix adjoint(const QMatrix& A);

double max_abs(const QMatrix& A);

/// Symplectic embedding: each entry q = z1 + z2 j maps to the complex block
/// [[z1, z2], [-conj(z2), conj(z1)]]. A homomorphism for +, * and adjoint.
Eigen::MatrixXcd embed_complex(const QMatrix& A);

/// Inverse of embed_complex on matrices in the image of the embedding.
QMatrix unembed_complex(const Eigen::MatrixXcd& M);

/// Eigenvalues of the complex embedding of a Hermitian quaternionic matrix,
/// ascending. Each quaternionic eigenvalue appears twice.
Eigen::VectorXd hermitian_eigenvalues(const QMatrix& A, double herm_tol);

/// Scale-aware default tolerance for Hermiticity / positivity decisions.
double default_tol(const QMatrix& A);

/// True iff all embedding eigenvalues are >= -tol. Throws NotHermitian when
/// ||A - adjoint(A)||_max > tol.
bool is_positive(const QMatrix& A, double tol);

/// Operator norm of a Hermitian matrix: max |eigenvalue| of the embedding.
double operator_norm(const QMatrix& A, double herm_tol);

/// f applied through the spectral decomposition of the embedding; A Hermitian.
QMatrix hermitian_function(const QMatrix& A, double herm_tol, const std::function<double(double)>& f);

}  // namespace qrkhs
