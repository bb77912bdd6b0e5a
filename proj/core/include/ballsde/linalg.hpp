#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ballsde {

using Vector = std::vector<double>;

/// Small dense row-major matrix. Sized for the d x d noise matrices and the
/// (K+1) x (K+1) moment generators; no attempt is made at blocking or SIMD.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  std::span<const double> entries() const noexcept { return entries_; }
  std::span<const double> row(std::size_t i) const { return {entries_.data() + i * cols_, cols_}; }

  DenseMatrix transposed() const;
  bool is_zero() const noexcept;
  /// Exact entrywise check a_ij == -a_ji.
  bool is_skew() const noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, const DenseMatrix& a);

double norm1(const DenseMatrix& a);       // max column sum
double frobenius(const DenseMatrix& a);
double max_abs(const DenseMatrix& a);

Vector matvec(const DenseMatrix& a, std::span<const double> x);
/// out += scale * A x, without allocating. Dimensions are the caller's contract.
void apply_add(const DenseMatrix& a, std::span<const double> x, double scale, std::span<double> out) noexcept;

double dot(std::span<const double> a, std::span<const double> b) noexcept;
double norm(std::span<const double> x) noexcept;
double squared_norm(std::span<const double> x) noexcept;

struct SkewIdentities {
  double inner;         // <Ax, x>
  double square_inner;  // <A^2 x, x>
  double neg_norm;      // -|Ax|^2
};

SkewIdentities skew_identities_check(const DenseMatrix& a, std::span<const double> x);

/// e^{tG} by scaling and squaring with a degree-13 Taylor polynomial, the
/// scaling chosen so that ||tG / 2^s||_1 <= 0.5.
DenseMatrix expm(const DenseMatrix& g, double t);

}  // namespace ballsde
