#include "ballsde/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ballsde/error.hpp"

namespace ballsde {

namespace {

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "matrix shapes differ");
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows * cols) {
    throw Error(ErrorKind::DimensionMismatch,
                "entry count " + std::to_string(entries_.size()) + " != " + std::to_string(rows) + "x" +
                    std::to_string(cols));
  }
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "ragged matrix literal");
    entries_.insert(entries_.end(), r.begin(), r.end());
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

bool DenseMatrix::is_zero() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](double v) { return v == 0.0; });
}

bool DenseMatrix::is_skew() const noexcept {
  if (!square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i; j < cols_; ++j)
      if ((*this)(i, j) != -(*this)(j, i)) return false;
  return true;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "inner dimensions differ");
  DenseMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b);
  DenseMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) += b(i, j);
  return out;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  require_same_shape(a, b);
  DenseMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) -= b(i, j);
  return out;
}

DenseMatrix operator*(double s, const DenseMatrix& a) {
  DenseMatrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) *= s;
  return out;
}

double norm1(const DenseMatrix& a) {
  double best = 0.0;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) col += std::abs(a(i, j));
    best = std::max(best, col);
  }
  return best;
}

double frobenius(const DenseMatrix& a) {
  double s = 0.0;
  for (double v : a.entries()) s += v * v;
  return std::sqrt(s);
}

double max_abs(const DenseMatrix& a) {
  double best = 0.0;
  for (double v : a.entries()) best = std::max(best, std::abs(v));
  return best;
}

Vector matvec(const DenseMatrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "matrix has " + std::to_string(a.cols()) + " columns, vector has " + std::to_string(x.size()));
  }
  Vector out(a.rows(), 0.0);
  apply_add(a, x, 1.0, out);
  return out;
}

void apply_add(const DenseMatrix& a, std::span<const double> x, double scale, std::span<double> out) noexcept {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
    out[i] += scale * s;
  }
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double squared_norm(std::span<const double> x) noexcept { return dot(x, x); }

double norm(std::span<const double> x) noexcept { return std::sqrt(squared_norm(x)); }

SkewIdentities skew_identities_check(const DenseMatrix& a, std::span<const double> x) {
  if (!a.square()) throw Error(ErrorKind::DimensionMismatch, "skew identities need a square matrix");
  const Vector ax = matvec(a, x);
  const Vector aax = matvec(a, ax);
  return {dot(ax, x), dot(aax, x), -squared_norm(ax)};
}

DenseMatrix expm(const DenseMatrix& g, double t) {
  if (!g.square()) throw Error(ErrorKind::NonSquare, "expm needs a square matrix");
  if (!(t >= 0.0)) throw Error(ErrorKind::InvalidArgument, "expm needs t >= 0");
  const std::size_t n = g.rows();
  if (n == 0) return g;

  DenseMatrix scaled = t * g;
  const double nrm = norm1(scaled);
  int squarings = 0;
  if (nrm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
    scaled = std::ldexp(1.0, -squarings) * scaled;
  }

  // Horner form of sum_{j<=13} M^j / j!
  constexpr int kOrder = 13;
  DenseMatrix result = DenseMatrix::identity(n);
  for (int j = kOrder; j >= 1; --j) {
    result = DenseMatrix::identity(n) + (1.0 / j) * (scaled * result);
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

}  // namespace ballsde
