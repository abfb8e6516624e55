#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "homex/scalar.hpp"

namespace homex {

using Vec = std::vector<Scalar>;

/// Dense row-major matrix over one field. Multiplication and application
/// skip zero entries of the left operand, which keeps the mostly-monomial
/// action matrices of path algebras cheap.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, Field field = {});
  static Mat identity(std::size_t n, Field field = {});
  /// Builds a matrix from nested rows; each entry is coerced into `field`.
  static Mat from_rows(const std::vector<Vec>& rows, std::size_t cols, Field field = {});
  static Mat from_columns(const std::vector<Vec>& cols, std::size_t rows, Field field = {});

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Field field() const { return field_; }

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  const std::vector<Scalar>& entries() const { return data_; }

  Vec row(std::size_t r) const;
  Vec column(std::size_t c) const;
  void set_row(std::size_t r, const Vec& v);
  void set_column(std::size_t c, const Vec& v);

  Mat transpose() const;
  bool is_zero() const;
  bool is_identity() const;
  Vec apply(const Vec& v) const;
  /// Columns `cols` in the given order.
  Mat select_columns(const std::vector<std::size_t>& cols) const;
  Mat select_rows(const std::vector<std::size_t>& rows) const;

  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  Mat& operator*=(const Scalar& s);
  /// this += s * o
  void add_scaled(const Scalar& s, const Mat& o);

  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator*(const Mat& a, const Mat& b);
  friend Mat operator*(Scalar s, Mat a) { return a *= s; }
  friend bool operator==(const Mat& a, const Mat& b);
  friend bool operator!=(const Mat& a, const Mat& b) { return !(a == b); }

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Field field_{};
  std::vector<Scalar> data_;
};

Mat hstack(const Mat& a, const Mat& b);
Mat vstack(const Mat& a, const Mat& b);
/// Block-diagonal sum.
Mat direct_sum(const Mat& a, const Mat& b);
Mat kronecker(const Mat& a, const Mat& b);

struct RrefResult {
  Mat reduced;
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
};

RrefResult rref(Mat m);
std::size_t rank(const Mat& m);
/// Columns form a basis of the right null space.
Mat kernel_basis(const Mat& m);
/// Some x with a*x = b, or nullopt when inconsistent.
std::optional<Mat> solve(const Mat& a, const Mat& b);
std::optional<Mat> inverse(const Mat& m);
/// Basis of the column space, as columns.
Mat column_space(const Mat& m);

std::vector<Vec> columns_of(const Mat& m);

inline Scalar one_in(Field f) { return Scalar(1).in_field(f); }
Vec zero_vec(std::size_t n, Field f);
Vec unit_vec(std::size_t n, std::size_t i, Field f);
bool is_zero(const Vec& v);
void axpy(Vec& y, const Scalar& a, const Vec& x);

/// A subspace of k^n kept as a fully reduced echelon basis: every basis row
/// has a 1 at its pivot and every other row vanishes there. Reduction is
/// therefore a single pass and coordinates are read off at the pivots.
class Subspace {
 public:
  Subspace() = default;
  Subspace(std::size_t ambient, Field field) : ambient_(ambient), field_(field) {}

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return rows_.size(); }
  Field field() const { return field_; }
  const std::vector<Vec>& basis() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  Vec reduce(Vec v) const;
  bool contains(const Vec& v) const;
  /// Adds v; returns false when v was already in the span.
  bool insert(Vec v);
  /// Coefficients of v (assumed in the span) against basis().
  Vec coordinates(const Vec& v) const;
  bool contains(const Subspace& other) const;
  /// Basis rows as matrix rows.
  Mat as_rows() const;

 private:
  std::size_t ambient_ = 0;
  Field field_{};
  std::vector<Vec> rows_;
  std::vector<std::size_t> pivots_;
};

Subspace span_of(const std::vector<Vec>& vecs, std::size_t ambient, Field field);

}  // namespace homex
