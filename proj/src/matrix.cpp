#include "homex/matrix.hpp"

#include <cassert>
#include <sstream>

namespace homex {

Mat::Mat(std::size_t rows, std::size_t cols, Field field)
    : rows_(rows), cols_(cols), field_(field), data_(rows * cols, Scalar(0).in_field(field)) {}

Mat Mat::identity(std::size_t n, Field field) {
  Mat m(n, n, field);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar(1).in_field(field);
  return m;
}

Mat Mat::from_rows(const std::vector<Vec>& rows, std::size_t cols, Field field) {
  Mat m(rows.size(), cols, field);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw ArithmeticError("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c].in_field(field);
  }
  return m;
}

Mat Mat::from_columns(const std::vector<Vec>& cols, std::size_t rows, Field field) {
  Mat m(rows, cols.size(), field);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != rows) throw ArithmeticError("ragged matrix columns");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = cols[c][r].in_field(field);
  }
  return m;
}

Vec Mat::row(std::size_t r) const { return Vec(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_); }

Vec Mat::column(std::size_t c) const {
  Vec v;
  v.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v.push_back((*this)(r, c));
  return v;
}

void Mat::set_row(std::size_t r, const Vec& v) {
  assert(v.size() == cols_);
  for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) = v[c];
}

void Mat::set_column(std::size_t c, const Vec& v) {
  assert(v.size() == rows_);
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

Mat Mat::transpose() const {
  Mat t(cols_, rows_, field_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool Mat::is_zero() const {
  for (const auto& x : data_)
    if (!x.is_zero()) return false;
  return true;
}

bool Mat::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) {
      const Scalar& x = (*this)(r, c);
      if (r == c ? !x.is_one() : !x.is_zero()) return false;
    }
  return true;
}

Vec Mat::apply(const Vec& v) const {
  assert(v.size() == cols_);
  Vec out = zero_vec(rows_, field_);
  for (std::size_t c = 0; c < cols_; ++c) {
    if (v[c].is_zero()) continue;
    for (std::size_t r = 0; r < rows_; ++r) {
      const Scalar& a = (*this)(r, c);
      if (!a.is_zero()) out[r] += a * v[c];
    }
  }
  return out;
}

Mat Mat::select_columns(const std::vector<std::size_t>& cols) const {
  Mat m(rows_, cols.size(), field_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t j = 0; j < cols.size(); ++j) m(r, j) = (*this)(r, cols[j]);
  return m;
}

Mat Mat::select_rows(const std::vector<std::size_t>& rows) const {
  Mat m(rows.size(), cols_, field_);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t c = 0; c < cols_; ++c) m(i, c) = (*this)(rows[i], c);
  return m;
}

Mat& Mat::operator+=(const Mat& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw ArithmeticError("matrix shape mismatch in +");
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (!o.data_[i].is_zero()) data_[i] += o.data_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw ArithmeticError("matrix shape mismatch in -");
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (!o.data_[i].is_zero()) data_[i] -= o.data_[i];
  return *this;
}

Mat& Mat::operator*=(const Scalar& s) {
  for (auto& x : data_)
    if (!x.is_zero()) x *= s;
  return *this;
}

void Mat::add_scaled(const Scalar& s, const Mat& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw ArithmeticError("matrix shape mismatch in add_scaled");
  if (s.is_zero()) return;
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (!o.data_[i].is_zero()) data_[i] += s * o.data_[i];
}

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols_ != b.rows_) throw ArithmeticError("matrix shape mismatch in *");
  Mat c(a.rows_, b.cols_, a.field_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Scalar& aik = a(i, k);
      if (aik.is_zero()) continue;
      const Scalar* brow = &b.data_[k * b.cols_];
      Scalar* crow = &c.data_[i * c.cols_];
      if (aik.is_one()) {
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!brow[j].is_zero()) crow[j] += brow[j];
      } else {
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!brow[j].is_zero()) crow[j] += aik * brow[j];
      }
    }
  }
  return c;
}

bool operator==(const Mat& a, const Mat& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string Mat::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t r = 0; r < rows_; ++r) {
    os << (r ? ", [" : "[");
    for (std::size_t c = 0; c < cols_; ++c) os << (c ? ", " : "") << (*this)(r, c);
    os << "]";
  }
  os << "]";
  return os.str();
}

Mat hstack(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows()) throw ArithmeticError("hstack row mismatch");
  Mat m(a.rows(), a.cols() + b.cols(), a.field());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
    for (std::size_t c = 0; c < b.cols(); ++c) m(r, a.cols() + c) = b(r, c);
  }
  return m;
}

Mat vstack(const Mat& a, const Mat& b) {
  if (a.cols() != b.cols()) throw ArithmeticError("vstack column mismatch");
  Mat m(a.rows() + b.rows(), a.cols(), a.field());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) m(a.rows() + r, c) = b(r, c);
  return m;
}

Mat direct_sum(const Mat& a, const Mat& b) {
  Mat m(a.rows() + b.rows(), a.cols() + b.cols(), a.field());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
  for (std::size_t r = 0; r < b.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) m(a.rows() + r, a.cols() + c) = b(r, c);
  return m;
}

Mat kronecker(const Mat& a, const Mat& b) {
  Mat m(a.rows() * b.rows(), a.cols() * b.cols(), a.field());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Scalar& x = a(i, j);
      if (x.is_zero()) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) {
          const Scalar& y = b(k, l);
          if (!y.is_zero()) m(i * b.rows() + k, j * b.cols() + l) = x * y;
        }
    }
  return m;
}

RrefResult rref(Mat m) {
  RrefResult res;
  const std::size_t rows = m.rows(), cols = m.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (!m(i, c).is_zero()) {
        piv = i;
        // Prefer a unit pivot; it avoids growing denominators.
        if (m(i, c).is_one()) break;
      }
    }
    if (piv == rows) continue;
    if (piv != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(piv, j), m(r, j));
    if (!m(r, c).is_one()) {
      Scalar inv = m(r, c).inverse();
      for (std::size_t j = c; j < cols; ++j)
        if (!m(r, j).is_zero()) m(r, j) *= inv;
    }
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      Scalar f = m(i, c);
      for (std::size_t j = c; j < cols; ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    res.pivots.push_back(c);
    ++r;
  }
  res.rank = r;
  res.reduced = std::move(m);
  return res;
}

std::size_t rank(const Mat& m) { return rref(m).rank; }

Mat kernel_basis(const Mat& m) {
  RrefResult rr = rref(m);
  const std::size_t n = m.cols();
  std::vector<bool> is_pivot(n, false);
  for (auto p : rr.pivots) is_pivot[p] = true;
  std::vector<Vec> cols;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    Vec v = zero_vec(n, m.field());
    v[free] = Scalar(1).in_field(m.field());
    for (std::size_t i = 0; i < rr.pivots.size(); ++i) {
      const Scalar& x = rr.reduced(i, free);
      if (!x.is_zero()) v[rr.pivots[i]] = -x;
    }
    cols.push_back(std::move(v));
  }
  return Mat::from_columns(cols, n, m.field());
}

std::optional<Mat> solve(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows()) throw ArithmeticError("solve: row count mismatch");
  const std::size_t n = a.cols();
  RrefResult rr = rref(hstack(a, b));
  for (std::size_t i = 0; i < rr.rank; ++i)
    if (rr.pivots[i] >= n) return std::nullopt;
  Mat x(n, b.cols(), a.field());
  for (std::size_t i = 0; i < rr.rank; ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) x(rr.pivots[i], j) = rr.reduced(i, n + j);
  return x;
}

std::optional<Mat> inverse(const Mat& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  const std::size_t n = m.rows();
  if (n == 0) return Mat(0, 0, m.field());
  RrefResult rr = rref(hstack(m, Mat::identity(n, m.field())));
  if (rr.rank < n || rr.pivots[n - 1] != n - 1) return std::nullopt;
  Mat inv(n, n, m.field());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = rr.reduced(i, n + j);
  return inv;
}

Mat column_space(const Mat& m) {
  RrefResult rr = rref(m);
  return m.select_columns(rr.pivots);
}

std::vector<Vec> columns_of(const Mat& m) {
  std::vector<Vec> out;
  out.reserve(m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) out.push_back(m.column(c));
  return out;
}

Vec zero_vec(std::size_t n, Field f) { return Vec(n, Scalar(0).in_field(f)); }

Vec unit_vec(std::size_t n, std::size_t i, Field f) {
  Vec v = zero_vec(n, f);
  v[i] = Scalar(1).in_field(f);
  return v;
}

bool is_zero(const Vec& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

void axpy(Vec& y, const Scalar& a, const Vec& x) {
  if (a.is_zero()) return;
  for (std::size_t i = 0; i < y.size(); ++i)
    if (!x[i].is_zero()) y[i] += a * x[i];
}

Vec Subspace::reduce(Vec v) const {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Scalar c = v[pivots_[i]];
    if (!c.is_zero()) axpy(v, -c, rows_[i]);
  }
  return v;
}

bool Subspace::contains(const Vec& v) const { return is_zero(reduce(v)); }

bool Subspace::insert(Vec v) {
  v = reduce(std::move(v));
  std::size_t p = 0;
  while (p < v.size() && v[p].is_zero()) ++p;
  if (p == v.size()) return false;
  if (!v[p].is_one()) {
    Scalar inv = v[p].inverse();
    for (auto& x : v)
      if (!x.is_zero()) x *= inv;
  }
  for (auto& row : rows_) {
    const Scalar c = row[p];
    if (!c.is_zero()) axpy(row, -c, v);
  }
  rows_.push_back(std::move(v));
  pivots_.push_back(p);
  return true;
}

Vec Subspace::coordinates(const Vec& v) const {
  Vec c;
  c.reserve(rows_.size());
  for (auto p : pivots_) c.push_back(v[p]);
  return c;
}

bool Subspace::contains(const Subspace& other) const {
  for (const auto& r : other.rows_)
    if (!contains(r)) return false;
  return true;
}

Mat Subspace::as_rows() const { return Mat::from_rows(rows_, ambient_, field_); }

Subspace span_of(const std::vector<Vec>& vecs, std::size_t ambient, Field field) {
  Subspace s(ambient, field);
  for (const auto& v : vecs) s.insert(v);
  return s;
}

}  // namespace homex
