#ifndef GINZBURG_LINALG_HPP
#define GINZBURG_LINALG_HPP

#include <optional>
#include <utility>
#include <vector>

#include "ginzburg/rational.hpp"

namespace ginzburg {

/// Dense matrix over the exact rationals. Dimensions are fixed at
/// construction; entries are mutable until the matrix is handed off.
class QMatrix {
 public:
  QMatrix() : rows_(0), cols_(0) {}
  QMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rat& at(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
  const Rat& at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

  static QMatrix identity(int n) {
    QMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  static QMatrix zero(int rows, int cols) { return QMatrix(rows, cols); }

  /// Build from a list of column vectors (all of length `rows`).
  static QMatrix from_columns(int rows, const std::vector<std::vector<Rat>>& cols) {
    QMatrix m(rows, static_cast<int>(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c) {
      if (static_cast<int>(cols[c].size()) != rows)
        throw InternalInconsistency("from_columns: ragged column length");
      for (int r = 0; r < rows; ++r) m.at(r, static_cast<int>(c)) = cols[c][r];
    }
    return m;
  }

  std::vector<Rat> column(int c) const {
    std::vector<Rat> v(rows_);
    for (int r = 0; r < rows_; ++r) v[r] = at(r, c);
    return v;
  }

  bool is_zero() const {
    for (const Rat& x : a_)
      if (x != 0) return false;
    return true;
  }

  bool operator==(const QMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

  QMatrix operator*(const QMatrix& o) const {
    if (cols_ != o.rows_) throw InternalInconsistency("matrix product shape mismatch");
    QMatrix m(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const Rat& x = at(i, k);
        if (x == 0) continue;
        for (int j = 0; j < o.cols_; ++j) {
          if (o.at(k, j) == 0) continue;
          m.at(i, j) += x * o.at(k, j);
        }
      }
    return m;
  }

  QMatrix operator+(const QMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw InternalInconsistency("matrix sum shape mismatch");
    QMatrix m(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] + o.a_[i];
    return m;
  }

  QMatrix operator-(const QMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw InternalInconsistency("matrix difference shape mismatch");
    QMatrix m(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i) m.a_[i] = a_[i] - o.a_[i];
    return m;
  }

  std::vector<Rat> apply(const std::vector<Rat>& v) const {
    if (static_cast<int>(v.size()) != cols_)
      throw InternalInconsistency("matrix-vector shape mismatch");
    std::vector<Rat> out(rows_);
    for (int i = 0; i < rows_; ++i) {
      Rat s = 0;
      for (int j = 0; j < cols_; ++j)
        if (at(i, j) != 0 && v[j] != 0) s += at(i, j) * v[j];
      out[i] = s;
    }
    return out;
  }

 private:
  int rows_, cols_;
  std::vector<Rat> a_;
};

struct RrefResult {
  QMatrix r;
  std::vector<int> pivots;  ///< pivot column indices, ascending
};

/// Reduced row echelon form with fully deterministic pivoting: scan columns
/// left to right; the pivot row is the topmost not-yet-used row with a
/// nonzero entry in the current column.
inline RrefResult rref(QMatrix m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int pr = -1;
    for (int r = row; r < m.rows(); ++r)
      if (m.at(r, col) != 0) {
        pr = r;
        break;
      }
    if (pr < 0) continue;
    if (pr != row)
      for (int c = 0; c < m.cols(); ++c) std::swap(m.at(pr, c), m.at(row, c));
    Rat inv = 1 / m.at(row, col);
    for (int c = col; c < m.cols(); ++c) m.at(row, c) *= inv;
    for (int r = 0; r < m.rows(); ++r) {
      if (r == row || m.at(r, col) == 0) continue;
      Rat f = m.at(r, col);
      for (int c = col; c < m.cols(); ++c) m.at(r, c) -= f * m.at(row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(m), std::move(pivots)};
}

inline int rank(const QMatrix& m) { return static_cast<int>(rref(m).pivots.size()); }

/// Null space basis in deterministic order: one vector per free column,
/// ascending, with a unit in the free coordinate.
inline std::vector<std::vector<Rat>> kernel_basis(const QMatrix& m) {
  RrefResult rr = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int p : rr.pivots) is_pivot[p] = true;
  std::vector<std::vector<Rat>> basis;
  for (int fc = 0; fc < m.cols(); ++fc) {
    if (is_pivot[fc]) continue;
    std::vector<Rat> v(m.cols());
    v[fc] = 1;
    for (size_t pr = 0; pr < rr.pivots.size(); ++pr) v[rr.pivots[pr]] = -rr.r.at(static_cast<int>(pr), fc);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// One particular solution of m x = b (free variables zeroed), or nullopt
/// when b is outside the column span.
inline std::optional<std::vector<Rat>> solve(const QMatrix& m, const std::vector<Rat>& b) {
  if (static_cast<int>(b.size()) != m.rows())
    throw ValidationError("solve: right-hand side length mismatch");
  QMatrix aug(m.rows(), m.cols() + 1);
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) aug.at(r, c) = m.at(r, c);
    aug.at(r, m.cols()) = b[r];
  }
  RrefResult rr = rref(std::move(aug));
  for (int p : rr.pivots)
    if (p == m.cols()) return std::nullopt;
  std::vector<Rat> x(m.cols());
  for (size_t pr = 0; pr < rr.pivots.size(); ++pr) x[rr.pivots[pr]] = rr.r.at(static_cast<int>(pr), m.cols());
  return x;
}

/// Inverse of a square matrix; throws on singular input.
inline QMatrix inverse(const QMatrix& m) {
  if (m.rows() != m.cols()) throw InternalInconsistency("inverse: non-square matrix");
  int n = m.rows();
  QMatrix aug(n, 2 * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) aug.at(r, c) = m.at(r, c);
    aug.at(r, n + r) = 1;
  }
  RrefResult rr = rref(std::move(aug));
  if (static_cast<int>(rr.pivots.size()) != n || (n > 0 && rr.pivots.back() >= n))
    throw InternalInconsistency("inverse: singular matrix");
  QMatrix inv(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) inv.at(r, c) = rr.r.at(r, n + c);
  return inv;
}

}  // namespace ginzburg

#endif  // GINZBURG_LINALG_HPP
