#pragma once

// Small dense linear algebra that works identically over double and exact
// rationals. Pivot selection: largest magnitude in float mode, first nonzero
// in rational mode.

#include "skt/scalar.hpp"

#include <stdexcept>
#include <vector>

namespace skt {

template <class S>
bool is_pivot_zero(const S& x, double tol) {
  return negligible(x, tol);
}

// Row-reduced echelon form in place; returns pivot columns.
template <class S>
std::vector<int> row_reduce(Mat<S>& a, double tol = 1e-12) {
  std::vector<int> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < a.cols() && row < a.rows(); ++col) {
    Eigen::Index best = -1;
    if constexpr (is_exact_v<S>) {
      for (Eigen::Index r = row; r < a.rows(); ++r) {
        if (a(r, col) != 0) {
          best = r;
          break;
        }
      }
    } else {
      double best_abs = tol;
      for (Eigen::Index r = row; r < a.rows(); ++r) {
        if (std::abs(a(r, col)) > best_abs) {
          best_abs = std::abs(a(r, col));
          best = r;
        }
      }
    }
    if (best < 0) continue;
    a.row(row).swap(a.row(best));
    S p = a(row, col);
    a.row(row) /= p;
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      if (r == row) continue;
      S f = a(r, col);
      if (f != S(0)) a.row(r) -= f * a.row(row);
    }
    pivots.push_back(static_cast<int>(col));
    ++row;
  }
  return pivots;
}

template <class S>
Mat<S> inverse(const Mat<S>& m, double tol = 1e-14) {
  if (m.rows() != m.cols()) throw std::invalid_argument("inverse of a non-square matrix");
  const Eigen::Index n = m.rows();
  Mat<S> aug(n, 2 * n);
  aug.leftCols(n) = m;
  aug.rightCols(n) = Mat<S>::Identity(n, n);
  auto pivots = row_reduce(aug, tol);
  if (static_cast<Eigen::Index>(pivots.size()) < n || (n > 0 && pivots.back() >= n))
    throw std::domain_error("singular matrix");
  return aug.rightCols(n);
}

// Columns spanning {x : a x = 0}.
template <class S>
Mat<S> nullspace(const Mat<S>& a, double tol = 1e-12) {
  Mat<S> r = a;
  auto pivots = row_reduce(r, tol);
  std::vector<bool> is_pivot(a.cols(), false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<Eigen::Index> free_cols;
  for (Eigen::Index c = 0; c < a.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Mat<S> basis = Mat<S>::Zero(a.cols(), static_cast<Eigen::Index>(free_cols.size()));
  for (std::size_t f = 0; f < free_cols.size(); ++f) {
    basis(free_cols[f], f) = S(1);
    for (std::size_t i = 0; i < pivots.size(); ++i) basis(pivots[i], f) = -r(i, free_cols[f]);
  }
  return basis;
}

template <class S>
int rank_of(const Mat<S>& a, double tol = 1e-12) {
  Mat<S> r = a;
  return static_cast<int>(row_reduce(r, tol).size());
}

// G-orthogonal projector onto the column span of b (columns independent).
template <class S>
Mat<S> projector(const Mat<S>& b, const Mat<S>& g) {
  if (b.cols() == 0) return Mat<S>::Zero(g.rows(), g.cols());
  Mat<S> gram = b.transpose() * g * b;
  return b * inverse(gram) * b.transpose() * g;
}

// Basis of the G-orthogonal complement of the column span of b.
template <class S>
Mat<S> orthogonal_complement(const Mat<S>& b, const Mat<S>& g, double tol = 1e-12) {
  if (b.cols() == 0) return Mat<S>::Identity(g.rows(), g.cols());
  Mat<S> constraints = b.transpose() * g;
  return nullspace(constraints, tol);
}

// Coordinates of v in the (independent) columns of b, using the metric g.
template <class S>
Vec<S> coordinates_in(const Mat<S>& b, const Mat<S>& g, const Vec<S>& v) {
  Mat<S> gram = b.transpose() * g * b;
  return inverse(gram) * (b.transpose() * g * v);
}

// Flattened matrix helpers used for spans inside End(m).
template <class S>
Vec<S> flatten(const Mat<S>& m) {
  Vec<S> v(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  return v;
}

template <class S>
Mat<S> unflatten(const Vec<S>& v, Eigen::Index rows, Eigen::Index cols) {
  Mat<S> m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = v(i * cols + j);
  return m;
}

template <class S>
S frobenius(const Mat<S>& a, const Mat<S>& b) {
  S acc(0);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) acc += a(i, j) * b(i, j);
  return acc;
}

template <class S>
S max_abs(const Mat<S>& m) {
  S best(0);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) best = std::max(best, abs_value<S>(m(i, j)));
  return best;
}

}  // namespace skt
