#pragma once

#include "skt/scalar.hpp"

namespace skt::util {

template <class S>
bool within(const Residual& r, double tol) {
  if constexpr (is_exact_v<S>) {
    return r.exact_zero;
  } else {
    return r.value < tol;
  }
}

template <class S>
Mat<S> hcat(const Mat<S>& a, const Mat<S>& b) {
  Mat<S> out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

template <class S>
Vec<S> unit(int dim, int a) {
  Vec<S> e = Vec<S>::Zero(dim);
  e(a) = S(1);
  return e;
}


}  // namespace skt::util
