#pragma once

#include "skt/tensor.hpp"

#include <random>

namespace testing {

using skt::Mat;
using skt::Rational;
using skt::Tensor;
using skt::Vec;

inline Vec<double> random_vector(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vec<double> v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

inline Mat<double> random_matrix(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat<double> m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = u(rng);
  return m;
}

inline Tensor<double> random_tensor(std::mt19937& rng, int n, int covariant, int contravariant = 0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Tensor<double> t(n, covariant, contravariant);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = u(rng);
  return t;
}

inline Tensor<double> random_form(std::mt19937& rng, int n, int degree) {
  if (degree == 1) return Tensor<double>::covector(random_vector(rng, n));
  return skt::alternate(random_tensor(rng, n, degree));
}

inline double distance(const Tensor<double>& a, const Tensor<double>& b) {
  return skt::max_norm(a - b).value;
}

template <class S>
Vec<S> unit(int n, int i) {
  Vec<S> v = Vec<S>::Zero(n);
  v(i) = S(1);
  return v;
}

inline Rational q(long p, long d = 1) { return Rational(p, d); }

}  // namespace testing
