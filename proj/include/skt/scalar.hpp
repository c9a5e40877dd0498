#pragma once

// Scalar field abstraction: every algebraic routine is instantiated for
// double (float mode) and an exact GMP rational (rational mode).

#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <type_traits>

namespace skt {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

enum class ArithmeticMode { Float, Rational };

template <class S>
inline constexpr bool is_exact_v = std::is_same_v<S, Rational>;

template <class S>
constexpr ArithmeticMode mode_of() {
  return is_exact_v<S> ? ArithmeticMode::Rational : ArithmeticMode::Float;
}

std::string to_string(ArithmeticMode mode);

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

template <class S>
S abs_value(const S& x) {
  return x < S(0) ? S(-x) : x;
}

// |x| below tol in float mode; exactly zero in rational mode.
template <class S>
bool negligible(const S& x, double tol) {
  if constexpr (is_exact_v<S>) {
    return x == 0;
  } else {
    return std::abs(x) < tol;
  }
}

// Exact parse of "p/q", integers and decimals ("-0.125", "3e-2").
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& q);

template <class S>
S parse_scalar(std::string_view text) {
  if constexpr (is_exact_v<S>) {
    return parse_rational(text);
  } else {
    return to_double(parse_rational(text));
  }
}

template <class S>
S scalar_from_double(double x);

// Square root that stays exact for rationals which are perfect squares.
// Throws std::domain_error when the exact root does not exist.
template <class S>
S exact_sqrt(const S& x);

template <class To, class From>
Mat<To> cast_matrix(const Mat<From>& m) {
  Mat<To> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if constexpr (std::is_same_v<To, double>) {
        out(i, j) = to_double(m(i, j));
      } else {
        out(i, j) = To(m(i, j));
      }
    }
  }
  return out;
}

template <class To, class From>
Vec<To> cast_vector(const Vec<From>& v) {
  Vec<To> out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if constexpr (std::is_same_v<To, double>) {
      out(i) = to_double(v(i));
    } else {
      out(i) = To(v(i));
    }
  }
  return out;
}

// Max-norm accumulator. In rational mode exact_zero records whether every
// absorbed entry vanished identically.
struct Residual {
  double value = 0.0;
  bool exact_zero = true;

  template <class S>
  void absorb(const S& x) {
    value = std::max(value, std::abs(to_double(x)));
    if (!(x == S(0))) exact_zero = false;
  }

  template <class S>
  void absorb_all(const Mat<S>& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) absorb(m(i, j));
  }

  template <class S>
  void absorb_all(const Vec<S>& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) absorb(v(i));
  }

  void merge(const Residual& other) {
    value = std::max(value, other.value);
    exact_zero = exact_zero && other.exact_zero;
  }
};

}  // namespace skt
