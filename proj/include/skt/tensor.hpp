#pragma once

// Dense multilinear algebra on the fiber m.
//
// Components are stored contravariant slots first, covariant slots last,
// row-major. An endomorphism A is the (1,1) tensor A(i,j) = A^i_j, so its
// storage coincides with the row-major matrix. Forms are (0,k) tensors with
// a(i_1..i_k) = a(e_{i_1},..,e_{i_k}).

#include "skt/scalar.hpp"

#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace skt {

enum class TensorKind { General, Form, Endomorphism, Vector };

// Inner-product space hosting every tensor; the metric is the Gram matrix
// of the chosen basis of m.
template <class S>
class Fiber {
 public:
  Fiber() = default;
  explicit Fiber(Mat<S> metric);

  int dim() const { return static_cast<int>(metric_.rows()); }
  const Mat<S>& metric() const { return metric_; }

  // Leading principal minors, computed by fraction-free elimination.
  bool positive_definite(double tol = 0.0) const;
  bool symmetric(double tol = 0.0) const;

 private:
  Mat<S> metric_;
};

template <class S>
class Tensor {
 public:
  Tensor() = default;
  Tensor(int dim, int covariant, int contravariant, TensorKind kind = TensorKind::General);

  static Tensor form(int dim, int degree);
  static Tensor covector(const Vec<S>& components);
  static Tensor vector(const Vec<S>& components);
  static Tensor endomorphism(const Mat<S>& matrix);
  // (0,2) tensor a(e_i,e_j) = m(i,j); kind Form only when m is antisymmetric.
  static Tensor bilinear(const Mat<S>& m, TensorKind kind = TensorKind::General);

  int dim() const { return dim_; }
  int covariant() const { return covariant_; }
  int contravariant() const { return contravariant_; }
  int rank() const { return covariant_ + contravariant_; }
  TensorKind kind() const { return kind_; }
  std::size_t size() const { return data_.size(); }

  S& operator[](std::size_t flat) { return data_[flat]; }
  const S& operator[](std::size_t flat) const { return data_[flat]; }
  S& at(std::span<const int> index);
  const S& at(std::span<const int> index) const;
  S& operator()(std::initializer_list<int> index) { return at({index.begin(), index.size()}); }
  const S& operator()(std::initializer_list<int> index) const { return at({index.begin(), index.size()}); }

  const std::vector<S>& data() const { return data_; }

  Vec<S> as_vector() const;
  Mat<S> as_matrix() const;

  // Full evaluation of a (0,k) tensor on k vectors.
  S evaluate(std::span<const Vec<S>> args) const;
  S operator()(const Vec<S>& x, const Vec<S>& y) const;
  S operator()(const Vec<S>& x, const Vec<S>& y, const Vec<S>& z) const;

  Tensor& operator+=(const Tensor& other);
  Tensor& operator-=(const Tensor& other);
  Tensor& operator*=(const S& s);
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(const S& s, Tensor a) { return a *= s; }

  void set_kind(TensorKind kind) { kind_ = kind; }

  std::vector<int> unflatten(std::size_t flat) const;
  std::size_t flatten(std::span<const int> index) const;

 private:
  void check_compatible(const Tensor& other) const;

  int dim_ = 0;
  int covariant_ = 0;
  int contravariant_ = 0;
  TensorKind kind_ = TensorKind::General;
  std::vector<S> data_;
};

template <class S>
using TrilinearOf = std::function<S(const Vec<S>&, const Vec<S>&, const Vec<S>&)>;

// Shuffle-sum wedge product without factorial normalisation:
// (a^b)(X_1..X_{p+q}) = sum over (p,q)-shuffles s of sgn(s) a(X_s(1..p)) b(X_s(p+1..)).
template <class S>
Tensor<S> wedge(const Tensor<S>& a, const Tensor<S>& b);

// (v _| a)(X_2..X_k) = a(v, X_2..X_k).
template <class S>
Tensor<S> interior_product(const Vec<S>& v, const Tensor<S>& a);

template <class S>
TrilinearOf<S> cyclic_sum(TrilinearOf<S> f) {
  return [f = std::move(f)](const Vec<S>& x, const Vec<S>& y, const Vec<S>& z) {
    return S(f(x, y, z) + f(y, z, x) + f(z, x, y));
  };
}

// Derivation action of an endomorphism on a mixed tensor:
// contravariant slots receive +A, covariant slots -A^T.
template <class S>
Tensor<S> endo_action(const Mat<S>& a, const Tensor<S>& t);

// Index lowering/raising on vectors and 1-forms.
template <class S>
Tensor<S> flat(const Tensor<S>& vector, const Mat<S>& metric);
template <class S>
Tensor<S> sharp(const Tensor<S>& covector, const Mat<S>& metric);

// Endomorphism Y -> T(v, Y, .)^sharp of a (0,3) tensor.
template <class S>
Mat<S> contraction_endomorphism(const Tensor<S>& t3, const Vec<S>& v, const Mat<S>& metric);

// Vector T(x, y, .)^sharp.
template <class S>
Vec<S> raise_last(const Tensor<S>& t3, const Vec<S>& x, const Vec<S>& y, const Mat<S>& metric);

// max over slot transpositions of |t + t o swap|, covariant tensors only.
template <class S>
Residual antisymmetry_residual(const Tensor<S>& t);

// Full antisymmetrisation sum over permutations with sign (no 1/k!).
template <class S>
Tensor<S> alternate(const Tensor<S>& t);

// Pull back a (0,k) tensor along the columns of `basis`:
// result(i_1..i_k) = t(basis_{i_1},..,basis_{i_k}).
template <class S>
Tensor<S> restrict_to(const Tensor<S>& t, const Mat<S>& basis);

// Pre-compose every covariant slot with the linear map p.
template <class S>
Tensor<S> compose_slots(const Tensor<S>& t, const Mat<S>& p);

template <class S>
Residual max_norm(const Tensor<S>& t) {
  Residual r;
  for (const auto& x : t.data()) r.absorb(x);
  return r;
}

template <class To, class From>
Tensor<To> cast_tensor(const Tensor<From>& t) {
  Tensor<To> out(t.dim(), t.covariant(), t.contravariant(), t.kind());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if constexpr (std::is_same_v<To, double>) {
      out[i] = to_double(t[i]);
    } else {
      out[i] = To(t[i]);
    }
  }
  return out;
}

}  // namespace skt
