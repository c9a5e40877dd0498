#pragma once

// Invariant metric connections as Nomizu maps Lambda: m -> End(m).

#include "skt/lie_model.hpp"
#include "skt/report.hpp"
#include "skt/tensor.hpp"

#include <vector>

namespace skt {

template <class S>
struct NomizuConnection {
  std::vector<Mat<S>> lambda;  // lambda[a] = Lambda(e_a)
  Tensor<S> torsion;           // (0,3) form T(X,Y,Z) = g(T(X,Y),Z)

  int dim() const { return static_cast<int>(lambda.size()); }
  Mat<S> at(const Vec<S>& x) const;
};

template <class S>
struct CurvatureOperator {
  int dim = 0;
  std::vector<Mat<S>> r;  // r[a*dim+b] = R(e_a,e_b)

  const Mat<S>& operator()(int a, int b) const { return r[static_cast<std::size_t>(a * dim + b)]; }
  // R(X,Y,Z,V) = g(R(X,Y)Z, V) on basis vectors.
  S value(int a, int b, int c, int d, const Mat<S>& metric) const;
};

// Koszul formula; throws std::domain_error on a singular metric.
template <class S>
NomizuConnection<S> levi_civita(const LieModel<S>& m);

// Lambda(X) = Lambda_base(X) + 1/2 T(X,.,.)^sharp. Throws std::invalid_argument
// when the base has torsion or T is not alternating.
template <class S>
NomizuConnection<S> with_torsion(const LieModel<S>& m, const NomizuConnection<S>& base, const Tensor<S>& t,
                                 double tol = 1e-9);

// T(X,Y,Z) = g(Lambda(X)Y - Lambda(Y)X - [X,Y]_m, Z).
template <class S>
Tensor<S> torsion_of(const LieModel<S>& m, const std::vector<Mat<S>>& lambda);

template <class S>
CurvatureOperator<S> curvature(const LieModel<S>& m, const NomizuConnection<S>& c);

// max_p |ad(h_p) . S|.
template <class S>
Residual isotropy_residual(const LieModel<S>& m, const Tensor<S>& t);

// max_a |Lambda(e_a)^T g + g Lambda(e_a)|.
template <class S>
Residual metric_compatibility_residual(const LieModel<S>& m, const NomizuConnection<S>& c);

// nabla_X S = Lambda(X) . S. Throws std::invalid_argument for non-invariant S.
template <class S>
Tensor<S> nabla_invariant(const LieModel<S>& m, const NomizuConnection<S>& c, const Tensor<S>& t, const Vec<S>& x,
                          double tol = 1e-9);

// max over basis X of |nabla_X S| (S assumed invariant).
template <class S>
Residual parallel_residual(const NomizuConnection<S>& c, const Tensor<S>& t);

template <class S>
Residual parallel_torsion_residual(const NomizuConnection<S>& c) {
  return parallel_residual(c, c.torsion);
}

// L_V S = nabla^g_V S - A_V . S with A_V(X) = Lambda^g(X) V.
template <class S>
Tensor<S> lie_derivative(const LieModel<S>& m, const NomizuConnection<S>& lc, const Vec<S>& v, const Tensor<S>& t);

// Invariant exterior derivative. Throws std::invalid_argument for non-invariant input.
template <class S>
Tensor<S> d_invariant(const LieModel<S>& m, const Tensor<S>& a, double tol = 1e-9);

// cyclic R(X,Y,Z,V) = cyclic g(T(X,Y),T(Z,V)) over all basis quadruples.
template <class S>
VerificationReport bianchi_check(const LieModel<S>& m, const NomizuConnection<S>& c, double tol = 1e-9);

}  // namespace skt
