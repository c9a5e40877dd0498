#pragma once

// Second canonical submersion: a nearly Kaehler model with a 2-dimensional
// invariant vertical plane over a quaternionic base.

#include "skt/nk_construction.hpp"

#include <array>
#include <string>

namespace skt {

template <class S>
struct NearlyKahlerModel {
  LieModel<S> model;
  NomizuConnection<S> connection;  // characteristic connection
  Mat<S> j;
  Tensor<S> torsion;
};

// Characteristic connection built from J alone.
template <class S>
NearlyKahlerModel<S> nearly_kahler_model(const LieModel<S>& m, const Mat<S>& j, double tol = 1e-9);

template <class S>
NearlyKahlerModel<S> nearly_kahler_model(const NKQuotientResult<S>& r);

template <class S>
struct QKResult {
  NearlyKahlerModel<S> source;
  QuotientModel<S> quotient;
  Mat<S> vertical;    // source m coordinates
  Mat<S> horizontal;  // source m coordinates
  Vec<S> v;           // unit vertical vector
  std::array<Mat<S>, 3> i;  // base m coordinates
  S k;
  VerificationReport report;
};

// F_qk = -sum over an orthonormal frame of V of (nabla^g_{e} J)^2, restricted to H.
template <class S>
Mat<S> qk_F(const NearlyKahlerModel<S>& nk, const Mat<S>& vertical, const Mat<S>& horizontal);

// Gates: "dim-vertical", "unit-V", "holonomy-invariance", "J-invariance",
// "torsion-type", "F-scalar", "k-positive", the quotient gates.
template <class S>
QKResult<S> build_qk_quotient(const NearlyKahlerModel<S>& nk, const Mat<S>& vertical, const Vec<S>& v,
                              double tol = 1e-9);

// [Lambda^g(X), I_a] modulo span{I_1, I_2, I_3} with the inner product
// tr(G^-1 A^T G B), plus the I_a-components that must vanish.
template <class S>
VerificationReport check_quaternionic_parallelism(const QKResult<S>& r, double tol = 1e-9);

template <class S>
struct NablaJ2Measurement {
  S scalar;  // (nabla_V J)^2 = -scalar id on H
  S k;
  bool matches_half_k = false;
  bool matches_half_k_squared = false;
  std::string verdict;
  VerificationReport report;
};

template <class S>
NablaJ2Measurement<S> measure_nablaJ2(const NearlyKahlerModel<S>& nk, const Mat<S>& vertical, const Vec<S>& v,
                                      double tol = 1e-9);

// Ricci, scalar curvature and Weyl data of the Levi-Civita connection, in double.
struct CurvatureSummary {
  Mat<double> ricci;  // in a g-orthonormal frame
  double scalar = 0.0;
  double einstein_residual = 0.0;   // |Ric - (scal/n) g|
  double self_dual_weyl = 0.0;      // |W+|, dimension 4 only
  double anti_self_dual_weyl = 0.0; // |W-|, dimension 4 only
  bool four_dimensional = false;
};

// In dimension 4 the orientation is fixed so that g(omega ., .) is self-dual.
template <class S>
CurvatureSummary curvature_summary(const LieModel<S>& m, const Mat<S>& omega = Mat<S>());

// Einstein and W+ checks for a 4-dimensional base; vacuous otherwise.
template <class S>
VerificationReport check_qk_base(const QKResult<S>& r, double tol = 1e-8);

}  // namespace skt
