#pragma once

// Canonical submersions realised as enlarged-isotropy reductive models.

#include "skt/connection.hpp"
#include "skt/holonomy.hpp"

#include <string>

namespace skt {

template <class S>
struct SubmersionSpec {
  LieModel<S> total;
  NomizuConnection<S> connection;
  Mat<S> vertical;  // columns in m coordinates of the total space
  Mat<S> lifts;     // columns in full-algebra coordinates; m-parts span `vertical`
  std::string base_name;
};

template <class S>
struct QuotientModel {
  LieModel<S> base;
  Mat<S> lift;        // dim m x dim m': horizontal basis in total m coordinates
  Mat<S> projection;  // dim m' x dim m: base coordinates of the horizontal part
  Tensor<S> torsion;  // projected torsion on m'
  NomizuConnection<S> levi_civita;
  NomizuConnection<S> connection;  // levi_civita + projected torsion
  VerificationReport report;

  Mat<S> push(const Mat<S>& endo) const { return projection * endo * lift; }
  Vec<S> push(const Vec<S>& v) const { return projection * v; }
};

// Horizontal complement of `vertical` (columns) with respect to the metric.
template <class S>
Mat<S> horizontal_of(const Mat<S>& metric, const Mat<S>& vertical);

// T(V,W,X) for V,W vertical and X horizontal.
template <class S>
VerificationReport check_projecttau(const LieModel<S>& m, const NomizuConnection<S>& c, const Mat<S>& vertical,
                                    double tol = 1e-9);

// cyclic_{X,Y,Z} T^H(X,Y,T(V,Z)) = 0.
template <class S>
VerificationReport check_torsion_in_torsion(const LieModel<S>& m, const NomizuConnection<S>& c,
                                            const Mat<S>& vertical, double tol = 1e-9);

// (a) nabla^g_V W vertical, (b) L_V g = 0 on H, (c) L_V T^H = 0.
template <class S>
VerificationReport check_fiber_geometry(const LieModel<S>& m, const NomizuConnection<S>& c, const Mat<S>& vertical,
                                        double tol = 1e-9);

// Throws GateError at "vertical-invariance", "projecttau", "lifts",
// "isotropy-closure", "horizontal-invariance" or "pinabla".
template <class S>
QuotientModel<S> build_quotient(const SubmersionSpec<S>& spec, double tol = 1e-9);

// g(Lambda(X)Y, Z) - g([X,Y]_m, Z) = T(X,Y,Z) for X vertical, Y,Z horizontal.
template <class S>
VerificationReport check_nablavert(const LieModel<S>& m, const NomizuConnection<S>& c, const Mat<S>& vertical,
                                   double tol = 1e-9);

// Holonomy of the base connection preserves h1 and h2 (base m coordinates).
// Throws GateError("projectable") if either is not isotropy-invariant.
template <class S>
VerificationReport check_base_reducibility(const QuotientModel<S>& q, const Mat<S>& h1, const Mat<S>& h2,
                                           double tol = 1e-9);

// Whether T = T1 + T2 with T_i in Lambda^3 V_i.
template <class S>
VerificationReport check_product_splitting(const LieModel<S>& m, const NomizuConnection<S>& c, const Mat<S>& v1,
                                           const Mat<S>& v2, double tol = 1e-9);

// Components of the 3-form t in the frame [b1 b2] having exactly
// `first_block_count` arguments taken from b1.
template <class S>
Residual block_component_residual(const Tensor<S>& t, const Mat<S>& b1, const Mat<S>& b2, int first_block_count);

}  // namespace skt
