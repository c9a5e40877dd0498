#pragma once

// Nearly Kaehler quotient of a parallel 3-(alpha,delta)-Sasaki model along
// one Reeb direction.

#include "skt/catalog.hpp"
#include "skt/submersion.hpp"

namespace skt {

template <class S>
struct NKQuotientResult {
  SasakiModel<S> source;  // triple rotated so that xi_1 is the axis
  CanonicalConnection<S> canonical;
  QuotientModel<S> quotient;
  Mat<S> tilde_phi;   // phi_1 on H, -phi_1 on V (total m coordinates)
  Mat<S> j;           // base m coordinates
  NearlyKahlerStructure<S> nk;
  Mat<S> vertical;    // pi_* xi_2, pi_* xi_3
  Mat<S> horizontal;  // pi_* H
  VerificationReport report;

  S alpha() const { return source.triple.alpha; }
};

// Rows form an SO(3) matrix whose first row is `axis`. Throws
// std::invalid_argument if the axis is not a unit vector and std::domain_error
// if no exact completion exists in rational mode.
template <class S>
Mat<S> rotation_with_axis(const Vec<S>& axis);

// Gates: everything from canonical_connection, "span(xi_1)-invariance",
// "delta=2alpha", the quotient gates, then the postconditions.
template <class S>
NKQuotientResult<S> build_nk_quotient(const SasakiModel<S>& model, const Vec<S>& axis, double tol = 1e-9);

// The candidate phi_1 on H + phi_1 on V pushed to the base; not nearly Kaehler.
template <class S>
Mat<S> unflipped_j(const NKQuotientResult<S>& r);

// g((T_X . J) Y, Z) = T(X,JY,Z) + T(X,Y,JZ) against the closed forms for each
// vertical/horizontal pattern.
template <class S>
VerificationReport check_TJ_formulas(const NKQuotientResult<S>& r, double tol = 1e-9);

// T(X,Y,Z) = g((nabla^g_X J) J Y, Z), characteristic connection = nabla^T,
// and the same identity for -J.
template <class S>
VerificationReport check_characteristic_match(const NKQuotientResult<S>& r, double tol = 1e-9);

template <class S>
struct FTensor {
  Mat<S> via_nabla;   // sum over V of (nabla^g_V J)^2, horizontal block
  Mat<S> via_torsion; // sum over V of (V _| T)^2, horizontal block
  S scalar;           // F = scalar * id if it is scalar
  VerificationReport report;
};

template <class S>
FTensor<S> compute_F(const NKQuotientResult<S>& r, double tol = 1e-9);

// Components of t in Lambda^3 V, Lambda^2 V ^ H and Lambda^3 H.
template <class S>
VerificationReport check_special_algebraic_torsion(const Tensor<S>& t, const Mat<S>& v, const Mat<S>& h,
                                                   double tol = 1e-9);

}  // namespace skt
