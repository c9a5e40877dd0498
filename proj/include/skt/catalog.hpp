#pragma once

// Built-in models: S^3 = SU(2), S^7 = Sp(2)/Sp(1), a product control, the
// derived nearly Kaehler and quaternionic quotients, and broken controls.

#include "skt/sasaki.hpp"

#include <optional>
#include <string>
#include <vector>

namespace skt {

template <class S>
struct SasakiModel {
  LieModel<S> model;
  AlmostContactTriple<S> triple;
};

// su(2) with [xi_i, xi_j] = 2 delta xi_k, identity metric, trivial isotropy.
template <class S>
SasakiModel<S> su2_3ad(const S& alpha, const S& delta);

// su(2) with [e_i,e_j] = 2 e_k and metric s_v * id; xi_i = e_i / sqrt(s_v).
template <class S>
SasakiModel<S> su2_family(const S& alpha, const S& delta, const S& s_v);

// sp(2) from 2x2 quaternionic anti-Hermitian matrices. Basis order:
// h1..h3 (Im H in the lower diagonal slot), e1..e3 (Im H in the upper slot),
// f0..f3 (off-diagonal blocks [[0,-conj b],[b,0]], b = 1,i,j,k).
struct Sp2Basis {
  static constexpr int kDim = 10;
  static const std::vector<std::string>& labels();
};

template <class S>
std::vector<S> sp2_structure_constants();

// Sp(2)/Sp(1) with metric diag(s_v,s_v,s_v,s_h,s_h,s_h,s_h) on m = span(e, f);
// xi_i = e_i / sqrt(s_v). Throws std::domain_error if sqrt(s_v) is not exact
// in rational mode or a scaling is not positive.
template <class S>
SasakiModel<S> sp2_family(const S& alpha, const S& delta, const S& s_v, const S& s_h);

// sp2_family at the closed-form scalings s_v = 1/delta^2, s_h = 1/(alpha delta).
// Throws std::domain_error unless alpha > 0 and delta > 0.
template <class S>
SasakiModel<S> sp2_s7(const S& alpha, const S& delta);

template <class S>
struct ProductModel {
  LieModel<S> model;
  Tensor<S> torsion;
  Mat<S> v1, v2;
};

// su(2) + su(2) with the canonical torsion of each factor.
template <class S>
ProductModel<S> product_s3xs3(const S& alpha1, const S& delta1, const S& alpha2, const S& delta2);

// sp2_s7(1,2) with one structure constant pair perturbed.
template <class S>
LieModel<S> broken_jacobi();
// sp2_s7(1,2) with phi_1 negated.
template <class S>
SasakiModel<S> broken_acm();
// sp2_s7(1,2) scalings labelled with parameters (1,1).
template <class S>
SasakiModel<S> broken_3ad();

enum class ScalingFamily { Su2, Sp2 };

struct ScalingSolution {
  double s_v = 0.0;
  double s_h = 0.0;        // equals s_v for the su2 family (no horizontal space)
  double residual = 0.0;   // float 3-(alpha,delta) residual at the solution
  std::optional<Rational> exact_s_v;
  std::optional<Rational> exact_s_h;
  bool exact_verified = false;  // exact check_3ad residual vanishes
};

// Coarse log grid plus damped Gauss-Newton on the 3-(alpha,delta) residual.
// Throws std::runtime_error with a landscape summary when nothing below
// 1e-12 is found in the search box.
ScalingSolution solve_scalings(double alpha, double delta, ScalingFamily family);

// Best rational with denominator <= max_den within 1e-12 of x, if any.
std::optional<Rational> rationalize(double x, long max_den = 100000);

struct ExpectedValue {
  std::string name;
  double value;
  double tolerance;
  std::string provenance;  // "oracle: ..." or "identity: ..."
};

struct CatalogEntry {
  std::string name;
  std::string kind;  // "3ad", "nk", "qk", "product", "control"
  std::string params;
  std::string description;
  std::vector<ExpectedValue> expected;
};

std::vector<CatalogEntry> catalog_list();
bool catalog_has(const std::string& name);

}  // namespace skt
