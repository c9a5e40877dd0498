#pragma once

// Almost contact metric 3-structures, the 3-(alpha,delta)-Sasaki condition,
// the canonical connection and nearly Kaehler structures.

#include "skt/connection.hpp"
#include "skt/holonomy.hpp"

#include <array>

namespace skt {

template <class S>
struct AlmostContactTriple {
  std::array<Vec<S>, 3> xi;
  std::array<Vec<S>, 3> eta;  // components of the 1-forms
  std::array<Mat<S>, 3> phi;
  S alpha = S(1);
  S delta = S(1);
};

// (i,j,k) for the three even permutations of (0,1,2).
inline constexpr std::array<std::array<int, 3>, 3> kEvenPermutations = {{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}};

// xi'_i = sum_j r(i,j) xi_j and likewise for eta, phi; r should lie in SO(3).
template <class S>
AlmostContactTriple<S> rotate_triple(const AlmostContactTriple<S>& t, const Mat<S>& r);

// Phi(X,Y) = g(X, phi Y).
template <class S>
Tensor<S> fundamental_form(const Mat<S>& metric, const Mat<S>& phi);

// Columns xi_1, xi_2, xi_3.
template <class S>
Mat<S> vertical_basis(const AlmostContactTriple<S>& t);

// Throws std::invalid_argument unless dim m = 4n+3 and shapes agree.
template <class S>
VerificationReport validate_acm(const LieModel<S>& m, const AlmostContactTriple<S>& t, double tol = 1e-9);

// d eta_i = 2 alpha Phi_i + 2(alpha - delta) eta_j ^ eta_k.
template <class S>
VerificationReport check_3ad(const LieModel<S>& m, const AlmostContactTriple<S>& t, double tol = 1e-9);

// T = 2 alpha sum eta_i ^ Phi_i - 2(alpha - delta) eta_1 ^ eta_2 ^ eta_3.
// L_{xi_i} phi_i = 0, L_{xi_i} phi_j = -L_{xi_j} phi_i = 2 delta phi_k,
// L_{xi_i} xi_i = 0, L_{xi_i} xi_j = -L_{xi_j} xi_i = 2 delta xi_k, L_{xi_i} g = 0.
template <class S>
VerificationReport check_lie_identities(const LieModel<S>& m, const AlmostContactTriple<S>& t, double tol = 1e-9);

template <class S>
Tensor<S> canonical_torsion(const LieModel<S>& m, const AlmostContactTriple<S>& t);

template <class S>
struct CanonicalConnection {
  NomizuConnection<S> connection;
  NomizuConnection<S> levi_civita;
  HolonomyAlgebra<S> holonomy;
  VerificationReport report;
  S beta;                // 2(delta - 2 alpha)
  S measured_beta;       // read off nabla_{xi_3} phi_1 = beta phi_2
};

// Measures beta from <nabla_{xi_k} phi_i, phi_j> / <phi_j, phi_j> averaged over (ijk).
template <class S>
S measure_beta(const NomizuConnection<S>& c, const AlmostContactTriple<S>& t);

// Builds the connection and checks (a) the beta formula for nabla phi_i,
// (b) nabla T = 0, (c) holonomy invariance of V + H. Throws GateError naming
// the failed gate ("3ad", "(a) beta formula", "(b) parallel torsion", "(c) splitting").
template <class S>
CanonicalConnection<S> canonical_connection(const LieModel<S>& m, const AlmostContactTriple<S>& t, double tol = 1e-9);

template <class S>
struct NearlyKahlerStructure {
  Mat<S> j;
  Tensor<S> characteristic_torsion;  // g((nabla^g_X J) J Y, Z)
};

template <class S>
NearlyKahlerStructure<S> make_nearly_kahler(const LieModel<S>& m, const Mat<S>& j);

// g((nabla^g_X J) Y, Z) on basis triples.
template <class S>
Tensor<S> nabla_j_tensor(const LieModel<S>& m, const NomizuConnection<S>& lc, const Mat<S>& j);

template <class S>
VerificationReport check_nearly_kahler(const LieModel<S>& m, const NearlyKahlerStructure<S>& nk, double tol = 1e-9);

}  // namespace skt
