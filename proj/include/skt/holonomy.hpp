#pragma once

// Computed holonomy algebra of an invariant connection with parallel torsion:
// the smallest subspace of End(m) containing every R(X,Y) and stable under
// ad(Lambda(X)) for X in m and under ad(h)|_m.

#include "skt/connection.hpp"

#include <string>
#include <vector>

namespace skt {

template <class S>
struct HolonomyAlgebra {
  std::vector<Mat<S>> basis;
  bool converged = true;
  std::string warning;

  int dim() const { return static_cast<int>(basis.size()); }
};

// threshold: relative singular-value cutoff in float mode (ignored for exact scalars).
template <class S>
HolonomyAlgebra<S> holonomy_algebra(const LieModel<S>& m, const NomizuConnection<S>& c, double threshold = 1e-9);

// Basis of so(m, g) as matrices in m coordinates.
template <class S>
std::vector<Mat<S>> skew_adjoint_basis(const Mat<S>& metric);

// max |[A,B] - proj_hol [A,B]| over basis pairs.
template <class S>
Residual commutator_closure_residual(const HolonomyAlgebra<S>& hol);

// Every subspace (columns in m coordinates) must be preserved by the holonomy
// algebra. Throws std::invalid_argument if the subspaces do not span m or are
// not pairwise orthogonal.
template <class S>
VerificationReport check_invariant_splitting(const LieModel<S>& m, const NomizuConnection<S>& c,
                                             const std::vector<Mat<S>>& subspaces, double tol = 1e-9,
                                             const HolonomyAlgebra<S>* precomputed = nullptr);

// Residual of (1 - P_W) A W over the holonomy basis, for one subspace.
template <class S>
Residual subspace_invariance_residual(const Mat<S>& metric, const HolonomyAlgebra<S>& hol, const Mat<S>& w);

}  // namespace skt
