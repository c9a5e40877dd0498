#include "skt/holonomy.hpp"

#include "skt/linalg.hpp"

#include <Eigen/SVD>

#include <stdexcept>

namespace skt {

namespace {

// Exact span in reduced row-echelon form.
class ExactSpan {
 public:
  explicit ExactSpan(Eigen::Index len) : len_(len) {}

  Vec<Rational> remainder(Vec<Rational> v) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const Rational f = v(pivots_[r]);
      if (f != 0) v -= f * rows_[r];
    }
    return v;
  }

  bool add(const Vec<Rational>& v) {
    Vec<Rational> r = remainder(v);
    Eigen::Index p = -1;
    for (Eigen::Index i = 0; i < len_; ++i)
      if (r(i) != 0) {
        p = i;
        break;
      }
    if (p < 0) return false;
    r /= Rational(r(p));
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const Rational f = rows_[k](p);
      if (f != 0) rows_[k] -= f * r;
    }
    rows_.push_back(std::move(r));
    pivots_.push_back(p);
    return true;
  }

  std::size_t size() const { return rows_.size(); }
  const std::vector<Vec<Rational>>& vectors() const { return rows_; }

 private:
  Eigen::Index len_;
  std::vector<Vec<Rational>> rows_;
  std::vector<Eigen::Index> pivots_;
};

// Orthonormal basis of the column span, cut at threshold * max(1, sigma_max).
std::vector<Vec<double>> svd_range(const std::vector<Vec<double>>& cols, Eigen::Index len, double threshold) {
  if (cols.empty()) return {};
  Eigen::MatrixXd a(len, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) a.col(static_cast<Eigen::Index>(j)) = cols[j];
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cut = threshold * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  std::vector<Vec<double>> out;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) out.push_back(svd.matrixU().col(i));
  return out;
}

template <class S>
std::vector<Mat<S>> generators(const LieModel<S>& m, const NomizuConnection<S>& c) {
  std::vector<Mat<S>> g = c.lambda;
  for (int p = 0; p < m.dim_h(); ++p) g.push_back(m.ad_isotropy(p));
  return g;
}

template <class S>
std::vector<Mat<S>> to_matrices(const std::vector<Vec<S>>& vecs, Eigen::Index d) {
  std::vector<Mat<S>> out;
  for (const auto& v : vecs) out.push_back(unflatten(v, d, d));
  return out;
}

}  // namespace

template <class S>
std::vector<Mat<S>> skew_adjoint_basis(const Mat<S>& metric) {
  const Eigen::Index d = metric.rows();
  const Mat<S> gi = inverse(metric);
  std::vector<Mat<S>> out;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      Mat<S> k = Mat<S>::Zero(d, d);
      k(i, j) = S(1);
      k(j, i) = S(-1);
      out.push_back(gi * k);
    }
  }
  return out;
}

template <class S>
HolonomyAlgebra<S> holonomy_algebra(const LieModel<S>& m, const NomizuConnection<S>& c, double threshold) {
  const Eigen::Index d = m.dim_m();
  const Eigen::Index len = d * d;
  const CurvatureOperator<S> r = curvature(m, c);
  const std::vector<Mat<S>> gens = generators(m, c);
  const int max_rounds = static_cast<int>(d * (d - 1) / 2) + 2;
  HolonomyAlgebra<S> hol;

  if constexpr (is_exact_v<S>) {
    ExactSpan span(len);
    for (const auto& x : r.r) span.add(flatten(x));
    std::size_t frontier_begin = 0;
    int rounds = 0;
    while (frontier_begin < span.size() && rounds < max_rounds) {
      const std::size_t frontier_end = span.size();
      for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
        const Mat<S> b = unflatten(span.vectors()[i], d, d);
        for (const auto& gmat : gens) span.add(flatten(Mat<S>(gmat * b - b * gmat)));
      }
      frontier_begin = frontier_end;
      ++rounds;
    }
    if (frontier_begin < span.size()) {
      hol.converged = false;
    } else {
      hol.basis = to_matrices<S>(span.vectors(), d);
    }
  } else {
    std::vector<Vec<double>> cols;
    for (const auto& x : r.r) cols.push_back(flatten(x));
    std::vector<Vec<double>> q = svd_range(cols, len, threshold);
    int rounds = 0;
    bool stable = false;
    while (!stable && rounds < max_rounds) {
      std::vector<Vec<double>> cand = q;
      for (const auto& v : q) {
        const Mat<double> b = unflatten(v, d, d);
        for (const auto& gmat : gens) cand.push_back(flatten(Mat<double>(gmat * b - b * gmat)));
      }
      std::vector<Vec<double>> next = svd_range(cand, len, threshold);
      stable = next.size() == q.size();
      q = std::move(next);
      ++rounds;
    }
    if (!stable) {
      hol.converged = false;
    } else {
      hol.basis = to_matrices<double>(q, d);
    }
  }
  if (!hol.converged) {
    hol.basis = skew_adjoint_basis(m.metric());
    hol.warning = "holonomy closure did not stabilise; returning all of so(m)";
  }
  return hol;
}

template <class S>
Residual commutator_closure_residual(const HolonomyAlgebra<S>& hol) {
  Residual res;
  if (hol.basis.empty()) return res;
  const Eigen::Index d = hol.basis.front().rows();
  if constexpr (is_exact_v<S>) {
    ExactSpan span(d * d);
    for (const auto& b : hol.basis) span.add(flatten(b));
    for (const auto& a : hol.basis)
      for (const auto& b : hol.basis) res.absorb_all(span.remainder(flatten(Mat<S>(a * b - b * a))));
  } else {
    std::vector<Vec<double>> cols;
    for (const auto& b : hol.basis) cols.push_back(flatten(b));
    const auto q = svd_range(cols, d * d, 1e-12);
    for (const auto& a : hol.basis) {
      for (const auto& b : hol.basis) {
        Vec<double> v = flatten(Mat<double>(a * b - b * a));
        for (const auto& u : q) v -= u.dot(v) * u;
        res.absorb_all(v);
      }
    }
  }
  return res;
}

template <class S>
Residual subspace_invariance_residual(const Mat<S>& metric, const HolonomyAlgebra<S>& hol, const Mat<S>& w) {
  Residual res;
  if (w.cols() == 0) return res;
  const Mat<S> p = projector(w, metric);
  const Mat<S> q = Mat<S>::Identity(metric.rows(), metric.cols()) - p;
  for (const auto& a : hol.basis) res.absorb_all(Mat<S>(q * a * w));
  return res;
}

template <class S>
VerificationReport check_invariant_splitting(const LieModel<S>& m, const NomizuConnection<S>& c,
                                             const std::vector<Mat<S>>& subspaces, double tol,
                                             const HolonomyAlgebra<S>* precomputed) {
  const int dm = m.dim_m();
  Mat<S> all(dm, 0);
  for (const auto& w : subspaces) {
    if (w.rows() != dm) throw std::invalid_argument("subspace does not live in m");
    Mat<S> grown(dm, all.cols() + w.cols());
    grown << all, w;
    all = std::move(grown);
  }
  if (rank_of(all) != dm) throw std::invalid_argument("subspaces do not span m");
  for (std::size_t i = 0; i < subspaces.size(); ++i) {
    for (std::size_t j = i + 1; j < subspaces.size(); ++j) {
      Residual r;
      r.absorb_all(Mat<S>(subspaces[i].transpose() * m.metric() * subspaces[j]));
      if (!(is_exact_v<S> ? r.exact_zero : r.value < tol))
        throw std::invalid_argument("subspaces are not pairwise orthogonal");
    }
  }
  HolonomyAlgebra<S> local;
  const HolonomyAlgebra<S>& hol = precomputed ? *precomputed : (local = holonomy_algebra(m, c));
  VerificationReport rep("invariant-splitting", mode_of<S>());
  rep.set_fingerprint(m.fingerprint());
  if (!hol.warning.empty()) rep.warn(hol.warning);
  for (std::size_t i = 0; i < subspaces.size(); ++i) {
    const std::string name = "invariant_subspace_" + std::to_string(i + 1);
    const std::string anchor = "holonomy preserves the splitting";
    if (subspaces[i].cols() == 0) {
      rep.add(vacuous_check(name, anchor, "empty subspace"));
      continue;
    }
    rep.add(make_check<S>(name, anchor, subspace_invariance_residual(m.metric(), hol, subspaces[i]), tol,
                          "computed holonomy algebra of dimension " + std::to_string(hol.dim())));
  }
  return rep;
}

#define SKT_INSTANTIATE_HOLONOMY(S)                                                                         \
  template HolonomyAlgebra<S> holonomy_algebra<S>(const LieModel<S>&, const NomizuConnection<S>&, double);  \
  template std::vector<Mat<S>> skew_adjoint_basis<S>(const Mat<S>&);                                        \
  template Residual commutator_closure_residual<S>(const HolonomyAlgebra<S>&);                              \
  template Residual subspace_invariance_residual<S>(const Mat<S>&, const HolonomyAlgebra<S>&, const Mat<S>&); \
  template VerificationReport check_invariant_splitting<S>(const LieModel<S>&, const NomizuConnection<S>&,  \
                                                           const std::vector<Mat<S>>&, double,              \
                                                           const HolonomyAlgebra<S>*);

SKT_INSTANTIATE_HOLONOMY(double)
SKT_INSTANTIATE_HOLONOMY(Rational)

}  // namespace skt
