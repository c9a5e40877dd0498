#include "skt/lie_model.hpp"

#include "skt/linalg.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace skt {

namespace {

template <class S>
std::string scalar_text(const S& x) {
  if constexpr (is_exact_v<S>) {
    return format_rational(x);
  } else {
    return format_double(x);
  }
}

}  // namespace

template <class S>
LieModel<S>::LieModel(std::string name, std::vector<std::string> labels, std::vector<S> constants,
                      std::vector<int> isotropy, Mat<S> metric)
    : name_(std::move(name)),
      n_(static_cast<int>(labels.size())),
      labels_(std::move(labels)),
      constants_(std::move(constants)),
      isotropy_(std::move(isotropy)),
      metric_(std::move(metric)) {
  const auto n = static_cast<std::size_t>(n_);
  if (constants_.size() != n * n * n)
    throw std::invalid_argument("structure constants: expected " + std::to_string(n * n * n) + " entries, got " +
                                std::to_string(constants_.size()));
  std::set<int> seen;
  for (int i : isotropy_) {
    if (i < 0 || i >= n_) throw std::invalid_argument("isotropy index " + std::to_string(i) + " out of range");
    if (!seen.insert(i).second) throw std::invalid_argument("duplicate isotropy index " + std::to_string(i));
  }
  for (int i = 0; i < n_; ++i)
    if (!seen.count(i)) complement_.push_back(i);
  const int dm = dim_m();
  if (metric_.rows() != dm || metric_.cols() != dm)
    throw std::invalid_argument("metric must be " + std::to_string(dm) + "x" + std::to_string(dm) + " on m, got " +
                                std::to_string(metric_.rows()) + "x" + std::to_string(metric_.cols()));
  try {
    metric_inv_ = inverse(metric_);
  } catch (const std::domain_error&) {
    metric_inv_.resize(0, 0);
  }

  table_m_.assign(static_cast<std::size_t>(dm * dm), Vec<S>::Zero(dm));
  table_h_.assign(static_cast<std::size_t>(dm * dm), Vec<S>::Zero(dim_h()));
  for (int a = 0; a < dm; ++a) {
    for (int b = 0; b < dm; ++b) {
      auto& vm = table_m_[static_cast<std::size_t>(a * dm + b)];
      auto& vh = table_h_[static_cast<std::size_t>(a * dm + b)];
      for (int k = 0; k < dm; ++k) vm(k) = c(complement_[a], complement_[b], complement_[k]);
      for (int p = 0; p < dim_h(); ++p) vh(p) = c(complement_[a], complement_[b], isotropy_[p]);
    }
  }
  for (int p = 0; p < dim_h(); ++p) {
    Mat<S> ad(dm, dm);
    for (int a = 0; a < dm; ++a)
      for (int k = 0; k < dm; ++k) ad(k, a) = c(isotropy_[p], complement_[a], complement_[k]);
    ad_h_.push_back(std::move(ad));
  }
}

template <class S>
Vec<S> LieModel<S>::bracket_m(const Vec<S>& x, const Vec<S>& y) const {
  const int dm = dim_m();
  Vec<S> out = Vec<S>::Zero(dm);
  for (int a = 0; a < dm; ++a) {
    if (x(a) == S(0)) continue;
    for (int b = 0; b < dm; ++b) {
      if (y(b) == S(0)) continue;
      out += (x(a) * y(b)) * bracket_m(a, b);
    }
  }
  return out;
}

template <class S>
Vec<S> LieModel<S>::bracket_h(const Vec<S>& x, const Vec<S>& y) const {
  const int dm = dim_m();
  Vec<S> out = Vec<S>::Zero(dim_h());
  for (int a = 0; a < dm; ++a) {
    if (x(a) == S(0)) continue;
    for (int b = 0; b < dm; ++b) {
      if (y(b) == S(0)) continue;
      out += (x(a) * y(b)) * bracket_h(a, b);
    }
  }
  return out;
}

template <class S>
Vec<S> LieModel<S>::embed_m(const Vec<S>& x) const {
  Vec<S> full = Vec<S>::Zero(n_);
  for (int a = 0; a < dim_m(); ++a) full(complement_[a]) = x(a);
  return full;
}

template <class S>
Vec<S> LieModel<S>::project_m(const Vec<S>& full) const {
  Vec<S> x(dim_m());
  for (int a = 0; a < dim_m(); ++a) x(a) = full(complement_[a]);
  return x;
}

template <class S>
Vec<S> LieModel<S>::project_h(const Vec<S>& full) const {
  Vec<S> x(dim_h());
  for (int p = 0; p < dim_h(); ++p) x(p) = full(isotropy_[p]);
  return x;
}

template <class S>
Vec<S> LieModel<S>::bracket_full(const Vec<S>& x, const Vec<S>& y) const {
  Vec<S> out = Vec<S>::Zero(n_);
  for (int i = 0; i < n_; ++i) {
    if (x(i) == S(0)) continue;
    for (int j = 0; j < n_; ++j) {
      if (y(j) == S(0)) continue;
      S xy = x(i) * y(j);
      for (int k = 0; k < n_; ++k) {
        const S& ck = c(i, j, k);
        if (ck != S(0)) out(k) += xy * ck;
      }
    }
  }
  return out;
}

template <class S>
Mat<S> LieModel<S>::ad_on_m(const Vec<S>& z) const {
  const int dm = dim_m();
  Mat<S> ad(dm, dm);
  for (int a = 0; a < dm; ++a) {
    Vec<S> e = Vec<S>::Zero(dm);
    e(a) = S(1);
    ad.col(a) = project_m(bracket_full(z, embed_m(e)));
  }
  return ad;
}

template <class S>
std::string LieModel<S>::fingerprint() const {
  std::ostringstream os;
  os << "n=" << n_ << ";c=";
  for (const auto& x : constants_) os << scalar_text(x) << ',';
  os << ";h=";
  for (int i : isotropy_) os << i << ',';
  os << ";g=";
  for (Eigen::Index i = 0; i < metric_.rows(); ++i)
    for (Eigen::Index j = 0; j < metric_.cols(); ++j) os << scalar_text(metric_(i, j)) << ',';
  return fnv1a_hex(os.str());
}

template <class S>
LieModel<S> LieModel<S>::rebased(std::string name, const Mat<S>& basis, int h_count, std::vector<std::string> labels,
                                 const Mat<S>& metric_on_m) const {
  if (basis.rows() != n_ || basis.cols() != n_) throw std::invalid_argument("rebasing needs a square basis");
  const Mat<S> inv = inverse(basis);
  const auto n = static_cast<std::size_t>(n_);
  std::vector<S> c2(n * n * n, S(0));
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      Vec<S> br = inv * bracket_full(basis.col(i), basis.col(j));
      for (int k = 0; k < n_; ++k) c2[(static_cast<std::size_t>(i) * n + j) * n + k] = br(k);
    }
  }
  std::vector<int> iso(static_cast<std::size_t>(h_count));
  for (int p = 0; p < h_count; ++p) iso[p] = p;
  return LieModel(std::move(name), std::move(labels), std::move(c2), std::move(iso), metric_on_m);
}

template <class S>
VerificationReport validate_model(const LieModel<S>& m, double tol) {
  VerificationReport rep("validate", mode_of<S>());
  rep.set_fingerprint(m.fingerprint());
  const int n = m.dim();

  Residual anti;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) anti.absorb(S(m.c(i, j, k) + m.c(j, i, k)));
  rep.add(make_check<S>("antisymmetry", "[X,Y] = -[Y,X]", anti, tol));

  Residual jac;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        for (int t = 0; t < n; ++t) {
          S acc(0);
          for (int l = 0; l < n; ++l) {
            acc += m.c(i, j, l) * m.c(l, k, t);
            acc += m.c(j, k, l) * m.c(l, i, t);
            acc += m.c(k, i, l) * m.c(l, j, t);
          }
          jac.absorb(acc);
        }
      }
    }
  }
  rep.add(make_check<S>("jacobi", "[[X,Y],Z] + [[Y,Z],X] + [[Z,X],Y] = 0", jac, tol));

  const Fiber<S> fib = m.fiber();
  const bool spd = fib.symmetric(tol) && fib.positive_definite(is_exact_v<S> ? 0.0 : tol);
  rep.add(flag_check("metric_positive_definite", "plumbing", spd,
                     spd ? "" : "metric on m is not symmetric positive definite"));

  if (m.dim_h() == 0) {
    rep.add(vacuous_check("isotropy_subalgebra", "[h,h] in h", "trivial isotropy"));
    rep.add(vacuous_check("reductive", "[h,m] in m", "trivial isotropy"));
    rep.add(vacuous_check("metric_isotropy_invariant", "ad(h) skew-adjoint on m", "trivial isotropy"));
    return rep;
  }
  Residual sub, red, inv;
  for (int p : m.isotropy()) {
    for (int q : m.isotropy())
      for (int k : m.complement()) sub.absorb(m.c(p, q, k));
    for (int a : m.complement())
      for (int q : m.isotropy()) red.absorb(m.c(p, a, q));
  }
  for (int p = 0; p < m.dim_h(); ++p) {
    const Mat<S>& ad = m.ad_isotropy(p);
    inv.absorb_all(Mat<S>(ad.transpose() * m.metric() + m.metric() * ad));
  }
  rep.add(make_check<S>("isotropy_subalgebra", "[h,h] in h", sub, tol));
  rep.add(make_check<S>("reductive", "[h,m] in m", red, tol));
  rep.add(make_check<S>("metric_isotropy_invariant", "ad(h) skew-adjoint on m", inv, tol));
  return rep;
}

template class LieModel<double>;
template class LieModel<Rational>;
template VerificationReport validate_model<double>(const LieModel<double>&, double);
template VerificationReport validate_model<Rational>(const LieModel<Rational>&, double);

}  // namespace skt
