#pragma once

// Reductive homogeneous model g = h + m given by structure constants.
// Basis vectors of g are indexed 0..n-1; the isotropy indices span h and the
// remaining indices, in ascending order, form the basis of m.

#include "skt/report.hpp"
#include "skt/scalar.hpp"
#include "skt/tensor.hpp"

#include <string>
#include <vector>

namespace skt {

template <class S>
class LieModel {
 public:
  LieModel() = default;
  // constants[(i*n + j)*n + k] = c_ij^k with [e_i,e_j] = sum_k c_ij^k e_k.
  LieModel(std::string name, std::vector<std::string> labels, std::vector<S> constants,
           std::vector<int> isotropy, Mat<S> metric);

  const std::string& name() const { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }
  int dim() const { return n_; }
  int dim_m() const { return static_cast<int>(complement_.size()); }
  int dim_h() const { return static_cast<int>(isotropy_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<int>& isotropy() const { return isotropy_; }
  const std::vector<int>& complement() const { return complement_; }
  const std::vector<S>& constants() const { return constants_; }
  const S& c(int i, int j, int k) const { return constants_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k]; }

  const Mat<S>& metric() const { return metric_; }
  const Mat<S>& metric_inverse() const { return metric_inv_; }
  Fiber<S> fiber() const { return Fiber<S>(metric_); }

  // Brackets of m-vectors (m coordinates), split into m and h parts.
  Vec<S> bracket_m(const Vec<S>& x, const Vec<S>& y) const;
  Vec<S> bracket_h(const Vec<S>& x, const Vec<S>& y) const;
  // Basis brackets [e_a,e_b] for a,b indexing m.
  const Vec<S>& bracket_m(int a, int b) const { return table_m_[static_cast<std::size_t>(a * dim_m() + b)]; }
  const Vec<S>& bracket_h(int a, int b) const { return table_h_[static_cast<std::size_t>(a * dim_m() + b)]; }

  // ad(h_p) restricted to m, as a matrix in m coordinates.
  const Mat<S>& ad_isotropy(int p) const { return ad_h_[static_cast<std::size_t>(p)]; }

  // Full-algebra coordinates.
  Vec<S> embed_m(const Vec<S>& x) const;
  Vec<S> project_m(const Vec<S>& full) const;
  Vec<S> project_h(const Vec<S>& full) const;
  Vec<S> bracket_full(const Vec<S>& x, const Vec<S>& y) const;
  // m-part of ad(z)|_m for a full-algebra vector z.
  Mat<S> ad_on_m(const Vec<S>& z) const;

  S inner(const Vec<S>& x, const Vec<S>& y) const { return (x.transpose() * metric_ * y)(0, 0); }

  // Hash of name-independent data: constants, isotropy and metric.
  std::string fingerprint() const;

  // Same algebra in a new basis whose columns (full coordinates) are given;
  // the first h_count columns become the isotropy.
  LieModel rebased(std::string name, const Mat<S>& basis, int h_count, std::vector<std::string> labels,
                   const Mat<S>& metric_on_m) const;

 private:
  std::string name_;
  int n_ = 0;
  std::vector<std::string> labels_;
  std::vector<S> constants_;
  std::vector<int> isotropy_;
  std::vector<int> complement_;
  Mat<S> metric_;
  Mat<S> metric_inv_;
  std::vector<Vec<S>> table_m_;
  std::vector<Vec<S>> table_h_;
  std::vector<Mat<S>> ad_h_;
};

// Jacobi, antisymmetry, reductivity and metric invariance residuals.
template <class S>
VerificationReport validate_model(const LieModel<S>& m, double tol = 1e-9);

template <class To, class From>
LieModel<To> cast_model(const LieModel<From>& m) {
  std::vector<To> c;
  c.reserve(m.constants().size());
  for (const auto& x : m.constants()) {
    if constexpr (std::is_same_v<To, double>) {
      c.push_back(to_double(x));
    } else {
      c.push_back(To(x));
    }
  }
  return LieModel<To>(m.name(), m.labels(), std::move(c), m.isotropy(), cast_matrix<To>(m.metric()));
}

}  // namespace skt
