#include "skt/tensor.hpp"

#include "skt/linalg.hpp"

#include <numeric>
#include <stdexcept>

namespace skt {

namespace {

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}

int permutation_sign(const std::vector<int>& perm) {
  int sign = 1;
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(perm[j])) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

struct Shuffle {
  std::vector<int> first;
  std::vector<int> second;
  int sign;
};

std::vector<Shuffle> shuffles(int p, int q) {
  std::vector<Shuffle> out;
  const int n = p + q;
  std::vector<bool> mask(static_cast<std::size_t>(n), false);
  std::fill(mask.begin(), mask.begin() + p, true);
  do {
    Shuffle s;
    for (int i = 0; i < n; ++i) (mask[i] ? s.first : s.second).push_back(i);
    std::vector<int> perm = s.first;
    perm.insert(perm.end(), s.second.begin(), s.second.end());
    s.sign = permutation_sign(perm);
    out.push_back(std::move(s));
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return out;
}

}  // namespace

template <class S>
Fiber<S>::Fiber(Mat<S> metric) : metric_(std::move(metric)) {
  if (metric_.rows() != metric_.cols()) throw std::invalid_argument("fiber metric is not square");
}

template <class S>
bool Fiber<S>::symmetric(double tol) const {
  for (Eigen::Index i = 0; i < metric_.rows(); ++i)
    for (Eigen::Index j = i + 1; j < metric_.cols(); ++j)
      if (!negligible<S>(metric_(i, j) - metric_(j, i), tol)) return false;
  return true;
}

template <class S>
bool Fiber<S>::positive_definite(double tol) const {
  // Gaussian elimination without pivoting: the k-th pivot is the ratio of
  // consecutive leading principal minors.
  Mat<S> a = metric_;
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (!(a(k, k) > S(tol))) return false;
    for (Eigen::Index r = k + 1; r < n; ++r) {
      S f = a(r, k) / a(k, k);
      a.row(r) -= f * a.row(k);
    }
  }
  return true;
}

template <class S>
Tensor<S>::Tensor(int dim, int covariant, int contravariant, TensorKind kind)
    : dim_(dim), covariant_(covariant), contravariant_(contravariant), kind_(kind) {
  if (dim < 0 || covariant < 0 || contravariant < 0) throw std::invalid_argument("negative tensor shape");
  if (kind == TensorKind::Endomorphism && (covariant != 1 || contravariant != 1))
    throw std::invalid_argument("endomorphism kind requires a (1,1) tensor");
  if (kind == TensorKind::Form && contravariant != 0)
    throw std::invalid_argument("form kind requires a covariant tensor");
  data_.assign(ipow(dim, covariant + contravariant), S(0));
}

template <class S>
Tensor<S> Tensor<S>::form(int dim, int degree) {
  return Tensor(dim, degree, 0, TensorKind::Form);
}

template <class S>
Tensor<S> Tensor<S>::covector(const Vec<S>& components) {
  Tensor t(static_cast<int>(components.size()), 1, 0, TensorKind::Form);
  for (Eigen::Index i = 0; i < components.size(); ++i) t.data_[i] = components(i);
  return t;
}

template <class S>
Tensor<S> Tensor<S>::vector(const Vec<S>& components) {
  Tensor t(static_cast<int>(components.size()), 0, 1, TensorKind::Vector);
  for (Eigen::Index i = 0; i < components.size(); ++i) t.data_[i] = components(i);
  return t;
}

template <class S>
Tensor<S> Tensor<S>::endomorphism(const Mat<S>& matrix) {
  if (matrix.rows() != matrix.cols()) throw std::invalid_argument("endomorphism must be square");
  const int n = static_cast<int>(matrix.rows());
  Tensor t(n, 1, 1, TensorKind::Endomorphism);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t.data_[i * n + j] = matrix(i, j);
  return t;
}

template <class S>
Tensor<S> Tensor<S>::bilinear(const Mat<S>& m, TensorKind kind) {
  if (m.rows() != m.cols()) throw std::invalid_argument("bilinear form must be square");
  const int n = static_cast<int>(m.rows());
  Tensor t(n, 2, 0, kind);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t.data_[i * n + j] = m(i, j);
  return t;
}

template <class S>
std::size_t Tensor<S>::flatten(std::span<const int> index) const {
  if (static_cast<int>(index.size()) != rank()) throw std::out_of_range("tensor index has wrong length");
  std::size_t flat = 0;
  for (int i : index) {
    if (i < 0 || i >= dim_) throw std::out_of_range("tensor index out of range");
    flat = flat * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i);
  }
  return flat;
}

template <class S>
std::vector<int> Tensor<S>::unflatten(std::size_t flat) const {
  std::vector<int> index(static_cast<std::size_t>(rank()));
  for (int s = rank() - 1; s >= 0; --s) {
    index[s] = static_cast<int>(flat % static_cast<std::size_t>(dim_));
    flat /= static_cast<std::size_t>(dim_);
  }
  return index;
}

template <class S>
S& Tensor<S>::at(std::span<const int> index) {
  return data_[flatten(index)];
}

template <class S>
const S& Tensor<S>::at(std::span<const int> index) const {
  return data_[flatten(index)];
}

template <class S>
Vec<S> Tensor<S>::as_vector() const {
  if (rank() != 1) throw std::invalid_argument("as_vector needs a rank-1 tensor");
  Vec<S> v(dim_);
  for (int i = 0; i < dim_; ++i) v(i) = data_[i];
  return v;
}

template <class S>
Mat<S> Tensor<S>::as_matrix() const {
  if (rank() != 2) throw std::invalid_argument("as_matrix needs a rank-2 tensor");
  Mat<S> m(dim_, dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) m(i, j) = data_[i * dim_ + j];
  return m;
}

template <class S>
S Tensor<S>::evaluate(std::span<const Vec<S>> args) const {
  if (contravariant_ != 0) throw std::invalid_argument("evaluate needs a covariant tensor");
  if (static_cast<int>(args.size()) != covariant_) throw std::invalid_argument("wrong number of arguments");
  // contract the last slot first
  std::vector<S> current = data_;
  std::size_t block = current.size();
  for (int s = covariant_ - 1; s >= 0; --s) {
    block /= static_cast<std::size_t>(dim_);
    std::vector<S> next(block, S(0));
    const auto& v = args[static_cast<std::size_t>(s)];
    for (std::size_t outer = 0; outer < block; ++outer) {
      S acc(0);
      for (int i = 0; i < dim_; ++i) {
        const S& c = current[outer * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(i)];
        if (c != S(0) && v(i) != S(0)) acc += c * v(i);
      }
      next[outer] = acc;
    }
    current = std::move(next);
  }
  return current.empty() ? S(0) : current[0];
}

template <class S>
S Tensor<S>::operator()(const Vec<S>& x, const Vec<S>& y) const {
  const Vec<S> args[] = {x, y};
  return evaluate(args);
}

template <class S>
S Tensor<S>::operator()(const Vec<S>& x, const Vec<S>& y, const Vec<S>& z) const {
  const Vec<S> args[] = {x, y, z};
  return evaluate(args);
}

template <class S>
void Tensor<S>::check_compatible(const Tensor& other) const {
  if (dim_ != other.dim_ || covariant_ != other.covariant_ || contravariant_ != other.contravariant_)
    throw std::invalid_argument("tensor shapes differ");
}

template <class S>
Tensor<S>& Tensor<S>::operator+=(const Tensor& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  if (kind_ != other.kind_) kind_ = TensorKind::General;
  return *this;
}

template <class S>
Tensor<S>& Tensor<S>::operator-=(const Tensor& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  if (kind_ != other.kind_) kind_ = TensorKind::General;
  return *this;
}

template <class S>
Tensor<S>& Tensor<S>::operator*=(const S& s) {
  for (auto& x : data_) x *= s;
  return *this;
}

template <class S>
Tensor<S> wedge(const Tensor<S>& a, const Tensor<S>& b) {
  if (a.contravariant() != 0 || b.contravariant() != 0) throw std::invalid_argument("wedge of non-forms");
  if (a.dim() != b.dim()) throw std::invalid_argument("wedge of forms on different fibers");
  const int p = a.covariant();
  const int q = b.covariant();
  const int n = a.dim();
  if (p + q > n) throw std::domain_error("wedge degree exceeds the fiber dimension");
  Tensor<S> out = Tensor<S>::form(n, p + q);
  const auto sh = shuffles(p, q);
  std::vector<int> ia(static_cast<std::size_t>(p)), ib(static_cast<std::size_t>(q));
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    const auto idx = out.unflatten(flat);
    S acc(0);
    for (const auto& s : sh) {
      for (int k = 0; k < p; ++k) ia[k] = idx[s.first[k]];
      for (int k = 0; k < q; ++k) ib[k] = idx[s.second[k]];
      const S& va = a.at(ia);
      if (va == S(0)) continue;
      const S& vb = b.at(ib);
      if (vb == S(0)) continue;
      if (s.sign > 0) {
        acc += va * vb;
      } else {
        acc -= va * vb;
      }
    }
    out[flat] = acc;
  }
  return out;
}

template <class S>
Tensor<S> interior_product(const Vec<S>& v, const Tensor<S>& a) {
  if (a.contravariant() != 0) throw std::invalid_argument("interior product needs a covariant tensor");
  if (a.covariant() < 1) throw std::invalid_argument("interior product of a degree-0 form");
  const int n = a.dim();
  if (v.size() != n) throw std::invalid_argument("vector and form live on different fibers");
  Tensor<S> out(n, a.covariant() - 1, 0, a.kind());
  const std::size_t block = out.size();
  for (int i = 0; i < n; ++i) {
    if (v(i) == S(0)) continue;
    for (std::size_t r = 0; r < block; ++r) out[r] += v(i) * a[static_cast<std::size_t>(i) * block + r];
  }
  return out;
}

template <class S>
Tensor<S> endo_action(const Mat<S>& a, const Tensor<S>& t) {
  const int n = t.dim();
  if (a.rows() != n || a.cols() != n) throw std::invalid_argument("endomorphism and tensor on different fibers");
  Tensor<S> out(n, t.covariant(), t.contravariant(), t.kind());
  const int rank = t.rank();
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    const S& value = t[flat];
    if (value == S(0)) continue;
    auto idx = t.unflatten(flat);
    for (int s = 0; s < rank; ++s) {
      const int j = idx[s];
      const bool contravariant = s < t.contravariant();
      for (int i = 0; i < n; ++i) {
        // contravariant: out(..i..) += A(i,j) t(..j..); covariant: out(..i..) -= A(j,i) t(..j..)
        const S& coeff = contravariant ? a(i, j) : a(j, i);
        if (coeff == S(0)) continue;
        idx[s] = i;
        if (contravariant) {
          out.at(idx) += coeff * value;
        } else {
          out.at(idx) -= coeff * value;
        }
      }
      idx[s] = j;
    }
  }
  return out;
}

template <class S>
Tensor<S> flat(const Tensor<S>& vector, const Mat<S>& metric) {
  if (vector.contravariant() != 1 || vector.covariant() != 0) throw std::invalid_argument("flat needs a vector");
  Vec<S> lowered = metric * vector.as_vector();
  return Tensor<S>::covector(lowered);
}

template <class S>
Tensor<S> sharp(const Tensor<S>& covector, const Mat<S>& metric) {
  if (covector.contravariant() != 0 || covector.covariant() != 1) throw std::invalid_argument("sharp needs a 1-form");
  Vec<S> raised = inverse(metric) * covector.as_vector();
  return Tensor<S>::vector(raised);
}

template <class S>
Mat<S> contraction_endomorphism(const Tensor<S>& t3, const Vec<S>& v, const Mat<S>& metric) {
  if (t3.covariant() != 3 || t3.contravariant() != 0) throw std::invalid_argument("needs a (0,3) tensor");
  Mat<S> slice = interior_product(v, t3).as_matrix();  // slice(b,c) = T(v,e_b,e_c)
  return inverse(metric) * slice.transpose();
}

template <class S>
Vec<S> raise_last(const Tensor<S>& t3, const Vec<S>& x, const Vec<S>& y, const Mat<S>& metric) {
  Tensor<S> one = interior_product(y, interior_product(x, t3));
  return inverse(metric) * one.as_vector();
}

template <class S>
Residual antisymmetry_residual(const Tensor<S>& t) {
  Residual r;
  if (t.contravariant() != 0) throw std::invalid_argument("antisymmetry is checked on covariant tensors");
  const int k = t.covariant();
  for (std::size_t flat = 0; flat < t.size(); ++flat) {
    auto idx = t.unflatten(flat);
    for (int s = 0; s + 1 < k; ++s) {
      std::swap(idx[s], idx[s + 1]);
      r.absorb(S(t[flat] + t.at(idx)));
      std::swap(idx[s], idx[s + 1]);
    }
  }
  return r;
}

template <class S>
Tensor<S> alternate(const Tensor<S>& t) {
  if (t.contravariant() != 0) throw std::invalid_argument("alternate needs a covariant tensor");
  const int k = t.covariant();
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  Tensor<S> out = Tensor<S>::form(t.dim(), k);
  std::vector<int> src(static_cast<std::size_t>(k));
  do {
    const int sign = permutation_sign(perm);
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
      auto idx = out.unflatten(flat);
      for (int s = 0; s < k; ++s) src[s] = idx[perm[s]];
      if (sign > 0) {
        out[flat] += t.at(src);
      } else {
        out[flat] -= t.at(src);
      }
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

template <class S>
Tensor<S> restrict_to(const Tensor<S>& t, const Mat<S>& basis) {
  if (t.contravariant() != 0) throw std::invalid_argument("restrict_to needs a covariant tensor");
  if (basis.rows() != t.dim()) throw std::invalid_argument("basis lives on a different fiber");
  const int n = t.dim();
  const int m = static_cast<int>(basis.cols());
  const int k = t.covariant();
  // transform one slot at a time; slot s goes from dimension n to m
  std::vector<S> current = t.data();
  std::vector<int> dims(static_cast<std::size_t>(k), n);
  for (int s = 0; s < k; ++s) {
    std::size_t before = 1, after = 1;
    for (int u = 0; u < s; ++u) before *= static_cast<std::size_t>(dims[u]);
    for (int u = s + 1; u < k; ++u) after *= static_cast<std::size_t>(dims[u]);
    std::vector<S> next(before * static_cast<std::size_t>(m) * after, S(0));
    for (std::size_t b = 0; b < before; ++b) {
      for (int j = 0; j < n; ++j) {
        for (std::size_t a = 0; a < after; ++a) {
          const S& c = current[(b * n + j) * after + a];
          if (c == S(0)) continue;
          for (int i = 0; i < m; ++i) {
            if (basis(j, i) == S(0)) continue;
            next[(b * m + i) * after + a] += basis(j, i) * c;
          }
        }
      }
    }
    dims[s] = m;
    current = std::move(next);
  }
  Tensor<S> out(m, k, 0, t.kind());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = current[i];
  return out;
}

template <class S>
Tensor<S> compose_slots(const Tensor<S>& t, const Mat<S>& p) {
  return restrict_to(t, p);
}

#define SKT_INSTANTIATE_TENSOR(S)                                                             \
  template class Fiber<S>;                                                                    \
  template class Tensor<S>;                                                                   \
  template Tensor<S> wedge<S>(const Tensor<S>&, const Tensor<S>&);                            \
  template Tensor<S> interior_product<S>(const Vec<S>&, const Tensor<S>&);                    \
  template Tensor<S> endo_action<S>(const Mat<S>&, const Tensor<S>&);                         \
  template Tensor<S> flat<S>(const Tensor<S>&, const Mat<S>&);                                \
  template Tensor<S> sharp<S>(const Tensor<S>&, const Mat<S>&);                               \
  template Mat<S> contraction_endomorphism<S>(const Tensor<S>&, const Vec<S>&, const Mat<S>&); \
  template Vec<S> raise_last<S>(const Tensor<S>&, const Vec<S>&, const Vec<S>&, const Mat<S>&); \
  template Residual antisymmetry_residual<S>(const Tensor<S>&);                               \
  template Tensor<S> alternate<S>(const Tensor<S>&);                                          \
  template Tensor<S> restrict_to<S>(const Tensor<S>&, const Mat<S>&);                         \
  template Tensor<S> compose_slots<S>(const Tensor<S>&, const Mat<S>&);

SKT_INSTANTIATE_TENSOR(double)
SKT_INSTANTIATE_TENSOR(Rational)

}  // namespace skt
