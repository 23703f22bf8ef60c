// Sparse exact tensors over a finite basis, linear operators and nullspaces.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qha/exactnum.hpp"

namespace qha {

/// Packed multi-index. Leg 0 is the most significant digit in base `dim`,
/// so sorting keys sorts multi-indices lexicographically in leg order.
using Key = uint64_t;
using Term = std::pair<Key, Scalar>;

class DimMismatch : public Error {
 public:
  explicit DimMismatch(const std::string& w) : Error("DimMismatch", w) {}
};
class RankMismatch : public Error {
 public:
  explicit RankMismatch(const std::string& w) : Error("RankMismatch", w) {}
};
class LegOutOfRange : public Error {
 public:
  explicit LegOutOfRange(const std::string& w) : Error("LegOutOfRange", w) {}
};

struct KeyCodec {
  int rank = 1;
  int dim = 1;
  KeyCodec(int r, int d);
  Key weight(int leg) const { return pow_[rank - 1 - leg]; }
  Key pack(const int* idx) const;
  Key pack(const std::vector<int>& idx) const { return pack(idx.data()); }
  void unpack(Key k, int* out) const;
  std::vector<int> unpack(Key k) const;
  int index(Key k, int leg) const { return int((k / weight(leg)) % Key(dim)); }
  Key size() const { return pow_[rank]; }

 private:
  std::vector<Key> pow_;
};

/// Element of H^{⊗k}: sorted, zero-free list of (packed index, coefficient).
class Tensor {
 public:
  Tensor() : rank_(1), dim_(0) {}
  Tensor(int rank, int dim);
  Tensor(int rank, int dim, std::vector<Term> sorted_terms);

  static Tensor basis(int dim, int i);
  static Tensor pure(int dim, const std::vector<int>& idx, const Scalar& c = Scalar(1));
  static Tensor from_dense(const std::vector<Scalar>& v);

  int rank() const { return rank_; }
  int dim() const { return dim_; }
  KeyCodec codec() const { return KeyCodec(rank_, dim_); }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t nnz() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Scalar coeff(Key k) const;
  Scalar at(std::initializer_list<int> idx) const;
  std::vector<Scalar> dense() const;  // rank 1 only
  Field field() const;

  Tensor operator-() const;
  Tensor scaled(const Scalar& c) const;
  friend Tensor operator+(const Tensor& a, const Tensor& b);
  friend Tensor operator-(const Tensor& a, const Tensor& b);
  friend Tensor operator*(const Scalar& c, const Tensor& t) { return t.scaled(c); }
  friend bool operator==(const Tensor& a, const Tensor& b);
  friend bool operator!=(const Tensor& a, const Tensor& b) { return !(a == b); }

  /// Result leg l is source leg perm[l].
  Tensor permute(const std::vector<int>& perm) const;
  /// Swap of a rank-2 tensor, a⊗b ↦ b⊗a.
  Tensor flip() const { return permute({1, 0}); }

  /// Nonzero c with *this == c·other, or zero Scalar when not proportional.
  Scalar ratio_to(const Tensor& other) const;

  std::string str(const std::vector<std::string>& labels = {}) const;

 private:
  int rank_;
  int dim_;
  std::vector<Term> terms_;
};

/// Hash-map accumulator producing a canonical Tensor.
class TensorBuilder {
 public:
  TensorBuilder(int rank, int dim);
  void add(Key k, const Scalar& c);
  void add(const Tensor& t, const Scalar& c = Scalar(1));
  Tensor build();
  const KeyCodec& codec() const { return codec_; }

 private:
  KeyCodec codec_;
  std::vector<Scalar> dense_;
  std::vector<char> used_;
  std::vector<Key> touched_;
  std::unordered_map<Key, Scalar> sparse_;
  bool dense_mode_;
};

/// Covector on H (or on H^{⊗k} when `dim` is a product dimension).
struct Functional {
  int dim = 0;
  std::vector<Scalar> coords;

  Functional() = default;
  explicit Functional(int n) : dim(n), coords(static_cast<std::size_t>(n)) {}
  explicit Functional(std::vector<Scalar> c) : dim(int(c.size())), coords(std::move(c)) {}
  static Functional dual_basis(int n, int i);

  Scalar operator()(const Tensor& v) const;  // v of rank 1
  bool is_zero() const;
  Functional scaled(const Scalar& c) const;
  friend bool operator==(const Functional& a, const Functional& b) { return a.coords == b.coords; }
  friend Functional operator+(const Functional& a, const Functional& b);
  friend Functional operator-(const Functional& a, const Functional& b);
  Scalar ratio_to(const Functional& other) const;
  std::string str(const std::vector<std::string>& labels = {}) const;
};

/// Linear map H^{⊗src} → H^{⊗dst}, one image column per source multi-index.
class LinearOperator {
 public:
  LinearOperator() = default;
  LinearOperator(int src_rank, int dst_rank, int dim);
  static LinearOperator identity(int dim);
  static LinearOperator from_columns(int dst_rank, std::vector<Tensor> cols);  // src rank 1

  int src_rank() const { return src_rank_; }
  int dst_rank() const { return dst_rank_; }
  int dim() const { return dim_; }
  const Tensor& column(Key k) const { return cols_[k]; }
  void set_column(Key k, Tensor t);
  std::size_t num_columns() const { return cols_.size(); }

  Tensor apply(const Tensor& t) const;
  LinearOperator compose(const LinearOperator& inner) const;  // this ∘ inner (both 1→1)
  /// Square matrix as dense rows (row = output index), rank 1→1 only.
  std::vector<std::vector<Scalar>> matrix() const;
  static LinearOperator from_matrix(const std::vector<std::vector<Scalar>>& m);
  friend bool operator==(const LinearOperator& a, const LinearOperator& b) {
    return a.src_rank_ == b.src_rank_ && a.dst_rank_ == b.dst_rank_ && a.cols_ == b.cols_;
  }

 private:
  int src_rank_ = 1;
  int dst_rank_ = 1;
  int dim_ = 0;
  std::vector<Tensor> cols_;
};

/// Structure constants m(e_i, e_j) = Σ_k c^k_{ij} e_k.
class MultTable {
 public:
  MultTable() = default;
  explicit MultTable(int dim);
  int dim() const { return dim_; }
  const Tensor& at(int i, int j) const { return prod_[std::size_t(i) * std::size_t(dim_) + std::size_t(j)]; }
  void set(int i, int j, Tensor v);

  Tensor mul(const Tensor& a, const Tensor& b) const;
  /// Left/right multiplication operators by a fixed element.
  LinearOperator left_mul(const Tensor& a) const;
  LinearOperator right_mul(const Tensor& a) const;

 private:
  int dim_ = 0;
  std::vector<Tensor> prod_;
};

Tensor tensor_product(const Tensor& a, const Tensor& b);
/// Legwise product; legs whose bit is set in `flip_mask` multiply in reverse order.
Tensor mult_pointwise(const MultTable& m, const Tensor& a, const Tensor& b, uint32_t flip_mask = 0);
Tensor apply_on_leg(const LinearOperator& op, const Tensor& t, int leg);
Tensor contract(const Functional& f, const Tensor& t, int leg);
Scalar contract_full(const Functional& f, const Tensor& t);

using Matrix = std::vector<std::vector<Scalar>>;

/// Basis of {x : row·x = 0 for all rows}; each vector has first nonzero entry 1.
std::vector<std::vector<Scalar>> kernel_basis(const Matrix& rows, int num_unknowns);
/// Matrix inverse; returns false when singular.
bool invert_matrix(const Matrix& a, Matrix& out);
int matrix_rank(const Matrix& rows, int num_unknowns);

}  // namespace qha
