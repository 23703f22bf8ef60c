#include "qha/multilinear.hpp"

#include <algorithm>
#include <limits>

namespace qha {

// ---- KeyCodec ---------------------------------------------------------------

KeyCodec::KeyCodec(int r, int d) : rank(r), dim(d) {
  if (r < 1) throw RankMismatch("rank must be at least 1");
  pow_.assign(std::size_t(r) + 1, 1);
  for (int i = 1; i <= r; ++i) {
    if (d > 0 && pow_[i - 1] > std::numeric_limits<Key>::max() / Key(d))
      throw Error("Overflow", "multi-index space too large for packed keys");
    pow_[i] = pow_[i - 1] * Key(d);
  }
}

Key KeyCodec::pack(const int* idx) const {
  Key k = 0;
  for (int l = 0; l < rank; ++l) k = k * Key(dim) + Key(idx[l]);
  return k;
}

void KeyCodec::unpack(Key k, int* out) const {
  for (int l = rank - 1; l >= 0; --l) {
    out[l] = int(k % Key(dim));
    k /= Key(dim);
  }
}

std::vector<int> KeyCodec::unpack(Key k) const {
  std::vector<int> v(static_cast<std::size_t>(rank));
  unpack(k, v.data());
  return v;
}

// ---- Tensor -----------------------------------------------------------------

Tensor::Tensor(int rank, int dim) : rank_(rank), dim_(dim) {}

Tensor::Tensor(int rank, int dim, std::vector<Term> sorted_terms)
    : rank_(rank), dim_(dim), terms_(std::move(sorted_terms)) {}

Tensor Tensor::basis(int dim, int i) { return Tensor(1, dim, {{Key(i), Scalar(1)}}); }

Tensor Tensor::pure(int dim, const std::vector<int>& idx, const Scalar& c) {
  KeyCodec kc(int(idx.size()), dim);
  Tensor t(int(idx.size()), dim);
  if (!c.is_zero()) t.terms_.push_back({kc.pack(idx), c});
  return t;
}

Tensor Tensor::from_dense(const std::vector<Scalar>& v) {
  Tensor t(1, int(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) t.terms_.push_back({Key(i), v[i]});
  return t;
}

Scalar Tensor::coeff(Key k) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), k,
                             [](const Term& t, Key key) { return t.first < key; });
  if (it != terms_.end() && it->first == k) return it->second;
  return Scalar();
}

Scalar Tensor::at(std::initializer_list<int> idx) const {
  std::vector<int> v(idx);
  if (int(v.size()) != rank_) throw RankMismatch("index length differs from rank");
  return coeff(codec().pack(v));
}

std::vector<Scalar> Tensor::dense() const {
  if (rank_ != 1) throw RankMismatch("dense() needs rank 1");
  std::vector<Scalar> v(static_cast<std::size_t>(dim_));
  for (const auto& [k, c] : terms_) v[k] = c;
  return v;
}

Field Tensor::field() const {
  for (const auto& t : terms_)
    if (!t.second.im().is_zero()) return Field::QI;
  return Field::Q;
}

Tensor Tensor::operator-() const {
  Tensor r = *this;
  for (auto& t : r.terms_) t.second = -t.second;
  return r;
}

Tensor Tensor::scaled(const Scalar& c) const {
  if (c.is_zero()) return Tensor(rank_, dim_);
  Tensor r = *this;
  if (c.is_one()) return r;
  for (auto& t : r.terms_) t.second = t.second * c;
  return r;
}

namespace {

void check_same(const Tensor& a, const Tensor& b) {
  if (a.dim() != b.dim()) throw DimMismatch("tensor dims differ");
  if (a.rank() != b.rank()) throw RankMismatch("tensor ranks differ");
}

Tensor merge(const Tensor& a, const Tensor& b, bool subtract) {
  check_same(a, b);
  std::vector<Term> out;
  out.reserve(a.nnz() + b.nnz());
  auto i = a.terms().begin(), ie = a.terms().end();
  auto j = b.terms().begin(), je = b.terms().end();
  while (i != ie || j != je) {
    if (j == je || (i != ie && i->first < j->first)) {
      out.push_back(*i++);
    } else if (i == ie || j->first < i->first) {
      out.push_back({j->first, subtract ? -j->second : j->second});
      ++j;
    } else {
      Scalar s = subtract ? i->second - j->second : i->second + j->second;
      if (!s.is_zero()) out.push_back({i->first, std::move(s)});
      ++i;
      ++j;
    }
  }
  return Tensor(a.rank(), a.dim(), std::move(out));
}

}  // namespace

Tensor operator+(const Tensor& a, const Tensor& b) { return merge(a, b, false); }
Tensor operator-(const Tensor& a, const Tensor& b) { return merge(a, b, true); }

bool operator==(const Tensor& a, const Tensor& b) {
  if (a.rank_ != b.rank_ || a.dim_ != b.dim_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].first != b.terms_[i].first || a.terms_[i].second != b.terms_[i].second) return false;
  return true;
}

Tensor Tensor::permute(const std::vector<int>& perm) const {
  if (int(perm.size()) != rank_) throw RankMismatch("permutation length differs from rank");
  KeyCodec kc = codec();
  std::vector<int> src(static_cast<std::size_t>(rank_)), dst(static_cast<std::size_t>(rank_));
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& [k, c] : terms_) {
    kc.unpack(k, src.data());
    for (int l = 0; l < rank_; ++l) dst[l] = src[perm[l]];
    out.push_back({kc.pack(dst), c});
  }
  std::sort(out.begin(), out.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
  return Tensor(rank_, dim_, std::move(out));
}

Scalar Tensor::ratio_to(const Tensor& other) const {
  if (rank_ != other.rank_ || dim_ != other.dim_) return Scalar();
  if (terms_.size() != other.terms_.size() || terms_.empty()) return Scalar();
  Scalar c = terms_[0].second / other.terms_[0].second;
  return (*this == other.scaled(c)) ? c : Scalar();
}

namespace {

// "c*label" joined with " + " or " - "; unit coefficients are dropped and
// complex coefficients parenthesized.
void append_term(std::string& s, const Scalar& c, const std::string& label) {
  std::string cs = c.str();
  const bool compound = cs.find_first_of("+-", 1) != std::string::npos;
  bool negative = false;
  if (!compound && cs.front() == '-') {
    negative = true;
    cs.erase(0, 1);
  }
  if (s.empty())
    s = negative ? "-" : "";
  else
    s += negative ? " - " : " + ";
  if (compound)
    s += "(" + cs + ")*";
  else if (cs != "1")
    s += cs + "*";
  s += label;
}

}  // namespace

std::string Tensor::str(const std::vector<std::string>& labels) const {
  if (terms_.empty()) return "0";
  KeyCodec kc = codec();
  std::string s;
  for (const auto& [k, c] : terms_) {
    auto idx = kc.unpack(k);
    std::string label;
    for (int l = 0; l < rank_; ++l) {
      if (l) label += "⊗";
      label += (std::size_t(idx[l]) < labels.size()) ? labels[idx[l]] : "e" + std::to_string(idx[l]);
    }
    append_term(s, c, label);
  }
  return s;
}

// ---- TensorBuilder ----------------------------------------------------------

namespace {
constexpr Key kDenseLimit = Key(1) << 10;
}

TensorBuilder::TensorBuilder(int rank, int dim) : codec_(rank, dim) {
  dense_mode_ = codec_.size() <= kDenseLimit;
  if (dense_mode_) {
    dense_.resize(codec_.size());
    used_.assign(codec_.size(), 0);
  }
}

void TensorBuilder::add(Key k, const Scalar& c) {
  if (c.is_zero()) return;
  if (dense_mode_) {
    if (!used_[k]) {
      used_[k] = 1;
      touched_.push_back(k);
      dense_[k] = c;
    } else {
      dense_[k] += c;
    }
  } else {
    auto [it, fresh] = sparse_.try_emplace(k, c);
    if (!fresh) it->second += c;
  }
}

void TensorBuilder::add(const Tensor& t, const Scalar& c) {
  if (t.rank() != codec_.rank || t.dim() != codec_.dim) throw RankMismatch("builder shape mismatch");
  if (c.is_one()) {
    for (const auto& [k, v] : t.terms()) add(k, v);
  } else {
    for (const auto& [k, v] : t.terms()) add(k, v * c);
  }
}

Tensor TensorBuilder::build() {
  std::vector<Term> out;
  if (dense_mode_) {
    std::sort(touched_.begin(), touched_.end());
    for (Key k : touched_) {
      if (!dense_[k].is_zero()) out.push_back({k, dense_[k]});
      dense_[k] = Scalar();
      used_[k] = 0;
    }
    touched_.clear();
  } else {
    out.reserve(sparse_.size());
    for (auto& [k, v] : sparse_)
      if (!v.is_zero()) out.push_back({k, v});
    sparse_.clear();
    std::sort(out.begin(), out.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
  }
  return Tensor(codec_.rank, codec_.dim, std::move(out));
}

// ---- Functional -------------------------------------------------------------

Functional Functional::dual_basis(int n, int i) {
  Functional f(n);
  f.coords[std::size_t(i)] = Scalar(1);
  return f;
}

Scalar Functional::operator()(const Tensor& v) const {
  if (v.rank() != 1) throw RankMismatch("functional needs a rank-1 argument");
  if (v.dim() != dim) throw DimMismatch("functional dim differs");
  Scalar s;
  for (const auto& [k, c] : v.terms())
    if (!coords[k].is_zero()) s += coords[k] * c;
  return s;
}

bool Functional::is_zero() const {
  return std::all_of(coords.begin(), coords.end(), [](const Scalar& c) { return c.is_zero(); });
}

Functional Functional::scaled(const Scalar& c) const {
  Functional r = *this;
  for (auto& x : r.coords) x = x * c;
  return r;
}

Functional operator+(const Functional& a, const Functional& b) {
  if (a.dim != b.dim) throw DimMismatch("functional dims differ");
  Functional r = a;
  for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] += b.coords[i];
  return r;
}

Functional operator-(const Functional& a, const Functional& b) {
  if (a.dim != b.dim) throw DimMismatch("functional dims differ");
  Functional r = a;
  for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] -= b.coords[i];
  return r;
}

Scalar Functional::ratio_to(const Functional& other) const {
  return Tensor::from_dense(coords).ratio_to(Tensor::from_dense(other.coords));
}

std::string Functional::str(const std::vector<std::string>& labels) const {
  std::string s;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i].is_zero()) continue;
    append_term(s, coords[i], "P_" + (i < labels.size() ? labels[i] : "e" + std::to_string(i)));
  }
  return s.empty() ? "0" : s;
}

// ---- LinearOperator ---------------------------------------------------------

LinearOperator::LinearOperator(int src_rank, int dst_rank, int dim)
    : src_rank_(src_rank), dst_rank_(dst_rank), dim_(dim) {
  KeyCodec kc(src_rank, dim);
  cols_.assign(kc.size(), Tensor(dst_rank, dim));
}

LinearOperator LinearOperator::identity(int dim) {
  LinearOperator op(1, 1, dim);
  for (int i = 0; i < dim; ++i) op.cols_[i] = Tensor::basis(dim, i);
  return op;
}

LinearOperator LinearOperator::from_columns(int dst_rank, std::vector<Tensor> cols) {
  LinearOperator op(1, dst_rank, int(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) op.set_column(i, std::move(cols[i]));
  return op;
}

void LinearOperator::set_column(Key k, Tensor t) {
  if (t.rank() != dst_rank_ || t.dim() != dim_) throw RankMismatch("operator column shape mismatch");
  cols_[k] = std::move(t);
}

Tensor LinearOperator::apply(const Tensor& t) const {
  if (t.rank() != src_rank_) throw RankMismatch("operator source rank mismatch");
  if (t.dim() != dim_) throw DimMismatch("operator dim mismatch");
  TensorBuilder b(dst_rank_, dim_);
  for (const auto& [k, c] : t.terms()) b.add(cols_[k], c);
  return b.build();
}

LinearOperator LinearOperator::compose(const LinearOperator& inner) const {
  LinearOperator out(inner.src_rank_, dst_rank_, dim_);
  for (std::size_t k = 0; k < inner.cols_.size(); ++k) out.cols_[k] = apply(inner.cols_[k]);
  return out;
}

Matrix LinearOperator::matrix() const {
  if (src_rank_ != 1 || dst_rank_ != 1) throw RankMismatch("matrix() needs a 1→1 operator");
  Matrix m(std::size_t(dim_), std::vector<Scalar>(static_cast<std::size_t>(dim_)));
  for (int j = 0; j < dim_; ++j)
    for (const auto& [k, c] : cols_[j].terms()) m[k][j] = c;
  return m;
}

LinearOperator LinearOperator::from_matrix(const Matrix& m) {
  int n = int(m.size());
  LinearOperator op(1, 1, n);
  for (int j = 0; j < n; ++j) {
    std::vector<Scalar> col(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) col[i] = m[i][j];
    op.cols_[j] = Tensor::from_dense(col);
  }
  return op;
}

// ---- MultTable --------------------------------------------------------------

MultTable::MultTable(int dim) : dim_(dim), prod_(std::size_t(dim) * std::size_t(dim), Tensor(1, dim)) {}

void MultTable::set(int i, int j, Tensor v) {
  if (v.rank() != 1 || v.dim() != dim_) throw RankMismatch("product must be a rank-1 element");
  prod_[std::size_t(i) * std::size_t(dim_) + std::size_t(j)] = std::move(v);
}

Tensor MultTable::mul(const Tensor& a, const Tensor& b) const {
  if (a.dim() != dim_ || b.dim() != dim_) throw DimMismatch("element dim differs from algebra");
  if (a.rank() != 1 || b.rank() != 1) throw RankMismatch("mul needs rank-1 elements");
  TensorBuilder out(1, dim_);
  for (const auto& [i, ca] : a.terms())
    for (const auto& [j, cb] : b.terms()) out.add(at(int(i), int(j)), ca * cb);
  return out.build();
}

LinearOperator MultTable::left_mul(const Tensor& a) const {
  std::vector<Tensor> cols;
  for (int j = 0; j < dim_; ++j) cols.push_back(mul(a, Tensor::basis(dim_, j)));
  return LinearOperator::from_columns(1, std::move(cols));
}

LinearOperator MultTable::right_mul(const Tensor& a) const {
  std::vector<Tensor> cols;
  for (int j = 0; j < dim_; ++j) cols.push_back(mul(Tensor::basis(dim_, j), a));
  return LinearOperator::from_columns(1, std::move(cols));
}

// ---- free functions ---------------------------------------------------------

Tensor tensor_product(const Tensor& a, const Tensor& b) {
  if (a.dim() != b.dim()) throw DimMismatch("tensor_product dims differ");
  KeyCodec kb(b.rank(), b.dim());
  Key shift = kb.size();
  std::vector<Term> out;
  out.reserve(a.nnz() * b.nnz());
  for (const auto& [ka, ca] : a.terms())
    for (const auto& [kb2, cb] : b.terms()) out.push_back({ka * shift + kb2, ca * cb});
  KeyCodec(a.rank() + b.rank(), a.dim());  // overflow guard
  return Tensor(a.rank() + b.rank(), a.dim(), std::move(out));
}

namespace {

// Terms of a sub-tensor are (suffix key, coefficient); `legs` legs remain.
void pointwise_rec(const MultTable& m, const Term* a, std::size_t na, const Term* b, std::size_t nb, int legs,
                   int leg0, uint32_t flip, Key prefix, const Scalar& scale, const std::vector<Key>& pow,
                   TensorBuilder& out) {
  const Key w = pow[legs - 1];
  if (legs == 1) {
    for (std::size_t i = 0; i < na; ++i)
      for (std::size_t j = 0; j < nb; ++j) {
        const Tensor& p = (flip >> leg0) & 1u ? m.at(int(b[j].first), int(a[i].first))
                                              : m.at(int(a[i].first), int(b[j].first));
        if (p.is_zero()) continue;
        Scalar c = scale * a[i].second * b[j].second;
        for (const auto& [k, v] : p.terms()) out.add(prefix + k, c * v);
      }
    return;
  }
  // Group consecutive terms by their leading index.
  std::vector<std::pair<std::size_t, std::size_t>> ga, gb;
  for (std::size_t i = 0; i < na;) {
    std::size_t j = i;
    while (j < na && a[j].first / w == a[i].first / w) ++j;
    ga.push_back({i, j});
    i = j;
  }
  for (std::size_t i = 0; i < nb;) {
    std::size_t j = i;
    while (j < nb && b[j].first / w == b[i].first / w) ++j;
    gb.push_back({i, j});
    i = j;
  }
  std::vector<Term> sa, sb;
  for (auto [ab, ae] : ga) {
    int ia = int(a[ab].first / w);
    sa.clear();
    for (std::size_t t = ab; t < ae; ++t) sa.push_back({a[t].first % w, a[t].second});
    for (auto [bb, be] : gb) {
      int ib = int(b[bb].first / w);
      const Tensor& p = (flip >> leg0) & 1u ? m.at(ib, ia) : m.at(ia, ib);
      if (p.is_zero()) continue;
      sb.clear();
      for (std::size_t t = bb; t < be; ++t) sb.push_back({b[t].first % w, b[t].second});
      for (const auto& [k, v] : p.terms())
        pointwise_rec(m, sa.data(), sa.size(), sb.data(), sb.size(), legs - 1, leg0 + 1, flip, prefix + k * w,
                      scale * v, pow, out);
    }
  }
}

}  // namespace

Tensor mult_pointwise(const MultTable& m, const Tensor& a, const Tensor& b, uint32_t flip_mask) {
  check_same(a, b);
  if (a.dim() != m.dim()) throw DimMismatch("tensor dim differs from algebra");
  int r = a.rank();
  std::vector<Key> pow(std::size_t(r) + 1, 1);
  for (int i = 1; i <= r; ++i) pow[i] = pow[i - 1] * Key(a.dim());
  TensorBuilder out(r, a.dim());
  pointwise_rec(m, a.terms().data(), a.nnz(), b.terms().data(), b.nnz(), r, 0, flip_mask, 0, Scalar(1), pow, out);
  return out.build();
}

Tensor apply_on_leg(const LinearOperator& op, const Tensor& t, int leg) {
  if (leg < 0 || leg >= t.rank()) throw LegOutOfRange("leg " + std::to_string(leg));
  if (op.src_rank() != 1) throw RankMismatch("apply_on_leg needs a rank-1 source operator");
  if (op.dim() != t.dim()) throw DimMismatch("operator dim differs");
  const int n = t.dim();
  const int r = t.rank();
  const int m = op.dst_rank();
  KeyCodec kin(r, n);
  KeyCodec kout(r - 1 + m, n);
  const Key w_in = kin.weight(leg);
  const Key hi_in = w_in * Key(n);
  const Key mid = KeyCodec(m, n).size();
  TensorBuilder out(r - 1 + m, n);
  for (const auto& [k, c] : t.terms()) {
    Key high = k / hi_in, low = k % w_in;
    int idx = int((k / w_in) % Key(n));
    for (const auto& [kc, v] : op.column(Key(idx)).terms()) out.add((high * mid + kc) * w_in + low, c * v);
  }
  return out.build();
}

Tensor contract(const Functional& f, const Tensor& t, int leg) {
  if (leg < 0 || leg >= t.rank()) throw LegOutOfRange("leg " + std::to_string(leg));
  if (t.rank() < 2) throw RankMismatch("contract needs rank ≥ 2; use contract_full");
  if (f.dim != t.dim()) throw DimMismatch("functional dim differs");
  const int n = t.dim();
  KeyCodec kin(t.rank(), n);
  const Key w = kin.weight(leg);
  TensorBuilder out(t.rank() - 1, n);
  for (const auto& [k, c] : t.terms()) {
    int idx = int((k / w) % Key(n));
    if (f.coords[idx].is_zero()) continue;
    Key nk = (k / (w * Key(n))) * w + k % w;
    out.add(nk, c * f.coords[idx]);
  }
  return out.build();
}

Scalar contract_full(const Functional& f, const Tensor& t) { return f(t); }

// ---- exact linear algebra ---------------------------------------------------

namespace {

mpz_class lcm_den(const std::vector<Scalar>& row) {
  mpz_class l = 1;
  for (const auto& s : row) {
    if (!s.re().is_integer()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), s.re().to_mpq().get_den_mpz_t());
    if (!s.im().is_integer()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), s.im().to_mpq().get_den_mpz_t());
  }
  return l;
}

bool row_zero(const std::vector<Scalar>& r) {
  return std::all_of(r.begin(), r.end(), [](const Scalar& s) { return s.is_zero(); });
}

// Fraction-free (Bareiss) reduction to row echelon form. Rows are first
// scaled to Gaussian integers, so every division below is exact in Z[i].
std::vector<int> bareiss_echelon(Matrix& a, int ncols) {
  std::vector<std::vector<Scalar>> rows;
  for (auto& r : a) {
    if (row_zero(r)) continue;
    mpz_class l = lcm_den(r);
    if (l != 1) {
      Scalar s(Rational::from_mpq(mpq_class(l)));
      for (auto& x : r) x = x * s;
    }
    rows.push_back(std::move(r));
  }
  std::vector<int> pivots;
  Scalar prev(1);
  std::size_t r = 0;
  for (int c = 0; c < ncols && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c].is_zero()) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[r], rows[p]);
    const Scalar piv = rows[r][c];
    Scalar prev_inv = prev.inverse();
    std::vector<std::vector<Scalar>> keep(rows.begin(), rows.begin() + std::ptrdiff_t(r) + 1);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      auto& row = rows[i];
      const Scalar f = row[c];
      for (int j = c + 1; j < ncols; ++j) {
        Scalar v = piv * row[j];
        if (!f.is_zero() && !rows[r][j].is_zero()) v -= f * rows[r][j];
        row[j] = prev.is_one() ? v : v * prev_inv;
      }
      row[c] = Scalar();
      if (!row_zero(row)) keep.push_back(std::move(row));
    }
    rows = std::move(keep);
    prev = piv;
    pivots.push_back(c);
    ++r;
  }
  rows.resize(pivots.size());
  a = std::move(rows);
  return pivots;
}

}  // namespace

std::vector<std::vector<Scalar>> kernel_basis(const Matrix& rows_in, int n) {
  Matrix a;
  for (const auto& r : rows_in) {
    if (int(r.size()) != n) throw DimMismatch("equation length differs from unknown count");
    a.push_back(r);
  }
  std::vector<int> piv = bareiss_echelon(a, n);
  std::vector<char> is_piv(std::size_t(n), 0);
  for (int c : piv) is_piv[c] = 1;
  std::vector<std::vector<Scalar>> basis;
  for (int f = 0; f < n; ++f) {
    if (is_piv[f]) continue;
    std::vector<Scalar> x(static_cast<std::size_t>(n));
    x[f] = Scalar(1);
    for (int k = int(piv.size()) - 1; k >= 0; --k) {
      int pc = piv[k];
      Scalar s;
      for (int j = pc + 1; j < n; ++j)
        if (!a[k][j].is_zero() && !x[j].is_zero()) s += a[k][j] * x[j];
      x[pc] = -(s / a[k][pc]);
    }
    auto first = std::find_if(x.begin(), x.end(), [](const Scalar& v) { return !v.is_zero(); });
    Scalar inv = first->inverse();
    for (auto& v : x) v = v * inv;
    basis.push_back(std::move(x));
  }
  return basis;
}

int matrix_rank(const Matrix& rows, int n) {
  Matrix a = rows;
  return int(bareiss_echelon(a, n).size());
}

bool invert_matrix(const Matrix& in, Matrix& out) {
  const std::size_t n = in.size();
  Matrix a = in;
  out.assign(n, std::vector<Scalar>(n));
  for (std::size_t i = 0; i < n; ++i) out[i][i] = Scalar(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c].is_zero()) ++p;
    if (p == n) return false;
    std::swap(a[c], a[p]);
    std::swap(out[c], out[p]);
    Scalar inv = a[c][c].inverse();
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] = a[c][j] * inv;
      out[c][j] = out[c][j] * inv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c].is_zero()) continue;
      Scalar f = a[i][c];
      for (std::size_t j = 0; j < n; ++j) {
        if (!a[c][j].is_zero()) a[i][j] -= f * a[c][j];
        if (!out[c][j].is_zero()) out[i][j] -= f * out[c][j];
      }
    }
  }
  return true;
}

}  // namespace qha
