#include "qha/qha.hpp"

#include <algorithm>

namespace qha {

Tensor QhaPresentation::unit_power(int k) const {
  Tensor t = unit;
  for (int i = 1; i < k; ++i) t = tensor_product(t, unit);
  return t;
}

int QhaPresentation::index_of(const std::string& label) const {
  auto it = std::find(basis.begin(), basis.end(), label);
  return it == basis.end() ? -1 : int(it - basis.begin());
}

bool operator==(const QhaPresentation& a, const QhaPresentation& b) {
  if (a.dim != b.dim || a.basis != b.basis) return false;
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j)
      if (a.mult.at(i, j) != b.mult.at(i, j)) return false;
  return a.unit == b.unit && a.coproduct == b.coproduct && a.counit == b.counit && a.phi == b.phi &&
         a.phi_inv == b.phi_inv && a.antipode == b.antipode && a.alpha == b.alpha && a.beta == b.beta;
}

// ---- reports ----------------------------------------------------------------

bool VerificationReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

std::size_t VerificationReport::failures() const {
  return std::size_t(std::count_if(rows.begin(), rows.end(), [](const ReportRow& r) { return !r.pass; }));
}

void VerificationReport::add_residual(const std::string& suite, const std::string& name, const Tensor& residual,
                                      std::string note) {
  ReportRow r{suite, name, residual.is_zero(), std::nullopt, std::move(note)};
  if (!r.pass) r.witness = residual;
  rows.push_back(std::move(r));
}

void VerificationReport::add_equal(const std::string& suite, const std::string& name, const Tensor& lhs,
                                   const Tensor& rhs, std::string note) {
  add_residual(suite, name, lhs - rhs, std::move(note));
}

void VerificationReport::add_bool(const std::string& suite, const std::string& name, bool ok, std::string note) {
  ReportRow r{suite, name, ok, std::nullopt, std::move(note)};
  if (!ok) r.witness = Tensor::basis(1, 0);
  rows.push_back(std::move(r));
}

void VerificationReport::append(const VerificationReport& other) {
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

const ReportRow* VerificationReport::find(const std::string& name) const {
  for (const auto& r : rows)
    if (r.name == name) return &r;
  return nullptr;
}

// ---- helpers ----------------------------------------------------------------

Tensor coproduct_of(const QhaPresentation& H, const Tensor& h) { return H.coproduct.apply(h); }
Scalar counit_of(const QhaPresentation& H, const Tensor& h) { return H.counit(h); }

namespace {

/// Incrementally maintained row-reduced span of dense vectors.
class Span {
 public:
  explicit Span(int n) : n_(n) {}
  bool contains(std::vector<Scalar> v) const { return reduce(v); }
  bool add(std::vector<Scalar> v) {
    if (reduce(v)) return false;
    int p = 0;
    while (v[p].is_zero()) ++p;
    Scalar inv = v[p].inverse();
    for (auto& x : v) x = x * inv;
    for (auto& [pc, row] : rows_)
      if (!row[p].is_zero()) {
        Scalar f = row[p];
        for (int j = 0; j < n_; ++j)
          if (!v[j].is_zero()) row[j] -= f * v[j];
      }
    rows_.push_back({p, std::move(v)});
    return true;
  }
  int size() const { return int(rows_.size()); }

 private:
  // true when v reduces to zero
  bool reduce(std::vector<Scalar>& v) const {
    for (const auto& [p, row] : rows_) {
      if (v[p].is_zero()) continue;
      Scalar f = v[p];
      for (int j = 0; j < n_; ++j)
        if (!row[j].is_zero()) v[j] -= f * row[j];
    }
    return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
  }
  int n_;
  std::vector<std::pair<int, std::vector<Scalar>>> rows_;
};

Bindings axiom_bindings(const QhaPresentation& H) {
  Bindings b;
  b.set("X", H.phi).set("x", H.phi_inv).set("alpha", H.alpha).set("beta", H.beta);
  b.set_op("S", H.antipode);
  b.set_fn("eps", H.counit);
  return b;
}

// Φ·Φ⁻¹ and Φ⁻¹·Φ through the pure-tensor evaluator; legwise products of the
// dense tensors are quadratic in their support.
std::pair<Tensor, Tensor> phi_products(const QhaPresentation& H) {
  const Bindings b = axiom_bindings(H);
  return {evaluate(H.view(), "X1 x1 | X2 x2 | X3 x3", b), evaluate(H.view(), "x1 X1 | x2 X2 | x3 X3", b)};
}

void structural_checks(const QhaPresentation& H) {
  auto bad = [](const std::string& w) { throw Error("SchemaError", w); };
  const int n = H.dim;
  if (n <= 0) bad("dimension must be positive");
  if (int(H.basis.size()) != n) bad("basis label count differs from dim");
  if (H.mult.dim() != n) bad("multiplication table has wrong dimension");
  if (H.unit.rank() != 1 || H.unit.dim() != n) bad("unit must be a rank-1 element");
  if (H.coproduct.dim() != n || H.coproduct.src_rank() != 1 || H.coproduct.dst_rank() != 2)
    bad("coproduct must map H to H⊗H");
  if (H.counit.dim != n) bad("counit has wrong length");
  if (H.phi.rank() != 3 || H.phi.dim() != n || H.phi_inv.rank() != 3 || H.phi_inv.dim() != n)
    bad("phi and phi_inv must be rank-3 tensors");
  if (H.antipode.dim() != n || H.antipode.src_rank() != 1 || H.antipode.dst_rank() != 1)
    bad("antipode must map H to H");
  if (H.alpha.rank() != 1 || H.alpha.dim() != n || H.beta.rank() != 1 || H.beta.dim() != n)
    bad("alpha and beta must be rank-1 elements");
}

// Two residuals as one tensor with a leading selector leg (e_0 / e_1).
Tensor stack2(const QhaPresentation& H, const Tensor& a, const Tensor& b) {
  if (H.dim == 1) return tensor_product(H.e(0), a + b);
  return tensor_product(H.e(0), a) + tensor_product(H.e(1), b);
}

Field data_field(const QhaPresentation& H) {
  Field f = H.unit.field();
  for (int i = 0; i < H.dim; ++i) {
    for (int j = 0; j < H.dim; ++j) f = join(f, H.mult.at(i, j).field());
    f = join(f, H.coproduct.column(Key(i)).field());
    f = join(f, H.antipode.column(Key(i)).field());
    if (!H.counit.coords[i].im().is_zero()) f = Field::QI;
  }
  for (const Tensor* t : {&H.phi, &H.phi_inv, &H.alpha, &H.beta}) f = join(f, t->field());
  return f;
}

}  // namespace

std::vector<int> algebra_generators(const QhaPresentation& H) {
  const int n = H.dim;
  Span span(n);
  std::vector<Tensor> members;  // elements whose span is the current subalgebra
  auto absorb = [&](const Tensor& t) {
    if (span.add(t.dense())) members.push_back(t);
  };
  absorb(H.unit);
  std::vector<int> gens;
  for (int b = 0; b < n && span.size() < n; ++b) {
    if (span.contains(H.e(b).dense())) continue;
    gens.push_back(b);
    absorb(H.e(b));
    // close under right multiplication by generators
    for (std::size_t i = 0; i < members.size() && span.size() < n; ++i)
      for (int g : gens) absorb(H.mul(members[i], H.e(g)));
  }
  return gens;
}

VerificationReport verify_axioms(const QhaPresentation& H) {
  const std::string suite = "axioms";
  VerificationReport rep;
  const int n = H.dim;
  const AlgebraView A = H.view();
  Bindings b = axiom_bindings(H);

  {  // associativity on all basis triples; witness legs (i, j, k, output)
    TensorBuilder res(4, n);
    KeyCodec k4(4, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Tensor& ij = H.mult.at(i, j);
        for (int k = 0; k < n; ++k) {
          TensorBuilder d(1, n);
          for (const auto& [t, c] : ij.terms()) d.add(H.mult.at(int(t), k), c);
          for (const auto& [t, c] : H.mult.at(j, k).terms()) d.add(H.mult.at(i, int(t)), -c);
          Tensor r = d.build();
          int idx[4] = {i, j, k, 0};
          Key base = k4.pack(idx);
          for (const auto& [t, c] : r.terms()) res.add(base + t, c);
        }
      }
    rep.add_residual(suite, "assoc", res.build());
  }
  {
    TensorBuilder res(2, n);
    for (int i = 0; i < n; ++i) {
      Tensor r = H.mul(H.unit, H.e(i)) - H.e(i) + (H.mul(H.e(i), H.unit) - H.e(i));
      for (const auto& [t, c] : r.terms()) res.add(Key(i) * Key(n) + t, c);
    }
    rep.add_residual(suite, "unit", res.build());
  }

  std::vector<int> gens;
  if (n <= 16) {
    for (int i = 0; i < n; ++i) gens.push_back(i);
  } else {
    gens = algebra_generators(H);
  }
  std::string gen_note = n <= 16 ? "all basis pairs" : "generators × basis (" + std::to_string(gens.size()) + " generators)";

  rep.add_equal(suite, "delta_unit", coproduct_of(H, H.unit), H.unit_power(2));
  {
    TensorBuilder res(3, n);
    Bindings db;
    for (int a : gens)
      for (int c = 0; c < n; ++c) {
        db.set("a", H.e(a)).set("c", H.e(c));
        Tensor lhs = coproduct_of(H, H.mult.at(a, c));
        Tensor rhs = evaluate(A, "a_1 c_1 | a_2 c_2", db);
        res.add(tensor_product(H.e(a), lhs - rhs));
      }
    rep.add_residual(suite, "delta_mult", res.build(), gen_note);
  }
  {
    TensorBuilder res(2, n);
    for (int a : gens)
      for (int c = 0; c < n; ++c) {
        Scalar d = counit_of(H, H.mult.at(a, c)) - H.counit.coords[a] * H.counit.coords[c];
        res.add(Key(a) * Key(n) + Key(c), d);
      }
    rep.add_residual(suite, "counit_mult", res.build(), gen_note);
    rep.add_residual(suite, "counit_unit", Tensor::pure(n, {0}, counit_of(H, H.unit) - Scalar(1)));
  }

  // q1: (id⊗Δ)Δ(h)·Φ = Φ·(Δ⊗id)Δ(h). q1 and q5 are closed under products
  // once Δ is multiplicative and S anti-multiplicative, so large algebras
  // are checked on the unit and the generators.
  std::vector<Tensor> q_elems;
  if (n <= 16) {
    for (int i = 0; i < n; ++i) q_elems.push_back(H.e(i));
  } else {
    q_elems.push_back(H.unit);
    for (int g : gens) q_elems.push_back(H.e(g));
  }
  const std::string q_note = n <= 16 ? "all basis elements" : "unit and generators";
  TensorBuilder q1(4, n), q2(2, n), q5(2, n);
  for (std::size_t s = 0; s < q_elems.size(); ++s) {
    const Tensor& h = q_elems[s];
    const Tensor slot = H.e(int(s));
    b.set("h", h);
    Tensor lhs = evaluate(A, "h_1 X1 | h_(2,1) X2 | h_(2,2) X3", b);
    Tensor rhs = evaluate(A, "X1 h_(1,1) | X2 h_(1,2) | X3 h_2", b);
    q1.add(tensor_product(slot, lhs - rhs));
    const Scalar eh = counit_of(H, h);
    q5.add(tensor_product(slot, evaluate(A, "S(h_1) alpha h_2", b) - H.alpha.scaled(eh)));
    q5.add(tensor_product(slot, evaluate(A, "h_1 beta S(h_2)", b) - H.beta.scaled(eh)));
  }
  for (int h = 0; h < n; ++h) {
    Tensor d = coproduct_of(H, H.e(h));
    q2.add(tensor_product(H.e(h), contract(H.counit, d, 0) - H.e(h)));
    q2.add(tensor_product(H.e(h), contract(H.counit, d, 1) - H.e(h)));
  }
  rep.add_residual(suite, "q1", q1.build(), q_note);
  rep.add_residual(suite, "q2", q2.build());
  {
    Bindings pb = b;
    pb.set("Y", H.phi).set("Z", H.phi);
    Tensor lhs = evaluate(A, "X1 Z1 | Y1 X2_1 Z2 | Y2 X2_2 Z3 | Y3 X3", pb);
    Tensor rhs = evaluate(A, "X1 Y1_1 | X2 Y1_2 | X3_1 Y2 | X3_2 Y3", pb);
    rep.add_equal(suite, "q3", lhs, rhs);
  }
  rep.add_equal(suite, "q4", contract(H.counit, H.phi, 1), H.unit_power(2));
  rep.add_residual(suite, "q5", q5.build(), q_note);
  {
    Tensor r1 = evaluate(A, "X1 beta S(X2) alpha X3", b) - H.unit;
    Tensor r2 = evaluate(A, "S(x1) alpha x2 beta S(x3)", b) - H.unit;
    rep.add_residual(suite, "q6", stack2(H, r1, r2));
  }
  {
    Tensor r = contract(H.counit, H.phi, 0) - H.unit_power(2);
    Tensor r2 = contract(H.counit, H.phi, 2) - H.unit_power(2);
    rep.add_residual(suite, "q7", stack2(H, r, r2));
  }
  {
    Tensor one3 = H.unit_power(3);
    const auto [pp, qq] = phi_products(H);
    Tensor r1 = pp - one3;
    Tensor r2 = qq - one3;
    rep.add_residual(suite, "phi_invertible", stack2(H, r1, r2));
  }
  {
    TensorBuilder res(2, n);
    for (int a : gens)
      for (int c = 0; c < n; ++c) {
        Tensor lhs = H.antipode.apply(H.mult.at(a, c));
        const Tensor diff = lhs - H.mul(H.antipode.column(Key(c)), H.antipode.column(Key(a)));
        for (const auto& [t, v] : diff.terms()) res.add(Key(a) * Key(n) + t, v);
      }
    rep.add_residual(suite, "antipode_antimult", res.build(), gen_note);
  }
  {
    TensorBuilder res(1, n);
    for (int i = 0; i < n; ++i) res.add(Key(i), counit_of(H, H.antipode.column(Key(i))) - H.counit.coords[i]);
    rep.add_residual(suite, "counit_antipode", res.build());
  }
  {
    TensorBuilder res(1, n);
    res.add(0, counit_of(H, H.alpha) - Scalar(1));
    Tensor ra = res.build();
    Tensor rb = Tensor::pure(n, {0}, counit_of(H, H.beta) - Scalar(1));
    rep.add_residual(suite, "counit_alpha_beta", stack2(H, ra, rb));
  }
  return rep;
}

QhaPresentation load_and_validate(QhaPresentation H) {
  structural_checks(H);
  H.field = join(H.field, data_field(H));
  Tensor one3 = H.unit_power(3);
  const auto [pp, qq] = phi_products(H);
  if (pp != one3 || qq != one3)
    throw Error("NonInvertiblePhi", "phi_inv is not the inverse of phi");
  Scalar ea = counit_of(H, H.alpha), eb = counit_of(H, H.beta);
  if (ea * eb != Scalar(1))
    throw Error("BadCounitNormalization", "eps(alpha)eps(beta) = " + (ea * eb).str() + " != 1");
  if (!ea.is_one()) {
    H.alpha = H.alpha.scaled(ea.inverse());
    H.beta = H.beta.scaled(ea);
  }
  VerificationReport rep = verify_axioms(H);
  for (const auto& r : rep.rows)
    if (!r.pass) throw AxiomViolation(r.name, r.witness ? *r.witness : Tensor());
  return H;
}

LinearOperator antipode_inverse(const QhaPresentation& H) {
  Matrix inv;
  if (!invert_matrix(H.antipode.matrix(), inv)) throw SingularAntipode();
  return LinearOperator::from_matrix(inv);
}

QhaPresentation variant(const QhaPresentation& H, Variant which) {
  QhaPresentation V = H;
  const int n = H.dim;
  const bool op = which == Variant::Op || which == Variant::OpCop;
  const bool cop = which == Variant::Cop || which == Variant::OpCop;
  if (op) {
    MultTable m(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.set(i, j, H.mult.at(j, i));
    V.mult = std::move(m);
  }
  if (cop) {
    LinearOperator d(1, 2, n);
    for (int i = 0; i < n; ++i) d.set_column(Key(i), H.coproduct.column(Key(i)).flip());
    V.coproduct = std::move(d);
  }
  switch (which) {
    case Variant::Op: {
      LinearOperator Si = antipode_inverse(H);
      V.name = H.name + "^op";
      V.phi = H.phi_inv;
      V.phi_inv = H.phi;
      V.antipode = Si;
      V.alpha = Si.apply(H.beta);
      V.beta = Si.apply(H.alpha);
      break;
    }
    case Variant::Cop: {
      LinearOperator Si = antipode_inverse(H);
      V.name = H.name + "^cop";
      V.phi = H.phi_inv.permute({2, 1, 0});
      V.phi_inv = H.phi.permute({2, 1, 0});
      V.antipode = Si;
      V.alpha = Si.apply(H.alpha);
      V.beta = Si.apply(H.beta);
      break;
    }
    case Variant::OpCop:
      V.name = H.name + "^opcop";
      V.phi = H.phi.permute({2, 1, 0});
      V.phi_inv = H.phi_inv.permute({2, 1, 0});
      V.alpha = H.beta;
      V.beta = H.alpha;
      break;
  }
  return V;
}

Tensor iterated_coproduct(const QhaPresentation& H, const Tensor& t, const std::string& plan) {
  return iterate_coproduct(H.coproduct, t, plan);
}

Functional hit(const QhaPresentation& H, const Tensor& h, const Functional& phi) {
  Functional r(H.dim);
  for (int i = 0; i < H.dim; ++i) r.coords[i] = phi(H.mul(H.e(i), h));
  return r;
}

Functional hit(const QhaPresentation& H, const Functional& phi, const Tensor& h) {
  Functional r(H.dim);
  for (int i = 0; i < H.dim; ++i) r.coords[i] = phi(H.mul(h, H.e(i)));
  return r;
}

Tensor coact_left(const QhaPresentation& H, const Functional& phi, const Tensor& h) {
  return contract(phi, coproduct_of(H, h), 1);
}

Tensor coact_right(const QhaPresentation& H, const Tensor& h, const Functional& phi) {
  return contract(phi, coproduct_of(H, h), 0);
}

}  // namespace qha
