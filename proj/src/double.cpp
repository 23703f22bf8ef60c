#include "qha/double.hpp"

#include <functional>
#include <vector>

namespace qha {

namespace {

const std::string kSuite = "double";

Tensor identity2(int n) {
  TensorBuilder b(2, n);
  for (int i = 0; i < n; ++i) b.add(Key(i) * Key(n) + Key(i), Scalar(1));
  return b.build();
}

template <class F>
void for_each_term(const Tensor& t, F&& fn) {
  const KeyCodec c = t.codec();
  std::vector<int> idx(std::size_t(t.rank()));
  for (const auto& [k, v] : t.terms()) {
    c.unpack(k, idx.data());
    fn(idx.data(), v);
  }
}

/// i_D on every leg.
Tensor embed_legs(const QuantumDouble& D, const Tensor& t) {
  const int N = D.n * D.n, r = t.rank();
  TensorBuilder out(r, N);
  const KeyCodec oc(r, N);
  std::vector<int> oi(static_cast<std::size_t>(r));
  for_each_term(t, [&](const int* idx, const Scalar& c) {
    std::function<void(int, const Scalar&)> rec = [&](int leg, const Scalar& acc) {
      if (leg == r) {
        out.add(oc.pack(oi), acc);
        return;
      }
      for (int i = 0; i < D.n; ++i) {
        const Scalar& e = D.eps_H.coords[std::size_t(i)];
        if (e.is_zero()) continue;
        oi[std::size_t(leg)] = D.index(i, idx[leg]);
        rec(leg + 1, acc * e);
      }
    };
    rec(0, c);
  });
  return out.build();
}

/// P[A][z] = (ε⋈e_A)·e_z in D(H).
std::vector<std::vector<Tensor>> embedded_left_products(const QuantumDouble& D) {
  const int N = D.n * D.n;
  std::vector<std::vector<Tensor>> P(std::size_t(D.n));
  for (int A = 0; A < D.n; ++A) {
    const Tensor ea = D.embed(Tensor::basis(D.n, A));
    for (int z = 0; z < N; ++z) P[std::size_t(A)].push_back(D.pres.mult.mul(ea, Tensor::basis(N, z)));
  }
  return P;
}

/// Operator e^a⋈e_j ↦ Σ c·(ε⋈e_A)(e^k⋈e_m) from a tensor with legs [k, a, j, A, m].
LinearOperator assemble_antipode(const QuantumDouble& D, const Tensor& T,
                                 const std::vector<std::vector<Tensor>>& P) {
  const int N = D.n * D.n;
  std::vector<TensorBuilder> cols;
  cols.reserve(std::size_t(N));
  for (int x = 0; x < N; ++x) cols.emplace_back(1, N);
  for_each_term(T, [&](const int* i, const Scalar& c) {
    cols[std::size_t(D.index(i[1], i[2]))].add(P[std::size_t(i[3])][std::size_t(D.index(i[0], i[4]))], c);
  });
  std::vector<Tensor> out;
  for (auto& b : cols) out.push_back(b.build());
  return LinearOperator::from_columns(1, std::move(out));
}

Bindings double_bindings(AlgebraContext& ctx) {
  ctx.canonical();
  ctx.omega();
  Bindings b = ctx.bindings();
  const Tensor id = identity2(ctx.dim());
  b.set("I", id).set("J", id);
  return b;
}

Functional functional_from(AlgebraContext& ctx, Bindings& b, const char* formula) {
  Functional f(ctx.dim());
  for (int i = 0; i < ctx.dim(); ++i) {
    b.set("h", ctx.H().e(i));
    f.coords[std::size_t(i)] = ctx.eval_scalar(formula, b);
  }
  return f;
}

Tensor embed_op_residual(const QuantumDouble& D, const LinearOperator& opD, const LinearOperator& opH) {
  std::vector<Tensor> parts;
  for (int i = 0; i < D.n; ++i)
    parts.push_back(opD.apply(D.embed(Tensor::basis(D.n, i))) - D.embed(opH.column(Key(i))));
  return stack(parts, D.n);
}

std::string err_note(const Error& e) { return e.what(); }

}  // namespace

Tensor QuantumDouble::smash(const Functional& phi, const Tensor& h) const {
  TensorBuilder b(1, n * n);
  for (int i = 0; i < n; ++i) {
    const Scalar& p = phi.coords[std::size_t(i)];
    if (p.is_zero()) continue;
    for (const auto& [u, c] : h.terms()) b.add(Key(index(i, int(u))), p * c);
  }
  return b.build();
}

Tensor QuantumDouble::embed(const Tensor& h) const { return smash(eps_H, h); }

Functional QuantumDouble::pairing(const Tensor& x, const Functional& psi) const {
  Functional f(n * n);
  for (const auto& [i, c] : x.terms())
    for (int j = 0; j < n; ++j) f.coords[std::size_t(index(int(i), j))] = c * psi.coords[std::size_t(j)];
  return f;
}

QuantumDouble build_double(AlgebraContext& ctx, bool validate) {
  const QhaPresentation& H = ctx.H();
  const int n = H.dim, N = n * n;
  QuantumDouble D;
  D.n = n;
  D.eps_H = H.counit;
  D.omega = ctx.omega();
  Bindings b = double_bindings(ctx);

  QhaPresentation& P = D.pres;
  P.name = "D(" + H.name + ")";
  P.dim = N;
  P.field = H.field;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) P.basis.push_back("P_" + H.basis[std::size_t(i)] + "⋈" + H.basis[std::size_t(j)]);

  {  // (e^a⋈e_j)(e^c⋈e_d) = Σ M[k, j, a, c, m] e^k⋈e_m e_d
    const Tensor M = ctx.eval("I1 | J1 | Om5 I2_1 Om1 | Si(J2_2) Om4 I2_2 Om2 J2_(1,1) | Om3 J2_(1,2)", b);
    std::vector<TensorBuilder> cells;
    cells.reserve(std::size_t(N) * std::size_t(N));
    for (int x = 0; x < N * N; ++x) cells.emplace_back(1, N);
    for_each_term(M, [&](const int* i, const Scalar& c) {
      const int x = D.index(i[2], i[1]);
      for (int d = 0; d < n; ++d) {
        auto& cell = cells[std::size_t(x) * std::size_t(N) + std::size_t(D.index(i[3], d))];
        for (const auto& [t, c2] : H.mult.at(i[4], d).terms()) cell.add(Key(D.index(i[0], int(t))), c * c2);
      }
    });
    P.mult = MultTable(N);
    for (int x = 0; x < N; ++x)
      for (int y = 0; y < N; ++y) P.mult.set(x, y, cells[std::size_t(x) * std::size_t(N) + std::size_t(y)].build());
  }
  P.unit = D.embed(H.unit);
  const auto Pl = embedded_left_products(D);

  {  // Δ_D(e^a⋈e_j) = Σ (ε⋈A)(e^c⋈k j₁) ⊗ (e^d⋈k' j₂), legs [c, d, a, A, k, k']
    const Tensor T = ctx.eval("I1 | J1 | Si(X3) J2 X2_1 Y2 Si(p2) I2 p1_1 x1 | X1 Y1 | p1_2 x2 | X2_2 Y3 x3", b);
    std::vector<TensorBuilder> cols;
    cols.reserve(std::size_t(N));
    for (int x = 0; x < N; ++x) cols.emplace_back(2, N);
    std::vector<Tensor> dj;
    for (int j = 0; j < n; ++j) dj.push_back(H.coproduct.column(Key(j)));
    for_each_term(T, [&](const int* i, const Scalar& c) {
      for (int j = 0; j < n; ++j)
        for (const auto& [jk, cj] : dj[std::size_t(j)].terms()) {
          const int j1 = int(jk / Key(n)), j2 = int(jk % Key(n));
          const Tensor& right = H.mult.at(i[5], j2);
          for (const auto& [t, c1] : H.mult.at(i[4], j1).terms()) {
            const Tensor& left = Pl[std::size_t(i[3])][std::size_t(D.index(i[0], int(t)))];
            for (const auto& [u, cu] : left.terms())
              for (const auto& [s, c2] : right.terms())
                cols[std::size_t(D.index(i[2], j))].add(u * Key(N) + Key(D.index(i[1], int(s))), c * cj * c1 * cu * c2);
          }
        }
    });
    std::vector<Tensor> out;
    for (auto& col : cols) out.push_back(col.build());
    P.coproduct = LinearOperator::from_columns(2, std::move(out));
  }

  P.counit = Functional(N);
  const Tensor sa = ctx.S_inv().apply(H.alpha);
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j)
      P.counit.coords[std::size_t(D.index(a, j))] = H.counit.coords[std::size_t(j)] * sa.coeff(Key(a));

  P.phi = embed_legs(D, H.phi);
  P.phi_inv = embed_legs(D, H.phi_inv);
  P.antipode = assemble_antipode(
      D, ctx.eval("I1 | Si(f2 Si(p2) I2 p1_1 U1) | J1 | S(J2) f1 | p1_2 U2", b), Pl);
  P.alpha = D.embed(H.alpha);
  P.beta = D.embed(H.beta);
  if (validate) P = load_and_validate(P);
  return D;
}

LinearOperator double_antipode_inverse(AlgebraContext& ctx, const QuantumDouble& D) {
  Bindings b = double_bindings(ctx);
  return assemble_antipode(
      D, ctx.eval("I1 | S(Si(p2 f1) I2 p1_1 Si(q2 g2)) | J1 | Si(f2 J2) | p1_2 Si(q1 g1)", b),
      embedded_left_products(D));
}

Tensor double_integral(AlgebraContext& ctx, const QuantumDouble& D) {
  ctx.cointegrals();
  Bindings b = ctx.bindings(true, true);
  const Functional T = functional_from(ctx, b, "mui(del2) lam(h del1)");
  return D.smash(T, ctx.integrals().right);
}

Functional double_left_cointegral(AlgebraContext& ctx, const QuantumDouble& D) {
  ctx.cointegrals();
  Bindings b = ctx.bindings(true, true);
  const Functional psi = functional_from(ctx, b, "mu(pt1) mui(f1) lam(Si(f2) h S(pt2))");
  return D.pairing(ctx.integrals().right, psi);
}

Functional double_right_cointegral(AlgebraContext& ctx, const QuantumDouble& D) {
  return D.pairing(ctx.integrals().left, compose(ctx.cointegrals().lam, ctx.H().antipode));
}

DoubleModular double_modular(AlgebraContext& ctx, const QuantumDouble& D) {
  ctx.cointegrals();
  Bindings b = ctx.bindings(true, true);
  const IntegralData& I = ctx.integrals();
  const CointegralData& C = ctx.cointegrals();
  DoubleModular m;
  const Tensor h1 = ctx.eval("mu(g1_1) mui(g2) g1_2 Si2(gmi)", b);
  m.first = double_antipode_inverse(ctx, D).apply(D.smash(I.mu, h1));

  b.set("W", ctx.eval("qt1 g1 | Si(qt2 g2)", b));
  const Tensor h2 = ctx.eval("mu(W1) mui(pt1) mui(W2_1) W2_2 pt2", b);
  const LinearOperator& Si = ctx.S_inv();
  const Tensor s3 = Si.apply(Si.apply(Si.apply(C.g_inv)));
  m.second = D.pres.mult.mul(D.embed(s3), D.smash(I.mu_inv, h2));
  if (m.first != m.second) throw FormulaMismatch("the two displays of g_D differ");
  return m;
}

SemisimplicityVerdict semisimplicity(AlgebraContext& ctx, const QuantumDouble& D) {
  const QhaPresentation& H = ctx.H();
  const CointegralData& C = ctx.cointegrals();
  SemisimplicityVerdict v;
  v.eps_r = counit_of(H, ctx.integrals().right);
  v.lambda_alpha_beta = C.lam(H.mul(ctx.S_inv().apply(H.alpha), H.beta));
  v.eps_D_T = D.pres.counit(double_integral(ctx, D));
  v.H_semisimple = !v.eps_r.is_zero();
  v.D_semisimple = v.H_semisimple && !v.lambda_alpha_beta.is_zero();
  return v;
}

DoubleContext::DoubleContext(AlgebraContext& h, bool validate) : h_(h), D_(build_double(h, false)) {
  axioms_ = verify_axioms(D_.pres);
  if (validate)
    for (const auto& r : axioms_.rows)
      if (!r.pass) throw AxiomViolation(r.name, r.witness ? *r.witness : Tensor());
  d_ = std::make_unique<AlgebraContext>(D_.pres);
  d_->exhaustive = h.exhaustive;
}

namespace {

VerificationReport structure_rows(DoubleContext& dc) {
  VerificationReport rep;
  const QuantumDouble& D = dc.D();
  const QhaPresentation& H = dc.h().H();
  const QhaPresentation& P = D.pres;
  const int n = D.n, N = n * n;
  for (const auto& r : dc.axioms().rows) {
    ReportRow row = r;
    row.suite = kSuite;
    row.name = "D_" + r.name;
    rep.rows.push_back(row);
  }
  {
    std::vector<Tensor> parts;
    for (int a = 0; a < n; ++a)
      for (int j = 0; j < n; ++j)
        parts.push_back(P.mult.mul(D.smash(Functional::dual_basis(n, a), H.unit), D.embed(H.e(j))) -
                        Tensor::basis(N, D.index(a, j)));
    rep.add_residual(kSuite, "smash_factorization", stack(parts, N));
  }
  {
    std::vector<Tensor> parts;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        parts.push_back(P.mult.mul(D.embed(H.e(i)), D.embed(H.e(j))) - D.embed(H.mult.at(i, j)));
    rep.add_residual(kSuite, "iD_multiplicative", stack(parts, N));
  }
  {
    std::vector<Tensor> parts;
    for (int i = 0; i < n; ++i)
      parts.push_back(P.coproduct.apply(D.embed(H.e(i))) - embed_legs(D, H.coproduct.column(Key(i))));
    rep.add_residual(kSuite, "iD_coproduct", stack(parts, n));
  }
  rep.add_residual(kSuite, "iD_antipode", embed_op_residual(D, P.antipode, H.antipode));
  {
    TensorBuilder res(1, n);
    for (int i = 0; i < n; ++i) res.add(Key(i), P.counit(D.embed(H.e(i))) - H.counit.coords[std::size_t(i)]);
    rep.add_residual(kSuite, "iD_counit", res.build());
  }
  rep.add_equal(kSuite, "iD_phi", P.phi, embed_legs(D, H.phi));
  rep.add_bool(kSuite, "iD_injective", matrix_rank([&] {
                 Matrix rows;
                 for (int i = 0; i < n; ++i) rows.push_back(D.embed(H.e(i)).dense());
                 return rows;
               }(), N) == n);
  return rep;
}

VerificationReport antipode_rows(DoubleContext& dc) {
  VerificationReport rep;
  try {
    const QuantumDouble& D = dc.D();
    const LinearOperator closed = double_antipode_inverse(dc.h(), D);
    const LinearOperator inv = antipode_inverse(D.pres);
    std::vector<Tensor> parts;
    for (int x = 0; x < D.pres.dim; ++x) parts.push_back(closed.column(Key(x)) - inv.column(Key(x)));
    rep.add_residual(kSuite, "SDinv_closed_form", stack(parts, D.pres.dim));
    rep.add_residual(kSuite, "SDinv_on_embedded", embed_op_residual(D, closed, dc.h().S_inv()));
  } catch (const Error& e) {
    rep.add_bool(kSuite, "SDinv_closed_form", false, err_note(e));
  }
  return rep;
}

VerificationReport integral_rows(DoubleContext& dc) {
  VerificationReport rep;
  AlgebraContext& ctx = dc.h();
  const QuantumDouble& D = dc.D();
  const QhaPresentation& P = D.pres;
  try {
    Bindings b = ctx.bindings(true, true);
    const Tensor T = double_integral(ctx, D);
    const Functional Tf = functional_from(ctx, b, "mui(del2) lam(h del1)");
    const Tensor& r = ctx.integrals().right;
    const Scalar Tr = Tf(r);
    const Scalar expect = ctx.integrals().mu_inv(ctx.H().beta) * ctx.cointegrals().lam(r);
    rep.add_bool(kSuite, "T_nonzero", Tr == expect && !Tr.is_zero(), "T(r) = " + Tr.str());
    std::vector<Tensor> lp, rp;
    for (int x = 0; x < P.dim; ++x) {
      const Tensor e = Tensor::basis(P.dim, x);
      const Tensor eT = T.scaled(P.counit.coords[std::size_t(x)]);
      lp.push_back(P.mult.mul(e, T) - eT);
      rp.push_back(P.mult.mul(T, e) - eT);
    }
    rep.add_residual(kSuite, "T_left_integral", stack(lp, P.dim));
    rep.add_residual(kSuite, "T_right_integral", stack(rp, P.dim));
    const IntegralData& DI = dc.d().integrals();
    rep.add_bool(kSuite, "T_spans_left_integrals", !T.ratio_to(DI.left).is_zero());
    rep.add_bool(kSuite, "T_spans_right_integrals", !T.ratio_to(DI.right).is_zero());
    rep.add_bool(kSuite, "mu_D_is_counit", DI.mu == P.counit);

    const Tensor md = ctx.eval("mui(del2) del1", b);
    const bool hn = md == ctx.H().beta;
    if (is_unimodular(ctx))
      rep.add_bool(kSuite, "hausser_nill_unimodular", hn, "μ⁻¹(δ²)δ¹ = β");
    else
      rep.add_bool(kSuite, "hausser_nill_unimodular", true,
                   std::string("H not unimodular; μ⁻¹(δ²)δ¹ ") + (hn ? "= β" : "≠ β"));
  } catch (const Error& e) {
    rep.add_bool(kSuite, "T_left_integral", false, err_note(e));
  }
  return rep;
}

VerificationReport cointegral_rows(DoubleContext& dc) {
  VerificationReport rep;
  AlgebraContext& ctx = dc.h();
  const QuantumDouble& D = dc.D();
  try {
    const Functional G = double_left_cointegral(ctx, D);
    rep.add_bool(kSuite, "Gamma_nonzero", !G.is_zero());
    const Functional L = cointegral_space(dc.d(), Side::Left);
    rep.add_bool(kSuite, "Gamma_spans_left_cointegrals", !G.ratio_to(L).is_zero());
    const Functional Sr = D.pairing(ctx.H().antipode.apply(ctx.integrals().right),
                                    compose(ctx.cointegrals().lam, ctx.H().antipode));
    rep.add_equal(kSuite, "Gamma_SD", as_tensor(compose(G, D.pres.antipode)), as_tensor(Sr));
    const Functional R = double_right_cointegral(ctx, D);
    const Functional Rs = cointegral_space(dc.d(), Side::Right);
    rep.add_bool(kSuite, "t_lambdaS_spans_right_cointegrals", !R.ratio_to(Rs).is_zero());
  } catch (const Error& e) {
    rep.add_bool(kSuite, "Gamma_spans_left_cointegrals", false, err_note(e));
  }
  return rep;
}

VerificationReport modular_rows(DoubleContext& dc) {
  VerificationReport rep;
  try {
    const DoubleModular m = double_modular(dc.h(), dc.D());
    rep.add_bool(kSuite, "gD_displays_agree", true);
    rep.add_equal(kSuite, "gD_is_modular_element_of_D", m.first, dc.d().cointegrals().g);
  } catch (const FormulaMismatch& e) {
    rep.add_bool(kSuite, "gD_displays_agree", false, err_note(e));
  } catch (const Error& e) {
    rep.add_bool(kSuite, "gD_is_modular_element_of_D", false, err_note(e));
  }
  return rep;
}

VerificationReport semisimplicity_rows(DoubleContext& dc) {
  VerificationReport rep;
  try {
    AlgebraContext& ctx = dc.h();
    const QuantumDouble& D = dc.D();
    const SemisimplicityVerdict v = semisimplicity(ctx, D);
    const std::string verdict = std::string(v.D_semisimple ? "D(H) semisimple" : "D(H) not semisimple") +
                                "; ε(r) = " + v.eps_r.str() + ", λ(S⁻¹(α)β) = " + v.lambda_alpha_beta.str();
    rep.add_bool(kSuite, "maschke_consistent", v.D_semisimple == !v.eps_D_T.is_zero(), verdict);
    const Functional G = double_left_cointegral(ctx, D);
    const Tensor ab = D.pres.mult.mul(antipode_inverse(D.pres).apply(D.pres.alpha), D.pres.beta);
    rep.add_bool(kSuite, "normalized_cointegral_iff_semisimple", v.D_semisimple == !G(ab).is_zero(),
                 "Γ(S_D⁻¹(α_D)β_D) = " + G(ab).str());
  } catch (const Error& e) {
    rep.add_bool(kSuite, "maschke_consistent", false, err_note(e));
  }
  return rep;
}

VerificationReport prefixed(VerificationReport rep) {
  for (auto& r : rep.rows) r.suite = "double/" + r.suite;
  return rep;
}

}  // namespace

VerificationReport double_suite(DoubleContext& dc, bool generic, int jobs) {
  VerificationReport rep = structure_rows(dc);
  rep.append(antipode_rows(dc));
  rep.append(integral_rows(dc));
  rep.append(cointegral_rows(dc));
  rep.append(modular_rows(dc));
  rep.append(semisimplicity_rows(dc));
  if (generic) {
    rep.append(prefixed(canonical_properties(dc.d())));
    rep.append(prefixed(identity_suite(dc.d(), "canonical", jobs)));
    rep.append(prefixed(integrals_suite(dc.d(), jobs)));
  }
  return rep;
}

}  // namespace qha
