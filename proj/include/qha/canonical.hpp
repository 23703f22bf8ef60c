// Canonical elements of a quasi-Hopf algebra and the registry of named
// tensor identities.
#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qha/qha.hpp"

namespace qha {

class InternalIdentityFailure : public Error {
 public:
  explicit InternalIdentityFailure(const std::string& w) : Error("InternalIdentityFailure", w) {}
};
class UnknownIdentity : public Error {
 public:
  explicit UnknownIdentity(const std::string& n) : Error("UnknownIdentity", n) {}
};
class TwistNotInvertible : public Error {
 public:
  TwistNotInvertible() : Error("TwistNotInvertible", "f·f⁻¹ ≠ 1⊗1") {}
};

struct CanonicalElements {
  Tensor gamma, delta;
  Tensor f, f_inv;
  Tensor p_R, q_R, p_L, q_L;
  Tensor U, V;
};

struct IntegralData {
  Tensor left, right;  // first nonzero coordinate 1
  Functional mu, mu_inv;
};

/// Cointegrals normalized against the left integral t: λ(S⁻¹(t)) = 1 and
/// Λ(S(t)) = 1. g is the modular element of H.
struct CointegralData {
  Functional lam, Lam;
  Functional lam_raw, Lam_raw;  // solver representatives
  Tensor g, g_inv;
  Tensor u, u_inv, v, v_inv;
  Tensor d;  // μ⁻¹(p̃¹)S⁻²(p̃²)
};

/// Per-algebra memo store. Every derived object is a pure function of the
/// presentation and is computed on first use.
class AlgebraContext {
 public:
  explicit AlgebraContext(QhaPresentation H);
  AlgebraContext(const AlgebraContext&) = delete;
  AlgebraContext& operator=(const AlgebraContext&) = delete;

  const QhaPresentation& H() const { return H_; }
  int dim() const { return H_.dim; }
  AlgebraView view() const { return H_.view(); }

  const LinearOperator& S_inv();
  const CanonicalElements& canonical();
  const IntegralData& integrals();
  const CointegralData& cointegrals();
  /// Ω = X¹₍₁,₁₎y¹x¹ ⊗ X¹₍₁,₂₎y²x²₁ ⊗ X¹₂y³x²₂ ⊗ S⁻¹(f¹X²x³) ⊗ S⁻¹(f²X³).
  const Tensor& omega();
  /// Context of H^cop, shared by the right-cointegral solver and cop checks.
  AlgebraContext& cop();

  /// Bindings with Φ (X, Y, Z), Φ⁻¹ (x, y, z), α, β, S, Si, S2, Si2, eps and
  /// every canonical element: gam, del, f/F, g/G, p/P, q/Q, pt/Pt, qt/Qt,
  /// U/W, V, Om. Integral data adds t, r, mu, mui and cointegral data lam,
  /// Lam, gm, gmi, u, ui, v, vi.
  Bindings bindings(bool with_integrals = false, bool with_cointegrals = false);

  Tensor eval(std::string_view formula, const Bindings& b) const { return evaluate(view(), formula, b); }
  Scalar eval_scalar(std::string_view formula, const Bindings& b) const {
    return evaluate_scalar(view(), formula, b);
  }

  /// When set, identities quantified over pairs run on every basis pair.
  bool exhaustive = false;

 private:
  void ensure_base_bindings();

  QhaPresentation H_;
  std::recursive_mutex mu_;
  std::optional<LinearOperator> s_inv_;
  std::optional<CanonicalElements> can_;
  std::optional<IntegralData> int_;
  std::optional<CointegralData> coint_;
  std::optional<Tensor> omega_;
  std::unique_ptr<AlgebraContext> cop_;
  std::optional<Bindings> base_;
};

// ---- canonical element constructors ---------------------------------------

std::pair<Tensor, Tensor> gamma_delta(AlgebraContext& ctx);
std::pair<Tensor, Tensor> drinfeld_twist(AlgebraContext& ctx);
CanonicalElements compute_canonical(AlgebraContext& ctx);

// ---- quantified residuals --------------------------------------------------

/// LHS − RHS.
Tensor residual(AlgebraContext& ctx, const Bindings& b, std::string_view lhs, std::string_view rhs);
/// Residuals for h running over the basis, stacked along a new leading leg.
Tensor residual_forall(AlgebraContext& ctx, const Bindings& b, std::string_view lhs, std::string_view rhs);
/// Pairs (h, h'): exhaustive when dim ≤ 8 or ctx.exhaustive, else 16 seeded
/// random pairs. `note` receives a description of the coverage.
Tensor residual_forall_pairs(AlgebraContext& ctx, const Bindings& b, std::string_view lhs, std::string_view rhs,
                             std::string* note = nullptr);
/// Stacks a list of tensors of equal rank along a new leading leg; the
/// stacking index must be below dim.
Tensor stack(const std::vector<Tensor>& parts, int dim);
/// fn(i) for every basis index, stacked.
template <class F>
Tensor forall_basis(AlgebraContext& ctx, F&& fn) {
  std::vector<Tensor> parts;
  for (int i = 0; i < ctx.dim(); ++i) parts.push_back(fn(i));
  return stack(parts, ctx.dim());
}
/// Functional as a rank-1 tensor of coordinates.
Tensor as_tensor(const Functional& f);

// ---- registry --------------------------------------------------------------

enum Needs : unsigned { kNone = 0, kIntegrals = 1, kCointegrals = 2 };

struct IdentityEntry {
  std::string name;
  std::string suite;       // "canonical" or "integrals"
  unsigned needs = kNone;  // prerequisites computed before evaluation
  /// Residual parts (LHS − RHS of each displayed equality); the string
  /// receives an optional note.
  std::function<std::vector<Tensor>(AlgebraContext&, std::string&)> residual;
};

const std::vector<IdentityEntry>& identity_registry();
std::vector<std::string> identity_names();
ReportRow check_identity(AlgebraContext& ctx, const std::string& name);
/// Runs every registered identity; `suite` filters by tag when non-empty.
VerificationReport identity_suite(AlgebraContext& ctx, const std::string& suite = {}, int jobs = 1);
/// Invariants of the canonical elements and their cop counterparts.
VerificationReport canonical_properties(AlgebraContext& ctx);

}  // namespace qha
