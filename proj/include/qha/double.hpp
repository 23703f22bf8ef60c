// The quantum double D(H) = H*⋈H of a finite-dimensional quasi-Hopf algebra,
// its integral, cointegrals and modular element.
//
// Basis order: e^i⋈e_j sits at index i·n + j (i major). Functionals on D(H)
// are coordinate vectors of length n², identified with H⊗H* through
// (x⋈ψ)(φ⋈h) = φ(x)ψ(h).
#pragma once

#include <memory>
#include <string>

#include "qha/intcoint.hpp"

namespace qha {

class FormulaMismatch : public Error {
 public:
  explicit FormulaMismatch(const std::string& w) : Error("FormulaMismatch", w) {}
};

struct QuantumDouble {
  QhaPresentation pres;  // dim n²
  Tensor omega;          // rank 5 over H
  Functional eps_H;      // counit of H
  int n = 0;

  int index(int i, int j) const { return i * n + j; }
  /// φ⋈h.
  Tensor smash(const Functional& phi, const Tensor& h) const;
  /// i_D(h) = ε⋈h.
  Tensor embed(const Tensor& h) const;
  /// The functional x⋈ψ on D(H).
  Functional pairing(const Tensor& x, const Functional& psi) const;
};

/// Multiplication from Ω-contraction, then Δ_D, ε_D, Φ_D = i_D^{⊗3}(Φ), S_D,
/// α_D = ε⋈α and β_D = ε⋈β. With `validate` the result goes through
/// load_and_validate (AxiomViolation on failure).
QuantumDouble build_double(AlgebraContext& ctx, bool validate = true);

/// S_D⁻¹(φ⋈h) = (ε⋈S⁻¹(f²h))(p¹₁S⁻¹(q²g²)⇀φ∘S↼S⁻¹(p²f¹) ⋈ p¹₂S⁻¹(q¹g¹)).
LinearOperator double_antipode_inverse(AlgebraContext& ctx, const QuantumDouble& D);

/// 𝕋 = μ⁻¹(δ²)δ¹⇀λ ⋈ r.
Tensor double_integral(AlgebraContext& ctx, const QuantumDouble& D);
/// Γ = r ⋈ μ(p̃¹)S(p̃²)⇀λ↼μ⁻¹(f¹)S⁻¹(f²).
Functional double_left_cointegral(AlgebraContext& ctx, const QuantumDouble& D);
/// t ⋈ λ∘S.
Functional double_right_cointegral(AlgebraContext& ctx, const QuantumDouble& D);

struct DoubleModular {
  Tensor first;   // μ(g¹₁)μ⁻¹(g²)S_D⁻¹(μ⋈g¹₂S⁻²(g⁻¹))
  Tensor second;  // μ(q̃¹g¹)μ⁻¹(p̃¹)(ε⋈S⁻³(g⁻¹))(μ⁻¹⋈(S⁻¹(q̃²g²)↼μ⁻¹)p̃²)
};
/// Both displays of g_D; throws FormulaMismatch when they differ.
DoubleModular double_modular(AlgebraContext& ctx, const QuantumDouble& D);

struct SemisimplicityVerdict {
  Scalar eps_r;                 // ε(r)
  Scalar lambda_alpha_beta;     // λ(S⁻¹(α)β)
  Scalar eps_D_T;               // ε_D(𝕋)
  bool H_semisimple = false;    // ε(r) ≠ 0
  bool D_semisimple = false;    // ε(r) ≠ 0 and λ(S⁻¹(α)β) ≠ 0
};
SemisimplicityVerdict semisimplicity(AlgebraContext& ctx, const QuantumDouble& D);

/// Owns the double, its axiom report and the double's own context. With
/// `validate` a failing axiom row throws AxiomViolation.
class DoubleContext {
 public:
  explicit DoubleContext(AlgebraContext& h, bool validate = true);
  AlgebraContext& h() { return h_; }
  const QuantumDouble& D() const { return D_; }
  AlgebraContext& d() { return *d_; }
  const VerificationReport& axioms() const { return axioms_; }

 private:
  AlgebraContext& h_;
  QuantumDouble D_;
  VerificationReport axioms_;
  std::unique_ptr<AlgebraContext> d_;
};

/// D(H) structure, S_D⁻¹, 𝕋, Γ, t⋈λ∘S, g_D and semisimplicity rows.
/// With `generic` the canonical, identity and integral suites are rerun
/// on D(H) itself.
VerificationReport double_suite(DoubleContext& dc, bool generic = false, int jobs = 1);

}  // namespace qha
