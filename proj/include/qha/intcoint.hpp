// Integrals, cointegrals, modular data and Frobenius systems.
#pragma once

#include <string>
#include <vector>

#include "qha/canonical.hpp"

namespace qha {

class DimensionNotOne : public Error {
 public:
  DimensionNotOne(const std::string& what, int got)
      : Error("DimensionNotOne", what + " has dimension " + std::to_string(got)) {}
};
class CrossCheckMismatch : public Error {
 public:
  explicit CrossCheckMismatch(const std::string& w) : Error("CrossCheckMismatch", w) {}
};
class DegeneratePairing : public Error {
 public:
  explicit DegeneratePairing(const std::string& w) : Error("DegeneratePairing", w) {}
};
class FrobeniusCheckFailed : public Error {
 public:
  explicit FrobeniusCheckFailed(const std::string& w) : Error("FrobeniusCheckFailed", w) {}
};

enum class Side { Left, Right };

/// Solutions φ of Σ_a φ(e_a)·R[a, rest] = 0 for every index `rest`, where
/// leg 0 of the residual tensor R carries the argument of φ.
std::vector<Functional> solve_functionals(const Tensor& residual);

/// Exact nullspace of {h·t − ε(h)t} (left) or {t·h − ε(h)t} (right), scaled
/// so that the first nonzero coordinate is 1.
Tensor integral_space(const QhaPresentation& H, Side side);
/// μ with t·h = μ(h)t, read off the first nonzero coordinate of t.
Functional modular_function(const QhaPresentation& H, const Tensor& t);
/// Left cointegrals solved from the defining coinvariance relation. The right
/// side is solved on H^cop and compared with the direct right display.
Functional cointegral_space(AlgebraContext& ctx, Side side);

IntegralData compute_integrals(AlgebraContext& ctx);
CointegralData compute_cointegrals(AlgebraContext& ctx);

/// Two-sided inverse of an element, if it exists.
std::optional<Tensor> element_inverse(const QhaPresentation& H, const Tensor& a);
/// Functional φ∘op.
Functional compose(const Functional& phi, const LinearOperator& op);
/// S_μ(h) = S(h)↼μ = μ(S(h)₁)S(h)₂.
LinearOperator s_mu(AlgebraContext& ctx);

struct FrobeniusSystem {
  Functional phi;
  Tensor e;                    // rank 2
  LinearOperator chi, chi_inv;  // χ(a) = φ(e¹a)e², χ⁻¹(a) = φ(ae²)e¹
};
enum class FrobeniusKind { Left, Cop, Op };

/// Left: (λ∘S⁻¹, q¹t₁p¹⊗S(q²t₂p²)). Cop: (Λ∘S, q̃²t₂p̃²⊗S⁻¹(q̃¹t₁p̃¹)).
/// Op: the H^op system (d⇀λ∘S, q¹r₁p¹⊗S⁻¹(q²r₂p²)) read in H, hence with
/// its legs swapped; r = S⁻¹(t). Throws
/// FrobeniusCheckFailed when the pair conditions do not hold.
FrobeniusSystem frobenius_system(AlgebraContext& ctx, FrobeniusKind which);
/// Row-form of the Frobenius pair conditions and χ∘χ⁻¹ = id.
VerificationReport frobenius_checks(AlgebraContext& ctx, const FrobeniusSystem& F, const std::string& label);

/// ξ(h*) = h*(S(q²t₂p²))q¹t₁p¹ as a matrix on dual-basis coordinates.
LinearOperator xi_operator(AlgebraContext& ctx);

/// ρ(e^k) = Σ e^k(A_i) e^i ⊗ B_i with A⊗B = S⁻¹(f¹p¹)h₂g²S(q¹) ⊗ S⁻¹(f²p²)h₁g¹S(q²)
/// at h = e_i, as an operator H* → H*⊗H on coordinates.
LinearOperator rho_dual(AlgebraContext& ctx);
/// λ(e^k) = Σ e^k(A_i) B_i ⊗ e^i with A⊗B = S(p̃²)f¹h₁S⁻¹(q̃²g²) ⊗ S(p̃¹)f²h₂S⁻¹(q̃¹g¹),
/// as an operator H* → H⊗H*.
LinearOperator lambda_dual(AlgebraContext& ctx);
/// Functionals φ with ρ(φ)(h) = μ(x¹)φ(hS(x²))x³ for all h.
std::vector<Functional> rho_coinvariants(AlgebraContext& ctx);

// ---- report sections -------------------------------------------------------

VerificationReport integral_rows(AlgebraContext& ctx);
VerificationReport characterization_suite(AlgebraContext& ctx);
VerificationReport modular_suite(AlgebraContext& ctx);
VerificationReport frobenius_suite(AlgebraContext& ctx);
VerificationReport antipode_on_integrals(AlgebraContext& ctx);
VerificationReport s4_suite(AlgebraContext& ctx);
VerificationReport dual_coaction_suite(AlgebraContext& ctx);
/// Every section above plus the registered identities tagged "integrals".
VerificationReport integrals_suite(AlgebraContext& ctx, int jobs = 1);

bool is_unimodular(AlgebraContext& ctx);
/// ℒ = ℛ, i.e. λ and Λ are proportional.
bool left_equals_right(AlgebraContext& ctx);

}  // namespace qha
