// Quasi-Hopf algebras given by structure constants.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qha/formula.hpp"
#include "qha/multilinear.hpp"

namespace qha {

class AxiomViolation : public Error {
 public:
  AxiomViolation(std::string check, Tensor witness)
      : Error("AxiomViolation", "check '" + check + "' failed"), check_(std::move(check)), witness_(std::move(witness)) {}
  const std::string& check() const { return check_; }
  const Tensor& witness() const { return witness_; }

 private:
  std::string check_;
  Tensor witness_;
};

class SingularAntipode : public Error {
 public:
  SingularAntipode() : Error("SingularAntipode", "antipode matrix is not invertible") {}
};

struct QhaPresentation {
  std::string name;
  int dim = 0;
  std::vector<std::string> basis;
  Field field = Field::Q;
  MultTable mult;
  Tensor unit;
  LinearOperator coproduct;  // H → H⊗H
  Functional counit;
  Tensor phi, phi_inv;  // rank 3
  LinearOperator antipode;
  Tensor alpha, beta;

  AlgebraView view() const { return AlgebraView{&mult, &coproduct, &unit}; }
  Tensor e(int i) const { return Tensor::basis(dim, i); }
  Tensor mul(const Tensor& a, const Tensor& b) const { return mult.mul(a, b); }
  Tensor unit_power(int k) const;  // 1⊗…⊗1
  int index_of(const std::string& label) const;
};

bool operator==(const QhaPresentation& a, const QhaPresentation& b);

/// One row of a verification report. `witness` is the nonzero residual of a
/// failing tensor check; non-tensor checks carry a one-entry indicator.
struct ReportRow {
  std::string suite;
  std::string name;
  bool pass = true;
  std::optional<Tensor> witness;
  std::string note;
};

struct VerificationReport {
  std::vector<ReportRow> rows;

  bool all_pass() const;
  std::size_t failures() const;
  void add_residual(const std::string& suite, const std::string& name, const Tensor& residual, std::string note = {});
  void add_equal(const std::string& suite, const std::string& name, const Tensor& lhs, const Tensor& rhs,
                 std::string note = {});
  void add_bool(const std::string& suite, const std::string& name, bool ok, std::string note = {});
  void append(const VerificationReport& other);
  const ReportRow* find(const std::string& name) const;
};

/// Checks structure and the quasi-Hopf axioms, rescales α and β so that
/// ε(α) = ε(β) = 1, and returns the normalized presentation.
QhaPresentation load_and_validate(QhaPresentation raw);
VerificationReport verify_axioms(const QhaPresentation& H);

enum class Variant { Op, Cop, OpCop };
QhaPresentation variant(const QhaPresentation& H, Variant which);

LinearOperator antipode_inverse(const QhaPresentation& H);
/// Bracketing plans such as "((.,.),.)" and "(.,(.,.))".
Tensor iterated_coproduct(const QhaPresentation& H, const Tensor& t, const std::string& plan);

// Dual actions. (h⇀φ)(h') = φ(h'h), (φ↼h)(h') = φ(hh'),
// φ⇀h = φ(h₂)h₁ and h↼φ = φ(h₁)h₂.
Functional hit(const QhaPresentation& H, const Tensor& h, const Functional& phi);        // h⇀φ
Functional hit(const QhaPresentation& H, const Functional& phi, const Tensor& h);        // φ↼h
Tensor coact_left(const QhaPresentation& H, const Functional& phi, const Tensor& h);     // φ⇀h
Tensor coact_right(const QhaPresentation& H, const Tensor& h, const Functional& phi);    // h↼φ

/// Minimal algebra generating set chosen greedily in basis order.
std::vector<int> algebra_generators(const QhaPresentation& H);

/// Convenience: Δ applied to a rank-1 element.
Tensor coproduct_of(const QhaPresentation& H, const Tensor& h);
Scalar counit_of(const QhaPresentation& H, const Tensor& h);

}  // namespace qha
