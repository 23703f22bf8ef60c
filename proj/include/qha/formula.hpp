// Evaluation of Sweedler-notation tensor formulas such as
//   "S(x1 X2) alpha x2 X3_1 | S(X1) alpha x3 X3_2"
// over a concrete algebra.
//
// Grammar
//   formula := leg ("|" leg)*
//   leg     := factor*
//   factor  := "1" | symbol | NAME "(" leg ")"
//   symbol  := NAME [ "_" path ]
//   path    := DIGIT | "(" DIGIT ("," DIGIT)* ")"
//
// A symbol names either a bound element (rank 1, e.g. `h`, `alpha`) or one
// component of a bound tensor: `X2` is the second leg of the tensor bound
// as `X`. A path applies the coproduct recursively to that leg, so
// `x1_(2,1)` is the first output of Δ applied to the second output of Δ(x¹).
// The paths used for one leg must be the leaves of a full binary tree and
// every leaf appears exactly once. NAME "(" leg ")" applies a bound operator
// (element-valued) or a bound functional (scalar factor).
#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include "qha/multilinear.hpp"

namespace qha {

class FormulaError : public Error {
 public:
  explicit FormulaError(const std::string& w) : Error("FormulaError", w) {}
};

/// The algebra data a formula needs: products, coproduct and unit.
struct AlgebraView {
  const MultTable* mult = nullptr;
  const LinearOperator* delta = nullptr;
  const Tensor* unit = nullptr;
  int dim() const { return mult->dim(); }
};

class Bindings {
 public:
  Bindings();

  Bindings& set(const std::string& name, Tensor t);
  Bindings& set(const std::string& name, std::shared_ptr<const Tensor> t);
  Bindings& set_op(const std::string& name, std::shared_ptr<const LinearOperator> op);
  Bindings& set_op(const std::string& name, LinearOperator op);
  Bindings& set_fn(const std::string& name, std::shared_ptr<const Functional> f);
  Bindings& set_fn(const std::string& name, Functional f);

  const std::shared_ptr<const Tensor>* tensor(const std::string& name) const;
  const LinearOperator* op(const std::string& name) const;
  const Functional* fn(const std::string& name) const;

  /// An expanded binding written as a short sum of pure tensors.
  struct PureSum {
    std::vector<std::vector<Tensor>> terms;  // one rank-1 vector per leg
  };
  struct ExpansionCache {
    std::mutex mu;
    std::map<std::pair<const Tensor*, std::string>, std::pair<std::shared_ptr<const Tensor>, std::shared_ptr<const PureSum>>>
        entries;
  };
  ExpansionCache& cache() const { return *cache_; }

 private:
  std::map<std::string, std::shared_ptr<const Tensor>> tensors_;
  std::map<std::string, std::shared_ptr<const LinearOperator>> ops_;
  std::map<std::string, std::shared_ptr<const Functional>> fns_;
  std::shared_ptr<ExpansionCache> cache_;
};

/// Rewrites t as Σ v₁⊗…⊗v_r with few terms (never more than nnz(t)).
Bindings::PureSum pure_decomposition(const Tensor& t);

/// Evaluates a formula to a tensor whose rank is the number of legs.
Tensor evaluate(const AlgebraView& A, std::string_view formula, const Bindings& b);
/// Evaluates a single-leg formula that reduces to c·1 and returns c.
Scalar evaluate_scalar(const AlgebraView& A, std::string_view formula, const Bindings& b);
/// Applies the coproduct along a bracketing plan, e.g. "((1,2),3)" or "(1,(2,3))".
Tensor iterate_coproduct(const LinearOperator& delta, const Tensor& t, std::string_view plan);

}  // namespace qha
