#include <functional>

#include "qha/workbench.hpp"

namespace qha {

namespace {

Tensor vec(int n, std::initializer_list<std::pair<int, Scalar>> coords) {
  TensorBuilder b(1, n);
  for (const auto& [i, c] : coords) b.add(Key(i), c);
  return b.build();
}

/// Group-like pieces shared by the two-dimensional examples.
QhaPresentation z2_skeleton(const std::string& name) {
  QhaPresentation H;
  H.name = name;
  H.dim = 2;
  H.basis = {"1", "g"};
  H.mult = MultTable(2);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) H.mult.set(a, b, Tensor::basis(2, (a + b) % 2));
  H.unit = Tensor::basis(2, 0);
  H.coproduct = LinearOperator::from_columns(2, {Tensor::pure(2, {0, 0}), Tensor::pure(2, {1, 1})});
  H.counit = Functional(std::vector<Scalar>{1, 1});
  H.antipode = LinearOperator::identity(2);
  return H;
}

/// Φ = 1⊗1⊗1 − 2 p₋⊗p₋⊗p₋ with p₋ = (1 − g)/2, where g has index `g`.
Tensor sign_cocycle(int n, int g) {
  Tensor pm = vec(n, {{0, Rational(1, 2)}, {g, Rational(-1, 2)}});
  Tensor p3 = tensor_product(tensor_product(pm, pm), pm);
  return Tensor::pure(n, {0, 0, 0}) - p3.scaled(Scalar(2));
}

QhaPresentation build_h2() {
  QhaPresentation H = z2_skeleton("H2");
  H.phi = sign_cocycle(2, 1);
  H.phi_inv = H.phi;
  H.alpha = Tensor::basis(2, 1);
  H.beta = Tensor::basis(2, 0);
  return H;
}

QhaPresentation build_kz2() {
  QhaPresentation H = z2_skeleton("kZ2-hopf");
  H.phi = Tensor::pure(2, {0, 0, 0});
  H.phi_inv = H.phi;
  H.alpha = H.beta = Tensor::basis(2, 0);
  return H;
}

// H_±(8): basis g^a x^b at index 2b + a.
QhaPresentation build_h8(int sign) {
  const int n = 8;
  auto idx = [](int a, int b) { return 2 * b + a; };
  QhaPresentation H;
  H.name = sign > 0 ? "H8+" : "H8-";
  H.dim = n;
  H.field = Field::QI;
  H.basis = {"1", "g", "x", "gx", "x^2", "gx^2", "x^3", "gx^3"};
  H.mult = MultTable(n);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 4; ++d) {
          if (b + d >= 4) {
            H.mult.set(idx(a, b), idx(c, d), Tensor(1, n));
            continue;
          }
          Scalar s = (b * c) % 2 ? Scalar(-1) : Scalar(1);
          H.mult.set(idx(a, b), idx(c, d), Tensor::pure(n, {idx((a + c) % 2, b + d)}, s));
        }
  H.unit = Tensor::basis(n, 0);
  H.counit = Functional(n);
  H.counit.coords[0] = 1;
  H.counit.coords[1] = 1;

  const Scalar si = sign > 0 ? Scalar::i() : -Scalar::i();
  const Tensor one = H.unit, g = H.e(1), x = H.e(2);
  const Tensor pp = vec(n, {{0, Rational(1, 2)}, {1, Rational(1, 2)}});
  const Tensor pm = vec(n, {{0, Rational(1, 2)}, {1, Rational(-1, 2)}});
  const Tensor twist = pp + pm.scaled(si);  // p₊ ± i p₋

  const Tensor dg = tensor_product(g, g);
  const Tensor dx = tensor_product(x, twist) + tensor_product(one, H.mul(pp, x)) + tensor_product(g, H.mul(pm, x));
  const Tensor sx = -H.mul(x, twist);

  std::vector<Tensor> dcols(n), scols(n);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 4; ++b) {
      Tensor d = a ? dg : H.unit_power(2);
      Tensor s = one;
      for (int k = 0; k < b; ++k) {
        d = mult_pointwise(H.mult, d, dx);
        s = H.mul(sx, s);
      }
      if (a) s = H.mul(s, g);  // S(g x^b) = S(x)^b S(g)
      dcols[idx(a, b)] = d;
      scols[idx(a, b)] = s;
    }
  H.coproduct = LinearOperator::from_columns(2, dcols);
  H.antipode = LinearOperator::from_columns(1, scols);
  H.phi = sign_cocycle(n, 1);
  H.phi_inv = H.phi;
  H.alpha = g;
  H.beta = one;
  return H;
}

}  // namespace

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names = {"H2", "H8+", "H8-", "kZ2-hopf"};
  return names;
}

Scalar omega(int sign) { return Scalar(Rational(1, 2), Rational(sign > 0 ? 1 : -1, 2)); }

QhaPresentation catalog_raw(const std::string& name) {
  if (name == "H2") return build_h2();
  if (name == "H8+") return build_h8(+1);
  if (name == "H8-") return build_h8(-1);
  if (name == "kZ2-hopf") return build_kz2();
  throw UnknownCatalogName(name);
}

QhaPresentation catalog_build(const std::string& name) { return load_and_validate(catalog_raw(name)); }

}  // namespace qha
