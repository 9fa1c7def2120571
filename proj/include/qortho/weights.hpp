#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qortho/qcalc.hpp"

namespace qortho {

enum class WeightKind { unit, qhermite1, little_qjacobi, poly_perturbation, polynomial, user_table, callable };

// Orthogonality weight w on the lattice ±q^k. The |x|^alpha factor is kept
// separate and applied as q^{k alpha} by the polynomial engine.
struct WeightSpec {
  WeightKind kind = WeightKind::unit;
  ExactRational q{1, 2};
  ExactRational alpha{0};
  ExactRational param{0};               // b for little_qjacobi, c for poly_perturbation
  std::vector<ExactRational> poly;      // coefficients of w for kind == polynomial
  std::optional<LatticeFn> lattice;     // user_table / callable
  std::string label;                    // id used in artifacts

  static WeightSpec unit(ExactRational q, ExactRational alpha);
  static WeightSpec qhermite1(ExactRational q, ExactRational alpha);
  static WeightSpec little_qjacobi(ExactRational q, ExactRational alpha, ExactRational b);
  static WeightSpec poly_perturbation(ExactRational q, ExactRational alpha, ExactRational c);
  static WeightSpec polynomial(ExactRational q, ExactRational alpha, std::vector<ExactRational> coeffs,
                               std::string label = "polynomial");
  static WeightSpec user_table(ExactRational q, ExactRational alpha, LatticeFn table, std::string label = "table");
  static WeightSpec callable(ExactRational q, ExactRational alpha, LatticeFn::Callable f,
                             std::string label = "callable");

  // Catalog ids: "unit", "qhermite1", "littleqjacobi:b=1/3", "poly:c=-2".
  static WeightSpec parse(const std::string& id, ExactRational q, ExactRational alpha);

  std::string id() const { return label; }
  bool is_even() const;
  // Coefficients of w when it is a polynomial (unit, poly_perturbation, polynomial).
  std::optional<std::vector<ExactRational>> polynomial_coeffs() const;
  QParams params() const { return QParams(q, alpha); }
};

// Parses {"q": "1/2", "alpha": 0, "values": [{"k": 0, "plus": "1", "minus": "1"}, ...]}.
WeightSpec load_weight_table(const std::string& json_text, Bits bits);

Approx<HPComplex> eval_weight(const WeightSpec& spec, const HPComplex& x, const Tolerance& tol);
// w(sign * q^k); tables are read directly.
Approx<HPComplex> eval_weight_lattice(const WeightSpec& spec, long k, int sign, const Tolerance& tol);

enum class AdmissibilityClass { strict, relaxed };

struct AdmissibilityReport {
  std::string weight;
  AdmissibilityClass cls = AdmissibilityClass::strict;
  bool is_strict = true;
  double fitted_rate = 0.0;
  double c_estimate = 0.0;
  double fit_residual = 0.0;
  long n_lo = 0;
  long n_hi = 0;
  std::vector<long> n;
  std::vector<HPReal> deviation;  // d_n
  HPReal w0;                      // limit value w(0)
};

inline constexpr double admissibility_rate_tol = 0.15;

AdmissibilityReport check_admissibility(const WeightSpec& spec, long n_lo, long n_hi, const Tolerance& tol);

// Folding: one-sided w on {q^k} becomes the even two-sided weight
// |z| w(z^2) on ±rho^k, rho = sqrt(q); requires q to be a rational square.
WeightSpec fold_one_sided(const LatticeFn& w_one_sided, const ExactRational& q, const std::string& label = "folded");
WeightSpec fold_one_sided(const std::vector<ExactRational>& w_poly, const ExactRational& q);

}  // namespace qortho
