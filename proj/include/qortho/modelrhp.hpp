#pragma once

#include <array>
#include <string>
#include <vector>

#include "qortho/orthopoly.hpp"

namespace qortho {

enum class SeriesLabel { A, B, C };
const char* to_string(SeriesLabel label);

using Vec2 = std::array<HPComplex, 2>;

// Parity-structured series solution of a model q-difference system.
//   A: comp1[l] = A_{1,2l} (t^{2l}),     comp2[j] = A_{2,2j+1} (t^{2j+1})
//   B: comp1[j] = B_{1,2j+1} (t^{2j+1}), comp2[l] = B_{2,2l} (t^{2l})
//   C: comp1[j] = C_{1,2j+1} (t^{-2j-1}), comp2[l] = C_{2,2l} (t^{-2l})
struct SeriesSolution {
  SeriesLabel label = SeriesLabel::A;
  ExactRational q;
  ExactRational alpha;
  long j_max = 0;
  unsigned work_bits = 0;
  std::vector<HPReal> comp1, comp2;
  HPReal scale;           // factor applied to the seeded series
  std::string seed_note;  // which coefficient was seeded

  // Power of t carried by comp1[i] / comp2[i].
  long power1(std::size_t i) const;
  long power2(std::size_t i) const;
  int parity1() const { return label == SeriesLabel::A ? 0 : 1; }
  int parity2() const { return label == SeriesLabel::A ? 1 : 0; }

  Approx<Vec2> evaluate(const HPComplex& t, const HPReal& eps) const;
  SeriesSolution scaled(const HPReal& factor) const;
};

SeriesSolution build_series_A(const QParams& params, long j_max, const PrecisionPolicy& policy);
SeriesSolution build_series_B(const QParams& params, long j_max, const PrecisionPolicy& policy);
SeriesSolution build_series_C(const QParams& params, long j_max, const PrecisionPolicy& policy);

// M_A(t) of the S_A system; M_B = q^alpha M_A.
std::array<HPComplex, 4> matrix_A(const HPComplex& t, const QParams& params, Bits bits);
// ||S(qt) - M(t) S(t)||_inf for the system the series solves.
HPReal qdifference_residual(const SeriesSolution& s, const HPComplex& t, const PrecisionPolicy& policy);

struct C0Estimate {
  HPReal value;
  HPReal gap;  // |estimate_r - estimate_{r-1}|
  long r = 0;
};

// Richardson-accelerated estimate of lim S_A^1/g on the midpoint ray using rays up to r.
C0Estimate c0_at_level(const SeriesSolution& a, long r, const PrecisionPolicy& policy);
C0Estimate compute_C0(const SeriesSolution& a, const PrecisionPolicy& policy);

struct ModelSolution {
  QParams params;
  SeriesSolution A, B, C;
  C0Estimate C0;
  HPReal pin_point;        // t* of the connection pin
  HPReal connection_K1;    // scale absorbed into S_A
  HPReal connection_K2;    // scale absorbed into S_B
  HPReal det_factor;       // extra S_B rescaling applied by normalize_det
  bool det_normalized = false;
  PrecisionPolicy policy;

  HPComplex psi(const HPComplex& t) const;
  HPComplex phi(const HPComplex& t) const;
  HPComplex varphi(const HPComplex& t) const;
  HPComplex rho(const HPComplex& t) const;
};

ModelSolution build_model_solution(const QParams& params, long j_max, const PrecisionPolicy& policy);
ModelSolution normalize_det(ModelSolution sol);

HPReal det_residual(const ModelSolution& sol, const HPComplex& t);
HPReal connection_residual(const ModelSolution& sol, const HPComplex& t);
HPComplex residue_at(const ModelSolution& sol, long k);

// Smallest positive real zero of psi by sign scan and bisection.
HPReal psi_smallest_positive_zero(const ModelSolution& sol);

// Residual of the alpha = 0 limit system for the scaled vector built from P_n, P_{n-1}.
HPReal qhermite_limit_check(const QParams& params, const RecurrenceTable<HPReal>& rec, long n, const HPComplex& t);

// Exact solution of the truncated coefficient equations of S(lambda x) = N(x) S(x)
// with no parity assumption; used as an independent oracle for the recurrences.
struct SubstitutionResult {
  std::vector<ExactRational> comp1, comp2;  // coefficients of x^0..x^degree
};
SubstitutionResult substitution_oracle(SeriesLabel label, const ExactRational& q, const ExactRational& alpha,
                                       long degree);

}  // namespace qortho
