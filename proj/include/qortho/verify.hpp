#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "qortho/modelrhp.hpp"

namespace qortho {

struct ReportRow {
  long n = 0;
  HPReal error;
  double ms = 0.0;
};

struct AsymptoticReport {
  std::string claim;
  ExactRational q;
  ExactRational alpha;
  std::string weight;
  std::vector<ReportRow> rows;
  double fitted_rate = 0.0;    // per unit n
  double fit_residual = 0.0;
  std::size_t fit_points = 0;
  bool passed = false;
  std::map<std::string, std::string> details;

  double rate_per_even_step() const { return fitted_rate * fitted_rate; }
  std::vector<HPReal> errors() const;
};

struct GammaPrediction {
  HPReal squared;    // q^{n(n-1+a)/2} 2 (q^2;q^2)^2
  HPReal unsquared;  // q^{n(n-1+a)/2} 2 (q^2;q^2)
};

GammaPrediction predict_gamma(long n, const QParams& params, const Tolerance& tol);
// Companion gamma_{n-1} for even n.
GammaPrediction predict_gamma_companion(long n, const QParams& params, const Tolerance& tol);
HPReal predict_a(long n, const QParams& params, Bits bits);

// Least squares over the largest 4 n with error above the floor; fills fitted_rate.
void fit_report(AsymptoticReport& report, const HPReal& floor);

struct Theorem2Result {
  AsymptoticReport gamma_squared;
  AsymptoticReport gamma_unsquared;
  AsymptoticReport a;
  std::string leading_constant;  // "squared", "unsquared", or "none"
  bool passed = false;
};

Theorem2Result theorem2_report(const RecurrenceTable<HPReal>& rec, const QParams& params,
                               const std::vector<long>& n_set, const PrecisionPolicy& policy);

HPReal theorem1_inner_error(const RecurrenceTable<HPReal>& rec, const ModelSolution& sol, long n, const HPComplex& t);
HPReal theorem1_inner_companion_error(const RecurrenceTable<HPReal>& rec, const ModelSolution& sol, long n,
                                      const HPComplex& t);
HPReal theorem1_outer_error(const RecurrenceTable<HPReal>& rec, long n, const HPComplex& z, const Tolerance& tol,
                            bool* near_pole = nullptr);
// |P_n(z) / (z^n f(z)) - 1|, the form the W -> I argument controls.
HPReal theorem1_outer_relative_error(const RecurrenceTable<HPReal>& rec, long n, const HPComplex& z,
                                     const Tolerance& tol);

AsymptoticReport bn_decay_check(const RecurrenceTable<HPReal>& rec, const std::vector<long>& n_set);

template <class S>
S painleve_residual(std::span<const S> a_seq, long n, const S& q);

AsymptoticReport painleve_report(const RecurrenceTable<HPReal>& rec, const std::vector<long>& n_set);

AsymptoticReport smallest_zero_scaling(const RecurrenceTable<HPReal>& rec, const ModelSolution& sol,
                                       const std::vector<long>& n_set, const PrecisionPolicy& policy);

// Res(k)/Res(k+1) divided by t^4 q^{4-alpha} at t = q^{-(k+1)}; tends to 1.
HPReal residue_ratio(const ModelSolution& sol, long k);

// Ratios e_{n+2}/e_n of consecutive rows.
std::vector<double> step_ratios(const AsymptoticReport& report);

}  // namespace qortho
