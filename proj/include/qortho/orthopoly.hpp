#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qortho/weights.hpp"

namespace qortho {

template <class S>
struct MomentTable {
  ExactRational q;
  ExactRational alpha;
  std::string weight;
  std::vector<S> mu;  // mu[m], m = 0..2 n_max
  bool exact = false;
  bool even = false;
  TruncationStatus status;
  unsigned work_bits = 0;  // inexact tables only
};

template <class S>
struct RecurrenceTable {
  ExactRational q;
  ExactRational alpha;
  std::string weight;
  long n_max = 0;
  std::vector<S> a;      // a[1..n_max]; a[0] unused
  std::vector<S> b;      // b[0..n_max-1]
  std::vector<S> gamma;  // gamma[0..n_max]
  std::vector<std::vector<S>> coeffs;  // monic P_n, ascending powers
  bool exact = false;
  unsigned work_bits = 0;
  TruncationStatus status;
};

// Closed-form moments when w is a polynomial and q^alpha is rational.
std::optional<MomentTable<ExactRational>> exact_moments(const WeightSpec& spec, long n_max);
// Moments of the one-sided measure sum_k x^m w(x) q^k at x = q^k, w polynomial.
MomentTable<ExactRational> exact_one_sided_moments(const std::vector<ExactRational>& w_poly,
                                                   const ExactRational& q, long n_max);

MomentTable<HPReal> moments(const WeightSpec& spec, long n_max, const PrecisionPolicy& policy);

template <class S>
RecurrenceTable<S> recurrence_stieltjes(const MomentTable<S>& moms, long n_max);

RecurrenceTable<ExactRational> hankel_oracle(const MomentTable<ExactRational>& moms, long n_max);

RecurrenceTable<HPReal> to_hp(const RecurrenceTable<ExactRational>& rec, Bits bits);

// Exact when the weight allows it, multiprecision otherwise.
RecurrenceTable<HPReal> build_recurrence(const WeightSpec& spec, long n_max, const PrecisionPolicy& policy);

template <class S>
S eval_poly(const RecurrenceTable<S>& rec, long n, const S& x);
HPComplex eval_poly(const RecurrenceTable<HPReal>& rec, long n, const HPComplex& z);
// P_n(z) from coeffs[n] by Horner's rule.
HPComplex eval_coeffs(const RecurrenceTable<HPReal>& rec, long n, const HPComplex& z);

Approx<HPReal> orthogonality_residual(const RecurrenceTable<HPReal>& rec, const WeightSpec& spec, long n, long m,
                                      const PrecisionPolicy& policy);

HPReal smallest_positive_zero(const RecurrenceTable<HPReal>& rec, long n, const PrecisionPolicy& policy);

}  // namespace qortho
