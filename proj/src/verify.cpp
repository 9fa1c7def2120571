#include "qortho/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

namespace qortho {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void check_even_set(const std::vector<long>& n_set, long n_max) {
  if (n_set.empty()) fail(ErrorKind::bad_input, "empty n set");
  for (std::size_t i = 0; i < n_set.size(); ++i) {
    if (n_set[i] < 0 || n_set[i] % 2 != 0) fail(ErrorKind::bad_input, "n values must be even and non-negative");
    if (i > 0 && n_set[i] <= n_set[i - 1]) fail(ErrorKind::bad_input, "n values must be strictly increasing");
    if (n_set[i] > n_max) fail(ErrorKind::bad_input, "n = " + std::to_string(n_set[i]) + " exceeds the table");
  }
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

AsymptoticReport blank_report(const std::string& claim, const RecurrenceTable<HPReal>& rec) {
  AsymptoticReport r;
  r.claim = claim;
  r.q = rec.q;
  r.alpha = rec.alpha;
  r.weight = rec.weight;
  return r;
}

HPReal fit_floor(unsigned bits) { return pow2(24 - static_cast<long>(bits) / 2, Bits{bits}); }

bool decreasing_from(const AsymptoticReport& r, long n_from) {
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    if (r.rows[i - 1].n < n_from) continue;
    if (!(r.rows[i].error < r.rows[i - 1].error)) return false;
  }
  return true;
}

}  // namespace

std::vector<HPReal> AsymptoticReport::errors() const {
  std::vector<HPReal> e;
  for (const auto& row : rows) e.push_back(row.error);
  return e;
}

std::vector<double> step_ratios(const AsymptoticReport& report) {
  std::vector<double> out;
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const auto& prev = report.rows[i - 1].error;
    out.push_back(prev.is_zero() ? 0.0 : (report.rows[i].error / prev).to_double());
  }
  return out;
}

// ---- predictions ----

namespace {

HPReal theorem2_constant_base(const QParams& params, const Tolerance& tol) {
  const Bits b{tol.eps.bits()};
  const HPReal q2 = params.q_hp(b) * params.q_hp(b);
  return pochhammer_inf(HPComplex(q2), q2, tol).checked("(q^2;q^2)_inf").re;
}

}  // namespace

GammaPrediction predict_gamma(long n, const QParams& params, const Tolerance& tol) {
  if (n < 0 || n % 2 != 0) fail(ErrorKind::bad_input, "predict_gamma needs even n >= 0");
  const Bits b{tol.eps.bits()};
  const HPReal c = theorem2_constant_base(params, tol);
  // q^{n(n-1+alpha)/2}
  const ExactRational e = ExactRational(n) * (ExactRational(n - 1) + params.alpha) / 2;
  const HPReal scale = power_of(params.q, e, b);
  return {scale * 2L * c * c, scale * 2L * c};
}

GammaPrediction predict_gamma_companion(long n, const QParams& params, const Tolerance& tol) {
  if (n < 2 || n % 2 != 0) fail(ErrorKind::bad_input, "the companion prediction needs even n >= 2");
  const Bits b{tol.eps.bits()};
  const HPReal c = theorem2_constant_base(params, tol);
  const ExactRational e = ExactRational(n - 2) / 2 * (ExactRational(n - 1) + params.alpha);
  const HPReal scale = power_of(params.q, e, b);
  return {scale * 2L * c * c, scale * 2L * c};
}

HPReal predict_a(long n, const QParams& params, Bits bits) {
  if (n < 1) fail(ErrorKind::bad_input, "predict_a needs n >= 1");
  return power_of(params.q, ExactRational(n - 1) + params.alpha, bits);
}

void fit_report(AsymptoticReport& report, const HPReal& floor) {
  std::vector<long> n;
  std::vector<HPReal> e;
  for (auto it = report.rows.rbegin(); it != report.rows.rend() && n.size() < 4; ++it) {
    if (it->error > floor) {
      n.insert(n.begin(), it->n);
      e.insert(e.begin(), it->error);
    }
  }
  if (n.size() < 2) {
    report.fitted_rate = 0.0;
    report.fit_residual = 0.0;
    report.fit_points = n.size();
    report.details["fit"] = "fewer than two errors above the precision floor";
    return;
  }
  const GeometricFit fit = fit_geometric(n, e);
  report.fitted_rate = fit.rate;
  report.fit_residual = fit.residual;
  report.fit_points = fit.points;
}

// ---- theorem2 ----

Theorem2Result theorem2_report(const RecurrenceTable<HPReal>& rec, const QParams& params,
                               const std::vector<long>& n_set, const PrecisionPolicy& policy) {
  check_even_set(n_set, rec.n_max);
  const Tolerance tol = policy.tolerance();
  const Bits b = policy.bits();
  Theorem2Result out;
  out.gamma_squared = blank_report("theorem2.gamma.squared", rec);
  out.gamma_unsquared = blank_report("theorem2.gamma.unsquared", rec);
  out.a = blank_report("theorem2.a", rec);
  for (long n : n_set) {
    const auto start = Clock::now();
    const std::size_t nn = static_cast<std::size_t>(n);
    const GammaPrediction g = predict_gamma(n, params, tol);
    HPReal e_sq = abs(rec.gamma[nn] / g.squared - 1L);
    HPReal e_un = abs(rec.gamma[nn] / g.unsquared - 1L);
    const double ms = elapsed_ms(start);
    out.gamma_squared.rows.push_back({n, e_sq, ms});
    out.gamma_unsquared.rows.push_back({n, e_un, ms});
    if (n >= 1) {
      const auto start_a = Clock::now();
      HPReal e_a = abs(rec.a[nn] / predict_a(n, params, b) - 1L);
      out.a.rows.push_back({n, e_a, elapsed_ms(start_a)});
    }
  }
  const HPReal floor = fit_floor(b.value);
  fit_report(out.gamma_squared, floor);
  fit_report(out.gamma_unsquared, floor);
  fit_report(out.a, floor);

  auto decays = [](const AsymptoticReport& r) {
    return r.fit_points >= 2 && r.rate_per_even_step() < 0.5 && r.rows.back().error < r.rows.front().error;
  };
  const bool sq = decays(out.gamma_squared), un = decays(out.gamma_unsquared);
  out.leading_constant = sq && !un ? "squared" : (!sq && un ? "unsquared" : (sq ? "both" : "none"));
  const double q2 = params.q.get_d() * params.q.get_d();
  auto in_band = [&](const AsymptoticReport& r) {
    const double s = r.rate_per_even_step();
    return s >= 0.7 * q2 && s <= 1.3 * q2;
  };
  const AsymptoticReport& winner = un && !sq ? out.gamma_unsquared : out.gamma_squared;
  const bool one_variant = sq != un;
  out.gamma_squared.passed = sq && in_band(out.gamma_squared) && decreasing_from(out.gamma_squared, 8);
  out.gamma_unsquared.passed = un && in_band(out.gamma_unsquared) && decreasing_from(out.gamma_unsquared, 8);
  out.a.passed = in_band(out.a) && decreasing_from(out.a, 8);
  out.passed = one_variant && winner.passed && out.a.passed;
  for (auto* r : {&out.gamma_squared, &out.gamma_unsquared, &out.a}) {
    r->details["rate_per_even_step"] = fmt(r->rate_per_even_step());
    r->details["leading_constant"] = out.leading_constant;
  }
  return out;
}

// ---- theorem1 ----

HPReal theorem1_inner_error(const RecurrenceTable<HPReal>& rec, const ModelSolution& sol, long n, const HPComplex& t) {
  if (n < 0 || n % 2 != 0) fail(ErrorKind::bad_input, "theorem1 needs even n");
  const Bits b{std::max(rec.work_bits, sol.policy.work_bits)};
  const HPReal q(rec.q, b);
  const long h = n / 2;
  HPReal s = pow(q, -h * (h - 1));
  if (h % 2 != 0) s = -s;
  const HPComplex z = t * pow(q, h);
  return abs(eval_poly(rec, n, z) * s - sol.psi(t));
}

HPReal theorem1_inner_companion_error(const RecurrenceTable<HPReal>& rec, const ModelSolution& sol, long n,
                                      const HPComplex& t) {
  if (n < 2 || n % 2 != 0) fail(ErrorKind::bad_input, "the companion row needs even n >= 2");
  const Bits b{std::max(rec.work_bits, sol.policy.work_bits)};
  const HPReal q(rec.q, b);
  const long h = n / 2;
  HPReal s = pow(q, h * (h - 1)) * power_of(rec.q, ExactRational(h) * rec.alpha, b) /
             rec.gamma[static_cast<std::size_t>(n - 1)];
  if (h % 2 != 0) s = -s;
  const HPComplex z = t * pow(q, h);
  return abs(eval_poly(rec, n - 1, z) * s - sol.varphi(t));
}

HPReal theorem1_outer_error(const RecurrenceTable<HPReal>& rec, long n, const HPComplex& z, const Tolerance& tol,
                            bool* near_pole) {
  if (n < 0 || n % 2 != 0) fail(ErrorKind::bad_input, "theorem1 needs even n");
  const HPReal q(rec.q, Bits{std::max(rec.work_bits, tol.eps.bits())});
  const HPComplex f = f_fn(z, q, tol).checked("f");
  if (near_pole) *near_pole = abs(f) < pow2(-static_cast<long>(tol.eps.bits()) / 2, Bits{tol.eps.bits()});
  return abs(eval_poly(rec, n, z) - pow(z, n) * f);
}

HPReal theorem1_outer_relative_error(const RecurrenceTable<HPReal>& rec, long n, const HPComplex& z,
                                     const Tolerance& tol) {
  const HPReal q(rec.q, Bits{std::max(rec.work_bits, tol.eps.bits())});
  const HPComplex f = f_fn(z, q, tol).checked("f");
  const HPComplex lead = pow(z, n) * f;
  if (lead.is_zero()) fail(ErrorKind::pole_proximity, "z^n f(z) vanishes at a lattice point");
  return abs(eval_poly(rec, n, z) / lead - HPComplex(1L, Bits{lead.bits()}));
}

// ---- b_n ----

AsymptoticReport bn_decay_check(const RecurrenceTable<HPReal>& rec, const std::vector<long>& n_set) {
  check_even_set(n_set, rec.n_max - 1);
  AsymptoticReport r = blank_report("bn", rec);
  bool all_zero = true;
  for (long n : n_set) {
    const auto start = Clock::now();
    HPReal e = abs(rec.b[static_cast<std::size_t>(n)]);
    all_zero = all_zero && e.is_zero();
    r.rows.push_back({n, e, elapsed_ms(start)});
  }
  if (all_zero) {
    r.passed = true;
    r.details["b_n"] = "identically zero (even weight)";
    return r;
  }
  fit_report(r, HPReal(Bits{rec.work_bits}));
  r.passed = r.fit_points >= 2 && r.fitted_rate < 1.0 && r.rows.back().error < r.rows.front().error;
  r.details["rate_per_even_step"] = fmt(r.rate_per_even_step());
  return r;
}

// ---- Painleve ----

namespace {

ExactRational int_power(const ExactRational& q, long e) {
  ExactRational r(1);
  const ExactRational base = e >= 0 ? q : ExactRational(1 / q);
  for (long i = 0; i < (e >= 0 ? e : -e); ++i) r *= base;
  return r;
}

HPReal int_power(const HPReal& q, long e) { return pow(q, e); }

}  // namespace

template <class S>
S painleve_residual(std::span<const S> a_seq, long n, const S& q) {
  if (n < 1) fail(ErrorKind::division_by_zero, "the Painleve right-hand side q^{n-1}(1-q^n) vanishes at n = 0");
  if (static_cast<std::size_t>(n + 1) >= a_seq.size()) fail(ErrorKind::bad_input, "a sequence must cover n+1");
  const std::size_t i = static_cast<std::size_t>(n);
  const S& am = a_seq[i - 1];
  const S& a0 = a_seq[i];
  const S& ap = a_seq[i + 1];
  S inner = ap + int_power(q, 1 - n) * a0 + q * q * am + int_power(q, 3 - 2 * n) * ap * a0 * am;
  S lhs = a0 * inner;
  S rhs = int_power(q, n - 1) * (1L - int_power(q, n));
  if (rhs == 0) fail(ErrorKind::division_by_zero, "Painleve right-hand side vanishes");
  S r = lhs / rhs - 1L;
  if constexpr (std::is_same_v<S, ExactRational>) {
    r.canonicalize();
    return abs(r);
  } else {
    return abs(r);
  }
}

template ExactRational painleve_residual(std::span<const ExactRational>, long, const ExactRational&);
template HPReal painleve_residual(std::span<const HPReal>, long, const HPReal&);

AsymptoticReport painleve_report(const RecurrenceTable<HPReal>& rec, const std::vector<long>& n_set) {
  AsymptoticReport r = blank_report("painleve", rec);
  const HPReal q(rec.q, Bits{rec.work_bits});
  for (long n : n_set) {
    if (n < 1 || n + 1 > rec.n_max) fail(ErrorKind::bad_input, "painleve rows need 1 <= n < n_max");
    const auto start = Clock::now();
    HPReal e = painleve_residual<HPReal>(rec.a, n, q);
    r.rows.push_back({n, e, elapsed_ms(start)});
  }
  fit_report(r, fit_floor(rec.work_bits));
  const double qd = rec.q.get_d();
  r.passed = r.fit_points >= 2 && r.fitted_rate >= 0.7 * qd && r.fitted_rate <= 1.3 * qd;
  r.details["rate_per_unit_n"] = fmt(r.fitted_rate);
  r.details["expected_rate"] = fmt(qd);
  return r;
}

// ---- smallest zeros ----

AsymptoticReport smallest_zero_scaling(const RecurrenceTable<HPReal>& rec, const ModelSolution& sol,
                                       const std::vector<long>& n_set, const PrecisionPolicy& policy) {
  check_even_set(n_set, rec.n_max);
  AsymptoticReport r = blank_report("zeros", rec);
  const HPReal t_star = psi_smallest_positive_zero(sol);
  const HPReal q(rec.q, policy.bits());
  for (long n : n_set) {
    const auto start = Clock::now();
    const HPReal x = smallest_positive_zero(rec, n, policy);
    const HPReal rn = x / pow(sqrt(q), n);
    r.rows.push_back({n, abs(rn - t_star), elapsed_ms(start)});
    r.details["r_" + std::to_string(n)] = rn.str(20);
  }
  r.details["t_star"] = t_star.str(30);
  fit_report(r, fit_floor(policy.work_bits));
  const double q2 = rec.q.get_d() * rec.q.get_d();
  bool ok = r.rows.size() >= 2;
  for (double s : step_ratios(r)) ok = ok && s <= 2.0 * q2;
  r.passed = ok;
  r.details["rate_per_even_step"] = fmt(r.rate_per_even_step());
  return r;
}

HPReal residue_ratio(const ModelSolution& sol, long k) {
  const Bits b = sol.policy.bits();
  const HPComplex ratio = residue_at(sol, k) / residue_at(sol, k + 1);
  // t^4 q^{4-alpha} at t = q^{-(k+1)}
  const HPReal law = power_of(sol.params.q, ExactRational(-4 * k) - sol.params.alpha, b);
  return abs(ratio) / law;
}

}  // namespace qortho
