#include "qortho/modelrhp.hpp"

#include <cmath>

namespace qortho {

const char* to_string(SeriesLabel label) {
  switch (label) {
    case SeriesLabel::A: return "A";
    case SeriesLabel::B: return "B";
    case SeriesLabel::C: return "C";
  }
  return "?";
}

// ---- SeriesSolution ----

long SeriesSolution::power1(std::size_t i) const {
  const long k = static_cast<long>(i);
  switch (label) {
    case SeriesLabel::A: return 2 * k;
    case SeriesLabel::B: return 2 * k + 1;
    case SeriesLabel::C: return -(2 * k + 1);
  }
  return 0;
}

long SeriesSolution::power2(std::size_t i) const {
  const long k = static_cast<long>(i);
  switch (label) {
    case SeriesLabel::A: return 2 * k + 1;
    case SeriesLabel::B: return 2 * k;
    case SeriesLabel::C: return -2 * k;
  }
  return 0;
}

namespace {

struct SumResult {
  HPComplex value;
  HPReal last;     // |last two terms|
  HPReal largest;  // largest term magnitude
};

// sum_i c_i s^i
SumResult power_sum(const std::vector<HPReal>& c, const HPComplex& s, Bits b) {
  SumResult r{HPComplex(0L, b), HPReal(b), HPReal(b)};
  HPComplex sp(1L, b);
  HPReal prev_mag(b);
  for (std::size_t i = 0; i < c.size(); ++i) {
    HPComplex term = sp * c[i];
    HPReal mag = abs(term);
    r.value += term;
    if (mag > r.largest) r.largest = mag;
    r.last = mag + prev_mag;
    prev_mag = std::move(mag);
    sp *= s;
  }
  return r;
}

}  // namespace

Approx<Vec2> SeriesSolution::evaluate(const HPComplex& t, const HPReal& eps) const {
  const Bits b{std::max(work_bits, t.bits())};
  if (label == SeriesLabel::C && t.is_zero()) fail(ErrorKind::zero_argument, "S_C is singular at t = 0");
  const HPComplex x = label == SeriesLabel::C ? inverse(t) : t;
  const HPComplex s = square(x);
  SumResult even = power_sum(label == SeriesLabel::B || label == SeriesLabel::C ? comp2 : comp1, s, b);
  SumResult odd = power_sum(label == SeriesLabel::A ? comp2 : comp1, s, b);
  odd.value *= x;
  odd.last *= abs(x);
  odd.largest *= abs(x);

  bool converged = true;
  HPReal tail(b);
  for (const SumResult* r : {&even, &odd}) {
    const HPReal size = max(abs(r->value), HPReal(1L, b));
    if (r->last > eps * size) converged = false;
    // Cancellation that eats all but a few guard bits of the working precision.
    if (r->largest > abs(r->value) * pow2(static_cast<long>(b.value) - 24, b) && !r->value.is_zero()) {
      converged = false;
    }
    tail += r->last;
  }
  const std::size_t terms = comp1.size() + comp2.size();
  Vec2 v = label == SeriesLabel::A ? Vec2{even.value, odd.value} : Vec2{odd.value, even.value};
  return {v, {terms, tail, converged}};
}

SeriesSolution SeriesSolution::scaled(const HPReal& factor) const {
  SeriesSolution out = *this;
  for (auto& c : out.comp1) c *= factor;
  for (auto& c : out.comp2) c *= factor;
  out.scale *= factor;
  return out;
}

// ---- series construction ----

namespace {

void check_j_max(long j_max) {
  if (j_max < 2) fail(ErrorKind::bad_input, "J_max must be at least 2");
}

void check_resonance(const HPReal& den, const HPReal& size, const char* what, long j) {
  const unsigned bits = den.bits();
  if (abs(den) <= size * pow2(-static_cast<long>(bits) / 2, Bits{bits})) {
    fail(ErrorKind::resonance, std::string("resonance in ") + what + " at j=" + std::to_string(j) +
                                   ": q^alpha coincides with a lattice power (log terms required)");
  }
}

SeriesSolution blank(SeriesLabel label, const QParams& params, long j_max, const PrecisionPolicy& policy) {
  SeriesSolution s;
  s.label = label;
  s.q = params.q;
  s.alpha = params.alpha;
  s.j_max = j_max;
  s.work_bits = policy.work_bits;
  s.scale = policy.real(1);
  s.comp1.assign(static_cast<std::size_t>(j_max + 1), HPReal(policy.bits()));
  s.comp2.assign(static_cast<std::size_t>(j_max + 1), HPReal(policy.bits()));
  return s;
}

}  // namespace

SeriesSolution build_series_A(const QParams& params, long j_max, const PrecisionPolicy& policy) {
  policy.validate();
  check_j_max(j_max);
  const Bits b = policy.bits();
  const HPReal q = params.q_hp(b);
  const HPReal qma = power_of(params.q, -params.alpha, b);  // q^{-alpha}
  const HPReal q2ma = q * q * qma;                           // q^{2-alpha}
  SeriesSolution s = blank(SeriesLabel::A, params, j_max, policy);
  s.seed_note = "A_{1,0} = 1";
  s.comp1[0] = HPReal(1L, b);
  {
    HPReal den = q - qma;
    check_resonance(den, max(q, qma), "S_A", 0);
    s.comp2[0] = q2ma / den;
  }
  HPReal q2j(1L, b);  // q^{2j}
  for (long j = 1; j <= j_max; ++j) {
    const std::size_t jj = static_cast<std::size_t>(j);
    q2j *= q * q;
    const HPReal one_minus = 1L - q2j;
    s.comp1[jj] = s.comp2[jj - 1] / one_minus;
    const HPReal q2j1 = q2j * q;
    HPReal den = qma - q2j1;
    check_resonance(den, max(q2j1, qma), "S_A", j);
    s.comp2[jj] = -(q2ma * q2j) * s.comp2[jj - 1] / (one_minus * den);
  }
  return s;
}

SeriesSolution build_series_B(const QParams& params, long j_max, const PrecisionPolicy& policy) {
  policy.validate();
  check_j_max(j_max);
  const Bits b = policy.bits();
  const HPReal q = params.q_hp(b);
  const HPReal qa = power_of(params.q, params.alpha, b);
  SeriesSolution s = blank(SeriesLabel::B, params, j_max, policy);
  s.seed_note = "B_{2,0} = 1";
  s.comp2[0] = HPReal(1L, b);
  HPReal q2j1 = q;  // q^{2j+1}
  for (long j = 0; j <= j_max; ++j) {
    const std::size_t jj = static_cast<std::size_t>(j);
    HPReal den = qa - q2j1;
    check_resonance(den, max(qa, q2j1), "S_B", j);
    s.comp1[jj] = qa * s.comp2[jj] / den;
    if (j == j_max) break;
    // B_{2,2l} with l = j+1
    const HPReal q2l = q2j1 * q;
    s.comp2[jj + 1] = -(q2l * q) * s.comp2[jj] / ((1L - q2l) * den);
    q2j1 *= q * q;
  }
  return s;
}

SeriesSolution build_series_C(const QParams& params, long j_max, const PrecisionPolicy& policy) {
  policy.validate();
  check_j_max(j_max);
  const Bits b = policy.bits();
  const HPReal q = params.q_hp(b);
  const HPReal q2 = q * q;
  const HPReal qa = power_of(params.q, params.alpha, b);
  SeriesSolution s = blank(SeriesLabel::C, params, j_max, policy);
  s.seed_note = "C_{2,0} = 1";
  s.comp2[0] = HPReal(1L, b);
  s.comp1[0] = qa / q;
  HPReal qm2m(1L, b);  // q^{-2m}
  HPReal q2m1 = q;     // q^{2m+1}
  for (long m = 0; m < j_max; ++m) {
    const std::size_t mm = static_cast<std::size_t>(m);
    HPReal den = q2 - qm2m;
    check_resonance(den, max(q2, qm2m), "S_C", m);
    s.comp2[mm + 1] = (q2 * s.comp1[mm] + s.comp2[mm]) / den;
    s.comp1[mm + 1] = q2m1 * qa * (s.comp2[mm + 1] - s.comp1[mm]);
    qm2m /= q2;
    q2m1 *= q2;
  }
  return s;
}

std::array<HPComplex, 4> matrix_A(const HPComplex& t, const QParams& params, Bits bits) {
  const HPReal q = params.q_hp(bits);
  const HPReal qma = power_of(params.q, -params.alpha, bits);
  const HPReal q2ma = q * q * qma;
  return {HPComplex(1L, bits), -t, t * q2ma, qma - square(t) * q2ma};
}

HPReal qdifference_residual(const SeriesSolution& s, const HPComplex& t, const PrecisionPolicy& policy) {
  const Bits b{std::max(policy.work_bits, s.work_bits)};
  const QParams params(s.q, s.alpha);
  const HPReal q = params.q_hp(b);
  const HPReal eps = policy.eps();
  auto m = matrix_A(t, params, b);
  HPComplex factor(1L, b);
  if (s.label != SeriesLabel::A) factor = HPComplex(power_of(s.q, s.alpha, b));
  if (s.label == SeriesLabel::C) factor = -factor / (square(t) * q * q);
  const Vec2 at = s.evaluate(t, eps).checked("series evaluation");
  const Vec2 shifted = s.evaluate(t * q, eps).checked("series evaluation");
  HPComplex r1 = shifted[0] - factor * (m[0] * at[0] + m[1] * at[1]);
  HPComplex r2 = shifted[1] - factor * (m[2] * at[0] + m[3] * at[1]);
  return max(abs(r1), abs(r2));
}

// ---- C0 ----

namespace {

// Series A long enough to be evaluated on the ray |t| = q^{-r-1/2}.
SeriesSolution extended_A(const SeriesSolution& a, long r, const PrecisionPolicy& policy) {
  const double lg = std::log2(1.0 / a.q.get_d());
  const long extra = static_cast<long>(std::ceil(policy.work_bits / (lg * static_cast<double>(r + 1))));
  const long j = std::max(a.j_max, 2 * r + 24 + extra);
  if (j == a.j_max) return a;
  return build_series_A(QParams(a.q, a.alpha), j, policy).scaled(a.scale);
}

HPReal neville_at_zero(const std::vector<HPReal>& x, const std::vector<HPReal>& y) {
  std::vector<HPReal> p = y;
  const std::size_t n = x.size();
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      // Interpolant through points i..i+level evaluated at 0.
      p[i] = (x[i + level] * p[i] - x[i] * p[i + 1]) / (x[i + level] - x[i]);
    }
  }
  return p[0];
}

constexpr long c0_window = 10;
constexpr long c0_max_r = 40;

}  // namespace

C0Estimate c0_at_level(const SeriesSolution& a, long r, const PrecisionPolicy& policy) {
  if (a.label != SeriesLabel::A) fail(ErrorKind::bad_input, "C0 is defined from series A");
  if (r < 1 || r > c0_max_r) fail(ErrorKind::bad_input, "C0 level must lie in 1..40");
  const Bits b = policy.bits();
  const SeriesSolution ext = extended_A(a, r, policy);
  const HPReal q(a.q, b);
  const HPReal sq = sqrt(q);
  const Tolerance tol = policy.tolerance();
  std::vector<HPReal> u, v;
  auto estimate = [&](long level) {
    const long lo = std::max<long>(1, level - c0_window + 1);
    std::vector<HPReal> xs(u.begin() + (lo - 1), u.begin() + level);
    std::vector<HPReal> ys(v.begin() + (lo - 1), v.begin() + level);
    return neville_at_zero(xs, ys);
  };
  for (long k = 1; k <= r; ++k) {
    const HPReal t = 1L / (pow(q, k) * sq);  // q^{-k-1/2}
    const Vec2 s = ext.evaluate(HPComplex(t), policy.eps()).checked("S_A on the C0 ray");
    const HPComplex g = g_fn(HPComplex(t), q, tol).checked("g on the C0 ray");
    u.push_back(1L / (t * t));
    v.push_back(s[0].re / g.re);
  }
  C0Estimate out;
  out.r = r;
  out.value = estimate(r);
  out.gap = r >= 2 ? abs(out.value - estimate(r - 1)) : abs(out.value);
  return out;
}

C0Estimate compute_C0(const SeriesSolution& a, const PrecisionPolicy& policy) {
  if (a.label != SeriesLabel::A) fail(ErrorKind::bad_input, "C0 is defined from series A");
  const Bits b = policy.bits();
  const SeriesSolution ext = extended_A(a, c0_max_r, policy);
  const HPReal q(a.q, b);
  const HPReal sq = sqrt(q);
  const Tolerance tol = policy.tolerance();
  const HPReal floor = pow2(48 - static_cast<long>(b.value), b);
  std::vector<HPReal> u, v;
  HPReal previous(b);
  for (long r = 1; r <= c0_max_r; ++r) {
    const HPReal t = 1L / (pow(q, r) * sq);
    const Vec2 s = ext.evaluate(HPComplex(t), policy.eps()).checked("S_A on the C0 ray");
    const HPComplex g = g_fn(HPComplex(t), q, tol).checked("g on the C0 ray");
    u.push_back(1L / (t * t));
    v.push_back(s[0].re / g.re);
    const std::size_t lo = static_cast<std::size_t>(std::max<long>(0, r - c0_window));
    HPReal est = neville_at_zero(std::vector<HPReal>(u.begin() + static_cast<long>(lo), u.end()),
                                 std::vector<HPReal>(v.begin() + static_cast<long>(lo), v.end()));
    if (r >= 3) {
      HPReal gap = abs(est - previous);
      const HPReal target = max(policy.eps(), floor) * max(abs(est), HPReal(1L, b));
      if (gap <= target) {
        if (est.is_zero()) fail(ErrorKind::non_convergence, "C0 vanished; the model solution is degenerate");
        return {est, gap, r};
      }
    }
    previous = std::move(est);
  }
  fail(ErrorKind::non_convergence, "C0 did not stabilise along the midpoint ray within r <= 40");
}

// ---- model solution ----

HPComplex ModelSolution::psi(const HPComplex& t) const {
  return A.evaluate(t, policy.eps()).checked("psi")[0] / C0.value;
}
HPComplex ModelSolution::phi(const HPComplex& t) const {
  return B.evaluate(t, policy.eps()).checked("phi")[0] / C0.value;
}
HPComplex ModelSolution::varphi(const HPComplex& t) const { return A.evaluate(t, policy.eps()).checked("varphi")[1]; }
HPComplex ModelSolution::rho(const HPComplex& t) const { return B.evaluate(t, policy.eps()).checked("rho")[1]; }

ModelSolution build_model_solution(const QParams& params, long j_max, const PrecisionPolicy& policy) {
  policy.validate();
  const Bits b = policy.bits();
  ModelSolution sol;
  sol.params = params;
  sol.policy = policy;
  sol.A = build_series_A(params, j_max, policy);
  sol.B = build_series_B(params, j_max, policy);
  sol.C = build_series_C(params, j_max, policy);

  // Pin the two connection scales at t*.
  const Tolerance tol = policy.tolerance();
  sol.pin_point = HPReal(ExactRational(3, 10), b);
  const HPComplex t(sol.pin_point);
  const Vec2 sa = sol.A.evaluate(t, tol.eps).checked("S_A at the pin point");
  const Vec2 sb = sol.B.evaluate(t, tol.eps).checked("S_B at the pin point");
  const Vec2 sc = sol.C.evaluate(t, tol.eps).checked("S_C at the pin point");
  const HPComplex g = g_fn(t, params.q_hp(b), tol).checked("g at the pin point");
  const HPComplex h = h_alpha(t, params, tol).checked("h_alpha at the pin point");
  const HPComplex m11 = g * h * sa[0], m12 = g * sb[0];
  const HPComplex m21 = g * h * sa[1], m22 = g * sb[1];
  const HPComplex det = m11 * m22 - m12 * m21;
  if (abs(det) <= pow2(-static_cast<long>(b.value) / 2, b) * (abs(m11 * m22) + abs(m12 * m21))) {
    fail(ErrorKind::non_convergence, "connection pin system is singular at t* = 0.3");
  }
  const HPComplex k1 = (sc[0] * m22 - m12 * sc[1]) / det;
  const HPComplex k2 = (m11 * sc[1] - m21 * sc[0]) / det;
  sol.connection_K1 = k1.re;
  sol.connection_K2 = k2.re;
  sol.A = sol.A.scaled(sol.connection_K1);
  sol.B = sol.B.scaled(sol.connection_K2);

  sol.C0 = compute_C0(sol.A, policy);
  return normalize_det(std::move(sol));
}

ModelSolution normalize_det(ModelSolution sol) {
  const Bits b = sol.policy.bits();
  const HPReal det0 = sol.A.comp1[0] * sol.B.comp2[0] / sol.C0.value;  // psi(0) rho(0)
  if (abs(det0) <= pow2(-static_cast<long>(b.value) / 2, b)) {
    fail(ErrorKind::zero_det, "psi(0) rho(0) vanishes; cannot normalise det = 1");
  }
  sol.det_factor = 1L / det0;
  sol.B = sol.B.scaled(sol.det_factor);
  sol.det_normalized = true;
  return sol;
}

HPReal det_residual(const ModelSolution& sol, const HPComplex& t) {
  HPComplex d = sol.psi(t) * sol.rho(t) - sol.phi(t) * sol.varphi(t);
  return abs(d - HPComplex(1L, Bits{d.bits()}));
}

HPReal connection_residual(const ModelSolution& sol, const HPComplex& t) {
  const Bits b = sol.policy.bits();
  const Tolerance tol = sol.policy.tolerance();
  const HPComplex h = h_alpha(t, sol.params, tol).checked("h_alpha");
  const HPComplex g = g_fn(t, sol.params.q_hp(b), tol).checked("g");
  const Vec2 sa = sol.A.evaluate(t, tol.eps).checked("S_A");
  const Vec2 sb = sol.B.evaluate(t, tol.eps).checked("S_B");
  const Vec2 sc = sol.C.evaluate(t, tol.eps).checked("S_C");
  HPReal r(b);
  for (int i = 0; i < 2; ++i) r = max(r, abs(sc[i] - g * (h * sa[i] + sb[i])));
  return r;
}

HPComplex residue_at(const ModelSolution& sol, long k) {
  if (k < 1) fail(ErrorKind::bad_input, "residue_at needs k >= 1");
  const Bits b = sol.policy.bits();
  const SeriesSolution ext = extended_A(sol.A, k, sol.policy);
  const HPReal q = sol.params.q_hp(b);
  const HPComplex t(pow(q, -k));
  const HPComplex a = ext.evaluate(t, sol.policy.eps()).checked("S_A at a pole of 1/g")[0];
  const HPComplex gp = g_prime(t, q, sol.policy.tolerance()).checked("g'");
  return a / gp;
}

HPReal psi_smallest_positive_zero(const ModelSolution& sol) {
  const Bits b = sol.policy.bits();
  const HPReal step(ExactRational(1, 64), b);
  auto value = [&](const HPReal& t) { return sol.psi(HPComplex(t)).re; };
  HPReal lo(b);
  HPReal v_lo = value(lo);
  if (v_lo.is_zero()) fail(ErrorKind::no_sign_change, "psi vanishes at 0");
  for (long j = 1; j <= 64 * 64; ++j) {
    HPReal hi = step * j;
    HPReal v_hi = value(hi);
    if (v_hi.is_zero()) return hi;
    if (v_hi.sign() != v_lo.sign()) {
      const HPReal width = pow2(-static_cast<long>(b.value) / 2, b);
      while (hi - lo > width * hi) {
        HPReal mid = (lo + hi) / 2L;
        HPReal vm = value(mid);
        if (vm.is_zero()) return mid;
        if (vm.sign() == v_lo.sign()) {
          lo = std::move(mid);
          v_lo = std::move(vm);
        } else {
          hi = std::move(mid);
        }
      }
      return (lo + hi) / 2L;
    }
    lo = std::move(hi);
    v_lo = std::move(v_hi);
  }
  fail(ErrorKind::no_sign_change, "psi has no sign change on (0, 64]");
}

HPReal qhermite_limit_check(const QParams& params, const RecurrenceTable<HPReal>& rec, long n, const HPComplex& t) {
  if (params.alpha != 0) fail(ErrorKind::bad_input, "the q-Hermite limit system is stated for alpha = 0");
  if (n < 2 || n % 2 != 0 || n > rec.n_max) fail(ErrorKind::bad_input, "qhermite_limit_check needs even 2 <= n <= n_max");
  const Bits b{std::max(rec.work_bits, t.bits())};
  const HPReal q = params.q_hp(b);
  const long h = n / 2;
  HPReal s = pow(q, -h * (h - 1));
  if (h % 2 != 0) s = -s;
  const HPReal qh = pow(q, h);
  auto scaled = [&](const HPComplex& tt) {
    const HPComplex z = tt * qh;
    return Vec2{eval_poly(rec, n, z) * s, eval_poly(rec, n - 1, z) * (s * qh)};
  };
  const Vec2 at = scaled(t);
  const Vec2 shifted = scaled(t * q);
  const HPReal q2 = q * q;
  HPComplex r1 = shifted[0] - (at[0] - t * at[1]);
  HPComplex r2 = shifted[1] - (t * q2 * at[0] + (1L - square(t) * q2) * at[1]);
  return max(abs(r1), abs(r2));
}

// ---- substitution oracle ----

SubstitutionResult substitution_oracle(SeriesLabel label, const ExactRational& q, const ExactRational& alpha,
                                       long degree) {
  if (degree < 1) fail(ErrorKind::bad_input, "substitution_oracle needs degree >= 1");
  ExactRational qa;
  if (!rational_power(q, alpha, qa)) fail(ErrorKind::bad_input, "substitution_oracle needs rational q^alpha");
  const ExactRational qma = 1 / qa;
  const ExactRational q2 = q * q;
  // N(x) = sum_d N_d x^d, stored as N[d][i][j].
  ExactRational N[3][2][2];
  for (auto& d : N)
    for (auto& r : d)
      for (auto& c : r) c = 0;
  ExactRational lambda;
  int seed_comp = 0;
  switch (label) {
    case SeriesLabel::A:
    case SeriesLabel::B: {
      const ExactRational f = label == SeriesLabel::A ? ExactRational(1) : qa;
      N[0][0][0] = f;
      N[1][0][1] = -f;
      N[1][1][0] = f * q2 * qma;
      N[0][1][1] = f * qma;
      N[2][1][1] = -f * q2 * qma;
      lambda = q;
      seed_comp = label == SeriesLabel::A ? 0 : 1;
      break;
    }
    case SeriesLabel::C:
      N[2][0][0] = -qa / q2;
      N[1][0][1] = qa / q2;
      N[1][1][0] = -1;
      N[2][1][1] = -1 / q2;
      N[0][1][1] = 1;
      lambda = 1 / q;
      seed_comp = 1;
      break;
  }
  const std::size_t D = static_cast<std::size_t>(degree);
  const std::size_t unknowns = 2 * (D + 1);
  auto idx = [&](std::size_t comp, std::size_t p) { return comp * (D + 1) + p; };
  std::vector<std::vector<ExactRational>> rows;
  ExactRational lp(1);
  for (std::size_t p = 0; p <= D; ++p) {
    for (std::size_t i = 0; i < 2; ++i) {
      std::vector<ExactRational> row(unknowns + 1, ExactRational(0));
      row[idx(i, p)] += lp;
      for (std::size_t d = 0; d <= 2 && d <= p; ++d)
        for (std::size_t j = 0; j < 2; ++j) row[idx(j, p - d)] -= N[d][i][j];
      rows.push_back(std::move(row));
    }
    lp *= lambda;
  }
  // Constant terms: seed one component, exclude the other solution.
  for (std::size_t comp = 0; comp < 2; ++comp) {
    std::vector<ExactRational> seed(unknowns + 1, ExactRational(0));
    seed[idx(comp, 0)] = 1;
    seed[unknowns] = comp == static_cast<std::size_t>(seed_comp) ? 1 : 0;
    rows.push_back(std::move(seed));
  }
  // Gauss-Jordan elimination.
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < unknowns && r < rows.size(); ++c) {
    std::size_t p = r;
    while (p < rows.size() && rows[p][c] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    const ExactRational inv = 1 / rows[r][c];
    for (auto& x : rows[r]) x *= inv;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k == r || rows[k][c] == 0) continue;
      const ExactRational f = rows[k][c];
      for (std::size_t m = c; m <= unknowns; ++m) rows[k][m] -= f * rows[r][m];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t k = r; k < rows.size(); ++k) {
    if (rows[k][unknowns] != 0) fail(ErrorKind::non_convergence, "substitution system is inconsistent");
  }
  if (pivot_col.size() != unknowns) fail(ErrorKind::non_convergence, "substitution system is underdetermined");
  SubstitutionResult out;
  out.comp1.assign(D + 1, ExactRational(0));
  out.comp2.assign(D + 1, ExactRational(0));
  for (std::size_t k = 0; k < r; ++k) {
    const std::size_t c = pivot_col[k];
    ExactRational v = rows[k][unknowns];
    v.canonicalize();
    (c <= D ? out.comp1[c] : out.comp2[c - D - 1]) = v;
  }
  return out;
}

}  // namespace qortho
