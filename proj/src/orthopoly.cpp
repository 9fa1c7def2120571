#include "qortho/orthopoly.hpp"

#include <type_traits>

namespace qortho {

namespace {

bool is_exact_zero(const ExactRational& x) { return x == 0; }
bool is_exact_zero(const HPReal& x) { return x.is_zero(); }

ExactRational magnitude(const ExactRational& x) { return abs(x); }
HPReal magnitude(const HPReal& x) { return abs(x); }

ExactRational q_power_alpha_exact(const ExactRational& q, const ExactRational& alpha, bool& ok) {
  ExactRational out;
  ok = rational_power(q, alpha, out);
  return out;
}

}  // namespace

// ---- moments ----

std::optional<MomentTable<ExactRational>> exact_moments(const WeightSpec& spec, long n_max) {
  if (n_max < 0) fail(ErrorKind::bad_input, "n_max must be non-negative");
  auto coeffs = spec.polynomial_coeffs();
  if (!coeffs) return std::nullopt;
  bool ok = false;
  const ExactRational qa = q_power_alpha_exact(spec.q, spec.alpha, ok);
  if (!ok) return std::nullopt;
  MomentTable<ExactRational> t;
  t.q = spec.q;
  t.alpha = spec.alpha;
  t.weight = spec.id();
  t.exact = true;
  t.even = spec.is_even();
  t.mu.assign(static_cast<std::size_t>(2 * n_max + 1), ExactRational(0));
  for (long m = 0; m <= 2 * n_max; ++m) {
    ExactRational acc(0);
    for (std::size_t i = 0; i < coeffs->size(); ++i) {
      if ((m + static_cast<long>(i)) % 2 != 0 || (*coeffs)[i] == 0) continue;
      ExactRational qp(1);
      for (long e = 0; e < m + static_cast<long>(i) + 1; ++e) qp *= spec.q;
      acc += 2 * (*coeffs)[i] / (1 - qp * qa);
    }
    acc.canonicalize();
    t.mu[static_cast<std::size_t>(m)] = acc;
  }
  return t;
}

MomentTable<ExactRational> exact_one_sided_moments(const std::vector<ExactRational>& w_poly, const ExactRational& q,
                                                   long n_max) {
  if (q <= 0 || q >= 1) fail(ErrorKind::bad_input, "q out of range: expected 0 < q < 1");
  MomentTable<ExactRational> t;
  t.q = q;
  t.alpha = 0;
  t.weight = "one-sided";
  t.exact = true;
  t.mu.assign(static_cast<std::size_t>(2 * n_max + 1), ExactRational(0));
  for (long m = 0; m <= 2 * n_max; ++m) {
    ExactRational acc(0);
    for (std::size_t i = 0; i < w_poly.size(); ++i) {
      ExactRational qp(1);
      for (long e = 0; e < m + static_cast<long>(i) + 1; ++e) qp *= q;
      acc += w_poly[i] / (1 - qp);
    }
    acc.canonicalize();
    t.mu[static_cast<std::size_t>(m)] = acc;
  }
  return t;
}

MomentTable<HPReal> moments(const WeightSpec& spec, long n_max, const PrecisionPolicy& policy) {
  policy.validate();
  if (n_max < 0) fail(ErrorKind::bad_input, "n_max must be non-negative");
  if (spec.alpha <= -1) fail(ErrorKind::domain, "divergent moments: alpha must exceed -1");
  const Bits b = policy.bits();
  const std::size_t count = static_cast<std::size_t>(2 * n_max + 1);
  MomentTable<HPReal> t;
  t.q = spec.q;
  t.alpha = spec.alpha;
  t.weight = spec.id();
  t.even = spec.is_even();
  t.work_bits = b.value;
  t.status = {0, HPReal(b), true};

  const HPReal q(spec.q, b);
  bool rational_qa = false;
  const ExactRational qa_exact = q_power_alpha_exact(spec.q, spec.alpha, rational_qa);
  const HPReal qa = rational_qa ? HPReal(qa_exact, b) : exp(HPReal(spec.alpha, b) * log(q));

  if (auto coeffs = spec.polynomial_coeffs()) {
    t.mu.assign(count, HPReal(b));
    for (std::size_t m = 0; m < count; ++m) {
      for (std::size_t i = 0; i < coeffs->size(); ++i) {
        if ((m + i) % 2 != 0 || (*coeffs)[i] == 0) continue;
        const HPReal ratio = pow(q, static_cast<long>(m + i + 1)) * qa;
        t.mu[m] += 2L * HPReal((*coeffs)[i], b) / (1L - ratio);
      }
    }
    return t;
  }

  const Tolerance tol = policy.tolerance();
  std::vector<HPReal> plus(count, HPReal(b)), minus(count, HPReal(b));
  std::vector<RatioTail> tail_plus(count), tail_minus(count);
  std::vector<HPReal> term_base(count);  // q^{k(m+1+alpha)} for the current k
  for (std::size_t m = 0; m < count; ++m) term_base[m] = HPReal(1L, b);
  std::vector<HPReal> step(count);
  for (std::size_t m = 0; m < count; ++m) step[m] = pow(q, static_cast<long>(m + 1)) * qa;

  for (std::size_t k = 0;; ++k) {
    if (k >= tol.max_terms) {
      t.status.converged = false;
      t.status.terms = k;
      break;
    }
    if (spec.kind == WeightKind::user_table && k >= spec.lattice->table_size()) {
      fail(ErrorKind::table_miss, "moments exhausted the weight table at K=" +
                                      std::to_string(spec.lattice->table_size() - 1));
    }
    const long kk = static_cast<long>(k);
    auto wp = eval_weight_lattice(spec, kk, 1, tol);
    auto wm = eval_weight_lattice(spec, kk, -1, tol);
    t.status.merge({0, HPReal(b), wp.status.converged && wm.status.converged});
    if (!wp.value.is_real() || !wm.value.is_real()) fail(ErrorKind::bad_input, "weights must be real on the lattice");
    HPReal total_bound(b);
    bool certified = true;
    for (std::size_t m = 0; m < count; ++m) {
      HPReal sp = term_base[m] * wp.value.re;
      HPReal sm = term_base[m] * wm.value.re;
      if (m % 2 == 1) sm = -sm;
      tail_plus[m].push(abs(sp));
      tail_minus[m].push(abs(sm));
      plus[m] += sp;
      minus[m] += sm;
      term_base[m] *= step[m];
      auto bp = tail_plus[m].bound();
      auto bm = tail_minus[m].bound();
      if (!bp || !bm || *bp + *bm > tol.eps) {
        certified = false;
      } else {
        total_bound += *bp + *bm;
      }
    }
    if (certified) {
      t.status.terms = k + 1;
      t.status.tail_bound = total_bound;
      break;
    }
  }
  t.mu.resize(count);
  for (std::size_t m = 0; m < count; ++m) t.mu[m] = plus[m] + minus[m];
  if (t.even) {
    for (std::size_t m = 1; m < count; m += 2) t.mu[m] = HPReal(b);
  }
  return t;
}

// ---- recurrence ----

template <class S>
RecurrenceTable<S> recurrence_stieltjes(const MomentTable<S>& moms, long n_max) {
  if (n_max < 0) fail(ErrorKind::bad_input, "n_max must be non-negative");
  if (moms.mu.size() < static_cast<std::size_t>(2 * n_max + 1)) {
    fail(ErrorKind::bad_input, "moment table too short for n_max=" + std::to_string(n_max));
  }
  constexpr bool exact = std::is_same_v<S, ExactRational>;
  const auto& mu = moms.mu;
  auto zero = [&]() -> S {
    if constexpr (exact) return ExactRational(0);
    else return HPReal(Bits{moms.work_bits});
  };

  RecurrenceTable<S> rec;
  rec.q = moms.q;
  rec.alpha = moms.alpha;
  rec.weight = moms.weight;
  rec.n_max = n_max;
  rec.exact = exact;
  rec.work_bits = moms.work_bits;
  rec.status = moms.status;
  rec.a.assign(static_cast<std::size_t>(n_max + 1), zero());
  rec.b.assign(static_cast<std::size_t>(n_max), zero());
  rec.gamma.assign(static_cast<std::size_t>(n_max + 1), zero());

  std::vector<S> prev;  // P_{n-1}
  std::vector<S> cur{zero() + 1L};
  for (long n = 0; n <= n_max; ++n) {
    const std::size_t deg = static_cast<std::size_t>(n);
    S g = zero(), xg = zero(), scale = zero(), l1 = zero();
    for (std::size_t i = 0; i <= deg; ++i) {
      if (is_exact_zero(cur[i])) continue;
      l1 += magnitude(cur[i]);
      for (std::size_t j = 0; j <= deg; ++j) {
        if (is_exact_zero(cur[j])) continue;
        S cij = cur[i] * cur[j];
        g += cij * mu[i + j];
        scale += magnitude(cij * mu[i + j]);
        if (n < n_max) xg += cij * mu[i + j + 1];
      }
    }
    bool degenerate = is_exact_zero(g);
    if constexpr (!exact) {
      const long bits = static_cast<long>(moms.work_bits);
      HPReal floor = pow2(32 - bits, Bits{moms.work_bits}) * scale;
      HPReal tail_floor = 16L * l1 * l1 * moms.status.tail_bound;
      if (tail_floor > floor) floor = tail_floor;
      degenerate = degenerate || abs(g) < floor;
    }
    if (degenerate) {
      fail(ErrorKind::degenerate_measure,
           moms.weight + ": gamma[" + std::to_string(n) + "] vanishes (Hankel determinant degenerate)");
    }
    rec.gamma[deg] = g;
    rec.coeffs.push_back(cur);
    if (n >= 1) rec.a[deg] = g / rec.gamma[deg - 1];
    if (n == n_max) break;
    S bn = xg / g;
    if constexpr (exact) bn.canonicalize();
    if (moms.even) bn = zero();
    rec.b[deg] = bn;
    std::vector<S> next(deg + 2, zero());
    for (std::size_t i = 0; i <= deg; ++i) {
      next[i + 1] += cur[i];
      next[i] -= bn * cur[i];
    }
    if (n >= 1) {
      for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= rec.a[deg] * prev[i];
    }
    if constexpr (exact) {
      for (auto& c : next) c.canonicalize();
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  return rec;
}

template RecurrenceTable<ExactRational> recurrence_stieltjes(const MomentTable<ExactRational>&, long);
template RecurrenceTable<HPReal> recurrence_stieltjes(const MomentTable<HPReal>&, long);

namespace {

ExactRational exact_det(std::vector<std::vector<ExactRational>> m) {
  const std::size_t n = m.size();
  ExactRational det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return ExactRational(0);
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      const ExactRational f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  det.canonicalize();
  return det;
}

}  // namespace

RecurrenceTable<ExactRational> hankel_oracle(const MomentTable<ExactRational>& moms, long n_max) {
  if (n_max < 0) fail(ErrorKind::bad_input, "n_max must be non-negative");
  if (!moms.exact) fail(ErrorKind::bad_input, "hankel_oracle needs an exact-rational moment table");
  if (moms.mu.size() < static_cast<std::size_t>(2 * n_max + 1)) fail(ErrorKind::bad_input, "moment table too short");
  const auto& mu = moms.mu;
  auto hankel = [&](std::size_t n) {
    std::vector<std::vector<ExactRational>> h(n, std::vector<ExactRational>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) h[i][j] = mu[i + j];
    return h;
  };
  RecurrenceTable<ExactRational> rec;
  rec.q = moms.q;
  rec.alpha = moms.alpha;
  rec.weight = moms.weight;
  rec.n_max = n_max;
  rec.exact = true;
  const std::size_t N = static_cast<std::size_t>(n_max);
  std::vector<ExactRational> D(N + 2);
  D[0] = 1;
  for (std::size_t n = 1; n <= N + 1; ++n) {
    D[n] = exact_det(hankel(n));
    if (D[n] == 0) fail(ErrorKind::degenerate_measure, moms.weight + ": Hankel determinant D_" + std::to_string(n) + " = 0");
  }
  rec.gamma.resize(N + 1);
  rec.a.assign(N + 1, ExactRational(0));
  rec.b.assign(N, ExactRational(0));
  for (std::size_t n = 0; n <= N; ++n) {
    rec.gamma[n] = D[n + 1] / D[n];
    rec.gamma[n].canonicalize();
    if (n >= 1) {
      rec.a[n] = rec.gamma[n] / rec.gamma[n - 1];
      rec.a[n].canonicalize();
    }
    // Bordered determinant expanded along the row (1, x, ..., x^n).
    std::vector<ExactRational> c(n + 1);
    for (std::size_t j = 0; j <= n; ++j) {
      std::vector<std::vector<ExactRational>> minor(n, std::vector<ExactRational>());
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k <= n; ++k) {
          if (k != j) minor[i].push_back(mu[i + k]);
        }
      }
      ExactRational v = exact_det(std::move(minor)) / D[n];
      if ((n + j) % 2 == 1) v = -v;
      v.canonicalize();
      c[j] = v;
    }
    rec.coeffs.push_back(std::move(c));
  }
  for (std::size_t n = 0; n < N; ++n) {
    const ExactRational lower = n >= 1 ? rec.coeffs[n][n - 1] : ExactRational(0);
    rec.b[n] = lower - rec.coeffs[n + 1][n];
    rec.b[n].canonicalize();
  }
  return rec;
}

RecurrenceTable<HPReal> to_hp(const RecurrenceTable<ExactRational>& rec, Bits bits) {
  RecurrenceTable<HPReal> out;
  out.q = rec.q;
  out.alpha = rec.alpha;
  out.weight = rec.weight;
  out.n_max = rec.n_max;
  out.exact = rec.exact;
  out.work_bits = bits.value;
  out.status = {0, HPReal(bits), true};
  auto conv = [&](const std::vector<ExactRational>& v) {
    std::vector<HPReal> r;
    r.reserve(v.size());
    for (const auto& x : v) r.emplace_back(x, bits);
    return r;
  };
  out.a = conv(rec.a);
  out.b = conv(rec.b);
  out.gamma = conv(rec.gamma);
  for (const auto& row : rec.coeffs) out.coeffs.push_back(conv(row));
  return out;
}

RecurrenceTable<HPReal> build_recurrence(const WeightSpec& spec, long n_max, const PrecisionPolicy& policy) {
  policy.validate();
  if (auto ex = exact_moments(spec, n_max)) return to_hp(recurrence_stieltjes(*ex, n_max), policy.bits());
  return recurrence_stieltjes(moments(spec, n_max, policy), n_max);
}

// ---- evaluation ----

namespace {

void check_degree(long n_max, long n) {
  if (n < 0 || n > n_max) {
    fail(ErrorKind::bad_input, "degree " + std::to_string(n) + " outside the table range 0.." + std::to_string(n_max));
  }
}

}  // namespace

template <class S>
S eval_poly(const RecurrenceTable<S>& rec, long n, const S& x) {
  check_degree(rec.n_max, n);
  S prev = x * 0L;
  S cur = prev + 1L;
  for (long k = 0; k < n; ++k) {
    const std::size_t kk = static_cast<std::size_t>(k);
    S next = (x - rec.b[kk]) * cur;
    if (k >= 1) next -= rec.a[kk] * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

template ExactRational eval_poly(const RecurrenceTable<ExactRational>&, long, const ExactRational&);
template HPReal eval_poly(const RecurrenceTable<HPReal>&, long, const HPReal&);

HPComplex eval_poly(const RecurrenceTable<HPReal>& rec, long n, const HPComplex& z) {
  check_degree(rec.n_max, n);
  const Bits b{std::max(z.bits(), rec.work_bits)};
  HPComplex prev(0L, b);
  HPComplex cur(1L, b);
  for (long k = 0; k < n; ++k) {
    const std::size_t kk = static_cast<std::size_t>(k);
    HPComplex next = (z - rec.b[kk]) * cur;
    if (k >= 1) next -= rec.a[kk] * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

HPComplex eval_coeffs(const RecurrenceTable<HPReal>& rec, long n, const HPComplex& z) {
  check_degree(rec.n_max, n);
  const auto& c = rec.coeffs[static_cast<std::size_t>(n)];
  HPComplex acc(0L, Bits{std::max(z.bits(), rec.work_bits)});
  for (std::size_t i = c.size(); i-- > 0;) {
    acc *= z;
    acc += HPComplex(c[i]);
  }
  return acc;
}

Approx<HPReal> orthogonality_residual(const RecurrenceTable<HPReal>& rec, const WeightSpec& spec, long n, long m,
                                      const PrecisionPolicy& policy) {
  check_degree(rec.n_max, n);
  check_degree(rec.n_max, m);
  const Bits b = policy.bits();
  const Tolerance tol = policy.tolerance();
  const HPReal q(spec.q, b);
  bool rational_qa = false;
  const ExactRational qa_exact = q_power_alpha_exact(spec.q, spec.alpha, rational_qa);
  const HPReal step = q * (rational_qa ? HPReal(qa_exact, b) : exp(HPReal(spec.alpha, b) * log(q)));

  HPReal plus(b), minus(b);
  RatioTail tail_plus, tail_minus;
  HPReal qk(1L, b), base(1L, b);  // q^k, q^{k(1+alpha)}
  TruncationStatus status{0, HPReal(b), true};
  for (std::size_t k = 0;; ++k) {
    if (k >= tol.max_terms) {
      status.converged = false;
      status.terms = k;
      break;
    }
    const long kk = static_cast<long>(k);
    if (spec.kind == WeightKind::user_table && k >= spec.lattice->table_size()) {
      fail(ErrorKind::table_miss, "orthogonality_residual exhausted the weight table");
    }
    auto wp = eval_weight_lattice(spec, kk, 1, tol);
    auto wm = eval_weight_lattice(spec, kk, -1, tol);
    HPReal sp = base * eval_poly(rec, n, qk) * eval_poly(rec, m, qk) * wp.value.re;
    HPReal mqk = -qk;
    HPReal sm = base * eval_poly(rec, n, mqk) * eval_poly(rec, m, mqk) * wm.value.re;
    tail_plus.push(abs(sp));
    tail_minus.push(abs(sm));
    plus += sp;
    minus += sm;
    auto bp = tail_plus.bound();
    auto bm = tail_minus.bound();
    if (bp && bm && *bp + *bm <= tol.eps) {
      status.terms = k + 1;
      status.tail_bound = *bp + *bm;
      break;
    }
    qk *= q;
    base *= step;
  }
  HPReal inner = plus + minus;
  const std::size_t nn = static_cast<std::size_t>(n), mm = static_cast<std::size_t>(m);
  if (n == m) inner -= rec.gamma[nn];
  const HPReal norm = sqrt(abs(rec.gamma[nn] * rec.gamma[mm]));
  status.tail_bound /= norm;
  return {abs(inner) / norm, status};
}

HPReal smallest_positive_zero(const RecurrenceTable<HPReal>& rec, long n, const PrecisionPolicy& policy) {
  check_degree(rec.n_max, n);
  if (n < 1) fail(ErrorKind::bad_input, "smallest_positive_zero needs n >= 1");
  const Bits b{std::max(policy.work_bits, rec.work_bits)};
  const HPReal q(rec.q, b);
  const HPReal step = pow(q, HPReal(ExactRational(1, 8), b));  // q^{1/8}
  const long j_start = 4 * n + 32;
  auto value = [&](const HPReal& x) { return eval_poly(rec, n, x); };
  HPReal x_lo = pow(step, j_start);
  HPReal v_lo = value(x_lo);
  if (v_lo.is_zero()) return x_lo;
  for (long j = j_start - 1; j >= 0; --j) {
    HPReal x_hi = pow(step, j);
    HPReal v_hi = value(x_hi);
    if (v_hi.is_zero()) return x_hi;
    if (v_hi.sign() != v_lo.sign()) {
      const HPReal width = pow2(-static_cast<long>(b.value) / 2, b);
      while ((x_hi - x_lo) > width * x_hi) {
        HPReal mid = (x_lo + x_hi) / 2L;
        HPReal vm = value(mid);
        if (vm.is_zero()) return mid;
        if (vm.sign() == v_lo.sign()) {
          x_lo = std::move(mid);
          v_lo = std::move(vm);
        } else {
          x_hi = std::move(mid);
        }
      }
      return (x_lo + x_hi) / 2L;
    }
    x_lo = std::move(x_hi);
    v_lo = std::move(v_hi);
  }
  fail(ErrorKind::no_sign_change, "P_" + std::to_string(n) + " has no sign change on (0, 1]");
}

}  // namespace qortho
