#include "qortho/qcalc.hpp"

#include <cmath>

namespace qortho {

QParams::QParams(ExactRational q_, ExactRational alpha_) : q(std::move(q_)), alpha(std::move(alpha_)) {
  if (q <= 0 || q >= 1) fail(ErrorKind::bad_input, "q out of range: expected 0 < q < 1, got " + to_string(q));
  if (alpha <= -1) fail(ErrorKind::bad_input, "alpha out of range: expected alpha > -1, got " + to_string(alpha));
}

// ---- LatticeFn ----

LatticeFn LatticeFn::from_callable(Callable f) {
  LatticeFn fn;
  fn.f_ = std::move(f);
  return fn;
}

LatticeFn LatticeFn::from_table(std::vector<HPComplex> plus, std::vector<HPComplex> minus) {
  if (plus.size() != minus.size() || plus.empty()) {
    fail(ErrorKind::bad_input, "lattice table needs equal, non-empty plus and minus columns");
  }
  LatticeFn fn;
  fn.plus_ = std::move(plus);
  fn.minus_ = std::move(minus);
  return fn;
}

HPComplex LatticeFn::at(long k, int sign, const HPReal& q_pow_k) const {
  if (f_) return f_(HPComplex(sign > 0 ? q_pow_k : -q_pow_k));
  if (k < 0 || static_cast<std::size_t>(k) >= plus_.size()) {
    fail(ErrorKind::table_miss, "lattice table read at k=" + std::to_string(k) + " beyond K=" +
                                    std::to_string(plus_.size() - 1));
  }
  return sign > 0 ? plus_[static_cast<std::size_t>(k)] : minus_[static_cast<std::size_t>(k)];
}

HPComplex LatticeFn::operator()(const HPComplex& z) const {
  if (!f_) fail(ErrorKind::table_miss, "lattice table cannot be evaluated off the lattice");
  return f_(z);
}

// ---- RatioTail ----

void RatioTail::push(const HPReal& magnitude) {
  for (int i = 0; i < 3; ++i) last_[i] = std::move(last_[i + 1]);
  last_[3] = magnitude;
  ++count_;
}

std::optional<HPReal> RatioTail::bound() const {
  constexpr std::size_t min_terms = 8;
  if (count_ < min_terms) return std::nullopt;
  if (last_[0].is_zero() && last_[1].is_zero() && last_[2].is_zero() && last_[3].is_zero()) {
    return HPReal(Bits{last_[3].bits()});
  }
  HPReal worst(Bits{last_[3].bits()});
  for (int i = 1; i < 4; ++i) {
    if (last_[i - 1].is_zero()) {
      if (!last_[i].is_zero()) return std::nullopt;
      continue;
    }
    HPReal r = last_[i] / last_[i - 1];
    if (r > worst) worst = r;
  }
  if (!(worst < 1)) return std::nullopt;
  return last_[3] * worst / (1L - worst);
}

// ---- Pochhammer ----

namespace {

unsigned work_bits_of(const HPComplex& z, const HPReal& q) { return std::max(z.bits(), q.bits()); }

// Smallest J with |z|q^J < 1/2 and 4|z|q^J/(1-q) <= eps, which bounds the relative tail.
bool pochhammer_order(const HPReal& zabs, const HPReal& q, const Tolerance& tol, std::size_t& order,
                      HPReal& tail) {
  HPReal m = zabs;
  const HPReal scale = 4L / (1L - q);
  for (std::size_t j = 0;; ++j) {
    if (m * 2 < 1 && m * scale <= tol.eps) {
      order = j;
      tail = m * scale;
      return true;
    }
    if (j >= tol.max_terms) {
      order = j;
      tail = m * scale;
      return false;
    }
    m *= q;
  }
}

}  // namespace

Approx<HPComplex> pochhammer_inf(const HPComplex& z, const HPReal& q, const Tolerance& tol) {
  if (!(q > 0 && q < 1)) fail(ErrorKind::bad_input, "pochhammer_inf: q must lie in (0,1)");
  const Bits b{work_bits_of(z, q)};
  const HPReal zero_floor = pow2(4 - static_cast<long>(b.value), b);
  Approx<HPComplex> out{HPComplex(1L, b), {}};
  std::size_t order = 0;
  HPReal tail;
  const bool ok = pochhammer_order(abs(z), q, tol, order, tail);
  HPComplex zq = z;
  for (std::size_t j = 0; j < order; ++j) {
    HPComplex factor = 1L - zq;
    if (abs(factor) <= zero_floor) {
      out.value = HPComplex(0L, b);
      out.status = {j + 1, HPReal(b), true};
      return out;
    }
    out.value *= factor;
    zq *= q;
  }
  out.status = {order, tail, ok};
  return out;
}

// ---- Jackson integrals ----

namespace {

Approx<HPComplex> jackson(const LatticeFn& f, const HPReal& q, const Tolerance& tol, bool two_sided) {
  if (!(q > 0 && q < 1)) fail(ErrorKind::bad_input, "jackson: q must lie in (0,1)");
  const Bits b{std::max(q.bits(), tol.eps.bits())};
  HPComplex plus(0L, b), minus(0L, b);
  RatioTail tail_plus, tail_minus;
  HPReal qk(1L, b);
  for (std::size_t k = 0;; ++k) {
    if (k >= tol.max_terms) {
      HPReal bound = tail_plus.bound().value_or(HPReal(Bits{b}));
      return {plus + minus, {k, bound, false}};
    }
    if (f.is_table() && k >= f.table_size()) {
      fail(ErrorKind::table_miss, "Jackson sum exhausted the lattice table at K=" +
                                      std::to_string(f.table_size() - 1) + " before the tail was certified");
    }
    const long kk = static_cast<long>(k);
    HPComplex sp = f.at(kk, +1, qk) * qk;
    tail_plus.push(abs(sp));
    plus += sp;
    if (two_sided) {
      HPComplex sm = f.at(kk, -1, qk) * qk;
      tail_minus.push(abs(sm));
      minus += sm;
    }
    auto bp = tail_plus.bound();
    std::optional<HPReal> bm = two_sided ? tail_minus.bound() : std::optional<HPReal>(HPReal(b));
    if (bp && bm && *bp + *bm <= tol.eps) return {plus + minus, {k + 1, *bp + *bm, true}};
    qk *= q;
  }
}

}  // namespace

Approx<HPComplex> jackson_two_sided(const LatticeFn& f, const HPReal& q, const Tolerance& tol) {
  return jackson(f, q, tol, true);
}

Approx<HPComplex> jackson_one_sided(const LatticeFn& f, const HPReal& q, const Tolerance& tol) {
  return jackson(f, q, tol, false);
}

// ---- h^alpha ----

Approx<HPComplex> h_alpha(const HPComplex& z, const QParams& params, const Tolerance& tol, HAlphaInfo* info) {
  if (params.alpha <= -1 || params.alpha >= 1) {
    fail(ErrorKind::domain, "h_alpha: direct evaluation requires -1 < alpha < 1, got " + to_string(params.alpha));
  }
  if (z.is_zero()) fail(ErrorKind::zero_argument, "h_alpha: z = 0 is an accumulation point of poles");
  const Bits b{std::max(z.bits(), tol.eps.bits())};
  const HPReal q = params.q_hp(b);
  const HPReal a = params.alpha_hp(b);
  const HPReal zabs = abs(z);
  const HPReal half_eps = tol.eps / 2;
  const HPComplex z2 = square(z);
  const HPComplex twice_z = z * 2L;

  // k >= 0
  const HPReal up_rate = pow(q, 1L + a);
  const HPReal up_scale = HPReal(8L, b) / (3L * zabs * (1L - up_rate));
  HPComplex sum(0L, b);
  HPReal qk(1L, b), qka(1L, b);
  std::size_t k_plus = 0;
  bool ok = true;
  HPReal tail_plus;
  for (;; ++k_plus) {
    if (qk * 2 <= zabs && qka * up_scale <= half_eps) {
      tail_plus = qka * up_scale;
      break;
    }
    if (k_plus >= tol.max_terms) {
      ok = false;
      tail_plus = qka * up_scale;
      break;
    }
    sum += twice_z * qka / (z2 - qk * qk);
    qk *= q;
    qka *= up_rate;
  }

  const HPReal pole_radius = qk / 8;
  {
    // Nearest lattice points ±q^k, k in Z, to z.
    const long k0 = std::lround((log(zabs) / log(q)).to_double());
    HPReal nearest(-1L, b);
    for (long k = k0 - 1; k <= k0 + 1; ++k) {
      const HPReal p = pow(q, k);
      for (int s : {1, -1}) {
        HPReal d = abs(z - (s > 0 ? p : -p));
        if (nearest < 0 || d < nearest) nearest = d;
      }
    }
    if (nearest < pole_radius) {
      fail(ErrorKind::pole_proximity, "h_alpha: z = " + to_string(z, 20) + " lies within the pole radius " +
                                          pole_radius.str(6) + " of the lattice");
    }
  }

  // k < 0
  const HPReal down_rate = pow(q, 1L - a);
  const HPReal down_scale = 4L * zabs / (1L - down_rate);
  const HPReal inv_q = 1L / q;
  const HPReal inv_up = 1L / up_rate;
  HPReal qmj(1L, b), qmja(1L, b), qja(1L, b);  // q^-j, q^{-j(1+a)}, q^{j(1-a)}
  std::size_t k_minus = 0;
  HPReal tail_minus;
  for (std::size_t j = 1;; ++j) {
    qmj *= inv_q;
    qmja *= inv_up;
    qja *= down_rate;
    if (norm(z) * 2 <= qmj * qmj && qja * down_scale <= half_eps) {
      tail_minus = qja * down_scale;
      break;
    }
    if (j >= tol.max_terms) {
      ok = false;
      tail_minus = qja * down_scale;
      break;
    }
    sum += twice_z * qmja / (z2 - qmj * qmj);
    k_minus = j;
  }

  if (info) *info = {k_plus, k_minus, pole_radius};
  return {sum, {k_plus + k_minus, tail_plus + tail_minus, ok}};
}

// ---- f, g, g_n ----

Approx<HPComplex> f_fn(const HPComplex& z, const HPReal& q, const Tolerance& tol) {
  if (z.is_zero()) fail(ErrorKind::zero_argument, "f(z) is undefined at z = 0");
  return pochhammer_inf(inverse(square(z)), q * q, tol);
}

Approx<HPComplex> g_fn(const HPComplex& z, const HPReal& q, const Tolerance& tol) {
  if (z.is_zero()) fail(ErrorKind::zero_argument, "g(z) is undefined at z = 0");
  const HPReal q2 = q * q;
  const Tolerance half = tol.halved();
  auto first = pochhammer_inf(q2 * square(z), q2, half);
  auto second = pochhammer_inf(inverse(square(z)), q2, half);
  Approx<HPComplex> out{first.value * second.value, first.status};
  out.status.merge(second.status);
  return out;
}

Approx<HPComplex> g_n_fn(const HPComplex& z, const HPReal& q, long n, const Tolerance& tol) {
  if (n < 0 || n % 2 != 0) fail(ErrorKind::bad_input, "g_n is defined for even n >= 0 only");
  auto out = f_fn(z, q, tol);
  const HPReal q2 = q * q;
  const HPComplex z2 = square(z);
  HPReal q2j = q2;
  for (long j = 1; j <= n / 2; ++j) {
    out.value *= 1L - z2 * q2j;
    q2j *= q2;
  }
  return out;
}

Approx<HPComplex> g_prime(const HPComplex& z, const HPReal& q, const Tolerance& tol) {
  if (z.is_zero()) fail(ErrorKind::zero_argument, "g'(z) is undefined at z = 0");
  const Bits b{work_bits_of(z, q)};
  const HPReal q2 = q * q;
  const HPComplex z2 = square(z);
  const HPComplex zm2 = inverse(z2);
  const Tolerance half = tol.halved();
  std::size_t n1 = 0, n2 = 0;
  HPReal t1, t2;
  const bool ok1 = pochhammer_order(abs(q2 * z2), q2, half, n1, t1);
  const bool ok2 = pochhammer_order(abs(zm2), q2, half, n2, t2);

  std::vector<HPComplex> factor, deriv;
  factor.reserve(n1 + n2);
  deriv.reserve(n1 + n2);
  HPReal c = q2;  // q^{2j+2}
  for (std::size_t j = 0; j < n1; ++j) {
    factor.push_back(1L - z2 * c);
    deriv.push_back(z * c * (-2L));
    c *= q2;
  }
  const HPComplex zm3 = zm2 / z;
  c = HPReal(1L, b);  // q^{2j}
  for (std::size_t j = 0; j < n2; ++j) {
    factor.push_back(1L - zm2 * c);
    deriv.push_back(zm3 * c * 2L);
    c *= q2;
  }
  const std::size_t m = factor.size();
  std::vector<HPComplex> prefix(m + 1, HPComplex(1L, b)), suffix(m + 1, HPComplex(1L, b));
  for (std::size_t i = 0; i < m; ++i) prefix[i + 1] = prefix[i] * factor[i];
  for (std::size_t i = m; i-- > 0;) suffix[i] = suffix[i + 1] * factor[i];
  HPComplex sum(0L, b);
  for (std::size_t i = 0; i < m; ++i) sum += deriv[i] * prefix[i] * suffix[i + 1];
  return {sum, {m, t1 + t2, ok1 && ok2}};
}

}  // namespace qortho
