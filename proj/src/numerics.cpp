#include "qortho/numerics.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace qortho {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::bad_input: return "bad_input";
    case ErrorKind::domain: return "domain";
    case ErrorKind::zero_argument: return "zero_argument";
    case ErrorKind::table_miss: return "table_miss";
    case ErrorKind::pole_proximity: return "pole_proximity";
    case ErrorKind::truncation: return "truncation";
    case ErrorKind::resonance: return "resonance";
    case ErrorKind::non_convergence: return "non_convergence";
    case ErrorKind::degenerate_measure: return "degenerate_measure";
    case ErrorKind::no_sign_change: return "no_sign_change";
    case ErrorKind::zero_det: return "zero_det";
    case ErrorKind::inadmissible: return "inadmissible";
    case ErrorKind::division_by_zero: return "division_by_zero";
  }
  return "unknown";
}

// ---- ExactRational helpers ----

namespace {

std::string trimmed(std::string_view text) {
  std::size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  return std::string(text.substr(b, e - b));
}

[[noreturn]] void bad_literal(std::string_view text) {
  fail(ErrorKind::bad_input, "not a rational or decimal literal: '" + std::string(text) + "'");
}

mpz_class parse_integer(const std::string& s, std::string_view whole) {
  if (s.empty()) bad_literal(whole);
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) bad_literal(whole);
  for (std::size_t j = i; j < s.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) bad_literal(whole);
  }
  mpz_class z(s[0] == '+' ? s.substr(1) : s, 10);
  return z;
}

mpz_class pow10(unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
  return r;
}

}  // namespace

ExactRational parse_rational(std::string_view text) {
  const std::string s = trimmed(text);
  if (s.empty()) bad_literal(text);
  if (auto slash = s.find('/'); slash != std::string::npos) {
    mpz_class num = parse_integer(trimmed(s.substr(0, slash)), text);
    mpz_class den = parse_integer(trimmed(s.substr(slash + 1)), text);
    if (den == 0) fail(ErrorKind::bad_input, "zero denominator in '" + s + "'");
    ExactRational r(num, den);
    r.canonicalize();
    return r;
  }
  std::size_t i = 0;
  bool negative = false;
  if (s[i] == '+' || s[i] == '-') negative = s[i++] == '-';
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (digits.empty()) bad_literal(text);
  long exponent = 0;
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') bad_literal(text);
    const std::string exp_text = s.substr(i + 1);
    char* end = nullptr;
    exponent = std::strtol(exp_text.c_str(), &end, 10);
    if (exp_text.empty() || *end != '\0' || std::labs(exponent) > 100000) bad_literal(text);
  }
  ExactRational r(mpz_class(digits, 10));
  long scale = exponent - frac_digits;
  if (scale > 0) r *= ExactRational(pow10(static_cast<unsigned long>(scale)));
  if (scale < 0) r /= ExactRational(pow10(static_cast<unsigned long>(-scale)));
  r.canonicalize();
  return negative ? ExactRational(-r) : r;
}

std::string to_string(const ExactRational& x) {
  ExactRational y = x;
  y.canonicalize();
  return y.get_str();
}

ExactRational exact_pow2_neg(unsigned e) {
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, e);
  return ExactRational(mpz_class(1), den);
}

bool rational_power(const ExactRational& x, const ExactRational& e, ExactRational& out) {
  if (e == 0) {
    out = 1;
    return true;
  }
  if (x <= 0) return false;
  const mpz_class& p = e.get_num();
  const mpz_class& r = e.get_den();
  if (!r.fits_ulong_p() || r > 4096 || !p.fits_slong_p() || abs(p) > 4096) return false;
  const unsigned long root = r.get_ui();
  mpz_class num, den;
  if (mpz_root(num.get_mpz_t(), x.get_num_mpz_t(), root) == 0) return false;
  if (mpz_root(den.get_mpz_t(), x.get_den_mpz_t(), root) == 0) return false;
  const long power = p.get_si();
  const unsigned long mag = static_cast<unsigned long>(std::labs(power));
  mpz_class pn, pd;
  mpz_pow_ui(pn.get_mpz_t(), num.get_mpz_t(), mag);
  mpz_pow_ui(pd.get_mpz_t(), den.get_mpz_t(), mag);
  out = power > 0 ? ExactRational(pn, pd) : ExactRational(pd, pn);
  out.canonicalize();
  return true;
}

// ---- HPReal ----

HPReal power_of(const ExactRational& x, const ExactRational& e, Bits bits) {
  ExactRational exact;
  if (rational_power(x, e, exact)) return HPReal(exact, bits);
  return pow(HPReal(x, bits), HPReal(e, bits));
}

HPReal::HPReal() {
  mpfr_init2(v_, default_bits);
  mpfr_set_zero(v_, 1);
}

HPReal::HPReal(Bits bits) {
  mpfr_init2(v_, bits.value);
  mpfr_set_zero(v_, 1);
}

HPReal::HPReal(long v, Bits bits) {
  mpfr_init2(v_, bits.value);
  mpfr_set_si(v_, v, MPFR_RNDN);
}

HPReal::HPReal(double v, Bits bits) {
  mpfr_init2(v_, bits.value);
  mpfr_set_d(v_, v, MPFR_RNDN);
}

HPReal::HPReal(const ExactRational& v, Bits bits) {
  mpfr_init2(v_, bits.value);
  mpfr_set_q(v_, v.get_mpq_t(), MPFR_RNDN);
}

HPReal HPReal::parse(std::string_view text, Bits bits) { return HPReal(parse_rational(text), bits); }

HPReal::HPReal(const HPReal& other) {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_set(v_, other.v_, MPFR_RNDN);
}

HPReal::HPReal(HPReal&& other) noexcept {
  mpfr_init2(v_, mpfr_get_prec(other.v_));
  mpfr_swap(v_, other.v_);
}

HPReal& HPReal::operator=(const HPReal& other) {
  if (this != &other) {
    mpfr_set_prec(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  return *this;
}

HPReal& HPReal::operator=(HPReal&& other) noexcept {
  mpfr_swap(v_, other.v_);
  return *this;
}

HPReal::~HPReal() { mpfr_clear(v_); }

HPReal HPReal::rounded(Bits bits) const {
  HPReal r(bits);
  mpfr_set(r.v_, v_, MPFR_RNDN);
  return r;
}

double HPReal::to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

long HPReal::to_long() const { return mpfr_get_si(v_, MPFR_RNDZ); }

std::string HPReal::str(std::size_t digits) const {
  if (mpfr_nan_p(v_)) return "nan";
  if (mpfr_inf_p(v_)) return mpfr_sgn(v_) > 0 ? "inf" : "-inf";
  if (mpfr_zero_p(v_)) return "0";
  mpfr_exp_t exponent = 0;
  char* raw = mpfr_get_str(nullptr, &exponent, 10, digits, v_, MPFR_RNDN);
  std::string m(raw);
  mpfr_free_str(raw);
  std::string sign;
  if (m[0] == '-') {
    sign = "-";
    m.erase(0, 1);
  }
  while (m.size() > 1 && m.back() == '0') m.pop_back();
  std::string out = sign + m.substr(0, 1);
  if (m.size() > 1) out += "." + m.substr(1);
  const long e = static_cast<long>(exponent) - 1;
  if (e != 0) out += "e" + std::to_string(e);
  return out;
}

namespace {
inline unsigned wider(const HPReal& a, const HPReal& b) { return std::max(a.bits(), b.bits()); }

inline void widen(HPReal& x, unsigned bits) {
  if (bits > x.bits()) mpfr_prec_round(x.raw(), bits, MPFR_RNDN);
}
}  // namespace

HPReal HPReal::operator-() const {
  HPReal r(Bits{bits()});
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

HPReal& HPReal::operator+=(const HPReal& o) {
  widen(*this, o.bits());
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
HPReal& HPReal::operator-=(const HPReal& o) {
  widen(*this, o.bits());
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
HPReal& HPReal::operator*=(const HPReal& o) {
  widen(*this, o.bits());
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
HPReal& HPReal::operator/=(const HPReal& o) {
  widen(*this, o.bits());
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}
HPReal& HPReal::operator+=(long o) {
  mpfr_add_si(v_, v_, o, MPFR_RNDN);
  return *this;
}
HPReal& HPReal::operator-=(long o) {
  mpfr_sub_si(v_, v_, o, MPFR_RNDN);
  return *this;
}
HPReal& HPReal::operator*=(long o) {
  mpfr_mul_si(v_, v_, o, MPFR_RNDN);
  return *this;
}
HPReal& HPReal::operator/=(long o) {
  mpfr_div_si(v_, v_, o, MPFR_RNDN);
  return *this;
}

HPReal operator+(const HPReal& a, const HPReal& b) {
  HPReal r(Bits{wider(a, b)});
  mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
HPReal operator-(const HPReal& a, const HPReal& b) {
  HPReal r(Bits{wider(a, b)});
  mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
HPReal operator*(const HPReal& a, const HPReal& b) {
  HPReal r(Bits{wider(a, b)});
  mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
HPReal operator/(const HPReal& a, const HPReal& b) {
  HPReal r(Bits{wider(a, b)});
  mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}
HPReal operator+(const HPReal& a, long b) {
  HPReal r(Bits{a.bits()});
  mpfr_add_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}
HPReal operator-(const HPReal& a, long b) {
  HPReal r(Bits{a.bits()});
  mpfr_sub_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}
HPReal operator*(const HPReal& a, long b) {
  HPReal r(Bits{a.bits()});
  mpfr_mul_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}
HPReal operator/(const HPReal& a, long b) {
  HPReal r(Bits{a.bits()});
  mpfr_div_si(r.v_, a.v_, b, MPFR_RNDN);
  return r;
}
HPReal operator+(long a, const HPReal& b) { return b + a; }
HPReal operator-(long a, const HPReal& b) {
  HPReal r(Bits{b.bits()});
  mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
  return r;
}
HPReal operator*(long a, const HPReal& b) { return b * a; }
HPReal operator/(long a, const HPReal& b) {
  HPReal r(Bits{b.bits()});
  mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const HPReal& a, const HPReal& b) {
  if (mpfr_unordered_p(a.v_, b.v_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.v_, b.v_);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

std::partial_ordering operator<=>(const HPReal& a, long b) {
  if (mpfr_nan_p(a.v_)) return std::partial_ordering::unordered;
  const int c = mpfr_cmp_si(a.v_, b);
  return c < 0 ? std::partial_ordering::less
               : (c > 0 ? std::partial_ordering::greater : std::partial_ordering::equivalent);
}

#define QORTHO_UNARY(name, fn)                \
  HPReal name(const HPReal& x) {              \
    HPReal r(Bits{x.bits()});                 \
    fn(r.raw(), x.raw(), MPFR_RNDN);          \
    return r;                                 \
  }

QORTHO_UNARY(abs, mpfr_abs)
QORTHO_UNARY(sqrt, mpfr_sqrt)
QORTHO_UNARY(exp, mpfr_exp)
QORTHO_UNARY(log, mpfr_log)
QORTHO_UNARY(log2, mpfr_log2)
#undef QORTHO_UNARY

HPReal floor(const HPReal& x) {
  HPReal r(Bits{x.bits()});
  mpfr_floor(r.raw(), x.raw());
  return r;
}

HPReal ceil(const HPReal& x) {
  HPReal r(Bits{x.bits()});
  mpfr_ceil(r.raw(), x.raw());
  return r;
}

HPReal pow(const HPReal& x, const HPReal& e) {
  HPReal r(Bits{wider(x, e)});
  mpfr_pow(r.raw(), x.raw(), e.raw(), MPFR_RNDN);
  return r;
}

HPReal pow(const HPReal& x, long e) {
  HPReal r(Bits{x.bits()});
  mpfr_pow_si(r.raw(), x.raw(), e, MPFR_RNDN);
  return r;
}

HPReal ldexp(const HPReal& x, long e) {
  HPReal r(Bits{x.bits()});
  mpfr_mul_2si(r.raw(), x.raw(), e, MPFR_RNDN);
  return r;
}

HPReal hypot(const HPReal& a, const HPReal& b) {
  HPReal r(Bits{wider(a, b)});
  mpfr_hypot(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
  return r;
}

HPReal min(const HPReal& a, const HPReal& b) { return b < a ? b : a; }
HPReal max(const HPReal& a, const HPReal& b) { return a < b ? b : a; }

HPReal pow2(long e, Bits bits) { return ldexp(HPReal(1L, bits), e); }

// ---- HPComplex ----

HPComplex& HPComplex::operator+=(const HPComplex& o) {
  re += o.re;
  im += o.im;
  return *this;
}
HPComplex& HPComplex::operator-=(const HPComplex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}
HPComplex& HPComplex::operator*=(const HPComplex& o) {
  if (o.im.is_zero()) return *this *= o.re;
  HPReal r = re * o.re - im * o.im;
  HPReal i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}
HPComplex& HPComplex::operator/=(const HPComplex& o) {
  if (o.im.is_zero()) return *this /= o.re;
  HPReal d = o.re * o.re + o.im * o.im;
  HPReal r = (re * o.re + im * o.im) / d;
  HPReal i = (im * o.re - re * o.im) / d;
  re = std::move(r);
  im = std::move(i);
  return *this;
}
HPComplex& HPComplex::operator*=(const HPReal& o) {
  re *= o;
  im *= o;
  return *this;
}
HPComplex& HPComplex::operator/=(const HPReal& o) {
  re /= o;
  im /= o;
  return *this;
}

HPComplex operator+(HPComplex a, const HPComplex& b) { return a += b; }
HPComplex operator-(HPComplex a, const HPComplex& b) { return a -= b; }
HPComplex operator*(HPComplex a, const HPComplex& b) { return a *= b; }
HPComplex operator/(HPComplex a, const HPComplex& b) { return a /= b; }
HPComplex operator*(HPComplex a, const HPReal& b) { return a *= b; }
HPComplex operator*(const HPReal& a, HPComplex b) { return b *= a; }
HPComplex operator/(HPComplex a, const HPReal& b) { return a /= b; }
HPComplex operator+(HPComplex a, const HPReal& b) {
  a.re += b;
  return a;
}
HPComplex operator-(HPComplex a, const HPReal& b) {
  a.re -= b;
  return a;
}
HPComplex operator-(const HPReal& a, const HPComplex& b) { return {a - b.re, -b.im}; }
HPComplex operator*(HPComplex a, long b) {
  a.re *= b;
  a.im *= b;
  return a;
}
HPComplex operator+(HPComplex a, long b) {
  a.re += b;
  return a;
}
HPComplex operator-(long a, const HPComplex& b) { return {a - b.re, -b.im}; }

HPReal abs(const HPComplex& z) { return z.im.is_zero() ? abs(z.re) : hypot(z.re, z.im); }
HPReal norm(const HPComplex& z) { return z.re * z.re + z.im * z.im; }
HPComplex conj(const HPComplex& z) { return {z.re, -z.im}; }
HPComplex square(const HPComplex& z) { return z * z; }

HPComplex inverse(const HPComplex& z) {
  if (z.im.is_zero()) return HPComplex(1L / z.re, HPReal(Bits{z.bits()}));
  HPReal d = norm(z);
  return {z.re / d, -z.im / d};
}

HPComplex pow(const HPComplex& z, long e) {
  if (e < 0) return inverse(pow(z, -e));
  HPComplex result(1L, Bits{z.bits()});
  HPComplex base = z;
  while (e > 0) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

std::string to_string(const HPComplex& z, std::size_t digits) {
  if (z.im.is_zero()) return z.re.str(digits);
  std::string im = z.im.str(digits);
  if (im[0] != '-') im = "+" + im;
  return z.re.str(digits) + im + "i";
}

// ---- policy and helpers ----

void TruncationStatus::merge(const TruncationStatus& other) {
  terms += other.terms;
  tail_bound += other.tail_bound;
  converged = converged && other.converged;
}

void PrecisionPolicy::validate() const {
  if (work_bits < 64) fail(ErrorKind::bad_input, "work_bits must be at least 64");
  if (tail_eps <= 0) fail(ErrorKind::bad_input, "tail_eps must be positive");
  if (max_terms < 8) fail(ErrorKind::bad_input, "max_terms must be at least 8");
}

PrecisionPolicy PrecisionPolicy::with_bits(unsigned work_bits, unsigned guard_bits) {
  PrecisionPolicy p;
  p.work_bits = work_bits;
  p.tail_eps = exact_pow2_neg(work_bits);
  p.derived_guard_bits = guard_bits;
  p.validate();
  return p;
}

unsigned required_bits(const ExactRational& q, const ExactRational& alpha, long n_max, unsigned guard_bits) {
  if (q <= 0 || q >= 1) fail(ErrorKind::bad_input, "q out of range: expected 0 < q < 1");
  if (alpha <= -1) fail(ErrorKind::bad_input, "alpha out of range: expected alpha > -1");
  if (n_max < 0) fail(ErrorKind::bad_input, "n_max must be non-negative");
  const Bits b{192};
  const ExactRational a_plus = alpha > 0 ? alpha : ExactRational(0);
  const ExactRational span = ExactRational(n_max) * (ExactRational(n_max - 1) + a_plus) / 2;
  unsigned extra = 0;
  if (span > 0) {
    HPReal scale = HPReal(span, b) * log2(1L / HPReal(q, b));
    extra = static_cast<unsigned>(ceil(scale).to_long());
  }
  return extra + 64 + guard_bits;
}

std::size_t geometric_tail_terms(const HPReal& ratio, const HPReal& first_term_mag, const HPReal& eps) {
  if (!(ratio > 0 && ratio < 1)) fail(ErrorKind::bad_input, "geometric_tail_terms: ratio must lie in (0,1)");
  if (!(first_term_mag > 0) || !(eps > 0)) fail(ErrorKind::bad_input, "geometric_tail_terms: magnitudes must be positive");
  const HPReal lead = first_term_mag / (1L - ratio);
  auto fits = [&](long j) { return lead * pow(ratio, j) <= eps; };
  if (fits(0)) return 0;
  long j = ceil(log(eps / lead) / log(ratio)).to_long();
  if (j < 0) j = 0;
  while (j > 0 && fits(j - 1)) --j;
  while (!fits(j)) ++j;
  return static_cast<std::size_t>(j);
}

GeometricFit fit_geometric(std::span<const long> n, std::span<const HPReal> e) {
  if (n.size() != e.size() || n.size() < 2) fail(ErrorKind::bad_input, "fit_geometric needs at least two points");
  const std::size_t m = n.size();
  std::vector<double> x(m), y(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(e[i] > 0)) fail(ErrorKind::bad_input, "fit_geometric needs positive values");
    x[i] = static_cast<double>(n[i]);
    y[i] = log(e[i]).to_double();
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) fail(ErrorKind::bad_input, "fit_geometric needs distinct abscissae");
  const double slope = sxy / sxx;
  const double icept = my - slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = y[i] - (icept + slope * x[i]);
    ss += r * r;
  }
  GeometricFit fit;
  fit.rate = std::exp(slope);
  fit.constant = std::exp(icept);
  fit.residual = std::sqrt(ss / static_cast<double>(m));
  fit.points = m;
  return fit;
}

}  // namespace qortho
