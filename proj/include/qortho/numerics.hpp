#pragma once

#include <algorithm>
#include <compare>
#include <concepts>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>
#include <mpfr.h>

#include "qortho/error.hpp"

namespace qortho {

using ExactRational = mpq_class;

// Parses "p/r", integers and decimal literals ("0.7", "-1.5e-3") exactly.
ExactRational parse_rational(std::string_view text);
std::string to_string(const ExactRational& x);

// Exact x^e for rational e when the result is rational, e.g. (1/4)^(1/2) = 1/2.
bool rational_power(const ExactRational& x, const ExactRational& e, ExactRational& out);

struct Bits {
  unsigned value;
};

class HPReal;
// x^e at the given precision, exact-rational first when possible.
HPReal power_of(const ExactRational& x, const ExactRational& e, Bits bits);

// MPFR-backed real that carries its own precision. Binary operations round
// to the larger precision of their operands; nothing is process-global.
class HPReal {
 public:
  static constexpr unsigned default_bits = 64;

  HPReal();
  explicit HPReal(Bits bits);
  HPReal(long v, Bits bits);
  HPReal(int v, Bits bits) : HPReal(static_cast<long>(v), bits) {}
  HPReal(double v, Bits bits);
  HPReal(const ExactRational& v, Bits bits);
  static HPReal parse(std::string_view text, Bits bits);

  HPReal(const HPReal& other);
  HPReal(HPReal&& other) noexcept;
  HPReal& operator=(const HPReal& other);
  HPReal& operator=(HPReal&& other) noexcept;
  ~HPReal();

  unsigned bits() const { return static_cast<unsigned>(mpfr_get_prec(v_)); }
  HPReal rounded(Bits bits) const;

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  double to_double() const;
  long to_long() const;  // truncates toward zero
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  // Scientific notation with the given significant digits; 0 means
  // "enough to round-trip the full precision".
  std::string str(std::size_t digits = 0) const;

  HPReal operator-() const;
  HPReal& operator+=(const HPReal& o);
  HPReal& operator-=(const HPReal& o);
  HPReal& operator*=(const HPReal& o);
  HPReal& operator/=(const HPReal& o);
  HPReal& operator+=(long o);
  HPReal& operator-=(long o);
  HPReal& operator*=(long o);
  HPReal& operator/=(long o);

  friend HPReal operator+(const HPReal& a, const HPReal& b);
  friend HPReal operator-(const HPReal& a, const HPReal& b);
  friend HPReal operator*(const HPReal& a, const HPReal& b);
  friend HPReal operator/(const HPReal& a, const HPReal& b);
  friend HPReal operator+(const HPReal& a, long b);
  friend HPReal operator-(const HPReal& a, long b);
  friend HPReal operator*(const HPReal& a, long b);
  friend HPReal operator/(const HPReal& a, long b);
  friend HPReal operator+(long a, const HPReal& b);
  friend HPReal operator-(long a, const HPReal& b);
  friend HPReal operator*(long a, const HPReal& b);
  friend HPReal operator/(long a, const HPReal& b);

  friend bool operator==(const HPReal& a, const HPReal& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend std::partial_ordering operator<=>(const HPReal& a, const HPReal& b);
  friend bool operator==(const HPReal& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }
  friend std::partial_ordering operator<=>(const HPReal& a, long b);

 private:
  mpfr_t v_;
};

HPReal abs(const HPReal& x);
HPReal sqrt(const HPReal& x);
HPReal exp(const HPReal& x);
HPReal log(const HPReal& x);
HPReal log2(const HPReal& x);
HPReal pow(const HPReal& x, const HPReal& e);
HPReal pow(const HPReal& x, long e);
HPReal ldexp(const HPReal& x, long e);
HPReal hypot(const HPReal& a, const HPReal& b);
HPReal floor(const HPReal& x);
HPReal ceil(const HPReal& x);
HPReal min(const HPReal& a, const HPReal& b);
HPReal max(const HPReal& a, const HPReal& b);
// 2^e at the given precision.
HPReal pow2(long e, Bits bits);

struct HPComplex {
  HPReal re;
  HPReal im;

  HPComplex() = default;
  HPComplex(HPReal r) : re(std::move(r)), im(Bits{re.bits()}) {}
  HPComplex(HPReal r, HPReal i) : re(std::move(r)), im(std::move(i)) {}
  HPComplex(long r, Bits bits) : re(r, bits), im(bits) {}
  HPComplex(double r, double i, Bits bits) : re(r, bits), im(i, bits) {}

  unsigned bits() const { return std::max(re.bits(), im.bits()); }
  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_real() const { return im.is_zero(); }

  HPComplex operator-() const { return {-re, -im}; }
  HPComplex& operator+=(const HPComplex& o);
  HPComplex& operator-=(const HPComplex& o);
  HPComplex& operator*=(const HPComplex& o);
  HPComplex& operator/=(const HPComplex& o);
  HPComplex& operator*=(const HPReal& o);
  HPComplex& operator/=(const HPReal& o);

  friend bool operator==(const HPComplex& a, const HPComplex& b) { return a.re == b.re && a.im == b.im; }
};

HPComplex operator+(HPComplex a, const HPComplex& b);
HPComplex operator-(HPComplex a, const HPComplex& b);
HPComplex operator*(HPComplex a, const HPComplex& b);
HPComplex operator/(HPComplex a, const HPComplex& b);
HPComplex operator*(HPComplex a, const HPReal& b);
HPComplex operator*(const HPReal& a, HPComplex b);
HPComplex operator/(HPComplex a, const HPReal& b);
HPComplex operator+(HPComplex a, const HPReal& b);
HPComplex operator-(HPComplex a, const HPReal& b);
HPComplex operator-(const HPReal& a, const HPComplex& b);
HPComplex operator*(HPComplex a, long b);
HPComplex operator+(HPComplex a, long b);
HPComplex operator-(long a, const HPComplex& b);

HPReal abs(const HPComplex& z);
HPReal norm(const HPComplex& z);  // |z|^2
HPComplex conj(const HPComplex& z);
HPComplex square(const HPComplex& z);
HPComplex inverse(const HPComplex& z);
HPComplex pow(const HPComplex& z, long e);
std::string to_string(const HPComplex& z, std::size_t digits = 0);

// Truncation outcome of an infinite sum or product.
struct TruncationStatus {
  std::size_t terms = 0;
  HPReal tail_bound;
  bool converged = true;

  void merge(const TruncationStatus& other);
};

template <class T>
struct Approx {
  T value;
  TruncationStatus status;

  const T& checked(std::string_view what) const {
    if (!status.converged) {
      fail(ErrorKind::truncation, std::string(what) + ": max_terms reached after " +
                                      std::to_string(status.terms) + " terms without meeting the tail tolerance");
    }
    return value;
  }
};

struct Tolerance {
  HPReal eps;
  std::size_t max_terms = 100000;

  Tolerance halved() const { return {eps / 2, max_terms}; }
  Tolerance scaled(long divisor) const { return {eps / divisor, max_terms}; }
};

// 2^-e as an exact rational.
ExactRational exact_pow2_neg(unsigned e);

struct PrecisionPolicy {
  unsigned work_bits = 256;
  ExactRational tail_eps = exact_pow2_neg(256);
  std::size_t max_terms = 100000;
  unsigned derived_guard_bits = 32;

  void validate() const;
  Bits bits() const { return Bits{work_bits}; }
  HPReal eps() const { return HPReal(tail_eps, bits()); }
  Tolerance tolerance() const { return {eps(), max_terms}; }
  HPReal real(long v) const { return HPReal(v, bits()); }
  HPReal real(const ExactRational& v) const { return HPReal(v, bits()); }

  // work_bits with tail_eps = 2^-work_bits.
  static PrecisionPolicy with_bits(unsigned work_bits, unsigned guard_bits = 32);
};

unsigned required_bits(const ExactRational& q, const ExactRational& alpha, long n_max, unsigned guard_bits = 0);

std::size_t geometric_tail_terms(const HPReal& ratio, const HPReal& first_term_mag, const HPReal& eps);

// Least-squares fit of log e_n = log c + n log rate.
struct GeometricFit {
  double rate = 0.0;
  double constant = 0.0;
  double residual = 0.0;  // rms of log residuals
  std::size_t points = 0;
};

GeometricFit fit_geometric(std::span<const long> n, std::span<const HPReal> e);

}  // namespace qortho
