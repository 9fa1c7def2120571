#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "qortho/numerics.hpp"

namespace qortho {

struct QParams {
  ExactRational q;
  ExactRational alpha;

  QParams() : QParams(ExactRational(1, 2), ExactRational(0)) {}
  QParams(ExactRational q_, ExactRational alpha_);
  HPReal q_hp(Bits b) const { return HPReal(q, b); }
  HPReal alpha_hp(Bits b) const { return HPReal(alpha, b); }
};

// A function on the lattice {±q^k}: either callable anywhere or a table for k = 0..K.
class LatticeFn {
 public:
  using Callable = std::function<HPComplex(const HPComplex&)>;

  static LatticeFn from_callable(Callable f);
  static LatticeFn from_table(std::vector<HPComplex> plus, std::vector<HPComplex> minus);

  bool is_table() const { return !f_; }
  // Largest stored k for tables.
  std::size_t table_size() const { return plus_.size(); }

  // f(sign * q^k) where q_pow_k = q^k.
  HPComplex at(long k, int sign, const HPReal& q_pow_k) const;
  HPComplex operator()(const HPComplex& z) const;

 private:
  Callable f_;
  std::vector<HPComplex> plus_, minus_;
};

// Certifies the tail of a series of magnitudes by the ratio of its last summands.
class RatioTail {
 public:
  void push(const HPReal& magnitude);
  // Bound on the remaining tail, or nullopt while the ratio test is not yet conclusive.
  std::optional<HPReal> bound() const;
  std::size_t count() const { return count_; }

 private:
  HPReal last_[4];
  std::size_t count_ = 0;
};

Approx<HPComplex> pochhammer_inf(const HPComplex& z, const HPReal& q, const Tolerance& tol);

template <class Z, class Q>
Z pochhammer_fin(const Z& z, const Q& q, unsigned n) {
  Z result = z * 0 + 1;
  Z zq = z;
  for (unsigned j = 0; j < n; ++j) {
    result *= (1 - zq);
    zq *= q;
  }
  return result;
}

Approx<HPComplex> jackson_two_sided(const LatticeFn& f, const HPReal& q, const Tolerance& tol);
Approx<HPComplex> jackson_one_sided(const LatticeFn& f, const HPReal& q, const Tolerance& tol);

// Pole exclusion radius and truncation orders chosen by h_alpha.
struct HAlphaInfo {
  std::size_t k_plus = 0;
  std::size_t k_minus = 0;
  HPReal pole_radius;
};

Approx<HPComplex> h_alpha(const HPComplex& z, const QParams& params, const Tolerance& tol,
                          HAlphaInfo* info = nullptr);

Approx<HPComplex> f_fn(const HPComplex& z, const HPReal& q, const Tolerance& tol);
Approx<HPComplex> g_fn(const HPComplex& z, const HPReal& q, const Tolerance& tol);
Approx<HPComplex> g_n_fn(const HPComplex& z, const HPReal& q, long n, const Tolerance& tol);

// g'(z) from the product rule applied to the truncated product; exact at lattice zeros.
Approx<HPComplex> g_prime(const HPComplex& z, const HPReal& q, const Tolerance& tol);

}  // namespace qortho
