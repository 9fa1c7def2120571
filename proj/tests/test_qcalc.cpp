#include <doctest.h>

#include <random>

#include "qortho/qcalc.hpp"

using namespace qortho;

namespace {

const Bits bits{256};
const HPReal q(ExactRational(1, 2), bits);

Tolerance tol(long e = 200) { return {pow2(-e, bits), 100000}; }

HPComplex c(double re, double im = 0.0) { return HPComplex(re, im, bits); }

HPReal close(double x) { return HPReal(x, bits); }

// Points in the annulus 1/2 <= |z| <= 4, fixed seed.
std::vector<HPComplex> annulus(int count) {
  std::mt19937_64 rng(20240607);
  std::uniform_real_distribution<double> rad(0.5, 4.0), ang(0.0, 6.283185307179586);
  std::vector<HPComplex> out;
  while (static_cast<int>(out.size()) < count) {
    const double r = rad(rng), a = ang(rng);
    // keep clear of the lattice ±2^k
    const double k = std::log2(r);
    if (std::abs(k - std::round(k)) < 0.05 && std::abs(std::sin(a)) < 0.05) continue;
    out.push_back(c(r * std::cos(a), r * std::sin(a)));
  }
  return out;
}

}  // namespace

TEST_CASE("QParams validation") {
  CHECK_NOTHROW(QParams(ExactRational(1, 2), 0));
  CHECK_THROWS_AS(QParams(ExactRational(2), 0), Error);
  CHECK_THROWS_AS(QParams(ExactRational(1, 2), -1), Error);
}

TEST_CASE("pochhammer_inf") {
  CHECK(abs(pochhammer_inf(c(0), q, tol()).value - c(1)) == 0L);
  CHECK(pochhammer_inf(c(1), q, tol()).value.is_zero());
  const HPReal expect = HPReal::parse("0.2887880950866024212788997219292307800889", bits);
  const auto v = pochhammer_inf(c(0.5), q, tol());
  CHECK(v.status.converged);
  CHECK(abs(v.value.re - expect) < pow2(-125, bits));
  const auto w = pochhammer_inf(c(0.5), q, tol().halved());
  CHECK(abs(w.value - v.value) <= 2L * tol().eps);
  // a lattice zero deeper in the product
  CHECK(pochhammer_inf(c(8), q, tol()).value.is_zero());
}

TEST_CASE("pochhammer_inf reports a truncation cap") {
  Tolerance t = tol();
  t.max_terms = 3;
  const auto v = pochhammer_inf(c(0.5), q, t);
  CHECK_FALSE(v.status.converged);
  CHECK_THROWS_AS(v.checked("test"), Error);
}

TEST_CASE("pochhammer_fin") {
  const ExactRational qr(1, 2);
  CHECK(pochhammer_fin(ExactRational(5), qr, 0) == 1);
  CHECK(pochhammer_fin(ExactRational(1), qr, 2) == 0);
  CHECK(pochhammer_fin(ExactRational(1, 2), qr, 2) == ExactRational(3, 8));
}

TEST_CASE("jackson integrals") {
  auto one = LatticeFn::from_callable([](const HPComplex& z) { return HPComplex(1L, Bits{z.bits()}); });
  auto id = LatticeFn::from_callable([](const HPComplex& z) { return z; });
  auto sq = LatticeFn::from_callable([](const HPComplex& z) { return z * z; });
  auto zero = LatticeFn::from_callable([](const HPComplex& z) { return HPComplex(0L, Bits{z.bits()}); });
  const HPReal e = tol().eps * 4L;
  CHECK(abs(jackson_two_sided(one, q, tol()).value - c(4)) <= e);
  CHECK(abs(jackson_two_sided(id, q, tol()).value) <= e);
  CHECK(abs(jackson_two_sided(sq, q, tol()).value.re - HPReal(ExactRational(16, 7), bits)) <= e);
  CHECK(abs(jackson_one_sided(one, q, tol()).value - c(2)) <= e);
  CHECK(abs(jackson_one_sided(id, q, tol()).value.re - HPReal(ExactRational(4, 3), bits)) <= e);
  CHECK(jackson_one_sided(zero, q, tol()).value.is_zero());
}

TEST_CASE("jackson on an exhausted table") {
  std::vector<HPComplex> plus, minus;
  for (int k = 0; k < 10; ++k) {
    plus.push_back(c(1));
    minus.push_back(c(1));
  }
  const auto t = LatticeFn::from_table(plus, minus);
  CHECK(t.is_table());
  CHECK(t.table_size() == 10);
  try {
    jackson_two_sided(t, q, tol());
    FAIL("expected table_miss");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::table_miss);
  }
}

TEST_CASE("h_alpha") {
  const QParams p0(ExactRational(1, 2), 0);
  const HPComplex z(0.3, 0.7, bits);
  CHECK(abs(h_alpha(-z, p0, tol()).value + h_alpha(z, p0, tol()).value) <= 4L * tol().eps);

  const HPComplex w(1.3, 0.4, bits);
  CHECK(abs(h_alpha(w * q, p0, tol()).value - h_alpha(w, p0, tol()).value) <= 4L * tol().eps);

  const HPReal expect = HPReal::parse("-1.239339539043987181685521570406764779349", bits);
  const auto a = h_alpha(c(1.5), p0, tol());
  const auto b = h_alpha(c(1.5), p0, tol().halved());
  CHECK(abs(a.value - b.value) <= 2L * tol().eps);
  CHECK(abs(a.value.re - expect) < pow2(-125, bits));

  for (const char* al : {"-1/2", "0", "1/2"}) {
    const QParams p(ExactRational(1, 2), parse_rational(al));
    const HPReal qa = power_of(p.q, p.alpha, bits);
    for (const auto& pt : annulus(20)) {
      const HPComplex lhs = h_alpha(pt * q, p, tol()).value;
      const HPComplex rhs = h_alpha(pt, p, tol()).value * qa;
      CHECK(abs(lhs - rhs) <= 10L * tol().eps * max(abs(rhs), close(1)));
    }
  }
}

TEST_CASE("h_alpha errors") {
  const QParams p0(ExactRational(1, 2), 0);
  auto kind_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::bad_input;
  };
  CHECK(kind_of([&] { h_alpha(c(0.5), p0, tol()); }) == ErrorKind::pole_proximity);
  CHECK(kind_of([&] { h_alpha(c(-4), p0, tol()); }) == ErrorKind::pole_proximity);
  CHECK(kind_of([&] { h_alpha(c(0), p0, tol()); }) == ErrorKind::zero_argument);
  CHECK(kind_of([&] { h_alpha(c(0.3), QParams(ExactRational(1, 2), 1), tol()); }) == ErrorKind::domain);
}

TEST_CASE("f and g") {
  CHECK(f_fn(c(1), q, tol()).value.is_zero());
  CHECK(f_fn(c(-1), q, tol()).value.is_zero());
  CHECK(g_fn(c(1), q, tol()).value.is_zero());
  const HPReal f2 = HPReal::parse("0.6885375371203397154565143572935081846755", bits);
  CHECK(abs(f_fn(c(2), q, tol()).value.re - f2) < pow2(-125, bits));
  CHECK_THROWS_AS(f_fn(c(0), q, tol()), Error);
  CHECK_THROWS_AS(g_fn(c(0), q, tol()), Error);

  const HPComplex z(2.7, 0.0, bits);
  const HPComplex lhs = f_fn(z * q, q, tol()).value;
  const HPComplex rhs = (1L - inverse(square(z * q))) * f_fn(z, q, tol()).value;
  CHECK(abs(lhs - rhs) <= 4L * tol().eps);

  const HPComplex u(1.6, 0.2, bits);
  const HPComplex g_lhs = g_fn(u * q, q, tol()).value;
  const HPComplex g_rhs = -(inverse(square(u * q)) * g_fn(u, q, tol()).value);
  CHECK(abs(g_lhs - g_rhs) <= 4L * tol().eps);

  const auto g2 = g_fn(c(2.3), q, tol()).value;
  const auto g2h = g_fn(c(2.3), q, tol().halved()).value;
  CHECK(abs(g2 - g2h) <= 2L * tol().eps);
}

TEST_CASE("functional equations on the annulus") {
  for (const auto& z : annulus(20)) {
    const HPComplex f = f_fn(z, q, tol()).value;
    const HPComplex fq = f_fn(z * q, q, tol()).value;
    CHECK(abs(fq - (1L - inverse(square(z * q))) * f) <= 10L * tol().eps * max(abs(f), close(1)));
    const HPComplex g = g_fn(z, q, tol()).value;
    const HPComplex gq = g_fn(z * q, q, tol()).value;
    CHECK(abs(gq + inverse(square(z * q)) * g) <= 10L * tol().eps * max(abs(gq), close(1)));
    // parity
    CHECK(abs(f_fn(-z, q, tol()).value - f) <= 4L * tol().eps);
    CHECK(abs(g_fn(-z, q, tol()).value - g) <= 4L * tol().eps * max(abs(g), close(1)));
  }
}

TEST_CASE("g_n and the scaling identity") {
  const HPComplex z(1.7, 0.0, bits);
  CHECK(abs(g_n_fn(z, q, 0, tol()).value - f_fn(z, q, tol()).value) <= 4L * tol().eps);
  CHECK_THROWS_AS(g_n_fn(z, q, 3, tol()), Error);

  for (long n : {0L, 2L, 4L, 8L}) {
    for (const auto& pt : annulus(10)) {
      const HPReal qh = pow(q, n / 2);
      const HPComplex x = pt * qh;
      const HPComplex lhs = pow(x, n) * f_fn(x, q, tol()).value;
      HPComplex rhs = g_n_fn(pt, q, n, tol()).value * pow(q, (n / 2) * (n / 2 - 1));
      if ((n / 2) % 2 != 0) rhs = -rhs;
      CHECK(abs(lhs - rhs) <= 10L * tol().eps * max(abs(rhs), close(1)));
    }
  }

  const HPComplex w(0.9, 0.1, bits);
  const HPComplex ratio = g_fn(w, q, tol()).value / g_n_fn(w, q, 6, tol()).value;
  const HPComplex expect = pochhammer_inf(square(w) * pow(q, 8), q * q, tol()).value;
  CHECK(abs(ratio - expect) <= 4L * tol().eps);
}

TEST_CASE("g_prime at a lattice zero") {
  // g'(z) at z = 2 compared with a central difference
  const HPComplex z = c(2);
  const HPReal h = pow2(-60, bits);
  const HPComplex fd = (g_fn(z + h, q, tol()).value - g_fn(z - h, q, tol()).value) / (2L * h);
  CHECK(abs(g_prime(z, q, tol()).value - fd) < pow2(-100, bits));
}
