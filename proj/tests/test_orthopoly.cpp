#include <doctest.h>

#include "qortho/orthopoly.hpp"

using namespace qortho;

namespace {

const ExactRational half(1, 2);

PrecisionPolicy policy(unsigned bits = 256) {
  PrecisionPolicy p = PrecisionPolicy::with_bits(bits);
  return p;
}

HPReal tiny(double x, unsigned bits = 256) { return HPReal(x, Bits{bits}); }

}  // namespace

TEST_CASE("exact unit moments") {
  const auto m = exact_moments(WeightSpec::unit(half, 0), 4).value();
  CHECK(m.exact);
  CHECK(m.even);
  CHECK(m.mu[0] == 4);
  CHECK(m.mu[1] == 0);
  CHECK(m.mu[2] == ExactRational(16, 7));
  CHECK(m.mu.size() == 9);
  CHECK_FALSE(exact_moments(WeightSpec::qhermite1(half, 0), 4).has_value());
  CHECK_FALSE(exact_moments(WeightSpec::unit(half, half), 4).has_value());
}

TEST_CASE("multiprecision moments") {
  const auto p = policy();
  const auto qh = moments(WeightSpec::qhermite1(half, 0), 3, p);
  const HPReal expect = HPReal::parse("3.283265121310307732587685540450858868452", p.bits());
  CHECK(abs(qh.mu[0] - expect) < tiny(1e-38));
  for (std::size_t m = 1; m < qh.mu.size(); m += 2) CHECK(qh.mu[m].is_zero());

  PrecisionPolicy coarse = p;
  coarse.tail_eps = ExactRational(1, 1000000) * ExactRational(1, 1000000) * ExactRational(1, 1000000);
  PrecisionPolicy fine = coarse;
  fine.tail_eps = coarse.tail_eps / 2;
  const auto a = moments(WeightSpec::qhermite1(half, 0), 3, coarse);
  const auto b = moments(WeightSpec::qhermite1(half, 0), 3, fine);
  for (std::size_t m = 0; m < a.mu.size(); ++m) CHECK(abs(a.mu[m] - b.mu[m]) <= 2L * coarse.eps());

  // alpha = 1/2: mu[2j] = 2 / (1 - q^{2j + 3/2})
  const auto u = moments(WeightSpec::unit(half, half), 3, p);
  CHECK_FALSE(u.exact);
  for (long j = 0; j <= 3; ++j) {
    const HPReal ref = 2L / (1L - power_of(half, ExactRational(2 * j) + ExactRational(3, 2), p.bits()));
    CHECK(abs(u.mu[static_cast<std::size_t>(2 * j)] - ref) < tiny(1e-60));
  }
}

TEST_CASE("stieltjes and hankel agree exactly") {
  for (const ExactRational q : {ExactRational(1, 2), ExactRational(1, 3)}) {
    const auto m = exact_moments(WeightSpec::unit(q, 0), 10).value();
    const auto s = recurrence_stieltjes(m, 10);
    const auto h = hankel_oracle(m, 10);
    for (long n = 0; n <= 10; ++n) {
      const auto i = static_cast<std::size_t>(n);
      CHECK(s.gamma[i] == h.gamma[i]);
      CHECK(s.coeffs[i] == h.coeffs[i]);
      if (n >= 1) CHECK(s.a[i] == h.a[i]);
      if (n < 10) CHECK(s.b[i] == h.b[i]);
    }
  }
}

TEST_CASE("unit weight recurrence values") {
  const auto m = exact_moments(WeightSpec::unit(half, 0), 6).value();
  const auto r = recurrence_stieltjes(m, 6);
  CHECK(r.gamma[0] == 4);
  CHECK(r.b[0] == 0);
  CHECK(r.coeffs[1] == std::vector<ExactRational>{0, 1});
  CHECK(r.a[1] == ExactRational(4, 7));
  CHECK(r.gamma[1] == ExactRational(16, 7));
  CHECK(r.coeffs[2] == std::vector<ExactRational>{ExactRational(-4, 7), 0, 1});
  for (long n = 1; n <= 6; ++n) {
    const auto i = static_cast<std::size_t>(n);
    CHECK(r.a[i] == r.gamma[i] / r.gamma[i - 1]);
  }
  for (long n = 0; n < 6; ++n) CHECK(r.b[static_cast<std::size_t>(n)] == 0);
  CHECK(eval_poly(r, 2, half) == ExactRational(-9, 28));
  CHECK(eval_poly(r, 0, ExactRational(17)) == 1);
}

TEST_CASE("n_max = 0 keeps only gamma[0]") {
  const auto m = exact_moments(WeightSpec::unit(half, 0), 0).value();
  const auto r = recurrence_stieltjes(m, 0);
  CHECK(r.gamma.size() == 1);
  CHECK(r.gamma[0] == 4);
}

TEST_CASE("degenerate moment tables are rejected") {
  MomentTable<ExactRational> m;
  m.q = half;
  m.mu = {ExactRational(1), 0, ExactRational(1), 0, ExactRational(1)};
  m.exact = true;
  try {
    recurrence_stieltjes(m, 2);
    FAIL("expected degenerate_measure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::degenerate_measure);
  }
  CHECK_THROWS_AS(hankel_oracle(m, 2), Error);
}

TEST_CASE("evaluation paths agree") {
  const auto p = policy();
  const auto rec = build_recurrence(WeightSpec::qhermite1(half, 0), 12, p);
  for (long n = 0; n <= 12; ++n) {
    const HPComplex z(0.31, -0.2, p.bits());
    const HPComplex a = eval_poly(rec, n, z);
    const HPComplex b = eval_coeffs(rec, n, z);
    CHECK(abs(a - b) <= pow2(-256 + 8, p.bits()) * max(abs(a), HPReal(1L, p.bits())));
    const HPComplex neg = eval_poly(rec, n, -z);
    CHECK(abs(n % 2 == 0 ? neg - a : neg + a) <= pow2(-240, p.bits()));
  }
  CHECK_THROWS_AS(eval_poly(rec, 13, HPComplex(0.1, 0.0, p.bits())), Error);
}

TEST_CASE("orthogonality residuals") {
  PrecisionPolicy p = policy(512);
  p.tail_eps = parse_rational("1e-40");
  const auto unit = WeightSpec::unit(half, 0);
  const auto ru = build_recurrence(unit, 4, p);
  CHECK(orthogonality_residual(ru, unit, 0, 1, p).value.is_zero());
  CHECK(orthogonality_residual(ru, unit, 3, 3, p).value <= tiny(1e-20));
  const auto qh = WeightSpec::qhermite1(half, 0);
  const auto rq = build_recurrence(qh, 4, p);
  CHECK(orthogonality_residual(rq, qh, 2, 4, p).value <= tiny(1e-20));
}

TEST_CASE("non-even weights keep b_n") {
  const auto rec = build_recurrence(WeightSpec::little_qjacobi(half, 0, ExactRational(1, 3)), 6, policy());
  CHECK_FALSE(rec.b[0].is_zero());
  CHECK_FALSE(rec.b[3].is_zero());
}

TEST_CASE("smallest positive zero") {
  const auto p = policy();
  const auto rec = build_recurrence(WeightSpec::unit(half, 0), 4, p);
  const HPReal expect = 2L / sqrt(HPReal(7L, p.bits()));
  CHECK(abs(smallest_positive_zero(rec, 2, p) - expect) <= pow2(-120, p.bits()));
  try {
    smallest_positive_zero(rec, 1, p);
    FAIL("expected no_sign_change");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::no_sign_change);
  }
}

TEST_CASE("folded weights reproduce P_l(z^2)") {
  const ExactRational quarter(1, 4);
  const std::vector<ExactRational> w{1};
  const auto one_sided = recurrence_stieltjes(exact_one_sided_moments(w, quarter, 4), 4);
  const auto folded = fold_one_sided(w, quarter);
  const auto two_sided = recurrence_stieltjes(exact_moments(folded, 8).value(), 8);
  for (long l = 0; l <= 4; ++l) {
    const auto& p = one_sided.coeffs[static_cast<std::size_t>(l)];
    const auto& qc = two_sided.coeffs[static_cast<std::size_t>(2 * l)];
    REQUIRE(qc.size() == 2 * p.size() - 1);
    for (std::size_t j = 0; j < qc.size(); ++j) CHECK(qc[j] == (j % 2 == 0 ? p[j / 2] : ExactRational(0)));
    CHECK(two_sided.gamma[static_cast<std::size_t>(2 * l)] == 2 * one_sided.gamma[static_cast<std::size_t>(l)]);
  }
}
