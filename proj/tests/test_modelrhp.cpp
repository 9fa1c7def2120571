#include <doctest.h>

#include <random>

#include "qortho/modelrhp.hpp"

using namespace qortho;

namespace {

const ExactRational half(1, 2);

HPReal lim(const char* text) { return HPReal::parse(text, Bits{128}); }

const ModelSolution& model512() {
  static const ModelSolution sol = build_model_solution(QParams(), 80, PrecisionPolicy::with_bits(512));
  return sol;
}

HPComplex pt(double re, double im = 0.0) { return HPComplex(re, im, Bits{512}); }

}  // namespace

TEST_CASE("S_A coefficient values") {
  const auto p = PrecisionPolicy::with_bits(256);
  const auto a = build_series_A(QParams(), 20, p);
  const HPReal r23 = a.comp2[1] / a.comp2[0];
  CHECK(abs(r23 + HPReal(ExactRational(2, 21), p.bits())) < pow2(-240, p.bits()));
  const HPReal r12 = a.comp1[1] / a.comp2[0];
  CHECK(abs(r12 - HPReal(ExactRational(4, 3), p.bits())) < pow2(-240, p.bits()));
  // entire: the odd coefficient ratios collapse
  for (std::size_t j = 4; j < a.comp2.size(); ++j) {
    const HPReal ratio = abs(a.comp2[j] / a.comp2[j - 1]);
    CHECK(ratio <= pow(HPReal(half, p.bits()), static_cast<long>(2 * j - 1)));
  }
}

TEST_CASE("series agree with the substitution oracle") {
  const auto p = PrecisionPolicy::with_bits(256);
  for (const ExactRational alpha : {ExactRational(0), ExactRational(1, 2), ExactRational(-1, 2)}) {
    ExactRational qa;
    if (!rational_power(half, alpha, qa)) continue;
    const QParams params(half, alpha);
    const long deg = 12;
    const SeriesSolution sols[3] = {build_series_A(params, 8, p), build_series_B(params, 8, p),
                                    build_series_C(params, 8, p)};
    for (const auto& s : sols) {
      const auto o = substitution_oracle(s.label, half, alpha, deg);
      const HPReal norm = s.label == SeriesLabel::A ? s.comp1[0] : s.comp2[0];
      for (std::size_t i = 0; i < s.comp1.size(); ++i) {
        const long pw = std::labs(s.power1(i));
        if (pw > deg) break;
        CHECK(abs(s.comp1[i] / norm - HPReal(o.comp1[static_cast<std::size_t>(pw)], p.bits())) < pow2(-230, p.bits()));
      }
      for (std::size_t i = 0; i < s.comp2.size(); ++i) {
        const long pw = std::labs(s.power2(i));
        if (pw > deg) break;
        CHECK(abs(s.comp2[i] / norm - HPReal(o.comp2[static_cast<std::size_t>(pw)], p.bits())) < pow2(-230, p.bits()));
      }
      // parity: the oracle leaves the wrong-parity slots empty
      for (long d = 0; d <= deg; ++d) {
        const auto i = static_cast<std::size_t>(d);
        if (d % 2 != s.parity1()) CHECK(o.comp1[i] == 0);
        if (d % 2 != s.parity2()) CHECK(o.comp2[i] == 0);
      }
    }
  }
  const auto ob = substitution_oracle(SeriesLabel::B, half, 0, 6);
  CHECK(ob.comp2[2] / ob.comp2[0] == ExactRational(-1, 3));
}

TEST_CASE("q-difference residuals") {
  const auto p = PrecisionPolicy::with_bits(512);
  const QParams params;
  const auto a = build_series_A(params, 60, p);
  const auto b = build_series_B(params, 60, p);
  const auto c = build_series_C(params, 60, p);
  CHECK(qdifference_residual(b, pt(0.4, 0.2), p) <= lim("1e-25"));
  CHECK(qdifference_residual(c, pt(3.1), p) <= lim("1e-25"));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 10; ++i) {
    const HPComplex t = pt(u(rng), u(rng));
    CHECK(qdifference_residual(a, t, p) <= lim("1e-25"));
    CHECK(qdifference_residual(b, t, p) <= lim("1e-25"));
    CHECK(qdifference_residual(c, t * 3L + HPComplex(0.5, 0.5, Bits{512}), p) <= lim("1e-25"));
  }
}

TEST_CASE("S_C at infinity and refinement") {
  const auto p = PrecisionPolicy::with_bits(512);
  const auto c60 = build_series_C(QParams(), 60, p);
  const auto c80 = build_series_C(QParams(), 80, p);
  const auto far = c60.evaluate(pt(1e12), p.eps()).value;
  CHECK(abs(far[0]) < lim("1e-11"));
  CHECK(abs(far[1] - c60.comp2[0]) < lim("1e-20"));
  const auto v60 = c60.evaluate(pt(2.5), p.eps()).value;
  const auto v80 = c80.evaluate(pt(2.5), p.eps()).value;
  CHECK(abs(v60[0] - v80[0]) <= lim("1e-30"));
  CHECK(abs(v60[1] - v80[1]) <= lim("1e-30"));
}

TEST_CASE("resonant alpha is rejected") {
  const auto p = PrecisionPolicy::with_bits(256);
  for (long a : {1L, 3L}) {
    try {
      build_series_B(QParams(half, a), 20, p);
      FAIL("expected resonance");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::resonance);
    }
  }
  CHECK_NOTHROW(build_series_B(QParams(half, 2), 20, p));
}

TEST_CASE("C0") {
  const auto& sol = model512();
  CHECK(abs(sol.C0.value - lim("2.10933110273661189096189173311")) < lim("1e-28"));
  const auto p = PrecisionPolicy::with_bits(512);
  const auto r10 = c0_at_level(sol.A, 10, p);
  const auto r12 = c0_at_level(sol.A, 12, p);
  CHECK(abs(r10.value - r12.value) <= 10L * r10.gap);
}

TEST_CASE("psi(0) matches the scaled polynomials") {
  const auto& sol = model512();
  const HPReal psi0 = sol.psi(pt(0)).re;
  CHECK(abs(psi0 - lim("0.41942244179510759770995610770297")) < lim("1e-28"));
  const auto rec = build_recurrence(WeightSpec::unit(half, 0), 14, PrecisionPolicy::with_bits(512));
  HPReal prev(1L, Bits{512});
  for (long n : {8L, 10L, 12L, 14L}) {
    const long h = n / 2;
    HPReal s = pow(HPReal(half, Bits{512}), -h * (h - 1));
    if (h % 2 != 0) s = -s;
    const HPReal err = abs(eval_poly(rec, n, pt(0)).re * s - psi0);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < lim("1e-3"));
}

TEST_CASE("determinant normalization") {
  const auto& sol = model512();
  CHECK(sol.det_normalized);
  CHECK(abs(sol.psi(pt(0)) * sol.rho(pt(0)) - HPComplex(1L, Bits{512})) < lim("1e-60"));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> r(0.0, 2.0), a(0.0, 6.283185307179586);
  for (int i = 0; i < 10; ++i) {
    const double rad = r(rng), ang = a(rng);
    CHECK(det_residual(sol, pt(rad * std::cos(ang), rad * std::sin(ang))) <= lim("1e-25"));
  }
  const HPComplex between(pow(sqrt(HPReal(half, Bits{512})), -3));
  CHECK(det_residual(sol, between) <= lim("1e-25"));
}

TEST_CASE("parities of the entries") {
  const auto& sol = model512();
  const HPComplex t = pt(0.37, 0.21);
  CHECK(abs(sol.psi(-t) - sol.psi(t)) < lim("1e-60"));
  CHECK(abs(sol.rho(-t) - sol.rho(t)) < lim("1e-60"));
  CHECK(abs(sol.phi(-t) + sol.phi(t)) < lim("1e-60"));
  CHECK(abs(sol.varphi(-t) + sol.varphi(t)) < lim("1e-60"));
}

TEST_CASE("connection identity") {
  const auto& sol = model512();
  for (const HPComplex& t : {pt(0.3), pt(0, 1.7), pt(-2.4, 0.3)}) CHECK(connection_residual(sol, t) <= lim("1e-25"));
  CHECK_THROWS_AS(connection_residual(sol, pt(0.5)), Error);
}

TEST_CASE("other alpha values") {
  for (const char* al : {"1/2", "-1/2", "0.3"}) {
    const auto sol = build_model_solution(QParams(half, parse_rational(al)), 80, PrecisionPolicy::with_bits(256));
    const HPComplex t(0.45, 0.2, Bits{256});
    CHECK(connection_residual(sol, t) <= lim("1e-25"));
    CHECK(det_residual(sol, t) <= lim("1e-25"));
  }
}

TEST_CASE("stability under J_max and eps changes") {
  const auto p = PrecisionPolicy::with_bits(512);
  const auto a = build_model_solution(QParams(), 80, p);
  const auto b = build_model_solution(QParams(), 100, p);
  PrecisionPolicy ph = p;
  ph.tail_eps = p.tail_eps / 2;
  const auto c = build_model_solution(QParams(), 80, ph);
  const HPComplex t = pt(0.8, 0.3);
  CHECK(abs(a.psi(t) - b.psi(t)) < lim("1e-40"));
  CHECK(abs(a.psi(t) - c.psi(t)) < lim("1e-40"));
  CHECK(abs(a.C0.value - b.C0.value) < lim("1e-40"));
}

TEST_CASE("residues of S_A^1 / g") {
  const auto& sol = model512();
  const HPComplex r1 = residue_at(sol, 1);
  CHECK(r1.re.is_finite());
  CHECK(r1.im.is_finite());
  CHECK_FALSE(r1.is_zero());
  // Res(k)/Res(k+1) against t^4 q^{4-alpha} at t = q^{-(k+1)}
  for (long k = 1; k <= 8; ++k) {
    const HPReal law = pow(HPReal(half, Bits{512}), -4 * k);
    const HPReal ratio = abs(residue_at(sol, k) / residue_at(sol, k + 1)) / law;
    if (k == 8) CHECK(abs(ratio - 1L) <= lim("0.1"));
  }
}

TEST_CASE("q-Hermite limit system") {
  const auto rec = build_recurrence(WeightSpec::unit(half, 0), 12, PrecisionPolicy::with_bits(256));
  const QParams params;
  const HPComplex t(0.5, 0.0, Bits{256});
  const HPReal r8 = qhermite_limit_check(params, rec, 8, t);
  const HPReal r10 = qhermite_limit_check(params, rec, 10, t);
  const HPReal r12 = qhermite_limit_check(params, rec, 12, t);
  const HPReal q2 = HPReal(ExactRational(1, 4), Bits{256});
  // K_n = r_n / q^n creeps up by about 0.1% per step
  const HPReal K = max(r8 / pow(q2, 4), r10 / pow(q2, 5)) * HPReal(1.02, Bits{256});
  CHECK(r12 <= K * pow(q2, 6));
  const double step = (r12 / r10).to_double();
  CHECK(step == doctest::Approx(0.25).epsilon(0.3));
  CHECK(qhermite_limit_check(params, rec, 12, HPComplex(0L, Bits{256})) <= K * pow(q2, 6));
  CHECK_THROWS_AS(qhermite_limit_check(QParams(half, half), rec, 8, t), Error);
}
