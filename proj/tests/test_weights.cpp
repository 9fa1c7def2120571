#include <doctest.h>

#include "qortho/weights.hpp"

using namespace qortho;

namespace {

const Bits bits{256};
const ExactRational half(1, 2);

Tolerance tol() { return {pow2(-200, bits), 100000}; }

HPComplex c(double x) { return HPComplex(x, 0.0, bits); }

}  // namespace

TEST_CASE("catalog parsing") {
  CHECK(WeightSpec::parse("unit", half, 0).kind == WeightKind::unit);
  CHECK(WeightSpec::parse("qhermite1", half, 0).kind == WeightKind::qhermite1);
  const auto lqj = WeightSpec::parse("littleqjacobi:b=1/3", half, 0);
  CHECK(lqj.kind == WeightKind::little_qjacobi);
  CHECK(lqj.param == ExactRational(1, 3));
  CHECK_FALSE(lqj.is_even());
  const auto poly = WeightSpec::parse("poly:c=-2", half, 0);
  CHECK(poly.param == -2);
  CHECK(poly.is_even());
  CHECK_THROWS_AS(WeightSpec::parse("laguerre", half, 0), Error);
  CHECK_THROWS_AS(WeightSpec::parse("poly", half, 0), Error);
  CHECK_THROWS_AS(WeightSpec::parse("littleqjacobi:b=3", half, 0), Error);
}

TEST_CASE("eval_weight") {
  CHECK(abs(eval_weight(WeightSpec::unit(half, 0), HPComplex(0.37, -2.0, bits), tol()).value - c(1)) == 0L);
  const HPReal expect = HPReal::parse("0.6885375371203397154565143572935081846755", bits);
  CHECK(abs(eval_weight(WeightSpec::qhermite1(half, 0), c(1), tol()).value.re - expect) < pow2(-125, bits));
  CHECK(abs(eval_weight(WeightSpec::poly_perturbation(half, 0, -2), c(1), tol()).value - c(-1)) == 0L);
  // little q-Jacobi: (qx;q)/(bqx;q) at x = -1 against the finite product ratio
  const auto lqj = WeightSpec::little_qjacobi(half, 0, ExactRational(1, 3));
  const HPReal q(half, bits);
  const HPComplex x = c(-1);
  const HPComplex ref = pochhammer_inf(x * q, q, tol()).value / pochhammer_inf(x * q / HPReal(3L, bits), q, tol()).value;
  CHECK(abs(eval_weight(lqj, x, tol()).value - ref) < pow2(-190, bits));
}

TEST_CASE("admissibility classes") {
  const auto unit = check_admissibility(WeightSpec::unit(half, 0), 4, 20, tol());
  CHECK(unit.is_strict);
  CHECK(unit.c_estimate == 0.0);
  for (const auto& d : unit.deviation) CHECK(d.is_zero());

  const auto qh = check_admissibility(WeightSpec::qhermite1(half, 0), 4, 20, tol());
  CHECK(qh.is_strict);
  CHECK(qh.fitted_rate == doctest::Approx(0.5).epsilon(admissibility_rate_tol));

  const auto poly = check_admissibility(WeightSpec::poly_perturbation(half, 0, -2), 4, 20, tol());
  CHECK(poly.is_strict);
  CHECK(poly.fitted_rate == doctest::Approx(0.5).epsilon(admissibility_rate_tol));

  const auto lqj = check_admissibility(WeightSpec::little_qjacobi(half, 0, ExactRational(1, 3)), 4, 20, tol());
  CHECK_FALSE(lqj.is_strict);
  CHECK(lqj.cls == AdmissibilityClass::relaxed);
  CHECK(lqj.fitted_rate == doctest::Approx(0.7071).epsilon(0.05));
  CHECK(abs(lqj.w0 - 1L) < pow2(-40, bits));
}

TEST_CASE("inadmissible weights are flagged") {
  auto kind_of = [](const WeightSpec& w) {
    try {
      check_admissibility(w, 4, 20, tol());
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::bad_input;
  };
  // w(0) = 2: the deviation does not decay
  CHECK(kind_of(WeightSpec::polynomial(half, 0, {ExactRational(2)})) == ErrorKind::inadmissible);
  // 1 - 4x^2 vanishes at x = ±1/2
  CHECK(kind_of(WeightSpec::poly_perturbation(half, 0, -4)) == ErrorKind::inadmissible);
  CHECK_THROWS_AS(check_admissibility(WeightSpec::unit(half, 0), 4, 8, tol()), Error);
}

TEST_CASE("weight table loading") {
  const std::string text = R"({"q": "1/2", "alpha": 0, "values": [
    {"k": 0, "plus": "1", "minus": "1"}, {"k": 1, "plus": "0.5", "minus": "3/4"}]})";
  const auto w = load_weight_table(text, bits);
  CHECK(w.kind == WeightKind::user_table);
  CHECK(w.q == half);
  CHECK(abs(eval_weight_lattice(w, 1, -1, tol()).value - c(0.75)) == 0L);
  CHECK(abs(eval_weight_lattice(w, 1, 1, tol()).value - c(0.5)) == 0L);
  try {
    eval_weight_lattice(w, 2, 1, tol());
    FAIL("expected table_miss");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::table_miss);
  }
  CHECK_THROWS_AS(load_weight_table(R"({"q": "1/2", "alpha": 0, "values": [{"k": 1, "plus": "1", "minus": "1"}]})",
                                    bits),
                  Error);
  CHECK_THROWS_AS(load_weight_table("not json", bits), Error);
}

TEST_CASE("folding") {
  const ExactRational quarter(1, 4);
  const auto one = fold_one_sided(std::vector<ExactRational>{1}, quarter);
  CHECK(one.q == half);
  CHECK(one.alpha == 1);
  CHECK(one.polynomial_coeffs().value() == std::vector<ExactRational>{1});

  const auto lin = fold_one_sided(std::vector<ExactRational>{0, 1}, quarter);
  CHECK(lin.polynomial_coeffs().value() == std::vector<ExactRational>{0, 0, 1});
  CHECK(lin.is_even());

  CHECK_THROWS_AS(fold_one_sided(std::vector<ExactRational>{1}, half), Error);

  const auto f = fold_one_sided(LatticeFn::from_callable([](const HPComplex& x) { return x; }), quarter);
  CHECK(f.q == half);
  CHECK(abs(eval_weight(f, c(-0.5), tol()).value - c(0.25)) == 0L);
}
