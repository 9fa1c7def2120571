#include <doctest.h>

#include <thread>

#include "qortho/numerics.hpp"

using namespace qortho;

TEST_CASE("parse_rational") {
  CHECK(parse_rational("1/2") == ExactRational(1, 2));
  CHECK(parse_rational("-6/4") == ExactRational(-3, 2));
  CHECK(parse_rational("0.25") == ExactRational(1, 4));
  CHECK(parse_rational("1e-3") == ExactRational(1, 1000));
  CHECK(parse_rational("7") == ExactRational(7));
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK(to_string(ExactRational(4, 7)) == "4/7");
  CHECK(to_string(ExactRational(8, 2)) == "4");
}

TEST_CASE("required_bits") {
  const ExactRational half(1, 2), third(1, 3);
  CHECK(required_bits(half, 0, 0, 0) == 64);
  CHECK(required_bits(half, 0, 16, 0) == 184);
  CHECK(required_bits(half, 0, 16, 32) == 216);
  CHECK(required_bits(third, 0, 10, 0) == 136);
  CHECK_THROWS_AS(required_bits(ExactRational(2), 0, 4, 0), Error);
  CHECK_THROWS_AS(required_bits(ExactRational(0), 0, 4, 0), Error);
}

TEST_CASE("geometric_tail_terms") {
  const Bits b{128};
  CHECK(geometric_tail_terms(HPReal(0.5, b), HPReal(1L, b), HPReal(1L, b)) == 1);
  CHECK(geometric_tail_terms(HPReal(0.5, b), HPReal(1L, b), HPReal(2L, b)) == 0);
  CHECK(geometric_tail_terms(HPReal(ExactRational(1, 4), b), HPReal(2L, b), HPReal::parse("1e-10", b)) == 18);
}

TEST_CASE("HPReal arithmetic and formatting") {
  const Bits b{256};
  HPReal x(ExactRational(1, 3), b);
  CHECK(x.bits() == 256);
  CHECK(abs(x * 3L - 1L) < pow2(-250, b));
  CHECK(HPReal(0L, b).str() == "0");
  CHECK(HPReal(ExactRational(4, 7), b).str(20) == "5.7142857142857142857e-1");
  CHECK(HPReal(2L, b).str(5) == "2");
  // mixed precision rounds to the wider operand
  CHECK((HPReal(1L, Bits{64}) + HPReal(1L, Bits{300})).bits() == 300);
  CHECK(sqrt(HPReal(4L, b)) == 2L);
  CHECK(pow(HPReal(ExactRational(1, 2), b), -3) == 8L);
}

TEST_CASE("exact rational reproduces HPReal") {
  const Bits b{200};
  ExactRational r(1);
  HPReal h(1L, b);
  for (long k = 1; k <= 30; ++k) {
    r = r * ExactRational(k, k + 3) + ExactRational(1, k);
    h = h * HPReal(ExactRational(k, k + 3), b) + HPReal(ExactRational(1, k), b);
  }
  CHECK(abs(HPReal(r, b) / h - 1L) <= pow2(-200 + 4, b));
}

TEST_CASE("power_of takes the exact path when possible") {
  const Bits b{128};
  CHECK(power_of(ExactRational(1, 4), ExactRational(1, 2), b) == HPReal(ExactRational(1, 2), b));
  CHECK(abs(power_of(ExactRational(1, 2), ExactRational(1, 2), b) - sqrt(HPReal(ExactRational(1, 2), b))) <
        pow2(-126, b));
}

TEST_CASE("HPComplex") {
  const Bits b{128};
  HPComplex z(0.3, 0.4, b);
  CHECK(abs(abs(z) - HPReal(0.5, b)) < pow2(-50, b));
  HPComplex w = z * inverse(z);
  CHECK(abs(w - HPComplex(1L, b)) < pow2(-120, b));
  CHECK(abs(pow(z, 3) - z * z * z) < pow2(-120, b));
}

TEST_CASE("PrecisionPolicy validation") {
  PrecisionPolicy p;
  CHECK_NOTHROW(p.validate());
  p.work_bits = 32;
  CHECK_THROWS_AS(p.validate(), Error);
  p = PrecisionPolicy{};
  p.tail_eps = 0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = PrecisionPolicy{};
  p.max_terms = 4;
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("fit_geometric recovers a rate") {
  const Bits b{128};
  std::vector<long> n{4, 6, 8, 10};
  std::vector<HPReal> e;
  for (long k : n) e.push_back(HPReal(3L, b) * pow(HPReal(ExactRational(1, 2), b), k));
  const GeometricFit f = fit_geometric(n, e);
  CHECK(f.rate == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(f.constant == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("results do not depend on the thread") {
  auto work = [] {
    const Bits b{300};
    HPReal s(0L, b);
    for (long k = 1; k < 200; ++k) s += HPReal(1L, b) / HPReal(k * k, b);
    return s.str();
  };
  const std::string ref = work();
  std::vector<std::string> got(4);
  std::vector<std::thread> pool;
  for (int i = 0; i < 4; ++i) pool.emplace_back([&, i] { got[static_cast<std::size_t>(i)] = work(); });
  for (auto& t : pool) t.join();
  for (const auto& g : got) CHECK(g == ref);
}
