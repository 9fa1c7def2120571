#include "qortho/weights.hpp"

#include <cmath>
#include <map>

#include <json.hpp>

namespace qortho {

namespace {

void check_q(const ExactRational& q) {
  if (q <= 0 || q >= 1) fail(ErrorKind::bad_input, "q out of range: expected 0 < q < 1, got " + to_string(q));
}

WeightSpec base(WeightKind kind, ExactRational q, ExactRational alpha, std::string label) {
  check_q(q);
  if (alpha <= -1) fail(ErrorKind::domain, "divergent moments: alpha must exceed -1, got " + to_string(alpha));
  WeightSpec w;
  w.kind = kind;
  w.q = std::move(q);
  w.alpha = std::move(alpha);
  w.label = std::move(label);
  return w;
}

HPComplex horner(const std::vector<ExactRational>& c, const HPComplex& x) {
  const Bits b{x.bits()};
  HPComplex acc(0L, b);
  for (std::size_t i = c.size(); i-- > 0;) {
    acc *= x;
    acc += HPComplex(HPReal(c[i], b));
  }
  return acc;
}

}  // namespace

WeightSpec WeightSpec::unit(ExactRational q, ExactRational alpha) {
  return base(WeightKind::unit, std::move(q), std::move(alpha), "unit");
}

WeightSpec WeightSpec::qhermite1(ExactRational q, ExactRational alpha) {
  return base(WeightKind::qhermite1, std::move(q), std::move(alpha), "qhermite1");
}

WeightSpec WeightSpec::little_qjacobi(ExactRational q, ExactRational alpha, ExactRational b) {
  if (abs(b) * q >= 1) fail(ErrorKind::bad_input, "little_qjacobi needs |b| < 1/q so no pole meets the lattice");
  auto w = base(WeightKind::little_qjacobi, std::move(q), std::move(alpha), "littleqjacobi:b=" + to_string(b));
  w.param = std::move(b);
  return w;
}

WeightSpec WeightSpec::poly_perturbation(ExactRational q, ExactRational alpha, ExactRational c) {
  auto w = base(WeightKind::poly_perturbation, std::move(q), std::move(alpha), "poly:c=" + to_string(c));
  w.param = std::move(c);
  return w;
}

WeightSpec WeightSpec::polynomial(ExactRational q, ExactRational alpha, std::vector<ExactRational> coeffs,
                                  std::string label) {
  if (coeffs.empty()) fail(ErrorKind::bad_input, "polynomial weight needs coefficients");
  auto w = base(WeightKind::polynomial, std::move(q), std::move(alpha), std::move(label));
  w.poly = std::move(coeffs);
  return w;
}

WeightSpec WeightSpec::user_table(ExactRational q, ExactRational alpha, LatticeFn table, std::string label) {
  if (!table.is_table()) fail(ErrorKind::bad_input, "user_table weight needs a lattice table");
  auto w = base(WeightKind::user_table, std::move(q), std::move(alpha), std::move(label));
  w.lattice = std::move(table);
  return w;
}

WeightSpec WeightSpec::callable(ExactRational q, ExactRational alpha, LatticeFn::Callable f, std::string label) {
  auto w = base(WeightKind::callable, std::move(q), std::move(alpha), std::move(label));
  w.lattice = LatticeFn::from_callable(std::move(f));
  return w;
}

WeightSpec WeightSpec::parse(const std::string& id, ExactRational q, ExactRational alpha) {
  auto colon = id.find(':');
  const std::string name = id.substr(0, colon);
  auto param = [&](const char* key) {
    const std::string prefix = std::string(key) + "=";
    if (colon == std::string::npos || id.compare(colon + 1, prefix.size(), prefix) != 0) {
      fail(ErrorKind::bad_input, "weight '" + name + "' needs parameter " + prefix + "<value>");
    }
    return parse_rational(id.substr(colon + 1 + prefix.size()));
  };
  if (name == "unit") return unit(std::move(q), std::move(alpha));
  if (name == "qhermite1") return qhermite1(std::move(q), std::move(alpha));
  if (name == "littleqjacobi" || name == "little_qjacobi") return little_qjacobi(std::move(q), std::move(alpha), param("b"));
  if (name == "poly" || name == "poly_perturbation") return poly_perturbation(std::move(q), std::move(alpha), param("c"));
  fail(ErrorKind::bad_input, "unknown weight id '" + id + "'");
}

bool WeightSpec::is_even() const {
  switch (kind) {
    case WeightKind::unit:
    case WeightKind::qhermite1:
    case WeightKind::poly_perturbation:
      return true;
    case WeightKind::little_qjacobi:
    case WeightKind::callable:
      return false;
    case WeightKind::polynomial:
      for (std::size_t i = 1; i < poly.size(); i += 2) {
        if (poly[i] != 0) return false;
      }
      return true;
    case WeightKind::user_table: {
      const Bits b{64};
      HPReal one(1L, b);
      for (std::size_t k = 0; k < lattice->table_size(); ++k) {
        const long kk = static_cast<long>(k);
        if (!(lattice->at(kk, 1, one) == lattice->at(kk, -1, one))) return false;
      }
      return true;
    }
  }
  return false;
}

std::optional<std::vector<ExactRational>> WeightSpec::polynomial_coeffs() const {
  switch (kind) {
    case WeightKind::unit: return std::vector<ExactRational>{1};
    case WeightKind::poly_perturbation: return std::vector<ExactRational>{1, 0, param};
    case WeightKind::polynomial: return poly;
    default: return std::nullopt;
  }
}

WeightSpec load_weight_table(const std::string& json_text, Bits bits) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::bad_input, std::string("weight table is not valid JSON: ") + e.what());
  }
  auto literal = [](const nlohmann::json& v) -> ExactRational {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number()) return parse_rational(v.dump());
    fail(ErrorKind::bad_input, "weight table values must be strings or numbers");
  };
  if (!doc.contains("q") || !doc.contains("values") || !doc["values"].is_array()) {
    fail(ErrorKind::bad_input, "weight table needs \"q\" and a \"values\" array");
  }
  const ExactRational q = literal(doc["q"]);
  const ExactRational alpha = doc.contains("alpha") ? literal(doc["alpha"]) : ExactRational(0);
  std::map<long, std::pair<HPComplex, HPComplex>> rows;
  for (const auto& row : doc["values"]) {
    if (!row.contains("k") || !row["k"].is_number_integer() || !row.contains("plus") || !row.contains("minus")) {
      fail(ErrorKind::bad_input, "weight table rows need integer \"k\", \"plus\" and \"minus\"");
    }
    const long k = row["k"].get<long>();
    HPComplex plus(HPReal(literal(row["plus"]), bits));
    HPComplex minus(HPReal(literal(row["minus"]), bits));
    if (!rows.emplace(k, std::make_pair(plus, minus)).second) {
      fail(ErrorKind::bad_input, "weight table repeats k=" + std::to_string(k));
    }
  }
  std::vector<HPComplex> plus, minus;
  long expect = 0;
  for (auto& [k, v] : rows) {
    if (k != expect++) fail(ErrorKind::bad_input, "weight table must list k = 0..K without gaps");
    plus.push_back(v.first);
    minus.push_back(v.second);
  }
  return WeightSpec::user_table(q, alpha, LatticeFn::from_table(std::move(plus), std::move(minus)));
}

Approx<HPComplex> eval_weight(const WeightSpec& spec, const HPComplex& x, const Tolerance& tol) {
  const Bits b{std::max(x.bits(), tol.eps.bits())};
  const HPReal q(spec.q, b);
  Approx<HPComplex> one{HPComplex(1L, b), {}};
  switch (spec.kind) {
    case WeightKind::unit:
      return one;
    case WeightKind::qhermite1: {
      const HPReal q2 = q * q;
      return pochhammer_inf(q2 * square(x), q2, tol);
    }
    case WeightKind::little_qjacobi: {
      const Tolerance half = tol.halved();
      auto num = pochhammer_inf(q * x, q, half);
      auto den = pochhammer_inf(q * x * HPReal(spec.param, b), q, half);
      Approx<HPComplex> out{num.value / den.value, num.status};
      out.status.merge(den.status);
      return out;
    }
    case WeightKind::poly_perturbation:
    case WeightKind::polynomial:
      return {horner(*spec.polynomial_coeffs(), x), {}};
    case WeightKind::callable:
      return {(*spec.lattice)(x), {}};
    case WeightKind::user_table: {
      if (!x.is_real() || x.re.is_zero()) fail(ErrorKind::table_miss, "table weight read off the lattice");
      const HPReal ax = abs(x.re);
      const long k = std::lround((log(ax) / log(q)).to_double());
      const HPReal qk = pow(q, k);
      if (k < 0 || abs(ax - qk) > qk * pow2(8 - static_cast<long>(b.value), b)) {
        fail(ErrorKind::table_miss, "table weight read off the lattice at x = " + x.re.str(12));
      }
      return {spec.lattice->at(k, x.re.sign(), qk), {}};
    }
  }
  return one;
}

Approx<HPComplex> eval_weight_lattice(const WeightSpec& spec, long k, int sign, const Tolerance& tol) {
  const Bits b{tol.eps.bits()};
  const HPReal qk = pow(HPReal(spec.q, b), k);
  if (spec.kind == WeightKind::user_table) return {spec.lattice->at(k, sign, qk), {}};
  return eval_weight(spec, HPComplex(sign > 0 ? qk : -qk), tol);
}

AdmissibilityReport check_admissibility(const WeightSpec& spec, long n_lo, long n_hi, const Tolerance& tol) {
  if (n_lo < 0 || n_hi < n_lo) fail(ErrorKind::bad_input, "check_admissibility: bad n range");
  long evens = 0;
  for (long n = n_lo; n <= n_hi; ++n) evens += (n % 2 == 0);
  if (evens < 4) fail(ErrorKind::bad_input, "check_admissibility: n range needs at least 4 even values");
  const Bits b{tol.eps.bits()};
  const HPReal q(spec.q, b);
  const bool lattice_only = spec.kind == WeightKind::user_table;

  long k_check = std::max<long>(n_hi, 8);
  if (lattice_only) k_check = static_cast<long>(spec.lattice->table_size()) - 1;
  for (long k = 0; k <= k_check; ++k) {
    for (int s : {1, -1}) {
      if (eval_weight_lattice(spec, k, s, tol).checked("weight").is_zero()) {
        fail(ErrorKind::inadmissible, spec.id() + ": w vanishes at the lattice point " + (s > 0 ? "" : "-") +
                                          "q^" + std::to_string(k));
      }
    }
  }

  AdmissibilityReport rep;
  rep.weight = spec.id();
  rep.n_lo = n_lo;
  rep.n_hi = n_hi;
  const HPReal sqrt_q = sqrt(q);
  std::vector<long> fit_n;
  std::vector<HPReal> fit_d;
  for (long n = n_lo; n <= n_hi; ++n) {
    if (lattice_only && n % 2 != 0) continue;
    HPReal d(Bits{b});
    for (int s : {1, -1}) {
      HPComplex w = lattice_only ? eval_weight_lattice(spec, n / 2, s, tol).checked("weight")
                                 : eval_weight(spec, HPComplex(s * pow(sqrt_q, n)), tol).checked("weight");
      d = max(d, abs(1L - w));
    }
    rep.n.push_back(n);
    rep.deviation.push_back(d);
    if (d > 0) {
      fit_n.push_back(n);
      fit_d.push_back(d);
    }
  }

  if (lattice_only) {
    rep.w0 = spec.lattice->at(k_check, 1, pow(q, k_check)).re;
  } else if (spec.kind == WeightKind::callable) {
    rep.w0 = eval_weight(spec, HPComplex(pow(q, 4 * n_hi + 8)), tol).checked("weight").re;
  } else {
    rep.w0 = eval_weight(spec, HPComplex(0L, b), tol).checked("weight").re;
  }

  if (fit_n.size() < 2) {
    rep.fitted_rate = 0.0;
    rep.c_estimate = 0.0;
    rep.is_strict = true;
    rep.cls = AdmissibilityClass::strict;
    return rep;
  }
  const GeometricFit fit = fit_geometric(fit_n, fit_d);
  rep.fitted_rate = fit.rate;
  rep.c_estimate = fit.constant;
  rep.fit_residual = fit.residual;
  if (!(fit.rate < 0.98) || !(fit_d.back() < fit_d.front())) {
    fail(ErrorKind::inadmissible, spec.id() + ": |1 - w(±q^{n/2})| does not decay (fitted rate " +
                                      std::to_string(fit.rate) + ", w(0) = " + rep.w0.str(12) + ")");
  }
  rep.is_strict = fit.rate <= spec.q.get_d() * (1.0 + admissibility_rate_tol);
  rep.cls = rep.is_strict ? AdmissibilityClass::strict : AdmissibilityClass::relaxed;
  return rep;
}

namespace {

ExactRational rational_sqrt(const ExactRational& q) {
  ExactRational rho;
  if (!rational_power(q, ExactRational(1, 2), rho)) {
    fail(ErrorKind::bad_input, "folding needs q to be the square of a rational, got " + to_string(q));
  }
  return rho;
}

}  // namespace

WeightSpec fold_one_sided(const LatticeFn& w_one_sided, const ExactRational& q, const std::string& label) {
  check_q(q);
  const ExactRational rho = rational_sqrt(q);
  if (w_one_sided.is_table()) {
    const Bits b{64};
    const HPReal one(1L, b);
    std::vector<HPComplex> plus, minus;
    for (std::size_t k = 0; k < w_one_sided.table_size(); ++k) {
      plus.push_back(w_one_sided.at(static_cast<long>(k), 1, one));
      minus.push_back(plus.back());
    }
    return WeightSpec::user_table(rho, 1, LatticeFn::from_table(std::move(plus), std::move(minus)), label);
  }
  LatticeFn inner = w_one_sided;
  return WeightSpec::callable(rho, 1, [inner](const HPComplex& z) { return inner(square(z)); }, label);
}

WeightSpec fold_one_sided(const std::vector<ExactRational>& w_poly, const ExactRational& q) {
  check_q(q);
  const ExactRational rho = rational_sqrt(q);
  std::vector<ExactRational> folded(2 * w_poly.size() - 1, ExactRational(0));
  for (std::size_t i = 0; i < w_poly.size(); ++i) folded[2 * i] = w_poly[i];
  return WeightSpec::polynomial(rho, 1, std::move(folded), "folded");
}

}  // namespace qortho
