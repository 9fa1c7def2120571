#include "qortho/serialize.hpp"

#include <cstdio>
#include <sstream>

namespace qortho {

std::string value_string(const ExactRational& x) { return to_string(x); }
std::string value_string(const HPReal& x) { return x.str(0); }

std::string rate_string(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Json to_json(const TruncationStatus& status, const std::string& stage) {
  Json j;
  j["stage"] = stage;
  j["terms"] = status.terms;
  j["tail_bound"] = status.tail_bound.str(6);
  j["converged"] = status.converged;
  return j;
}

template <class S>
Json to_json(const RecurrenceTable<S>& rec) {
  Json j;
  j["q"] = to_string(rec.q);
  j["alpha"] = to_string(rec.alpha);
  j["weight"] = rec.weight;
  j["n_max"] = rec.n_max;
  j["mode"] = rec.exact ? "exact" : "multiprecision";
  Json a = Json::array(), b = Json::array(), g = Json::array();
  a.push_back(nullptr);
  for (long n = 1; n <= rec.n_max; ++n) a.push_back(value_string(rec.a[static_cast<std::size_t>(n)]));
  for (long n = 0; n < rec.n_max; ++n) b.push_back(value_string(rec.b[static_cast<std::size_t>(n)]));
  for (long n = 0; n <= rec.n_max; ++n) g.push_back(value_string(rec.gamma[static_cast<std::size_t>(n)]));
  j["a"] = std::move(a);
  j["b"] = std::move(b);
  j["gamma"] = std::move(g);
  return j;
}

template <class S>
std::string to_csv(const RecurrenceTable<S>& rec) {
  std::ostringstream out;
  out << "n,a_n,b_n,gamma_n\n";
  for (long n = 0; n <= rec.n_max; ++n) {
    const auto i = static_cast<std::size_t>(n);
    out << n << ',';
    if (n >= 1) out << value_string(rec.a[i]);
    out << ',';
    if (n < rec.n_max) out << value_string(rec.b[i]);
    out << ',' << value_string(rec.gamma[i]) << '\n';
  }
  return out.str();
}

template Json to_json(const RecurrenceTable<ExactRational>&);
template Json to_json(const RecurrenceTable<HPReal>&);
template std::string to_csv(const RecurrenceTable<ExactRational>&);
template std::string to_csv(const RecurrenceTable<HPReal>&);

Json to_json(const SeriesSolution& s) {
  Json j;
  j["label"] = to_string(s.label);
  j["q"] = to_string(s.q);
  j["alpha"] = to_string(s.alpha);
  j["j_max"] = s.j_max;
  j["scale"] = s.scale.str(0);
  j["seed"] = s.seed_note;
  Json coeffs = Json::array();
  for (std::size_t i = 0; i < s.comp1.size(); ++i)
    coeffs.push_back({{"component", 1}, {"power", s.power1(i)}, {"value", s.comp1[i].str(0)}});
  for (std::size_t i = 0; i < s.comp2.size(); ++i)
    coeffs.push_back({{"component", 2}, {"power", s.power2(i)}, {"value", s.comp2[i].str(0)}});
  j["coeffs"] = std::move(coeffs);
  return j;
}

std::string to_csv(const SeriesSolution& s) {
  std::ostringstream out;
  out << "label,component,power,value\n";
  for (std::size_t i = 0; i < s.comp1.size(); ++i)
    out << to_string(s.label) << ",1," << s.power1(i) << ',' << s.comp1[i].str(0) << '\n';
  for (std::size_t i = 0; i < s.comp2.size(); ++i)
    out << to_string(s.label) << ",2," << s.power2(i) << ',' << s.comp2[i].str(0) << '\n';
  return out.str();
}

Json to_json(const C0Estimate& c0) {
  return {{"value", c0.value.str(0)}, {"gap", c0.gap.str(6)}, {"r", c0.r}};
}

Json to_json(const AsymptoticReport& r, bool with_timing) {
  Json j;
  j["claim"] = r.claim;
  j["q"] = to_string(r.q);
  j["alpha"] = to_string(r.alpha);
  j["weight"] = r.weight;
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"n", row.n}, {"error", row.error.str(20)}, {"ms", with_timing ? row.ms : 0.0}});
  j["rows"] = std::move(rows);
  j["fitted_rate"] = rate_string(r.fitted_rate);
  j["rate_per_even_step"] = rate_string(r.rate_per_even_step());
  j["fit_residual"] = rate_string(r.fit_residual);
  j["fit_points"] = r.fit_points;
  j["passed"] = r.passed;
  Json details = Json::object();
  for (const auto& [k, v] : r.details) details[k] = v;
  j["details"] = std::move(details);
  return j;
}

std::string to_csv(const AsymptoticReport& r, bool with_timing, bool header) {
  std::ostringstream out;
  if (header) out << "claim,n,error,ms\n";
  for (const auto& row : r.rows)
    out << r.claim << ',' << row.n << ',' << row.error.str(20) << ',' << (with_timing ? row.ms : 0.0) << '\n';
  return out.str();
}

Json to_json(const AdmissibilityReport& r) {
  Json j;
  j["weight"] = r.weight;
  j["class"] = r.is_strict ? "strict" : "relaxed";
  j["is_strict"] = r.is_strict;
  j["fitted_rate"] = rate_string(r.fitted_rate);
  j["c_estimate"] = rate_string(r.c_estimate);
  j["fit_residual"] = rate_string(r.fit_residual);
  j["n_range"] = {r.n_lo, r.n_hi};
  j["w0"] = r.w0.str(20);
  Json rows = Json::array();
  for (std::size_t i = 0; i < r.n.size(); ++i) rows.push_back({{"n", r.n[i]}, {"deviation", r.deviation[i].str(20)}});
  j["rows"] = std::move(rows);
  return j;
}

std::string to_csv(const AdmissibilityReport& r) {
  std::ostringstream out;
  out << "n,deviation\n";
  for (std::size_t i = 0; i < r.n.size(); ++i) out << r.n[i] << ',' << r.deviation[i].str(20) << '\n';
  return out.str();
}

std::string csv_preamble(const Json& meta) {
  std::ostringstream out;
  for (const auto& [k, v] : meta.items()) out << "# " << k << '=' << v.dump() << '\n';
  return out.str();
}

}  // namespace qortho
