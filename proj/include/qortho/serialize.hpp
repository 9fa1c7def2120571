#pragma once

#include <string>

#include <json.hpp>

#include "qortho/verify.hpp"

namespace qortho {

using Json = nlohmann::ordered_json;

std::string value_string(const ExactRational& x);
std::string value_string(const HPReal& x);
std::string rate_string(double x);

Json to_json(const TruncationStatus& status, const std::string& stage);

template <class S>
Json to_json(const RecurrenceTable<S>& rec);
template <class S>
std::string to_csv(const RecurrenceTable<S>& rec);

Json to_json(const SeriesSolution& s);
std::string to_csv(const SeriesSolution& s);
Json to_json(const C0Estimate& c0);

// Row timings are written as 0 unless with_timing is set, so repeated runs stay byte-identical.
Json to_json(const AsymptoticReport& r, bool with_timing);
std::string to_csv(const AsymptoticReport& r, bool with_timing, bool header = true);

Json to_json(const AdmissibilityReport& r);
std::string to_csv(const AdmissibilityReport& r);

// "# key=value" lines prepended to CSV artifacts.
std::string csv_preamble(const Json& meta);

}  // namespace qortho
