#pragma once

#include <iosfwd>
#include <string>

#include "korsum/korovkin.hpp"

namespace korsum {

/// %.17g: enough digits for a lossless double round-trip.
std::string format_double(double v);

/// Schema: header `parameter,function,sup_error,verdict`, one row per
/// (parameter, function) in schedule order.  Failed rows carry nan and the
/// verdict `failed`.  Bit-stable given identical inputs.
void write_error_table_csv(std::ostream& out, const ErrorTable& table);
std::string error_table_to_csv(const ErrorTable& table);

/// Inverse of write_error_table_csv (verdicts are re-read, not recomputed).
ErrorTable parse_error_table_csv(std::istream& in);
ErrorTable error_table_from_csv(const std::string& text);

/// Header `parameter,delta,modulus,bound,error,ratio_to_candidate`.
void write_rate_report_csv(std::ostream& out, const RateReport& report);
std::string rate_report_to_csv(const RateReport& report);

} // namespace korsum
