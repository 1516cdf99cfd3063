#include "korsum/csv.hpp"

#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace korsum {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_error_table_csv(std::ostream& out, const ErrorTable& table) {
    out << "parameter,function,sup_error,verdict\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < table.functions.size(); ++i) {
            const char* verdict =
                row.failed ? "failed" : verdict_name(table.verdicts[i]);
            out << format_double(row.parameter) << ',' << table.functions[i] << ','
                << format_double(row.errors[i]) << ',' << verdict << '\n';
        }
    }
}

std::string error_table_to_csv(const ErrorTable& table) {
    std::ostringstream out;
    write_error_table_csv(out, table);
    return out.str();
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) {
        throw std::runtime_error("csv: bad numeric field '" + s + "'");
    }
    return v;
}

} // namespace

ErrorTable parse_error_table_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || split_csv_line(line) !=
            std::vector<std::string>{"parameter", "function", "sup_error", "verdict"}) {
        throw std::runtime_error("csv: missing or malformed header");
    }

    ErrorTable table;
    std::map<std::string, std::size_t> index;
    std::map<std::string, std::string> verdicts;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 4) {
            throw std::runtime_error("csv: expected 4 fields, got '" + line + "'");
        }
        const double parameter = parse_double(fields[0]);
        const std::string& fname = fields[1];
        const double error = parse_double(fields[2]);
        const std::string& verdict = fields[3];

        if (index.find(fname) == index.end()) {
            index[fname] = table.functions.size();
            table.functions.push_back(fname);
        }
        const std::size_t fidx = index[fname];
        if (fidx == 0) {
            table.rows.push_back({parameter, {}, false, ""});
        }
        if (table.rows.empty() || table.rows.back().errors.size() != fidx ||
            table.rows.back().parameter != parameter) {
            throw std::runtime_error("csv: rows are not grouped by parameter");
        }
        auto& row = table.rows.back();
        row.errors.push_back(error);
        if (verdict == "failed") {
            row.failed = true;
        } else {
            verdicts[fname] = verdict;
        }
    }
    for (const auto& fname : table.functions) {
        const auto it = verdicts.find(fname);
        table.verdicts.push_back(it != verdicts.end() && it->second == "converging"
                                     ? Verdict::converging
                                     : Verdict::not_converging);
    }
    return table;
}

ErrorTable error_table_from_csv(const std::string& text) {
    std::istringstream in(text);
    return parse_error_table_csv(in);
}

void write_rate_report_csv(std::ostream& out, const RateReport& report) {
    out << "parameter,delta,modulus,bound,error,ratio_to_candidate\n";
    for (std::size_t i = 0; i < report.parameters.size(); ++i) {
        out << format_double(report.parameters[i]) << ',' << format_double(report.delta_values[i])
            << ',' << format_double(report.modulus_values[i]) << ','
            << format_double(report.composite_bound[i]) << ','
            << format_double(report.empirical_error[i]) << ','
            << format_double(report.ratio_error[i]) << '\n';
    }
}

std::string rate_report_to_csv(const RateReport& report) {
    std::ostringstream out;
    write_rate_report_csv(out, report);
    return out.str();
}

} // namespace korsum
