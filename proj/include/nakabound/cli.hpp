#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace nakabound::cli {

enum ExitCode { kOk = 0, kUsage = 1, kIo = 2 };

/// Runs the command line `args` (program name excluded), writing results to
/// `out` and diagnostics to `err`. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "0.1", "1e-3" or a fraction such as "1/600". Throws std::invalid_argument.
double parse_rate(std::string_view text);

/// "6" or an inclusive range "1..12".
std::vector<int> parse_k_values(std::string_view text);

/// "0.9" or "from..to:step", e.g. "0.52..0.99:0.01".
std::vector<double> parse_alpha_values(std::string_view text);

/// Shortest text that reads back as the same double.
std::string format_exact(double v);

/// `precision` significant digits.
std::string format_probability(double v, int precision);

struct Cell {
    enum class Kind { Null, Number, Bool, Text };
    Kind kind = Kind::Null;
    std::string text;

    static Cell null() { return {}; }
    static Cell number(std::string t) { return {Kind::Number, std::move(t)}; }
    static Cell boolean(bool b) { return {Kind::Bool, b ? "true" : "false"}; }
    static Cell str(std::string t) { return {Kind::Text, std::move(t)}; }
    bool operator==(const Cell&) const = default;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    bool operator==(const Table&) const = default;
};

/// Header line, then one line per row; nulls are empty fields.
std::string to_csv(const Table& t);

/// Inverse of to_csv. Cell kinds are inferred from the text.
Table parse_csv(std::string_view text);

/// Flat array of objects with keys in column order; nulls as JSON null.
std::string to_json(const Table& t);

}  // namespace nakabound::cli
