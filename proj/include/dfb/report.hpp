#pragma once

// Format-neutral report model. Numbers are formatted once, when the cell is
// built, so table, CSV and JSON renderings carry identical values.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dfb {

enum class ReportFormat { Table, Csv, Json };

std::optional<ReportFormat> parse_report_format(std::string_view name);

struct Cell {
    enum class Kind { Text, Number, Bool, Null };

    Kind kind = Kind::Null;
    std::string text;

    static Cell str(std::string s) { return {Kind::Text, std::move(s)}; }
    static Cell null() { return {Kind::Null, {}}; }
    static Cell boolean(bool b) { return {Kind::Bool, b ? "true" : "false"}; }
    static Cell integer(long long v);
    static Cell fixed(double v, int decimals);

    // Unit conventions: ms 1 d.p., benefits 3 d.p., seconds 3 d.p.
    static Cell ms(double v) { return fixed(v, 1); }
    static Cell mb(double v) { return fixed(v, 1); }
    static Cell seconds(double v) { return fixed(v, 3); }
    static Cell benefit(double v) { return fixed(v, 3); }
};

struct ReportTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Report {
    std::vector<ReportTable> tables;
    std::vector<std::pair<std::string, Cell>> summary;
};

/// Table: aligned columns per table, then `key: value` summary lines.
/// Csv:   a lone table prints bare; several tables each get a `# name` line.
///        Summary follows as `# key=value` comment lines.
/// Json:  {"<table>": [{col: value}...], ..., "summary": {key: value}}.
void render(const Report& report, ReportFormat format, std::ostream& out);

} // namespace dfb
