#include "dfb/report.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

namespace dfb {

std::optional<ReportFormat> parse_report_format(std::string_view name)
{
    if (name == "table") return ReportFormat::Table;
    if (name == "csv") return ReportFormat::Csv;
    if (name == "json") return ReportFormat::Json;
    return std::nullopt;
}

Cell Cell::integer(long long v) { return {Kind::Number, fmt::format("{}", v)}; }

Cell Cell::fixed(double v, int decimals)
{
    auto s = fmt::format("{:.{}f}", v, decimals);
    if (s.starts_with('-') && s.find_first_not_of("-0.") == std::string::npos) {
        s.erase(0, 1); // no "-0.0"
    }
    return {Kind::Number, std::move(s)};
}

namespace {

std::string table_text(const Cell& c) { return c.kind == Cell::Kind::Null ? "-" : c.text; }

std::string csv_text(const Cell& c)
{
    if (c.kind == Cell::Kind::Null) {
        return {};
    }
    if (c.kind == Cell::Kind::Text &&
        c.text.find_first_of(",\"\n") != std::string::npos) {
        std::string q = "\"";
        for (char ch : c.text) {
            if (ch == '"') q += '"';
            q += ch;
        }
        return q + "\"";
    }
    return c.text;
}

nlohmann::json json_value(const Cell& c)
{
    switch (c.kind) {
    case Cell::Kind::Null: return nullptr;
    case Cell::Kind::Bool: return c.text == "true";
    case Cell::Kind::Number:
        if (c.text.find_first_of(".eE") == std::string::npos) {
            return std::stoll(c.text);
        }
        return std::stod(c.text);
    case Cell::Kind::Text: return c.text;
    }
    return nullptr;
}

void render_table(const Report& report, std::ostream& out)
{
    bool first = true;
    for (const auto& t : report.tables) {
        if (!first) {
            out << '\n';
        }
        first = false;
        out << "== " << t.name << " ==\n";
        std::vector<std::size_t> width(t.columns.size());
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            width[c] = t.columns[c].size();
            for (const auto& row : t.rows) {
                width[c] = std::max(width[c], table_text(row[c]).size());
            }
        }
        auto line = [&](auto cell_text) {
            std::string s;
            for (std::size_t c = 0; c < t.columns.size(); ++c) {
                s += fmt::format("{:<{}}", cell_text(c), width[c] + (c + 1 < t.columns.size() ? 2 : 0));
            }
            while (!s.empty() && s.back() == ' ') s.pop_back();
            out << s << '\n';
        };
        line([&](std::size_t c) { return t.columns[c]; });
        for (const auto& row : t.rows) {
            line([&](std::size_t c) { return table_text(row[c]); });
        }
    }
    if (!report.summary.empty()) {
        if (!report.tables.empty()) {
            out << '\n';
        }
        for (const auto& [key, cell] : report.summary) {
            out << key << ": " << table_text(cell) << '\n';
        }
    }
}

void render_csv(const Report& report, std::ostream& out)
{
    const bool titled = report.tables.size() > 1;
    bool first = true;
    for (const auto& t : report.tables) {
        if (!first) {
            out << '\n';
        }
        first = false;
        if (titled) {
            out << "# " << t.name << '\n';
        }
        for (std::size_t c = 0; c < t.columns.size(); ++c) {
            out << (c ? "," : "") << t.columns[c];
        }
        out << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                out << (c ? "," : "") << csv_text(row[c]);
            }
            out << '\n';
        }
    }
    for (const auto& [key, cell] : report.summary) {
        out << "# " << key << '=' << csv_text(cell) << '\n';
    }
}

void render_json(const Report& report, std::ostream& out)
{
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    for (const auto& t : report.tables) {
        auto rows = nlohmann::ordered_json::array();
        for (const auto& row : t.rows) {
            nlohmann::ordered_json obj = nlohmann::ordered_json::object();
            for (std::size_t c = 0; c < t.columns.size(); ++c) {
                obj[t.columns[c]] = json_value(row[c]);
            }
            rows.push_back(std::move(obj));
        }
        doc[t.name] = std::move(rows);
    }
    if (!report.summary.empty()) {
        nlohmann::ordered_json s = nlohmann::ordered_json::object();
        for (const auto& [key, cell] : report.summary) {
            s[key] = json_value(cell);
        }
        doc["summary"] = std::move(s);
    }
    out << doc.dump(2) << '\n';
}

} // namespace

void render(const Report& report, ReportFormat format, std::ostream& out)
{
    switch (format) {
    case ReportFormat::Table: render_table(report, out); break;
    case ReportFormat::Csv: render_csv(report, out); break;
    case ReportFormat::Json: render_json(report, out); break;
    }
}

} // namespace dfb
