#include "leafangle/csv.hpp"

#include <fstream>
#include <sstream>

#include "leafangle/errors.hpp"

namespace leafangle::csv {

std::size_t Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw SchemaError(std::string(name), "table has no '" + std::string(name) + "' column");
}

Table parse(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> row;
    std::string fieldbuf;
    bool in_quotes = false;
    bool row_has_content = false;

    auto end_field = [&] {
        row.push_back(std::move(fieldbuf));
        fieldbuf.clear();
    };
    auto end_row = [&] {
        end_field();
        if (row_has_content || row.size() > 1 || !row.front().empty()) records.push_back(std::move(row));
        row.clear();
        row_has_content = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    fieldbuf += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                fieldbuf += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                row_has_content = true;
                break;
            case ',':
                end_field();
                break;
            case '\r':
                break;
            case '\n':
                end_row();
                break;
            default:
                fieldbuf += c;
        }
    }
    if (in_quotes) throw ParseError("unterminated quoted field");
    if (!fieldbuf.empty() || !row.empty() || row_has_content) end_row();

    if (records.empty()) throw ParseError("table has no header row");
    Table table;
    table.header = std::move(records.front());
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != table.header.size()) {
            throw ParseError("row " + std::to_string(r) + " has " + std::to_string(records[r].size()) +
                             " fields, header has " + std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(records[r]));
    }
    return table;
}

Table read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read table " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string write(const Table& table) {
    std::string out;
    auto line = [&](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            out += escape(fields[i]);
        }
        out += '\n';
    };
    line(table.header);
    for (const auto& r : table.rows) line(r);
    return out;
}

}  // namespace leafangle::csv
