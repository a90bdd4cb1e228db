#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace leafangle::csv {

/// Header plus rows. Parsing follows RFC 4180 quoting; rows must have as many
/// fields as the header.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column position by name, or throws SchemaError.
    std::size_t column(std::string_view name) const;
};

Table parse(std::string_view text);
Table read_file(const std::filesystem::path& path);

/// Quotes a field only when it contains a comma, quote, or newline.
std::string escape(std::string_view field);

std::string write(const Table& table);

}  // namespace leafangle::csv
