#pragma once

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "matrix.hpp"

namespace rowloss {

struct IngestConfig {
    char delimiter = ',';
    std::vector<std::string> missing_tokens{"", "NA"};
    std::vector<std::string> drop_columns;  // glob patterns ('*' and '?') against column names
    bool drop_fully_missing = false;
    bool has_header = true;

    void validate() const {
        if (missing_tokens.empty())
            throw std::invalid_argument("IngestConfig: missing_tokens must be non-empty");
        if (delimiter == '"')
            throw std::invalid_argument("IngestConfig: delimiter may not be the quote character");
    }
};

struct IngestReport {
    std::vector<std::string> dropped_by_pattern;
    std::vector<std::string> dropped_fully_missing;
    std::vector<std::string> renamed;  // "old -> new" for de-duplicated header names
};

struct IngestResult {
    MissingnessMatrix matrix;
    IngestReport report;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}

inline bool glob_match(std::string_view pattern, std::string_view name) {
    std::size_t p = 0, n = 0;
    std::size_t star = std::string_view::npos, mark = 0;
    while (n < name.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
            ++p;
            ++n;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = n;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            n = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

// Record-level CSV split honoring double quotes: delimiters and newlines
// inside quotes are literal, "" is an escaped quote. CRLF and a missing final
// newline are tolerated.
inline std::vector<std::vector<std::string>> parse_records(std::string_view text, char delim) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;

    const auto push_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    const auto push_record = [&] {
        push_field();
        records.push_back(std::move(record));
        record.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty() && !field_was_quoted) {
            in_quotes = true;
            field_was_quoted = true;
        } else if (c == delim) {
            push_field();
        } else if (c == '\n') {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            if (record.empty() && field.empty() && !field_was_quoted) continue;  // blank line
            push_record();
        } else {
            field += c;
        }
    }
    if (in_quotes) throw std::runtime_error("csv parse error: unterminated quoted field");
    if (!field.empty() || !record.empty() || field_was_quoted) push_record();
    return records;
}

}  // namespace detail

// Builds the missingness matrix of already-parsed records: a cell is missing
// iff its trimmed token is one of cfg.missing_tokens. Values are otherwise
// ignored; only missingness is retained.
inline IngestResult ingest_records(const std::vector<std::vector<std::string>>& records,
                                   const IngestConfig& cfg) {
    cfg.validate();
    if (records.empty()) throw std::invalid_argument("ingest: file holds no records");

    const std::size_t width = records.front().size();
    for (std::size_t r = 0; r < records.size(); ++r)
        if (records[r].size() != width)
            throw std::runtime_error("csv parse error: row " + std::to_string(r + 1) + " has " +
                                     std::to_string(records[r].size()) + " fields, expected " +
                                     std::to_string(width));

    IngestReport report;
    std::vector<std::string> names;
    std::size_t first_data_row = 0;
    if (cfg.has_header) {
        if (records.size() < 2) throw std::invalid_argument("ingest: no data rows after the header");
        first_data_row = 1;
        names.reserve(width);
        std::unordered_set<std::string> used;
        for (const auto& raw : records.front()) {
            std::string name(detail::trim(raw));
            if (used.contains(name)) {
                std::string base = name;
                int suffix = 2;
                while (used.contains(name)) name = base + "_" + std::to_string(suffix++);
                report.renamed.push_back(base + " -> " + name);
            }
            used.insert(name);
            names.push_back(name);
        }
    } else {
        names.reserve(width);
        for (std::size_t j = 0; j < width; ++j) names.push_back("c" + std::to_string(j + 1));
    }
    const std::size_t n_rows = records.size() - first_data_row;
    if (n_rows == 0) throw std::invalid_argument("ingest: no data rows");

    const std::unordered_set<std::string> missing_set(cfg.missing_tokens.begin(),
                                                      cfg.missing_tokens.end());

    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < width; ++j) {
        bool dropped = false;
        for (const auto& pattern : cfg.drop_columns) {
            if (detail::glob_match(pattern, names[j])) {
                report.dropped_by_pattern.push_back(names[j]);
                dropped = true;
                break;
            }
        }
        if (!dropped) keep.push_back(j);
    }
    if (keep.empty()) throw std::invalid_argument("ingest: no columns remaining after drops");

    // missingness per kept column, then optionally drop the fully missing ones
    std::vector<std::vector<bool>> col_missing(keep.size(), std::vector<bool>(n_rows, false));
    std::vector<std::size_t> miss_count(keep.size(), 0);
    for (std::size_t i = 0; i < n_rows; ++i) {
        const auto& row = records[first_data_row + i];
        for (std::size_t c = 0; c < keep.size(); ++c) {
            const std::string token(detail::trim(row[keep[c]]));
            if (missing_set.contains(token)) {
                col_missing[c][i] = true;
                ++miss_count[c];
            }
        }
    }

    std::vector<std::size_t> final_cols;
    for (std::size_t c = 0; c < keep.size(); ++c) {
        if (cfg.drop_fully_missing && miss_count[c] == n_rows) {
            report.dropped_fully_missing.push_back(names[keep[c]]);
            continue;
        }
        final_cols.push_back(c);
    }
    if (final_cols.empty())
        throw std::invalid_argument("ingest: no columns remaining after drops");

    MissingnessMatrixBuilder b(n_rows, final_cols.size());
    std::vector<std::string> final_names;
    final_names.reserve(final_cols.size());
    for (std::size_t out = 0; out < final_cols.size(); ++out) {
        const std::size_t c = final_cols[out];
        final_names.push_back(names[keep[c]]);
        for (std::size_t i = 0; i < n_rows; ++i)
            if (col_missing[c][i]) b.set_missing(i, out);
    }
    b.col_names(std::move(final_names));
    return IngestResult{b.build(), std::move(report)};
}

inline IngestResult ingest_text(std::string_view text, const IngestConfig& cfg = {}) {
    cfg.validate();
    return ingest_records(detail::parse_records(text, cfg.delimiter), cfg);
}

inline IngestResult ingest(const std::filesystem::path& path, const IngestConfig& cfg = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("ingest: cannot open '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return ingest_text(buffer.str(), cfg);
}

// ---- mask sidecar format ----------------------------------------------
//
// Line 1: "<n_rows> <n_cols>", then n_cols column-name lines, then n_rows hex
// lines of ceil(n_cols/4) digits each. Hex digit d covers columns 4d..4d+3
// with column 4d in the digit's most significant bit; pad bits must be zero.
// The round-trip is bit-exact.

inline void write_mask(std::ostream& out, const MissingnessMatrix& m) {
    out << m.n_rows() << ' ' << m.n_cols() << '\n';
    for (const auto& name : m.col_names()) out << name << '\n';
    const std::size_t digits = (m.n_cols() + 3) / 4;
    std::string line(digits, '0');
    for (std::size_t i = 0; i < m.n_rows(); ++i) {
        for (std::size_t d = 0; d < digits; ++d) {
            unsigned nibble = 0;
            for (unsigned b = 0; b < 4; ++b) {
                const std::size_t j = d * 4 + b;
                if (j < m.n_cols() && m.is_missing(i, j)) nibble |= 8u >> b;
            }
            line[d] = "0123456789ABCDEF"[nibble];
        }
        out << line << '\n';
    }
}

inline MissingnessMatrix read_mask(std::istream& in) {
    const auto fail = [](const std::string& what) -> std::runtime_error {
        return std::runtime_error("mask parse error: " + what);
    };

    std::string line;
    if (!std::getline(in, line)) throw fail("missing header line");
    std::size_t n_rows = 0, n_cols = 0;
    {
        std::istringstream header(line);
        if (!(header >> n_rows >> n_cols)) throw fail("header must be '<n_rows> <n_cols>'");
        std::string extra;
        if (header >> extra) throw fail("trailing content in header");
    }
    if (n_rows == 0 || n_cols == 0) throw fail("dimensions must be >= 1");

    std::vector<std::string> names;
    names.reserve(n_cols);
    for (std::size_t j = 0; j < n_cols; ++j) {
        if (!std::getline(in, line)) throw fail("expected " + std::to_string(n_cols) + " column names");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        names.push_back(line);
    }

    MissingnessMatrixBuilder b(n_rows, n_cols);
    b.col_names(std::move(names));
    const std::size_t digits = (n_cols + 3) / 4;
    for (std::size_t i = 0; i < n_rows; ++i) {
        if (!std::getline(in, line)) throw fail("expected " + std::to_string(n_rows) + " bitmask rows");
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.size() != digits)
            throw fail("row " + std::to_string(i + 1) + " has " + std::to_string(line.size()) +
                       " hex digits, expected " + std::to_string(digits));
        for (std::size_t d = 0; d < digits; ++d) {
            const char c = line[d];
            unsigned nibble = 0;
            if (c >= '0' && c <= '9')
                nibble = static_cast<unsigned>(c - '0');
            else if (c >= 'A' && c <= 'F')
                nibble = static_cast<unsigned>(c - 'A') + 10;
            else if (c >= 'a' && c <= 'f')
                nibble = static_cast<unsigned>(c - 'a') + 10;
            else
                throw fail("row " + std::to_string(i + 1) + " holds a non-hex character");
            for (unsigned bit = 0; bit < 4; ++bit) {
                if (!(nibble & (8u >> bit))) continue;
                const std::size_t j = d * 4 + bit;
                if (j >= n_cols) throw fail("row " + std::to_string(i + 1) + " has nonzero pad bits");
                b.set_missing(i, j);
            }
        }
    }
    while (std::getline(in, line))
        if (!detail::trim(line).empty()) throw fail("unexpected trailing content");
    return b.build();
}

inline void write_mask_file(const std::filesystem::path& path, const MissingnessMatrix& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_mask_file: cannot open '" + path.string() + "'");
    write_mask(out, m);
    if (!out) throw std::runtime_error("write_mask_file: write failed for '" + path.string() + "'");
}

inline MissingnessMatrix read_mask_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_mask_file: cannot open '" + path.string() + "'");
    return read_mask(in);
}

}  // namespace rowloss
