#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "bitvec.hpp"

namespace rowloss {

// Row-major packed missingness indicators: bit = 1 means the cell is missing,
// so a row survives listwise deletion iff all of its words are zero. Rows are
// word-aligned; padding bits are always zero. Immutable once built, safe for
// concurrent reads.
class MissingnessMatrix {
public:
    std::size_t n_rows() const { return rows_; }
    std::size_t n_cols() const { return cols_; }
    std::size_t words_per_row() const { return wpr_; }

    bool is_missing(std::size_t row, std::size_t col) const {
        check(row, col);
        return (bits_[row * wpr_ + (col >> 6)] >> (col & 63)) & 1u;
    }

    std::span<const std::uint64_t> row_words(std::size_t row) const {
        return {bits_.data() + row * wpr_, wpr_};
    }

    const std::vector<std::string>& col_names() const { return names_; }

    std::size_t missing_count() const {
        std::size_t c = 0;
        for (auto w : bits_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool operator==(const MissingnessMatrix&) const = default;

private:
    friend class MissingnessMatrixBuilder;
    MissingnessMatrix() = default;

    void check(std::size_t row, std::size_t col) const {
        if (row >= rows_ || col >= cols_)
            throw std::out_of_range("MissingnessMatrix: cell index out of range");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t wpr_ = 0;
    std::vector<std::uint64_t> bits_;
    std::vector<std::string> names_;
};

// One-shot builder; the only way to create a matrix. Degenerate shapes are
// rejected here because every downstream formula assumes n, k >= 1.
class MissingnessMatrixBuilder {
public:
    MissingnessMatrixBuilder(std::size_t n_rows, std::size_t n_cols) {
        if (n_rows == 0 || n_cols == 0)
            throw std::invalid_argument("MissingnessMatrix: need at least one row and one column");
        m_.rows_ = n_rows;
        m_.cols_ = n_cols;
        m_.wpr_ = (n_cols + 63) / 64;
        m_.bits_.assign(n_rows * m_.wpr_, 0);
    }

    MissingnessMatrixBuilder& set_missing(std::size_t row, std::size_t col, bool missing = true) {
        ensure_usable();
        m_.check(row, col);
        std::uint64_t& w = m_.bits_[row * m_.wpr_ + (col >> 6)];
        if (missing)
            w |= std::uint64_t{1} << (col & 63);
        else
            w &= ~(std::uint64_t{1} << (col & 63));
        return *this;
    }

    MissingnessMatrixBuilder& col_names(std::vector<std::string> names) {
        ensure_usable();
        m_.names_ = std::move(names);
        return *this;
    }

    MissingnessMatrix build() {
        ensure_usable();
        built_ = true;
        if (m_.names_.empty()) {
            m_.names_.reserve(m_.cols_);
            for (std::size_t j = 0; j < m_.cols_; ++j) m_.names_.push_back("c" + std::to_string(j + 1));
        }
        if (m_.names_.size() != m_.cols_)
            throw std::invalid_argument("MissingnessMatrix: col_names length must equal n_cols");
        std::unordered_set<std::string> seen;
        for (const auto& name : m_.names_)
            if (!seen.insert(name).second)
                throw std::invalid_argument("MissingnessMatrix: duplicate column name '" + name + "'");
        return std::move(m_);
    }

private:
    void ensure_usable() const {
        if (built_) throw std::logic_error("MissingnessMatrixBuilder: already built");
    }

    MissingnessMatrix m_;
    bool built_ = false;
};

inline MissingnessMatrix matrix_from_grid(const std::vector<std::vector<bool>>& missing,
                                          std::vector<std::string> names = {}) {
    if (missing.empty() || missing.front().empty())
        throw std::invalid_argument("matrix_from_grid: need at least one row and one column");
    MissingnessMatrixBuilder b(missing.size(), missing.front().size());
    for (std::size_t i = 0; i < missing.size(); ++i) {
        if (missing[i].size() != missing.front().size())
            throw std::invalid_argument("matrix_from_grid: ragged grid");
        for (std::size_t j = 0; j < missing[i].size(); ++j)
            if (missing[i][j]) b.set_missing(i, j);
    }
    if (!names.empty()) b.col_names(std::move(names));
    return b.build();
}

// Bit i = 1 iff row i has no missing cell on any column.
inline BitVector complete_row_mask(const MissingnessMatrix& m) {
    BitVector mask(m.n_rows());
    for (std::size_t i = 0; i < m.n_rows(); ++i) {
        std::uint64_t any = 0;
        for (auto w : m.row_words(i)) any |= w;
        if (any == 0) mask.set(i);
    }
    return mask;
}

// Bit i = 1 iff row i is observed on every column in cols. cols must be
// non-empty, in range, and distinct.
inline BitVector complete_row_mask_subset(const MissingnessMatrix& m,
                                          std::span<const std::size_t> cols) {
    if (cols.empty())
        throw std::invalid_argument("complete_row_mask_subset: empty column set");
    std::vector<std::uint64_t> word_mask(m.words_per_row(), 0);
    std::vector<char> seen(m.n_cols(), 0);
    for (std::size_t col : cols) {
        if (col >= m.n_cols())
            throw std::invalid_argument("complete_row_mask_subset: column index out of range");
        if (seen[col]++)
            throw std::invalid_argument("complete_row_mask_subset: duplicate column index");
        word_mask[col >> 6] |= std::uint64_t{1} << (col & 63);
    }
    // only words that actually carry selected columns
    std::vector<std::pair<std::size_t, std::uint64_t>> active;
    for (std::size_t w = 0; w < word_mask.size(); ++w)
        if (word_mask[w]) active.emplace_back(w, word_mask[w]);

    BitVector mask(m.n_rows());
    for (std::size_t i = 0; i < m.n_rows(); ++i) {
        auto words = m.row_words(i);
        bool complete = true;
        for (auto [w, sel] : active) {
            if (words[w] & sel) {
                complete = false;
                break;
            }
        }
        if (complete) mask.set(i);
    }
    return mask;
}

// Column-major copy of the missingness patterns: column j occupies words
// [j*words_per_col, (j+1)*words_per_col), bit i = row i, padding zero.
struct ColumnPatterns {
    std::size_t n_rows = 0;
    std::size_t words_per_col = 0;
    std::vector<std::uint64_t> words;

    std::span<const std::uint64_t> col(std::size_t j) const {
        return {words.data() + j * words_per_col, words_per_col};
    }
};

inline ColumnPatterns column_missing_patterns(const MissingnessMatrix& m) {
    ColumnPatterns p;
    p.n_rows = m.n_rows();
    p.words_per_col = (m.n_rows() + 63) / 64;
    p.words.assign(m.n_cols() * p.words_per_col, 0);
    for (std::size_t i = 0; i < m.n_rows(); ++i) {
        auto words = m.row_words(i);
        for (std::size_t w = 0; w < words.size(); ++w) {
            std::uint64_t bits = words[w];
            while (bits) {
                const int b = std::countr_zero(bits);
                bits &= bits - 1;
                const std::size_t j = (w << 6) + static_cast<std::size_t>(b);
                p.words[j * p.words_per_col + (i >> 6)] |= std::uint64_t{1} << (i & 63);
            }
        }
    }
    return p;
}

struct DatasetProfile {
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    double avg_missing_prop = 0.0;
    double max_missing_prop = 0.0;
    std::size_t n_fully_observed_cols = 0;
    std::size_t n_complete_rows = 0;
    std::vector<double> per_col_missing_prop;
};

inline DatasetProfile profile(const MissingnessMatrix& m) {
    DatasetProfile d;
    d.n_rows = m.n_rows();
    d.n_cols = m.n_cols();
    d.per_col_missing_prop.reserve(m.n_cols());

    const ColumnPatterns cols = column_missing_patterns(m);
    std::size_t total_missing = 0;
    for (std::size_t j = 0; j < m.n_cols(); ++j) {
        std::size_t miss = 0;
        for (auto w : cols.col(j)) miss += static_cast<std::size_t>(std::popcount(w));
        total_missing += miss;
        const double prop = static_cast<double>(miss) / static_cast<double>(m.n_rows());
        d.per_col_missing_prop.push_back(prop);
        if (miss == 0) ++d.n_fully_observed_cols;
        if (prop > d.max_missing_prop) d.max_missing_prop = prop;
    }
    d.avg_missing_prop =
        static_cast<double>(total_missing) / (static_cast<double>(m.n_rows()) * static_cast<double>(m.n_cols()));
    d.n_complete_rows = complete_row_mask(m).popcount();
    return d;
}

}  // namespace rowloss
