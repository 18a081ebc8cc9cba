#pragma once

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "quacc/math.hpp"

namespace quacc {

/// Column-named numeric table. Missing cells are NaN. Values are immutable
/// after construction as far as the estimators are concerned; everything
/// downstream operates on rows surviving pairwise_complete().
struct Dataset {
    struct Column {
        std::string name;
        std::vector<double> values;
    };

    std::vector<Column> columns;
    std::size_t n_rows = 0;

    void add_column(std::string name, std::vector<double> values) {
        if (name.empty()) throw std::invalid_argument("Dataset: empty column name");
        for (const auto& c : columns)
            if (c.name == name)
                throw std::invalid_argument("Dataset: duplicate column '" + name + "'");
        if (!columns.empty() && values.size() != n_rows)
            throw std::invalid_argument("Dataset: column length mismatch for '" + name + "'");
        n_rows = values.size();
        columns.push_back({std::move(name), std::move(values)});
    }

    const Column& column(const std::string& name) const {
        for (const auto& c : columns)
            if (c.name == name) return c;
        throw std::invalid_argument("Dataset: unknown variable '" + name + "'");
    }

    bool has_column(const std::string& name) const {
        for (const auto& c : columns)
            if (c.name == name) return true;
        return false;
    }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        out.reserve(columns.size());
        for (const auto& c : columns) out.push_back(c.name);
        return out;
    }
};

struct FoldAssignment {
    std::vector<std::size_t> fold_of_row;
    std::size_t K = 0;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line, char delimiter) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == delimiter) {
            cells.push_back(cell);
            cell.clear();
        } else if (ch != '\r') {
            cell += ch;
        }
    }
    cells.push_back(cell);
    return cells;
}

}  // namespace detail

/// Loads an RFC-4180-style CSV. Header row required; empty cells become
/// missing values. Throws on ragged rows, duplicate headers, and cells that
/// are neither empty nor parseable as a real number.
inline Dataset load_csv(const std::string& path, char delimiter = ',') {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_csv: cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line) || line.empty())
        throw std::runtime_error("load_csv: no header in '" + path + "'");

    const auto header = detail::split_csv_line(line, delimiter);
    {
        std::set<std::string> seen;
        for (const auto& h : header) {
            if (h.empty()) throw std::runtime_error("load_csv: empty header name");
            if (!seen.insert(h).second)
                throw std::runtime_error("load_csv: duplicate header '" + h + "'");
        }
    }

    std::vector<std::vector<double>> cols(header.size());
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = detail::split_csv_line(line, delimiter);
        if (cells.size() != header.size())
            throw std::runtime_error("load_csv: ragged row " + std::to_string(line_no));
        for (std::size_t j = 0; j < cells.size(); ++j) {
            const std::string& s = cells[j];
            if (s.empty()) {
                cols[j].push_back(kNaN);
            } else {
                std::size_t pos = 0;
                double v;
                try {
                    v = std::stod(s, &pos);
                } catch (const std::exception&) {
                    throw std::runtime_error("load_csv: unparseable cell '" + s + "' at row " +
                                             std::to_string(line_no));
                }
                if (pos != s.size())
                    throw std::runtime_error("load_csv: unparseable cell '" + s + "' at row " +
                                             std::to_string(line_no));
                cols[j].push_back(v);
            }
        }
    }

    Dataset d;
    for (std::size_t j = 0; j < header.size(); ++j)
        d.add_column(header[j], std::move(cols[j]));
    return d;
}

/// Breaks ties by adding Unif(-d/5, d/5) noise, d being the smallest gap
/// between adjacent distinct values. |noise| < d/2, so the relative order of
/// distinct-value groups cannot change.
inline std::vector<double> jitter(const std::vector<double>& values, Rng& rng) {
    std::vector<double> finite;
    for (double v : values)
        if (!is_missing(v)) finite.push_back(v);
    std::sort(finite.begin(), finite.end());
    finite.erase(std::unique(finite.begin(), finite.end()), finite.end());
    if (finite.size() < 2)
        throw std::invalid_argument("jitter: needs at least 2 distinct finite values");
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < finite.size(); ++i)
        d = std::min(d, finite[i] - finite[i - 1]);

    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        out[i] = is_missing(values[i]) ? kNaN : values[i] + rng.uniform(-d / 5.0, d / 5.0);
    return out;
}

/// Rank-based quantile-quantile transform onto a standard normal:
/// each non-missing value maps to Phi^{-1}(r/(m+1)) with ties averaged in
/// rank. Missing entries pass through untouched.
inline std::vector<double> qq_transform(const std::vector<double>& values) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (!is_missing(values[i])) idx.push_back(i);
    const std::size_t m = idx.size();
    if (m < 2) throw std::invalid_argument("qq_transform: needs at least 2 non-missing values");

    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> out(values.size(), kNaN);
    std::size_t i = 0;
    while (i < m) {
        std::size_t j = i;
        while (j + 1 < m && values[idx[j + 1]] == values[idx[i]]) ++j;
        const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        const double z = norm_quantile(avg_rank / static_cast<double>(m + 1));
        for (std::size_t k = i; k <= j; ++k) out[idx[k]] = z;
        i = j + 1;
    }
    return out;
}

/// Testwise deletion: keeps rows where every listed column is non-missing.
inline Dataset pairwise_complete(const Dataset& data, const std::vector<std::string>& vars) {
    std::vector<const Dataset::Column*> checked;
    for (const auto& v : vars) checked.push_back(&data.column(v));

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < data.n_rows; ++i) {
        bool complete = true;
        for (const auto* c : checked)
            if (is_missing(c->values[i])) {
                complete = false;
                break;
            }
        if (complete) keep.push_back(i);
    }

    Dataset out;
    for (const auto& c : data.columns) {
        std::vector<double> vals;
        vals.reserve(keep.size());
        for (std::size_t i : keep) vals.push_back(c.values[i]);
        out.add_column(c.name, std::move(vals));
    }
    out.n_rows = keep.size();
    return out;
}

/// Random partition into K near-equal folds; deterministic given the rng.
inline FoldAssignment kfold_split(std::size_t n, std::size_t K, Rng& rng) {
    if (K < 2) throw std::invalid_argument("kfold_split: K must be >= 2");
    if (n < K) throw std::invalid_argument("kfold_split: n < K");
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    rng.shuffle(perm);

    FoldAssignment fa;
    fa.K = K;
    fa.fold_of_row.assign(n, 0);
    // First n % K folds take one extra row.
    const std::size_t base = n / K, extra = n % K;
    std::size_t pos = 0;
    for (std::size_t k = 0; k < K; ++k) {
        const std::size_t size_k = base + (k < extra ? 1 : 0);
        for (std::size_t i = 0; i < size_k; ++i) fa.fold_of_row[perm[pos++]] = k;
    }
    return fa;
}

}  // namespace quacc
