#include "leptovar/dataset.hpp"

#include "leptovar/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace leptovar {

Dataset::Dataset(std::vector<Column> columns) : columns_(std::move(columns)) {
    if (columns_.empty()) {
        throw DataError("empty dataset: no columns");
    }
    n_rows_ = columns_.front().values.size();
    if (n_rows_ == 0) {
        throw DataError("empty dataset");
    }
    std::unordered_set<std::string> seen;
    for (const auto& col : columns_) {
        if (col.name.empty()) {
            throw DataError("column names must be non-empty");
        }
        if (!seen.insert(col.name).second) {
            throw DataError(fmt::format("duplicate column name '{}'", col.name));
        }
        if (col.values.size() != n_rows_) {
            throw DataError(fmt::format("column '{}' has {} values, expected {}", col.name,
                                        col.values.size(), n_rows_));
        }
        for (std::size_t r = 0; r < n_rows_; ++r) {
            if (!std::isfinite(col.values[r])) {
                throw DataError(fmt::format("non-finite value at row {}, column '{}'", r + 1,
                                            col.name));
            }
        }
    }
}

bool Dataset::has_column(std::string_view name) const noexcept {
    return std::any_of(columns_.begin(), columns_.end(),
                       [&](const Column& c) { return c.name == name; });
}

std::size_t Dataset::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i].name == name) return i;
    }
    throw DataError(fmt::format("unknown column '{}'", name));
}

std::span<const double> Dataset::column(std::string_view name) const {
    return columns_[column_index(name)].values;
}

std::vector<std::string> Dataset::column_names() const {
    std::vector<std::string> names;
    names.reserve(columns_.size());
    for (const auto& c : columns_) names.push_back(c.name);
    return names;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

// Splits text into records of fields. Quoted fields may contain the
// delimiter, doubled quotes and newlines.
std::vector<std::vector<std::string>> split_records(std::string_view text, char delim) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        end_field();
        // Blank lines are skipped.
        if (!(record.size() == 1 && trim(record.front()).empty())) {
            records.push_back(std::move(record));
        }
        record.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && trim(field).empty()) {
            field.clear();
            in_quotes = true;
            field_started = true;
        } else if (c == delim) {
            end_field();
        } else if (c == '\n') {
            end_record();
        } else if (c == '\r') {
            if (i + 1 < text.size() && text[i + 1] == '\n') continue;
            end_record();
        } else {
            field.push_back(c);
            field_started = true;
        }
    }
    if (in_quotes) {
        throw DataError("unterminated quoted field");
    }
    if (field_started || !field.empty() || !record.empty()) {
        end_record();
    }
    return records;
}

bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    const auto* begin = s.data();
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

} // namespace

Dataset parse_csv(std::string_view text, const CsvOptions& options) {
    auto records = split_records(text, options.delimiter);
    if (records.empty()) {
        throw DataError("empty file");
    }

    std::vector<std::string> header;
    std::size_t first_data = 0;
    const std::size_t width = records.front().size();
    if (options.has_header) {
        for (auto& h : records.front()) header.emplace_back(trim(h));
        first_data = 1;
    } else {
        for (std::size_t c = 0; c < width; ++c) header.push_back(fmt::format("col{}", c + 1));
    }

    std::optional<std::size_t> skip;
    if (options.index_column) {
        const auto it = std::find(header.begin(), header.end(), *options.index_column);
        if (it == header.end()) {
            throw DataError(fmt::format("index column '{}' not found", *options.index_column));
        }
        skip = static_cast<std::size_t>(it - header.begin());
    }

    std::vector<Column> columns;
    for (std::size_t c = 0; c < width; ++c) {
        if (skip && *skip == c) continue;
        columns.push_back(Column{header[c], {}});
    }

    for (std::size_t r = first_data; r < records.size(); ++r) {
        const auto& rec = records[r];
        const std::size_t row = r - first_data + 1;
        if (rec.size() != width) {
            throw DataError(fmt::format("ragged row {}: {} fields, expected {}", row, rec.size(),
                                        width));
        }
        std::size_t out = 0;
        for (std::size_t c = 0; c < width; ++c) {
            if (skip && *skip == c) continue;
            double v = 0.0;
            if (!parse_double(rec[c], v)) {
                throw DataError(fmt::format("non-numeric cell '{}' at row {}, column '{}'",
                                            rec[c], row, header[c]));
            }
            columns[out++].values.push_back(v);
        }
    }
    if (columns.empty()) {
        throw DataError("no numeric columns");
    }
    if (columns.front().values.empty()) {
        throw DataError("empty dataset");
    }
    return Dataset(std::move(columns));
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError(fmt::format("file not found: {}", path.string()));
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), options);
}

void write_csv(std::ostream& out, const Dataset& ds, char delimiter) {
    const auto& cols = ds.columns();
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (c) out << delimiter;
        out << cols[c].name;
    }
    out << '\n';
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (c) out << delimiter;
            out << fmt::format("{:.17g}", cols[c].values[r]);
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// Statistics

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) {
        throw std::invalid_argument("quantile of empty sequence");
    }
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

ColumnStats column_stats(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("statistics of empty column");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    ColumnStats s;
    s.count = values.size();
    const double n = static_cast<double>(s.count);
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = s.count > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    s.min = sorted.front();
    s.max = sorted.back();
    s.q25 = quantile_sorted(sorted, 0.25);
    s.median = quantile_sorted(sorted, 0.5);
    s.q75 = quantile_sorted(sorted, 0.75);
    return s;
}

std::vector<ColumnSummary> describe(const Dataset& ds) {
    std::vector<ColumnSummary> out;
    out.reserve(ds.n_columns());
    for (const auto& col : ds.columns()) {
        out.push_back({col.name, column_stats(col.values)});
    }
    return out;
}

CorrelationMatrix correlations(const Dataset& ds) {
    const auto& cols = ds.columns();
    const std::size_t p = cols.size();
    const double n = static_cast<double>(ds.n_rows());

    std::vector<std::vector<double>> centered(p);
    std::vector<double> norms(p);
    for (std::size_t c = 0; c < p; ++c) {
        const auto& v = cols[c].values;
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
        centered[c].resize(v.size());
        double ss = 0.0;
        for (std::size_t r = 0; r < v.size(); ++r) {
            centered[c][r] = v[r] - mean;
            ss += centered[c][r] * centered[c][r];
        }
        if (!(ss > 0.0)) {
            throw DataError(fmt::format("column '{}' has zero variance", cols[c].name));
        }
        norms[c] = std::sqrt(ss);
    }

    CorrelationMatrix m;
    m.names = ds.column_names();
    m.values.assign(p * p, 0.0);
    for (std::size_t i = 0; i < p; ++i) {
        m.values[i * p + i] = 1.0;
        for (std::size_t j = i + 1; j < p; ++j) {
            double dot = 0.0;
            for (std::size_t r = 0; r < centered[i].size(); ++r) {
                dot += centered[i][r] * centered[j][r];
            }
            const double rho = std::clamp(dot / (norms[i] * norms[j]), -1.0, 1.0);
            m.values[i * p + j] = rho;
            m.values[j * p + i] = rho;
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Selection

FeatureView::FeatureView(std::vector<std::string> names,
                         std::vector<std::span<const double>> columns)
    : names_(std::move(names)), columns_(std::move(columns)) {
    if (names_.size() != columns_.size()) {
        throw std::invalid_argument("feature names and columns differ in length");
    }
}

Selection select(const Dataset& ds, std::string_view target,
                 const std::vector<std::string>& features) {
    Selection sel;
    sel.target = ds.column(target);
    std::vector<std::span<const double>> cols;
    std::unordered_set<std::string> seen;
    for (const auto& f : features) {
        if (f == target) {
            throw DataError(fmt::format("target '{}' cannot also be a feature", f));
        }
        if (!seen.insert(f).second) {
            throw DataError(fmt::format("feature '{}' listed twice", f));
        }
        cols.push_back(ds.column(f));
    }
    sel.features = FeatureView(features, std::move(cols));
    return sel;
}

} // namespace leptovar
