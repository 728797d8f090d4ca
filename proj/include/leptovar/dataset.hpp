#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace leptovar {

struct Column {
    std::string name;
    std::vector<double> values;
};

// Named numeric columns of equal length. Immutable once constructed, so a
// Dataset can be read from any number of threads.
class Dataset {
public:
    // Validates: at least one row, equal lengths, unique non-empty names,
    // finite values. Throws DataError otherwise.
    explicit Dataset(std::vector<Column> columns);

    std::size_t n_rows() const noexcept { return n_rows_; }
    std::size_t n_columns() const noexcept { return columns_.size(); }
    const std::vector<Column>& columns() const noexcept { return columns_; }

    bool has_column(std::string_view name) const noexcept;
    std::size_t column_index(std::string_view name) const; // throws DataError
    std::span<const double> column(std::string_view name) const;
    std::vector<std::string> column_names() const;

private:
    std::vector<Column> columns_;
    std::size_t n_rows_ = 0;
};

struct CsvOptions {
    char delimiter = ',';
    bool has_header = true;
    // Name of a non-numeric column (typically a date) to drop.
    std::optional<std::string> index_column;
};

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
Dataset parse_csv(std::string_view text, const CsvOptions& options = {});

// Writes every value with 17 significant digits so load_csv round-trips
// exactly.
void write_csv(std::ostream& out, const Dataset& ds, char delimiter = ',');

struct ColumnStats {
    std::size_t count = 0;
    double mean = 0.0;
    double std = 0.0; // sample (n-1) denominator; 0 when count == 1
    double min = 0.0;
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
    double max = 0.0;
};

struct ColumnSummary {
    std::string name;
    ColumnStats stats;
};

// Linear interpolation between order statistics at position p*(n-1).
double quantile_sorted(std::span<const double> sorted, double p);

ColumnStats column_stats(std::span<const double> values);

// Summary per column, in column order.
std::vector<ColumnSummary> describe(const Dataset& ds);

struct CorrelationMatrix {
    std::vector<std::string> names;
    std::vector<double> values; // row-major, names.size() squared

    std::size_t size() const noexcept { return names.size(); }
    double operator()(std::size_t row, std::size_t col) const {
        return values[row * names.size() + col];
    }
};

// Pearson correlations. Throws DataError naming any zero-variance column.
CorrelationMatrix correlations(const Dataset& ds);

// Read-only view of a set of feature columns; borrows from the Dataset.
class FeatureView {
public:
    FeatureView() = default;
    FeatureView(std::vector<std::string> names, std::vector<std::span<const double>> columns);

    std::size_t n_features() const noexcept { return columns_.size(); }
    bool empty() const noexcept { return columns_.empty(); }
    std::span<const double> feature(std::size_t i) const { return columns_.at(i); }
    const std::vector<std::string>& names() const noexcept { return names_; }

private:
    std::vector<std::string> names_;
    std::vector<std::span<const double>> columns_;
};

struct Selection {
    std::span<const double> target;
    FeatureView features;
};

// Throws DataError on unknown names, duplicate features, or a target that
// is also listed as a feature.
Selection select(const Dataset& ds, std::string_view target,
                 const std::vector<std::string>& features);

} // namespace leptovar
