#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "km/core.hpp"

namespace km {

/// CSV parsing options. drop_columns entries are either column names (header
/// required) or 0-based indices of the original columns; attribute_limit
/// keeps only the first N retained columns.
struct CsvOptions {
    char delimiter = ',';
    bool has_header = false;
    std::vector<std::string> drop_columns;
    std::optional<std::size_t> attribute_limit;
};

/// Streams parsed data rows from a CSV file one at a time, applying the
/// column options per row. The primitive behind the segment reader: memory
/// use is one row, regardless of file size.
class CsvRowReader {
public:
    CsvRowReader(const std::string& path, CsvOptions options);
    ~CsvRowReader();
    CsvRowReader(CsvRowReader&&) noexcept;
    CsvRowReader& operator=(CsvRowReader&&) noexcept;

    std::size_t dim() const;

    /// Retained values of the next data row, or nullopt at end of file.
    /// The span is valid until the next call.
    std::optional<std::span<const double>> next();

    /// Data rows handed out so far.
    std::size_t rows_read() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Loads a whole CSV file. Dimension = retained column count, row order
/// preserved. Unparseable or non-finite cells raise CsvError with the
/// 1-based line and column.
Dataset load_csv(const std::string& path, const CsvOptions& options = {});

/// Replicates the dataset: each original row followed by factor-1 copies
/// perturbed with seeded Gaussian noise of stddev noise_scale * (per-attribute
/// sample stddev). factor=1 returns the input unchanged; noise_scale=0
/// duplicates rows exactly.
Dataset enlarge_with_noise(const Dataset& data, std::size_t factor, double noise_scale,
                           std::uint64_t seed);

/// Streaming variant for file-to-file enlargement: original rows are echoed
/// byte for byte, noisy copies are written in shortest round-trip decimal.
/// Output is written to a temporary and renamed on success. Returns the data
/// row count written. Draws noise in the same order as enlarge_with_noise,
/// so both produce the same values for the same seed.
std::size_t enlarge_csv(const std::string& in_path, const std::string& out_path,
                        std::size_t factor, double noise_scale, std::uint64_t seed,
                        const CsvOptions& options = {});

}  // namespace km
