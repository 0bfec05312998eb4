#include "km/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>

#include "km/fsutil.hpp"
#include "km/rng.hpp"

namespace km {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

void split_line(std::string_view line, char delim, std::vector<std::string_view>& cells) {
    cells.clear();
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == delim) {
            cells.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
}

double parse_cell(std::string_view cell, const std::string& path, std::size_t line_no,
                  std::size_t col) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value))
        throw CsvError(path + ":" + std::to_string(line_no) + ":" + std::to_string(col) +
                           ": cell '" + std::string(cell) + "' is not a finite real",
                       line_no, col);
    return value;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// Original column indices to retain, in order.
std::vector<std::size_t> resolve_plan(const CsvOptions& options, std::size_t total_cols,
                                      const std::vector<std::string>& header) {
    std::vector<bool> drop(total_cols, false);
    for (const std::string& entry : options.drop_columns) {
        if (all_digits(entry)) {
            const std::size_t idx = std::stoull(entry);
            if (idx >= total_cols)
                throw std::invalid_argument("drop column index out of range: " + entry);
            drop[idx] = true;
        } else {
            if (header.empty())
                throw std::invalid_argument("drop column by name requires a header row: " + entry);
            const auto it = std::find(header.begin(), header.end(), entry);
            if (it == header.end())
                throw std::invalid_argument("drop column not found in header: " + entry);
            drop[static_cast<std::size_t>(it - header.begin())] = true;
        }
    }
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < total_cols; ++i)
        if (!drop[i]) keep.push_back(i);
    if (options.attribute_limit && keep.size() > *options.attribute_limit)
        keep.resize(*options.attribute_limit);
    if (keep.empty()) throw CsvError("no columns retained", 0, 0);
    return keep;
}

}  // namespace

struct CsvRowReader::Impl {
    std::string path;
    CsvOptions options;
    std::ifstream in;
    std::vector<std::size_t> keep;
    std::size_t total_cols = 0;
    std::size_t line_no = 0;
    std::size_t rows_read = 0;
    std::string line;
    std::vector<std::string_view> cells;
    std::vector<double> row;
    bool pending = false;  // `row` holds the first data row parsed during setup

    bool next_line() {
        while (std::getline(in, line)) {
            ++line_no;
            if (trim(line).empty()) continue;
            return true;
        }
        return false;
    }

    void parse_current_row() {
        split_line(line, options.delimiter, cells);
        if (cells.size() != total_cols)
            throw CsvError(path + ":" + std::to_string(line_no) + ": expected " +
                               std::to_string(total_cols) + " columns, found " +
                               std::to_string(cells.size()),
                           line_no, cells.size());
        row.clear();
        for (const std::size_t c : keep) row.push_back(parse_cell(cells[c], path, line_no, c + 1));
    }
};

CsvRowReader::CsvRowReader(const std::string& path, CsvOptions options)
    : impl_(std::make_unique<Impl>()) {
    impl_->path = path;
    impl_->options = std::move(options);
    impl_->in.open(path, std::ios::binary);
    if (!impl_->in) throw CsvError("cannot open file: " + path, 0, 0);

    std::vector<std::string> header;
    if (impl_->options.has_header) {
        if (!impl_->next_line()) throw CsvError(path + ": missing header row", 0, 0);
        split_line(impl_->line, impl_->options.delimiter, impl_->cells);
        header.assign(impl_->cells.begin(), impl_->cells.end());
        impl_->total_cols = header.size();
    }
    if (!impl_->next_line()) {
        if (!impl_->options.has_header) throw CsvError(path + ": no data rows", 0, 0);
        throw CsvError(path + ": no data rows", impl_->line_no, 0);
    }
    if (!impl_->options.has_header) {
        split_line(impl_->line, impl_->options.delimiter, impl_->cells);
        impl_->total_cols = impl_->cells.size();
    }
    impl_->keep = resolve_plan(impl_->options, impl_->total_cols, header);
    impl_->parse_current_row();
    impl_->pending = true;
}

CsvRowReader::~CsvRowReader() = default;
CsvRowReader::CsvRowReader(CsvRowReader&&) noexcept = default;
CsvRowReader& CsvRowReader::operator=(CsvRowReader&&) noexcept = default;

std::size_t CsvRowReader::dim() const { return impl_->keep.size(); }

std::size_t CsvRowReader::rows_read() const { return impl_->rows_read; }

std::optional<std::span<const double>> CsvRowReader::next() {
    if (impl_->pending) {
        impl_->pending = false;
        ++impl_->rows_read;
        return std::span<const double>(impl_->row);
    }
    if (!impl_->next_line()) return std::nullopt;
    impl_->parse_current_row();
    ++impl_->rows_read;
    return std::span<const double>(impl_->row);
}

Dataset load_csv(const std::string& path, const CsvOptions& options) {
    CsvRowReader reader(path, options);
    Dataset data(reader.dim());
    while (auto row = reader.next()) data.append(*row);
    return data;
}

namespace {

// Per-attribute sample standard deviation (n-1 denominator; 0 for n == 1).
std::vector<double> attribute_stddevs(const Dataset& data) {
    const std::size_t n = data.size();
    const std::size_t d = data.dim();
    std::vector<double> mean(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* p = data.point(i).data();
        for (std::size_t t = 0; t < d; ++t) mean[t] += p[t];
    }
    for (double& m : mean) m /= static_cast<double>(n);
    std::vector<double> var(d, 0.0);
    if (n > 1) {
        for (std::size_t i = 0; i < n; ++i) {
            const double* p = data.point(i).data();
            for (std::size_t t = 0; t < d; ++t) {
                const double diff = p[t] - mean[t];
                var[t] += diff * diff;
            }
        }
        for (double& v : var) v = std::sqrt(v / static_cast<double>(n - 1));
    }
    return var;
}

void check_enlarge_args(std::size_t factor, double noise_scale) {
    if (factor < 1) throw std::invalid_argument("enlarge: factor must be >= 1");
    if (noise_scale < 0.0 || !std::isfinite(noise_scale))
        throw std::invalid_argument("enlarge: noise scale must be a finite non-negative real");
}

void format_double(std::string& out, double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, ptr);
}

}  // namespace

Dataset enlarge_with_noise(const Dataset& data, std::size_t factor, double noise_scale,
                           std::uint64_t seed) {
    check_enlarge_args(factor, noise_scale);
    if (factor == 1) return data;
    const std::size_t n = data.size();
    const std::size_t d = data.dim();
    const std::vector<double> sigma = attribute_stddevs(data);
    Rng rng(seed);

    std::vector<double> coords;
    coords.reserve(n * factor * d);
    for (std::size_t i = 0; i < n; ++i) {
        const double* p = data.point(i).data();
        coords.insert(coords.end(), p, p + d);
        for (std::size_t c = 1; c < factor; ++c) {
            for (std::size_t t = 0; t < d; ++t)
                coords.push_back(p[t] + noise_scale * sigma[t] * rng.gaussian());
        }
    }
    return Dataset(std::move(coords), d);
}

std::size_t enlarge_csv(const std::string& in_path, const std::string& out_path,
                        std::size_t factor, double noise_scale, std::uint64_t seed,
                        const CsvOptions& options) {
    check_enlarge_args(factor, noise_scale);
    if (!options.drop_columns.empty() || options.attribute_limit)
        throw std::invalid_argument("enlarge operates on all columns");

    // pass 1: raw lines (echoed verbatim) plus parsed values for the noise model
    std::ifstream in(in_path, std::ios::binary);
    if (!in) throw CsvError("cannot open file: " + in_path, 0, 0);
    std::string header_line;
    std::vector<std::string> raw_rows;
    {
        std::string line;
        bool saw_header = false;
        while (std::getline(in, line)) {
            std::string_view body = line;
            if (!body.empty() && body.back() == '\r') body.remove_suffix(1);
            if (trim(body).empty()) continue;
            if (options.has_header && !saw_header) {
                header_line = std::string(body);
                saw_header = true;
                continue;
            }
            raw_rows.emplace_back(body);
        }
    }
    Dataset data = load_csv(in_path, options);
    if (data.size() != raw_rows.size())
        throw CsvError(in_path + ": row accounting mismatch", 0, 0);

    const std::size_t n = data.size();
    const std::size_t d = data.dim();
    const std::vector<double> sigma = attribute_stddevs(data);
    Rng rng(seed);

    AtomicFile file(out_path);
    std::ofstream& out = file.stream();
    if (options.has_header) out << header_line << '\n';
    std::string buf;
    for (std::size_t i = 0; i < n; ++i) {
        out << raw_rows[i] << '\n';
        const double* p = data.point(i).data();
        for (std::size_t c = 1; c < factor; ++c) {
            buf.clear();
            for (std::size_t t = 0; t < d; ++t) {
                if (t > 0) buf.push_back(options.delimiter);
                format_double(buf, p[t] + noise_scale * sigma[t] * rng.gaussian());
            }
            buf.push_back('\n');
            out << buf;
        }
    }
    file.commit();
    return n * factor;
}

}  // namespace km
