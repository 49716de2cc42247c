#include "hext/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "hext/error.hpp"
#include "hext/rng.hpp"

namespace hext {

IntervalSample sample_interval(std::size_t n_interior, std::uint64_t seed) {
    Rng rng(seed);
    std::set<double> taken{0.0, 1.0, 2.0};
    Matrix pts(n_interior + 3, 1);
    for (std::size_t i = 0; i < n_interior; ++i) {
        double x;
        do {
            x = rng.open_interval(0.0, 2.0);
        } while (!taken.insert(x).second);
        pts(i, 0) = x;
    }
    pts(n_interior, 0) = 0.0;
    pts(n_interior + 1, 0) = 1.0;
    pts(n_interior + 2, 0) = 2.0;

    IntervalSample sample;
    sample.cloud = PointCloud::from_matrix(std::move(pts));
    sample.bc.indices = {n_interior, n_interior + 1, n_interior + 2};
    sample.bc.values = Matrix(3, 1);
    sample.bc.values(1, 0) = 1.0;
    return sample;
}

double interval_truth(double x) {
    return x <= 1.0 ? x : 2.0 - x;
}

DiskSample sample_disk(std::size_t n_interior, std::size_t m_boundary, std::uint64_t seed) {
    if (n_interior < 1 || m_boundary < 1)
        fail(errc::invalid_parameter, "disk sample needs interior and boundary points");
    Rng rng(seed);
    const double two_pi = 6.283185307179586476925286766559;

    DiskSample sample;
    Matrix pts(n_interior + m_boundary, 2);
    for (std::size_t i = 0; i < n_interior; ++i) {
        double r = std::sqrt(rng.uniform());
        double theta = two_pi * rng.uniform();
        pts(i, 0) = r * std::cos(theta);
        pts(i, 1) = r * std::sin(theta);
    }
    for (std::size_t i = 0; i < m_boundary; ++i) {
        double theta = two_pi * rng.uniform();
        pts(n_interior + i, 0) = std::cos(theta);
        pts(n_interior + i, 1) = std::sin(theta);
        sample.boundary.push_back(n_interior + i);
    }
    sample.cloud = PointCloud::from_matrix(std::move(pts));
    return sample;
}

BlobSample sample_blobs(const Matrix& centers, double spread, std::span<const std::size_t> counts,
                        std::uint64_t seed) {
    if (counts.size() != centers.rows())
        fail(errc::invalid_parameter, "one count per blob center required");
    if (!(spread > 0.0)) fail(errc::invalid_parameter, "spread must be positive");
    std::size_t total = 0;
    for (std::size_t c : counts) {
        if (c < 1) fail(errc::invalid_parameter, "blob counts must be positive");
        total += c;
    }

    Rng rng(seed);
    BlobSample sample;
    Matrix pts(total, centers.cols());
    std::size_t row = 0;
    for (std::size_t blob = 0; blob < counts.size(); ++blob)
        for (std::size_t i = 0; i < counts[blob]; ++i, ++row) {
            for (std::size_t j = 0; j < centers.cols(); ++j)
                pts(row, j) = centers(blob, j) + spread * rng.normal();
            sample.labels.push_back(static_cast<int>(blob) + 1);
        }
    sample.cloud = PointCloud::from_matrix(std::move(pts));
    return sample;
}

namespace {

[[noreturn]] void parse_fail(const std::string& path, std::size_t line, const std::string& what) {
    fail(errc::parse_error, path + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_or_fail(const std::string& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) fail(errc::io_error, "cannot open " + path);
    return in;
}

double parse_double(std::string_view token, const std::string& path, std::size_t line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        parse_fail(path, line, "bad number '" + std::string(token) + "'");
    if (!std::isfinite(v)) parse_fail(path, line, "non-finite value");
    return v;
}

long long parse_int(std::string_view token, const std::string& path, std::size_t line) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        parse_fail(path, line, "bad integer '" + std::string(token) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::uint32_t read_be32(std::istream& in, const std::string& path) {
    unsigned char buf[4];
    in.read(reinterpret_cast<char*>(buf), 4);
    if (!in) fail(errc::parse_error, path + ": truncated header");
    return (std::uint32_t(buf[0]) << 24) | (std::uint32_t(buf[1]) << 16) |
           (std::uint32_t(buf[2]) << 8) | std::uint32_t(buf[3]);
}

} // namespace

PointCloud load_points_csv(const std::string& path) {
    std::ifstream in = open_or_fail(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = trim(line);
        if (sv.empty()) continue;
        auto tokens = split(sv, ',');
        std::vector<double> row;
        row.reserve(tokens.size());
        for (auto tok : tokens) row.push_back(parse_double(trim(tok), path, lineno));
        if (width == 0) width = row.size();
        if (row.size() != width) parse_fail(path, lineno, "inconsistent column count");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) fail(errc::parse_error, path + ": no points");
    Matrix pts(rows.size(), width);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < width; ++j) pts(i, j) = rows[i][j];
    return PointCloud::from_matrix(std::move(pts));
}

std::map<std::size_t, int> load_labels_csv(const std::string& path) {
    std::ifstream in = open_or_fail(path);
    std::map<std::size_t, int> labels;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv = trim(line);
        if (sv.empty()) continue;
        auto tokens = split(sv, ',');
        if (tokens.size() != 2) parse_fail(path, lineno, "expected 'index,label'");
        long long idx = parse_int(trim(tokens[0]), path, lineno);
        long long cls = parse_int(trim(tokens[1]), path, lineno);
        if (idx < 0) parse_fail(path, lineno, "negative index");
        if (!labels.emplace(static_cast<std::size_t>(idx), static_cast<int>(cls)).second)
            parse_fail(path, lineno, "duplicate index");
    }
    if (labels.empty()) fail(errc::parse_error, path + ": no labels");
    return labels;
}

SparseMatrix load_sparse_coo(const std::string& path) {
    std::ifstream in = open_or_fail(path);
    std::string line;
    std::size_t lineno = 0;

    auto next_line = [&](std::string_view& sv) {
        while (std::getline(in, line)) {
            ++lineno;
            sv = trim(line);
            if (!sv.empty()) return true;
        }
        return false;
    };

    std::string_view sv;
    if (!next_line(sv)) fail(errc::parse_error, path + ": missing header");
    std::istringstream header{std::string(sv)};
    long long n = 0, d = 0, nnz = 0;
    if (!(header >> n >> d >> nnz) || n < 1 || d < 1 || nnz < 0)
        parse_fail(path, lineno, "expected header 'n d nnz'");

    std::vector<Triplet> entries;
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (long long k = 0; k < nnz; ++k) {
        if (!next_line(sv)) fail(errc::parse_error, path + ": fewer entries than the header says");
        std::istringstream row{std::string(sv)};
        long long i = 0, j = 0;
        double v = 0.0;
        if (!(row >> i >> j >> v)) parse_fail(path, lineno, "expected 'row col value'");
        if (i < 0 || i >= n || j < 0 || j >= d) parse_fail(path, lineno, "index out of range");
        if (!std::isfinite(v)) parse_fail(path, lineno, "non-finite value");
        if (!seen.emplace(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).second)
            parse_fail(path, lineno, "duplicate entry");
        entries.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), v});
    }
    if (next_line(sv)) parse_fail(path, lineno, "more entries than the header says");
    return SparseMatrix::from_triplets(static_cast<std::size_t>(n), static_cast<std::size_t>(d),
                                       std::move(entries));
}

PointCloud densify(const SparseMatrix& m) {
    return PointCloud::from_matrix(m.to_dense());
}

PointCloud load_idx_images(const std::string& path) {
    std::ifstream in = open_or_fail(path, std::ios::in | std::ios::binary);
    std::uint32_t magic = read_be32(in, path);
    if (magic != 0x00000803u)
        fail(errc::parse_error, path + ": bad image magic " + std::to_string(magic));
    std::uint32_t count = read_be32(in, path);
    std::uint32_t rows = read_be32(in, path);
    std::uint32_t cols = read_be32(in, path);
    if (count == 0 || rows == 0 || cols == 0) fail(errc::parse_error, path + ": empty dimensions");

    std::size_t pixels = std::size_t(rows) * cols;
    std::vector<unsigned char> buf(pixels);
    Matrix pts(count, pixels);
    for (std::uint32_t i = 0; i < count; ++i) {
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(pixels));
        if (!in)
            fail(errc::parse_error,
                 path + ": truncated image data at offset " + std::to_string(16 + i * pixels));
        for (std::size_t p = 0; p < pixels; ++p) pts(i, p) = buf[p] / 255.0;
    }
    return PointCloud::from_matrix(std::move(pts));
}

std::vector<int> load_idx_labels(const std::string& path) {
    std::ifstream in = open_or_fail(path, std::ios::in | std::ios::binary);
    std::uint32_t magic = read_be32(in, path);
    if (magic != 0x00000801u)
        fail(errc::parse_error, path + ": bad label magic " + std::to_string(magic));
    std::uint32_t count = read_be32(in, path);
    std::vector<unsigned char> buf(count);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(count));
    if (!in) fail(errc::parse_error, path + ": truncated label data");
    return std::vector<int>(buf.begin(), buf.end());
}

SparseMatrix tfidf_normalize(const SparseMatrix& counts) {
    const std::size_t n = counts.rows();
    const std::size_t v = counts.cols();

    std::vector<std::size_t> df(v, 0);
    for (std::size_t i = 0; i < n; ++i) {
        auto idx = counts.row_indices(i);
        auto val = counts.row_values(i);
        for (std::size_t k = 0; k < idx.size(); ++k) {
            if (val[k] < 0.0) fail(errc::invalid_input, "negative count");
            if (val[k] > 0.0) ++df[idx[k]];
        }
    }
    std::vector<double> idf(v, 0.0);
    for (std::size_t w = 0; w < v; ++w)
        if (df[w] > 0) idf[w] = std::log(static_cast<double>(n) / static_cast<double>(df[w]));

    std::vector<Triplet> entries;
    for (std::size_t i = 0; i < n; ++i) {
        auto idx = counts.row_indices(i);
        auto val = counts.row_values(i);
        double norm_sq = 0.0;
        std::size_t start = entries.size();
        for (std::size_t k = 0; k < idx.size(); ++k) {
            double weighted = val[k] * idf[idx[k]];
            if (weighted != 0.0) {
                entries.push_back({i, idx[k], weighted});
                norm_sq += weighted * weighted;
            }
        }
        if (entries.size() == start)
            fail(errc::degenerate_document,
                 "document " + std::to_string(i) + " has no discriminative terms");
        double inv = 1.0 / std::sqrt(norm_sq);
        for (std::size_t k = start; k < entries.size(); ++k) entries[k].value *= inv;
    }
    return SparseMatrix::from_triplets(n, v, std::move(entries));
}

} // namespace hext
