// io.hpp — deterministic CSV/JSON emission, sha256, and run manifests

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "lindlab/numerics.hpp"

namespace lindlab::io {

// %.17g: round-trips doubles and keeps re-runs byte-identical.
std::string format_double(double v);

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_string() const;
    void add_row(std::vector<std::string> row);
};

void write_file(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

std::string sha256_hex(std::string_view data);

// Density matrix CSV with columns (row_site, col_site, re, im).
Csv density_csv(const Matrix& rho);
Matrix density_from_csv(const std::string& content, Eigen::Index n);

// Sparse superoperator export as coordinate triplets (row, col, re, im).
Csv sparse_triplet_csv(const SparseMatrix& s);

}  // namespace lindlab::io
