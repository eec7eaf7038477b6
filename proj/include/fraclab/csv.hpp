#pragma once

// Deterministic CSV output: '.' decimal point regardless of locale, LF line
// endings, mandatory header row, shortest round-trip numeric formatting.

#include <complex>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fraclab/geometry.hpp"
#include "fraclab/spectral.hpp"

namespace fraclab {

inline std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    // defensive: some locales would print ',' -- normalize
    for (char* p = buf; *p; ++p)
        if (*p == ',') *p = '.';
    return buf;
}

inline std::string csv_num(int v) { return std::to_string(v); }
inline std::string csv_num(std::size_t v) { return std::to_string(v); }

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header)
        : out_(path, std::ios::binary), columns_(header.size()) {
        if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
        write_row(header);
    }

    void row(const std::vector<std::string>& cells) {
        if (cells.size() != columns_)
            throw std::invalid_argument("CsvWriter: wrong cell count");
        write_row(cells);
    }

  private:
    void write_row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    std::ofstream out_;
    std::size_t columns_;
};

// One row per grid point: coord_1..coord_n, weight, value_re, value_im.
inline void write_field_csv(const std::string& path, const Field& f) {
    const int n = f.grid->manifold.dim;
    std::vector<std::string> header;
    for (int j = 1; j <= n; ++j) header.push_back("coord_" + std::to_string(j));
    header.push_back("weight");
    header.push_back("value_re");
    header.push_back("value_im");
    CsvWriter w(path, header);
    for (std::size_t i = 0; i < f.grid->size(); ++i) {
        std::vector<std::string> cells;
        for (int j = 0; j < n; ++j) cells.push_back(csv_num(f.grid->points[i].c[j]));
        cells.push_back(csv_num(f.grid->weights[i]));
        cells.push_back(csv_num(f.values[i].real()));
        cells.push_back(csv_num(f.values[i].imag()));
        w.row(cells);
    }
}

inline void write_spectral_csv(const std::string& path, const SpectralCoeffs& sc,
                               const Basis& basis) {
    if (sc.coeffs.size() != basis.pairs.size())
        throw std::invalid_argument("write_spectral_csv: size mismatch");
    CsvWriter w(path, {"eigen_index", "lambda", "a_re", "a_im"});
    for (std::size_t k = 0; k < sc.coeffs.size(); ++k)
        w.row({csv_num(k), csv_num(basis.pairs[k].lambda), csv_num(sc.coeffs[k].real()),
               csv_num(sc.coeffs[k].imag())});
}

}  // namespace fraclab
