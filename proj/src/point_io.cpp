#include "acpd/point_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace acpd {

PointSet read_point_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open point file: " + path.string());
    }

    std::vector<std::vector<double>> rows;
    int dim = 0;
    std::string line;
    long long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;

        std::istringstream fields(line);
        std::vector<double> row;
        double value = 0.0;
        while (fields >> value) row.push_back(value);
        if (!fields.eof()) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": malformed coordinate field");
        }
        if (dim == 0) {
            dim = static_cast<int>(row.size());
            if (dim < 1) {
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                         ": empty data line");
            }
        } else if (static_cast<int>(row.size()) != dim) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected " + std::to_string(dim) + " fields, got " +
                                     std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw std::runtime_error(path.string() + ": no data lines");
    }

    Matrix coords(static_cast<Index>(rows.size()), dim);
    for (Index i = 0; i < coords.rows(); ++i) {
        for (int j = 0; j < dim; ++j) {
            coords(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    PointSet pts(std::move(coords));
    if (!pts.all_finite()) {
        throw std::runtime_error(path.string() + ": non-finite coordinates");
    }
    return pts;
}

void write_point_file(const std::filesystem::path& path, const PointSet& pts) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write point file: " + path.string());
    }
    char buffer[64];
    for (Index i = 0; i < pts.size(); ++i) {
        for (int j = 0; j < pts.dim(); ++j) {
            std::snprintf(buffer, sizeof(buffer), "%.17g", pts.coords(i, j));
            if (j > 0) out << ' ';
            out << buffer;
        }
        out << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

}  // namespace acpd
