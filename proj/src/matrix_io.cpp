#include "grafl/matrix_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <unistd.h>

#include "grafl/error.hpp"

namespace grafl {

void write_atomic(const std::string& path, const std::function<void(std::ostream&)>& writer) {
    const std::string tmp = path + ".tmp." + std::to_string(::getpid());
    try {
        {
            std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
            if (!os) throw Error("cannot open '" + tmp + "' for writing");
            writer(os);
            os.flush();
            if (!os) throw Error("write to '" + tmp + "' failed");
        }
        std::filesystem::rename(tmp, path);
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(tmp, ec);
        throw;
    }
}

std::string element_label(const Graph& g, ElementKind kind, std::uint32_t index) {
    auto node = [&](NodeId v) {
        const auto& names = g.node_names();
        return names.empty() ? std::to_string(v) : names[v];
    };
    if (kind == ElementKind::node) return node(index);
    const auto ep = g.endpoints(index);
    return node(ep.src) + ":" + node(ep.dst);
}

MatrixFormat parse_matrix_format(const std::string& s) {
    if (s == "csv") return MatrixFormat::csv;
    if (s == "triplet") return MatrixFormat::triplet;
    throw ConfigError("unknown matrix format '" + s + "' (expected csv or triplet)");
}

void write_matrix_csv(std::ostream& os, const Graph& g, const FeatureMatrix& x) {
    os << "element_id";
    for (std::size_t j = 0; j < x.cols(); ++j) os << ",f" << j;
    os << '\n';
    for (std::size_t i = 0; i < x.rows(); ++i) {
        os << element_label(g, x.kind(), std::uint32_t(i));
        for (std::size_t j = 0; j < x.cols(); ++j) os << ',' << x.column(j)[Eigen::Index(i)];
        os << '\n';
    }
}

void write_matrix_triplets(std::ostream& os, const Graph& g, const FeatureMatrix& x) {
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const std::string id = element_label(g, x.kind(), std::uint32_t(i));
        for (std::size_t j = 0; j < x.cols(); ++j)
            if (const Bin b = x.column(j)[Eigen::Index(i)]; b != 0) os << id << ' ' << j << ' ' << b << '\n';
    }
}

void save_matrix(const std::string& path, const Graph& g, const FeatureMatrix& x, MatrixFormat format) {
    write_atomic(path, [&](std::ostream& os) {
        if (format == MatrixFormat::csv)
            write_matrix_csv(os, g, x);
        else
            write_matrix_triplets(os, g, x);
    });
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

ValueTable read_values_csv(std::istream& in) {
    ValueTable t;
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError("empty matrix file");
    ++lineno;
    auto header = split_commas(line);
    if (header.empty()) throw ParseError("missing header", lineno);
    t.columns.assign(header.begin() + 1, header.end());
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto cells = split_commas(line);
        if (cells.size() != header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " fields, found " +
                                 std::to_string(cells.size()),
                             lineno);
        t.ids.push_back(cells[0]);
        std::vector<double> row;
        for (std::size_t j = 1; j < cells.size(); ++j) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cells[j], &used));
                if (used != cells[j].size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw ParseError("column " + header[j] + ": '" + cells[j] + "' is not a number", lineno);
            }
        }
        rows.push_back(std::move(row));
    }
    t.values.resize(Eigen::Index(rows.size()), Eigen::Index(t.columns.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < t.columns.size(); ++j) t.values(Eigen::Index(i), Eigen::Index(j)) = rows[i][j];
    return t;
}

ValueTable load_values_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open matrix file '" + path + "'");
    return read_values_csv(in);
}

void write_values_csv(std::ostream& os, const ValueTable& t) {
    os << "element_id";
    for (const auto& c : t.columns) os << ',' << c;
    os << '\n' << std::setprecision(17);
    for (Eigen::Index i = 0; i < t.values.rows(); ++i) {
        os << t.ids[std::size_t(i)];
        for (Eigen::Index j = 0; j < t.values.cols(); ++j) os << ',' << t.values(i, j);
        os << '\n';
    }
}

}  // namespace grafl
