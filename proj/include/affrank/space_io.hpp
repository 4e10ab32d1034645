#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "affrank/space.hpp"

namespace affrank {

namespace detail {

inline Matrix matrix_from_json(const nlohmann::json& grid, FieldSpec f, const char* what) {
    if (!grid.is_array()) throw usage_error(std::string("space file: ") + what + " must be an array");
    int rows = int(grid.size());
    int cols = rows == 0 ? 0 : int(grid[0].size());
    Matrix m(f, rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (!grid[size_t(i)].is_array() || int(grid[size_t(i)].size()) != cols)
            throw usage_error(std::string("space file: ragged rows in ") + what);
        for (int j = 0; j < cols; ++j) {
            const auto& cell = grid[size_t(i)][size_t(j)];
            if (!cell.is_number_integer())
                throw usage_error(std::string("space file: non-integer entry in ") + what);
            long long v = cell.get<long long>();
            if (v < 0 || v >= f.q)
                throw usage_error(std::string("space file: entry ") + std::to_string(v) + " in " +
                                  what + " is not a reduced residue mod " + std::to_string(f.q));
            m.set(i, j, unsigned(v));
        }
    }
    return m;
}

} // namespace detail

/// Parses the one-document space file format and returns the canonical space.
inline AffineMatrixSpace read_space_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw usage_error(std::string("space file: invalid document: ") + e.what());
    }
    if (!doc.is_object()) throw usage_error("space file: top level must be an object");
    for (const char* key : {"q", "n", "ambient", "base", "basis"})
        if (!doc.contains(key))
            throw usage_error(std::string("space file: missing field \"") + key + "\"");
    if (!doc["q"].is_number_integer() || !doc["n"].is_number_integer())
        throw usage_error("space file: q and n must be integers");
    FieldSpec f(doc["q"].get<unsigned>());
    int n = doc["n"].get<int>();
    std::string ambient_name = doc["ambient"].get<std::string>();
    AmbientKind ambient = AmbientKind::symmetric(1);
    if (ambient_name == "symmetric") {
        ambient = AmbientKind::symmetric(n);
    } else if (ambient_name == "alternating") {
        ambient = AmbientKind::alternating(n);
    } else if (ambient_name == "full") {
        if (!doc.contains("p") || !doc["p"].is_number_integer())
            throw usage_error("space file: full ambient requires integer field \"p\"");
        ambient = AmbientKind::full(n, doc["p"].get<int>());
    } else {
        throw usage_error("space file: unknown ambient \"" + ambient_name + "\"");
    }
    Matrix base = detail::matrix_from_json(doc["base"], f, "base");
    if (!doc["basis"].is_array()) throw usage_error("space file: basis must be an array");
    std::vector<Matrix> gens;
    for (const auto& g : doc["basis"]) gens.push_back(detail::matrix_from_json(g, f, "basis"));
    return space_from_generators(ambient, base, gens);
}

inline AffineMatrixSpace read_space_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open space file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return read_space_text(buf.str());
}

/// Byte-stable text form; identical canonical spaces serialize identically.
inline std::string write_space_text(const AffineMatrixSpace& s) {
    std::ostringstream out;
    out << "{ \"q\": " << s.field().q << ", \"n\": " << s.ambient().rows();
    if (s.ambient().kind() == Ambient::full) out << ", \"p\": " << s.ambient().cols();
    out << ", \"ambient\": \"" << s.ambient().name() << "\",\n";
    out << "  \"base\": " << s.base_matrix().to_text() << ",\n";
    out << "  \"basis\": [";
    for (int k = 0; k < s.dim(); ++k) {
        if (k) out << ',';
        out << "\n    " << s.basis_matrix(k).to_text();
    }
    out << (s.dim() ? "\n  ]" : "]") << " }\n";
    return out.str();
}

inline void write_space_file(const std::string& path, const AffineMatrixSpace& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw usage_error("cannot write space file: " + path);
    out << write_space_text(s);
}

} // namespace affrank
