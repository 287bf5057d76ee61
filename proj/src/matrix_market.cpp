#include "eigsim/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace eigsim {

namespace {

enum class Layout { Coordinate, Array };
enum class Field { Real, Integer, Complex };
enum class Symmetry { General, Symmetric, Hermitian, SkewSymmetric };

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

[[noreturn]] void fail(const std::string& source, long line, const std::string& what) {
    throw ParseError(source + ":" + std::to_string(line) + ": " + what);
}

double parse_number(const std::string& token, const std::string& source, long line) {
    char* end = nullptr;
    const double value = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0')
        fail(source, line, "expected a number, got \"" + token + "\"");
    return value;
}

long long parse_integer(const std::string& token, const std::string& source, long line) {
    char* end = nullptr;
    const long long value = std::strtoll(token.c_str(), &end, 10);
    if (end == token.c_str() || *end != '\0')
        fail(source, line, "expected an integer, got \"" + token + "\"");
    return value;
}

std::vector<std::string> tokens_of(const std::string& line) {
    std::istringstream ss(line);
    std::vector<std::string> out;
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    return out;
}

}  // namespace

ComplexMatrix parse_matrix_market(std::istream& in, const std::string& source) {
    std::string line;
    long line_no = 0;

    if (!std::getline(in, line)) fail(source, 1, "empty stream");
    ++line_no;
    const auto header = tokens_of(line);
    if (header.size() < 5 || lower(header[0]) != "%%matrixmarket" || lower(header[1]) != "matrix")
        fail(source, line_no, "missing %%MatrixMarket matrix header");

    Layout layout;
    const std::string layout_word = lower(header[2]);
    if (layout_word == "coordinate")
        layout = Layout::Coordinate;
    else if (layout_word == "array")
        layout = Layout::Array;
    else
        fail(source, line_no, "unsupported layout \"" + header[2] + "\"");

    Field field;
    const std::string field_word = lower(header[3]);
    if (field_word == "real")
        field = Field::Real;
    else if (field_word == "integer")
        field = Field::Integer;
    else if (field_word == "complex")
        field = Field::Complex;
    else
        fail(source, line_no, "unsupported field \"" + header[3] + "\" (pattern matrices carry no values)");

    Symmetry symmetry;
    const std::string sym_word = lower(header[4]);
    if (sym_word == "general")
        symmetry = Symmetry::General;
    else if (sym_word == "symmetric")
        symmetry = Symmetry::Symmetric;
    else if (sym_word == "hermitian")
        symmetry = Symmetry::Hermitian;
    else if (sym_word == "skew-symmetric")
        symmetry = Symmetry::SkewSymmetric;
    else
        fail(source, line_no, "unsupported symmetry \"" + header[4] + "\"");

    // Size line: first non-comment, non-blank line.
    std::vector<std::string> size_tokens;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line[0] == '%') continue;
        size_tokens = tokens_of(line);
        if (!size_tokens.empty()) break;
    }
    if (size_tokens.empty()) fail(source, line_no, "missing size line");

    const std::size_t expected_size_tokens = layout == Layout::Coordinate ? 3 : 2;
    if (size_tokens.size() != expected_size_tokens)
        fail(source, line_no, "size line needs " + std::to_string(expected_size_tokens) +
                                  " fields, got " + std::to_string(size_tokens.size()));
    const Index rows = static_cast<Index>(parse_integer(size_tokens[0], source, line_no));
    const Index cols = static_cast<Index>(parse_integer(size_tokens[1], source, line_no));
    if (rows < 0 || cols < 0) fail(source, line_no, "negative matrix shape");
    if (symmetry != Symmetry::General && rows != cols)
        fail(source, line_no, "symmetric storage needs a square matrix");

    const std::size_t values_per_entry = field == Field::Complex ? 2 : 1;

    if (layout == Layout::Array) {
        const long long expected = static_cast<long long>(rows) * cols;
        if (symmetry != Symmetry::General)
            fail(source, line_no, "array layout is supported for general symmetry only");
        CMatrix dense(rows, cols);
        long long filled = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line[0] == '%') continue;
            const auto toks = tokens_of(line);
            if (toks.empty()) continue;
            if (toks.size() != values_per_entry)
                fail(source, line_no, "array entry needs " + std::to_string(values_per_entry) +
                                          " values, got " + std::to_string(toks.size()));
            if (filled >= expected) fail(source, line_no, "more entries than rows*cols");
            const double re = parse_number(toks[0], source, line_no);
            const double im =
                field == Field::Complex ? parse_number(toks[1], source, line_no) : 0.0;
            dense(static_cast<Index>(filled % rows), static_cast<Index>(filled / rows)) =
                cxd(re, im);  // column-major fill
            ++filled;
        }
        if (filled != expected)
            throw ParseError(source + ": array body has " + std::to_string(filled) +
                             " of " + std::to_string(expected) + " entries");
        return ComplexMatrix::from_dense(dense);
    }

    const long long nnz = parse_integer(size_tokens[2], source, line_no);
    if (nnz < 0) fail(source, line_no, "negative entry count");

    std::vector<CTriplet> entries;
    entries.reserve(static_cast<std::size_t>(2 * nnz));
    std::set<std::pair<Index, Index>> seen;
    long long read = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line[0] == '%') continue;
        const auto toks = tokens_of(line);
        if (toks.empty()) continue;
        if (toks.size() != 2 + values_per_entry)
            fail(source, line_no, "coordinate entry needs " + std::to_string(2 + values_per_entry) +
                                      " fields, got " + std::to_string(toks.size()));
        if (read >= nnz) fail(source, line_no, "more entries than declared");
        const Index i = static_cast<Index>(parse_integer(toks[0], source, line_no)) - 1;
        const Index j = static_cast<Index>(parse_integer(toks[1], source, line_no)) - 1;
        if (i < 0 || i >= rows || j < 0 || j >= cols)
            fail(source, line_no, "entry (" + toks[0] + ", " + toks[1] + ") outside a " +
                                      std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
        if (!seen.emplace(i, j).second)
            fail(source, line_no, "duplicate entry (" + toks[0] + ", " + toks[1] + ")");
        const double re = parse_number(toks[2], source, line_no);
        const double im = field == Field::Complex ? parse_number(toks[3], source, line_no) : 0.0;
        const cxd value(re, im);

        switch (symmetry) {
            case Symmetry::General:
                entries.emplace_back(i, j, value);
                break;
            case Symmetry::Symmetric:
                if (j > i) fail(source, line_no, "symmetric storage expects lower-triangular entries");
                entries.emplace_back(i, j, value);
                if (i != j) entries.emplace_back(j, i, value);
                break;
            case Symmetry::Hermitian:
                if (j > i) fail(source, line_no, "hermitian storage expects lower-triangular entries");
                entries.emplace_back(i, j, value);
                if (i != j) entries.emplace_back(j, i, std::conj(value));
                break;
            case Symmetry::SkewSymmetric:
                if (j >= i)
                    fail(source, line_no, "skew-symmetric storage expects strictly lower entries");
                entries.emplace_back(i, j, value);
                entries.emplace_back(j, i, -value);
                break;
        }
        ++read;
    }
    if (read != nnz)
        throw ParseError(source + ": body has " + std::to_string(read) + " of " +
                         std::to_string(nnz) + " declared entries");
    return ComplexMatrix::from_triplets(rows, cols, entries);
}

ComplexMatrix ingest_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open matrix file \"" + path + "\"");
    return parse_matrix_market(in, path);
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string to_matrix_market(const ComplexMatrix& m) {
    std::ostringstream out;
    if (m.storage() == ComplexMatrix::Storage::Dense) {
        out << "%%MatrixMarket matrix array complex general\n";
        out << m.rows() << " " << m.cols() << "\n";
        const CMatrix dense = m.to_dense();
        for (Index j = 0; j < m.cols(); ++j)
            for (Index i = 0; i < m.rows(); ++i)
                out << format_double(dense(i, j).real()) << " "
                    << format_double(dense(i, j).imag()) << "\n";
        return out.str();
    }
    out << "%%MatrixMarket matrix coordinate complex general\n";
    const auto entries = m.triplets();
    out << m.rows() << " " << m.cols() << " " << entries.size() << "\n";
    for (const auto& t : entries)
        out << (t.row() + 1) << " " << (t.col() + 1) << " " << format_double(t.value().real())
            << " " << format_double(t.value().imag()) << "\n";
    return out.str();
}

void export_matrix(const ComplexMatrix& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file \"" + path + "\"");
    out << to_matrix_market(m);
    if (!out) throw IoError("failed writing matrix to \"" + path + "\"");
}

}  // namespace eigsim
