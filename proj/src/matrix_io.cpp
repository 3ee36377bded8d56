#include "sparsenc/matrix_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace sparsenc {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& tok, long line) {
    double v = 0.0;
    const char* begin = tok.data();
    const char* end = begin + tok.size();
    auto [p, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || p != end) throw ParseError("invalid number '" + tok + "'", line);
    return v;
}

long parse_long(const std::string& tok, long line) {
    long v = 0;
    const char* begin = tok.data();
    const char* end = begin + tok.size();
    auto [p, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || p != end) throw ParseError("invalid integer '" + tok + "'", line);
    return v;
}

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

Matrix parse_csv(const std::string& text, const std::string& name) {
    std::vector<std::vector<double>> rows;
    std::istringstream is(text);
    std::string line;
    long lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        std::vector<double> row;
        size_t pos = 0;
        while (true) {
            size_t comma = t.find(',', pos);
            std::string tok = trim(t.substr(pos, comma == std::string::npos ? std::string::npos
                                                                            : comma - pos));
            if (tok.empty()) throw ParseError(name + ": empty field", lineno);
            row.push_back(parse_double(tok, lineno));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError(name + ": ragged row (" + std::to_string(row.size()) +
                                 " fields, expected " + std::to_string(rows.front().size()) + ")",
                             lineno);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(name + ": no data", lineno == 0 ? 1 : lineno);
    Matrix m(rows.size(), rows.front().size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows.front().size(); ++j) m(i, j) = rows[i][j];
    return m;
}

Matrix parse_matrix_market(const std::string& text, const std::string& name) {
    std::istringstream is(text);
    std::string line;
    long lineno = 0;

    if (!std::getline(is, line)) throw ParseError(name + ": empty file", 1);
    ++lineno;
    auto header = split_ws(lower(trim(line)));
    if (header.size() < 4 || header[0] != "%%matrixmarket" || header[1] != "matrix")
        throw ParseError(name + ": missing %%MatrixMarket header", lineno);
    std::string fmt = header[2];
    std::string field = header.size() > 3 ? header[3] : "";
    std::string sym = header.size() > 4 ? header[4] : "general";
    if (fmt != "array" && fmt != "coordinate")
        throw ParseError(name + ": unsupported format '" + fmt + "'", lineno);
    if (field != "real" && field != "integer")
        throw ParseError(name + ": unsupported field '" + field + "'", lineno);
    if (sym != "general" && sym != "symmetric")
        throw ParseError(name + ": unsupported symmetry '" + sym + "'", lineno);

    auto next_data_line = [&](std::string& out) {
        while (std::getline(is, line)) {
            ++lineno;
            std::string t = trim(line);
            if (t.empty() || t[0] == '%') continue;
            out = t;
            return true;
        }
        return false;
    };

    std::string size_line;
    if (!next_data_line(size_line)) throw ParseError(name + ": missing size line", lineno);
    auto size_tok = split_ws(size_line);

    if (fmt == "array") {
        if (size_tok.size() != 2) throw ParseError(name + ": array size line needs 2 fields", lineno);
        long rows = parse_long(size_tok[0], lineno);
        long cols = parse_long(size_tok[1], lineno);
        if (rows < 1 || cols < 1) throw ParseError(name + ": bad dimensions", lineno);
        if (sym == "symmetric" && rows != cols)
            throw ParseError(name + ": symmetric matrix must be square", lineno);

        Matrix m(rows, cols);
        std::string tok_line;
        // Array data is column-major; symmetric files carry the lower
        // triangle (i >= j) only.
        std::vector<double> values;
        long expect = sym == "symmetric" ? rows * (rows + 1) / 2 : rows * cols;
        while (static_cast<long>(values.size()) < expect && next_data_line(tok_line)) {
            for (const auto& tok : split_ws(tok_line)) values.push_back(parse_double(tok, lineno));
        }
        if (static_cast<long>(values.size()) != expect)
            throw ParseError(name + ": expected " + std::to_string(expect) + " values, got " +
                                 std::to_string(values.size()),
                             lineno);
        size_t idx = 0;
        if (sym == "symmetric") {
            for (long j = 0; j < cols; ++j)
                for (long i = j; i < rows; ++i) {
                    m(i, j) = values[idx];
                    m(j, i) = values[idx];
                    ++idx;
                }
        } else {
            for (long j = 0; j < cols; ++j)
                for (long i = 0; i < rows; ++i) m(i, j) = values[idx++];
        }
        return m;
    }

    if (size_tok.size() != 3)
        throw ParseError(name + ": coordinate size line needs 3 fields", lineno);
    long rows = parse_long(size_tok[0], lineno);
    long cols = parse_long(size_tok[1], lineno);
    long nnz = parse_long(size_tok[2], lineno);
    if (rows < 1 || cols < 1 || nnz < 0) throw ParseError(name + ": bad dimensions", lineno);
    if (sym == "symmetric" && rows != cols)
        throw ParseError(name + ": symmetric matrix must be square", lineno);

    Matrix m = Matrix::Zero(rows, cols);
    std::string entry;
    for (long e = 0; e < nnz; ++e) {
        if (!next_data_line(entry))
            throw ParseError(name + ": expected " + std::to_string(nnz) + " entries, got " +
                                 std::to_string(e),
                             lineno);
        auto tok = split_ws(entry);
        if (tok.size() != 3) throw ParseError(name + ": entry needs 3 fields", lineno);
        long i = parse_long(tok[0], lineno) - 1;
        long j = parse_long(tok[1], lineno) - 1;
        double v = parse_double(tok[2], lineno);
        if (i < 0 || i >= rows || j < 0 || j >= cols)
            throw ParseError(name + ": entry out of bounds", lineno);
        // Duplicate entries accumulate.
        m(i, j) += v;
        if (sym == "symmetric" && i != j) m(j, i) += v;
    }
    return m;
}

bool looks_like_matrix_market(const std::string& path, const std::string& text) {
    std::string lp = lower(path);
    if (lp.size() >= 4 && lp.substr(lp.size() - 4) == ".mtx") return true;
    if (lp.size() >= 3 && lp.substr(lp.size() - 3) == ".mm") return true;
    if (lp.size() >= 4 && lp.substr(lp.size() - 4) == ".csv") return false;
    return text.rfind("%%MatrixMarket", 0) == 0 || text.rfind("%%matrixmarket", 0) == 0;
}

void append_number(std::string& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

}  // namespace

Matrix parse_matrix(const std::string& text, MatrixFormat format, const std::string& name) {
    if (format == MatrixFormat::Auto)
        format = looks_like_matrix_market(name, text) ? MatrixFormat::MatrixMarket
                                                      : MatrixFormat::Csv;
    Matrix m = format == MatrixFormat::Csv ? parse_csv(text, name) : parse_matrix_market(text, name);
    if (!m.allFinite()) throw InputError(name + ": non-finite entries");
    return m;
}

Matrix load_matrix(const std::string& path, MatrixFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_matrix(buf.str(), format, path);
}

std::string format_matrix(const Matrix& m, MatrixFormat format) {
    if (format == MatrixFormat::Auto) format = MatrixFormat::Csv;
    std::string out;
    if (format == MatrixFormat::Csv) {
        for (int i = 0; i < m.rows(); ++i) {
            for (int j = 0; j < m.cols(); ++j) {
                if (j > 0) out += ',';
                append_number(out, m(i, j));
            }
            out += '\n';
        }
        return out;
    }
    out = "%%MatrixMarket matrix array real general\n";
    out += std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
    for (int j = 0; j < m.cols(); ++j)
        for (int i = 0; i < m.rows(); ++i) {
            append_number(out, m(i, j));
            out += '\n';
        }
    return out;
}

void save_matrix(const std::string& path, const Matrix& m, MatrixFormat format) {
    if (format == MatrixFormat::Auto)
        format = looks_like_matrix_market(path, "") ? MatrixFormat::MatrixMarket
                                                    : MatrixFormat::Csv;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << format_matrix(m, format);
    if (!out) throw InputError("write failed for '" + path + "'");
}

}  // namespace sparsenc
