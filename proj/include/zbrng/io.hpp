#pragma once

// Text formats: rings and pointed algebras ("zbrng 1"), s-matrices
// ("smatrix 1"), Hadamard matrices (+/- rows) and lift presentations.
//
// Blank lines and '#' comments are ignored everywhere. Malformed input raises
// InputError with the offending line number.

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "zbrng/error.hpp"
#include "zbrng/exact.hpp"
#include "zbrng/hadamard.hpp"
#include "zbrng/quotients.hpp"
#include "zbrng/rng_core.hpp"
#include "zbrng/spectra.hpp"

namespace zbrng {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write '" + path + "'");
    out << text;
    if (!out) throw InputError("write failed for '" + path + "'");
}

namespace detail {

struct Line {
    std::size_t number;
    std::vector<std::string> tokens;
};

class LineReader {
public:
    explicit LineReader(std::string_view text) {
        std::size_t number = 0, start = 0;
        while (start <= text.size()) {
            std::size_t end = text.find('\n', start);
            if (end == std::string_view::npos) end = text.size();
            ++number;
            std::string_view raw = text.substr(start, end - start);
            if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
            std::istringstream ss{std::string(raw)};
            Line line{number, {}};
            for (std::string tok; ss >> tok;) line.tokens.push_back(tok);
            if (!line.tokens.empty()) lines_.push_back(std::move(line));
            start = end + 1;
        }
    }

    bool done() const { return next_ == lines_.size(); }

    const Line& peek() const {
        if (done()) throw InputError("unexpected end of input");
        return lines_[next_];
    }

    const Line& take() {
        const Line& l = peek();
        ++next_;
        return l;
    }

    /// Take a line whose first token is `keyword` and that has `count` more tokens
    /// (any number when count is npos).
    const Line& expect(const std::string& keyword, std::size_t count = std::string::npos) {
        const Line& l = take();
        if (l.tokens[0] != keyword) fail(l, "expected '" + keyword + "', found '" + l.tokens[0] + "'");
        if (count != std::string::npos && l.tokens.size() != count + 1)
            fail(l, "'" + keyword + "' takes " + std::to_string(count) + " value(s)");
        return l;
    }

    [[noreturn]] static void fail(const Line& l, const std::string& what) {
        throw InputError("line " + std::to_string(l.number) + ": " + what);
    }

private:
    std::vector<Line> lines_;
    std::size_t next_ = 0;
};

inline long long parse_int(const Line& l, const std::string& tok) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(tok, &used);
    } catch (const std::exception&) {
        LineReader::fail(l, "not an integer: '" + tok + "'");
    }
    if (used != tok.size()) LineReader::fail(l, "not an integer: '" + tok + "'");
    return v;
}

inline std::size_t parse_index(const Line& l, const std::string& tok, std::size_t bound) {
    const long long v = parse_int(l, tok);
    if (v < 0 || static_cast<unsigned long long>(v) >= bound)
        LineReader::fail(l, "index " + tok + " out of range [0, " + std::to_string(bound) + ")");
    return static_cast<std::size_t>(v);
}

inline std::size_t parse_size(const Line& l, const std::string& tok, std::size_t limit) {
    const long long v = parse_int(l, tok);
    if (v < 1 || static_cast<unsigned long long>(v) > limit)
        LineReader::fail(l, "size " + tok + " out of range [1, " + std::to_string(limit) + "]");
    return static_cast<std::size_t>(v);
}

inline double parse_double(const Line& l, const std::string& tok) {
    const char* begin = tok.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + tok.size() || !std::isfinite(v)) LineReader::fail(l, "not a number: '" + tok + "'");
    return v;
}

inline std::string format_double(double v) {
    if (v == 0) return "0"; // also folds -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Rings and pointed algebras
//
//   zbrng 1
//   n <n>
//   involution <p_0> ... <p_{n-1}>      optional
//   N <i>                               n blocks of n rows (row j, column m)
//   ...
// Instead of N blocks the products may be listed sparsely as
//   terms <count>
//   <i> <j> <m> <c>                     one line per nonzero N_ij^m
// Lift presentations append
//   distinguished <d_0> ... <d_{r-1}>
//   ideal <label> : <mu_0> ... <mu_{r-1}>   one per basis element

inline constexpr std::size_t kMaxDenseRank = 512;
inline constexpr std::size_t kMaxSparseRank = 1 << 16;

struct IdealLine {
    std::string label;
    std::vector<std::int64_t> coefficients;
};

struct AlgebraFile {
    std::size_t n = 0;
    std::vector<std::vector<PointedAlgebra::Term>> products; // index i * n + j
    std::optional<Permutation> involution;
    std::vector<Index> distinguished;
    std::vector<IdealLine> ideals;
};

inline AlgebraFile parse_algebra(std::string_view text) {
    detail::LineReader in(text);
    const auto& head = in.expect("zbrng", 1);
    if (head.tokens[1] != "1") detail::LineReader::fail(head, "unsupported version " + head.tokens[1]);
    AlgebraFile f;
    const auto& nl = in.expect("n", 1);
    f.n = detail::parse_size(nl, nl.tokens[1], kMaxSparseRank);
    const std::size_t n = f.n;
    f.products.assign(n * n, {});

    if (!in.done() && in.peek().tokens[0] == "involution") {
        const auto& l = in.expect("involution", n);
        Permutation p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = detail::parse_index(l, l.tokens[i + 1], n);
        if (!is_permutation_of_range(p)) detail::LineReader::fail(l, "involution is not a permutation");
        f.involution = std::move(p);
    }

    if (in.peek().tokens[0] == "terms") {
        const auto& l = in.expect("terms", 1);
        const long long count = detail::parse_int(l, l.tokens[1]);
        if (count < 0) detail::LineReader::fail(l, "negative term count");
        for (long long t = 0; t < count; ++t) {
            const auto& tl = in.take();
            if (tl.tokens.size() != 4) detail::LineReader::fail(tl, "term line needs 'i j m c'");
            const Index i = detail::parse_index(tl, tl.tokens[0], n);
            const Index j = detail::parse_index(tl, tl.tokens[1], n);
            const Index m = detail::parse_index(tl, tl.tokens[2], n);
            const std::int64_t c = detail::parse_int(tl, tl.tokens[3]);
            auto& terms = f.products[i * n + j];
            for (const auto& existing : terms)
                if (existing.first == m) detail::LineReader::fail(tl, "duplicate term");
            if (c != 0) terms.emplace_back(m, c);
        }
    } else {
        if (n > kMaxDenseRank) detail::LineReader::fail(nl, "dense blocks limited to n <= " + std::to_string(kMaxDenseRank) + "; use 'terms'");
        for (std::size_t b = 0; b < n; ++b) {
            const auto& bl = in.expect("N", 1);
            const Index i = detail::parse_index(bl, bl.tokens[1], n);
            if (i != b) detail::LineReader::fail(bl, "blocks must appear in order; expected N " + std::to_string(b));
            for (Index j = 0; j < n; ++j) {
                const auto& row = in.take();
                if (row.tokens.size() != n) detail::LineReader::fail(row, "expected " + std::to_string(n) + " integers");
                for (Index m = 0; m < n; ++m) {
                    const std::int64_t c = detail::parse_int(row, row.tokens[m]);
                    if (c != 0) f.products[i * n + j].emplace_back(m, c);
                }
            }
        }
    }

    if (!in.done() && in.peek().tokens[0] == "distinguished") {
        const auto& l = in.take();
        if (l.tokens.size() < 2) detail::LineReader::fail(l, "empty distinguished list");
        for (std::size_t t = 1; t < l.tokens.size(); ++t) f.distinguished.push_back(detail::parse_index(l, l.tokens[t], n));
        while (!in.done() && in.peek().tokens[0] == "ideal") {
            const auto& il = in.take();
            if (il.tokens.size() != f.distinguished.size() + 3 || il.tokens[2] != ":")
                detail::LineReader::fail(il, "ideal line needs '<label> : ' and " + std::to_string(f.distinguished.size()) + " integers");
            IdealLine ideal{il.tokens[1], {}};
            for (std::size_t t = 3; t < il.tokens.size(); ++t) ideal.coefficients.push_back(detail::parse_int(il, il.tokens[t]));
            f.ideals.push_back(std::move(ideal));
        }
        if (f.ideals.size() != n) throw InputError("lift file needs one ideal line per basis element");
    }
    if (!in.done()) detail::LineReader::fail(in.peek(), "unexpected content '" + in.peek().tokens[0] + "'");
    return f;
}

inline StructureTensor to_tensor(const AlgebraFile& f) {
    if (f.n > kMaxDenseRank) throw InputError("algebra too large for a dense tensor");
    StructureTensor N(f.n);
    for (Index i = 0; i < f.n; ++i)
        for (Index j = 0; j < f.n; ++j)
            for (const auto& [m, c] : f.products[i * f.n + j]) N(i, j, m) = c;
    return N;
}

/// A ring file with an involution line; FusionRing checks commutativity.
inline FusionRing parse_ring(std::string_view text) {
    AlgebraFile f = parse_algebra(text);
    if (!f.involution) throw InputError("ring file has no involution line");
    return FusionRing(to_tensor(f), *f.involution);
}

inline LiftPresentation parse_lift(std::string_view text) {
    AlgebraFile f = parse_algebra(text);
    if (f.distinguished.empty()) throw InputError("lift file has no distinguished line");
    LiftPresentation L;
    std::vector<std::string> labels;
    for (auto& ideal : f.ideals) {
        labels.push_back(ideal.label);
        L.embedding.push_back(std::move(ideal.coefficients));
    }
    L.lifted = PointedAlgebra::from_products(f.n, f.products, std::move(labels));
    L.distinguished = std::move(f.distinguished);
    return L;
}

namespace detail {

inline void write_dense(std::ostringstream& out, const StructureTensor& N) {
    const std::size_t n = N.size();
    for (Index i = 0; i < n; ++i) {
        out << "N " << i << '\n';
        for (Index j = 0; j < n; ++j) {
            for (Index m = 0; m < n; ++m) out << (m ? " " : "") << N(i, j, m);
            out << '\n';
        }
    }
}

} // namespace detail

inline std::string format_tensor(const StructureTensor& N, const std::optional<Permutation>& involution = std::nullopt) {
    std::ostringstream out;
    out << "zbrng 1\nn " << N.size() << '\n';
    if (involution) {
        out << "involution";
        for (Index p : *involution) out << ' ' << p;
        out << '\n';
    }
    detail::write_dense(out, N);
    return out.str();
}

inline std::string format_ring(const FusionRing& R) { return format_tensor(R.tensor(), R.tilde()); }

/// Dense blocks up to `dense_limit` basis elements, sparse terms beyond.
inline std::string format_pointed(const PointedAlgebra& A, std::size_t dense_limit = 64) {
    std::ostringstream out;
    const std::size_t m = A.size();
    out << "zbrng 1\nn " << m << '\n';
    if (m <= dense_limit) {
        detail::write_dense(out, A.to_tensor());
    } else {
        std::size_t count = 0;
        for (Index i = 0; i < m; ++i)
            for (Index j = 0; j < m; ++j) count += A.product(i, j).size();
        out << "terms " << count << '\n';
        for (Index i = 0; i < m; ++i)
            for (Index j = 0; j < m; ++j)
                for (const auto& [k, c] : A.product(i, j)) out << i << ' ' << j << ' ' << k << ' ' << c << '\n';
    }
    return out.str();
}

inline std::string format_lift(const LiftPresentation& L, std::size_t dense_limit = 64) {
    std::ostringstream out;
    out << format_pointed(L.lifted, dense_limit);
    out << "distinguished";
    for (Index d : L.distinguished) out << ' ' << d;
    out << '\n';
    for (std::size_t w = 0; w < L.embedding.size(); ++w) {
        out << "ideal " << L.lifted.labels()[w] << " :";
        for (std::int64_t c : L.embedding[w]) out << ' ' << c;
        out << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// s-matrices
//
//   smatrix 1
//   n <rows> <cols>             exact: cyclotomic literals
//   n <rows> <cols> numeric     numeric: <re> or (<re>,<im>)

inline constexpr std::size_t kMaxSMatrixRank = 4096;

namespace detail {

inline Complex parse_complex(const Line& l, const std::string& tok) {
    if (tok.size() >= 2 && tok.front() == '(' && tok.back() == ')') {
        const auto comma = tok.find(',');
        if (comma == std::string::npos) LineReader::fail(l, "complex entry needs '(re,im)'");
        return {parse_double(l, tok.substr(1, comma - 1)), parse_double(l, tok.substr(comma + 1, tok.size() - comma - 2))};
    }
    return {parse_double(l, tok), 0.0};
}

} // namespace detail

inline SMatrix parse_smatrix(std::string_view text) {
    detail::LineReader in(text);
    const auto& head = in.expect("smatrix", 1);
    if (head.tokens[1] != "1") detail::LineReader::fail(head, "unsupported version " + head.tokens[1]);
    const auto& nl = in.expect("n");
    if (nl.tokens.size() != 3 && !(nl.tokens.size() == 4 && nl.tokens[3] == "numeric"))
        detail::LineReader::fail(nl, "expected 'n <rows> <cols> [numeric]'");
    const std::size_t rows = detail::parse_size(nl, nl.tokens[1], kMaxSMatrixRank);
    const std::size_t cols = detail::parse_size(nl, nl.tokens[2], kMaxSMatrixRank);
    const bool numeric = nl.tokens.size() == 4;

    CycMatrix exact(numeric ? 0 : rows, numeric ? 0 : cols);
    Eigen::MatrixXcd approx;
    if (numeric) approx.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        const auto& l = in.take();
        if (l.tokens.size() != cols) detail::LineReader::fail(l, "expected " + std::to_string(cols) + " entries");
        for (std::size_t c = 0; c < cols; ++c) {
            if (numeric) {
                approx(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = detail::parse_complex(l, l.tokens[c]);
                continue;
            }
            try {
                exact(r, c) = parse_cyc(l.tokens[c]);
            } catch (const ParseError& e) {
                detail::LineReader::fail(l, "entry " + std::to_string(c) + ": " + e.what());
            }
        }
    }
    if (!in.done()) detail::LineReader::fail(in.peek(), "unexpected content after the last row");
    return numeric ? SMatrix(std::move(approx)) : SMatrix(std::move(exact));
}

inline std::string format_smatrix(const SMatrix& s) {
    std::ostringstream out;
    out << "smatrix 1\nn " << s.rows() << ' ' << s.cols();
    if (!s.is_exact()) out << " numeric";
    out << '\n';
    for (std::size_t r = 0; r < s.rows(); ++r) {
        for (std::size_t c = 0; c < s.cols(); ++c) {
            if (c) out << ' ';
            if (s.is_exact()) {
                out << format_cyc(s.exact()(r, c));
                continue;
            }
            const Complex z = s.numeric()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            if (z.imag() == 0) out << detail::format_double(z.real());
            else out << '(' << detail::format_double(z.real()) << ',' << detail::format_double(z.imag()) << ')';
        }
        out << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Hadamard matrices: one row per line, either contiguous '+'/'-' characters or
// whitespace-separated 1/-1 integers. The matrix is normalized on input.

inline IntMatrix parse_sign_matrix(std::string_view text) {
    detail::LineReader in(text);
    std::vector<std::vector<std::int64_t>> rows;
    while (!in.done()) {
        const auto& l = in.take();
        std::vector<std::int64_t> row;
        const bool signs = l.tokens.size() == 1 && l.tokens[0].find_first_not_of("+-") == std::string::npos;
        if (signs) {
            for (char ch : l.tokens[0]) row.push_back(ch == '+' ? 1 : -1);
        } else {
            for (const auto& tok : l.tokens) {
                const long long v = detail::parse_int(l, tok);
                if (v != 1 && v != -1) detail::LineReader::fail(l, "entries must be 1 or -1");
                row.push_back(v);
            }
        }
        if (!rows.empty() && row.size() != rows[0].size()) detail::LineReader::fail(l, "row length differs from the first row");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InputError("empty Hadamard file");
    IntMatrix m(rows.size(), rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    return m;
}

inline HadamardMatrix parse_hadamard(std::string_view text) { return normalize_hadamard(parse_sign_matrix(text)); }

inline std::string format_sign_matrix(const IntMatrix& m) {
    std::string out;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) out += m(r, c) > 0 ? '+' : '-';
        out += '\n';
    }
    return out;
}

inline std::string format_hadamard(const HadamardMatrix& h) { return format_sign_matrix(h.matrix()); }

} // namespace zbrng
