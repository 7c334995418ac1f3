#include "microformal/morphism_file.hpp"

#include <fstream>
#include <optional>
#include <regex>
#include <sstream>

#include "microformal/errors.hpp"
#include "microformal/parse.hpp"

namespace microformal {

namespace {

constexpr int kMaxDimension = 6;

struct Field {
    std::string text;
    std::size_t offset = 0; // 0-based position of text in its line
};

struct Line {
    int number;
    std::string text;
};

std::string prefix(int line) { return "line " + std::to_string(line) + ": "; }

[[noreturn]] void invalid(int line, const std::string& what) { throw ValidationError(prefix(line) + what); }

// Runs f, rewriting positional errors so they point into the file line.
template <class F>
auto located(const Line& line, const Field& field, F&& f) {
    try {
        return f(field.text);
    } catch (const ParseError& e) {
        throw ParseError(prefix(line.number) + e.message(), field.offset + e.column());
    } catch (const ContextError& e) {
        throw ContextError(prefix(line.number) + e.what());
    } catch (const TruncationError& e) {
        throw ValidationError(prefix(line.number) + e.what());
    }
}

int parse_int(const Line& line, const std::string& token, const char* what) {
    if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos || token.size() > 4)
        invalid(line.number, std::string("expected a non-negative integer for ") + what + ", got '" + token + "'");
    return std::stoi(token);
}

std::pair<int, int> parse_dims(const Line& line, std::istringstream& in) {
    std::string a, b, extra;
    in >> a >> b;
    if (in >> extra)
        invalid(line.number, "dims takes two values");
    int n1 = parse_int(line, a, "n1"), n2 = parse_int(line, b, "n2");
    if (n1 < 1 || n2 < 1 || n1 > kMaxDimension || n2 > kMaxDimension)
        invalid(line.number, "dimensions must lie in 1.." + std::to_string(kMaxDimension));
    return {n1, n2};
}

Truncation parse_trunc(const Line& line, std::istringstream& in) {
    std::optional<int> m, j, k, d;
    std::string token;
    while (in >> token) {
        auto eq = token.find('=');
        if (eq == std::string::npos)
            invalid(line.number, "expected KEY=VALUE in trunc, got '" + token + "'");
        std::string key = token.substr(0, eq);
        int value = parse_int(line, token.substr(eq + 1), key.c_str());
        std::optional<int>* slot = key == "M" ? &m : key == "J" ? &j : key == "K" ? &k : key == "D" ? &d : nullptr;
        if (!slot)
            invalid(line.number, "unknown truncation key '" + key + "'");
        if (*slot)
            invalid(line.number, "duplicate truncation key '" + key + "'");
        *slot = value;
    }
    if (!m || !j || !k)
        invalid(line.number, "trunc needs M, J and K");
    if (*k < 1)
        invalid(line.number, "K must be at least 1");
    if (*m > 12 || *j > 12)
        invalid(line.number, "M and J are limited to 12");
    return Truncation{*m, *j, *k, d};
}

// Parts of a wave-function line after the leading `w`.
std::pair<std::optional<Field>, std::optional<Field>> wave_fields(const Line& line, std::size_t start) {
    const std::string& s = line.text;
    std::optional<Field> amp, phase;
    std::size_t pos = s.find_first_not_of(" \t", start);
    if (pos == std::string::npos)
        invalid(line.number, "empty wave-function line");
    if (s[pos] == ':') {
        // w: amp=<expr> phase=<expr>
        static const std::regex key(R"((^|\s)(amp|phase)\s*=)");
        std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> hits; // key, [match, value)
        for (auto it = std::sregex_iterator(s.begin() + static_cast<long>(pos) + 1, s.end(), key);
             it != std::sregex_iterator(); ++it) {
            std::size_t at = pos + 1 + static_cast<std::size_t>(it->position(2));
            hits.push_back({(*it)[2].str(), {at, pos + 1 + static_cast<std::size_t>(it->position(0) + it->length(0))}});
        }
        if (hits.empty() || s.find_first_not_of(" \t", pos + 1) != hits.front().second.first)
            invalid(line.number, "expected amp=<expr> and/or phase=<expr> after 'w:'");
        for (std::size_t h = 0; h < hits.size(); ++h) {
            std::size_t begin = hits[h].second.second;
            std::size_t end = h + 1 < hits.size() ? hits[h + 1].second.first : s.size();
            Field f{s.substr(begin, end - begin), begin};
            auto& slot = hits[h].first == "amp" ? amp : phase;
            if (slot)
                invalid(line.number, "duplicate '" + hits[h].first + "'");
            slot = f;
        }
        return {amp, phase};
    }
    if (s[pos] != '=')
        invalid(line.number, "expected 'w:' or 'w ='");
    // w = amp(<expr>) phase(<expr>)
    pos = s.find_first_not_of(" \t", pos + 1);
    while (pos != std::string::npos) {
        std::size_t open = s.find('(', pos);
        if (open == std::string::npos)
            invalid(line.number, "expected amp(...) or phase(...)");
        std::string name = s.substr(pos, open - pos);
        while (!name.empty() && (name.back() == ' ' || name.back() == '\t'))
            name.pop_back();
        if (name != "amp" && name != "phase")
            throw ParseError(prefix(line.number) + "expected amp(...) or phase(...)", pos + 1);
        int depth = 0;
        std::size_t close = open;
        for (; close < s.size(); ++close) {
            depth += s[close] == '(' ? 1 : s[close] == ')' ? -1 : 0;
            if (depth == 0)
                break;
        }
        if (close == s.size())
            throw ParseError(prefix(line.number) + "unbalanced parentheses", open + 1);
        auto& slot = name == "amp" ? amp : phase;
        if (slot)
            invalid(line.number, "duplicate '" + name + "'");
        slot = Field{s.substr(open + 1, close - open - 1), open + 1};
        pos = s.find_first_not_of(" \t", close + 1);
    }
    return {amp, phase};
}

} // namespace

MorphismFile parse_morphism_file(const std::string& text) {
    std::optional<std::pair<int, int>> dims;
    std::optional<Truncation> trunc;
    std::optional<std::pair<Line, Field>> s_line;
    std::vector<std::pair<Line, std::pair<std::optional<Field>, std::optional<Field>>>> w_lines;

    std::istringstream in(text);
    std::string raw;
    for (int number = 1; std::getline(in, raw); ++number) {
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        while (!raw.empty() && (raw.back() == ' ' || raw.back() == '\t' || raw.back() == '\r'))
            raw.pop_back();
        Line line{number, raw};
        std::size_t start = raw.find_first_not_of(" \t");
        if (start == std::string::npos)
            continue;
        std::istringstream words(raw);
        std::string head;
        words >> head;
        if (head == "dims") {
            if (dims)
                invalid(number, "duplicate dims");
            dims = parse_dims(line, words);
        } else if (head == "trunc") {
            if (trunc)
                invalid(number, "duplicate trunc");
            trunc = parse_trunc(line, words);
        } else if (raw[start] == 'S' && raw.find_first_not_of(" \t", start + 1) != std::string::npos &&
                   raw[raw.find_first_not_of(" \t", start + 1)] == '=') {
            if (s_line)
                invalid(number, "one S per file");
            std::size_t eq = raw.find('=', start);
            s_line = {line, Field{raw.substr(eq + 1), eq + 1}};
        } else if (raw[start] == 'w') {
            w_lines.push_back({line, wave_fields(line, start + 1)});
        } else {
            throw ParseError(prefix(number) + "unrecognized line", start + 1);
        }
    }
    if (!dims)
        throw ValidationError("missing 'dims' line");
    if (!trunc)
        throw ValidationError("missing 'trunc' line");
    if (!s_line)
        throw ValidationError("missing 'S = ...' line");

    auto [n1, n2] = *dims;
    const Truncation t = *trunc;
    ContextPtr gctx = genfun_context(n1, n2);
    const auto& [sl, sf] = *s_line;
    BiSeries series = located(sl, sf, [&](const std::string& e) { return parse_series(e, gctx, t.phase()); });
    if (series.is_zero())
        invalid(sl.number, "S must not be zero");
    GenFun s = [&] {
        try {
            return GenFun::from_series(n1, n2, t, series);
        } catch (const Error& e) {
            invalid(sl.number, e.what());
        }
    }();

    ContextPtr yctx = target_context(n2);
    WaveFunction w(yctx, n2, t);
    SeriesOptions opts;
    opts.allow_negative_hbar = true;
    for (const auto& [line, fields] : w_lines) {
        const auto& [amp_f, phase_f] = fields;
        BiSeries amp = amp_f ? located(line, *amp_f,
                                       [&](const std::string& e) { return parse_series(e, yctx, t.amplitude(), opts); })
                             : BiSeries::one(yctx, t.amplitude());
        BiSeries phase = phase_f ? located(line, *phase_f,
                                           [&](const std::string& e) { return parse_series(e, yctx, t.phase(), opts); })
                                 : BiSeries(yctx, t.phase());
        try {
            w.add_term(std::move(amp), std::move(phase));
        } catch (const Error& e) {
            invalid(line.number, e.what());
        }
    }
    return MorphismFile{n1, n2, t, std::move(s), std::move(w)};
}

MorphismFile load_morphism_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_morphism_file(buf.str());
}

Matrix parse_matrix(const std::string& text) {
    ContextPtr none = Context::make(std::vector<std::string>{});
    Matrix a;
    std::size_t row_start = 0;
    for (;;) {
        std::size_t row_end = text.find(';', row_start);
        std::string row = text.substr(row_start, row_end == std::string::npos ? std::string::npos : row_end - row_start);
        std::vector<GaussRat> entries;
        std::size_t col_start = 0;
        for (;;) {
            std::size_t col_end = row.find(',', col_start);
            std::string cell =
                row.substr(col_start, col_end == std::string::npos ? std::string::npos : col_end - col_start);
            Poly p = parse_poly(cell, none);
            entries.push_back(p.constant_term());
            if (col_end == std::string::npos)
                break;
            col_start = col_end + 1;
        }
        a.push_back(std::move(entries));
        if (row_end == std::string::npos)
            break;
        row_start = row_end + 1;
    }
    for (const auto& row : a)
        if (row.size() != a.size())
            throw MatrixError("matrix must be square, got a row of length " + std::to_string(row.size()) + " in a " +
                              std::to_string(a.size()) + "-row matrix");
    return a;
}

Poly classical_input(const MorphismFile& f) {
    if (f.w.terms().size() != 1)
        throw ValidationError("classical pullback needs exactly one 'w' line, found " +
                              std::to_string(f.w.terms().size()));
    const WaveTerm& t = f.w.terms().front();
    if (!(t.amplitude == BiSeries::one(f.w.context(), f.trunc.amplitude())))
        throw ValidationError("classical pullback needs amplitude 1");
    Poly g(f.w.context());
    for (const auto& [k, p] : t.phase.terms()) {
        if (k.second != 0)
            throw ValidationError("classical pullback needs an h-free phase");
        g += p;
    }
    return g;
}

} // namespace microformal
