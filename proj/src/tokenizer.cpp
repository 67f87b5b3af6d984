#include "cadkit/tokenizer.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace cadkit
{

std::string_view to_string(Scheme s)
{
    return s == Scheme::A ? "A" : "B";
}

Scheme parse_scheme(std::string_view s)
{
    if (s == "A" || s == "a") {
        return Scheme::A;
    }
    if (s == "B" || s == "b") {
        return Scheme::B;
    }
    throw std::invalid_argument("unknown tokenization scheme '" + std::string(s) + "'");
}

token_error::token_error(const std::string &what, std::size_t position)
    : std::runtime_error(what + " at token " + std::to_string(position)), m_position(position)
{
}

// Vocabulary ---------------------------------------------------------------

Vocabulary::Vocabulary(std::size_t nvars) : m_nvars(nvars)
{
    if (nvars == 0) {
        throw std::invalid_argument("vocabulary needs at least one variable");
    }
    m_tokens = {std::string(tok::bos), std::string(tok::eos), std::string(tok::pad),
                std::string(tok::sep), std::string(tok::feature_sep), std::string(tok::group_sep)};
    for (std::size_t i = 1; i <= nvars; ++i) {
        m_tokens.push_back("x" + std::to_string(i));
    }
    for (const char *t : {"+", "-", "*", "^", "=", ">", ">=", "<", "<=", "!="}) {
        m_tokens.emplace_back(t);
    }
    for (char d = '0'; d <= '9'; ++d) {
        m_tokens.emplace_back(1, d);
    }
    for (char d = '0'; d <= '9'; ++d) {
        m_tokens.push_back(std::string("c") + d);
    }
    index();
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens)
{
    std::size_t nvars = 0;
    for (const auto &t : tokens) {
        if (t.size() > 1 && t[0] == 'x') {
            ++nvars;
        }
    }
    Vocabulary reference(nvars == 0 ? 1 : nvars);
    if (reference.m_tokens != tokens) {
        throw std::invalid_argument("vocabulary file does not match the canonical token layout");
    }
    return reference;
}

void Vocabulary::index()
{
    m_ids.clear();
    for (std::uint32_t i = 0; i < m_tokens.size(); ++i) {
        m_ids.emplace(m_tokens[i], i);
    }
}

bool Vocabulary::contains(std::string_view token) const
{
    return m_ids.find(std::string(token)) != m_ids.end();
}

std::uint32_t Vocabulary::id(std::string_view token) const
{
    const auto it = m_ids.find(std::string(token));
    if (it == m_ids.end()) {
        throw std::out_of_range("token '" + std::string(token) + "' is not in the vocabulary");
    }
    return it->second;
}

const std::string &Vocabulary::token(std::uint32_t id) const
{
    return m_tokens.at(id);
}

std::vector<std::uint32_t> Vocabulary::ids(const TokenSequence &seq) const
{
    std::vector<std::uint32_t> out;
    out.reserve(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const auto it = m_ids.find(seq.tokens[i]);
        if (it == m_ids.end()) {
            throw token_error("out-of-vocabulary token '" + seq.tokens[i] + "'", i);
        }
        out.push_back(it->second);
    }
    return out;
}

TokenSequence Vocabulary::from_ids(std::span<const std::uint32_t> ids, SequenceKind kind) const
{
    TokenSequence seq{kind, {}};
    seq.tokens.reserve(ids.size());
    for (const auto id : ids) {
        seq.tokens.push_back(token(id));
    }
    return seq;
}

namespace
{

void push_digits(std::vector<std::string> &out, const std::string &decimal, bool coefficient)
{
    for (const char d : decimal) {
        out.push_back(coefficient ? std::string("c") + d : std::string(1, d));
    }
}

bool is_digit_token(std::string_view t)
{
    return t.size() == 1 && t[0] >= '0' && t[0] <= '9';
}

bool is_coef_token(std::string_view t)
{
    return t.size() == 2 && t[0] == 'c' && t[1] >= '0' && t[1] <= '9';
}

bool is_relation_token(std::string_view t)
{
    return t == "=" || t == ">" || t == ">=" || t == "<" || t == "<=" || t == "!=";
}

// Checks framing and returns the half-open body range [1, end).
std::size_t check_frame(const TokenSequence &seq)
{
    const auto &t = seq.tokens;
    if (t.empty() || t.front() != tok::bos) {
        throw token_error("sequence does not start with <s>", 0);
    }
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (t[i] == tok::eos) {
            for (std::size_t j = i + 1; j < t.size(); ++j) {
                if (t[j] != tok::pad) {
                    throw token_error("unexpected token after </s>", j);
                }
            }
            return i;
        }
        if (t[i] == tok::pad) {
            throw token_error("<pad> before </s>", i);
        }
        if (t[i] == tok::bos) {
            throw token_error("nested <s>", i);
        }
    }
    throw token_error("missing </s>", t.size());
}

class Cursor
{
public:
    Cursor(const std::vector<std::string> &tokens, std::size_t begin, std::size_t end)
        : m_tokens(tokens), m_pos(begin), m_end(end)
    {
    }

    bool done() const { return m_pos >= m_end; }
    std::size_t pos() const { return m_pos; }
    std::string_view peek() const { return done() ? std::string_view{} : std::string_view(m_tokens[m_pos]); }
    std::string_view next()
    {
        if (done()) {
            throw token_error("unexpected end of sequence", m_pos);
        }
        return m_tokens[m_pos++];
    }
    bool accept(std::string_view t)
    {
        if (!done() && m_tokens[m_pos] == t) {
            ++m_pos;
            return true;
        }
        return false;
    }
    void expect(std::string_view t)
    {
        if (!accept(t)) {
            throw token_error("expected '" + std::string(t) + "'", m_pos);
        }
    }

    std::string digits(bool coefficient)
    {
        std::string s;
        while (!done() && (coefficient ? is_coef_token(peek()) : is_digit_token(peek()))) {
            s += peek().back();
            ++m_pos;
        }
        if (s.empty()) {
            throw token_error(coefficient ? "expected coefficient digits" : "expected digits", m_pos);
        }
        return s;
    }

private:
    const std::vector<std::string> &m_tokens;
    std::size_t m_pos;
    std::size_t m_end;
};

std::optional<Var> variable_token(std::string_view t, std::size_t nvars)
{
    if (t.size() < 2 || t[0] != 'x') {
        return std::nullopt;
    }
    std::size_t idx = 0;
    for (const char c : t.substr(1)) {
        if (c < '0' || c > '9') {
            return std::nullopt;
        }
        idx = idx * 10 + static_cast<std::size_t>(c - '0');
    }
    if (idx == 0 || idx > nvars) {
        return std::nullopt;
    }
    return idx - 1;
}

Term parse_term(Cursor &cur, std::size_t nvars, Scheme scheme)
{
    Term term{ExponentVector(nvars, 0), Integer(1)};
    const auto start = cur.pos();
    bool has_coef = false;
    if (is_coef_token(cur.peek())) {
        term.coefficient = Integer(cur.digits(true), 10);
        has_coef = true;
    }
    bool first_factor = true;
    std::vector<bool> seen(nvars, false);
    long last_var = -1;
    while (true) {
        if (!first_factor || has_coef) {
            if (cur.peek() != "*") {
                break;
            }
            cur.next();
        }
        const auto at = cur.pos();
        const auto var = variable_token(cur.peek(), nvars);
        if (!var) {
            if (first_factor && !has_coef) {
                throw token_error("expected a coefficient or a variable", at);
            }
            throw token_error("expected a variable after '*'", at);
        }
        cur.next();
        if (seen[*var] || static_cast<long>(*var) < last_var) {
            throw token_error("variables out of order or repeated within a term", at);
        }
        seen[*var] = true;
        last_var = static_cast<long>(*var);
        Exponent e = 1;
        if (cur.accept("^")) {
            const auto s = cur.digits(false);
            if (s.size() > 9) {
                throw token_error("exponent too large", cur.pos());
            }
            e = static_cast<Exponent>(std::stoul(s));
        } else if (scheme == Scheme::A) {
            throw token_error("scheme A requires an explicit exponent", cur.pos());
        }
        term.exponents[*var] = e;
        first_factor = false;
    }
    if (scheme == Scheme::A && !first_factor && std::count(seen.begin(), seen.end(), true) != static_cast<long>(nvars)) {
        throw token_error("scheme A requires every variable in a non-constant term", start);
    }
    return term;
}

Polynomial parse_poly(Cursor &cur, std::size_t nvars, Scheme scheme)
{
    std::vector<Term> terms;
    bool first = true;
    while (true) {
        bool negative = false;
        if (cur.peek() == "+" || cur.peek() == "-") {
            negative = cur.next() == "-";
        } else if (!first) {
            break;
        }
        Term t = parse_term(cur, nvars, scheme);
        if (negative) {
            t.coefficient = -t.coefficient;
        }
        terms.push_back(std::move(t));
        first = false;
    }
    return Polynomial::from_terms(nvars, std::move(terms));
}

} // namespace

TokenSequence encode_system(const PolynomialSystem &sys, Scheme scheme)
{
    TokenSequence seq{SequenceKind::system, {std::string(tok::bos)}};
    auto &out = seq.tokens;
    const auto n = sys.nvars();
    bool first_constraint = true;
    for (const auto &c : sys.constraints()) {
        if (!first_constraint) {
            out.emplace_back(tok::group_sep);
        }
        first_constraint = false;
        if (c.poly.is_zero()) {
            out.emplace_back("c0");
        }
        bool first_term = true;
        for (const auto &t : c.poly.terms()) {
            const bool negative = t.coefficient < 0;
            if (negative) {
                out.emplace_back("-");
            } else if (!first_term) {
                out.emplace_back("+");
            }
            first_term = false;
            const bool constant = total_degree(t.exponents) == 0;
            const Integer mag = abs(t.coefficient);
            bool need_star = false;
            if (constant || mag != 1) {
                push_digits(out, mag.get_str(), true);
                need_star = true;
            }
            if (constant) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                const auto e = t.exponents[j];
                if (scheme == Scheme::B && e == 0) {
                    continue;
                }
                if (need_star) {
                    out.emplace_back("*");
                }
                need_star = true;
                out.push_back("x" + std::to_string(j + 1));
                if (scheme == Scheme::A || e != 1) {
                    out.emplace_back("^");
                    push_digits(out, std::to_string(e), false);
                }
            }
        }
        if (c.relation != Relation::none) {
            out.emplace_back(to_string(c.relation));
            out.emplace_back("c0");
        }
    }
    out.emplace_back(tok::eos);
    return seq;
}

PolynomialSystem decode_system(const TokenSequence &seq, std::size_t nvars, Scheme scheme)
{
    const auto end = check_frame(seq);
    Cursor cur(seq.tokens, 1, end);
    std::vector<Constraint> constraints;
    do {
        Polynomial p = parse_poly(cur, nvars, scheme);
        Relation rel = Relation::none;
        if (is_relation_token(cur.peek())) {
            rel = parse_relation(cur.next());
            bool negative = false;
            if (cur.peek() == "-" || cur.peek() == "+") {
                negative = cur.next() == "-";
            }
            Integer rhs(cur.digits(true));
            if (negative) {
                rhs = -rhs;
            }
            p -= Polynomial::constant(nvars, rhs);
        }
        constraints.push_back({std::move(p), rel});
    } while (cur.accept(tok::group_sep));
    if (!cur.done()) {
        throw token_error("unexpected token '" + std::string(cur.peek()) + "'", cur.pos());
    }
    return PolynomialSystem(nvars, std::move(constraints));
}

TokenSequence encode_ordering(const VariableOrdering &o)
{
    TokenSequence seq{SequenceKind::ordering, {std::string(tok::bos)}};
    for (auto &name : variable_names(o)) {
        seq.tokens.push_back(std::move(name));
    }
    seq.tokens.emplace_back(tok::eos);
    return seq;
}

VariableOrdering decode_ordering(const TokenSequence &seq, std::size_t nvars)
{
    const auto end = check_frame(seq);
    std::vector<Var> order;
    std::vector<bool> seen(nvars, false);
    for (std::size_t i = 1; i < end; ++i) {
        const auto v = variable_token(seq.tokens[i], nvars);
        if (!v) {
            throw token_error("expected a variable token", i);
        }
        if (seen[*v]) {
            throw token_error("variable repeated in ordering", i);
        }
        seen[*v] = true;
        order.push_back(*v);
    }
    if (order.size() != nvars) {
        throw token_error("ordering does not list every variable", end);
    }
    return VariableOrdering(std::move(order));
}

TokenSequence encode_features(const FeatureMatrix &m)
{
    TokenSequence seq{SequenceKind::features, {std::string(tok::bos)}};
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (r > 0) {
            seq.tokens.emplace_back(tok::feature_sep);
        }
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c > 0) {
                seq.tokens.emplace_back(tok::sep);
            }
            push_digits(seq.tokens, std::to_string(m(r, c)), false);
        }
    }
    seq.tokens.emplace_back(tok::eos);
    return seq;
}

namespace
{

std::vector<std::uint64_t> parse_entries(Cursor &cur)
{
    std::vector<std::uint64_t> entries;
    do {
        const auto s = cur.digits(false);
        if (s.size() > 19) {
            throw token_error("feature value too large", cur.pos());
        }
        entries.push_back(std::stoull(s));
    } while (cur.accept(tok::sep));
    return entries;
}

} // namespace

FeatureMatrix decode_features(const TokenSequence &seq)
{
    const auto end = check_frame(seq);
    Cursor cur(seq.tokens, 1, end);
    std::vector<std::uint64_t> values;
    std::vector<std::string> labels;
    std::size_t cols = 0;
    if (!cur.done()) {
        do {
            const auto at = cur.pos();
            auto row = parse_entries(cur);
            if (labels.empty()) {
                cols = row.size();
            } else if (row.size() != cols) {
                throw token_error("feature rows have different lengths", at);
            }
            labels.push_back("f" + std::to_string(labels.size() + 1));
            values.insert(values.end(), row.begin(), row.end());
        } while (cur.accept(tok::feature_sep));
    }
    if (!cur.done()) {
        throw token_error("unexpected token '" + std::string(cur.peek()) + "'", cur.pos());
    }
    return FeatureMatrix(std::move(labels), cols, std::move(values));
}

TokenSequence encode_exponents(const ExponentListing &listing)
{
    TokenSequence seq{SequenceKind::features, {std::string(tok::bos)}};
    for (std::size_t g = 0; g < listing.size(); ++g) {
        if (g > 0) {
            seq.tokens.emplace_back(tok::group_sep);
        }
        for (std::size_t k = 0; k < listing[g].size(); ++k) {
            if (k > 0) {
                seq.tokens.emplace_back(tok::feature_sep);
            }
            const auto &e = listing[g][k];
            for (std::size_t j = 0; j < e.size(); ++j) {
                if (j > 0) {
                    seq.tokens.emplace_back(tok::sep);
                }
                push_digits(seq.tokens, std::to_string(e[j]), false);
            }
        }
    }
    seq.tokens.emplace_back(tok::eos);
    return seq;
}

ExponentListing decode_exponents(const TokenSequence &seq)
{
    const auto end = check_frame(seq);
    Cursor cur(seq.tokens, 1, end);
    ExponentListing out;
    if (cur.done()) {
        return out;
    }
    do {
        std::vector<ExponentVector> group;
        if (!cur.done() && cur.peek() != tok::group_sep) {
            do {
                const auto at = cur.pos();
                const auto entries = parse_entries(cur);
                if (!group.empty() && entries.size() != group.front().size()) {
                    throw token_error("exponent vectors have different lengths", at);
                }
                ExponentVector e;
                for (const auto x : entries) {
                    e.push_back(static_cast<Exponent>(x));
                }
                group.push_back(std::move(e));
            } while (cur.accept(tok::feature_sep));
        }
        out.push_back(std::move(group));
    } while (cur.accept(tok::group_sep));
    if (!cur.done()) {
        throw token_error("unexpected token '" + std::string(cur.peek()) + "'", cur.pos());
    }
    return out;
}

std::vector<TokenSequence> pad_batch(std::vector<TokenSequence> batch)
{
    std::size_t longest = 0;
    for (const auto &s : batch) {
        longest = std::max(longest, s.size());
    }
    for (auto &s : batch) {
        s.tokens.resize(longest, std::string(tok::pad));
    }
    return batch;
}

std::string join_tokens(const TokenSequence &seq)
{
    std::string out;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i > 0) {
            out += ' ';
        }
        out += seq.tokens[i];
    }
    return out;
}

TokenSequence split_tokens(std::string_view text, SequenceKind kind)
{
    TokenSequence seq{kind, {}};
    std::istringstream is{std::string(text)};
    std::string t;
    while (is >> t) {
        seq.tokens.push_back(std::move(t));
    }
    return seq;
}

} // namespace cadkit
