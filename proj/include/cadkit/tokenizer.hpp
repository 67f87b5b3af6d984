#ifndef CADKIT_TOKENIZER_HPP
#define CADKIT_TOKENIZER_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cadkit/features.hpp"
#include "cadkit/system.hpp"

namespace cadkit
{

namespace tok
{
inline constexpr std::string_view bos = "<s>";
inline constexpr std::string_view eos = "</s>";
inline constexpr std::string_view pad = "<pad>";
inline constexpr std::string_view sep = "<sep>";
inline constexpr std::string_view feature_sep = ";";
inline constexpr std::string_view group_sep = ",";
} // namespace tok

// A: every non-constant term lists every variable with an explicit exponent.
// B: only variables that occur are written, and exponent 1 is implicit.
enum class Scheme { A, B };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view s);

enum class SequenceKind { system, ordering, features };

struct TokenSequence {
    SequenceKind kind = SequenceKind::system;
    std::vector<std::string> tokens;

    std::size_t size() const noexcept { return tokens.size(); }
    friend bool operator==(const TokenSequence &, const TokenSequence &) = default;
};

class token_error : public std::runtime_error
{
public:
    token_error(const std::string &what, std::size_t position);
    std::size_t position() const noexcept { return m_position; }

private:
    std::size_t m_position;
};

// Token inventory for n variables: special, separators, variables,
// arithmetic, relational, digits, coefficient digits; 36 + n entries.
class Vocabulary
{
public:
    explicit Vocabulary(std::size_t nvars);
    // Rebuilds a vocabulary from its serialized token list.
    static Vocabulary from_tokens(std::vector<std::string> tokens);

    std::size_t size() const noexcept { return m_tokens.size(); }
    std::size_t nvars() const noexcept { return m_nvars; }
    std::span<const std::string> tokens() const noexcept { return m_tokens; }
    bool contains(std::string_view token) const;
    std::uint32_t id(std::string_view token) const;
    const std::string &token(std::uint32_t id) const;

    // Throws token_error on the first out-of-vocabulary token.
    std::vector<std::uint32_t> ids(const TokenSequence &seq) const;
    TokenSequence from_ids(std::span<const std::uint32_t> ids, SequenceKind kind) const;

    friend bool operator==(const Vocabulary &a, const Vocabulary &b) { return a.m_tokens == b.m_tokens; }

private:
    Vocabulary() = default;
    void index();

    std::size_t m_nvars = 0;
    std::vector<std::string> m_tokens;
    std::unordered_map<std::string, std::uint32_t> m_ids;
};

TokenSequence encode_system(const PolynomialSystem &sys, Scheme scheme);
PolynomialSystem decode_system(const TokenSequence &seq, std::size_t nvars, Scheme scheme);

TokenSequence encode_ordering(const VariableOrdering &o);
VariableOrdering decode_ordering(const TokenSequence &seq, std::size_t nvars);

// Rows separated by ';', entries by <sep>, one token per decimal digit.
TokenSequence encode_features(const FeatureMatrix &m);
// Row labels of the result are "f1", "f2", ...
FeatureMatrix decode_features(const TokenSequence &seq);

// Groups separated by ',', vectors by ';', entries by <sep>.
TokenSequence encode_exponents(const ExponentListing &listing);
ExponentListing decode_exponents(const TokenSequence &seq);

// Appends <pad> so every sequence reaches the batch maximum length.
std::vector<TokenSequence> pad_batch(std::vector<TokenSequence> batch);

// Space-separated text form used in corpus files.
std::string join_tokens(const TokenSequence &seq);
TokenSequence split_tokens(std::string_view text, SequenceKind kind);

} // namespace cadkit

#endif
