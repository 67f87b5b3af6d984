#ifndef CADKIT_IO_HPP
#define CADKIT_IO_HPP

#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "cadkit/datagen.hpp"
#include "cadkit/eval.hpp"
#include "cadkit/labeling.hpp"
#include "cadkit/pretrain.hpp"
#include "cadkit/tokenizer.hpp"

namespace cadkit
{

using Json = nlohmann::ordered_json;

// Malformed or inconsistent input data.
class data_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// One JSON value per non-blank line. Errors name the 1-based line.
std::vector<Json> read_jsonl(std::istream &in);
void write_jsonl(std::ostream &out, const Json &record);

bool is_header(const Json &record);

// {nvars, constraints: [{poly, relation}]}, with "id" first when given.
Json system_to_json(const PolynomialSystem &sys, const std::optional<std::string> &id = std::nullopt);
PolynomialSystem system_from_json(const Json &j);

// ["x2", "x1", "x3"]
Json ordering_to_json(const VariableOrdering &o);
VariableOrdering ordering_from_json(const Json &j, std::size_t nvars);

Json labeled_to_json(const LabeledInstance &inst);
LabeledInstance labeled_from_json(const Json &j);

// {rows: [labels], values: [[row], ...]}
Json matrix_to_json(const FeatureMatrix &m);
FeatureMatrix matrix_from_json(const Json &j);

// [[[e1, e2, ...], ...], ...] one group per polynomial
Json listing_to_json(const ExponentListing &l);
ExponentListing listing_from_json(const Json &j);

Json pretrain_to_json(const PretrainLabel &label);
PretrainLabel pretrain_from_json(const Json &j);

Json spec_to_json(const GeneratorSpec &spec);

Json report_to_json(const EvalReport &r, bool per_instance = false);

struct CorpusRecord {
    std::string id;
    std::string task;
    TokenSequence input;
    TokenSequence output;
    std::optional<Split> split;
};

Json corpus_to_json(const CorpusRecord &r);
CorpusRecord corpus_from_json(const Json &j);

Json vocabulary_to_json(const Vocabulary &v);
Vocabulary vocabulary_from_json(const Json &j);

} // namespace cadkit

#endif
