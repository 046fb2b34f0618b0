#include "fedboost/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fedboost/errors.hpp"
#include "text_format.hpp"

namespace fedboost {

std::string_view to_string(TaskKind task) {
    return task == TaskKind::classification ? "classification" : "regression";
}

TaskKind task_from_string(std::string_view name) {
    if (name == "classification") return TaskKind::classification;
    if (name == "regression") return TaskKind::regression;
    throw std::invalid_argument("unknown task kind: " + std::string(name));
}

double SparseExample::value(std::int32_t feature_index) const {
    auto it = std::lower_bound(features.begin(), features.end(), feature_index,
                               [](const auto& f, std::int32_t idx) { return f.first < idx; });
    if (it != features.end() && it->first == feature_index) return it->second;
    return 0.0;
}

std::int32_t SparseExample::max_index() const {
    return features.empty() ? 0 : features.back().first;
}

namespace {

bool parse_double(std::string_view token, double& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

bool parse_index(std::string_view token, std::int32_t& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

SparseExample parse_line(std::string_view line, std::size_t line_no) {
    SparseExample ex;
    std::size_t pos = 0;
    auto next_token = [&]() -> std::string_view {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
        std::size_t start = pos;
        while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
        return line.substr(start, pos - start);
    };

    std::string_view label_tok = next_token();
    if (label_tok.empty() || !parse_double(label_tok, ex.label))
        throw parse_error(line_no, "expected numeric label, got '" + std::string(label_tok) + "'");

    std::int32_t prev_index = 0;
    for (std::string_view tok = next_token(); !tok.empty(); tok = next_token()) {
        std::size_t colon = tok.find(':');
        if (colon == std::string_view::npos)
            throw parse_error(line_no, "expected idx:val pair, got '" + std::string(tok) + "'");
        std::int32_t index = 0;
        double value = 0.0;
        if (!parse_index(tok.substr(0, colon), index))
            throw parse_error(line_no, "feature index is not an integer in '" + std::string(tok) + "'");
        if (index <= 0)
            throw parse_error(line_no, "feature index must be >= 1, got " + std::to_string(index));
        if (index <= prev_index)
            throw parse_error(line_no, "feature indices must be strictly increasing, got " +
                                           std::to_string(index) + " after " + std::to_string(prev_index));
        if (!parse_double(tok.substr(colon + 1), value))
            throw parse_error(line_no, "feature value is not numeric in '" + std::string(tok) + "'");
        ex.features.emplace_back(index, value);
        prev_index = index;
    }
    return ex;
}

// Two-class normalization: label sets inside {0,1} are kept, anything else
// is mapped smaller->0, larger->1. More than two distinct labels is an error.
void normalize_class_labels(std::vector<SparseExample>& examples,
                            const std::map<double, std::size_t>& distinct) {
    if (distinct.size() > 2) {
        auto third = std::next(distinct.begin(), 2);
        throw parse_error(third->second, "classification dataset has more than two distinct labels");
    }
    bool already_binary = std::all_of(distinct.begin(), distinct.end(),
                                      [](const auto& kv) { return kv.first == 0.0 || kv.first == 1.0; });
    if (already_binary) return;
    double low = distinct.begin()->first;
    for (auto& ex : examples) ex.label = (ex.label == low) ? 0.0 : 1.0;
}

}  // namespace

Dataset parse_libsvm(std::string_view text, TaskKind task, std::int32_t min_dimension) {
    Dataset ds;
    ds.task = task;
    ds.dimension = min_dimension;

    std::map<double, std::size_t> distinct_labels;  // label -> first line seen
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                               : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty() || line.front() == '#') continue;

        SparseExample ex = parse_line(line, line_no);
        ds.dimension = std::max(ds.dimension, ex.max_index());
        if (task == TaskKind::classification) distinct_labels.emplace(ex.label, line_no);
        ds.examples.push_back(std::move(ex));
    }

    if (ds.examples.empty()) throw parse_error(line_no, "input contains no examples");
    if (task == TaskKind::classification) normalize_class_labels(ds.examples, distinct_labels);
    return ds;
}

Dataset load_libsvm_file(const std::string& path, TaskKind task, std::int32_t min_dimension) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open dataset file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_libsvm(buf.str(), task, min_dimension);
}

std::string write_libsvm(const Dataset& ds) {
    std::string out;
    for (const auto& ex : ds.examples) {
        out += format_g17(ex.label);
        for (const auto& [index, value] : ex.features) {
            out += ' ';
            out += std::to_string(index);
            out += ':';
            out += format_g17(value);
        }
        out += '\n';
    }
    return out;
}

namespace {

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    return order;
}

Dataset take(const Dataset& ds, const std::vector<std::size_t>& order, std::size_t begin,
             std::size_t end) {
    Dataset out;
    out.task = ds.task;
    out.dimension = ds.dimension;
    out.examples.reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) out.examples.push_back(ds.examples[order[i]]);
    return out;
}

}  // namespace

std::pair<Dataset, Dataset> train_test_split(const Dataset& ds, double test_fraction,
                                             std::uint64_t seed) {
    if (ds.size() < 2) throw std::invalid_argument("train_test_split needs at least 2 examples");
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw std::invalid_argument("test_fraction must be in (0,1)");

    auto order = shuffled_indices(ds.size(), seed);
    auto test_count = static_cast<std::size_t>(
        std::llround(static_cast<double>(ds.size()) * test_fraction));
    Dataset test = take(ds, order, 0, test_count);
    Dataset train = take(ds, order, test_count, ds.size());
    return {std::move(train), std::move(test)};
}

std::vector<Dataset> partition_equal(const Dataset& ds, std::size_t num_clients,
                                     std::uint64_t seed) {
    if (num_clients == 0) throw std::invalid_argument("partition_equal needs k >= 1");
    if (num_clients > ds.size())
        throw std::invalid_argument("partition_equal needs k <= dataset size");

    auto order = shuffled_indices(ds.size(), seed);
    std::size_t base = ds.size() / num_clients;
    std::size_t remainder = ds.size() % num_clients;

    std::vector<Dataset> shards;
    shards.reserve(num_clients);
    std::size_t begin = 0;
    for (std::size_t k = 0; k < num_clients; ++k) {
        std::size_t len = base + (k < remainder ? 1 : 0);  // lower CIDs get the extra example
        shards.push_back(take(ds, order, begin, begin + len));
        begin += len;
    }
    return shards;
}

}  // namespace fedboost
