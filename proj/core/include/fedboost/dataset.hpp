#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fedboost {

enum class TaskKind {
    classification,  // binary, labels normalized to {0,1}
    regression,
};

std::string_view to_string(TaskKind task);
TaskKind task_from_string(std::string_view name);

/// One sparse row. Feature indices are 1-based and strictly increasing;
/// absent indices read as 0.0.
struct SparseExample {
    std::vector<std::pair<std::int32_t, double>> features;
    double label = 0.0;

    double value(std::int32_t feature_index) const;
    std::int32_t max_index() const;

    bool operator==(const SparseExample&) const = default;
};

struct Dataset {
    std::vector<SparseExample> examples;
    std::int32_t dimension = 0;  // >= max feature index over all examples
    TaskKind task = TaskKind::regression;

    std::size_t size() const { return examples.size(); }

    bool operator==(const Dataset&) const = default;
};

/// Parses `<label> <idx>:<val> ...` lines. Blank lines and lines starting
/// with '#' are skipped. For classification the two observed label values
/// are normalized to {0,1}, smaller label first; label sets already inside
/// {0,1} are kept as-is. `min_dimension` lets the caller declare a
/// dimension larger than the max index observed (e.g. when a test split
/// may contain indices unseen here).
///
/// Throws parse_error (with a 1-based line number) on malformed input and
/// on empty input.
Dataset parse_libsvm(std::string_view text, TaskKind task, std::int32_t min_dimension = 0);

/// parse_libsvm over a file's contents. Throws fedboost::error if the file
/// cannot be read.
Dataset load_libsvm_file(const std::string& path, TaskKind task, std::int32_t min_dimension = 0);

/// Inverse of parse_libsvm up to skipped blank/comment lines: the returned
/// text reparses to an identical Dataset. Values are written with 17
/// significant digits.
std::string write_libsvm(const Dataset& ds);

/// Seeded shuffle, then |test| = round(N * test_fraction), remainder to
/// train. Requires N >= 2 and test_fraction in (0,1).
std::pair<Dataset, Dataset> train_test_split(const Dataset& ds, double test_fraction,
                                             std::uint64_t seed);

/// Seeded shuffle, then near-equal contiguous shards: sizes differ by at
/// most one, earlier clients get the extra example. Requires 1 <= k <= N.
std::vector<Dataset> partition_equal(const Dataset& ds, std::size_t num_clients,
                                     std::uint64_t seed);

}  // namespace fedboost
