#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pipeforge/common.hpp"

namespace pipeforge {

enum class ColumnKind { Categorical, Numeric };

// One typed column with an explicit NA mask. Numeric cells are doubles;
// categorical cells are codes into a per-column dictionary kept in
// first-appearance order. Immutable after construction.
class Column {
public:
    static Column numeric(std::string name, std::vector<double> values,
                          std::vector<std::uint8_t> na = {});
    static Column categorical(std::string name, const std::vector<std::string>& values,
                              std::vector<std::uint8_t> na = {});
    // categorical from precomputed codes (code < 0 means NA)
    static Column categorical_coded(std::string name, std::vector<std::int32_t> codes,
                                    std::vector<std::string> dict);

    const std::string& name() const { return name_; }
    ColumnKind kind() const { return kind_; }
    std::size_t size() const { return na_.size(); }

    bool is_na(std::size_t i) const { return na_[i] != 0; }
    std::size_t na_count() const;

    double num(std::size_t i) const { return num_[i]; }
    const std::vector<double>& nums() const { return num_; }

    std::int32_t code(std::size_t i) const { return cat_[i]; }
    const std::string& label(std::size_t i) const { return dict_[cat_[i]]; }
    const std::vector<std::string>& dict() const { return dict_; }

    Column take(std::span<const std::size_t> rows) const;
    Column renamed(std::string new_name) const;

    bool cells_equal(const Column& other) const;

private:
    std::string name_;
    ColumnKind kind_ = ColumnKind::Numeric;
    std::vector<double> num_;
    std::vector<std::int32_t> cat_;
    std::vector<std::string> dict_;
    std::vector<std::uint8_t> na_;
};

// Column-oriented table. Immutable after construction; all mutation builds
// new tables, so sharing across threads is safe.
class DataTable {
public:
    DataTable() = default;
    explicit DataTable(std::size_t n_rows) : n_rows_(n_rows) {}
    explicit DataTable(std::vector<Column> columns);

    std::size_t n_rows() const { return n_rows_; }
    std::size_t n_cols() const { return columns_.size(); }
    const Column& col(std::size_t i) const { return columns_[i]; }
    const std::vector<Column>& columns() const { return columns_; }

    const Column* find(std::string_view name) const;
    bool has_column(std::string_view name) const { return find(name) != nullptr; }

    std::size_t na_count() const;
    DataTable take_rows(std::span<const std::size_t> rows) const;

private:
    std::vector<Column> columns_;
    std::size_t n_rows_ = 0;
};

// Feature union: columns of left followed by columns of right; duplicate
// right-hand names get a deterministic numeric suffix.
DataTable hconcat(const DataTable& left, const DataTable& right);

// Classification target. Labels are codes into a lexicographically sorted
// class set; no missing entries.
class TargetVector {
public:
    TargetVector() = default;
    static TargetVector from_labels(const std::vector<std::string>& labels);
    static TargetVector from_codes(std::vector<std::int32_t> codes,
                                   std::vector<std::string> class_set);

    std::size_t size() const { return codes_.size(); }
    std::int32_t code(std::size_t i) const { return codes_[i]; }
    const std::string& label(std::size_t i) const { return class_set_[codes_[i]]; }
    const std::vector<std::string>& class_set() const { return class_set_; }
    std::size_t n_classes() const { return class_set_.size(); }

    // distinct labels actually present (a CV training slice can miss classes)
    std::size_t distinct_present() const;

    TargetVector take(std::span<const std::size_t> rows) const;

private:
    std::vector<std::int32_t> codes_;
    std::vector<std::string> class_set_;
};

struct LoadedDataset {
    DataTable table;
    TargetVector target;
};

// RFC-4180 CSV with a mandatory header row; empty field = NA. The target
// column is removed from the table and returned separately; remaining columns
// are typed by schema_hint or by parse-based inference.
LoadedDataset load_csv(const std::string& path, const std::string& target_name,
                       const std::map<std::string, ColumnKind>& schema_hint = {});

// Writes table (plus the target as a trailing column when given) back to CSV;
// NA round-trips as the empty field.
void save_csv(const DataTable& table, const TargetVector* target, const std::string& target_name,
              const std::string& path);

std::string format_double(double v);  // shortest round-trip decimal form

}  // namespace pipeforge
