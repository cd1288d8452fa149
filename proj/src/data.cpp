#include "pipeforge/data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace pipeforge {

// ---------------------------------------------------------------------------
// Column

Column Column::numeric(std::string name, std::vector<double> values,
                       std::vector<std::uint8_t> na) {
    Column c;
    c.name_ = std::move(name);
    c.kind_ = ColumnKind::Numeric;
    if (na.empty()) na.assign(values.size(), 0);
    if (na.size() != values.size())
        throw DataError("column '" + c.name_ + "': NA mask length mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!na[i] && !std::isfinite(values[i]))
            throw DataError("column '" + c.name_ + "': non-finite numeric cell");
    }
    c.num_ = std::move(values);
    c.na_ = std::move(na);
    return c;
}

Column Column::categorical(std::string name, const std::vector<std::string>& values,
                           std::vector<std::uint8_t> na) {
    Column c;
    c.name_ = std::move(name);
    c.kind_ = ColumnKind::Categorical;
    if (na.empty()) na.assign(values.size(), 0);
    if (na.size() != values.size())
        throw DataError("column '" + c.name_ + "': NA mask length mismatch");
    c.cat_.resize(values.size(), -1);
    std::unordered_map<std::string, std::int32_t> intern;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (na[i]) continue;
        auto it = intern.find(values[i]);
        if (it == intern.end()) {
            it = intern.emplace(values[i], static_cast<std::int32_t>(c.dict_.size())).first;
            c.dict_.push_back(values[i]);
        }
        c.cat_[i] = it->second;
    }
    c.na_ = std::move(na);
    return c;
}

Column Column::categorical_coded(std::string name, std::vector<std::int32_t> codes,
                                 std::vector<std::string> dict) {
    Column c;
    c.name_ = std::move(name);
    c.kind_ = ColumnKind::Categorical;
    c.na_.resize(codes.size(), 0);
    for (std::size_t i = 0; i < codes.size(); ++i) {
        if (codes[i] < 0) {
            c.na_[i] = 1;
        } else if (static_cast<std::size_t>(codes[i]) >= dict.size()) {
            throw DataError("column '" + c.name_ + "': code out of dictionary range");
        }
    }
    c.cat_ = std::move(codes);
    c.dict_ = std::move(dict);
    return c;
}

std::size_t Column::na_count() const {
    std::size_t n = 0;
    for (auto b : na_) n += b != 0;
    return n;
}

Column Column::take(std::span<const std::size_t> rows) const {
    Column c;
    c.name_ = name_;
    c.kind_ = kind_;
    c.dict_ = dict_;
    c.na_.reserve(rows.size());
    if (kind_ == ColumnKind::Numeric) {
        c.num_.reserve(rows.size());
        for (std::size_t r : rows) {
            c.num_.push_back(num_[r]);
            c.na_.push_back(na_[r]);
        }
    } else {
        c.cat_.reserve(rows.size());
        for (std::size_t r : rows) {
            c.cat_.push_back(cat_[r]);
            c.na_.push_back(na_[r]);
        }
    }
    return c;
}

Column Column::renamed(std::string new_name) const {
    Column c = *this;
    c.name_ = std::move(new_name);
    return c;
}

bool Column::cells_equal(const Column& other) const {
    if (kind_ != other.kind_ || size() != other.size()) return false;
    for (std::size_t i = 0; i < size(); ++i) {
        if (is_na(i) != other.is_na(i)) return false;
        if (is_na(i)) continue;
        if (kind_ == ColumnKind::Numeric) {
            if (num_[i] != other.num_[i]) return false;
        } else {
            if (label(i) != other.label(i)) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// DataTable

DataTable::DataTable(std::vector<Column> columns) {
    if (columns.empty()) {
        n_rows_ = 0;
    } else {
        n_rows_ = columns.front().size();
        std::unordered_set<std::string_view> seen;
        for (const auto& c : columns) {
            if (c.size() != n_rows_)
                throw DataError("column '" + c.name() + "': row count mismatch");
            if (!seen.insert(c.name()).second)
                throw DataError("duplicate column name '" + c.name() + "'");
        }
    }
    columns_ = std::move(columns);
}

const Column* DataTable::find(std::string_view name) const {
    for (const auto& c : columns_)
        if (c.name() == name) return &c;
    return nullptr;
}

std::size_t DataTable::na_count() const {
    std::size_t n = 0;
    for (const auto& c : columns_) n += c.na_count();
    return n;
}

DataTable DataTable::take_rows(std::span<const std::size_t> rows) const {
    std::vector<Column> cols;
    cols.reserve(columns_.size());
    for (const auto& c : columns_) cols.push_back(c.take(rows));
    DataTable t;
    t.columns_ = std::move(cols);
    t.n_rows_ = rows.size();
    return t;
}

DataTable hconcat(const DataTable& left, const DataTable& right) {
    if (left.n_rows() != right.n_rows())
        throw DataError("hconcat: row count mismatch (" + std::to_string(left.n_rows()) + " vs " +
                        std::to_string(right.n_rows()) + ")");
    std::vector<Column> cols = left.columns();
    std::unordered_set<std::string> names;
    for (const auto& c : cols) names.insert(c.name());
    for (const auto& c : right.columns()) {
        if (!names.count(c.name())) {
            names.insert(c.name());
            cols.push_back(c);
            continue;
        }
        int suffix = 1;
        std::string candidate;
        do {
            candidate = c.name() + "_" + std::to_string(suffix++);
        } while (names.count(candidate));
        names.insert(candidate);
        cols.push_back(c.renamed(candidate));
    }
    if (cols.empty()) return DataTable(left.n_rows());
    return DataTable(std::move(cols));
}

// ---------------------------------------------------------------------------
// TargetVector

TargetVector TargetVector::from_labels(const std::vector<std::string>& labels) {
    TargetVector t;
    std::set<std::string> distinct(labels.begin(), labels.end());
    t.class_set_.assign(distinct.begin(), distinct.end());
    std::unordered_map<std::string_view, std::int32_t> index;
    for (std::size_t i = 0; i < t.class_set_.size(); ++i)
        index.emplace(t.class_set_[i], static_cast<std::int32_t>(i));
    t.codes_.reserve(labels.size());
    for (const auto& l : labels) t.codes_.push_back(index.at(l));
    return t;
}

TargetVector TargetVector::from_codes(std::vector<std::int32_t> codes,
                                      std::vector<std::string> class_set) {
    TargetVector t;
    for (auto c : codes)
        if (c < 0 || static_cast<std::size_t>(c) >= class_set.size())
            throw DataError("target code out of class-set range");
    t.codes_ = std::move(codes);
    t.class_set_ = std::move(class_set);
    return t;
}

std::size_t TargetVector::distinct_present() const {
    std::vector<std::uint8_t> seen(class_set_.size(), 0);
    std::size_t n = 0;
    for (auto c : codes_) {
        if (!seen[c]) {
            seen[c] = 1;
            ++n;
        }
    }
    return n;
}

TargetVector TargetVector::take(std::span<const std::size_t> rows) const {
    TargetVector t;
    t.class_set_ = class_set_;
    t.codes_.reserve(rows.size());
    for (std::size_t r : rows) t.codes_.push_back(codes_[r]);
    return t;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

struct RawCsv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // rows[i].size() == header.size()
};

RawCsv parse_csv_text(const std::string& text, const std::string& path) {
    RawCsv out;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool record_started = false;
    std::size_t i = 0;
    const std::size_t n = text.size();
    // skip a UTF-8 BOM
    if (n >= 3 && static_cast<unsigned char>(text[0]) == 0xEF &&
        static_cast<unsigned char>(text[1]) == 0xBB && static_cast<unsigned char>(text[2]) == 0xBF)
        i = 3;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
    };
    auto end_record = [&] {
        end_field();
        if (out.header.empty()) {
            out.header = std::move(record);
        } else {
            if (record.size() != out.header.size())
                throw DataError(path + ": ragged row " + std::to_string(out.rows.size() + 2) +
                                " (" + std::to_string(record.size()) + " fields, expected " +
                                std::to_string(out.header.size()) + ")");
            out.rows.push_back(std::move(record));
        }
        record.clear();
        record_started = false;
    };

    while (i < n) {
        char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < n && text[i + 1] == '"') {
                    field.push_back('"');
                    i += 2;
                } else {
                    in_quotes = false;
                    ++i;
                }
            } else {
                field.push_back(ch);
                ++i;
            }
            continue;
        }
        switch (ch) {
            case '"':
                in_quotes = true;
                record_started = true;
                ++i;
                break;
            case ',':
                end_field();
                record_started = true;
                ++i;
                break;
            case '\r':
                if (i + 1 < n && text[i + 1] == '\n') ++i;
                [[fallthrough]];
            case '\n':
                end_record();
                ++i;
                break;
            default:
                field.push_back(ch);
                record_started = true;
                ++i;
        }
    }
    if (in_quotes) throw DataError(path + ": unterminated quoted field");
    if (record_started || !record.empty() || !field.empty()) end_record();
    if (out.header.empty()) throw DataError(path + ": missing header row");
    return out;
}

bool parse_number(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    if (*begin == '+') ++begin;  // from_chars does not accept a leading '+'
    if (begin == end) return false;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end) return false;
    if (!std::isfinite(v)) return false;
    out = v;
    return true;
}

std::string quote_csv_field(const std::string& s) {
    bool needs_quotes = s.find_first_of(",\"\r\n") != std::string::npos;
    if (!needs_quotes) return s;
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += "\"\"";
        else q.push_back(ch);
    }
    q.push_back('"');
    return q;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

LoadedDataset load_csv(const std::string& path, const std::string& target_name,
                       const std::map<std::string, ColumnKind>& schema_hint) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    RawCsv raw = parse_csv_text(buf.str(), path);

    {
        std::unordered_set<std::string> seen;
        for (const auto& h : raw.header) {
            if (h.empty()) throw DataError(path + ": empty column name in header");
            if (!seen.insert(h).second)
                throw DataError(path + ": duplicate column name '" + h + "'");
        }
    }

    std::size_t target_idx = raw.header.size();
    for (std::size_t j = 0; j < raw.header.size(); ++j)
        if (raw.header[j] == target_name) target_idx = j;
    if (target_idx == raw.header.size())
        throw DataError(path + ": target column '" + target_name + "' not found");
    if (auto it = schema_hint.find(target_name);
        it != schema_hint.end() && it->second == ColumnKind::Numeric)
        throw DataError(path + ": target column '" + target_name +
                        "' must be categorical; numeric targets are not supported");

    const std::size_t n_rows = raw.rows.size();
    std::vector<std::string> target_labels;
    target_labels.reserve(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) {
        const std::string& cell = raw.rows[i][target_idx];
        if (cell.empty())
            throw DataError(path + ": target column has an empty cell at data row " +
                            std::to_string(i + 1));
        target_labels.push_back(cell);
    }

    std::vector<Column> cols;
    cols.reserve(raw.header.size() - 1);
    for (std::size_t j = 0; j < raw.header.size(); ++j) {
        if (j == target_idx) continue;
        const std::string& name = raw.header[j];
        ColumnKind kind;
        if (auto it = schema_hint.find(name); it != schema_hint.end()) {
            kind = it->second;
        } else {
            kind = ColumnKind::Numeric;
            double v;
            for (std::size_t i = 0; i < n_rows; ++i) {
                const std::string& cell = raw.rows[i][j];
                if (!cell.empty() && !parse_number(cell, v)) {
                    kind = ColumnKind::Categorical;
                    break;
                }
            }
        }
        std::vector<std::uint8_t> na(n_rows, 0);
        if (kind == ColumnKind::Numeric) {
            std::vector<double> values(n_rows, 0.0);
            for (std::size_t i = 0; i < n_rows; ++i) {
                const std::string& cell = raw.rows[i][j];
                if (cell.empty()) {
                    na[i] = 1;
                } else if (!parse_number(cell, values[i])) {
                    throw DataError(path + ": column '" + name + "' hinted numeric but cell '" +
                                    cell + "' at data row " + std::to_string(i + 1) +
                                    " is not a number");
                }
            }
            cols.push_back(Column::numeric(name, std::move(values), std::move(na)));
        } else {
            std::vector<std::string> values(n_rows);
            for (std::size_t i = 0; i < n_rows; ++i) {
                const std::string& cell = raw.rows[i][j];
                if (cell.empty()) na[i] = 1;
                else values[i] = cell;
            }
            cols.push_back(Column::categorical(name, values, std::move(na)));
        }
    }

    LoadedDataset ds;
    ds.table = cols.empty() ? DataTable(n_rows) : DataTable(std::move(cols));
    ds.target = TargetVector::from_labels(target_labels);
    return ds;
}

void save_csv(const DataTable& table, const TargetVector* target, const std::string& target_name,
              const std::string& path) {
    if (target && target->size() != table.n_rows())
        throw DataError(path + ": target length does not match table rows");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(path + ": cannot open file for writing");

    for (std::size_t j = 0; j < table.n_cols(); ++j) {
        if (j) out << ',';
        out << quote_csv_field(table.col(j).name());
    }
    if (target) {
        if (table.n_cols()) out << ',';
        out << quote_csv_field(target_name);
    }
    out << '\n';

    for (std::size_t i = 0; i < table.n_rows(); ++i) {
        for (std::size_t j = 0; j < table.n_cols(); ++j) {
            if (j) out << ',';
            const Column& c = table.col(j);
            if (c.is_na(i)) continue;
            if (c.kind() == ColumnKind::Numeric) out << format_double(c.num(i));
            else out << quote_csv_field(c.label(i));
        }
        if (target) {
            if (table.n_cols()) out << ',';
            out << quote_csv_field(target->label(i));
        }
        out << '\n';
    }
    if (!out) throw DataError(path + ": write failed");
}

}  // namespace pipeforge
