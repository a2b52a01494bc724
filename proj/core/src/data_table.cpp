#include "tabpred/data_table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tabpred/error.hpp"
#include "tabpred/format.hpp"

namespace tabpred {
namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

double parse_number(const std::string& token, std::size_t line_no, const std::string& col_name,
                    const std::string& source) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end)
        throw ValidationError(source + ":" + std::to_string(line_no) + ": column '" + col_name +
                              "': cannot parse '" + token + "' as a number");
    if (!std::isfinite(value))
        throw ValidationError(source + ":" + std::to_string(line_no) + ": column '" + col_name +
                              "': non-finite value '" + token + "'");
    return value;
}

} // namespace

DataTable::DataTable(FeatureSchema schema) : schema_(std::move(schema)) {}

const std::optional<double>& DataTable::cell(std::size_t row, std::size_t col) const {
    return cells_[row * schema_.size() + col];
}

void DataTable::set_cell(std::size_t row, std::size_t col, std::optional<double> value) {
    cells_[row * schema_.size() + col] = value;
}

int DataTable::label(std::size_t row) const {
    if (!has_labels()) throw Error("table has no labels");
    return labels_[row];
}

void DataTable::set_label(std::size_t row, int value) {
    if (!has_labels()) throw Error("table has no labels");
    labels_[row] = value;
}

std::size_t DataTable::append_row(const std::vector<std::optional<double>>& cells, int label,
                                  RowId id) {
    if (cells.size() != schema_.size()) throw Error("append_row: cell count mismatch");
    cells_.insert(cells_.end(), cells.begin(), cells.end());
    labels_.push_back(label);
    row_ids_.push_back(id);
    return row_ids_.size() - 1;
}

std::size_t DataTable::append_row(const std::vector<std::optional<double>>& cells, int label) {
    return append_row(cells, label, RowId{row_ids_.size(), 0});
}

void DataTable::reserve(std::size_t rows) {
    cells_.reserve(rows * schema_.size());
    labels_.reserve(rows);
    row_ids_.reserve(rows);
}

DataTable DataTable::subset(const std::vector<std::size_t>& rows) const {
    DataTable out(schema_);
    out.label_name_ = label_name_;
    out.reserve(rows.size());
    for (std::size_t r : rows) {
        if (r >= n_rows()) throw Error("subset: row index out of range");
        out.cells_.insert(out.cells_.end(), cells_.begin() + r * schema_.size(),
                          cells_.begin() + (r + 1) * schema_.size());
        out.labels_.push_back(labels_[r]);
        out.row_ids_.push_back(row_ids_[r]);
    }
    return out;
}

std::size_t DataTable::missing_count() const {
    return static_cast<std::size_t>(
        std::count_if(cells_.begin(), cells_.end(), [](const auto& c) { return !c.has_value(); }));
}

bool DataTable::column_all_missing(std::size_t col) const {
    for (std::size_t r = 0; r < n_rows(); ++r)
        if (cell(r, col).has_value()) return false;
    return true;
}

std::optional<double> DataTable::column_mean(std::size_t col) const {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t r = 0; r < n_rows(); ++r)
        if (const auto& c = cell(r, col)) {
            sum += *c;
            ++n;
        }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

Matrix DataTable::to_matrix() const {
    Matrix m(n_rows(), n_cols());
    for (std::size_t r = 0; r < n_rows(); ++r)
        for (std::size_t c = 0; c < n_cols(); ++c) {
            const auto& v = cell(r, c);
            if (!v)
                throw Error("to_matrix: missing value at row " + std::to_string(r) + ", column '" +
                            schema_.column(c).name + "'");
            m(r, c) = *v;
        }
    return m;
}

std::map<int, std::size_t> DataTable::class_counts() const {
    if (!has_labels()) throw Error("class_counts: table has no labels");
    std::map<int, std::size_t> counts;
    for (int y : labels_) ++counts[y];
    return counts;
}

std::vector<int> DataTable::distinct_labels() const {
    std::vector<int> out;
    for (const auto& [y, n] : class_counts()) {
        (void)n;
        out.push_back(y);
    }
    return out;
}

DataTable DataTable::parse_csv(std::istream& in, const FeatureSchema& schema,
                               const std::string& label_name, const std::string& source_name) {
    std::string line;
    if (!std::getline(in, line))
        throw ValidationError(source_name + ": empty input, expected a header row");
    std::vector<std::string> header = split_line(line);

    // Map each schema column (and the label) to its header position.
    std::vector<std::size_t> feature_pos(schema.size());
    std::vector<bool> used(header.size(), false);
    for (std::size_t c = 0; c < schema.size(); ++c) {
        const std::string& name = schema.column(c).name;
        bool found = false;
        for (std::size_t h = 0; h < header.size(); ++h) {
            if (header[h] != name) continue;
            if (used[h])
                throw ValidationError(source_name + ": duplicate header column '" + name + "'");
            feature_pos[c] = h;
            used[h] = true;
            found = true;
            break;
        }
        if (!found)
            throw ValidationError(source_name + ": header is missing schema column '" + name +
                                  "'");
    }
    std::size_t label_pos = header.size();
    if (!label_name.empty()) {
        for (std::size_t h = 0; h < header.size(); ++h) {
            if (header[h] != label_name || used[h]) continue;
            label_pos = h;
            used[h] = true;
            break;
        }
        if (label_pos == header.size())
            throw ValidationError(source_name + ": header is missing label column '" + label_name +
                                  "'");
    }
    for (std::size_t h = 0; h < header.size(); ++h)
        if (!used[h])
            throw ValidationError(source_name + ": unexpected header column '" + header[h] + "'");

    DataTable table(schema);
    table.label_name_ = label_name;

    std::size_t line_no = 1;
    std::vector<std::optional<double>> row(schema.size());
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<std::string> tokens = split_line(line);
        if (tokens.size() != header.size())
            throw ValidationError(source_name + ":" + std::to_string(line_no) + ": expected " +
                                  std::to_string(header.size()) + " cells, got " +
                                  std::to_string(tokens.size()));
        for (std::size_t c = 0; c < schema.size(); ++c) {
            const std::string& tok = tokens[feature_pos[c]];
            const auto& col = schema.column(c);
            if (tok.empty() || tok == "NA") {
                row[c] = std::nullopt;
                continue;
            }
            double v = parse_number(tok, line_no, col.name, source_name);
            if (col.kind == ColumnKind::boolean && v != 0.0 && v != 1.0)
                throw ValidationError(source_name + ":" + std::to_string(line_no) + ": column '" +
                                      col.name + "': boolean cell must be 0, 1 or missing, got '" +
                                      tok + "'");
            row[c] = v;
        }
        int label = 0;
        if (!label_name.empty()) {
            const std::string& tok = tokens[label_pos];
            if (tok.empty() || tok == "NA")
                throw ValidationError(source_name + ":" + std::to_string(line_no) + ": label '" +
                                      label_name + "' is missing");
            double v = parse_number(tok, line_no, label_name, source_name);
            if (v != std::floor(v) || std::abs(v) > 1e9)
                throw ValidationError(source_name + ":" + std::to_string(line_no) + ": label '" +
                                      label_name + "' must be an integer, got '" + tok + "'");
            label = static_cast<int>(v);
        }
        table.append_row(row, label, RowId{table.n_rows(), 0});
    }
    return table;
}

DataTable DataTable::parse_csv(const std::filesystem::path& path, const FeatureSchema& schema,
                               const std::string& label_name) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open CSV file: " + path.string());
    return parse_csv(in, schema, label_name, path.string());
}

void DataTable::write_csv(std::ostream& out) const {
    for (std::size_t c = 0; c < schema_.size(); ++c) {
        if (c) out << ',';
        out << schema_.column(c).name;
    }
    if (has_labels()) out << ',' << label_name_;
    out << '\n';
    for (std::size_t r = 0; r < n_rows(); ++r) {
        for (std::size_t c = 0; c < schema_.size(); ++c) {
            if (c) out << ',';
            const auto& v = cell(r, c);
            out << (v ? format_double(*v) : "NA");
        }
        if (has_labels()) out << ',' << labels_[r];
        out << '\n';
    }
}

void DataTable::write_csv(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot write CSV file: " + path.string());
    write_csv(out);
}

} // namespace tabpred
