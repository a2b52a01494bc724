#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "tabpred/linalg.hpp"
#include "tabpred/schema.hpp"

namespace tabpred {

// Identifies a row across resampling. `origin` is the zero-based position in
// the originally parsed table; `replica` is 0 for the original row and counts
// up for bootstrap copies, so duplicates stay distinguishable.
struct RowId {
    std::size_t origin = 0;
    std::uint32_t replica = 0;

    bool operator==(const RowId&) const = default;
    auto operator<=>(const RowId&) const = default;
};

class DataTable {
public:
    DataTable() = default;
    explicit DataTable(FeatureSchema schema);

    std::size_t n_rows() const { return row_ids_.size(); }
    std::size_t n_cols() const { return schema_.size(); }
    const FeatureSchema& schema() const { return schema_; }

    const std::optional<double>& cell(std::size_t row, std::size_t col) const;
    void set_cell(std::size_t row, std::size_t col, std::optional<double> value);

    bool has_labels() const { return !label_name_.empty(); }
    const std::string& label_name() const { return label_name_; }
    void set_label_name(std::string name) { label_name_ = std::move(name); }
    int label(std::size_t row) const;
    void set_label(std::size_t row, int value);
    const std::vector<int>& labels() const { return labels_; }

    const RowId& row_id(std::size_t row) const { return row_ids_[row]; }
    void set_row_id(std::size_t row, RowId id) { row_ids_[row] = id; }

    // Appends a row; label is ignored unless the table has a label name.
    // The two-argument form assigns the id {position, 0}.
    std::size_t append_row(const std::vector<std::optional<double>>& cells, int label, RowId id);
    std::size_t append_row(const std::vector<std::optional<double>>& cells, int label = 0);
    void reserve(std::size_t rows);

    // New table holding the listed rows (repeats allowed), ids preserved.
    DataTable subset(const std::vector<std::size_t>& rows) const;

    std::size_t missing_count() const;
    bool column_all_missing(std::size_t col) const;
    // Mean over present cells; nullopt when the column is entirely missing.
    std::optional<double> column_mean(std::size_t col) const;

    // Dense copy of the feature cells. Throws Error if any cell is missing.
    Matrix to_matrix() const;

    // Label -> row count, keyed in increasing label order.
    std::map<int, std::size_t> class_counts() const;
    std::vector<int> distinct_labels() const;

    // CSV contract: first line is a header naming every schema column, plus
    // the label column when `label_name` is non-empty. Cells are read as
    // decimal numbers; "NA" or an empty cell means missing. Boolean columns
    // accept only 0, 1 or missing. Labels must be present integers.
    static DataTable parse_csv(std::istream& in, const FeatureSchema& schema,
                               const std::string& label_name = "",
                               const std::string& source_name = "<stream>");
    static DataTable parse_csv(const std::filesystem::path& path, const FeatureSchema& schema,
                               const std::string& label_name = "");

    // Writes features in schema order, the label column last. Missing cells
    // become "NA"; numbers use the shortest round-trip form.
    void write_csv(std::ostream& out) const;
    void write_csv(const std::filesystem::path& path) const;

private:
    FeatureSchema schema_;
    std::vector<std::optional<double>> cells_; // row-major
    std::vector<int> labels_;
    std::vector<RowId> row_ids_;
    std::string label_name_;
};

} // namespace tabpred
