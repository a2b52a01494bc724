#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tabpred/data_table.hpp"
#include "tabpred/rng.hpp"
#include "tabpred/schema.hpp"

namespace testutil {

inline tabpred::FeatureSchema make_schema(
    std::initializer_list<std::pair<std::string, tabpred::ColumnKind>> cols) {
    std::vector<tabpred::FeatureSchema::Column> columns;
    for (const auto& [name, kind] : cols) columns.push_back({name, kind});
    return tabpred::FeatureSchema(std::move(columns));
}

// n continuous columns named c0, c1, ...
inline tabpred::FeatureSchema continuous_schema(std::size_t n) {
    std::vector<tabpred::FeatureSchema::Column> columns;
    for (std::size_t i = 0; i < n; ++i)
        columns.push_back({"c" + std::to_string(i), tabpred::ColumnKind::continuous});
    return tabpred::FeatureSchema(std::move(columns));
}

using Cell = std::optional<double>;
using Row = std::vector<Cell>;

inline tabpred::DataTable make_table(tabpred::FeatureSchema schema, const std::vector<Row>& rows,
                                     const std::vector<int>& labels,
                                     const std::string& label_name = "y") {
    tabpred::DataTable table(std::move(schema));
    if (!label_name.empty()) table.set_label_name(label_name);
    for (std::size_t r = 0; r < rows.size(); ++r)
        table.append_row(rows[r], labels.empty() ? 0 : labels.at(r));
    return table;
}

// Random labeled table over continuous columns with a controlled fraction of
// missing cells; at least one cell per row stays present so nan-distances
// remain defined.
inline tabpred::DataTable random_table(tabpred::rng::Engine& eng, std::size_t rows,
                                       std::size_t cols, double missing_fraction,
                                       int class_count = 2) {
    std::vector<Row> cells(rows, Row(cols));
    std::vector<int> labels(rows, 0);
    for (std::size_t r = 0; r < rows; ++r) {
        std::size_t keep = eng.below(cols);
        for (std::size_t c = 0; c < cols; ++c) {
            if (c != keep && eng.uniform() < missing_fraction) continue;
            cells[r][c] = eng.uniform(-3.0, 3.0);
        }
        labels[r] = static_cast<int>(eng.below(static_cast<std::uint64_t>(class_count)));
    }
    return make_table(continuous_schema(cols), cells, labels);
}

} // namespace testutil
