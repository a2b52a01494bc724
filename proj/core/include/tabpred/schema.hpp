#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace tabpred {

// Column kinds drive preprocessing: boolean columns get the constant 0.5
// fill, everything else goes through KNN imputation. Booleans are the
// subset of categorical columns whose domain is {0, 1}; they are declared,
// never inferred.
enum class ColumnKind { boolean, categorical, continuous };

std::string to_string(ColumnKind kind);
ColumnKind column_kind_from_string(const std::string& text);

struct SchemaSummary {
    std::size_t boolean_count = 0;
    // Booleans also count as categorical here; they are a subset.
    std::size_t categorical_count = 0;
    std::size_t continuous_count = 0;

    bool operator==(const SchemaSummary&) const = default;
};

class FeatureSchema {
public:
    struct Column {
        std::string name;
        ColumnKind kind;
    };

    FeatureSchema() = default;
    // Throws ValidationError on empty or duplicate column names.
    explicit FeatureSchema(std::vector<Column> columns);

    std::size_t size() const { return columns_.size(); }
    const Column& column(std::size_t i) const { return columns_[i]; }
    const std::vector<Column>& columns() const { return columns_; }
    std::vector<std::string> names() const;
    std::optional<std::size_t> index_of(const std::string& name) const;
    // index_of, but a missing name is a ValidationError.
    std::size_t require(const std::string& name) const;

    SchemaSummary summary() const;

    // Schema files are JSON objects mapping column name -> kind, in column
    // order. An array of {"name", "kind"} objects is accepted as well.
    static FeatureSchema from_json(const nlohmann::ordered_json& doc);
    static FeatureSchema load(const std::filesystem::path& path);
    nlohmann::ordered_json to_json() const;
    void save(const std::filesystem::path& path) const;

    bool operator==(const FeatureSchema& other) const;

private:
    std::vector<Column> columns_;
};

inline SchemaSummary schema_summary(const FeatureSchema& schema) { return schema.summary(); }

} // namespace tabpred
