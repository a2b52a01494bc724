#include "tabpred/schema.hpp"

#include <fstream>
#include <unordered_set>

#include "tabpred/error.hpp"

namespace tabpred {

std::string to_string(ColumnKind kind) {
    switch (kind) {
    case ColumnKind::boolean: return "boolean";
    case ColumnKind::categorical: return "categorical";
    case ColumnKind::continuous: return "continuous";
    }
    throw Error("invalid column kind");
}

ColumnKind column_kind_from_string(const std::string& text) {
    if (text == "boolean") return ColumnKind::boolean;
    if (text == "categorical") return ColumnKind::categorical;
    if (text == "continuous") return ColumnKind::continuous;
    throw ValidationError("unknown column kind '" + text +
                          "' (expected boolean, categorical or continuous)");
}

FeatureSchema::FeatureSchema(std::vector<Column> columns) : columns_(std::move(columns)) {
    std::unordered_set<std::string> seen;
    for (const Column& col : columns_) {
        if (col.name.empty()) throw ValidationError("schema column with empty name");
        if (!seen.insert(col.name).second)
            throw ValidationError("duplicate schema column '" + col.name + "'");
    }
}

std::vector<std::string> FeatureSchema::names() const {
    std::vector<std::string> out;
    out.reserve(columns_.size());
    for (const Column& col : columns_) out.push_back(col.name);
    return out;
}

std::optional<std::size_t> FeatureSchema::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i].name == name) return i;
    return std::nullopt;
}

std::size_t FeatureSchema::require(const std::string& name) const {
    auto idx = index_of(name);
    if (!idx) throw ValidationError("unknown column '" + name + "'");
    return *idx;
}

SchemaSummary FeatureSchema::summary() const {
    SchemaSummary s;
    for (const Column& col : columns_) {
        switch (col.kind) {
        case ColumnKind::boolean:
            ++s.boolean_count;
            ++s.categorical_count;
            break;
        case ColumnKind::categorical: ++s.categorical_count; break;
        case ColumnKind::continuous: ++s.continuous_count; break;
        }
    }
    return s;
}

FeatureSchema FeatureSchema::from_json(const nlohmann::ordered_json& doc) {
    std::vector<Column> cols;
    if (doc.is_object()) {
        for (auto it = doc.begin(); it != doc.end(); ++it) {
            if (!it.value().is_string())
                throw ValidationError("schema entry '" + it.key() + "' must be a string kind");
            cols.push_back({it.key(), column_kind_from_string(it.value().get<std::string>())});
        }
    } else if (doc.is_array()) {
        for (const auto& entry : doc) {
            if (!entry.is_object() || !entry.contains("name") || !entry.contains("kind"))
                throw ValidationError("schema array entries need 'name' and 'kind'");
            cols.push_back({entry.at("name").get<std::string>(),
                            column_kind_from_string(entry.at("kind").get<std::string>())});
        }
    } else {
        throw ValidationError("schema JSON must be an object or array");
    }
    return FeatureSchema(std::move(cols));
}

FeatureSchema FeatureSchema::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open schema file: " + path.string());
    nlohmann::ordered_json doc;
    try {
        doc = nlohmann::ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("schema JSON parse error in " + path.string() + ": " + e.what());
    }
    return from_json(doc);
}

nlohmann::ordered_json FeatureSchema::to_json() const {
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    for (const Column& col : columns_) doc[col.name] = to_string(col.kind);
    return doc;
}

void FeatureSchema::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw Error("cannot write schema file: " + path.string());
    out << to_json().dump(2) << '\n';
}

bool FeatureSchema::operator==(const FeatureSchema& other) const {
    if (columns_.size() != other.columns_.size()) return false;
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i].name != other.columns_[i].name ||
            columns_[i].kind != other.columns_[i].kind)
            return false;
    return true;
}

} // namespace tabpred
