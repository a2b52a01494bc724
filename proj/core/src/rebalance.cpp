#include "tabpred/rebalance.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "tabpred/error.hpp"
#include "tabpred/rng.hpp"

namespace tabpred {
namespace {

std::uint64_t class_stream(std::uint64_t seed, const char* op, int label) {
    return rng::mix(rng::mix(seed, rng::hash_string(op)),
                    static_cast<std::uint64_t>(static_cast<std::int64_t>(label)));
}

void require_resamplable(const DataTable& table) {
    if (!table.has_labels()) throw ValidationError("resampling needs a labeled table");
    if (table.class_counts().size() < 2)
        throw ValidationError("resampling needs at least two classes");
}

} // namespace

std::string to_string(ResampleMode mode) {
    switch (mode) {
    case ResampleMode::none: return "none";
    case ResampleMode::oversample: return "oversample";
    case ResampleMode::undersample: return "undersample";
    }
    throw Error("invalid resample mode");
}

ResampleMode resample_mode_from_string(const std::string& text) {
    if (text == "none") return ResampleMode::none;
    if (text == "oversample") return ResampleMode::oversample;
    if (text == "undersample") return ResampleMode::undersample;
    throw ValidationError("unknown resample mode '" + text +
                          "' (expected none, oversample or undersample)");
}

DataTable oversample(const DataTable& table, const ResamplePlan& plan) {
    require_resamplable(table);
    std::map<int, std::vector<std::size_t>> rows_by_class;
    for (std::size_t r = 0; r < table.n_rows(); ++r) rows_by_class[table.label(r)].push_back(r);

    std::size_t majority = 0;
    for (const auto& [label, rows] : rows_by_class) {
        (void)label;
        majority = std::max(majority, rows.size());
    }
    const std::size_t target = majority / 2;

    // Replica counters continue past any copies already in the table.
    std::unordered_map<std::size_t, std::uint32_t> next_replica;
    for (std::size_t r = 0; r < table.n_rows(); ++r) {
        const RowId& id = table.row_id(r);
        auto& next = next_replica[id.origin];
        next = std::max(next, id.replica + 1);
    }

    std::vector<std::size_t> all_rows(table.n_rows());
    for (std::size_t r = 0; r < table.n_rows(); ++r) all_rows[r] = r;
    DataTable out = table.subset(all_rows);

    std::vector<std::optional<double>> cells(table.n_cols());
    for (const auto& [label, rows] : rows_by_class) {
        if (rows.size() >= target) continue;
        rng::Engine eng(class_stream(plan.seed, "oversample", label));
        for (std::size_t need = target - rows.size(); need > 0; --need) {
            std::size_t r = rows[eng.below(rows.size())];
            for (std::size_t c = 0; c < table.n_cols(); ++c) cells[c] = table.cell(r, c);
            RowId id{table.row_id(r).origin, next_replica[table.row_id(r).origin]++};
            out.append_row(cells, label, id);
        }
    }
    return out;
}

DataTable undersample(const DataTable& table, const ResamplePlan& plan) {
    require_resamplable(table);
    std::map<int, std::vector<std::size_t>> rows_by_class;
    for (std::size_t r = 0; r < table.n_rows(); ++r) rows_by_class[table.label(r)].push_back(r);

    std::size_t minority = table.n_rows();
    for (const auto& [label, rows] : rows_by_class) {
        (void)label;
        minority = std::min(minority, rows.size());
    }

    std::vector<std::size_t> keep;
    for (auto& [label, rows] : rows_by_class) {
        if (rows.size() > minority) {
            rng::Engine eng(class_stream(plan.seed, "undersample", label));
            eng.shuffle(rows);
            rows.resize(minority);
        }
        keep.insert(keep.end(), rows.begin(), rows.end());
    }
    std::sort(keep.begin(), keep.end());
    return table.subset(keep);
}

DataTable resample(const DataTable& table, const ResamplePlan& plan) {
    switch (plan.mode) {
    case ResampleMode::none: {
        std::vector<std::size_t> all(table.n_rows());
        for (std::size_t r = 0; r < table.n_rows(); ++r) all[r] = r;
        return table.subset(all);
    }
    case ResampleMode::oversample: return oversample(table, plan);
    case ResampleMode::undersample: return undersample(table, plan);
    }
    throw Error("invalid resample mode");
}

int bin_ventilation_days(int days, const BinSpec& spec) {
    if (spec.bin_count < 3 || spec.bin_count > 7)
        throw ValidationError("bin_count must be between 3 and 7");
    if (days < 0) throw ValidationError("ventilation days cannot be negative");
    if (days == 0) return 0;
    int week = (days + 6) / 7; // ceil(days / 7)
    return std::min(week, spec.bin_count - 1);
}

std::vector<std::string> bin_label_texts(const BinSpec& spec) {
    if (spec.bin_count < 3 || spec.bin_count > 7)
        throw ValidationError("bin_count must be between 3 and 7");
    std::vector<std::string> out;
    for (int i = 0; i + 1 < spec.bin_count; ++i) out.push_back(std::to_string(i));
    out.push_back(">" + std::to_string(spec.bin_count - 2));
    return out;
}

void bin_label_days(DataTable& table, const BinSpec& spec) {
    if (!table.has_labels()) throw ValidationError("binning needs a labeled table");
    for (std::size_t r = 0; r < table.n_rows(); ++r)
        table.set_label(r, bin_ventilation_days(table.label(r), spec));
}

} // namespace tabpred
