#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tabpred/data_table.hpp"

namespace tabpred {

enum class ResampleMode { none, oversample, undersample };

std::string to_string(ResampleMode mode);
ResampleMode resample_mode_from_string(const std::string& text);

struct ResamplePlan {
    ResampleMode mode = ResampleMode::none;
    std::uint64_t seed = 0;
};

// Bootstrap oversampling: every class below floor(majority/2) is grown to
// exactly that target by drawing its rows uniformly with replacement; other
// classes are untouched. Copies append after the original rows and carry the
// origin row id with the next free replica counter. With two classes this is
// "grow the minority to half the majority".
DataTable oversample(const DataTable& table, const ResamplePlan& plan);

// Random undersampling: every class is cut down to the smallest class count
// by keeping a uniform without-replacement subset; surviving rows keep their
// original relative order. The result has exactly equal class counts.
DataTable undersample(const DataTable& table, const ResamplePlan& plan);

// Dispatch on plan.mode; mode none returns the table unchanged.
DataTable resample(const DataTable& table, const ResamplePlan& plan);

// Week bins for ventilation-day targets. Class 0 is "no ventilation"; class
// i covers days (i-1)*7+1 ..= i*7; the top class is open-ended.
struct BinSpec {
    int bin_count = 3; // supported: 3..7
};

// 0 days -> class 0; otherwise min(ceil(days/7), bin_count-1).
int bin_ventilation_days(int days, const BinSpec& spec);

// Display labels, e.g. bin_count=3 -> {"0", "1", ">1"} (weeks of ventilation).
std::vector<std::string> bin_label_texts(const BinSpec& spec);

// Replaces each label (a day count) with its week-bin class.
void bin_label_days(DataTable& table, const BinSpec& spec);

} // namespace tabpred
