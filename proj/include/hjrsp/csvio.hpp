#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hjrsp {

// %.12g with lowercase exponent; stable across runs and platforms.
std::string format_g12(double value);

// Joins cells with commas. Cells are written verbatim (no quoting; the
// schema never produces commas inside a cell).
void write_csv_row(std::ostream& os, const std::vector<std::string>& cells);

inline const char* kSweepHeader =
    "channel,param_name,param_value,theta,phi,reconstructor,averaging,f_sim,f_closed,abs_diff";

}  // namespace hjrsp
