#pragma once

#include "leptovar/dataset.hpp"

#include <vector>

namespace leptovar::builtin {

// Eight days of hypothetical returns (percent): columns t, f1, f2, y.
// Day 3 carries an outlier y = 4.0.
Dataset eight_day_panel();

// {0, -2, 4, 1}: the greedy depth-2 self tree isolates 4 at depth 1 and
// cannot reach zero residual, while a balanced contiguous tree can.
std::vector<double> four_point_sample();

} // namespace leptovar::builtin
