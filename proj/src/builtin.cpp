#include "leptovar/builtin.hpp"

namespace leptovar::builtin {

Dataset eight_day_panel() {
    return Dataset({
        {"t", {1, 2, 3, 4, 5, 6, 7, 8}},
        {"f1", {2.0, 1.8, 5.0, 7.0, 6.0, 4.8, 2.2, 1.0}},
        {"f2", {2.0, 6.2, 1.8, 4.0, 6.0, 5.8, 5.0, 1.0}},
        {"y", {1.5, -1.0, 4.0, 2.0, 1.0, -0.5, -2.0, 0.0}},
    });
}

std::vector<double> four_point_sample() { return {0.0, -2.0, 4.0, 1.0}; }

} // namespace leptovar::builtin
