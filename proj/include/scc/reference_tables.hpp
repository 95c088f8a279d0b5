#pragma once

// Published misclassification rates (percent) of other affine motion
// segmentation methods on a 155-sequence motion benchmark. Static data used only to
// place benchmark output next to known results.

#include <array>
#include <string_view>

namespace scc {

struct ReferenceEntry {
  std::string_view method;
  int motions;
  std::string_view category;
  double mean_pct;
  double median_pct;
};

namespace detail {

struct ReferenceRow {
  std::string_view method;
  // checkerboard, traffic, other, All as (mean, median) pairs.
  std::array<double, 8> values;
};

inline constexpr std::array<ReferenceRow, 8> kTwoMotions{{
    {"ALC 5", {2.66, 0.00, 2.58, 0.25, 6.90, 0.88, 3.03, 0.00}},
    {"ALC sp", {1.55, 0.29, 1.59, 1.17, 10.70, 0.95, 2.40, 0.43}},
    {"GPCA", {6.09, 1.03, 1.41, 0.00, 2.88, 0.00, 4.59, 0.38}},
    {"LSA 5", {8.84, 3.43, 2.15, 1.00, 4.66, 1.28, 6.73, 1.99}},
    {"LSA 4K", {2.57, 0.27, 5.43, 1.48, 4.10, 1.22, 3.45, 0.59}},
    {"MSL", {4.46, 0.00, 2.23, 0.00, 7.23, 0.00, 4.14, 0.00}},
    {"RANSAC", {6.52, 1.75, 2.55, 0.21, 7.25, 2.64, 5.56, 1.18}},
    {"REF", {2.76, 0.49, 0.30, 0.00, 1.71, 0.00, 2.03, 0.00}},
}};

inline constexpr std::array<ReferenceRow, 8> kThreeMotions{{
    {"ALC 5", {7.05, 1.02, 3.52, 1.15, 7.25, 7.25, 6.26, 1.02}},
    {"ALC sp", {5.20, 0.67, 7.75, 0.49, 21.08, 21.08, 6.69, 0.67}},
    {"GPCA", {31.95, 32.93, 19.83, 19.55, 16.85, 16.85, 28.66, 28.26}},
    {"LSA 5", {30.37, 31.98, 27.02, 34.01, 23.11, 23.11, 29.28, 31.63}},
    {"LSA 4K", {5.80, 1.77, 25.07, 23.79, 7.25, 7.25, 9.73, 2.33}},
    {"MSL", {10.38, 4.61, 1.80, 0.00, 2.71, 2.71, 8.23, 1.76}},
    {"RANSAC", {25.78, 26.01, 12.83, 11.45, 21.38, 21.38, 22.94, 22.03}},
    {"REF", {6.28, 5.06, 1.30, 0.00, 2.66, 2.66, 5.08, 2.40}},
}};

inline constexpr std::array<std::string_view, 4> kReferenceCategories{"checkerboard", "traffic",
                                                                     "other", "All"};

}  // namespace detail

/// All bundled reference entries, two motions first.
inline std::array<ReferenceEntry, 64> reference_entries() {
  std::array<ReferenceEntry, 64> out{};
  std::size_t n = 0;
  for (int motions : {2, 3}) {
    const auto& table = motions == 2 ? detail::kTwoMotions : detail::kThreeMotions;
    for (const auto& row : table)
      for (std::size_t c = 0; c < 4; ++c)
        out[n++] = {row.method, motions, detail::kReferenceCategories[c], row.values[2 * c],
                    row.values[2 * c + 1]};
  }
  return out;
}

}  // namespace scc
