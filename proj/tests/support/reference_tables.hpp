#pragma once

// Printed reference values for the three BCD(p) tables.

#include <array>
#include <optional>

namespace bcd::reference {

inline constexpr std::array<double, 4> kTableP = {0.6, 0.7, 0.8, 0.9};

// Steady-state thresholds: rows k, columns p, then tolerance.
inline constexpr std::array<int, 5> kThresholdK = {0, 1, 2, 25, 50};
inline constexpr std::array<double, 4> kThresholdTol = {0.1, 0.05, 0.01, 0.001};
inline constexpr int kNoThreshold = -1;  // printed as ">500"
inline constexpr int kThresholdLimit = 500;

inline constexpr int kThresholds[5][4][4] = {
    {{20, 34, 74, 146}, {6, 8, 18, 34}, {2, 4, 8, 14}, {2, 2, 4, 6}},
    {{19, 33, 73, 145}, {5, 7, 17, 33}, {1, 3, 7, 13}, {1, 1, 3, 5}},
    {{14, 28, 68, 140}, {4, 4, 8, 22}, {4, 4, 8, 14}, {2, 4, 6, 8}},
    {{183, 211, 279, 379}, {85, 93, 113, 141}, {53, 57, 65, 77}, {37, 39, 43, 49}},
    {{342, 380, 464, kNoThreshold}, {158, 168, 194, 226}, {100, 104, 116, 130}, {70, 72, 78, 86}},
};

// Variance of the imbalance.
inline constexpr std::array<int, 5> kVarianceEvenN = {10, 20, 50, 100, 200};
inline constexpr std::array<int, 4> kVarianceOddN = {5, 15, 25, 75};

inline constexpr double kVarianceEven[5][4] = {
    {5.19, 2.55, 1.18, 0.46}, {7.65, 2.91, 1.21, 0.46}, {10.78, 3.04, 1.21, 0.46},
    {12.10, 3.04, 1.21, 0.46}, {12.45, 3.04, 1.21, 0.46},
};
inline constexpr double kVarianceOdd[4][4] = {
    {3.30, 2.15, 1.45, 1.10}, {6.63, 2.95, 1.56, 1.10}, {8.52, 3.13, 1.57, 1.10}, {11.73, 3.20, 1.57, 1.10},
};
inline constexpr double kVarianceLimitEven[4] = {12.48, 3.04, 1.21, 0.46};
inline constexpr double kVarianceLimitOdd[4] = {12.52, 3.21, 1.57, 1.11};

// Average excess selection bias.
inline constexpr std::array<int, 9> kBiasN = {5, 10, 15, 20, 25, 50, 75, 100, 200};
inline constexpr double kBias[9][4] = {
    {0.058, 0.107, 0.146, 0.177}, {0.070, 0.129, 0.178, 0.217}, {0.072, 0.129, 0.173, 0.207},
    {0.075, 0.136, 0.183, 0.220}, {0.076, 0.135, 0.179, 0.213}, {0.080, 0.140, 0.186, 0.221},
    {0.081, 0.140, 0.185, 0.219}, {0.081, 0.141, 0.187, 0.222}, {0.082, 0.142, 0.187, 0.222},
};
inline constexpr double kBiasLimit[4] = {0.083, 0.143, 0.188, 0.222};

inline std::optional<int> threshold_cell(int row, int col, int tol) {
  const int v = kThresholds[row][col][tol];
  if (v == kNoThreshold) return std::nullopt;
  return v;
}

}  // namespace bcd::reference
