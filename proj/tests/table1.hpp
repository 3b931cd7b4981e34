// Reference per-element DOF counts (full, serendipity) for regular polygons.
#pragma once

#include <array>

namespace table1 {

struct Cell {
  int full;
  int serendipity;
};

// [shape: triangle..hexagon][space: V, Sigma, W][k: 0..4]
inline constexpr std::array<std::array<std::array<Cell, 5>, 3>, 4> counts{{
    {{{{{3, 3}, {7, 6}, {12, 10}, {18, 15}, {25, 21}}},
      {{{6, 6}, {15, 14}, {26, 23}, {39, 34}, {54, 47}}},
      {{{4, 4}, {9, 9}, {15, 15}, {22, 22}, {30, 30}}}}},
    {{{{{4, 4}, {9, 8}, {15, 12}, {22, 17}, {30, 23}}},
      {{{8, 8}, {19, 18}, {32, 29}, {47, 41}, {64, 55}}},
      {{{5, 5}, {11, 11}, {18, 18}, {26, 26}, {35, 35}}}}},
    {{{{{5, 5}, {11, 10}, {18, 15}, {26, 20}, {35, 26}}},
      {{{10, 10}, {23, 22}, {38, 35}, {55, 49}, {74, 64}}},
      {{{6, 6}, {13, 13}, {21, 21}, {30, 30}, {40, 40}}}}},
    {{{{{6, 6}, {13, 12}, {21, 18}, {30, 24}, {40, 30}}},
      {{{12, 12}, {27, 26}, {44, 41}, {63, 57}, {84, 74}}},
      {{{7, 7}, {15, 15}, {24, 24}, {34, 34}, {45, 45}}}}},
}};

}  // namespace table1
