#include "rps/reference_tables.hpp"

#include <array>
#include <stdexcept>

namespace rps::reftab {

namespace {

const std::array<ReferenceTable, 4> kTables = {{
    {1,
     3,
     60.0,
     {
         {{10.0, 30.3, 20.0}, {42.4, 42.6, 42.1}, 47.9},
         {{20.0, 20.0, 20.0}, {43.9, 45.5, 43.5}, 46.9},
         {{2.0, 29.4, 29.4}, {42.6, 40.5, 43.5}, 49.7},
         {{1.0, 1.0, 58.8}, {34.6, 35.9, 34.9}, 49.7},
     }},
    {2,
     3,
     30.0,
     {
         {{10.0, 10.0, 10.0}, {18.8, 18.4, 18.3}, 18.7},
         {{5.0, 10.0, 14.9}, {18.5, 18.4, 18.3}, 18.6},
         {{1.0, 1.0, 27.8}, {18.9, 18.5, 18.3}, 18.6},
         {{5.0, 12.5, 12.5}, {18.5, 18.3, 18.2}, 18.6},
         {{1.0, 1.0, 58.8}, {34.6, 35.9, 34.9}, 49.7},
     }},
    {3,
     4,
     60.0,
     {
         {{14.9, 14.9, 14.9, 14.9}, {44.1, 43.9, 44.1, 43.3}, 45.9},
         {{1.0, 19.6, 19.6, 19.6}, {41.7, 42.7, 41.5, 42.7}, 46.3},
         {{7.5, 12.5, 17.5, 22.2}, {42.1, 42.0, 41.3, 41.2}, 46.2},
         {{1.5, 1.5, 1.5, 55.5}, {30.5, 32.7, 32.2, 32.4}, 46.8},
     }},
    {4,
     4,
     30.0,
     {
         {{7.5, 7.5, 7.5, 7.5}, {18.9, 18.7, 18.5, 18.3}, 18.6},
         {{3.7, 6.3, 8.7, 11.1}, {18.7, 18.5, 18.5, 18.4}, 18.6},
         {{0.5, 9.8, 9.8, 9.8}, {19.1, 18.8, 19.3, 18.9}, 18.6},
         {{0.5, 0.5, 0.5, 27.8}, {20.7, 20.3, 20.6, 20.4}, 18.5},
     }},
}};

}  // namespace

const ReferenceTable& reference_table(int id) {
  if (id < 1 || id > 4)
    throw std::out_of_range("reference table id must be 1..4");
  return kTables[id - 1];
}

}  // namespace rps::reftab
