#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace epr {

// A chain's menu: a rectangular grid of meal identifiers, identical at every
// restaurant of the chain.
struct Menu {
  std::vector<std::vector<std::string>> grid;  // rows x cols

  int rows() const { return static_cast<int>(grid.size()); }
  int cols() const { return grid.empty() ? 0 : static_cast<int>(grid.front().size()); }
  // Coordinates past the edge clamp to the last row/column.
  const std::string& at_clamped(int row, int col) const;
};

struct MenuWorld {
  std::map<std::string, Menu> chains;

  const Menu& menu_of(const std::string& chain) const;  // throws on unknown chain
  int max_rows() const;
  int max_cols() const;
};

// The shared random numbers both sides carry for the day.
struct SharedNumbers {
  int row = 0;
  int col = 0;
};

// Each side independently looks up its own chain's menu at the shared
// coordinates. No information flows between the sides.
std::pair<std::string, std::string> menu_lunch(const MenuWorld& world,
                                               const std::string& chain_left,
                                               const std::string& chain_right,
                                               SharedNumbers shared);

// Three chains, 6x4 grids, pairwise disjoint meals.
MenuWorld default_menu_world();

// Three chains carrying one identical menu.
MenuWorld shared_menu_world();

}  // namespace epr
