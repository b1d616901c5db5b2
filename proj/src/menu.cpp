#include "epr/menu.hpp"

#include <algorithm>
#include <stdexcept>

namespace epr {

const std::string& Menu::at_clamped(int row, int col) const {
  if (grid.empty() || grid.front().empty()) {
    throw std::invalid_argument("menu grid is empty");
  }
  const int r = std::clamp(row, 0, rows() - 1);
  const int c = std::clamp(col, 0, cols() - 1);
  return grid[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
}

const Menu& MenuWorld::menu_of(const std::string& chain) const {
  const auto it = chains.find(chain);
  if (it == chains.end()) {
    throw std::invalid_argument("unknown chain: " + chain);
  }
  return it->second;
}

int MenuWorld::max_rows() const {
  int m = 0;
  for (const auto& [name, menu] : chains) m = std::max(m, menu.rows());
  return m;
}

int MenuWorld::max_cols() const {
  int m = 0;
  for (const auto& [name, menu] : chains) m = std::max(m, menu.cols());
  return m;
}

std::pair<std::string, std::string> menu_lunch(const MenuWorld& world,
                                               const std::string& chain_left,
                                               const std::string& chain_right,
                                               SharedNumbers shared) {
  const std::string& left = world.menu_of(chain_left).at_clamped(shared.row, shared.col);
  const std::string& right = world.menu_of(chain_right).at_clamped(shared.row, shared.col);
  return {left, right};
}

namespace {
Menu make_menu(const std::string& prefix, int rows, int cols) {
  Menu menu;
  menu.grid.resize(static_cast<std::size_t>(rows));
  for (int r = 0; r < rows; ++r) {
    auto& row = menu.grid[static_cast<std::size_t>(r)];
    row.reserve(static_cast<std::size_t>(cols));
    for (int c = 0; c < cols; ++c) {
      row.push_back(prefix + "-" + std::to_string(r) + "." + std::to_string(c));
    }
  }
  return menu;
}
}  // namespace

MenuWorld default_menu_world() {
  MenuWorld world;
  world.chains["alpha"] = make_menu("alpha", 6, 4);
  world.chains["beta"] = make_menu("beta", 6, 4);
  world.chains["gamma"] = make_menu("gamma", 6, 4);
  return world;
}

MenuWorld shared_menu_world() {
  MenuWorld world;
  const Menu common = make_menu("common", 6, 4);
  world.chains["alpha"] = common;
  world.chains["beta"] = common;
  world.chains["gamma"] = common;
  return world;
}

}  // namespace epr
