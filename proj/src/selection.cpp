#include "packit/selection.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

#include "packit/arithmetic.hpp"
#include "packit/error.hpp"

namespace packit {

std::vector<Extent> fitting_extents(std::int64_t area, int m, int n) {
  std::vector<Extent> out;
  if (area < 1) return out;
  const std::int64_t lo = std::min(m, n);
  const std::int64_t hi = std::max(m, n);
  // Walking the short side downward from sqrt(area) makes the long side grow.
  std::int64_t s = 1;
  while ((s + 1) * (s + 1) <= area) ++s;
  for (; s >= 1; --s) {
    if (area % s != 0) continue;
    const std::int64_t l = area / s;
    if (s <= lo && l <= hi) out.push_back(Extent{static_cast<int>(s), static_cast<int>(l)});
  }
  return out;
}

std::optional<Extent> fits(std::int64_t area, int m, int n) {
  auto all = fitting_extents(area, m, n);
  if (all.empty()) return std::nullopt;
  return all.front();
}

std::int64_t RectangleSelection::total_area() const {
  std::int64_t sum = 0;
  for (const Extent& e : rects) sum += e.area();
  return sum;
}

int RectangleSelection::expansion_count() const {
  int count = 0;
  for (std::size_t k = 0; k < rects.size(); ++k) {
    if (rects[k].area() == first_turn + static_cast<std::int64_t>(k) + 1) ++count;
  }
  return count;
}

std::vector<std::int64_t> RectangleSelection::areas() const {
  std::vector<std::int64_t> out;
  out.reserve(rects.size());
  for (const Extent& e : rects) out.push_back(e.area());
  return out;
}

DpTable::DpTable(GridDims dims, int first_turn, int turns, std::int64_t target)
    : dims_(dims), first_turn_(first_turn), turns_(turns), target_(target), width_(target + 1) {
  if (dims.rows < 1 || dims.cols < 1) throw Error(ErrorCode::InvalidDims, "grid dimensions must be positive");
  if (first_turn < 1 || turns < 0 || target < 0) {
    throw Error(ErrorCode::InvalidInput, "selection table needs positive first turn and non-negative size");
  }
  const std::int64_t size = (std::int64_t{turns} + 1) * width_;
  if (size > (std::int64_t{1} << 32)) throw Error(ErrorCode::Range, "selection table too large");
  cells_.assign(static_cast<std::size_t>(size), 0);
  cells_[0] = 1;
  for (int k = 1; k <= turns; ++k) {
    const std::int64_t t = first_turn + k - 1;
    const bool small_fits = area_fits(t);
    const bool large_fits = area_fits(t + 1);
    const char* prev = &cells_[static_cast<std::size_t>((k - 1) * width_)];
    char* row = &cells_[static_cast<std::size_t>(k * width_)];
    for (std::int64_t total = 0; total <= target; ++total) {
      const bool via_small = small_fits && total >= t && prev[total - t];
      const bool via_large = large_fits && total >= t + 1 && prev[total - t - 1];
      row[total] = via_small || via_large;
    }
  }
}

bool DpTable::reachable(int k, std::int64_t total) const {
  if (k < 0 || k > turns_ || total < 0 || total > target_) return false;
  return cells_[static_cast<std::size_t>(k * width_ + total)] != 0;
}

bool DpTable::area_fits(std::int64_t a) const {
  return fits(a, dims_.rows, dims_.cols).has_value();
}

DpTable dp_table(int m, int n) {
  const GridDims dims{m, n};
  if (m < 1 || n < 1) throw Error(ErrorCode::InvalidDims, "grid dimensions must be positive");
  const AreaSplit split = split_area(dims.area());
  return DpTable(dims, 1, static_cast<int>(split.rectangles), dims.area());
}

namespace {

RectangleSelection materialize(const DpTable& table, const std::vector<std::int64_t>& areas) {
  RectangleSelection sel;
  sel.dims = table.dims();
  sel.first_turn = table.first_turn();
  sel.rects.reserve(areas.size());
  for (std::int64_t a : areas) sel.rects.push_back(*fits(a, sel.dims.rows, sel.dims.cols));
  return sel;
}

void enumerate_from(const DpTable& table, int k, std::int64_t total,
                    std::vector<std::int64_t>& areas, std::vector<RectangleSelection>& out,
                    std::size_t limit) {
  if (out.size() >= limit) return;
  if (k == 0) {
    if (total == 0) out.push_back(materialize(table, areas));
    return;
  }
  const std::int64_t t = table.first_turn() + k - 1;
  for (std::int64_t a : {t, t + 1}) {
    if (!table.area_fits(a) || !table.reachable(k - 1, total - a)) continue;
    areas[static_cast<std::size_t>(k - 1)] = a;
    enumerate_from(table, k - 1, total - a, areas, out, limit);
    if (out.size() >= limit) return;
  }
}

}  // namespace

std::optional<RectangleSelection> extract_selection(const DpTable& table) {
  auto one = enumerate_selections(table, 1);
  if (one.empty()) return std::nullopt;
  return std::move(one.front());
}

std::vector<RectangleSelection> enumerate_selections(const DpTable& table, std::size_t limit) {
  std::vector<RectangleSelection> out;
  if (limit == 0 || !table.feasible()) return out;
  std::vector<std::int64_t> areas(static_cast<std::size_t>(table.turns()));
  enumerate_from(table, table.turns(), table.target(), areas, out, limit);
  return out;
}

std::vector<RectangleSelection> enumerate_selections(int m, int n, std::size_t limit) {
  return enumerate_selections(dp_table(m, n), limit);
}

std::optional<int> turns_to_fill(std::int64_t free_cells, int first_turn) {
  if (free_cells < 0 || first_turn < 1) return std::nullopt;
  std::int64_t least = 0;  // sum of the minimal areas of the first k turns
  for (int k = 0;; ++k) {
    if (least > free_cells) return std::nullopt;
    if (free_cells <= least + k) return k;
    least += first_turn + k;
  }
}

void check_selection(const RectangleSelection& sel, std::int64_t expected_total) {
  const GridDims dims = sel.dims;
  const int lo = std::min(dims.rows, dims.cols);
  const int hi = std::max(dims.rows, dims.cols);
  for (std::size_t k = 0; k < sel.rects.size(); ++k) {
    const Extent e = sel.rects[k];
    const std::int64_t t = sel.first_turn + static_cast<std::int64_t>(k);
    std::ostringstream os;
    if (e.h < 1 || e.v < 1 || (e.area() != t && e.area() != t + 1)) {
      os << "rectangle for turn " << t << " is " << e.h << "x" << e.v << ", area must be " << t
         << " or " << t + 1;
      throw Error(ErrorCode::InvalidInput, os.str());
    }
    if (std::min(e.h, e.v) > lo || std::max(e.h, e.v) > hi) {
      os << "rectangle for turn " << t << " (" << e.h << "x" << e.v << ") cannot fit a "
         << dims.rows << "x" << dims.cols << " grid";
      throw Error(ErrorCode::InvalidInput, os.str());
    }
  }
  if (sel.total_area() != expected_total) {
    throw Error(ErrorCode::InvalidInput, "selection covers " + std::to_string(sel.total_area()) +
                                             " cells, expected " + std::to_string(expected_total));
  }
}

std::string format_selection(const RectangleSelection& sel) {
  std::ostringstream os;
  for (std::size_t k = 0; k < sel.rects.size(); ++k) {
    os << sel.first_turn + static_cast<int>(k) << ' ' << sel.rects[k].h << ' ' << sel.rects[k].v
       << '\n';
  }
  return os.str();
}

RectangleSelection parse_selection(std::istream& in, GridDims dims) {
  RectangleSelection sel;
  sel.dims = dims;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream fields(line);
    int t = 0;
    Extent e;
    if (!(fields >> t >> e.h >> e.v)) throw Error(ErrorCode::Parse, "selection line must be `t h v`");
    if (first) {
      sel.first_turn = t;
      first = false;
    } else if (t != sel.first_turn + static_cast<int>(sel.rects.size())) {
      throw Error(ErrorCode::Parse, "selection turns must be consecutive");
    }
    sel.rects.push_back(e);
  }
  return sel;
}

}  // namespace packit
