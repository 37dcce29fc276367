#include "packit/reduction.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "packit/error.hpp"

namespace packit {

namespace {

constexpr std::int64_t kMaxSide = 46340;

std::string join(const std::vector<std::int64_t>& values) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << values[i];
  os << '}';
  return os.str();
}

}  // namespace

PartitionInstance validate_partition_instance(std::vector<std::int64_t> values) {
  if (values.empty() || values.size() % 3 != 0) {
    throw Error(ErrorCode::Size, "instance size " + std::to_string(values.size()) +
                                     " is not a positive multiple of 3");
  }
  for (std::int64_t a : values) {
    if (a <= 0 || a % 4 != 0) {
      throw Error(ErrorCode::Format, "element " + std::to_string(a) + " is not a positive multiple of 4");
    }
    if (a > kMaxSide) throw Error(ErrorCode::Range, "element " + std::to_string(a) + " is too large");
  }
  std::sort(values.begin(), values.end());
  if (auto dup = std::adjacent_find(values.begin(), values.end()); dup != values.end()) {
    throw Error(ErrorCode::Duplicate, "element " + std::to_string(*dup) + " appears more than once");
  }
  const std::int64_t sum = std::accumulate(values.begin(), values.end(), std::int64_t{0});
  const std::int64_t k = static_cast<std::int64_t>(values.size()) / 3;
  if (sum % k != 0) {
    throw Error(ErrorCode::Format, "sum " + std::to_string(sum) + " is not divisible by " +
                                       std::to_string(k) + " triples");
  }
  const std::int64_t target = sum / k;
  for (std::int64_t a : values) {
    // T/4 < a < T/2, kept in integers.
    if (!(4 * a > target && 2 * a < target)) {
      std::ostringstream os;
      os << "element " << a << " is outside (" << target << "/4, " << target << "/2) in " << join(values);
      throw Error(ErrorCode::Range, os.str());
    }
  }
  if (target + static_cast<std::int64_t>(values.size()) > kMaxSide) {
    throw Error(ErrorCode::Range, "reduced grid would be too large");
  }
  return PartitionInstance{std::move(values), target};
}

namespace {

bool match_triples(const PartitionInstance& inst, std::vector<char>& used, std::vector<Triple>& out) {
  const auto& a = inst.values;
  const std::size_t n = a.size();
  std::size_t first = 0;
  while (first < n && used[first]) ++first;
  if (first == n) return true;
  used[first] = 1;
  for (std::size_t j = first + 1; j < n; ++j) {
    if (used[j]) continue;
    const std::int64_t need = inst.target - a[first] - a[j];
    if (need <= a[j]) break;
    const auto it = std::lower_bound(a.begin() + static_cast<std::ptrdiff_t>(j) + 1, a.end(), need);
    if (it == a.end() || *it != need) continue;
    const auto l = static_cast<std::size_t>(it - a.begin());
    if (used[l]) continue;
    used[j] = used[l] = 1;
    out.push_back(Triple{a[first], a[j], need});
    if (match_triples(inst, used, out)) return true;
    out.pop_back();
    used[j] = used[l] = 0;
  }
  used[first] = 0;
  return false;
}

}  // namespace

std::optional<std::vector<Triple>> brute_force_three_partition(const PartitionInstance& inst) {
  std::vector<char> used(inst.values.size(), 0);
  std::vector<Triple> out;
  if (match_triples(inst, used, out)) return out;
  return std::nullopt;
}

std::string_view gadget_name(GadgetKind kind) {
  switch (kind) {
    case GadgetKind::E: return "E";
    case GadgetKind::S: return "S";
    case GadgetKind::D: return "D";
  }
  return "?";
}

std::int64_t ReducedInstance::empty_cells() const {
  return static_cast<std::int64_t>(std::count(filled.begin(), filled.end(), false));
}

ReducedInstance build_grid(const PartitionInstance& inst) {
  ReducedInstance out;
  out.instance = inst;
  const std::int64_t t = inst.target;
  const int side = static_cast<int>(t + inst.size());
  out.dims = GridDims{side, side};

  for (int j = 0; j < inst.triples(); ++j) out.gadgets.push_back(Gadget{GadgetKind::E, 0, 0});
  out.gadgets.push_back(Gadget{GadgetKind::S, 1, 0});
  const std::set<std::int64_t> members(inst.values.begin(), inst.values.end());
  const std::int64_t largest = inst.values.back();
  for (std::int64_t m = 3; m < largest; m += 2) {
    if (members.count(m - 1)) {
      out.gadgets.push_back(Gadget{GadgetKind::S, m + 1, 0});
    } else {
      out.gadgets.push_back(Gadget{GadgetKind::D, m, 0});
    }
  }
  for (std::size_t g = 0; g < out.gadgets.size(); ++g) out.gadgets[g].column = static_cast<int>(3 * g);
  out.gadget_columns = static_cast<int>(3 * out.gadgets.size());
  if (out.gadget_columns >= side) {
    throw Error(ErrorCode::Range, "gadgets need " + std::to_string(out.gadget_columns) +
                                      " columns but the grid has " + std::to_string(side));
  }

  out.filled.assign(static_cast<std::size_t>(out.dims.area()), true);
  auto clear = [&](int row, int col) {
    out.filled[static_cast<std::size_t>(row) * static_cast<std::size_t>(side) + static_cast<std::size_t>(col)] =
        false;
  };
  for (const Gadget& g : out.gadgets) {
    const int mid = g.column + 1;
    switch (g.kind) {
      case GadgetKind::E:
        for (int r = 0; r < t; ++r) clear(r, mid);
        break;
      case GadgetKind::S:
        for (int r = 0; r < g.alpha; ++r) clear(r, mid);
        break;
      case GadgetKind::D:
        for (int r = 0; r < g.alpha; ++r) clear(r, mid);
        for (int r = static_cast<int>(g.alpha) + 1; r <= 2 * g.alpha; ++r) clear(r, mid);
        break;
    }
  }
  return out;
}

std::vector<Placement> forward_pack(const ReducedInstance& reduced, const std::vector<Triple>& partition) {
  const PartitionInstance& inst = reduced.instance;
  if (static_cast<int>(partition.size()) != inst.triples()) {
    throw Error(ErrorCode::Partition, "expected " + std::to_string(inst.triples()) + " triples, got " +
                                          std::to_string(partition.size()));
  }
  // Element value -> index of its triple (and so of its E gadget).
  std::map<std::int64_t, int> owner;
  for (std::size_t j = 0; j < partition.size(); ++j) {
    std::int64_t sum = 0;
    for (std::int64_t a : partition[j]) {
      sum += a;
      if (!std::binary_search(inst.values.begin(), inst.values.end(), a)) {
        throw Error(ErrorCode::Partition, std::to_string(a) + " is not an element of the instance");
      }
      if (!owner.emplace(a, static_cast<int>(j)).second) {
        throw Error(ErrorCode::Partition, std::to_string(a) + " is used twice");
      }
    }
    if (sum != inst.target) {
      throw Error(ErrorCode::Partition, "triple " + std::to_string(j) + " sums to " + std::to_string(sum) +
                                            " instead of " + std::to_string(inst.target));
    }
  }

  std::map<std::pair<GadgetKind, std::int64_t>, int> column_of;
  std::vector<int> e_columns;
  for (const Gadget& g : reduced.gadgets) {
    if (g.kind == GadgetKind::E) {
      e_columns.push_back(g.column + 1);
    } else {
      column_of[{g.kind, g.alpha}] = g.column + 1;
    }
  }
  auto hole_column = [&](GadgetKind kind, std::int64_t alpha) {
    const auto it = column_of.find({kind, alpha});
    if (it == column_of.end()) {
      throw Error(ErrorCode::InvalidInput, "reduced grid has no " + std::string(gadget_name(kind)) + "(" +
                                               std::to_string(alpha) + ") gadget");
    }
    return it->second;
  };

  std::vector<int> e_fill(e_columns.size(), 0);
  std::vector<Placement> moves;
  const std::int64_t largest = inst.values.back();
  for (int t = 1; t <= largest; ++t) {
    const int residue = t % 4;
    if (t == 1) {
      moves.push_back(Placement{t, 1, 1, hole_column(GadgetKind::S, 1), 0});
    } else if (const auto it = owner.find(t); it != owner.end()) {
      const auto j = static_cast<std::size_t>(it->second);
      moves.push_back(Placement{t, 1, t, e_columns[j], e_fill[j]});
      e_fill[j] += t;
    } else if (residue == 1 && owner.count(t - 1)) {
      moves.push_back(Placement{t, 1, t + 1, hole_column(GadgetKind::S, t + 1), 0});
    } else if (residue == 0 || residue == 2) {
      moves.push_back(Placement{t, 1, t + 1, hole_column(GadgetKind::D, t + 1), 0});
    } else {
      // Second hole of D(t), opened on the previous turn.
      moves.push_back(Placement{t, 1, t, hole_column(GadgetKind::D, t), t + 1});
    }
  }
  return moves;
}

}  // namespace packit
