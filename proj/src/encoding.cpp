#include "packit/encoding.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "packit/error.hpp"

namespace packit {

std::string_view family_name(ClauseFamily family) {
  switch (family) {
    case ClauseFamily::SuffixMonotone: return "suffix-monotone";
    case ClauseFamily::PrefixMonotone: return "prefix-monotone";
    case ClauseFamily::Conjunction: return "conjunction";
    case ClauseFamily::Length: return "length";
    case ClauseFamily::Nonempty: return "nonempty";
    case ClauseFamily::Overlap: return "overlap";
    case ClauseFamily::Blocked: return "blocked";
  }
  return "unknown";
}

void CnfFormula::add(ClauseFamily family, std::initializer_list<int> lits) {
  add(family, std::span<const int>(lits.begin(), lits.size()));
}

void CnfFormula::add(ClauseFamily family, std::span<const int> lits) {
  if (lits.empty()) throw Error(ErrorCode::InvalidInput, "refusing to add an empty clause");
  for (int lit : lits) {
    if (lit == 0) throw Error(ErrorCode::InvalidInput, "literal 0 inside a clause");
    num_vars_ = std::max(num_vars_, lit < 0 ? -lit : lit);
  }
  literals_.insert(literals_.end(), lits.begin(), lits.end());
  starts_.push_back(literals_.size());
  families_.push_back(family);
}

VariableMap::VariableMap(GridDims dims, RectangleSelection selection)
    : dims_(dims), selection_(std::move(selection)) {
  const int k = rect_count();
  int next = 1;
  for (int block = 0; block < 6; ++block) {
    block_start_[block] = next;
    next += k * (block < 3 ? dims_.cols : dims_.rows);
  }
  rotation_.assign(static_cast<std::size_t>(k), 0);
  for (int r = 0; r < k; ++r) {
    const Extent e = selection_.rects[static_cast<std::size_t>(r)];
    if (e.h != e.v) rotation_[static_cast<std::size_t>(r)] = next++;
  }
  channel_start_ = next;
  next += k * (k - 1) / 2;
  total_ = next - 1;
}

int VariableMap::var(VarKind kind, Axis axis, int rect, int pos) const {
  const int block = (axis == Axis::X ? 0 : 3) + static_cast<int>(kind);
  return block_start_[block] + rect * axis_size(axis) + pos;
}

std::optional<int> VariableMap::rotation(int rect) const {
  const int v = rotation_[static_cast<std::size_t>(rect)];
  if (v == 0) return std::nullopt;
  return v;
}

int VariableMap::channel(int rect1, int rect2) const {
  // Row-major index of (rect1, rect2) in the strict upper triangle.
  const int k = rect_count();
  const int before = rect1 * (2 * k - rect1 - 1) / 2;
  return channel_start_ + before + (rect2 - rect1 - 1);
}

namespace {

/// Clauses carving one rectangle's interval on one axis. `guard` is a
/// literal appended to every length clause (0 for none): the clause only
/// bites when the guard literal is false.
void add_length_clauses(CnfFormula& f, const VariableMap& map, Axis axis, int rect, int extent,
                        int guard) {
  const int size = map.axis_size(axis);
  auto m = [&](int i) { return map.var(VarKind::Prefix, axis, rect, i); };
  auto big_m = [&](int i) { return map.var(VarKind::Suffix, axis, rect, i); };
  std::vector<int> lits;
  auto emit = [&] {
    if (guard != 0) lits.push_back(guard);
    f.add(ClauseFamily::Length, lits);
    lits.clear();
  };
  // Upper bound R - L <= extent - 1: m_i -> !M_{i-extent}. The mirrored
  // form M_i -> !m_{i+extent} is the same clause and is not repeated.
  for (int i = extent; i < size; ++i) {
    lits = {-m(i), -big_m(i - extent)};
    emit();
  }
  // Lower bound R - L >= extent - 1: if the interval ends at i (m_i and not
  // m_{i+1}) it must start no later than i - extent + 1.
  for (int i = 0; i < size; ++i) {
    lits.push_back(-m(i));
    if (i + 1 < size) lits.push_back(m(i + 1));
    if (i - extent + 1 >= 0) lits.push_back(big_m(i - extent + 1));
    emit();
  }
}

void add_axis_structure(CnfFormula& f, const VariableMap& map, Axis axis, int rect) {
  const int size = map.axis_size(axis);
  for (int i = 0; i + 1 < size; ++i) {
    f.add(ClauseFamily::SuffixMonotone,
          {-map.var(VarKind::Suffix, axis, rect, i), map.var(VarKind::Suffix, axis, rect, i + 1)});
  }
  for (int i = 1; i < size; ++i) {
    f.add(ClauseFamily::PrefixMonotone,
          {-map.var(VarKind::Prefix, axis, rect, i), map.var(VarKind::Prefix, axis, rect, i - 1)});
  }
  for (int i = 0; i < size; ++i) {
    const int cover = map.var(VarKind::Cover, axis, rect, i);
    const int m = map.var(VarKind::Prefix, axis, rect, i);
    const int big_m = map.var(VarKind::Suffix, axis, rect, i);
    f.add(ClauseFamily::Conjunction, {-cover, m});
    f.add(ClauseFamily::Conjunction, {-cover, big_m});
    f.add(ClauseFamily::Conjunction, {cover, -m, -big_m});
  }
  f.add(ClauseFamily::Nonempty, {map.var(VarKind::Prefix, axis, rect, 0)});
  f.add(ClauseFamily::Nonempty, {map.var(VarKind::Suffix, axis, rect, size - 1)});
}

Encoding build_encoding(GridDims dims, const RectangleSelection& selection,
                        const std::vector<bool>& blocked);

}  // namespace

Encoding encode(GridDims dims, const RectangleSelection& selection) {
  const std::vector<bool> none(static_cast<std::size_t>(std::max<std::int64_t>(dims.area(), 0)), false);
  return encode(dims, selection, none);
}

Encoding encode(GridDims dims, const RectangleSelection& selection,
                const std::vector<bool>& blocked) {
  if (dims.rows < 1 || dims.cols < 1) throw Error(ErrorCode::InvalidInput, "grid dimensions must be positive");
  if (!(selection.dims == dims)) {
    throw Error(ErrorCode::InvalidInput, "selection was built for a different grid");
  }
  if (blocked.size() != static_cast<std::size_t>(dims.area())) {
    throw Error(ErrorCode::InvalidInput, "blocked mask does not match the grid");
  }
  std::int64_t free_cells = 0;
  for (bool b : blocked) free_cells += b ? 0 : 1;
  check_selection(selection, free_cells);
  return build_encoding(dims, selection, blocked);
}

Encoding encode_rectangles(GridDims dims, const std::vector<Extent>& rects) {
  if (dims.rows < 1 || dims.cols < 1) throw Error(ErrorCode::InvalidInput, "grid dimensions must be positive");
  for (const Extent& e : rects) {
    if (e.h < 1 || e.v < 1) throw Error(ErrorCode::InvalidInput, "rectangle sides must be positive");
  }
  const std::vector<bool> none(static_cast<std::size_t>(dims.area()), false);
  return build_encoding(dims, RectangleSelection{dims, 1, rects}, none);
}

namespace {

Encoding build_encoding(GridDims dims, const RectangleSelection& selection,
                        const std::vector<bool>& blocked) {
  Encoding enc{CnfFormula{}, VariableMap(dims, selection)};
  CnfFormula& f = enc.formula;
  const VariableMap& map = enc.map;
  f.reserve_vars(map.total_vars());
  const int k = map.rect_count();

  for (int r = 0; r < k; ++r) {
    const Extent e = selection.rects[static_cast<std::size_t>(r)];
    for (Axis axis : {Axis::X, Axis::Y}) {
      add_axis_structure(f, map, axis, r);
      // Unrotated: columns span h and rows span v; rotated swaps them.
      const int straight = axis == Axis::X ? e.h : e.v;
      const int turned = axis == Axis::X ? e.v : e.h;
      if (auto rot = map.rotation(r)) {
        add_length_clauses(f, map, axis, r, straight, *rot);
        add_length_clauses(f, map, axis, r, turned, -*rot);
      } else {
        add_length_clauses(f, map, axis, r, straight, 0);
      }
    }
  }

  for (int r1 = 0; r1 < k; ++r1) {
    for (int r2 = r1 + 1; r2 < k; ++r2) {
      const int c = map.channel(r1, r2);
      for (int i = 0; i < dims.cols; ++i) {
        f.add(ClauseFamily::Overlap, {-map.var(VarKind::Cover, Axis::X, r1, i),
                                      -map.var(VarKind::Cover, Axis::X, r2, i), c});
      }
      for (int j = 0; j < dims.rows; ++j) {
        f.add(ClauseFamily::Overlap, {-map.var(VarKind::Cover, Axis::Y, r1, j),
                                      -map.var(VarKind::Cover, Axis::Y, r2, j), -c});
      }
    }
  }

  for (int row = 0; row < dims.rows; ++row) {
    for (int col = 0; col < dims.cols; ++col) {
      if (!blocked[static_cast<std::size_t>(row) * dims.cols + col]) continue;
      for (int r = 0; r < k; ++r) {
        f.add(ClauseFamily::Blocked, {-map.var(VarKind::Cover, Axis::X, r, col),
                                      -map.var(VarKind::Cover, Axis::Y, r, row)});
      }
    }
  }
  return enc;
}

}  // namespace

void write_dimacs(std::ostream& out, const CnfFormula& formula) {
  out << "p cnf " << formula.num_vars() << ' ' << formula.num_clauses() << '\n';
  std::string line;
  for (std::size_t i = 0; i < formula.num_clauses(); ++i) {
    line.clear();
    for (int lit : formula.clause(i)) {
      line += std::to_string(lit);
      line += ' ';
    }
    line += "0\n";
    out << line;
  }
}

std::string emit_dimacs(const CnfFormula& formula) {
  std::ostringstream os;
  write_dimacs(os, formula);
  return os.str();
}

std::pair<int, std::size_t> read_dimacs_header(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream fields(line);
    std::string p, cnf;
    long long vars = -1, clauses = -1;
    if (fields >> p >> cnf >> vars >> clauses && p == "p" && cnf == "cnf" && vars >= 0 &&
        clauses >= 0) {
      return {static_cast<int>(vars), static_cast<std::size_t>(clauses)};
    }
    break;
  }
  throw Error(ErrorCode::Parse, "missing `p cnf <vars> <clauses>` header");
}

bool Model::assigned(int var) const {
  return var > 0 && static_cast<std::size_t>(var) < values.size() && values[static_cast<std::size_t>(var)] >= 0;
}

bool Model::value(int var) const { return assigned(var) && values[static_cast<std::size_t>(var)] == 1; }

Model parse_model(std::istream& in) {
  Model model;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string token; fields >> token;) tokens.push_back(token);
    if (tokens.empty() || tokens[0][0] == 'c' || tokens[0][0] == 's') continue;
    // Solver output prefixes literal lines with `v`; bare lists do not.
    const std::size_t first = tokens[0] == "v" ? 1 : 0;
    for (std::size_t i = first; i < tokens.size(); ++i) {
      long long lit = 0;
      try {
        std::size_t used = 0;
        lit = std::stoll(tokens[i], &used);
        if (used != tokens[i].size()) throw std::invalid_argument(tokens[i]);
      } catch (const std::exception&) {
        throw Error(ErrorCode::Parse, "model contains a non-integer token `" + tokens[i] + "`");
      }
      if (lit == 0) continue;
      const auto var = static_cast<std::size_t>(lit < 0 ? -lit : lit);
      if (var > (std::size_t{1} << 28)) throw Error(ErrorCode::Parse, "model variable index too large");
      if (model.values.size() <= var) model.values.resize(var + 1, -1);
      model.values[var] = lit > 0 ? 1 : 0;
    }
  }
  return model;
}

Model parse_model(const std::string& text) {
  std::istringstream in(text);
  return parse_model(in);
}

namespace {

struct AxisInterval {
  int low = 0;
  int high = 0;
};

AxisInterval decode_axis(const VariableMap& map, const Model& model, Axis axis, int rect) {
  const int size = map.axis_size(axis);
  const char* axis_name = axis == Axis::X ? "x" : "y";
  auto fail = [&](const std::string& what) {
    std::ostringstream os;
    os << "rectangle " << map.selection().first_turn + rect << " axis " << axis_name << ": " << what;
    throw Error(ErrorCode::Decode, os.str());
  };
  auto read = [&](VarKind kind, int i) {
    const int v = map.var(kind, axis, rect, i);
    if (!model.assigned(v)) fail("variable " + std::to_string(v) + " is unassigned");
    return model.value(v);
  };
  int prefix_end = -1;  // last true m
  bool seen_false = false;
  for (int i = 0; i < size; ++i) {
    const bool bit = read(VarKind::Prefix, i);
    if (bit && seen_false) fail("m vector is not a prefix");
    if (bit) prefix_end = i;
    seen_false = seen_false || !bit;
  }
  int suffix_start = size;
  bool seen_true = false;
  for (int i = 0; i < size; ++i) {
    const bool bit = read(VarKind::Suffix, i);
    if (!bit && seen_true) fail("M vector is not a suffix");
    if (bit && !seen_true) suffix_start = i;
    seen_true = seen_true || bit;
  }
  int low = -1, high = -1;
  for (int i = 0; i < size; ++i) {
    const bool bit = read(VarKind::Cover, i);
    const bool expected = i <= prefix_end && i >= suffix_start;
    if (bit != expected) fail("cover bit " + std::to_string(i) + " differs from m & M");
    if (bit) {
      if (low < 0) low = i;
      high = i;
    }
  }
  if (low < 0) fail("interval is empty");
  return {low, high};
}

}  // namespace

DecodedPacking decode_model(const VariableMap& map, const Model& model) {
  DecodedPacking packing;
  const int k = map.rect_count();
  packing.rects.reserve(static_cast<std::size_t>(k));
  for (int r = 0; r < k; ++r) {
    const AxisInterval xi = decode_axis(map, model, Axis::X, r);
    const AxisInterval yi = decode_axis(map, model, Axis::Y, r);
    const int width = xi.high - xi.low + 1;
    const int height = yi.high - yi.low + 1;
    const Extent e = map.selection().rects[static_cast<std::size_t>(r)];
    bool turned = false;
    if (auto rot = map.rotation(r)) {
      if (!model.assigned(*rot)) throw Error(ErrorCode::Decode, "rotation variable is unassigned");
      turned = model.value(*rot);
    }
    const int want_w = turned ? e.v : e.h;
    const int want_h = turned ? e.h : e.v;
    if (width != want_w || height != want_h) {
      std::ostringstream os;
      os << "rectangle " << map.selection().first_turn + r << " decoded as " << width << "x" << height
         << ", expected " << want_w << "x" << want_h;
      throw Error(ErrorCode::Decode, os.str());
    }
    packing.rects.push_back(RectInterval{xi.low, xi.high, yi.low, yi.high});
  }
  return packing;
}

std::vector<Placement> to_placements(const VariableMap& map, const DecodedPacking& packing) {
  std::vector<Placement> out;
  out.reserve(packing.rects.size());
  for (std::size_t r = 0; r < packing.rects.size(); ++r) {
    const RectInterval& iv = packing.rects[r];
    out.push_back(Placement{map.selection().first_turn + static_cast<int>(r), iv.x_high - iv.x_low + 1,
                            iv.y_high - iv.y_low + 1, iv.x_low, iv.y_low});
  }
  return out;
}

ClauseStats clause_stats(const CnfFormula& formula, const VariableMap& map) {
  ClauseStats stats;
  stats.vars = std::max(formula.num_vars(), map.total_vars());
  stats.clauses = formula.num_clauses();
  for (int fam = 1; fam <= 7; ++fam) stats.by_family[fam] = 0;
  for (std::size_t i = 0; i < formula.num_clauses(); ++i) {
    ++stats.by_family[static_cast<int>(formula.family(i))];
  }
  return stats;
}

}  // namespace packit
