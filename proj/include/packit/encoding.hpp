#pragma once

#include <algorithm>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "packit/rules.hpp"
#include "packit/selection.hpp"

namespace packit {

/// Clause families of the interval encoding. Values are stable; they are
/// reported by clause_stats and the bench CSV.
enum class ClauseFamily : int {
  SuffixMonotone = 1,  ///< M_i -> M_{i+1}
  PrefixMonotone = 2,  ///< m_i -> m_{i-1}
  Conjunction = 3,     ///< x_i <-> m_i & M_i
  Length = 4,          ///< interval length is exactly the extent
  Nonempty = 5,        ///< m_0 and M_{last}
  Overlap = 6,         ///< channel c forbids sharing a column and a row
  Blocked = 7,         ///< rectangle may not cover a prefilled cell
};

std::string_view family_name(ClauseFamily family);

class CnfFormula {
 public:
  int num_vars() const { return num_vars_; }
  std::size_t num_clauses() const { return families_.size(); }

  std::span<const int> clause(std::size_t i) const {
    return {literals_.data() + starts_[i], starts_[i + 1] - starts_[i]};
  }
  ClauseFamily family(std::size_t i) const { return families_[i]; }

  /// Registers variables 1..count as in use.
  void reserve_vars(int count) { num_vars_ = std::max(num_vars_, count); }
  void add(ClauseFamily family, std::initializer_list<int> lits);
  void add(ClauseFamily family, std::span<const int> lits);

 private:
  int num_vars_ = 0;
  std::vector<int> literals_;
  std::vector<std::size_t> starts_{0};
  std::vector<ClauseFamily> families_;
};

enum class Axis { X, Y };

/// Per-axis variable vectors of one rectangle: prefix (m), suffix (M) and
/// cover (x for columns, y for rows).
enum class VarKind { Prefix, Suffix, Cover };

/// Dense DIMACS numbering. Blocks, each ordered by (rectangle, position):
/// m^x, M^x, x, m^y, M^y, y, then one rotation variable per non-square
/// rectangle, then one channel per rectangle pair (k1 < k2, lexicographic).
/// Total = 3*K*cols + 3*K*rows + (#non-square) + K*(K-1)/2.
class VariableMap {
 public:
  VariableMap(GridDims dims, RectangleSelection selection);

  const GridDims& dims() const { return dims_; }
  const RectangleSelection& selection() const { return selection_; }
  int rect_count() const { return static_cast<int>(selection_.rects.size()); }
  int axis_size(Axis axis) const { return axis == Axis::X ? dims_.cols : dims_.rows; }

  int var(VarKind kind, Axis axis, int rect, int pos) const;
  std::optional<int> rotation(int rect) const;
  int channel(int rect1, int rect2) const;
  int total_vars() const { return total_; }

 private:
  GridDims dims_;
  RectangleSelection selection_;
  int block_start_[6] = {};
  std::vector<int> rotation_;  // 0 = square, no variable
  int channel_start_ = 0;
  int total_ = 0;
};

struct Encoding {
  CnfFormula formula;
  VariableMap map;
};

/// CNF whose models are exactly the overlap-free placements of every
/// rectangle (each optionally turned 90 degrees) inside the grid. Throws
/// Error(InvalidInput) if `selection` does not fit `dims`, its areas break
/// the turn rule, or its total differs from the grid area.
Encoding encode(GridDims dims, const RectangleSelection& selection);

/// Variant for partially filled grids: `blocked` is a row-major mask of
/// cells no rectangle may cover, and the selection must total the free cells.
Encoding encode(GridDims dims, const RectangleSelection& selection,
                const std::vector<bool>& blocked);

/// Same clauses for an arbitrary list of rectangles, skipping the turn rule
/// and the area total. Useful for packing questions outside the game.
Encoding encode_rectangles(GridDims dims, const std::vector<Extent>& rects);

/// Byte-stable DIMACS text.
std::string emit_dimacs(const CnfFormula& formula);
void write_dimacs(std::ostream& out, const CnfFormula& formula);

/// Header counts of a DIMACS file: {vars, clauses}.
std::pair<int, std::size_t> read_dimacs_header(std::istream& in);

/// Truth assignment indexed by variable; 1 true, 0 false, -1 unassigned.
struct Model {
  std::vector<std::int8_t> values;

  bool assigned(int var) const;
  bool value(int var) const;
};

/// Accepts solver `s`/`v` output or a bare list of signed literals.
Model parse_model(std::istream& in);
Model parse_model(const std::string& text);

struct RectInterval {
  int x_low = 0, x_high = 0;  ///< inclusive column range
  int y_low = 0, y_high = 0;  ///< inclusive row range
};

struct DecodedPacking {
  std::vector<RectInterval> rects;
};

/// Reads intervals off a model. Throws Error(Decode) on any structural
/// violation (unassigned variable, non-prefix m, non-suffix M, cover not
/// equal to m & M, empty or wrong-length interval, rotation mismatch).
DecodedPacking decode_model(const VariableMap& map, const Model& model);

/// Placements in turn order.
std::vector<Placement> to_placements(const VariableMap& map, const DecodedPacking& packing);

struct ClauseStats {
  int vars = 0;
  std::size_t clauses = 0;
  std::map<int, std::size_t> by_family;
};

ClauseStats clause_stats(const CnfFormula& formula, const VariableMap& map);

}  // namespace packit
