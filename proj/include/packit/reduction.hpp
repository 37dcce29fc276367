#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "packit/rules.hpp"

namespace packit {

/// A set of distinct multiples of 4, |A| = 3k, each strictly between T/4 and
/// T/2 where T = sum(A) / k.
struct PartitionInstance {
  std::vector<std::int64_t> values;  ///< ascending
  std::int64_t target = 0;           ///< T

  int size() const { return static_cast<int>(values.size()); }
  int triples() const { return size() / 3; }
};

/// Errors, checked in this order: Size, Format (not a multiple of 4 or not
/// positive), Duplicate, Format (T not integral), Range.
PartitionInstance validate_partition_instance(std::vector<std::int64_t> values);

using Triple = std::array<std::int64_t, 3>;

/// Exhaustive triple matching; triples and their members ascending.
std::optional<std::vector<Triple>> brute_force_three_partition(const PartitionInstance& inst);

enum class GadgetKind { E, S, D };

std::string_view gadget_name(GadgetKind kind);

/// A T x 3 block. E leaves its middle column empty; S(alpha) has an
/// alpha x 1 hole at the top of the middle column; D(alpha) has two such
/// holes separated by one filled cell.
struct Gadget {
  GadgetKind kind = GadgetKind::E;
  std::int64_t alpha = 0;  ///< unused for E
  int column = 0;          ///< leftmost grid column
};

struct ReducedInstance {
  PartitionInstance instance;
  GridDims dims;                 ///< (T + n) x (T + n)
  std::vector<bool> filled;      ///< row-major
  int start_turn = 1;
  std::vector<Gadget> gadgets;   ///< left to right
  int gadget_columns = 0;        ///< columns before the filled padding

  GameState state() const { return GameState::from_partial(dims, filled, start_turn); }
  std::int64_t empty_cells() const;
};

ReducedInstance build_grid(const PartitionInstance& inst);

/// Moves for turns 1..max(A) that fill the reduced grid, given a 3-partition.
/// Throws Error(Partition) unless `partition` splits A into triples of sum T.
std::vector<Placement> forward_pack(const ReducedInstance& reduced,
                                    const std::vector<Triple>& partition);

}  // namespace packit
