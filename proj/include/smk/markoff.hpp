#pragma once

// The Markoff surface x^2 + y^2 + z^2 = 3xyz over F_p, the moves generated by
// the Vieta involutions and coordinate permutations, and the connected
// components of the resulting graph.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smk/ff.hpp"

namespace smk::markoff {

using u32 = std::uint32_t;

/// p^2-sized tables; larger primes are rejected.
inline constexpr u64 kMaxPrime = 5000;

struct MarkoffTriple {
  FieldElement x, y, z;

  bool on_surface() const;
  bool has_zero_coordinate() const { return x.is_zero() || y.is_zero() || z.is_zero(); }
  std::array<u64, 3> raw() const { return {x.value(), y.value(), z.value()}; }
  std::string to_string() const;

  friend bool operator==(const MarkoffTriple&, const MarkoffTriple&) = default;
  friend auto operator<=>(const MarkoffTriple& a, const MarkoffTriple& b) { return a.raw() <=> b.raw(); }
};

MarkoffTriple make_triple(u64 x, u64 y, u64 z, u64 p);

/// R1..R3 are the Vieta involutions; Pabc sends (t1, t2, t3) to (ta, tb, tc).
enum class Move { R1, R2, R3, P123, P132, P213, P231, P312, P321 };
inline constexpr std::array<Move, 9> kAllMoves = {Move::R1,   Move::R2,   Move::R3,   Move::P123, Move::P132,
                                                  Move::P213, Move::P231, Move::P312, Move::P321};
std::string to_string(Move m);

MarkoffTriple apply_move(const MarkoffTriple& t, Move m);

/// Dense ids for the points of M_p (all solutions except the origin), ordered
/// lexicographically by (x, y, z). Per (x, y) there are at most two z values,
/// so the index stores z only and recovers (x, y) from the slot offsets.
class SurfaceIndex {
 public:
  u64 p() const { return p_; }
  u32 size() const { return static_cast<u32>(z_.size()); }

  std::optional<u32> id(u64 x, u64 y, u64 z) const {
    const std::size_t s = x * p_ + y;
    for (u32 k = offsets_[s]; k < offsets_[s + 1]; ++k)
      if (z_[k] == z) return k;
    return std::nullopt;
  }
  std::optional<u32> id(const MarkoffTriple& t) const { return id(t.x.value(), t.y.value(), t.z.value()); }

  std::array<u64, 3> raw(u32 id) const;
  MarkoffTriple triple(u32 id) const;

  /// ids with first two coordinates (x, y) are [slot_begin, slot_end).
  u32 slot_begin(u64 x, u64 y) const { return offsets_[x * p_ + y]; }
  u32 slot_end(u64 x, u64 y) const { return offsets_[x * p_ + y + 1]; }
  u64 z_of(u32 id) const { return z_[id]; }

  u32 zero_coordinate_points() const { return zero_coord_; }

 private:
  friend SurfaceIndex enumerate_surface(u64 p);
  u64 p_ = 0;
  std::vector<u32> offsets_;  // size p^2 + 1
  std::vector<std::uint16_t> z_;
  u32 zero_coord_ = 0;
};

/// Solves z^2 - 3xy z + x^2 + y^2 = 0 for every (x, y). Requires 3 <= p <= 5000.
SurfaceIndex enumerate_surface(u64 p);

/// Component labels: components are numbered by their smallest id, so the
/// numbering does not depend on how the merges were ordered.
struct Components {
  std::vector<u32> label;
  std::vector<u32> sizes;  // indexed by label
};
Components label_components(const SurfaceIndex& idx);

struct ComponentReport {
  u64 p = 0;
  u64 n_points = 0;
  u64 n_components = 0;
  std::vector<u64> sizes;  // descending
  u64 largest = 0;
  u64 cp_size = 0;           // component of (1,1,1)
  u32 cp_label = 0;
  bool cp_is_largest = true;  // strictly largest
  u64 exceptional = 0;        // n_points - cp_size
  u64 zero_coord_points = 0;
  std::vector<std::string> warnings;
};

ComponentReport summarize(const SurfaceIndex& idx, const Components& comps);
ComponentReport components(const SurfaceIndex& idx);

/// Points outside the component of (1,1,1).
std::vector<MarkoffTriple> exceptional_points(const SurfaceIndex& idx, const Components& comps);

/// Closure of {t} under all moves, sorted. Throws std::invalid_argument when t
/// is not on the surface.
std::vector<MarkoffTriple> orbit_of(const SurfaceIndex& idx, const MarkoffTriple& t);

/// One report per prime in [p_lo, p_hi], ordered by p.
std::vector<ComponentReport> exceptional_scan(u64 p_lo, u64 p_hi, unsigned threads);

}  // namespace smk::markoff
