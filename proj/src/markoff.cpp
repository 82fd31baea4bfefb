#include "smk/markoff.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "smk/numth.hpp"
#include "smk/parallel.hpp"

namespace smk::markoff {

bool MarkoffTriple::on_surface() const {
  return x * x + y * y + z * z == x.scalar(3) * x * y * z;
}

std::string MarkoffTriple::to_string() const {
  return "(" + x.to_string() + "," + y.to_string() + "," + z.to_string() + ")";
}

MarkoffTriple make_triple(u64 x, u64 y, u64 z, u64 p) {
  return {FieldElement(x, p), FieldElement(y, p), FieldElement(z, p)};
}

std::string to_string(Move m) {
  switch (m) {
    case Move::R1: return "R1";
    case Move::R2: return "R2";
    case Move::R3: return "R3";
    case Move::P123: return "P123";
    case Move::P132: return "P132";
    case Move::P213: return "P213";
    case Move::P231: return "P231";
    case Move::P312: return "P312";
    case Move::P321: return "P321";
  }
  return "?";
}

MarkoffTriple apply_move(const MarkoffTriple& t, Move m) {
  const auto& [x, y, z] = t;
  const FieldElement three = x.scalar(3);
  switch (m) {
    case Move::R1: return {three * y * z - x, y, z};
    case Move::R2: return {x, three * x * z - y, z};
    case Move::R3: return {x, y, three * x * y - z};
    case Move::P123: return {x, y, z};
    case Move::P132: return {x, z, y};
    case Move::P213: return {y, x, z};
    case Move::P231: return {y, z, x};
    case Move::P312: return {z, x, y};
    case Move::P321: return {z, y, x};
  }
  return t;
}

std::array<u64, 3> SurfaceIndex::raw(u32 id) const {
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), id);
  const u64 slot = static_cast<u64>(it - offsets_.begin()) - 1;
  return {slot / p_, slot % p_, z_[id]};
}

MarkoffTriple SurfaceIndex::triple(u32 id) const {
  auto r = raw(id);
  return make_triple(r[0], r[1], r[2], p_);
}

SurfaceIndex enumerate_surface(u64 p) {
  if (p < 3 || p > kMaxPrime) throw RangeTooLarge("enumerate_surface needs 3 <= p <= 5000, got " + std::to_string(p));
  if (!numth::is_prime(p)) throw std::invalid_argument("enumerate_surface needs a prime, got " + std::to_string(p));

  // root[a] = smaller square root of a, or p when a is a non-residue
  std::vector<u32> root(p, static_cast<u32>(p));
  for (u64 r = 0; r <= p / 2; ++r) root[r * r % p] = static_cast<u32>(r);
  const u64 inv2 = (p + 1) / 2;

  SurfaceIndex idx;
  idx.p_ = p;
  idx.offsets_.assign(p * p + 1, 0);
  idx.z_.reserve(p * p + 3 * p);
  for (u64 x = 0; x < p; ++x) {
    const u64 x2 = x * x % p;
    for (u64 y = 0; y < p; ++y) {
      idx.offsets_[x * p + y] = static_cast<u32>(idx.z_.size());
      const u64 y2 = y * y % p;
      const u64 s = 3 * x % p * y % p;  // sum of the two roots
      const u64 disc = sub_mod(s * s % p, 4 * ((x2 + y2) % p) % p, p);
      const u32 r = root[disc];
      if (r == p) continue;
      u64 z1 = (s + p - r) % p * inv2 % p;
      u64 z2 = (s + r) % p * inv2 % p;
      if (z1 > z2) std::swap(z1, z2);
      const bool origin_slot = x == 0 && y == 0;
      for (u64 z : {z1, z2}) {
        if (origin_slot && z == 0) continue;
        if (!idx.z_.empty() && idx.offsets_[x * p + y] < idx.z_.size() && idx.z_.back() == z) continue;
        idx.z_.push_back(static_cast<std::uint16_t>(z));
        if (x == 0 || y == 0 || z == 0) ++idx.zero_coord_;
      }
    }
  }
  idx.offsets_[p * p] = static_cast<u32>(idx.z_.size());
  return idx;
}

namespace {

struct UnionFind {
  std::vector<u32> parent;
  std::vector<u32> rank;
  explicit UnionFind(u32 n) : parent(n), rank(n, 0) { std::iota(parent.begin(), parent.end(), 0u); }
  u32 find(u32 v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  }
  void unite(u32 a, u32 b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (rank[a] < rank[b]) std::swap(a, b);
    parent[b] = a;
    if (rank[a] == rank[b]) ++rank[a];
  }
};

u32 must_id(const SurfaceIndex& idx, u64 x, u64 y, u64 z) {
  auto id = idx.id(x, y, z);
  if (!id) throw std::logic_error("move left the surface");
  return *id;
}

}  // namespace

Components label_components(const SurfaceIndex& idx) {
  const u64 p = idx.p();
  UnionFind uf(idx.size());
  // R3 and the two generating transpositions suffice: R1 = P213 R2 P213 and
  // R2 = P132 R3 P132, and (12), (23) generate S_3.
  for (u64 x = 0; x < p; ++x) {
    for (u64 y = 0; y < p; ++y) {
      const u32 b = idx.slot_begin(x, y), e = idx.slot_end(x, y);
      if (e - b == 2) uf.unite(b, b + 1);
      for (u32 id = b; id < e; ++id) {
        const u64 z = idx.z_of(id);
        uf.unite(id, must_id(idx, y, x, z));
        uf.unite(id, must_id(idx, x, z, y));
      }
    }
  }
  Components out;
  out.label.assign(idx.size(), 0);
  std::vector<u32> root_label(idx.size(), UINT32_MAX);
  for (u32 id = 0; id < idx.size(); ++id) {
    const u32 r = uf.find(id);
    if (root_label[r] == UINT32_MAX) {
      root_label[r] = static_cast<u32>(out.sizes.size());
      out.sizes.push_back(0);
    }
    out.label[id] = root_label[r];
    ++out.sizes[root_label[r]];
  }
  return out;
}

ComponentReport summarize(const SurfaceIndex& idx, const Components& comps) {
  ComponentReport rep;
  rep.p = idx.p();
  rep.n_points = idx.size();
  rep.n_components = comps.sizes.size();
  rep.sizes.assign(comps.sizes.begin(), comps.sizes.end());
  std::sort(rep.sizes.begin(), rep.sizes.end(), std::greater<>());
  rep.largest = rep.sizes.empty() ? 0 : rep.sizes.front();
  rep.zero_coord_points = idx.zero_coordinate_points();

  const auto anchor = idx.id(1, 1, 1);
  if (!anchor) throw std::logic_error("(1,1,1) missing from the surface");
  rep.cp_label = comps.label[*anchor];
  rep.cp_size = comps.sizes[rep.cp_label];
  rep.exceptional = rep.n_points - rep.cp_size;
  const bool tie = rep.sizes.size() > 1 && rep.sizes[1] == rep.cp_size;
  rep.cp_is_largest = rep.cp_size == rep.largest && !tie;
  if (!rep.cp_is_largest)
    rep.warnings.push_back("component of (1,1,1) is not strictly the largest at p=" + std::to_string(rep.p));
  return rep;
}

ComponentReport components(const SurfaceIndex& idx) { return summarize(idx, label_components(idx)); }

std::vector<MarkoffTriple> exceptional_points(const SurfaceIndex& idx, const Components& comps) {
  const u32 cp = comps.label[*idx.id(1, 1, 1)];
  std::vector<MarkoffTriple> out;
  for (u32 id = 0; id < idx.size(); ++id)
    if (comps.label[id] != cp) out.push_back(idx.triple(id));
  return out;
}

std::vector<MarkoffTriple> orbit_of(const SurfaceIndex& idx, const MarkoffTriple& t) {
  if (t.x.modulus() != idx.p()) throw ModulusMismatch("triple and surface use different primes");
  const auto start = idx.id(t);
  if (!start) throw std::invalid_argument("orbit_of: " + t.to_string() + " is not a point of M_p");
  std::vector<char> seen(idx.size(), 0);
  std::vector<u32> queue{*start};
  seen[*start] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const MarkoffTriple cur = idx.triple(queue[head]);
    for (Move m : kAllMoves) {
      const u32 nb = *idx.id(apply_move(cur, m));
      if (!seen[nb]) {
        seen[nb] = 1;
        queue.push_back(nb);
      }
    }
  }
  std::sort(queue.begin(), queue.end());
  std::vector<MarkoffTriple> out;
  out.reserve(queue.size());
  for (u32 id : queue) out.push_back(idx.triple(id));
  return out;
}

std::vector<ComponentReport> exceptional_scan(u64 p_lo, u64 p_hi, unsigned threads) {
  if (p_hi > kMaxPrime) throw RangeTooLarge("exceptional_scan limited to p <= 5000");
  const std::vector<u64> primes = numth::primes_in_range(std::max<u64>(p_lo, 3), p_hi);
  // largest primes first keeps the pool busy; results still land by index
  std::vector<std::size_t> order(primes.size());
  std::iota(order.begin(), order.end(), 0);
  std::reverse(order.begin(), order.end());
  std::vector<ComponentReport> out(primes.size());
  parallel_for(order.size(), threads, [&](std::size_t k) {
    const std::size_t i = order[k];
    out[i] = components(enumerate_surface(primes[i]));
  });
  return out;
}

}  // namespace smk::markoff
