#pragma once

// Canonical keys for edge-3-coloured positions.
//
// A position is viewed as two (three, on host graphs) stacked graph layers on
// the same n vertices. Vertices are distinguished by how many Maker / Breaker
// / Absent edges they send into each cell of an ordered partition, and a
// McKay-style individualisation-refinement search picks the minimal
// certificate. Fixed-pair subclasses start from the partition ({u,v}, rest),
// which allows swapping u and v but never mapping them elsewhere.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "mbg/board.hpp"
#include "mbg/core.hpp"

namespace mbg {

using VertexMask = std::uint32_t;

// Keys pack 2 bits per vertex pair into 128 bits, which caps n at 11.
inline constexpr int kMaxCanonVertices = 11;

struct ColoringView {
  int n = 0;
  std::array<VertexMask, kMaxCanonVertices> maker{};
  std::array<VertexMask, kMaxCanonVertices> breaker{};
  std::array<VertexMask, kMaxCanonVertices> absent{};

  static ColoringView from_board(const Board& b) {
    if (b.vertex_count() > kMaxCanonVertices) {
      throw BoardTooLarge("canonical keys support at most 11 vertices");
    }
    ColoringView g;
    g.n = b.vertex_count();
    for (Vertex v = 0; v < g.n; ++v) {
      g.maker[v] = static_cast<VertexMask>(b.neighbours(v, EdgeState::Maker));
      g.breaker[v] = static_cast<VertexMask>(b.neighbours(v, EdgeState::Breaker));
      g.absent[v] = static_cast<VertexMask>(b.neighbours(v, EdgeState::Absent));
    }
    return g;
  }

  EdgeState state(Vertex a, Vertex b) const {
    if ((maker[a] >> b) & 1) return EdgeState::Maker;
    if ((breaker[a] >> b) & 1) return EdgeState::Breaker;
    if ((absent[a] >> b) & 1) return EdgeState::Absent;
    return EdgeState::Free;
  }

  // Image of the view under v -> image[v].
  ColoringView relabeled(std::span<const int> image) const {
    ColoringView out;
    out.n = n;
    auto map_mask = [&](VertexMask m) {
      VertexMask r = 0;
      for (; m; m &= m - 1) r |= VertexMask{1} << image[std::countr_zero(m)];
      return r;
    };
    for (int v = 0; v < n; ++v) {
      out.maker[image[v]] = map_mask(maker[v]);
      out.breaker[image[v]] = map_mask(breaker[v]);
      out.absent[image[v]] = map_mask(absent[v]);
    }
    return out;
  }
};

struct CanonicalKey {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  friend auto operator<=>(const CanonicalKey&, const CanonicalKey&) = default;
};

struct CanonicalKeyHash {
  std::size_t operator()(const CanonicalKey& k) const noexcept {
    std::uint64_t x = k.lo ^ (k.hi * 0x9E3779B97F4A7C15ULL);
    x ^= x >> 31;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 29;
    return static_cast<std::size_t>(x);
  }
};

// Bits of CanonicalKey::hi above the certificate.
inline constexpr int kKeyTagShift = 46;
inline constexpr std::uint64_t kKeyUsedHiMask = (1ULL << 54) - 1;

using OrderedPartition = std::vector<std::vector<Vertex>>;

namespace detail {

using Code = unsigned __int128;

struct Cells {
  int count = 0;
  std::array<VertexMask, kMaxCanonVertices> mask{};
};

struct SplitQueue {
  std::array<VertexMask, 64> items{};
  int head = 0;
  int tail = 0;

  void push(VertexMask m) { items[tail++] = m; }
  bool empty() const { return head == tail; }
  VertexMask pop() { return items[head++]; }
};

inline std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
  h *= 0xBF58476D1CE4E5B9ULL;
  return h ^ (h >> 31);
}

// Splits every cell by (Maker, Breaker, Absent) counts into each splitter until
// the queue drains. New fragments are ordered by descending count vector and
// all of them are queued, so the result is equitable and label-invariant.
// Returns an invariant trace of the splits performed.
inline std::uint64_t refine_cells(const ColoringView& g, Cells& c, SplitQueue& q) {
  std::uint64_t trace = 0x84222325CBF29CE4ULL;
  while (!q.empty()) {
    const VertexMask w = q.pop();
    for (int i = 0; i < c.count; ++i) {
      const VertexMask x = c.mask[i];
      if ((x & (x - 1)) == 0) continue;

      std::array<std::uint32_t, kMaxCanonVertices> key{};
      std::array<int, kMaxCanonVertices> vert{};
      int k = 0;
      bool uniform = true;
      for (VertexMask r = x; r; r &= r - 1) {
        const int y = std::countr_zero(r);
        const std::uint32_t kv = (std::popcount(g.maker[y] & w) << 8) |
                                 (std::popcount(g.breaker[y] & w) << 4) |
                                 std::popcount(g.absent[y] & w);
        vert[k] = y;
        key[k] = kv;
        if (kv != key[0]) uniform = false;
        ++k;
      }
      if (uniform) continue;

      std::array<std::uint32_t, kMaxCanonVertices> distinct{};
      int d = 0;
      for (int j = 0; j < k; ++j) {
        if (std::find(distinct.begin(), distinct.begin() + d, key[j]) == distinct.begin() + d)
          distinct[d++] = key[j];
      }
      std::sort(distinct.begin(), distinct.begin() + d, std::greater<>());

      // Make room for d-1 extra cells after position i.
      for (int j = c.count - 1; j > i; --j) c.mask[j + d - 1] = c.mask[j];
      c.count += d - 1;
      for (int gi = 0; gi < d; ++gi) {
        VertexMask part = 0;
        for (int j = 0; j < k; ++j)
          if (key[j] == distinct[gi]) part |= VertexMask{1} << vert[j];
        c.mask[i + gi] = part;
        q.push(part);
        trace = mix(trace, (static_cast<std::uint64_t>(i + gi) << 40) |
                               (static_cast<std::uint64_t>(distinct[gi]) << 8) |
                               static_cast<std::uint64_t>(std::popcount(part)));
      }
      i += d - 1;
    }
  }
  return mix(trace, static_cast<std::uint64_t>(c.count));
}

inline Code leaf_code(const ColoringView& g, std::span<const int> lab) {
  Code code = 0;
  int t = 0;
  for (int i = 0; i < g.n; ++i) {
    const int a = lab[i];
    for (int j = i + 1; j < g.n; ++j, ++t) {
      const int b = lab[j];
      unsigned s = 0;
      if ((g.maker[a] >> b) & 1) s = 1;
      else if ((g.breaker[a] >> b) & 1) s = 2;
      else if ((g.absent[a] >> b) & 1) s = 3;
      code |= static_cast<Code>(s) << (2 * t);
    }
  }
  return code;
}

class CanonSearch {
 public:
  explicit CanonSearch(const ColoringView& g) : g_(g), n_(g.n) {}

  void run(Cells root, SplitQueue q) {
    trace_[0] = refine_cells(g_, root, q) | kTop;
    descend(root, 0);
  }

  Code best_code() const { return best_code_; }
  const std::array<int, kMaxCanonVertices>& best_labeling() const { return best_lab_; }
  std::size_t leaves() const { return leaves_; }
  std::size_t generator_count() const { return generators_.size(); }

 private:
  static constexpr std::uint64_t kTop = 1ULL << 63;  // traces > END (0)

  using Perm = std::array<std::int8_t, kMaxCanonVertices>;

  std::uint64_t best_trace_at(int j) const { return j <= best_depth_ ? best_trace_[j] : 0; }

  // True when the current path's trace prefix already exceeds the best leaf's.
  bool prefix_worse(int level) const {
    if (!have_best_) return false;
    for (int j = 0; j <= level; ++j) {
      const std::uint64_t b = best_trace_at(j);
      if (trace_[j] != b) return trace_[j] > b;
    }
    return false;
  }

  void descend(const Cells& cells, int level) {
    if (prefix_worse(level)) return;
    if (cells.count == n_) {
      leaf(cells, level);
      return;
    }
    int target = -1, size = 1;
    for (int i = 0; i < cells.count; ++i) {
      const int s = std::popcount(cells.mask[i]);
      if (s > size) size = s, target = i;
    }
    const VertexMask cell = cells.mask[target];
    VertexMask explored = 0;
    for (VertexMask rem = cell; rem; rem &= rem - 1) {
      const int v = std::countr_zero(rem);
      if (explored && equivalent_to_explored(v, explored, cell, level)) continue;
      explored |= VertexMask{1} << v;

      Cells child = cells;
      for (int j = child.count - 1; j > target; --j) child.mask[j + 1] = child.mask[j];
      child.mask[target] = VertexMask{1} << v;
      child.mask[target + 1] = cell & ~(VertexMask{1} << v);
      ++child.count;
      SplitQueue q;
      q.push(VertexMask{1} << v);
      trace_[level + 1] = refine_cells(g_, child, q) | kTop;
      seq_[level] = v;
      descend(child, level + 1);
    }
  }

  // Orbit test under the discovered automorphisms that fix the current
  // individualised vertices pointwise.
  bool equivalent_to_explored(int v, VertexMask explored, VertexMask cell, int level) const {
    std::array<std::int8_t, kMaxCanonVertices> parent{};
    for (int i = 0; i < n_; ++i) parent[i] = static_cast<std::int8_t>(i);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    bool any = false;
    for (const Perm& p : generators_) {
      bool fixes = true;
      for (int j = 0; j < level && fixes; ++j) fixes = p[seq_[j]] == seq_[j];
      if (!fixes) continue;
      any = true;
      for (VertexMask r = cell; r; r &= r - 1) {
        const int x = std::countr_zero(r);
        const int a = find(x), b = find(p[x]);
        if (a != b) parent[a] = static_cast<std::int8_t>(b);
      }
    }
    if (!any) return false;
    const int rv = find(v);
    for (VertexMask r = explored; r; r &= r - 1)
      if (find(std::countr_zero(r)) == rv) return true;
    return false;
  }

  void leaf(const Cells& cells, int level) {
    ++leaves_;
    std::array<int, kMaxCanonVertices> lab{};
    for (int i = 0; i < n_; ++i) lab[i] = std::countr_zero(cells.mask[i]);
    const Code code = leaf_code(g_, std::span<const int>(lab.data(), n_));

    if (!have_first_) {
      have_first_ = true;
      first_code_ = code;
      first_depth_ = level;
      first_trace_ = trace_;
      first_lab_ = lab;
    } else if (level == first_depth_ && code == first_code_ &&
               std::equal(trace_.begin(), trace_.begin() + level + 1, first_trace_.begin())) {
      record_automorphism(lab, first_lab_);
    }

    if (!have_best_) {
      take_best(code, level, lab);
      return;
    }
    int cmp = 0;
    const int top = std::max(level, best_depth_);
    for (int j = 0; j <= top && cmp == 0; ++j) {
      const std::uint64_t a = j <= level ? trace_[j] : 0;
      const std::uint64_t b = best_trace_at(j);
      if (a != b) cmp = a < b ? -1 : 1;
    }
    if (cmp == 0 && code != best_code_) cmp = code < best_code_ ? -1 : 1;
    if (cmp < 0) take_best(code, level, lab);
    else if (cmp == 0) record_automorphism(lab, best_lab_);
  }

  void take_best(Code code, int level, const std::array<int, kMaxCanonVertices>& lab) {
    have_best_ = true;
    best_code_ = code;
    best_depth_ = level;
    best_trace_ = trace_;
    best_lab_ = lab;
  }

  // Two leaves with equal certificates differ by an automorphism mapping
  // lab[i] -> ref[i].
  void record_automorphism(const std::array<int, kMaxCanonVertices>& lab,
                           const std::array<int, kMaxCanonVertices>& ref) {
    Perm p{};
    bool identity = true;
    for (int i = 0; i < n_; ++i) {
      p[lab[i]] = static_cast<std::int8_t>(ref[i]);
      identity &= lab[i] == ref[i];
    }
    if (identity || generators_.size() >= 64) return;
    generators_.push_back(p);
  }

  const ColoringView& g_;
  int n_;
  std::array<std::uint64_t, kMaxCanonVertices + 1> trace_{};
  std::array<int, kMaxCanonVertices> seq_{};

  bool have_best_ = false;
  Code best_code_ = 0;
  int best_depth_ = 0;
  std::array<std::uint64_t, kMaxCanonVertices + 1> best_trace_{};
  std::array<int, kMaxCanonVertices> best_lab_{};

  bool have_first_ = false;
  Code first_code_ = 0;
  int first_depth_ = 0;
  std::array<std::uint64_t, kMaxCanonVertices + 1> first_trace_{};
  std::array<int, kMaxCanonVertices> first_lab_{};

  std::vector<Perm> generators_;
  std::size_t leaves_ = 0;
};

inline void seed_partition(int n, std::optional<Edge> fixed_pair, Cells& cells, SplitQueue& q) {
  const VertexMask all = n == 32 ? ~VertexMask{0} : (VertexMask{1} << n) - 1;
  if (fixed_pair) {
    const VertexMask pair = (VertexMask{1} << fixed_pair->u) | (VertexMask{1} << fixed_pair->v);
    cells.count = 0;
    cells.mask[cells.count++] = pair;
    if (all & ~pair) cells.mask[cells.count++] = all & ~pair;
  } else {
    cells.count = 1;
    cells.mask[0] = all;
  }
  for (int i = 0; i < cells.count; ++i) q.push(cells.mask[i]);
}

}  // namespace detail

// Coarsest equitable refinement of `initial`; cells come back sorted.
inline OrderedPartition refine(const ColoringView& view, const OrderedPartition& initial) {
  detail::Cells cells;
  detail::SplitQueue q;
  VertexMask seen = 0;
  for (const auto& cell : initial) {
    VertexMask m = 0;
    for (Vertex v : cell) {
      if (v < 0 || v >= view.n || ((seen >> v) & 1)) throw InvalidVertex("bad initial partition");
      m |= VertexMask{1} << v;
    }
    seen |= m;
    if (!m) continue;
    cells.mask[cells.count++] = m;
    q.push(m);
  }
  if (std::popcount(seen) != view.n) throw InvalidVertex("initial partition must cover all vertices");
  detail::refine_cells(view, cells, q);
  OrderedPartition out;
  for (int i = 0; i < cells.count; ++i) {
    std::vector<Vertex> cell;
    for (VertexMask m = cells.mask[i]; m; m &= m - 1) cell.push_back(std::countr_zero(m));
    out.push_back(std::move(cell));
  }
  return out;
}

struct CanonicalForm {
  detail::Code code = 0;
  // labeling[i] = original vertex placed at canonical position i.
  std::vector<Vertex> labeling;
};

inline CanonicalForm canonical_form(const ColoringView& view, std::optional<Edge> fixed_pair = {}) {
  if (view.n < 1 || view.n > kMaxCanonVertices) throw BoardTooLarge("canonical keys need 1 <= n <= 11");
  if (fixed_pair) {
    const Edge e = *fixed_pair;
    if (e.u == e.v || e.u < 0 || e.v < 0 || e.u >= view.n || e.v >= view.n)
      throw InvalidVertex("invalid fixed pair");
  }
  detail::Cells cells;
  detail::SplitQueue q;
  detail::seed_partition(view.n, fixed_pair, cells, q);
  detail::CanonSearch search(view);
  search.run(cells, q);
  CanonicalForm out;
  out.code = search.best_code();
  out.labeling.assign(search.best_labeling().begin(), search.best_labeling().begin() + view.n);
  return out;
}

inline CanonicalKey canonical_key(const ColoringView& view, Player to_move,
                                  std::optional<Edge> fixed_pair, GameKind kind) {
  if (fixed_pair && kind != GameKind::FixedHamiltonianPath) {
    throw InvalidSpec("a fixed pair is only meaningful for the fixed Hamiltonian path game");
  }
  const detail::Code code = canonical_form(view, fixed_pair).code;
  CanonicalKey key;
  key.lo = static_cast<std::uint64_t>(code);
  key.hi = static_cast<std::uint64_t>(code >> 64) |
           (static_cast<std::uint64_t>(view.n) << kKeyTagShift) |
           (static_cast<std::uint64_t>(to_move) << (kKeyTagShift + 4)) |
           (static_cast<std::uint64_t>(kind) << (kKeyTagShift + 5));
  return key;
}

inline CanonicalKey canonical_key(const Board& board, Player to_move, std::optional<Edge> fixed_pair,
                                  GameKind kind) {
  return canonical_key(ColoringView::from_board(board), to_move, fixed_pair, kind);
}

// Number of distinct (sub)classes among the sample, to_move fixed to Maker.
inline std::size_t count_classes(int n, std::span<const Board> positions, GameKind kind,
                                 std::optional<Edge> fixed_pair = {}) {
  if (n > 5) throw BoardTooLarge("count_classes is meant for n <= 5");
  std::set<CanonicalKey> keys;
  for (const Board& b : positions) {
    if (b.vertex_count() != n) throw InvalidSpec("sample position has the wrong size");
    keys.insert(canonical_key(b, Player::Maker, fixed_pair, kind));
  }
  return keys.size();
}

}  // namespace mbg
