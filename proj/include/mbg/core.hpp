#pragma once

// Shared vocabulary: players, edge states, edge identities, game kinds and the
// exception hierarchy used across the library.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace mbg {

enum class Player : std::uint8_t { Maker = 0, Breaker = 1 };

constexpr Player other(Player p) noexcept {
  return p == Player::Maker ? Player::Breaker : Player::Maker;
}

constexpr std::string_view to_string(Player p) noexcept {
  return p == Player::Maker ? "Maker" : "Breaker";
}

inline std::optional<Player> parse_player(std::string_view s) {
  if (s == "maker" || s == "Maker" || s == "M") return Player::Maker;
  if (s == "breaker" || s == "Breaker" || s == "B") return Player::Breaker;
  return std::nullopt;
}

// Absent marks a non-edge of a host graph; it never changes during a game.
enum class EdgeState : std::uint8_t { Free = 0, Maker = 1, Breaker = 2, Absent = 3 };

constexpr EdgeState owned_by(Player p) noexcept {
  return p == Player::Maker ? EdgeState::Maker : EdgeState::Breaker;
}

using EdgeId = int;
using Vertex = int;

// Unordered vertex pair, stored with u < v once normalized.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  constexpr Edge normalized() const noexcept { return u < v ? *this : Edge{v, u}; }
  constexpr bool touches(Vertex x) const noexcept { return u == x || v == x; }
  friend constexpr bool operator==(Edge a, Edge b) noexcept {
    auto x = a.normalized(), y = b.normalized();
    return x.u == y.u && x.v == y.v;
  }
};

enum class GameKind : std::uint8_t {
  Hamiltonicity = 0,
  HamiltonianPath = 1,
  FixedHamiltonianPath = 2,
  Connectivity = 3,
  PerfectMatching = 4,
};

constexpr std::string_view kind_tag(GameKind k) noexcept {
  switch (k) {
    case GameKind::Hamiltonicity: return "ham";
    case GameKind::HamiltonianPath: return "hp";
    case GameKind::FixedHamiltonianPath: return "fhp";
    case GameKind::Connectivity: return "conn";
    case GameKind::PerfectMatching: return "pm";
  }
  return "?";
}

inline std::optional<GameKind> parse_kind(std::string_view s) {
  for (auto k : {GameKind::Hamiltonicity, GameKind::HamiltonianPath, GameKind::FixedHamiltonianPath,
                 GameKind::Connectivity, GameKind::PerfectMatching}) {
    if (kind_tag(k) == s) return k;
  }
  return std::nullopt;
}

constexpr bool is_enumerative(GameKind k) noexcept {
  return k == GameKind::Hamiltonicity || k == GameKind::HamiltonianPath ||
         k == GameKind::FixedHamiltonianPath;
}

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidVertex : public Error {
 public:
  using Error::Error;
};

class IllegalMove : public Error {
 public:
  using Error::Error;
};

class IllegalState : public Error {
 public:
  using Error::Error;
};

class InvalidSpec : public Error {
 public:
  using Error::Error;
};

class UnsupportedKind : public Error {
 public:
  using Error::Error;
};

class InconsistentFamily : public Error {
 public:
  using Error::Error;
};

class BoardTooLarge : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class StrategyFailure : public Error {
 public:
  using Error::Error;
};

class NoExtension : public Error {
 public:
  using Error::Error;
};

// Row-major upper-triangular index: for u < v,
//   id = u*n - u*(u+1)/2 + (v - u - 1).
// (0,1) -> 0, (0,2) -> 1, ..., (n-2,n-1) -> n(n-1)/2 - 1.
constexpr EdgeId triangular_index(Vertex u, Vertex v, int n) noexcept {
  if (u > v) std::swap(u, v);
  return u * n - u * (u + 1) / 2 + (v - u - 1);
}

inline EdgeId edge_index(Vertex u, Vertex v, int n) {
  if (u == v || u < 0 || v < 0 || u >= n || v >= n) {
    throw InvalidVertex("invalid vertex pair (" + std::to_string(u) + "," + std::to_string(v) +
                        ") for n=" + std::to_string(n));
  }
  return triangular_index(u, v, n);
}

constexpr int pair_count(int n) noexcept { return n * (n - 1) / 2; }

}  // namespace mbg
