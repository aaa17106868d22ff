#pragma once

// Command-line front end. Needs CLI11 and nlohmann/json on the include path.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mbg/board.hpp"
#include "mbg/e2.hpp"
#include "mbg/games.hpp"
#include "mbg/harness.hpp"
#include "mbg/solver.hpp"
#include "mbg/strategy.hpp"

namespace mbg::cli {

using nlohmann::json;

inline GameKind kind_from(std::string_view s) {
  if (auto k = parse_kind(s)) return *k;
  throw InvalidSpec("unknown game '" + std::string(s) + "'");
}

inline Player player_from(std::string_view s) {
  if (auto p = parse_player(s)) return *p;
  throw InvalidSpec("unknown player '" + std::string(s) + "'");
}

struct RunConfig {
  GameKind game = GameKind::Hamiltonicity;
  int n = 4;
  Player first = Player::Maker;
  Edge fixed{0, 1};
  std::size_t tt_max_entries = std::size_t{1} << 24;
  int tt_keep_depth = 12;
  bool ordering = true;
  bool tt = true;
  bool pruning = true;
  std::uint64_t seed = 1;
  bool json = false;
  double budget_seconds = 3600;

  GameSpec spec() const {
    GameSpec s{game, n, {}, {}};
    if (game == GameKind::FixedHamiltonianPath) s.fixed_pair = fixed.normalized();
    s.validate();
    return s;
  }

  SolveConfig solve_config() const {
    SolveConfig c;
    c.tt_max_entries = tt_max_entries;
    c.tt_keep_depth = tt_keep_depth;
    c.ordering = ordering;
    c.use_tt = tt;
    c.pruning = pruning;
    if (budget_seconds > 0)
      c.budget = std::chrono::milliseconds(static_cast<std::int64_t>(budget_seconds * 1000));
    return c;
  }
};

inline json config_json(const RunConfig& rc) {
  json c{{"tt_max_entries", rc.tt_max_entries}, {"tt_keep_depth", rc.tt_keep_depth},
         {"ordering", rc.ordering},            {"tt", rc.tt},
         {"pruning", rc.pruning}};
  if (rc.game == GameKind::FixedHamiltonianPath) c["fixed"] = {rc.fixed.u, rc.fixed.v};
  return c;
}

inline double to_ms(std::chrono::nanoseconds d) { return std::chrono::duration<double, std::milli>(d).count(); }

inline json report_json(const RunConfig& rc, const SolveOutcome& out) {
  return {{"game", kind_tag(rc.game)},          {"n", rc.n},
          {"first", to_string(rc.first)},       {"winner", to_string(out.winner)},
          {"nodes", out.nodes_visited},         {"tt_hits", out.tt_hits},
          {"elapsed_ms", to_ms(out.elapsed)},   {"config", config_json(rc)}};
}

// One cell of a winner table; no winner means the cell was skipped.
struct TableCell {
  GameKind game = GameKind::Hamiltonicity;
  int n = 0;
  Player first = Player::Maker;
  std::optional<Player> winner;
  std::uint64_t nodes = 0;
  std::uint64_t tt_hits = 0;
  double elapsed_ms = 0;

  friend bool operator==(const TableCell&, const TableCell&) = default;
};

inline json table_json(const std::vector<TableCell>& cells) {
  json arr = json::array();
  for (const auto& c : cells) {
    arr.push_back({{"game", kind_tag(c.game)},
                   {"n", c.n},
                   {"first", to_string(c.first)},
                   {"winner", c.winner ? to_string(*c.winner) : "skipped"},
                   {"nodes", c.nodes},
                   {"tt_hits", c.tt_hits},
                   {"elapsed_ms", c.elapsed_ms}});
  }
  return {{"cells", arr}};
}

inline std::vector<TableCell> cells_from_json(const json& j) {
  std::vector<TableCell> cells;
  for (const auto& c : j.at("cells")) {
    TableCell t;
    t.game = kind_from(c.at("game").get<std::string>());
    t.n = c.at("n").get<int>();
    t.first = player_from(c.at("first").get<std::string>());
    const auto w = c.at("winner").get<std::string>();
    if (w != "skipped") t.winner = player_from(w);
    t.nodes = c.value("nodes", std::uint64_t{0});
    t.tt_hits = c.value("tt_hits", std::uint64_t{0});
    t.elapsed_ms = c.value("elapsed_ms", 0.0);
    cells.push_back(t);
  }
  return cells;
}

// One block per (game, first player), columns in order of first appearance.
inline std::string render_table(const std::vector<TableCell>& cells) {
  std::vector<std::pair<GameKind, Player>> blocks;
  for (const auto& c : cells) {
    const std::pair key{c.game, c.first};
    if (std::find(blocks.begin(), blocks.end(), key) == blocks.end()) blocks.push_back(key);
  }
  std::ostringstream os;
  for (auto [game, first] : blocks) {
    std::string head = "n      ", row = "Winner ";
    for (const auto& c : cells) {
      if (c.game != game || c.first != first) continue;
      const std::string w{c.winner ? to_string(*c.winner) : "skipped"};
      std::ostringstream h, r;
      h << "| " << std::left << std::setw(8) << c.n;
      r << "| " << std::left << std::setw(8) << w;
      head += h.str();
      row += r.str();
    }
    os << kind_tag(game) << ", " << to_string(first) << " first\n" << head << "\n" << row << "\n\n";
  }
  return os.str();
}

// Inverse of render_table for the winner rows.
inline std::vector<TableCell> parse_table(const std::string& text) {
  std::vector<TableCell> cells;
  std::istringstream is(text);
  std::string title, head, row;
  auto fields = [](const std::string& line) {
    std::vector<std::string> out;
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok)
      if (tok != "|") out.push_back(tok);
    return out;
  };
  while (std::getline(is, title)) {
    if (title.empty()) continue;
    std::getline(is, head);
    std::getline(is, row);
    const auto comma = title.find(',');
    const GameKind game = kind_from(title.substr(0, comma));
    std::istringstream ts(title.substr(comma + 1));
    std::string first;
    ts >> first;
    const auto ns = fields(head), ws = fields(row);
    for (std::size_t i = 1; i < ns.size() && i < ws.size(); ++i) {
      TableCell c;
      c.game = game;
      c.first = player_from(first);
      c.n = std::stoi(ns[i]);
      if (ws[i] != "skipped") c.winner = player_from(ws[i]);
      cells.push_back(c);
    }
  }
  return cells;
}

inline TableCell solve_cell(const RunConfig& rc) {
  TableCell cell{rc.game, rc.n, rc.first, std::nullopt, 0, 0, 0};
  try {
    const auto out = solve(rc.spec(), rc.first, rc.solve_config());
    cell.winner = out.winner;
    cell.nodes = out.nodes_visited;
    cell.tt_hits = out.tt_hits;
    cell.elapsed_ms = to_ms(out.elapsed);
  } catch (const BudgetExceeded&) {
  }
  return cell;
}

struct Streams {
  std::ostream& out;
  std::ostream& err;
  std::istream& in;
};

namespace detail {

inline Edge parse_pair(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw InvalidSpec("expected u,v but got '" + s + "'");
  return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
}

inline void add_game_flags(CLI::App* app, RunConfig& rc, std::string& game, std::string& first,
                           std::string& fixed) {
  app->add_option("--game", game, "ham|hp|fhp|conn|pm");
  app->add_option("--n", rc.n, "number of vertices");
  app->add_option("--first", first, "maker|breaker");
  app->add_option("--fixed", fixed, "fixed pair u,v for fhp");
  app->add_option("--tt-max", rc.tt_max_entries, "transposition table capacity");
  app->add_option("--tt-depth", rc.tt_keep_depth, "depth kept on table overflow");
  app->add_flag("--no-ordering{false}", rc.ordering, "disable move ordering");
  app->add_flag("--no-tt{false}", rc.tt, "disable the transposition table");
  app->add_flag("--no-pruning{false}", rc.pruning, "disable threat and dead-edge pruning");
  app->add_option("--seed", rc.seed, "seed for randomized harnesses");
  app->add_option("--budget", rc.budget_seconds, "wall-clock seconds per solve (0 = none)");
  app->add_flag("--json", rc.json, "JSON output");
}

inline void finish_game_flags(RunConfig& rc, const std::string& game, const std::string& first,
                              const std::string& fixed) {
  rc.game = kind_from(game);
  rc.first = player_from(first);
  rc.fixed = parse_pair(fixed);
}

inline int cmd_solve(const RunConfig& rc, Streams io) {
  const auto out = solve(rc.spec(), rc.first, rc.solve_config());
  if (rc.json) {
    io.out << report_json(rc, out).dump() << "\n";
  } else {
    io.out << "game=" << kind_tag(rc.game) << " n=" << rc.n << " first=" << to_string(rc.first)
           << " winner=" << to_string(out.winner) << " nodes=" << out.nodes_visited
           << " tt_hits=" << out.tt_hits << " elapsed_ms=" << std::fixed << std::setprecision(1)
           << to_ms(out.elapsed) << "\n";
  }
  return 0;
}

inline int cmd_table(RunConfig rc, const std::vector<std::string>& games, int from, int to,
                     const std::string& firsts, const std::string& from_json, bool strict,
                     Streams io) {
  std::vector<TableCell> cells;
  if (!from_json.empty()) {
    std::ifstream f(from_json);
    if (!f) throw InvalidSpec("cannot read " + from_json);
    cells = cells_from_json(json::parse(f));
  } else {
    std::vector<Player> order;
    if (firsts == "both" || firsts == "maker") order.push_back(Player::Maker);
    if (firsts == "both" || firsts == "breaker") order.push_back(Player::Breaker);
    if (order.empty()) throw InvalidSpec("--firsts must be maker, breaker or both");
    for (const auto& g : games) {
      rc.game = kind_from(g);
      for (Player f : order) {
        rc.first = f;
        for (int n = from; n <= to; ++n) {
          rc.n = n;
          rc.spec();
          cells.push_back(solve_cell(rc));
        }
      }
    }
  }
  if (rc.json) {
    io.out << table_json(cells).dump(2) << "\n";
  } else {
    io.out << render_table(cells);
  }
  const bool skipped = std::any_of(cells.begin(), cells.end(), [](const TableCell& c) { return !c.winner; });
  return strict && skipped ? 1 : 0;
}

inline int report_simulation(const std::string& name, CertifiedStrategy& s, int games, int greedy,
                             std::uint64_t seed, Streams io) {
  int losses = 0;
  for (auto [policy, count] : {std::pair{BreakerPolicy::Random, games}, std::pair{BreakerPolicy::Greedy, greedy}}) {
    const auto rep = simulate(s, policy, count, seed);
    io.out << name << " breaker=" << to_string(policy) << " games=" << rep.games << " wins=" << rep.wins
           << " losses=" << rep.losses << "\n";
    if (rep.first_loss) io.out << "transcript " << transcript(*rep.first_loss, s.initial_board()) << "\n";
    losses += rep.losses;
  }
  return losses == 0 ? 0 : 1;
}

inline int cmd_validate(const std::string& target, int n, int games, int greedy, std::uint64_t seed,
                        Streams io) {
  if (target == "e2") {
    int failures = 0;
    auto line = [&](const char* name, const E2Census& c) {
      io.out << name << " n=" << n << " positions=" << c.positions << " terminals=" << c.terminals
             << " situation1=" << c.situation1 << " situation2=" << c.situation2
             << " failures=" << c.failures << "\n";
      if (c.failures) {
        io.out << "failure line:";
        for (auto m : c.failure_line) io.out << " B(" << m.x << "," << (m.slot ? "w" : "v") << ")";
        io.out << "\n";
      }
      failures += static_cast<int>(c.failures);
    };
    line("e2-ham", e2_exhaustive_ham(n));
    line("e2-fhp", e2_exhaustive(e2_fhp_start(n)));
    return failures == 0 ? 0 : 1;
  }
  if (target == "ham-ext") {
    HamExtensionStrategy s(n);
    return report_simulation("ham-ext", s, games, greedy, seed, io);
  }
  if (target == "fhp-ext") {
    FhpExtensionStrategy s(n);
    return report_simulation("fhp-ext", s, games, greedy, seed, io);
  }
  if (target == "sparse") {
    SparseMakerStrategy s(build_sparse_graph(n));
    return report_simulation("sparse", s, games, greedy, seed, io);
  }
  throw InvalidSpec("unknown validation target '" + target + "'");
}

inline int cmd_construct(int n, const std::string& out_path, Streams io) {
  const auto g = build_sparse_graph(n);
  const std::size_t edges = g.edges.size();
  const std::size_t bound = 4 * static_cast<std::size_t>(n);
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) throw InvalidSpec("cannot write " + out_path);
    write_edge_list(f, n, g.edges);
  }
  io.out << "n=" << n << " m=" << g.m << " r=" << g.r << " edges=" << edges << " bound=" << bound << " "
         << (edges <= bound ? "ok" : "exceeds") << "\n";
  return 0;
}

// Human enters "u v" per move; "resign" or end of input closes the game.
inline int cmd_play(const RunConfig& rc, Player human, bool resign, Streams io) {
  Game game(rc.spec());
  Solver solver(rc.solve_config());
  const Board& b = game.board();
  Player to_move = rc.first;
  io.out << "game=" << kind_tag(rc.game) << " n=" << rc.n << " first=" << to_string(rc.first)
         << " human=" << to_string(human) << "\n";
  auto over = [&] { return game.wins(Player::Maker) || game.wins(Player::Breaker) || b.free_count() == 0; };
  while (!over()) {
    if (to_move == human) {
      if (resign) {
        io.out << "resigned\n";
        return 0;
      }
      io.out << "move> " << std::flush;
      std::string line;
      if (!std::getline(io.in, line) || line == "resign") {
        io.out << "resigned\n";
        return 0;
      }
      std::istringstream ls(line);
      int u = -1, v = -1;
      if (!(ls >> u >> v) || u == v || u < 0 || v < 0 || u >= rc.n || v >= rc.n ||
          b.state(b.id(u, v)) != EdgeState::Free) {
        io.out << "illegal move, try again\n";
        continue;
      }
      game.play(b.id(u, v), human);
      io.out << to_string(human) << " " << u << " " << v << "\n";
    } else {
      const auto best = solver.best_move(game, to_move);
      const EdgeId e = best ? *best : b.free_edges().front();
      game.play(e, to_move);
      const Edge ed = b.endpoints(e);
      io.out << to_string(to_move) << " " << ed.u << " " << ed.v << "\n";
    }
    to_move = other(to_move);
  }
  io.out << "winner=" << to_string(game.wins(Player::Maker) ? Player::Maker : Player::Breaker) << "\n";
  return 0;
}

}  // namespace detail

// Entry point shared by the executable and the tests. Returns the exit code.
inline int run(std::vector<std::string> args, Streams io) {
  CLI::App app{"Maker-Breaker graph game solver"};
  app.require_subcommand(1);
  RunConfig rc;
  std::string game = "ham", first = "maker", fixed = "0,1";

  auto* solve_cmd = app.add_subcommand("solve", "solve one game from the empty board");
  detail::add_game_flags(solve_cmd, rc, game, first, fixed);

  auto* table_cmd = app.add_subcommand("table", "winner tables over a range of n");
  std::vector<std::string> games{"ham", "hp", "fhp"};
  int from = 4, to = 7;
  std::string firsts = "both", from_json;
  bool strict = false;
  detail::add_game_flags(table_cmd, rc, game, first, fixed);
  table_cmd->add_option("--games", games, "game kinds");
  table_cmd->add_option("--from", from, "smallest n");
  table_cmd->add_option("--to", to, "largest n");
  table_cmd->add_option("--firsts", firsts, "maker|breaker|both");
  table_cmd->add_option("--from-json", from_json, "re-render a JSON table");
  table_cmd->add_flag("--strict", strict, "nonzero exit when a cell is skipped");

  auto* validate_cmd = app.add_subcommand("validate", "check a strategy");
  std::string target;
  int vn = 0, sim_games = 10000, greedy_games = 100;
  validate_cmd->add_option("target", target, "e2|ham-ext|fhp-ext|sparse")->required();
  validate_cmd->add_option("--n", vn, "size (e2, ham-ext, fhp-ext: base n; sparse: total n)");
  validate_cmd->add_option("--games", sim_games, "games against the random Breaker");
  validate_cmd->add_option("--greedy-games", greedy_games, "games against the greedy Breaker");
  validate_cmd->add_option("--seed", rc.seed, "seed of the first game");

  auto* construct_cmd = app.add_subcommand("construct", "emit the sparse host graph");
  int cn = 0;
  std::string out_path;
  construct_cmd->add_option("--n", cn, "number of vertices")->required();
  construct_cmd->add_option("--out", out_path, "edge-list output file");

  auto* play_cmd = app.add_subcommand("play", "play against the solver");
  std::string human = "breaker";
  bool resign = false;
  detail::add_game_flags(play_cmd, rc, game, first, fixed);
  play_cmd->add_option("--human", human, "maker|breaker");
  play_cmd->add_flag("--resign", resign, "resign at the first human turn");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help_out, help_err;
    const int code = app.exit(e, help_out, help_err);
    io.out << help_out.str();
    io.err << help_err.str();
    return code == 0 ? 0 : 2;
  }

  try {
    if (*solve_cmd) {
      detail::finish_game_flags(rc, game, first, fixed);
      return detail::cmd_solve(rc, io);
    }
    if (*table_cmd) {
      detail::finish_game_flags(rc, game, first, fixed);
      return detail::cmd_table(rc, games, from, to, firsts, from_json, strict, io);
    }
    if (*validate_cmd) {
      if (vn == 0) vn = target == "sparse" ? 14 : 8;
      return detail::cmd_validate(target, vn, sim_games, greedy_games, rc.seed, io);
    }
    if (*construct_cmd) return detail::cmd_construct(cn, out_path, io);
    if (*play_cmd) {
      detail::finish_game_flags(rc, game, first, fixed);
      return detail::cmd_play(rc, player_from(human), resign, io);
    }
  } catch (const BudgetExceeded& e) {
    io.err << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    io.err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    io.err << "error: bad number: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace mbg::cli
