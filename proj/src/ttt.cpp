#include "dagatlas/ttt.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

namespace dagatlas::ttt {

namespace {

constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ull;

// Unbiased draw in [0, k) by rejection sampling on raw engine output.
std::size_t uniform_below(std::mt19937_64& rng, std::size_t k) {
  const std::uint64_t rem =
      (std::numeric_limits<std::uint64_t>::max() % k + 1) % k;  // 2^64 mod k
  std::uint64_t v = rng();
  if (rem != 0) {
    const std::uint64_t limit = 0 - rem;  // wraps to 2^64 - rem
    while (v >= limit) v = rng();
  }
  return static_cast<std::size_t>(v % k);
}

bool completes_line(const std::array<std::optional<Player>, 9>& cells,
                    Player p) {
  for (const auto& line : kLines)
    if (cells[line[0]] == p && cells[line[1]] == p && cells[line[2]] == p)
      return true;
  return false;
}

std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::x_wins:
      return "X-wins";
    case Outcome::o_wins:
      return "O-wins";
    case Outcome::draw:
      return "draw";
  }
  return "?";
}

}  // namespace

char player_char(Player p) { return p == Player::x ? 'X' : 'O'; }

Player other(Player p) { return p == Player::x ? Player::o : Player::x; }

std::uint64_t splitmix64(std::uint64_t state) {
  std::uint64_t z = state + kSplitMixGamma;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t game_seed(std::uint64_t corpus_seed, std::uint64_t game_index) {
  // The (game_index + 1)-th SplitMix64 output of a stream seeded with
  // corpus_seed; directly computable, so generation can be split per game.
  return splitmix64(corpus_seed + game_index * kSplitMixGamma);
}

Game random_game(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::array<std::optional<Player>, 9> cells{};
  std::vector<int> open = {0, 1, 2, 3, 4, 5, 6, 7, 8};

  Game game;
  Player player = Player::x;
  while (true) {
    const std::size_t pick = uniform_below(rng, open.size());
    const int position = open[pick];
    open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick));

    game.moves.push_back({player, position});
    cells[position] = player;
    if (completes_line(cells, player)) {
      game.outcome = player == Player::x ? Outcome::x_wins : Outcome::o_wins;
      break;
    }
    if (open.empty()) {
      game.outcome = Outcome::draw;
      break;
    }
    player = other(player);
  }
  return game;
}

Corpus generate_games(std::size_t n, std::uint64_t seed) {
  Corpus corpus;
  corpus.cbs.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    corpus.cbs.push_back(
        cb_from_game(random_game(game_seed(seed, i)), std::to_string(i)));
  return corpus;
}

ValidationReport check_legal(const Game& game) {
  ValidationReport report;
  auto flag = [&](const std::string& v) { report.violations.push_back(v); };

  if (game.moves.empty()) {
    flag("empty game");
    return report;
  }

  std::array<std::optional<Player>, 9> cells{};
  std::optional<Outcome> recomputed;
  for (std::size_t t = 0; t < game.moves.size(); ++t) {
    const Move& move = game.moves[t];
    const Player expected = t % 2 == 0 ? Player::x : Player::o;
    if (move.player != expected)
      flag("move " + std::to_string(t) + ": expected " +
           std::string(1, player_char(expected)) + " to play");
    if (move.position < 0 || move.position > 8) {
      flag("move " + std::to_string(t) + ": position out of range");
      continue;
    }
    if (cells[move.position]) {
      flag("move " + std::to_string(t) + ": cell " +
           std::to_string(move.position) + " already occupied");
      continue;
    }
    cells[move.position] = move.player;
    if (completes_line(cells, move.player)) {
      recomputed = move.player == Player::x ? Outcome::x_wins : Outcome::o_wins;
      if (t + 1 < game.moves.size())
        flag("move " + std::to_string(t) + ": play continued after a win");
      break;
    }
  }

  if (!recomputed) {
    if (game.moves.size() == 9) {
      recomputed = Outcome::draw;
    } else {
      flag("game stopped without a win or a full board");
    }
  }
  if (recomputed && *recomputed != game.outcome)
    flag("declared outcome " + outcome_name(game.outcome) +
         " does not match recomputed " + outcome_name(*recomputed));
  return report;
}

std::string render_grid(const Game& game) {
  std::array<std::string, 9> cells;
  cells.fill("    ");
  for (std::size_t t = 0; t < game.moves.size(); ++t) {
    const Move& move = game.moves[t];
    cells[move.position] =
        std::string(1, player_char(move.player)) + "(" + std::to_string(t) + ")";
  }

  std::ostringstream out;
  for (int row = 0; row < 3; ++row) {
    if (row > 0) out << "----+----+----\n";
    std::string line = cells[row * 3] + "|" + cells[row * 3 + 1] + "|" +
                       cells[row * 3 + 2];
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
  return out.str();
}

Game decode_grid(const std::string& grid) {
  auto fail = [](const std::string& what) -> void {
    throw std::invalid_argument("malformed grid: " + what);
  };

  std::vector<std::string> rows;
  std::istringstream stream(grid);
  std::string line;
  while (std::getline(stream, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const bool separator =
        !line.empty() && line.find_first_not_of("-+ ") == std::string::npos;
    if (separator) continue;
    if (line.empty() && rows.size() >= 3) continue;  // trailing blank
    rows.push_back(line);
  }
  if (rows.size() != 3) fail("expected 3 cell rows");

  // (time, position, player), later sorted by time.
  std::vector<std::pair<int, Move>> timed;
  for (int row = 0; row < 3; ++row) {
    std::vector<std::string> cells;
    std::string current;
    for (char c : rows[static_cast<std::size_t>(row)]) {
      if (c == '|') {
        cells.push_back(current);
        current.clear();
      } else {
        current.push_back(c);
      }
    }
    cells.push_back(current);
    if (cells.size() > 3) fail("more than 3 cells in a row");
    cells.resize(3);

    for (int col = 0; col < 3; ++col) {
      std::string cell = cells[static_cast<std::size_t>(col)];
      std::erase(cell, ' ');
      if (cell.empty()) continue;
      if (cell.size() < 4 || (cell[0] != 'X' && cell[0] != 'O') ||
          cell[1] != '(' || cell.back() != ')')
        fail("unreadable cell '" + cell + "'");
      const std::string digits = cell.substr(2, cell.size() - 3);
      if (digits.empty() ||
          digits.find_first_not_of("0123456789") != std::string::npos)
        fail("unreadable time in cell '" + cell + "'");
      const int time = std::stoi(digits);
      const Player player = cell[0] == 'X' ? Player::x : Player::o;
      timed.push_back({time, Move{player, row * 3 + col}});
    }
  }
  if (timed.empty()) fail("no moves");

  std::sort(timed.begin(), timed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  Game game;
  for (std::size_t t = 0; t < timed.size(); ++t) {
    if (timed[t].first != static_cast<int>(t)) {
      if (t > 0 && timed[t].first == timed[t - 1].first)
        fail("duplicate time " + std::to_string(timed[t].first));
      fail("times are not contiguous from 0");
    }
    const Player expected = t % 2 == 0 ? Player::x : Player::o;
    if (timed[t].second.player != expected)
      fail("time " + std::to_string(t) + " is not " +
           std::string(1, player_char(expected)) + "'s turn");
    game.moves.push_back(timed[t].second);
  }

  // Recompute the outcome from the final position.
  std::array<std::optional<Player>, 9> cells{};
  for (const auto& move : game.moves) cells[move.position] = move.player;
  const Player last = game.moves.back().player;
  if (completes_line(cells, last))
    game.outcome = last == Player::x ? Outcome::x_wins : Outcome::o_wins;
  else
    game.outcome = Outcome::draw;
  return game;
}

ComicBook cb_from_game(const Game& game, std::string id) {
  std::vector<std::vector<EventLabel>> frames;
  frames.reserve(game.moves.size());
  for (const auto& move : game.moves)
    frames.push_back({std::string(1, player_char(move.player)) +
                      std::to_string(move.position)});
  return make_cb(std::move(id), std::move(frames));
}

Game game_from_cb(const ComicBook& cb) {
  Game game;
  for (const auto& frame : cb.frames) {
    if (frame.events.size() != 1)
      throw std::invalid_argument("CB '" + cb.id +
                                  "' has a multi-event frame");
    const auto& label = frame.events.front();
    if (label.size() != 2 || (label[0] != 'X' && label[0] != 'O') ||
        label[1] < '0' || label[1] > '8')
      throw std::invalid_argument("label '" + label +
                                  "' is not a <player><position> move");
    game.moves.push_back(
        {label[0] == 'X' ? Player::x : Player::o, label[1] - '0'});
  }
  if (game.moves.empty())
    throw std::invalid_argument("CB '" + cb.id + "' has no moves");

  std::array<std::optional<Player>, 9> cells{};
  for (const auto& move : game.moves) cells[move.position] = move.player;
  const Player last = game.moves.back().player;
  if (completes_line(cells, last))
    game.outcome = last == Player::x ? Outcome::x_wins : Outcome::o_wins;
  else
    game.outcome = Outcome::draw;
  return game;
}

}  // namespace dagatlas::ttt
