#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dagatlas/corpus.hpp"

namespace dagatlas::ttt {

enum class Player : std::uint8_t { x, o };
enum class Outcome : std::uint8_t { x_wins, o_wins, draw };

char player_char(Player p);
Player other(Player p);

struct Move {
  Player player;
  int position = 0;  // 0..8, row-major

  bool operator==(const Move&) const = default;
};

struct Game {
  std::vector<Move> moves;
  Outcome outcome = Outcome::draw;

  bool operator==(const Game&) const = default;
};

// The eight winning lines of the 0..8 row-major grid.
inline constexpr std::array<std::array<int, 3>, 8> kLines = {{
    {0, 1, 2}, {3, 4, 5}, {6, 7, 8},  // rows
    {0, 3, 6}, {1, 4, 7}, {2, 5, 8},  // columns
    {0, 4, 8}, {2, 4, 6},             // diagonals
}};

// SplitMix64 output function; the per-game seed derivation below is the
// documented, portable stream split.
std::uint64_t splitmix64(std::uint64_t state);
std::uint64_t game_seed(std::uint64_t corpus_seed, std::uint64_t game_index);

// One uniformly random legal game: X starts, each move drawn uniformly over
// the empty cells (std::mt19937_64 + rejection sampling, bit-stable across
// platforms), play stopping at the first completed line or full board.
Game random_game(std::uint64_t seed);

// n games with ids "0".."n-1", encoded as single-event-frame CBs with labels
// <player><position>. Identical (n, seed) give identical corpora.
Corpus generate_games(std::size_t n, std::uint64_t seed);

// Checks alternation (X first), no repeated cells, the stop rule (play ends
// exactly at the first win or full board), and that the declared outcome
// matches a replay over the winning lines.
ValidationReport check_legal(const Game& game);

// 3x3 text grid, each occupied cell as X(t)/O(t) with t the move time,
// separators of dashes and pluses, trailing blanks trimmed.
std::string render_grid(const Game& game);

// Inverse of render_grid; accepts the grid with or without separator rows.
// Throws std::invalid_argument on malformed cells, duplicate or gapped
// times, or broken alternation. The outcome is recomputed from the moves.
Game decode_grid(const std::string& grid);

ComicBook cb_from_game(const Game& game, std::string id);

// Decodes a single-event-frame CB with <player><position> labels back into
// a game; throws std::invalid_argument if the CB is not of that shape.
Game game_from_cb(const ComicBook& cb);

}  // namespace dagatlas::ttt
