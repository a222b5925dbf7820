#include "graphfsa/ca_reference.hpp"

#include <stdexcept>

namespace graphfsa::ca {

namespace {

// Counts neighbors of (r, c) in `state` over the given offsets.
template <std::size_t N>
int count_neighbors(const Board& board, std::size_t rows, std::size_t cols, std::size_t r,
                    std::size_t c, const int (&offsets)[N][2], bool toroidal, std::uint32_t state) {
  int count = 0;
  for (const auto& off : offsets) {
    long rr = static_cast<long>(r) + off[0];
    long cc = static_cast<long>(c) + off[1];
    if (toroidal) {
      rr = (rr + static_cast<long>(rows)) % static_cast<long>(rows);
      cc = (cc + static_cast<long>(cols)) % static_cast<long>(cols);
    } else if (rr < 0 || cc < 0 || rr >= static_cast<long>(rows) || cc >= static_cast<long>(cols)) {
      continue;
    }
    if (board[static_cast<std::size_t>(rr) * cols + static_cast<std::size_t>(cc)] == state) ++count;
  }
  return count;
}

constexpr int kMoore[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}};
constexpr int kHex[6][2] = {{0, -1}, {0, 1}, {-1, 0}, {-1, 1}, {1, -1}, {1, 0}};

void check_board(const Board& board, std::size_t rows, std::size_t cols) {
  if (board.size() != rows * cols) throw std::invalid_argument("board size does not match dimensions");
}

std::uint32_t life_rule(std::uint32_t cell, int alive) {
  if (cell == kAlive) return (alive == 2 || alive == 3) ? kAlive : kDead;
  return alive == 3 ? kAlive : kDead;
}

}  // namespace

Board life_step(const Board& board, std::size_t rows, std::size_t cols, bool toroidal) {
  check_board(board, rows, cols);
  Board next(board.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const int alive = count_neighbors(board, rows, cols, r, c, kMoore, toroidal, kAlive);
      next[r * cols + c] = life_rule(board[r * cols + c], alive);
    }
  }
  return next;
}

Board hex_life_step(const Board& board, std::size_t rows, std::size_t cols) {
  check_board(board, rows, cols);
  Board next(board.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const int alive = count_neighbors(board, rows, cols, r, c, kHex, false, kAlive);
      next[r * cols + c] = life_rule(board[r * cols + c], alive);
    }
  }
  return next;
}

Board wireworld_step(const Board& board, std::size_t rows, std::size_t cols, bool toroidal) {
  check_board(board, rows, cols);
  Board next(board.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::uint32_t cell = board[r * cols + c];
      std::uint32_t out = cell;
      switch (cell) {
        case kEmpty:
          out = kEmpty;
          break;
        case kHead:
          out = kTail;
          break;
        case kTail:
          out = kConductor;
          break;
        case kConductor: {
          const int heads = count_neighbors(board, rows, cols, r, c, kMoore, toroidal, kHead);
          out = (heads == 1 || heads == 2) ? kHead : kConductor;
          break;
        }
        default:
          throw std::invalid_argument("wireworld cell state out of range");
      }
      next[r * cols + c] = out;
    }
  }
  return next;
}

Board elementary_step(const Board& cells, std::uint32_t rule, bool cyclic, std::uint32_t fill) {
  if (rule > 255) throw std::invalid_argument("elementary rule must be in [0, 256)");
  const std::size_t n = cells.size();
  Board next(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint32_t left = i > 0 ? cells[i - 1] : (cyclic ? cells[n - 1] : fill);
    const std::uint32_t right = i + 1 < n ? cells[i + 1] : (cyclic ? cells[0] : fill);
    next[i] = (rule >> (left * 4 + cells[i] * 2 + right)) & 1U;
  }
  return next;
}

}  // namespace graphfsa::ca
