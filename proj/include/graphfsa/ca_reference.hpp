#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

// Direct-rule cellular automaton simulators on flat row-major boards.
// They share no code with the graph executor and serve as ground truth.
namespace graphfsa::ca {

using Board = std::vector<std::uint32_t>;

enum : std::uint32_t { kDead = 0, kAlive = 1 };
enum : std::uint32_t { kEmpty = 0, kHead = 1, kTail = 2, kConductor = 3 };

/// Conway's Game of Life on a square Moore neighborhood.
Board life_step(const Board& board, std::size_t rows, std::size_t cols, bool toroidal);

/// Game of Life rules (B3/S23) on a hexagonal board in axial layout: cell
/// (r, c) touches (r, c±1), (r-1, c), (r-1, c+1), (r+1, c-1), (r+1, c).
Board hex_life_step(const Board& board, std::size_t rows, std::size_t cols);

/// WireWorld on a square Moore neighborhood.
Board wireworld_step(const Board& board, std::size_t rows, std::size_t cols, bool toroidal);

/// Elementary (Wolfram-coded) rule. Non-cyclic boundaries read `fill`.
Board elementary_step(const Board& cells, std::uint32_t rule, bool cyclic, std::uint32_t fill = 0);

}  // namespace graphfsa::ca
