#pragma once

#include "block.hpp"
#include "errors.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace kgraph {

/**
 * Two-dimensional Turing machines over {0,1}.
 *
 * One head on an unbounded grid of 0s, starting at the origin in state 0.
 * Each step reads the cell, writes a symbol, moves one cell (up, down, left
 * or right) and switches to the next state or halts. The halting transition
 * also writes and moves.
 */
enum class Move : std::uint8_t
{
  up = 0,
  down = 1,
  left = 2,
  right = 3
};

struct Transition
{
  std::uint8_t write = 0;
  Move move = Move::up;
  std::uint32_t next = 0; // == state_count means halt
};

class TuringMachine2D
{
public:
  /// All rules default to (write 0, up, halt).
  explicit TuringMachine2D(std::uint32_t states)
    : states_(states)
    , rules_(2 * static_cast<std::size_t>(states), Transition{ 0, Move::up, states })
  {
    if (states < 1)
      throw domain_error("a machine needs at least one state");
  }

  /**
   * Machine number `index` of the space with `states` states. Rule slot
   * k = 2*state + symbol is digit k (least significant first) of `index` in
   * base 8*(states+1); digit c decodes as write c%2, move (c/2)%4, next c/8.
   */
  static TuringMachine2D from_index(std::uint32_t states, std::uint64_t index)
  {
    TuringMachine2D m(states);
    const std::uint64_t base = 8ull * (states + 1);
    for (auto& rule : m.rules_) {
      const auto c = static_cast<std::uint32_t>(index % base);
      index /= base;
      rule = { static_cast<std::uint8_t>(c % 2), static_cast<Move>((c / 2) % 4), c / 8 };
    }
    return m;
  }

  std::uint32_t state_count() const noexcept { return states_; }
  std::uint32_t halt_state() const noexcept { return states_; }

  const Transition& rule(std::uint32_t state, unsigned symbol) const { return rules_[2 * state + symbol]; }

  void set_rule(std::uint32_t state, unsigned symbol, Transition t)
  {
    if (state >= states_ || symbol > 1 || t.write > 1 || t.next > states_)
      throw domain_error("invalid transition");
    rules_[2 * state + symbol] = t;
  }

private:
  std::uint32_t states_;
  std::vector<Transition> rules_;
};

/// (8 * (states + 1)) ^ (2 * states): binary alphabet, 4 moves, states + halt.
inline std::uint64_t machine_space_size(std::uint32_t states)
{
  if (states < 1)
    throw domain_error("machine space needs at least one state");
  const std::uint64_t base = 8ull * (states + 1);
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < 2 * states; ++i) {
    if (total > UINT64_MAX / base)
      throw overflow_error("machine space with " + std::to_string(states) + " states overflows 64 bits");
    total *= base;
  }
  return total;
}

struct RunResult
{
  bool halted = false;
  std::uint64_t steps = 0;
  /// Minimal bounding box of written cells; empty on timeout.
  BinaryMatrix output;

  bool operator==(const RunResult&) const = default;
};

/**
 * Reusable simulator. The grid is a square of side 2*bound+1 around the
 * origin (the head cannot leave it within `bound` steps); only touched cells
 * are cleared between runs.
 */
class MachineRunner
{
public:
  explicit MachineRunner(std::uint64_t step_bound)
    : bound_(step_bound)
    , side_(2 * step_bound + 1)
    , grid_(side_ * side_, 0)
  {
    if (step_bound < 1)
      throw domain_error("step bound must be at least 1");
  }

  std::uint64_t step_bound() const noexcept { return bound_; }

  RunResult run(const TuringMachine2D& m)
  {
    static constexpr std::array<int, 4> dx{ 0, 0, -1, 1 };
    static constexpr std::array<int, 4> dy{ -1, 1, 0, 0 };

    for (std::size_t cell : touched_)
      grid_[cell] = 0;
    touched_.clear();

    auto x = static_cast<std::int64_t>(bound_), y = static_cast<std::int64_t>(bound_);
    std::int64_t min_x = x, max_x = x, min_y = y, max_y = y;
    std::uint32_t state = 0;
    RunResult result;

    for (std::uint64_t step = 0; step < bound_; ++step) {
      const std::size_t cell = static_cast<std::size_t>(y) * side_ + static_cast<std::size_t>(x);
      const Transition& t = m.rule(state, grid_[cell]);
      if (t.write && !grid_[cell])
        touched_.push_back(cell);
      grid_[cell] = t.write;
      min_x = std::min(min_x, x);
      max_x = std::max(max_x, x);
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
      x += dx[static_cast<unsigned>(t.move)];
      y += dy[static_cast<unsigned>(t.move)];
      if (t.next == m.halt_state()) {
        result.halted = true;
        result.steps = step + 1;
        break;
      }
      state = t.next;
    }
    if (!result.halted) {
      result.steps = bound_;
      return result;
    }

    result.output = BinaryMatrix(static_cast<std::uint32_t>(max_y - min_y + 1),
                                 static_cast<std::uint32_t>(max_x - min_x + 1));
    for (std::int64_t r = min_y; r <= max_y; ++r)
      for (std::int64_t c = min_x; c <= max_x; ++c)
        result.output.at(static_cast<std::uint32_t>(r - min_y), static_cast<std::uint32_t>(c - min_x)) =
          grid_[static_cast<std::size_t>(r) * side_ + static_cast<std::size_t>(c)];
    return result;
  }

private:
  std::uint64_t bound_;
  std::size_t side_;
  std::vector<std::uint8_t> grid_;
  std::vector<std::size_t> touched_;
};

inline RunResult run_machine(const TuringMachine2D& m, std::uint64_t step_bound)
{
  MachineRunner runner(step_bound);
  return runner.run(m);
}

} // namespace kgraph
