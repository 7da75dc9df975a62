#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "magicsim/energy.hpp"

namespace magicsim {

struct Expr {
  enum class Kind { Var, Not, Or, And, Xor };
  Kind kind = Kind::Var;
  std::string name;        // Var only
  std::vector<Expr> kids;  // Not: 1, binary: 2

  static Expr var(std::string n);
  static Expr not_of(Expr e);
  static Expr or_of(Expr a, Expr b);
  static Expr and_of(Expr a, Expr b);
  static Expr xor_of(Expr a, Expr b);

  bool structurally_equal(const Expr& other) const;
};

struct ParseError : std::runtime_error {
  std::size_t offset;
  std::vector<std::string> expected;
  ParseError(std::size_t off, std::vector<std::string> exp);
};

/// Grammar, loosest-binding first: OR ("|"), XOR ("^"), AND ("&"),
/// NOT ("!" or "~"), parentheses, identifiers. Whitespace insignificant.
Expr parse_expr(const std::string& text);

/// Fully parenthesized form; parse_expr(print_expr(e)) is structurally
/// identical to e.
std::string print_expr(const Expr& e);

/// Rewrites to the {Or, Not, Var} basis: And by De Morgan, Xor via
/// And/Or/Not then recursively; double negations eliminated.
Expr lower_to_or_not(const Expr& e);

/// Reference oracle. Throws on unbound variables.
int evaluate_expr(const Expr& e, const std::map<std::string, int>& assignment);

/// Variable names in first-appearance order.
std::vector<std::string> collect_vars(const Expr& e);

struct Schedule {
  std::vector<MicroOp> ops;
  std::vector<std::string> inputs;
  CellAddress output_cell;
};

struct MappingError : std::runtime_error {
  std::string blocking_net;
  explicit MappingError(const std::string& msg, std::string net = {});
};

struct CompilerOptions {
  bool nary_or = false;  // allow n-input OR gates (n > 2)
};

/// Maps a lowered expression onto the array: gate operands and output share
/// one column; dead nets are re-initialized and reused; intermediate values
/// cross columns through read-assisted Init ops. Every exec output gets an
/// Init(0) immediately before it; NOT gates keep one always-LRS helper row
/// per column.
Schedule allocate_and_emit(const Expr& lowered,
                           const std::vector<std::string>& inputs,
                           ArrayGeometry geom = {},
                           const CompilerOptions& options = {});

/// Static well-formedness: bounds, shared columns, Init(0) before every
/// exec output, Init(1) before every ExecNot helper, no use before write.
void check_schedule(const Schedule& schedule, ArrayGeometry geom);

void write_schedule_json(const Schedule& schedule, std::ostream& os);
Schedule read_schedule_json(std::istream& is);

struct ScheduleError : std::runtime_error {
  std::size_t op_index;
  ScheduleError(std::size_t index, const std::string& msg);
};

struct SimulatedRun {
  int output = 0;
  EnergyBreakdown fine_full;
  EnergyBreakdown fine_optimal;
  EnergyBreakdown coarse_full;    // init/read constants, simulated exec
  EnergyBreakdown coarse_optimal;
};

/// Binds the assignment, runs every micro-op through the crossbar, returns
/// the final read plus fine (trace-integrated) and coarse (cost-table)
/// accountings in both modes.
SimulatedRun simulate_schedule(const Schedule& schedule,
                               const std::map<std::string, int>& assignment,
                               CrossbarState& state, const CostTable& table,
                               const EngineOptions& opt = {});

}  // namespace magicsim
