#include "magicsim/compiler.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <set>

#include <json.hpp>

namespace magicsim {

Expr Expr::var(std::string n) {
  Expr e;
  e.kind = Kind::Var;
  e.name = std::move(n);
  return e;
}

Expr Expr::not_of(Expr e) {
  Expr r;
  r.kind = Kind::Not;
  r.kids.push_back(std::move(e));
  return r;
}

namespace {
Expr binary(Expr::Kind k, Expr a, Expr b) {
  Expr r;
  r.kind = k;
  r.kids.push_back(std::move(a));
  r.kids.push_back(std::move(b));
  return r;
}
}  // namespace

Expr Expr::or_of(Expr a, Expr b) { return binary(Kind::Or, std::move(a), std::move(b)); }
Expr Expr::and_of(Expr a, Expr b) { return binary(Kind::And, std::move(a), std::move(b)); }
Expr Expr::xor_of(Expr a, Expr b) { return binary(Kind::Xor, std::move(a), std::move(b)); }

bool Expr::structurally_equal(const Expr& other) const {
  if (kind != other.kind || name != other.name ||
      kids.size() != other.kids.size()) {
    return false;
  }
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (!kids[i].structurally_equal(other.kids[i])) return false;
  }
  return true;
}

ParseError::ParseError(std::size_t off, std::vector<std::string> exp)
    : std::runtime_error("syntax error at byte " + std::to_string(off)),
      offset(off),
      expected(std::move(exp)) {}

namespace {

struct Parser {
  const std::string& text;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  Expr parse_or() {
    Expr e = parse_xor();
    while (eat('|')) e = Expr::or_of(std::move(e), parse_xor());
    return e;
  }

  Expr parse_xor() {
    Expr e = parse_and();
    while (eat('^')) e = Expr::xor_of(std::move(e), parse_and());
    return e;
  }

  Expr parse_and() {
    Expr e = parse_factor();
    while (eat('&')) e = Expr::and_of(std::move(e), parse_factor());
    return e;
  }

  Expr parse_factor() {
    skip_ws();
    if (eat('!') || (pos < text.size() && text[pos] == '~' && (++pos, true))) {
      return Expr::not_of(parse_factor());
    }
    if (eat('(')) {
      Expr e = parse_or();
      if (!eat(')')) throw ParseError(pos, {")"});
      return e;
    }
    skip_ws();
    if (pos < text.size() &&
        (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
      const std::size_t start = pos;
      while (pos < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
        ++pos;
      }
      return Expr::var(text.substr(start, pos - start));
    }
    throw ParseError(pos, {"identifier", "(", "!", "~"});
  }
};

}  // namespace

Expr parse_expr(const std::string& text) {
  Parser p{text};
  Expr e = p.parse_or();
  p.skip_ws();
  if (p.pos != text.size()) {
    throw ParseError(p.pos, {"|", "^", "&", "end of input"});
  }
  return e;
}

std::string print_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Var:
      return e.name;
    case Expr::Kind::Not:
      return "!" + print_expr(e.kids[0]);
    case Expr::Kind::Or:
      return "(" + print_expr(e.kids[0]) + " | " + print_expr(e.kids[1]) + ")";
    case Expr::Kind::And:
      return "(" + print_expr(e.kids[0]) + " & " + print_expr(e.kids[1]) + ")";
    case Expr::Kind::Xor:
      return "(" + print_expr(e.kids[0]) + " ^ " + print_expr(e.kids[1]) + ")";
  }
  return {};
}

namespace {

Expr simplified_not(Expr e) {
  if (e.kind == Expr::Kind::Not) return std::move(e.kids[0]);
  return Expr::not_of(std::move(e));
}

}  // namespace

Expr lower_to_or_not(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Var:
      return e;
    case Expr::Kind::Not:
      return simplified_not(lower_to_or_not(e.kids[0]));
    case Expr::Kind::Or:
      return Expr::or_of(lower_to_or_not(e.kids[0]), lower_to_or_not(e.kids[1]));
    case Expr::Kind::And: {
      // De Morgan: a & b = !(!a | !b)
      Expr a = simplified_not(lower_to_or_not(e.kids[0]));
      Expr b = simplified_not(lower_to_or_not(e.kids[1]));
      return simplified_not(Expr::or_of(std::move(a), std::move(b)));
    }
    case Expr::Kind::Xor: {
      // a ^ b = (a | b) & !(a & b), then lowered recursively.
      Expr rewritten = Expr::and_of(
          Expr::or_of(e.kids[0], e.kids[1]),
          Expr::not_of(Expr::and_of(e.kids[0], e.kids[1])));
      return lower_to_or_not(rewritten);
    }
  }
  return e;
}

int evaluate_expr(const Expr& e, const std::map<std::string, int>& assignment) {
  switch (e.kind) {
    case Expr::Kind::Var: {
      auto it = assignment.find(e.name);
      if (it == assignment.end()) {
        throw std::invalid_argument("unbound variable: " + e.name);
      }
      return it->second ? 1 : 0;
    }
    case Expr::Kind::Not:
      return 1 - evaluate_expr(e.kids[0], assignment);
    case Expr::Kind::Or:
      return evaluate_expr(e.kids[0], assignment) | evaluate_expr(e.kids[1], assignment);
    case Expr::Kind::And:
      return evaluate_expr(e.kids[0], assignment) & evaluate_expr(e.kids[1], assignment);
    case Expr::Kind::Xor:
      return evaluate_expr(e.kids[0], assignment) ^ evaluate_expr(e.kids[1], assignment);
  }
  return 0;
}

namespace {
void collect_vars_impl(const Expr& e, std::vector<std::string>& out,
                       std::set<std::string>& seen) {
  if (e.kind == Expr::Kind::Var) {
    if (seen.insert(e.name).second) out.push_back(e.name);
    return;
  }
  for (const auto& k : e.kids) collect_vars_impl(k, out, seen);
}
}  // namespace

std::vector<std::string> collect_vars(const Expr& e) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  collect_vars_impl(e, out, seen);
  return out;
}

MappingError::MappingError(const std::string& msg, std::string net)
    : std::runtime_error(msg), blocking_net(std::move(net)) {}

namespace {

int ershov(const Expr& e) {
  if (e.kind == Expr::Kind::Var) return 1;
  if (e.kind == Expr::Kind::Not) return ershov(e.kids[0]);
  const int a = ershov(e.kids[0]);
  const int b = ershov(e.kids[1]);
  return a == b ? a + 1 : std::max(a, b);
}

struct Net {
  std::map<int, CellAddress> cells;  // per-column instance
  int refs = 0;
  bool is_input = false;
  std::string input_name;
};

struct Emitter {
  ArrayGeometry geom;
  CompilerOptions options;
  std::vector<std::vector<char>> used;  // [col][row]
  std::vector<int> helper_row;          // per column, -1 if none
  std::map<std::string, Net> input_nets;
  std::vector<MicroOp> ops;

  explicit Emitter(ArrayGeometry g, CompilerOptions o)
      : geom(g), options(o),
        used(static_cast<std::size_t>(g.cols),
             std::vector<char>(static_cast<std::size_t>(g.rows), 0)),
        helper_row(static_cast<std::size_t>(g.cols), -1) {}

  int free_rows(int col) const {
    int n = 0;
    for (char u : used[static_cast<std::size_t>(col)]) n += u ? 0 : 1;
    return n;
  }

  int alloc_row(int col) {
    for (int r = 0; r < geom.rows; ++r) {
      if (!used[static_cast<std::size_t>(col)][static_cast<std::size_t>(r)]) {
        used[static_cast<std::size_t>(col)][static_cast<std::size_t>(r)] = 1;
        return r;
      }
    }
    return -1;
  }

  void release_net(Net& net) {
    if (--net.refs > 0) return;
    for (const auto& [col, cell] : net.cells) {
      used[static_cast<std::size_t>(col)][static_cast<std::size_t>(cell.row)] = 0;
    }
    net.cells.clear();
  }

  int choose_column(const std::vector<Net*>& operands, int extra,
                    bool needs_helper, const std::string& hint) {
    int best = -1;
    int best_present = -1;
    for (int c = 0; c < geom.cols; ++c) {
      int present = 0;
      for (const Net* n : operands) present += n->cells.count(c) ? 1 : 0;
      int need = extra + static_cast<int>(operands.size()) - present;
      if (needs_helper && helper_row[static_cast<std::size_t>(c)] < 0) need += 1;
      if (free_rows(c) < need) continue;
      if (present > best_present) {
        best_present = present;
        best = c;
      }
    }
    if (best < 0) {
      throw MappingError("mapping capacity exceeded placing net '" + hint +
                             "': no column has enough free rows",
                         hint);
    }
    return best;
  }

  CellAddress materialize(Net& net, int col) {
    auto it = net.cells.find(col);
    if (it != net.cells.end()) return it->second;
    const int row = alloc_row(col);
    if (row < 0) {
      throw MappingError("mapping capacity exceeded materializing net",
                         net.input_name);
    }
    const CellAddress cell{row, col};
    MicroOp op;
    op.kind = MicroOp::Kind::Init;
    op.cells = {cell};
    if (net.is_input) {
      op.input_name = net.input_name;
    } else {
      // Cross-column move: read the source, rewrite at the destination.
      op.copy_from = net.cells.begin()->second;
      op.has_copy_from = true;
    }
    ops.push_back(std::move(op));
    net.cells[col] = cell;
    return cell;
  }

  void emit_init(CellAddress cell, int value) {
    MicroOp op;
    op.kind = MicroOp::Kind::Init;
    op.cells = {cell};
    op.value = value;
    ops.push_back(std::move(op));
  }

  Net emit(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Var: {
        Net& in = input_nets.at(e.name);
        Net view = in;  // share the same cells; refcount lives on input_nets
        return view;
      }
      case Expr::Kind::Not:
        return emit_not(e.kids[0]);
      case Expr::Kind::Or:
        return emit_or(e);
      default:
        throw MappingError("expression not lowered to the Or/Not basis");
    }
  }

  // Vars are shared nets: route ref bookkeeping through input_nets.
  Net* resolve(const Expr& e, Net& local) {
    if (e.kind == Expr::Kind::Var) return &input_nets.at(e.name);
    return &local;
  }

  Net emit_or(const Expr& e) {
    std::vector<const Expr*> leaves;
    if (options.nary_or) {
      flatten_or(e, leaves);
    } else {
      leaves = {&e.kids[0], &e.kids[1]};
    }
    // Heavier operands first keeps the live set small.
    std::vector<std::pair<int, const Expr*>> ordered;
    for (const Expr* l : leaves) ordered.emplace_back(-ershov(*l), l);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<Net> locals;
    locals.reserve(ordered.size());
    std::vector<Net*> operands;
    for (const auto& [rank, l] : ordered) {
      locals.push_back(emit(*l));
      (void)rank;
    }
    for (std::size_t i = 0; i < ordered.size(); ++i) {
      operands.push_back(resolve(*ordered[i].second, locals[i]));
    }
    // A variable repeated in one gate (a | a) collapses to a single driven
    // input: a 1-input ExecOr, the buffer/COPY form.
    std::vector<Net*> unique_ops;
    for (Net* n : operands) {
      if (std::find(unique_ops.begin(), unique_ops.end(), n) == unique_ops.end()) {
        unique_ops.push_back(n);
      }
    }
    const int col = choose_column(unique_ops, 1, false, "or");
    std::vector<CellAddress> input_cells;
    for (Net* n : unique_ops) input_cells.push_back(materialize(*n, col));
    const int out_row = alloc_row(col);
    if (out_row < 0) throw MappingError("mapping capacity exceeded", "or");
    const CellAddress out{out_row, col};
    emit_init(out, 0);
    MicroOp op;
    op.kind = MicroOp::Kind::ExecOr;
    op.cells = input_cells;
    op.cells.push_back(out);
    ops.push_back(std::move(op));
    for (Net* n : operands) release_net(*n);
    Net result;
    result.refs = 1;
    result.cells[col] = out;
    return result;
  }

  Net emit_not(const Expr& operand) {
    Net local = emit(operand);
    Net* net = resolve(operand, local);
    const int col = choose_column({net}, 1, true, "not");
    const CellAddress in_cell = materialize(*net, col);
    if (helper_row[static_cast<std::size_t>(col)] < 0) {
      helper_row[static_cast<std::size_t>(col)] = alloc_row(col);
    }
    const CellAddress helper{helper_row[static_cast<std::size_t>(col)], col};
    const int out_row = alloc_row(col);
    if (out_row < 0) throw MappingError("mapping capacity exceeded", "not");
    const CellAddress out{out_row, col};
    emit_init(helper, 1);
    emit_init(out, 0);
    MicroOp op;
    op.kind = MicroOp::Kind::ExecNot;
    op.cells = {helper, in_cell, out};
    ops.push_back(std::move(op));
    release_net(*net);
    Net result;
    result.refs = 1;
    result.cells[col] = out;
    return result;
  }

  void flatten_or(const Expr& e, std::vector<const Expr*>& leaves) {
    if (e.kind == Expr::Kind::Or) {
      flatten_or(e.kids[0], leaves);
      flatten_or(e.kids[1], leaves);
      return;
    }
    leaves.push_back(&e);
  }

  void count_var_uses(const Expr& e) {
    if (e.kind == Expr::Kind::Var) {
      input_nets[e.name].refs += 1;
      input_nets[e.name].is_input = true;
      input_nets[e.name].input_name = e.name;
      return;
    }
    for (const auto& k : e.kids) count_var_uses(k);
  }
};

}  // namespace

Schedule allocate_and_emit(const Expr& lowered,
                           const std::vector<std::string>& inputs,
                           ArrayGeometry geom, const CompilerOptions& options) {
  geom.validate();
  for (const std::string& v : collect_vars(lowered)) {
    if (std::find(inputs.begin(), inputs.end(), v) == inputs.end()) {
      throw MappingError("expression uses undeclared input '" + v + "'", v);
    }
  }
  Emitter em(geom, options);
  for (const std::string& name : inputs) {
    Net& n = em.input_nets[name];
    n.is_input = true;
    n.input_name = name;
    n.refs = 0;
  }
  em.count_var_uses(lowered);

  Schedule s;
  s.inputs = inputs;
  if (lowered.kind == Expr::Kind::Var) {
    Net& n = em.input_nets.at(lowered.name);
    n.refs = std::max(n.refs, 1);
    s.output_cell = em.materialize(n, 0);
  } else {
    Net out = em.emit(lowered);
    s.output_cell = out.cells.begin()->second;
  }
  MicroOp read;
  read.kind = MicroOp::Kind::Read;
  read.cells = {s.output_cell};
  em.ops.push_back(std::move(read));
  s.ops = std::move(em.ops);
  return s;
}

void check_schedule(const Schedule& schedule, ArrayGeometry geom) {
  // last_init[cell]: the literal Init value still in effect, -1 once an
  // exec wrote the cell, -2 for value-bearing (input / copy) inits.
  std::map<std::pair<int, int>, int> last_write;
  auto key = [](CellAddress c) { return std::make_pair(c.row, c.col); };
  auto check_bounds = [&](CellAddress c) {
    if (c.row < 0 || c.row >= geom.rows || c.col < 0 || c.col >= geom.cols) {
      throw std::logic_error("schedule cell out of bounds");
    }
  };
  auto require_written = [&](CellAddress c, const char* what) {
    if (!last_write.count(key(c))) {
      throw std::logic_error(std::string("schedule uses cell before write: ") + what);
    }
  };
  for (const auto& op : schedule.ops) {
    for (const auto& c : op.cells) check_bounds(c);
    switch (op.kind) {
      case MicroOp::Kind::Init: {
        if (op.has_copy_from) {
          check_bounds(op.copy_from);
          require_written(op.copy_from, "copy source");
          last_write[key(op.cells[0])] = -2;
        } else if (!op.input_name.empty()) {
          last_write[key(op.cells[0])] = -2;
        } else {
          if (op.value != 0 && op.value != 1) {
            throw std::logic_error("init value must be 0 or 1");
          }
          last_write[key(op.cells[0])] = op.value;
        }
        break;
      }
      case MicroOp::Kind::ExecOr: {
        if (op.cells.size() < 2) throw std::logic_error("exec_or needs >= 1 input");
        const int col = op.cells[0].col;
        std::set<int> rows;
        for (const auto& c : op.cells) {
          if (c.col != col) throw std::logic_error("exec cells must share a column");
          if (!rows.insert(c.row).second) {
            throw std::logic_error("exec cells must occupy distinct rows");
          }
        }
        for (std::size_t i = 0; i + 1 < op.cells.size(); ++i) {
          require_written(op.cells[i], "exec_or input");
        }
        auto it = last_write.find(key(op.cells.back()));
        if (it == last_write.end() || it->second != 0) {
          throw std::logic_error("exec output must be Init(0) before execution");
        }
        last_write[key(op.cells.back())] = -1;
        break;
      }
      case MicroOp::Kind::ExecNot: {
        if (op.cells.size() != 3) throw std::logic_error("exec_not needs 3 cells");
        const int col = op.cells[0].col;
        std::set<int> rows;
        for (const auto& c : op.cells) {
          if (c.col != col) throw std::logic_error("exec cells must share a column");
          if (!rows.insert(c.row).second) {
            throw std::logic_error("exec cells must occupy distinct rows");
          }
        }
        auto h = last_write.find(key(op.cells[0]));
        if (h == last_write.end() || h->second != 1) {
          throw std::logic_error("exec_not helper must be Init(1) before execution");
        }
        require_written(op.cells[1], "exec_not input");
        auto it = last_write.find(key(op.cells[2]));
        if (it == last_write.end() || it->second != 0) {
          throw std::logic_error("exec output must be Init(0) before execution");
        }
        last_write[key(op.cells[2])] = -1;
        break;
      }
      case MicroOp::Kind::Read:
        require_written(op.cells.at(0), "read target");
        break;
    }
  }
}

namespace {

nlohmann::json cell_json(CellAddress c) {
  return {{"row", c.row}, {"col", c.col}};
}

CellAddress cell_from_json(const nlohmann::json& j) {
  return CellAddress{j.at("row").get<int>(), j.at("col").get<int>()};
}

}  // namespace

void write_schedule_json(const Schedule& schedule, std::ostream& os) {
  nlohmann::json ops = nlohmann::json::array();
  for (const auto& op : schedule.ops) {
    nlohmann::json j;
    switch (op.kind) {
      case MicroOp::Kind::Init:
        j["kind"] = "init";
        j["cell"] = cell_json(op.cells[0]);
        if (op.has_copy_from) {
          j["from"] = cell_json(op.copy_from);
        } else if (!op.input_name.empty()) {
          j["input"] = op.input_name;
        } else {
          j["value"] = op.value;
        }
        break;
      case MicroOp::Kind::ExecOr: {
        j["kind"] = "exec_or";
        nlohmann::json ins = nlohmann::json::array();
        for (std::size_t i = 0; i + 1 < op.cells.size(); ++i) {
          ins.push_back(cell_json(op.cells[i]));
        }
        j["inputs"] = ins;
        j["output"] = cell_json(op.cells.back());
        break;
      }
      case MicroOp::Kind::ExecNot:
        j["kind"] = "exec_not";
        j["x1"] = cell_json(op.cells[0]);
        j["x_in"] = cell_json(op.cells[1]);
        j["y_out"] = cell_json(op.cells[2]);
        break;
      case MicroOp::Kind::Read:
        j["kind"] = "read";
        j["cell"] = cell_json(op.cells[0]);
        break;
    }
    ops.push_back(std::move(j));
  }
  nlohmann::json root = {{"inputs", schedule.inputs},
                         {"output_cell", cell_json(schedule.output_cell)},
                         {"ops", ops}};
  os << root.dump(2) << "\n";
}

Schedule read_schedule_json(std::istream& is) {
  nlohmann::json root = nlohmann::json::parse(is);
  Schedule s;
  s.inputs = root.at("inputs").get<std::vector<std::string>>();
  s.output_cell = cell_from_json(root.at("output_cell"));
  for (const auto& j : root.at("ops")) {
    MicroOp op;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "init") {
      op.kind = MicroOp::Kind::Init;
      op.cells = {cell_from_json(j.at("cell"))};
      if (j.contains("from")) {
        op.copy_from = cell_from_json(j.at("from"));
        op.has_copy_from = true;
      } else if (j.contains("input")) {
        op.input_name = j.at("input").get<std::string>();
      } else {
        op.value = j.at("value").get<int>();
      }
    } else if (kind == "exec_or") {
      op.kind = MicroOp::Kind::ExecOr;
      for (const auto& c : j.at("inputs")) op.cells.push_back(cell_from_json(c));
      op.cells.push_back(cell_from_json(j.at("output")));
    } else if (kind == "exec_not") {
      op.kind = MicroOp::Kind::ExecNot;
      op.cells = {cell_from_json(j.at("x1")), cell_from_json(j.at("x_in")),
                  cell_from_json(j.at("y_out"))};
    } else if (kind == "read") {
      op.kind = MicroOp::Kind::Read;
      op.cells = {cell_from_json(j.at("cell"))};
    } else {
      throw std::invalid_argument("unknown schedule op kind: " + kind);
    }
    s.ops.push_back(std::move(op));
  }
  return s;
}

ScheduleError::ScheduleError(std::size_t index, const std::string& msg)
    : std::runtime_error("op " + std::to_string(index) + ": " + msg),
      op_index(index) {}

SimulatedRun simulate_schedule(const Schedule& schedule,
                               const std::map<std::string, int>& assignment,
                               CrossbarState& state, const CostTable& table,
                               const EngineOptions& opt) {
  for (const std::string& in : schedule.inputs) {
    if (!assignment.count(in)) {
      throw std::invalid_argument("assignment missing input: " + in);
    }
  }

  SimulatedRun run;
  EnergyBreakdown& ff = run.fine_full;
  EnergyBreakdown& fo = run.fine_optimal;
  ff.mode = EnergyMode::FullRamp;
  fo.mode = EnergyMode::Optimal;
  std::vector<double> exec_full_nj, exec_opt_nj;
  int output = 0;

  for (std::size_t i = 0; i < schedule.ops.size(); ++i) {
    const MicroOp& op = schedule.ops[i];
    try {
      switch (op.kind) {
        case MicroOp::Kind::Init: {
          const CellAddress cell = op.cells.at(0);
          int v;
          if (!op.input_name.empty()) {
            v = assignment.at(op.input_name) ? 1 : 0;
          } else if (op.has_copy_from) {
            ReadResult src = read_cell(state, op.copy_from, opt);
            const double e = integrate_energy(src.trace, full_window(src.trace));
            ff.init_nj += e;
            fo.init_nj += e;
            v = src.logic;
          } else {
            v = op.value;
          }
          ExecutionTrace tr = init_cell(state, cell, v, opt);
          const double e_full = integrate_energy(tr, full_window(tr));
          const PhaseWindow w =
              detect_optimal_window(tr, cell, state.device_params(cell));
          const double e_opt = integrate_energy(tr, w);
          ff.init_nj += e_full;
          fo.init_nj += e_opt;
          ff.items.push_back({v == 1 ? "set" : "reset", e_full});
          fo.items.push_back({v == 1 ? "set" : "reset", e_opt});
          break;
        }
        case MicroOp::Kind::ExecOr:
        case MicroOp::Kind::ExecNot: {
          ProtocolSpec proto;
          CellAddress out;
          if (op.kind == MicroOp::Kind::ExecOr) {
            std::vector<CellAddress> ins(op.cells.begin(), op.cells.end() - 1);
            out = op.cells.back();
            proto = protocol_exec_or(state, ins, out, opt);
            if (state.logic(out) != 0) {
              throw std::logic_error("exec output not initialized to 0");
            }
          } else {
            out = op.cells.at(2);
            proto = protocol_exec_not(state, op.cells.at(0), op.cells.at(1), out, opt);
            if (state.logic(op.cells.at(0)) != 1) {
              throw std::logic_error("exec_not helper not initialized to 1");
            }
            if (state.logic(out) != 0) {
              throw std::logic_error("exec output not initialized to 0");
            }
          }
          ExecutionTrace tr = run_protocol(state, proto);
          const double e_full = integrate_energy(tr, full_window(tr));
          const PhaseWindow w =
              detect_optimal_window(tr, out, state.device_params(out));
          const double e_opt = integrate_energy(tr, w);
          ff.exec_nj += e_full;
          fo.exec_nj += e_opt;
          exec_full_nj.push_back(e_full);
          exec_opt_nj.push_back(e_opt);
          const char* name =
              op.kind == MicroOp::Kind::ExecOr ? "exec_or" : "exec_not";
          ff.items.push_back({name, e_full});
          fo.items.push_back({name, e_opt});
          break;
        }
        case MicroOp::Kind::Read: {
          ReadResult rr = read_cell(state, op.cells.at(0), opt);
          const double e = integrate_energy(rr.trace, full_window(rr.trace));
          ff.read_nj += e;
          fo.read_nj += e;
          ff.items.push_back({"read", e});
          fo.items.push_back({"read", e});
          output = rr.logic;
          break;
        }
      }
    } catch (const std::exception& ex) {
      throw ScheduleError(i, ex.what());
    }
  }

  ff.finalize();
  fo.finalize();
  run.output = output;
  std::map<std::string, int> bound;
  for (const auto& [k, v] : assignment) bound[k] = v ? 1 : 0;
  run.coarse_full = coarse_cost(schedule.ops, bound, table,
                                EnergyMode::FullRamp, exec_full_nj);
  run.coarse_optimal = coarse_cost(schedule.ops, bound, table,
                                   EnergyMode::Optimal, exec_opt_nj);
  return run;
}

}  // namespace magicsim
