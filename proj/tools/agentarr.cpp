// agentarr: command-line front end for the agent arrangement library.
//
// Exit status: 0 success / positive decision, 1 negative decision,
// 2 input error, 3 capacity exceeded, 4 internal defect.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "agentarr/agentarr.hpp"
#include "agentarr/json_io.hpp"

namespace {

using namespace agentarr;
using io::json;

struct Options {
  std::string mode;
  std::size_t k = 0;
  std::size_t pebbles = 0;
  std::size_t cap_states = 10'000'000;
  std::optional<std::uint64_t> seed;
  bool dot = false;
  std::string out;
  bool allow_disconnected_complement = false;
  std::vector<std::string> files;
  std::string config;  // puzzle reachable/contact take a file then pebble names
  std::vector<std::string> names;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(o.out);
  if (!out) throw InputError("cannot write '" + o.out + "'");
  out << text << "\n";
}

void emit(const Options& o, const json& j) { emit(o, j.dump(2)); }

int decide(const Options& o, bool answer, json witness) {
  emit(o, json{{"answer", answer}, {"witness", std::move(witness)}});
  return answer ? 0 : 1;
}

SearchLimits limits_of(const Options& o) {
  SearchLimits l;
  l.max_states = o.cap_states;
  return l;
}

Mode mode_for(const Options& o, std::optional<Mode> from_file) {
  if (!o.mode.empty()) return parse_mode(o.mode);
  if (from_file) return *from_file;
  throw InputError("mode required: pass --mode aap|sga or set \"mode\" in the arrangement file");
}

const std::string& file_at(const Options& o, std::size_t i, const char* what) {
  if (o.files.size() <= i) throw InputError(std::string("missing input file: ") + what);
  return o.files[i];
}

Graph graph_or_board(const json& j, const std::string& where) {
  if (j.contains("board")) return io::graph_from_json(j["board"], where + ".board");
  return io::graph_from_json(j, where);
}

// ---- isthmus

int run_isthmus(const Options& o) {
  const std::string& path = file_at(o, 0, "graph");
  const Graph g = graph_or_board(io::read_json_file(path), path);
  if (o.k == 0) throw InputError("--k must be a positive integer");
  const IsthmusTree tree = isthmus_tree(g, o.k);
  if (o.dot) emit(o, io::isthmus_tree_to_dot(g, tree));
  else emit(o, io::isthmus_tree_to_json(g, tree));
  return 0;
}

// ---- puzzle

int run_puzzle(const std::string& sub, const Options& o) {
  if (sub == "components") {
    const std::string& path = file_at(o, 0, "board");
    const Graph g = graph_or_board(io::read_json_file(path), path);
    if (o.pebbles == 0) throw InputError("--pebbles must be a positive integer");
    const oracle::PuzzleSpace space(g, o.pebbles, o.cap_states);
    json r = io::report_to_json(space.report());
    r["feasible"] = space.feasible();
    r["transitive"] = space.transitive();
    emit(o, r);
    return 0;
  }
  const std::string& first = file_at(o, 0, "configuration");
  const Configuration c = io::configuration_from_json(io::read_json_file(first), first);
  if (sub == "reachable") {
    json out = json::object();
    const RangeAnalysis ra = analyze_ranges(c);
    for (PebbleId p = 0; p < c.pebble_count(); ++p) {
      if (!o.names.empty() && std::find(o.names.begin(), o.names.end(), c.pebble_name(p)) == o.names.end()) continue;
      out[c.pebble_name(p)] = io::vertex_set_to_json(c.board(), ra.range(p));
    }
    for (const auto& n : o.names) (void)c.pebble(n);
    emit(o, json{{"ranges", out}});
    return 0;
  }
  if (sub == "contact") {
    if (o.names.size() != 2) throw InputError("puzzle contact needs exactly two pebbles");
    const PebbleId p = c.pebble(o.names[0]), q = c.pebble(o.names[1]);
    const bool answer = can_contact(c, p, q);
    json witness = nullptr;
    if (answer) {
      if (auto plan = plan_contact(c, p, q, limits_of(o))) witness = io::move_plan_to_json(*plan);
    }
    return decide(o, answer, witness);
  }
  const std::string& second = file_at(o, 1, "second configuration");
  const Configuration d = io::configuration_from_json(io::read_json_file(second), second);
  if (sub == "equivalent") {
    const bool answer = configurations_equivalent(c, d, limits_of(o));
    return decide(o, answer, answer ? io::move_plan_to_json(move_plan(c, d, limits_of(o))) : json(nullptr));
  }
  if (sub == "plan") {
    emit(o, io::move_plan_to_json(move_plan(c, d, limits_of(o))));
    return 0;
  }
  throw InputError("unknown puzzle subcommand '" + sub + "'");
}

// ---- aap

int run_aap(const std::string& sub, const Options& o) {
  const std::string& first = file_at(o, 0, "arrangement");
  const io::ArrangementInput f = io::arrangement_from_json(io::read_json_file(first), first);
  ContractionOptions copt;
  copt.seed = o.seed;
  copt.limits = limits_of(o);
  if (sub == "validate") {
    const Mode mode = mode_for(o, f.mode);
    const AssociatedConfiguration ac = associated_configuration(f.arrangement, mode);
    emit(o, json{{"valid", true}, {"associated", io::associated_to_json(ac, f.arrangement)}});
    return 0;
  }
  if (sub == "irreducible") {
    const Mode mode = mode_for(o, f.mode);
    const IrreducibleResult r = irreducible_configuration(f.arrangement, mode, copt);
    TransferPlan plan{f.arrangement, mode, r.transfers};
    emit(o, json{{"arrangement", io::arrangement_to_json(r.arrangement, mode)},
                 {"associated", io::associated_to_json(r.config, r.arrangement)},
                 {"transfers", io::transfer_plan_to_json(plan)["steps"]}});
    return 0;
  }
  const std::string& second = file_at(o, 1, sub == "validate-plan" ? "plan" : "second arrangement");
  if (sub == "validate-plan") {
    const Mode mode = mode_for(o, f.mode);
    const json pj = io::read_json_file(second);
    const Mode plan_mode = o.mode.empty() ? io::mode_from_json(pj, second).value_or(mode) : mode;
    const TransferPlan plan = io::transfer_plan_from_json(pj, f.arrangement, plan_mode, second);
    const Arrangement end = plan.replay();
    emit(o, json{{"valid", true}, {"steps", plan.steps.size()}, {"end", io::arrangement_to_json(end, plan_mode)}});
    return 0;
  }
  const io::ArrangementInput g = io::arrangement_from_json(io::read_json_file(second), second);
  const Mode mode = mode_for(o, f.mode ? f.mode : g.mode);
  if (!f.arrangement.same_graphs(g.arrangement)) throw InputError("arrangements are on different graph pairs");
  if (sub == "equivalent") {
    const bool answer = t_equivalent(f.arrangement, g.arrangement, mode, copt);
    json witness = nullptr;
    if (answer) witness = io::transfer_plan_to_json(transfer_plan(f.arrangement, g.arrangement, mode, copt));
    return decide(o, answer, witness);
  }
  if (sub == "plan") {
    const TransferPlan plan = transfer_plan(f.arrangement, g.arrangement, mode, copt);
    emit(o, io::transfer_plan_to_json(plan));
    return 0;
  }
  throw InputError("unknown aap subcommand '" + sub + "'");
}

// ---- oracle

int run_oracle(const std::string& sub, const Options& o) {
  const std::string& path = file_at(o, 0, "input");
  const json j = io::read_json_file(path);
  if (sub == "puz-components") {
    const Graph g = graph_or_board(j, path);
    if (o.pebbles == 0) throw InputError("--pebbles must be a positive integer");
    const oracle::PuzzleSpace space(g, o.pebbles, o.cap_states);
    json r = io::report_to_json(space.report());
    r["feasible"] = space.feasible();
    r["transitive"] = space.transitive();
    emit(o, r);
    return 0;
  }
  if (sub == "blocks") {
    const Graph g = graph_or_board(j, path);
    if (o.k == 0) throw InputError("--k must be a positive integer");
    json blocks = json::array();
    for (const Block& b : oracle::blocks_by_brute_force(g, o.k)) blocks.push_back(io::vertex_set_to_json(g, b.vertices));
    emit(o, json{{"blocks", blocks}});
    return 0;
  }
  auto [ga, gm] = io::graph_pair_from_json(j, path);
  const Mode mode = mode_for(o, io::mode_from_json(j, path));
  const oracle::ArrangementSpace space(ga, gm, mode, o.cap_states);
  if (sub == "arrangement-space") {
    emit(o, io::report_to_json(space.report()));
    return 0;
  }
  if (sub == "almighty") {
    return decide(o, space.component_count() == 1, io::report_to_json(space.report()));
  }
  throw InputError("unknown oracle subcommand '" + sub + "'");
}

// ---- gadget

int run_gadget(const std::string& sub, const Options& o) {
  const std::string& path = file_at(o, 0, "graph");
  const Graph g = io::graph_from_json(io::read_json_file(path), path);
  if (sub == "restrict-hc") {
    emit(o, io::graph_to_json(restrict_hc(g)));
    return 0;
  }
  if (sub == "almighty-reduction") {
    GadgetOptions gopt;
    gopt.require_connected_complement = !o.allow_disconnected_complement;
    const GadgetPair gp = almighty_gadget(g, gopt);
    json out{{"agent_graph", io::graph_to_json(*gp.ga)},
             {"map_graph", io::graph_to_json(*gp.gm)},
             {"roles", io::roles_to_json(gp)}};
    if (auto cycle = find_hamiltonian_cycle(g)) {
      out["witness"] = io::arrangement_to_json(hamiltonian_witness_arrangement(gp, *cycle), Mode::aap);
    }
    emit(o, out);
    if (!o.out.empty()) {
      std::ofstream roles(o.out + ".roles.json");
      if (!roles) throw InputError("cannot write '" + o.out + ".roles.json'");
      roles << io::roles_to_json(gp).dump(2) << "\n";
    }
    return 0;
  }
  throw InputError("unknown gadget subcommand '" + sub + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agent arrangements on route maps: t-equivalence, transfer plans, pebble motion and gadgets"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("files", o.files, "Input JSON files");
    cmd->add_option("--cap-states", o.cap_states, "State cap for searches and enumerations")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--out", o.out, "Write the report to this file instead of stdout");
  };
  auto with_mode = [&](CLI::App* cmd) { cmd->add_option("--mode", o.mode, "Transfer model: aap or sga"); };

  CLI::App* isthmus = app.add_subcommand("isthmus", "k-isthmuses, k-blocks and the isthmus tree of a graph");
  common(isthmus);
  isthmus->add_option("--k", o.k, "Vacancy size k")->required();
  isthmus->add_flag("--dot", o.dot, "Emit the tree in DOT format");

  CLI::App* puzzle = app.add_subcommand("puzzle", "Pebble motion on a board");
  puzzle->require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> puzzle_cmds{
      {"reachable", "Reachable range of each pebble (optionally only the named ones)"},
      {"contact", "Can two pebbles become adjacent: CONFIG P Q"},
      {"equivalent", "Are two configurations equivalent: CONFIG1 CONFIG2"},
      {"plan", "Move plan between equivalent configurations: CONFIG1 CONFIG2"},
      {"components", "Connected components of the puzzle graph: BOARD --pebbles M"}};
  for (const auto& [name, help] : puzzle_cmds) {
    CLI::App* cmd = puzzle->add_subcommand(name, help);
    cmd->add_option("--cap-states", o.cap_states, "State cap for searches")->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out, "Write the report to this file");
    if (name == "reachable" || name == "contact") {
      cmd->add_option("config", o.config, "Configuration JSON")->required();
      cmd->add_option("pebbles", o.names, "Pebble names");
    } else {
      cmd->add_option("files", o.files, "Input JSON files")->required();
    }
    if (name == "components") cmd->add_option("--pebbles", o.pebbles, "Number of pebbles")->required();
  }

  CLI::App* aap = app.add_subcommand("aap", "Arrangements of agent networks on route maps");
  aap->require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> aap_cmds{
      {"validate", "Validate an arrangement and show its associated configuration"},
      {"validate-plan", "Replay a transfer plan: ARRANGEMENT PLAN"},
      {"equivalent", "Decide t-equivalence: ARRANGEMENT1 ARRANGEMENT2"},
      {"plan", "Transfer plan between t-equivalent arrangements: ARRANGEMENT1 ARRANGEMENT2"},
      {"irreducible", "Contract an arrangement to an irreducible one"}};
  for (const auto& [name, help] : aap_cmds) {
    CLI::App* cmd = aap->add_subcommand(name, help);
    common(cmd);
    with_mode(cmd);
    cmd->add_option("--seed", o.seed,
                    "Seed for a random contraction order (default: none, deterministic scan order)");
  }

  CLI::App* orc = app.add_subcommand("oracle", "Brute-force ground truth");
  orc->require_subcommand(1);
  for (const std::string name : {"puz-components", "arrangement-space", "almighty", "blocks"}) {
    CLI::App* cmd = orc->add_subcommand(name);
    common(cmd);
    if (name == "puz-components") cmd->add_option("--pebbles", o.pebbles, "Number of pebbles")->required();
    if (name == "blocks") cmd->add_option("--k", o.k, "Vacancy size k")->required();
    if (name == "arrangement-space" || name == "almighty") with_mode(cmd);
  }

  CLI::App* gadget = app.add_subcommand("gadget", "Reduction gadgets");
  gadget->require_subcommand(1);
  CLI::App* rhc = gadget->add_subcommand("restrict-hc", "Hamiltonicity-preserving transform with connected complement");
  common(rhc);
  CLI::App* red = gadget->add_subcommand("almighty-reduction", "Agent network and route map built from a graph");
  common(red);
  red->add_flag("--allow-disconnected-complement", o.allow_disconnected_complement,
                "Build the pair even when the complement of the input is disconnected");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (!o.config.empty()) o.files.insert(o.files.begin(), o.config);
    if (isthmus->parsed()) return run_isthmus(o);
    for (CLI::App* group : {puzzle, aap, orc, gadget}) {
      if (!group->parsed()) continue;
      const std::string sub = group->get_subcommands().front()->get_name();
      if (group == puzzle) return run_puzzle(sub, o);
      if (group == aap) return run_aap(sub, o);
      if (group == orc) return run_oracle(sub, o);
      return run_gadget(sub, o);
    }
    return 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "capacity exceeded: " << e.what() << "\n";
    return 3;
  } catch (const LogicError& e) {
    std::cerr << "not possible: " << e.what() << "\n";
    return 1;
  } catch (const InternalError& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  }
}
