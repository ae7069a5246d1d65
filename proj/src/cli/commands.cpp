#include "kdb/cli/commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "kdb/net/dump.hpp"
#include "kdb/syntax/parser.hpp"
#include "kdb/semantics/trace_json.hpp"
#include "kdb/typesys/types.hpp"

namespace kdb::cli {

namespace {

struct Loaded {
  System sys;
};

std::string paint(const Io & io, const char * code, const std::string & text)
{
  if (!io.color) return text;
  return std::string("\033[") + code + "m" + text + "\033[0m";
}

void diagnostic(const Io & io, const std::string & file, std::uint32_t line, std::uint32_t col,
                const std::string & message)
{
  io.err << file << ':' << line << ':' << col << ": " << paint(io, "1;31", "error") << ": " << message << '\n';
}

std::optional<System> load(const std::string & file, const Io & io)
{
  std::ifstream in(file, std::ios::binary);
  if (!in) {
    io.err << file << ": " << paint(io, "1;31", "error") << ": cannot open file\n";
    return std::nullopt;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_system(buf.str());
  } catch (const ParseError & e) {
    diagnostic(io, file, e.line(), e.col(), e.message());
    return std::nullopt;
  }
}

void report_type_errors(const std::string & file, const TypeErrors & errs, const Io & io)
{
  for (const TypeError & e : errs)
    diagnostic(io, file, e.span.line, e.span.col, e.message + " [" + to_string(e.kind) + "]");
}

bool write_file(const std::string & path, const std::string & text, const Io & io)
{
  std::ofstream f(path, std::ios::binary);
  if (f) f << text;
  if (!f) {
    io.err << path << ": " << paint(io, "1;31", "error") << ": cannot write file\n";
    return false;
  }
  return true;
}

// One header line per table followed by its rows as compact JSON arrays.
void print_tables(const Io & io, const nlohmann::json & tables)
{
  if (tables.empty()) io.out << "  (no tables)\n";
  for (const auto & t : tables) {
    io.out << "  $" << t["loc"].get<std::string>() << " " << t["tid"].get<std::string>() << " "
           << t["schema"].dump() << '\n';
    for (const auto & r : t["rows"]) io.out << "    " << r.dump() << '\n';
  }
}

}  // namespace

int cmd_check(const std::string & file, bool json, const Io & io)
{
  auto sys = load(file, io);
  if (!sys) return exit_input;
  TypeErrors errs = check_system(*sys);
  if (json) io.out << errors_json(errs).dump(2) << '\n';
  else report_type_errors(file, errs, io);
  if (!errs.empty()) {
    if (!json) io.err << errs.size() << (errs.size() == 1 ? " error\n" : " errors\n");
    return exit_type_errors;
  }
  if (!json) io.out << file << ": " << paint(io, "32", "ok") << '\n';
  return exit_ok;
}

int cmd_run(const RunConfig & cfg, const Io & io)
{
  auto sys = load(cfg.file, io);
  if (!sys) return exit_input;
  if (!cfg.unchecked) {
    TypeErrors errs = check_system(*sys);
    if (!errs.empty()) {
      report_type_errors(cfg.file, errs, io);
      io.err << "refusing to run an ill-typed system; pass --unchecked to run it anyway\n";
      return exit_type_errors;
    }
  }
  Trace tr = run(*sys, cfg.seed, cfg.max_steps);
  if (cfg.trace_out && !write_file(*cfg.trace_out, trace_jsonl(tr), io)) return exit_input;

  io.out << "terminal: " << to_string(tr.terminal) << '\n';
  io.out << "steps: " << tr.steps.size() << '\n';
  if (tr.terminal == Terminal::err) {
    const TraceStep & last = tr.steps.back();
    io.out << "error step " << tr.steps.size() - 1 << ": rule=" << to_string(last.label.rule) << " at $"
           << last.label.actor << ": " << last.label.detail << '\n';
    const CanonicalNet & before = tr.steps.size() > 1 ? tr.steps[tr.steps.size() - 2].state : tr.initial;
    io.out << "tables before the error:\n";
    print_tables(io, dump_tables(before));
    return exit_err;
  }
  io.out << "tables:\n";
  print_tables(io, dump_tables(tr.final_state()));
  return tr.terminal == Terminal::step_limit ? exit_step_limit : exit_ok;
}

int cmd_explore(const RunConfig & cfg, const Io & io)
{
  if (cfg.bound > k_explore_guard) {
    io.err << "explore bound " << cfg.bound << " exceeds the limit of " << k_explore_guard << " states\n";
    return exit_input;
  }
  auto sys = load(cfg.file, io);
  if (!sys) return exit_input;
  Exploration ex = explore(canonicalize(*sys->net), *sys, cfg.bound);
  if (cfg.dot_out && !write_file(*cfg.dot_out, to_dot(ex), io)) return exit_input;

  io.out << "states: " << ex.states.size() << (ex.truncated ? " (truncated at the bound)" : "") << '\n';
  io.out << "ERR reachable: " << (ex.err_reachable ? "yes" : "no") << '\n';
  io.out << "quiescent states: " << ex.quiescent.size() << '\n';
  for (std::size_t q : ex.quiescent) {
    io.out << "-- state " << q << ":\n";
    print_tables(io, dump_tables(ex.states[q]));
  }
  return exit_ok;
}

int cmd_dump(const std::string & file, const Io & io)
{
  auto sys = load(file, io);
  if (!sys) return exit_input;
  print_tables(io, dump_tables(canonicalize(*sys->net)));
  return exit_ok;
}

int main_cli(int argc, const char * const * argv, const Io & io)
{
  CLI::App app{"Interpreter and type checker for Klaim-DB systems", "kdb"};
  app.require_subcommand(1);

  std::string file;
  bool json = false;
  RunConfig cfg;

  auto * check = app.add_subcommand("check", "type check a system");
  check->add_option("file", file, "source file")->required();
  check->add_flag("--json", json, "print diagnostics as JSON");

  auto * runc = app.add_subcommand("run", "run a system under the seeded scheduler");
  runc->add_option("file", cfg.file, "source file")->required();
  runc->add_option("--seed", cfg.seed, "scheduler seed");
  runc->add_option("--max-steps", cfg.max_steps, "step limit");
  runc->add_option("--trace", cfg.trace_out, "write the JSON-lines trace here");
  runc->add_flag("--unchecked", cfg.unchecked, "run even if the system does not type check");

  auto * expl = app.add_subcommand("explore", "enumerate the reachable states");
  expl->add_option("file", cfg.file, "source file")->required();
  expl->add_option("--bound", cfg.bound, "maximum number of states");
  expl->add_option("--dot", cfg.dot_out, "write the state graph in dot format");

  auto * dump = app.add_subcommand("dump", "print the tables of the initial net");
  dump->add_option("file", file, "source file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    int code = app.exit(e, io.out, io.err);
    return code == 0 ? exit_ok : exit_input;
  }

  if (check->parsed()) return cmd_check(file, json, io);
  if (runc->parsed()) return cmd_run(cfg, io);
  if (expl->parsed()) return cmd_explore(cfg, io);
  return cmd_dump(file, io);
}

}  // namespace kdb::cli
