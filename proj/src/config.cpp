#include "aloha/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "aloha/units.hpp"

namespace aloha {

const char* run_mode_name(RunMode mode) {
  switch (mode) {
    case RunMode::analyze: return "analyze";
    case RunMode::simulate: return "simulate";
    case RunMode::validate: return "validate";
    case RunMode::sweep: return "sweep";
    case RunMode::sdp_table: return "sdp-table";
    case RunMode::optimize: return "optimize";
  }
  return "analyze";
}

ChannelParams ChannelSpec::params() const {
  return ChannelParams::from_linear(db_to_linear(gamma_db), dbm_to_mw(eta_dbm),
                                    ptx_mw, v, r_m, alpha);
}

SuccessTable ChannelSpec::table_for(int n_nodes) const {
  if (explicit_table) {
    SuccessTable t = SuccessTable::from_values(table_values);
    if (t.size() < n_nodes)
      throw std::invalid_argument("explicit success table has fewer entries than nodes");
    return t;
  }
  return SuccessTable::symmetric(params(), n_nodes);
}

namespace {

const std::set<std::string> kAxisNames = {"q", "lambda", "D", "n", "N", "c"};

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double parse_double(const std::string& v, int line) {
  if (v.empty()) throw ConfigError(line, "expected a number");
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size()) throw ConfigError(line, "malformed number '" + v + "'");
  return x;
}

long long parse_int(const std::string& v, int line) {
  if (v.empty()) throw ConfigError(line, "expected an integer");
  char* end = nullptr;
  const long long x = std::strtoll(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size()) throw ConfigError(line, "malformed integer '" + v + "'");
  return x;
}

std::uint64_t parse_u64(const std::string& v, int line) {
  if (v.empty() || v[0] == '-') throw ConfigError(line, "expected a nonnegative integer");
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (end != v.c_str() + v.size()) throw ConfigError(line, "malformed integer '" + v + "'");
  return x;
}

std::vector<double> parse_list(const std::string& v, int line) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss(v);
  while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), line));
  if (out.empty()) throw ConfigError(line, "expected a comma-separated list of values");
  return out;
}

struct Seen {
  std::map<std::string, int> line_of;

  void mark(const std::string& section, const std::string& key, int line) {
    const std::string id = section + "." + key;
    if (line_of.count(id))
      throw ConfigError(line, "duplicate key '" + key + "' in [" + section + "]");
    line_of[id] = line;
  }
  bool has(const std::string& id) const { return line_of.count(id) > 0; }
  int line(const std::string& id) const {
    auto it = line_of.find(id);
    return it == line_of.end() ? 0 : it->second;
  }
};

}  // namespace

RunSpec parse_config(const std::string& text) {
  RunSpec spec;
  Seen seen;
  std::string section = "scenario";
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "scenario" && section != "channel" && section != "run" &&
          section != "sweep" && section != "optimize")
        throw ConfigError(line_no, "unknown section [" + section + "]");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "missing key before '='");
    seen.mark(section, key, line_no);

    if (section == "scenario") {
      if (key == "N") spec.scenario.n_nodes = static_cast<int>(parse_int(value, line_no));
      else if (key == "q") spec.scenario.q = parse_double(value, line_no);
      else if (key == "lambda") spec.scenario.lambda = parse_double(value, line_no);
      else if (key == "D") spec.scenario.deadline = static_cast<int>(parse_int(value, line_no));
      else if (key == "n") spec.scenario.retx = static_cast<int>(parse_int(value, line_no));
      else if (key == "c") spec.scenario.mpr_cap = static_cast<int>(parse_int(value, line_no));
      else if (key == "L") { spec.scenario.buffer = static_cast<int>(parse_int(value, line_no)); spec.l_explicit = true; }
      else if (key == "b") { spec.scenario.backlogged = static_cast<int>(parse_int(value, line_no)); spec.b_explicit = true; }
      else throw ConfigError(line_no, "unknown key '" + key + "' in [scenario]");
    } else if (section == "channel") {
      if (key == "gamma_db") spec.channel.gamma_db = parse_double(value, line_no);
      else if (key == "eta_dbm") spec.channel.eta_dbm = parse_double(value, line_no);
      else if (key == "ptx_mw") spec.channel.ptx_mw = parse_double(value, line_no);
      else if (key == "v") spec.channel.v = parse_double(value, line_no);
      else if (key == "r_m") spec.channel.r_m = parse_double(value, line_no);
      else if (key == "alpha") spec.channel.alpha = parse_double(value, line_no);
      else if (key == "table") {
        if (value == "physics") spec.channel.explicit_table = false;
        else if (value == "explicit") spec.channel.explicit_table = true;
        else throw ConfigError(line_no, "table must be 'physics' or 'explicit'");
      } else if (key == "p") spec.channel.table_values = parse_list(value, line_no);
      else throw ConfigError(line_no, "unknown key '" + key + "' in [channel]");
    } else if (section == "run") {
      if (key == "mode") {
        if (value == "analyze") spec.mode = RunMode::analyze;
        else if (value == "simulate") spec.mode = RunMode::simulate;
        else if (value == "validate") spec.mode = RunMode::validate;
        else if (value == "sweep") spec.mode = RunMode::sweep;
        else if (value == "sdp-table") spec.mode = RunMode::sdp_table;
        else if (value == "optimize") spec.mode = RunMode::optimize;
        else throw ConfigError(line_no, "unknown mode '" + value + "'");
      } else if (key == "slots") spec.slots = parse_u64(value, line_no);
      else if (key == "seed") spec.seed = parse_u64(value, line_no);
      else if (key == "warmup") spec.warmup = parse_u64(value, line_no);
      else if (key == "reps") spec.reps = static_cast<int>(parse_int(value, line_no));
      else if (key == "grid") spec.grid = parse_double(value, line_no);
      else if (key == "jobs") spec.jobs = static_cast<int>(parse_int(value, line_no));
      else if (key == "out") spec.out_path = value;
      else if (key == "trace") spec.trace_path = value;
      else if (key == "export_chain") spec.export_chain_path = value;
      else throw ConfigError(line_no, "unknown key '" + key + "' in [run]");
    } else if (section == "sweep") {
      if (!kAxisNames.count(key))
        throw ConfigError(line_no, "unknown sweep axis '" + key + "'");
      spec.axes.push_back(SweepAxis{key, parse_list(value, line_no)});
    } else {  // optimize
      if (key == "objective") {
        if (value == "max-throughput") spec.objective = Objective::max_throughput;
        else if (value == "min-drop-rate") spec.objective = Objective::min_drop_rate;
        else throw ConfigError(line_no, "objective must be 'max-throughput' or 'min-drop-rate'");
      } else throw ConfigError(line_no, "unknown key '" + key + "' in [optimize]");
    }
  }

  // Required scenario keys.
  std::string missing;
  for (const char* key : {"N", "q", "lambda", "D", "n", "c"})
    if (!seen.has(std::string("scenario.") + key))
      missing += missing.empty() ? key : std::string(", ") + key;
  if (!missing.empty())
    throw ConfigError(0, "missing required keys: " + missing);

  if (!spec.l_explicit) spec.scenario.buffer = spec.scenario.deadline;
  if (!spec.b_explicit) spec.scenario.backlogged = spec.scenario.n_nodes;

  // Cross-field checks, attributed to the key that carries the bad value.
  const Scenario& sc = spec.scenario;
  auto at = [&](const char* key) { return seen.line(std::string("scenario.") + key); };
  if (sc.n_nodes < 1) throw ConfigError(at("N"), "N must be at least 1");
  if (!(sc.q >= 0.0 && sc.q <= 1.0)) throw ConfigError(at("q"), "q must lie in [0, 1]");
  if (!(sc.lambda >= 0.0 && sc.lambda <= 1.0))
    throw ConfigError(at("lambda"), "lambda must lie in [0, 1]");
  if (sc.deadline < 1) throw ConfigError(at("D"), "D must be at least 1");
  if (sc.retx < 0) throw ConfigError(at("n"), "n must be nonnegative");
  if (sc.retx > sc.deadline - 1)
    throw ConfigError(at("n"), "n must not exceed D - 1");
  if (sc.mpr_cap < 1) throw ConfigError(at("c"), "c must be at least 1");
  if (sc.mpr_cap > sc.n_nodes) throw ConfigError(at("c"), "c must not exceed N");
  if (spec.b_explicit && (sc.backlogged < 1 || sc.backlogged > sc.n_nodes))
    throw ConfigError(at("b"), "b must lie in [1, N]");
  if (spec.l_explicit && sc.buffer < sc.deadline)
    throw ConfigError(at("L"), "L must be at least D");

  if (!(spec.channel.ptx_mw > 0.0))
    throw ConfigError(seen.line("channel.ptx_mw"), "ptx_mw must be positive");
  if (!(spec.channel.r_m > 0.0))
    throw ConfigError(seen.line("channel.r_m"), "r_m must be positive");
  if (!(spec.channel.v > 0.0))
    throw ConfigError(seen.line("channel.v"), "v must be positive");
  if (!(spec.channel.alpha >= 2.0))
    throw ConfigError(seen.line("channel.alpha"), "alpha must be at least 2");
  if (spec.channel.explicit_table) {
    if (spec.channel.table_values.empty())
      throw ConfigError(seen.line("channel.table"),
                        "table = explicit requires a p = ... value list");
    try {
      SuccessTable::from_values(spec.channel.table_values);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(seen.line("channel.p"), e.what());
    }
  }

  if (spec.reps < 1) throw ConfigError(seen.line("run.reps"), "reps must be at least 1");
  if (spec.jobs < 0) throw ConfigError(seen.line("run.jobs"), "jobs must be nonnegative");
  if (!(spec.grid > 0.0 && spec.grid <= 0.5))
    throw ConfigError(seen.line("run.grid"), "grid must lie in (0, 0.5]");
  if (spec.slots <= spec.warmup) {
    const int ln = seen.has("run.slots") ? seen.line("run.slots") : seen.line("run.warmup");
    throw ConfigError(ln, "slots must exceed the warmup window");
  }

  for (const SweepAxis& axis : spec.axes) {
    const int ln = seen.line("sweep." + axis.name);
    for (double v : axis.values) {
      if (axis.name == "q" || axis.name == "lambda") {
        if (!(v >= 0.0 && v <= 1.0))
          throw ConfigError(ln, axis.name + " values must lie in [0, 1]");
      } else {
        if (v != std::floor(v))
          throw ConfigError(ln, axis.name + " values must be integers");
        const long long i = static_cast<long long>(v);
        if ((axis.name == "D" || axis.name == "N" || axis.name == "c") && i < 1)
          throw ConfigError(ln, axis.name + " values must be at least 1");
        if (axis.name == "n" && i < 0)
          throw ConfigError(ln, "n values must be nonnegative");
      }
    }
  }

  return spec;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string list(const std::vector<double>& values, bool integral) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += integral ? std::to_string(static_cast<long long>(values[i])) : num(values[i]);
  }
  return out;
}

}  // namespace

std::string render_config(const RunSpec& spec) {
  std::ostringstream out;
  out << "[scenario]\n";
  out << "N = " << spec.scenario.n_nodes << "\n";
  out << "q = " << num(spec.scenario.q) << "\n";
  out << "lambda = " << num(spec.scenario.lambda) << "\n";
  out << "D = " << spec.scenario.deadline << "\n";
  out << "n = " << spec.scenario.retx << "\n";
  out << "c = " << spec.scenario.mpr_cap << "\n";
  if (spec.l_explicit) out << "L = " << spec.scenario.buffer << "\n";
  if (spec.b_explicit) out << "b = " << spec.scenario.backlogged << "\n";

  out << "\n[channel]\n";
  out << "gamma_db = " << num(spec.channel.gamma_db) << "\n";
  out << "eta_dbm = " << num(spec.channel.eta_dbm) << "\n";
  out << "ptx_mw = " << num(spec.channel.ptx_mw) << "\n";
  out << "v = " << num(spec.channel.v) << "\n";
  out << "r_m = " << num(spec.channel.r_m) << "\n";
  out << "alpha = " << num(spec.channel.alpha) << "\n";
  out << "table = " << (spec.channel.explicit_table ? "explicit" : "physics") << "\n";
  if (spec.channel.explicit_table)
    out << "p = " << list(spec.channel.table_values, false) << "\n";

  out << "\n[run]\n";
  out << "mode = " << run_mode_name(spec.mode) << "\n";
  out << "slots = " << spec.slots << "\n";
  out << "seed = " << spec.seed << "\n";
  out << "warmup = " << spec.warmup << "\n";
  out << "reps = " << spec.reps << "\n";
  out << "grid = " << num(spec.grid) << "\n";
  out << "jobs = " << spec.jobs << "\n";
  if (!spec.out_path.empty()) out << "out = " << spec.out_path << "\n";
  if (!spec.trace_path.empty()) out << "trace = " << spec.trace_path << "\n";
  if (!spec.export_chain_path.empty())
    out << "export_chain = " << spec.export_chain_path << "\n";

  if (!spec.axes.empty()) {
    out << "\n[sweep]\n";
    for (const SweepAxis& axis : spec.axes) {
      const bool integral =
          axis.name == "D" || axis.name == "n" || axis.name == "N" || axis.name == "c";
      out << axis.name << " = " << list(axis.values, integral) << "\n";
    }
  }

  out << "\n[optimize]\n";
  out << "objective = "
      << (spec.objective == Objective::max_throughput ? "max-throughput"
                                                      : "min-drop-rate")
      << "\n";
  return out.str();
}

}  // namespace aloha
