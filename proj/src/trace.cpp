#include "multpim/trace.hpp"

#include <nlohmann/json.hpp>
#include <stdexcept>

namespace multpim {

using nlohmann::json;

namespace {

json rows_to_json(const RowSet& rs) {
  if (rs.all) return "all";
  return rs.rows;
}

RowSet rows_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "all") throw std::invalid_argument("rows must be \"all\" or array");
    return RowSet::All();
  }
  return RowSet::Of(j.get<std::vector<Row>>());
}

}  // namespace

void write_trace_record(std::ostream& out, std::uint64_t cycle, const CycleInstruction& instr) {
  json rec;
  rec["cycle"] = cycle;
  rec["phase"] = instr.phase;
  json cfg = json::array();
  for (bool b : instr.config.conducting) cfg.push_back(b ? 1 : 0);
  rec["config"] = std::move(cfg);
  json execs = json::array();
  std::size_t group = 0;
  for (const auto& ex : instr.executions) {
    if (const auto* g = std::get_if<GateExecution>(&ex)) {
      execs.push_back({{"kind", to_string(g->kind)},
                       {"inputs", g->inputs},
                       {"output", g->output},
                       {"rows", rows_to_json(g->rows)},
                       {"init_mode", g->mode == InitMode::Standard ? "standard" : "no_init"}});
    } else {
      for (const auto& t : std::get<InitExecution>(ex).targets) {
        execs.push_back({{"kind", "INIT"},
                         {"inputs", json::array()},
                         {"output", t.column},
                         {"rows", rows_to_json(t.rows)},
                         {"init_mode", "standard"},
                         {"group", group}});
      }
      ++group;
    }
  }
  rec["executions"] = std::move(execs);
  out << rec.dump() << '\n';
}

void write_trace(std::ostream& out, const Schedule& schedule) {
  for (std::size_t i = 0; i < schedule.cycles.size(); ++i) {
    write_trace_record(out, i, schedule.cycles[i]);
  }
}

CycleInstruction parse_trace_record(const std::string& line) {
  json rec;
  try {
    rec = json::parse(line);
    CycleInstruction c;
    c.phase = rec.value("phase", std::string{});
    for (int b : rec.at("config").get<std::vector<int>>()) c.config.conducting.push_back(b != 0);
    std::map<std::size_t, std::size_t> group_slot;
    for (const auto& e : rec.at("executions")) {
      const auto kind = e.at("kind").get<std::string>();
      if (kind == "INIT") {
        const auto grp = e.value("group", std::size_t{0});
        auto it = group_slot.find(grp);
        if (it == group_slot.end()) {
          it = group_slot.emplace(grp, c.executions.size()).first;
          c.executions.emplace_back(InitExecution{});
        }
        std::get<InitExecution>(c.executions[it->second])
            .targets.push_back({rows_from_json(e.at("rows")), e.at("output").get<Column>()});
        continue;
      }
      GateExecution g;
      g.kind = gate_from_string(kind);
      g.inputs = e.at("inputs").get<std::vector<Column>>();
      g.output = e.at("output").get<Column>();
      g.rows = rows_from_json(e.at("rows"));
      const auto mode = e.at("init_mode").get<std::string>();
      if (mode == "standard") {
        g.mode = InitMode::Standard;
      } else if (mode == "no_init") {
        g.mode = InitMode::NoInit;
      } else {
        throw std::invalid_argument("bad init_mode '" + mode + "'");
      }
      c.executions.emplace_back(std::move(g));
    }
    return c;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed trace record: ") + e.what());
  }
}

Schedule read_trace(std::istream& in) {
  Schedule s;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    s.push(parse_trace_record(line));
  }
  return s;
}

}  // namespace multpim
