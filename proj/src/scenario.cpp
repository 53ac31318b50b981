#include "dynmis/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dynmis/errors.hpp"
#include "dynmis/instances.hpp"

namespace dynmis {

namespace {

using nlohmann::json;

NodeId id_field(const json& j, const char* key) {
  if (!j.contains(key)) throw ScenarioError(std::string("missing field \"") + key + "\"");
  const json& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ScenarioError(std::string("field \"") + key + "\" must be a non-negative integer");
  }
  return node_id(v.get<std::uint64_t>());
}

TopologyChange change_from_json(ChangeType t, const json& j) {
  switch (t) {
    case ChangeType::EdgeInsert: return EdgeInsert{id_field(j, "u"), id_field(j, "v")};
    case ChangeType::EdgeDeleteGraceful: return EdgeDeleteGraceful{id_field(j, "u"), id_field(j, "v")};
    case ChangeType::EdgeDeleteAbrupt: return EdgeDeleteAbrupt{id_field(j, "u"), id_field(j, "v")};
    case ChangeType::NodeInsert: {
      NodeInsert ins{id_field(j, "v"), {}};
      if (j.contains("nbrs")) {
        if (!j.at("nbrs").is_array()) throw ScenarioError("field \"nbrs\" must be an array");
        for (const json& w : j.at("nbrs")) {
          if (!w.is_number_integer() || w.get<std::int64_t>() < 0) {
            throw ScenarioError("field \"nbrs\" must hold non-negative integers");
          }
          ins.neighbors.push_back(node_id(w.get<std::uint64_t>()));
        }
      }
      return ins;
    }
    case ChangeType::NodeDeleteGraceful: return NodeDeleteGraceful{id_field(j, "v")};
    case ChangeType::NodeDeleteAbrupt: return NodeDeleteAbrupt{id_field(j, "v")};
    case ChangeType::NodeUnmute: return NodeUnmute{id_field(j, "v")};
  }
  throw ScenarioError("unknown change type");
}

json change_to_json(const TopologyChange& c) {
  json j;
  j["op"] = std::string(to_string(type_of(c)));
  std::visit(overloaded{
                 [&](const NodeInsert& x) {
                   j["v"] = raw(x.v);
                   json nbrs = json::array();
                   for (NodeId w : x.neighbors) nbrs.push_back(raw(w));
                   j["nbrs"] = nbrs;
                 },
                 [&](const auto& x) {
                   if constexpr (requires { x.u; }) j["u"] = raw(x.u);
                   j["v"] = raw(x.v);
                 },
             },
             c);
  return j;
}

}  // namespace

Scenario parse_scenario(std::istream& in) {
  Scenario s;
  Graph current;
  bool changes_started = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    try {
      const json j = json::parse(line);
      if (!j.is_object() || !j.contains("op") || !j.at("op").is_string()) {
        throw ScenarioError("expected an object with a string \"op\"");
      }
      const std::string op = j.at("op").get<std::string>();
      if (op == "scenario") {
        if (j.contains("name")) s.name = j.at("name").get<std::string>();
        if (j.contains("seeds")) s.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
      } else if (op == "init_node" || op == "init_edge") {
        if (changes_started) throw ScenarioError("initial-graph lines must precede all changes");
        if (op == "init_node") {
          const bool muted = j.contains("muted") && j.at("muted").get<bool>();
          s.initial_graph.add_node(id_field(j, "v"), !muted);
          current.add_node(id_field(j, "v"), !muted);
        } else {
          s.initial_graph.add_edge(id_field(j, "u"), id_field(j, "v"));
          current.add_edge(id_field(j, "u"), id_field(j, "v"));
        }
      } else if (auto t = parse_change_type(op)) {
        changes_started = true;
        TopologyChange c = change_from_json(*t, j);
        apply_change_in_place(current, c);
        s.changes.push_back(std::move(c));
      } else {
        throw ScenarioError("unknown op \"" + op + "\"");
      }
    } catch (const json::exception& e) {
      throw ScenarioError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const GraphError& e) {
      throw ScenarioError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ScenarioError& e) {
      throw ScenarioError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file " + path);
  Scenario s = parse_scenario(in);
  if (s.name.empty()) {
    const auto slash = path.find_last_of('/');
    s.name = path.substr(slash == std::string::npos ? 0 : slash + 1);
  }
  return s;
}

void write_scenario(std::ostream& out, const Scenario& s) {
  json header{{"op", "scenario"}, {"name", s.name}};
  if (!s.seeds.empty()) header["seeds"] = s.seeds;
  out << header.dump() << '\n';
  const Graph& g = s.initial_graph;
  for (NodeId v : g.all_nodes()) {
    json j{{"op", "init_node"}, {"v", raw(v)}};
    if (!g.visible(v)) j["muted"] = true;
    out << j.dump() << '\n';
  }
  for (NodeId u : g.all_nodes()) {
    for (NodeId w : g.adjacency(u)) {
      if (u < w) out << json{{"op", "init_edge"}, {"u", raw(u)}, {"v", raw(w)}}.dump() << '\n';
    }
  }
  for (const TopologyChange& c : s.changes) out << change_to_json(c).dump() << '\n';
}

void validate_scenario(const Scenario& s) { (void)final_graph(s); }

Graph final_graph(const Scenario& s) {
  Graph g = s.initial_graph;
  for (std::size_t i = 0; i < s.changes.size(); ++i) {
    try {
      apply_change_in_place(g, s.changes[i]);
    } catch (const GraphError& e) {
      throw ScenarioError("change " + std::to_string(i) + " (" + describe(s.changes[i]) + "): " + e.what());
    }
  }
  return g;
}

Scenario star_scenario(std::size_t n) {
  if (n < 1) throw ScenarioError("star: n must be at least 1");
  Scenario s;
  s.name = "star_n" + std::to_string(n);
  s.changes.push_back(NodeInsert{node_id(0), {}});
  for (std::size_t i = 1; i < n; ++i) s.changes.push_back(NodeInsert{node_id(i), {node_id(0)}});
  return s;
}

Scenario three_paths_scenario(std::size_t paths) {
  if (paths < 1) throw ScenarioError("three_paths: paths must be at least 1");
  Scenario s;
  s.name = "three_paths_" + std::to_string(paths);
  for (std::size_t k = 0; k < paths; ++k) {
    const std::uint64_t base = 4 * k;
    for (std::uint64_t i = 0; i < 4; ++i) s.changes.push_back(NodeInsert{node_id(base + i), {}});
    for (std::uint64_t i = 0; i < 3; ++i) s.changes.push_back(EdgeInsert{node_id(base + i), node_id(base + i + 1)});
  }
  return s;
}

Scenario bipartite_kk_scenario(std::size_t k) {
  if (k < 1) throw ScenarioError("bipartite_kk: k must be at least 1");
  Scenario s;
  s.name = "bipartite_kk_" + std::to_string(k);
  std::vector<NodeId> left;
  for (std::size_t i = 0; i < k; ++i) {
    left.push_back(node_id(i));
    s.changes.push_back(NodeInsert{node_id(i), {}});
  }
  for (std::size_t i = 0; i < k; ++i) s.changes.push_back(NodeInsert{node_id(k + i), left});
  for (NodeId v : left) s.changes.push_back(NodeDeleteGraceful{v});
  return s;
}

Scenario gnp_churn_scenario(std::size_t n, double p, std::size_t steps, std::size_t muted, std::uint64_t seed) {
  if (n < 1) throw ScenarioError("gnp_churn: n must be at least 1");
  if (!(p > 0.0 && p < 1.0)) throw ScenarioError("gnp_churn: p must lie in (0, 1)");
  Rng rng(seed);
  Scenario s;
  std::ostringstream name;
  name << "gnp_churn_n" << n << "_p" << p;
  s.name = name.str();
  s.initial_graph = gnp(n, p, rng);
  std::bernoulli_distribution coin(p);
  for (std::size_t i = 0; i < muted; ++i) {
    const NodeId v = node_id(n + i);
    s.initial_graph.add_node(v, false);
    for (std::size_t w = 0; w < n; ++w) {
      if (coin(rng)) s.initial_graph.add_edge(v, node_id(w));
    }
  }

  Graph g = s.initial_graph;
  std::vector<ChangeType> types(std::begin(kAllChangeTypes), std::end(kAllChangeTypes));
  for (std::size_t step = 0; step < steps; ++step) {
    std::shuffle(types.begin(), types.end(), rng);
    for (ChangeType t : types) {
      if (auto c = random_change(g, t, rng, p)) {
        apply_change_in_place(g, *c);
        s.changes.push_back(std::move(*c));
        break;
      }
    }
  }
  return s;
}

namespace {

std::string param(const std::map<std::string, std::string>& params, const std::string& key,
                  const std::string& fallback = "") {
  auto it = params.find(key);
  if (it != params.end()) return it->second;
  if (fallback.empty()) throw ScenarioError("missing generator parameter \"" + key + "\"");
  return fallback;
}

std::size_t size_param(const std::map<std::string, std::string>& params, const std::string& key,
                       const std::string& fallback = "") {
  const std::string v = param(params, key, fallback);
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size() || v.find('-') != std::string::npos) throw std::invalid_argument(v);
    return static_cast<std::size_t>(x);
  } catch (const std::exception&) {
    throw ScenarioError("parameter \"" + key + "\" must be a non-negative integer, got \"" + v + "\"");
  }
}

double real_param(const std::map<std::string, std::string>& params, const std::string& key,
                  const std::string& fallback = "") {
  const std::string v = param(params, key, fallback);
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ScenarioError("parameter \"" + key + "\" must be a number, got \"" + v + "\"");
  }
}

}  // namespace

Scenario generate_scenario(const std::string& kind, const std::map<std::string, std::string>& params,
                           std::uint64_t seed) {
  if (kind == "star") return star_scenario(size_param(params, "n"));
  if (kind == "three_paths") return three_paths_scenario(size_param(params, "paths"));
  if (kind == "bipartite_kk") return bipartite_kk_scenario(size_param(params, "k"));
  if (kind == "gnp_churn") {
    return gnp_churn_scenario(size_param(params, "n"), real_param(params, "p", "0.1"),
                              size_param(params, "steps", "100"), size_param(params, "muted", "0"), seed);
  }
  throw ScenarioError("unknown generator \"" + kind + "\"");
}

}  // namespace dynmis
