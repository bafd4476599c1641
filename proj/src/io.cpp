#include "dbisim/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace dbisim {

namespace {

const Json& field(const Json& j, const char* name, const std::string& where) {
  if (!j.is_object()) throw ModelError(where + ": expected an object");
  auto it = j.find(name);
  if (it == j.end()) throw ModelError(where + ": missing field '" + name + "'");
  return *it;
}

std::vector<std::string> string_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ModelError(where + ": expected an array of names");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) throw ModelError(where + "[" + std::to_string(i) + "]: expected a string");
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

std::string name_of(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ModelError(where + ": expected a string");
  return j.get<std::string>();
}

template <typename Lookup>
std::size_t resolve(Lookup&& lookup, const Json& j, const std::string& where) {
  const std::string name = name_of(j, where);
  try {
    return lookup(name);
  } catch (const ModelError& e) {
    throw ModelError(where + ": " + e.what());
  }
}

std::size_t index_in(const std::vector<std::string>& names, std::string_view name, const char* what) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ModelError(std::string("unknown ") + what + " '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - names.begin());
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(b, e - b + 1));
  if (out.size() >= 2 && (out.front() == '"' || out.front() == '\'') && out.back() == out.front()) {
    out = out.substr(1, out.size() - 2);
  }
  return out;
}

Json clock_list(const SA& sa, const ClockSet& set) {
  Json arr = Json::array();
  for (const auto& n : sa.clock_names(set)) arr.push_back(n);
  return arr;
}

}  // namespace

Json parse_json(std::string_view text, const std::string& origin) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < upto; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ModelError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON");
  }
}

Json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path.string());
}

void save_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

Rational read_rational(const Json& j, const std::string& where) {
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const ModelError& e) {
      throw ModelError(where + ": " + e.what());
    }
  }
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw ModelError(where + ": expected a rational literal \"p/q\"");
}

Json rational_json(const Rational& r) { return format_rational(r); }

Dist read_dist(const Json& j, const std::vector<std::string>& states, const std::string& where) {
  if (!j.is_object()) throw ModelError(where + ": expected a distribution object");
  RatVector p = RatVector::Zero(static_cast<Index>(states.size()));
  for (const auto& [key, value] : j.items()) {
    const std::size_t s = [&] {
      try {
        return index_in(states, key, "state");
      } catch (const ModelError& e) {
        throw ModelError(where + ": " + e.what());
      }
    }();
    p(static_cast<Index>(s)) += read_rational(value, where + "." + key);
  }
  try {
    return Dist(std::move(p));
  } catch (const ModelError& e) {
    throw ModelError(where + ": " + e.what());
  }
}

Json dist_json(const RatVector& p, const std::vector<std::string>& states) {
  Json j = Json::object();
  for (Index i = 0; i < p.size(); ++i) {
    if (p(i) != 0) j[states[static_cast<std::size_t>(i)]] = rational_json(p(i));
  }
  return j;
}

Dist parse_inline_dist(std::string_view text, const std::vector<std::string>& states) {
  const std::string body = trim(text);
  if (body.size() < 2 || body.front() != '{' || body.back() != '}') {
    throw ModelError("distribution '" + std::string(text) + "' must be written {state:p, ...}");
  }
  if (body.find('"') != std::string::npos) return read_dist(parse_json(body, "distribution"), states, "distribution");
  RatVector p = RatVector::Zero(static_cast<Index>(states.size()));
  std::stringstream items(body.substr(1, body.size() - 2));
  std::string item;
  while (std::getline(items, item, ',')) {
    if (trim(item).empty()) continue;
    const auto colon = item.rfind(':');
    if (colon == std::string::npos) throw ModelError("distribution item '" + trim(item) + "' lacks ':'");
    const std::string name = trim(std::string_view(item).substr(0, colon));
    const std::size_t s = index_in(states, name, "state");
    p(static_cast<Index>(s)) += parse_rational(trim(std::string_view(item).substr(colon + 1)));
  }
  return Dist(std::move(p));
}

PA read_pa(const Json& j) {
  const auto states = string_list(field(j, "states", "model"), "states");
  const auto labels = string_list(field(j, "labels", "model"), "labels");
  const Json& ts = field(j, "transitions", "model");
  if (!ts.is_array()) throw ModelError("transitions: expected an array");
  std::vector<Transition> transitions;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const std::string where = "transitions[" + std::to_string(i) + "]";
    const std::size_t from =
        resolve([&](const std::string& n) { return index_in(states, n, "state"); }, field(ts[i], "from", where), where + ".from");
    const std::size_t label =
        resolve([&](const std::string& n) { return index_in(labels, n, "label"); }, field(ts[i], "label", where), where + ".label");
    transitions.push_back({from, label, read_dist(field(ts[i], "dist", where), states, where + ".dist")});
  }
  return PA(states, labels, std::move(transitions));
}

Json pa_json(const PA& pa) {
  Json j;
  j["states"] = pa.states();
  j["labels"] = pa.labels();
  Json ts = Json::array();
  for (const auto& t : pa.transitions()) {
    ts.push_back({{"from", pa.states()[t.source]}, {"label", pa.labels()[t.label]}, {"dist", dist_json(t.dist.vector(), pa.states())}});
  }
  j["transitions"] = std::move(ts);
  return j;
}

Json matrix_json(const PA& pa, const BisimMatrix& e) {
  Json j;
  j["states"] = pa.states();
  j["variant"] = to_string(e.variant);
  j["rank"] = e.rank();
  Json cols = Json::array();
  for (const auto& c : e.basis.columns()) {
    Json col = Json::array();
    for (Index i = 0; i < c.size(); ++i) col.push_back(rational_json(c(i)));
    cols.push_back(std::move(col));
  }
  j["columns"] = std::move(cols);
  Json prov = Json::array();
  for (const auto& p : e.provenance) {
    Json entry;
    entry["labelset"] = pa.label_names(p.labels);
    Json choice = Json::object();
    if (!p.labels.empty()) {
      const ParamTransMatrix ptm = param_trans_matrix(pa, p.labels);
      for (std::size_t s = 0; s < ptm.choices.size(); ++s) {
        if (ptm.enabled(s)) choice[pa.states()[s]] = dist_json(ptm.choices[s][p.picks[s]], pa.states());
      }
    }
    entry["choice"] = std::move(choice);
    entry["sweep"] = p.sweep;
    Json vec = Json::array();
    for (Index i = 0; i < p.vector.size(); ++i) vec.push_back(rational_json(p.vector(i)));
    entry["vector"] = std::move(vec);
    prov.push_back(std::move(entry));
  }
  j["provenance"] = std::move(prov);
  Json hist = Json::array();
  for (auto r : e.rank_history) hist.push_back(r);
  j["rank_history"] = std::move(hist);
  return j;
}

CTMC read_ctmc(const Json& j) {
  const auto states = string_list(field(j, "states", "model"), "states");
  const std::size_t initial =
      resolve([&](const std::string& n) { return index_in(states, n, "state"); }, field(j, "initial", "model"), "initial");
  const Json& rows = field(j, "rates", "model");
  const auto n = static_cast<Index>(states.size());
  if (!rows.is_array() || rows.size() != states.size()) throw ModelError("rates: expected one row per state");
  RatMatrix q(n, n);
  for (Index r = 0; r < n; ++r) {
    const Json& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != states.size()) throw ModelError("rates[" + std::to_string(r) + "]: wrong length");
    for (Index c = 0; c < n; ++c) {
      q(r, c) = read_rational(row[static_cast<std::size_t>(c)], "rates[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  return CTMC(states, std::move(q), initial);
}

Json ctmc_json(const CTMC& c) {
  Json j;
  j["states"] = c.states();
  j["initial"] = c.states()[c.initial()];
  Json rows = Json::array();
  for (Index r = 0; r < c.rates().rows(); ++r) {
    Json row = Json::array();
    for (Index k = 0; k < c.rates().cols(); ++k) row.push_back(rational_json(c.rates()(r, k)));
    rows.push_back(std::move(row));
  }
  j["rates"] = std::move(rows);
  return j;
}

SA read_sa(const Json& j) {
  const auto locations = string_list(field(j, "locations", "model"), "locations");
  const auto actions = string_list(field(j, "actions", "model"), "actions");
  const std::size_t initial = resolve([&](const std::string& n) { return index_in(locations, n, "location"); },
                                      field(j, "initial", "model"), "initial");
  const Json& cj = field(j, "clocks", "model");
  if (!cj.is_object()) throw ModelError("clocks: expected an object");
  std::vector<Clock> clocks;
  std::vector<std::string> clock_names;
  for (const auto& [name, spec] : cj.items()) {
    const std::string where = "clocks." + name;
    const Json& dist = field(spec, "dist", where);
    if (dist != "exp") throw ModelError(where + ".dist: only \"exp\" clocks are supported");
    clocks.push_back({name, read_rational(field(spec, "rate", where), where + ".rate")});
    clock_names.push_back(name);
  }
  auto clock_set = [&](const Json& list, const std::string& where) {
    ClockSet set(clocks.size());
    for (const auto& n : string_list(list, where)) {
      try {
        set.set(index_in(clock_names, n, "clock"));
      } catch (const ModelError& e) {
        throw ModelError(where + ": " + e.what());
      }
    }
    return set;
  };
  std::vector<ClockSet> kappa(locations.size(), ClockSet(clocks.size()));
  if (auto it = j.find("kappa"); it != j.end()) {
    if (!it->is_object()) throw ModelError("kappa: expected an object");
    for (const auto& [loc, list] : it->items()) {
      const std::size_t q = [&] {
        try {
          return index_in(locations, loc, "location");
        } catch (const ModelError& e) {
          throw ModelError("kappa: " + std::string(e.what()));
        }
      }();
      kappa[q] = clock_set(list, "kappa." + loc);
    }
  }
  const Json& ej = field(j, "edges", "model");
  if (!ej.is_array()) throw ModelError("edges: expected an array");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < ej.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    auto loc = [&](const char* f) {
      return resolve([&](const std::string& n) { return index_in(locations, n, "location"); }, field(ej[i], f, where),
                     where + "." + f);
    };
    const std::size_t action = resolve([&](const std::string& n) { return index_in(actions, n, "action"); },
                                       field(ej[i], "action", where), where + ".action");
    edges.push_back({loc("from"), action, clock_set(field(ej[i], "trigger", where), where + ".trigger"), loc("to")});
  }
  return SA(locations, std::move(clocks), actions, std::move(edges), std::move(kappa), initial);
}

Json sa_json(const SA& sa) {
  Json j;
  j["locations"] = sa.locations();
  j["initial"] = sa.locations()[sa.initial()];
  Json clocks = Json::object();
  for (const auto& c : sa.clocks()) clocks[c.name] = {{"dist", "exp"}, {"rate", rational_json(c.rate)}};
  j["clocks"] = std::move(clocks);
  j["actions"] = sa.actions();
  Json edges = Json::array();
  for (const auto& e : sa.edges()) {
    edges.push_back({{"from", sa.locations()[e.from]},
                     {"action", sa.actions()[e.action]},
                     {"trigger", clock_list(sa, e.trigger)},
                     {"to", sa.locations()[e.to]}});
  }
  j["edges"] = std::move(edges);
  Json kappa = Json::object();
  for (std::size_t q = 0; q < sa.num_locations(); ++q) kappa[sa.locations()[q]] = clock_list(sa, sa.kappa(q));
  j["kappa"] = std::move(kappa);
  return j;
}

Json expolynomial_json(const Expolynomial& e) {
  Json terms = Json::array();
  for (const auto& t : e.terms()) {
    terms.push_back({{"coef", rational_json(t.coef)}, {"power", t.power}, {"rate", rational_json(t.rate)}});
  }
  return terms;
}

Json fpa_json(const FinitePA& fpa) {
  std::vector<std::string> names;
  for (const auto& s : fpa.states) names.push_back(s.name);
  Json j;
  j["actions"] = fpa.actions;
  Json initials = Json::array();
  for (auto i : fpa.initials) initials.push_back(names[i]);
  j["initial"] = std::move(initials);
  j["bound"] = fpa.state_bound();
  Json states = Json::array();
  for (const auto& s : fpa.states) {
    Json st;
    st["name"] = s.name;
    Json actions = Json::object();
    for (const auto& [a, step] : s.steps) {
      const ActionTiming& t = s.timing.actions.at(a);
      Json dist = Json::object();
      for (const auto& [target, p] : step.targets) dist[names[target]] = rational_json(p);
      actions[fpa.actions[a]] = {{"probability", rational_json(step.probability)},
                                 {"successors", std::move(dist)},
                                 {"atom", rational_json(t.atom)},
                                 {"density", expolynomial_json(t.density)}};
    }
    st["actions"] = std::move(actions);
    st["halt"] = rational_json(s.timing.halt);
    states.push_back(std::move(st));
  }
  j["states"] = std::move(states);
  return j;
}

Json tableau_json(const FinitePA& fpa, const Verdict& v) {
  std::vector<std::string> names;
  for (const auto& s : fpa.states) names.push_back(s.name);
  Json j;
  j["verdict"] = v.summary();
  j["bisimilar"] = v.bisimilar;
  Json nodes = Json::array();
  for (std::size_t id = 0; id < v.nodes.size(); ++id) {
    const auto& n = v.nodes[id];
    Json node;
    node["id"] = id;
    node["parent"] = n.parent ? Json(*n.parent) : Json(nullptr);
    node["action"] = n.action;
    node["depth"] = n.depth;
    node["left"] = dist_json(n.left, names);
    node["right"] = dist_json(n.right, names);
    node["rule"] = to_string(n.rule);
    if (n.rule == Rule::Lin) {
      Json deps = Json::array();
      for (std::size_t k = 0; k < n.basis.size(); ++k) {
        deps.push_back({{"node", n.basis[k]}, {"coefficient", rational_json(n.coefficients[k])}});
      }
      node["dependence"] = std::move(deps);
    }
    if (n.repeat_of) node["repeat_of"] = *n.repeat_of;
    if (n.rule == Rule::Failure) node["failed_action"] = n.failed_action;
    nodes.push_back(std::move(node));
  }
  j["nodes"] = std::move(nodes);
  if (!v.bisimilar) j["failure_path"] = v.failure_path();
  return j;
}

POMDP read_pomdp(const Json& j) {
  const auto states = string_list(field(j, "states", "model"), "states");
  const auto actions = string_list(field(j, "actions", "model"), "actions");
  const Json& oj = field(j, "observations", "model");
  if (!oj.is_array()) throw ModelError("observations: expected an array of state lists");
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t o = 0; o < oj.size(); ++o) {
    const std::string where = "observations[" + std::to_string(o) + "]";
    std::vector<std::size_t> block;
    for (const auto& n : string_list(oj[o], where)) {
      try {
        block.push_back(index_in(states, n, "state"));
      } catch (const ModelError& e) {
        throw ModelError(where + ": " + e.what());
      }
    }
    blocks.push_back(std::move(block));
  }
  std::vector<std::string> obs_names;
  if (auto it = j.find("observation_names"); it != j.end()) obs_names = string_list(*it, "observation_names");
  const Json& dj = field(j, "delta", "model");
  if (!dj.is_array()) throw ModelError("delta: expected an array");
  std::vector<POMDPTransition> delta;
  for (std::size_t i = 0; i < dj.size(); ++i) {
    const std::string where = "delta[" + std::to_string(i) + "]";
    const std::size_t s = resolve([&](const std::string& n) { return index_in(states, n, "state"); },
                                  field(dj[i], "state", where), where + ".state");
    const std::size_t a = resolve([&](const std::string& n) { return index_in(actions, n, "action"); },
                                  field(dj[i], "action", where), where + ".action");
    delta.push_back({s, a, read_dist(field(dj[i], "dist", where), states, where + ".dist")});
  }
  return POMDP(states, actions, std::move(blocks), std::move(delta), std::move(obs_names));
}

}  // namespace dbisim
