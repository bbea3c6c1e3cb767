#include "mixroute/instance_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mixroute/errors.hpp"

namespace mixroute {

namespace {

using json = nlohmann::json;

[[noreturn]] void parse_fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kParseError, path + ": " + what);
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) parse_fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail(path + "." + key, "missing field");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) parse_fail(path, "expected a number");
  return j.get<double>();
}

NodeId node_id(const json& j, const std::string& path) {
  if (!j.is_number_integer()) parse_fail(path, "expected an integer node id");
  return j.get<NodeId>();
}

double optional_number(const json& obj, const std::string& key, double fallback,
                       const std::string& path) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : number(*it, path + "." + key);
}

const json& array(const json& j, const std::string& path) {
  if (!j.is_array()) parse_fail(path, "expected an array");
  return j;
}

// Nested rows or a flat row-major array of n*n entries.
Matrix square_matrix(const json& j, const std::string& path) {
  array(j, path);
  const std::size_t count = j.size();
  if (count > 0 && j[0].is_array()) {
    const auto n = static_cast<Eigen::Index>(count);
    Matrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const std::string rp = path + "[" + std::to_string(r) + "]";
      const json& row = array(j[static_cast<std::size_t>(r)], rp);
      if (row.size() != count) parse_fail(rp, "row has " + std::to_string(row.size()) +
                                                  " entries, expected " + std::to_string(count));
      for (Eigen::Index c = 0; c < n; ++c)
        m(r, c) = number(row[static_cast<std::size_t>(c)],
                         rp + "[" + std::to_string(c) + "]");
    }
    return m;
  }
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(count))));
  if (static_cast<std::size_t>(n * n) != count) {
    parse_fail(path, "flat matrix has " + std::to_string(count) + " entries, not a square");
  }
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n * n; ++i)
    m(i / n, i % n) = number(j[static_cast<std::size_t>(i)], path + "[" + std::to_string(i) + "]");
  return m;
}

Orientation orientation(const json& j, const std::string& path) {
  if (!j.is_string()) parse_fail(path, "expected \"regular-heavy\" or \"smart-heavy\"");
  const auto s = j.get<std::string>();
  if (s == "regular-heavy") return Orientation::kRegularHeavy;
  if (s == "smart-heavy") return Orientation::kSmartHeavy;
  parse_fail(path, "unknown orientation '" + s + "'");
}

LinkCostParams link_cost(const json& j, const std::string& path) {
  if (!j.is_object()) parse_fail(path, "expected an object");
  if (j.contains("m") || j.contains("M") || j.contains("r")) {
    CapacityParams cap;
    cap.regular_headway_rate = number(field(j, "m", path), path + ".m");
    cap.smart_headway_rate = number(field(j, "M", path), path + ".M");
    cap.congestion_scale = number(field(j, "r", path), path + ".r");
    cap.free_flow_time = optional_number(j, "b", 0.0, path);
    return from_capacity(cap);
  }
  LinkCostParams p;
  p.free_flow_time = optional_number(j, "b", 0.0, path);
  p.congestion = number(field(j, "a", path), path + ".a");
  p.asymmetry = optional_number(j, "k", 1.0, path);
  if (auto it = j.find("orientation"); it != j.end()) p.orientation = orientation(*it, path + ".orientation");
  if (p.free_flow_time < 0.0) throw Error(ErrorCode::kValidationError, path + ".b must be >= 0");
  if (!(p.congestion > 0.0)) throw Error(ErrorCode::kValidationError, path + ".a must be > 0");
  if (!(p.asymmetry > 0.0)) throw Error(ErrorCode::kValidationError, path + ".k must be > 0");
  return p;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

Instance parse_instance(const std::string& text, const std::string& name) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParseError, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) parse_fail("$", "expected an object");

  Instance out;
  out.name = name;
  if (auto it = doc.find("name"); it != doc.end() && it->is_string()) out.name = it->get<std::string>();

  std::vector<NodeId> nodes;
  const json& jn = array(field(doc, "nodes", "$"), "$.nodes");
  for (std::size_t i = 0; i < jn.size(); ++i)
    nodes.push_back(node_id(jn[i], "$.nodes[" + std::to_string(i) + "]"));

  const bool has_matrix = doc.contains("matrix_cost");
  std::vector<std::pair<NodeId, NodeId>> ends;
  std::vector<LinkCostParams> costs;
  const json& jl = array(field(doc, "links", "$"), "$.links");
  for (std::size_t i = 0; i < jl.size(); ++i) {
    const std::string lp = "$.links[" + std::to_string(i) + "]";
    const json& link = jl[i];
    if (auto it = link.find("id"); it != link.end()) {
      if (!it->is_number_integer() || it->get<long long>() != static_cast<long long>(i + 1)) {
        throw Error(ErrorCode::kValidationError,
                    lp + ".id must equal its 1-based position " + std::to_string(i + 1));
      }
    }
    ends.emplace_back(node_id(field(link, "tail", lp), lp + ".tail"),
                      node_id(field(link, "head", lp), lp + ".head"));
    if (auto it = link.find("cost"); it != link.end()) {
      costs.push_back(link_cost(*it, lp + ".cost"));
    } else if (!has_matrix) {
      parse_fail(lp + ".cost", "missing field (required without matrix_cost)");
    }
  }

  std::vector<OdPair> ods;
  const json& jo = array(field(doc, "od_pairs", "$"), "$.od_pairs");
  for (std::size_t i = 0; i < jo.size(); ++i) {
    const std::string op = "$.od_pairs[" + std::to_string(i) + "]";
    OdPair od;
    od.origin = node_id(field(jo[i], "origin", op), op + ".origin");
    od.destination = node_id(field(jo[i], "destination", op), op + ".destination");
    od.demand_regular = optional_number(jo[i], "regular", 0.0, op);
    od.demand_smart = optional_number(jo[i], "smart", 0.0, op);
    ods.push_back(od);
  }

  try {
    out.network = Network(std::move(nodes), std::move(ends), std::move(ods));
  } catch (const Error& e) {
    throw Error(ErrorCode::kValidationError, e.what());
  }

  const auto n = static_cast<Eigen::Index>(out.network.link_count());
  if (has_matrix) {
    const json& jm = doc["matrix_cost"];
    const Matrix a = square_matrix(field(jm, "A", "$.matrix_cost"), "$.matrix_cost.A");
    Vector b = Vector::Zero(2 * n);
    if (auto it = jm.find("b"); it != jm.end()) {
      const json& jb = array(*it, "$.matrix_cost.b");
      const auto len = static_cast<Eigen::Index>(jb.size());
      if (len != n && len != 2 * n) {
        throw Error(ErrorCode::kValidationError,
                    "$.matrix_cost.b has " + std::to_string(len) + " entries, expected " +
                        std::to_string(n) + " (per link) or " + std::to_string(2 * n));
      }
      for (Eigen::Index i = 0; i < len; ++i) {
        const double v = number(jb[static_cast<std::size_t>(i)],
                                "$.matrix_cost.b[" + std::to_string(i) + "]");
        if (len == n) {
          b(2 * i) = b(2 * i + 1) = v;
        } else {
          b(i) = v;
        }
      }
    }
    if (a.rows() != 2 * n) {
      throw Error(ErrorCode::kValidationError,
                  "$.matrix_cost.A is " + std::to_string(a.rows()) + "x" +
                      std::to_string(a.rows()) + ", expected " + std::to_string(2 * n) + "x" +
                      std::to_string(2 * n));
    }
    try {
      out.cost = CostMatrix(a, b);
    } catch (const Error& e) {
      throw Error(ErrorCode::kValidationError, e.what());
    }
  } else {
    out.cost = assemble_matrix(costs);
    out.link_costs = std::move(costs);
  }

  if (auto it = doc.find("split"); it != doc.end()) {
    AuthoredSplit s;
    s.q = square_matrix(field(*it, "Q", "$.split"), "$.split.Q");
    s.p = square_matrix(field(*it, "P", "$.split"), "$.split.P");
    out.split = std::move(s);
  }
  if (auto it = doc.find("expected"); it != doc.end()) {
    for (auto [key, slot] : {std::pair{"c_eq", &out.expected.c_eq},
                             std::pair{"c_opt", &out.expected.c_opt},
                             std::pair{"poa", &out.expected.poa},
                             std::pair{"bicriteria", &out.expected.bicriteria}}) {
      if (it->contains(key)) *slot = number((*it)[key], std::string("$.expected.") + key);
    }
  }
  if (auto it = doc.find("parameters"); it != doc.end() && it->is_object()) {
    for (const auto& [key, value] : it->items())
      out.parameters[key] = number(value, "$.parameters." + key);
  }
  return out;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, path + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str(), std::filesystem::path(path).stem().string());
}

std::string write_instance(const Instance& instance) {
  json doc;
  doc["name"] = instance.name;
  doc["nodes"] = instance.network.nodes();
  json links = json::array();
  for (const Link& l : instance.network.links()) {
    json jl = {{"id", l.id}, {"tail", l.tail}, {"head", l.head}};
    if (instance.link_costs) {
      const LinkCostParams& c = (*instance.link_costs)[static_cast<std::size_t>(l.id - 1)];
      jl["cost"] = {{"b", c.free_flow_time},
                    {"a", c.congestion},
                    {"k", c.asymmetry},
                    {"orientation", to_string(c.orientation)}};
    }
    links.push_back(jl);
  }
  doc["links"] = links;
  json ods = json::array();
  for (const OdPair& od : instance.network.od_pairs()) {
    ods.push_back({{"origin", od.origin},
                   {"destination", od.destination},
                   {"regular", od.demand_regular},
                   {"smart", od.demand_smart}});
  }
  doc["od_pairs"] = ods;
  if (!instance.link_costs) {
    json b = json::array();
    for (Eigen::Index i = 0; i < instance.cost.offset().size(); i += 2)
      b.push_back(instance.cost.offset()(i));
    doc["matrix_cost"] = {{"A", matrix_json(instance.cost.coefficients())}, {"b", b}};
  }
  if (instance.split) {
    doc["split"] = {{"Q", matrix_json(instance.split->q)}, {"P", matrix_json(instance.split->p)}};
  }
  json expected = json::object();
  if (instance.expected.c_eq) expected["c_eq"] = *instance.expected.c_eq;
  if (instance.expected.c_opt) expected["c_opt"] = *instance.expected.c_opt;
  if (instance.expected.poa) expected["poa"] = *instance.expected.poa;
  if (instance.expected.bicriteria) expected["bicriteria"] = *instance.expected.bicriteria;
  if (!expected.empty()) doc["expected"] = expected;
  if (!instance.parameters.empty()) doc["parameters"] = instance.parameters;
  return doc.dump(2) + "\n";
}

}  // namespace mixroute
