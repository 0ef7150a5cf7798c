#include "wbp/io.hpp"

#include <fstream>
#include <sstream>

#include "wbp/error.hpp"

namespace wbp::io {

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& where, const std::string& what) {
  throw Error(ErrorCode::parse_error, origin + ": " + where + ": " + what);
}

const json& member(const json& doc, const char* key, const std::string& origin,
                   const std::string& where) {
  if (!doc.is_object()) fail(origin, where, "expected an object");
  auto it = doc.find(key);
  if (it == doc.end()) fail(origin, where, std::string("missing key \"") + key + "\"");
  return *it;
}

double number(const json& value, const std::string& origin, const std::string& where) {
  if (!value.is_number()) fail(origin, where, "expected a number");
  return value.get<double>();
}

std::vector<double> numbers(const json& value, const std::string& origin, const std::string& where) {
  if (!value.is_array()) fail(origin, where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(number(value[i], origin, where + "/" + std::to_string(i)));
  }
  return out;
}

Point point_from_json(const json& value, const MetricPair& pair, const std::string& origin,
                      const std::string& where) {
  Point x;
  try {
    if (value.is_number() && pair.kind() == PairKind::finite) {
      x = Point{value.get<double>()};
    } else {
      x = Point(numbers(value, origin, where));
    }
    pair.validate(x);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::parse_error) throw;
    fail(origin, where, e.what());
  }
  return x;
}

// Wraps domain errors raised while building a value with the file position.
template <class Build>
auto located(const std::string& origin, const std::string& where, Build&& build) {
  try {
    return build();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::parse_error) throw;
    throw Error(e.code(), origin + ": " + where + ": " + e.what());
  }
}

}  // namespace

json to_json(const Point& point) {
  return json(std::vector<double>(point.coords().begin(), point.coords().end()));
}

json to_json(const MetricPair& pair) {
  json doc;
  doc["kind"] = std::string(to_string(pair.kind()));
  if (const auto* box = pair.as_box()) {
    doc["lo"] = box->lo;
    doc["hi"] = box->hi;
  } else if (const auto* space = pair.as_finite()) {
    doc["dist"] = space->dist;
    doc["A"] = space->boundary;
  }
  return doc;
}

json to_json(const DiscreteMeasure& measure) {
  json atoms = json::array();
  for (const Atom& a : measure.atoms()) atoms.push_back({{"point", to_json(a.point)}, {"mass", a.mass}});
  return {{"pair", to_json(measure.pair())}, {"atoms", std::move(atoms)}};
}

json to_json(const PersistenceDiagram& diagram) {
  json points = json::array();
  for (const Point& x : diagram.points()) points.push_back(to_json(x));
  return {{"pair", to_json(diagram.pair())}, {"points", std::move(points)}};
}

json to_json(const TransportPlan& plan) {
  json entries = json::array();
  for (const PlanEntry& e : plan.entries()) {
    entries.push_back({{"src", to_json(e.source)}, {"dst", to_json(e.target)}, {"mass", e.mass}});
  }
  return {{"pair", to_json(plan.pair())}, {"entries", std::move(entries)}, {"p", plan.exponent()}};
}

json to_json(const DualPotentials& duals) {
  auto table = [](const std::map<Point, double>& values) {
    json out = json::array();
    for (const auto& [x, v] : values) out.push_back({{"point", to_json(x)}, {"value", v}});
    return out;
  };
  return {{"phi", table(duals.phi)}, {"psi", table(duals.psi)}};
}

MetricPair pair_from_json(const json& doc, const std::string& origin) {
  const json& kind = member(doc, "kind", origin, "/pair");
  if (!kind.is_string()) fail(origin, "/pair/kind", "expected a string");
  const std::string name = kind.get<std::string>();
  return located(origin, "/pair", [&] {
    if (name == "half_plane") return MetricPair::half_plane();
    if (name == "euclidean_box") {
      return MetricPair::euclidean_box(numbers(member(doc, "lo", origin, "/pair"), origin, "/pair/lo"),
                                       numbers(member(doc, "hi", origin, "/pair"), origin, "/pair/hi"));
    }
    if (name == "finite") {
      const json& dist = member(doc, "dist", origin, "/pair");
      if (!dist.is_array()) fail(origin, "/pair/dist", "expected an array of rows");
      std::vector<std::vector<double>> table;
      for (std::size_t i = 0; i < dist.size(); ++i) {
        table.push_back(numbers(dist[i], origin, "/pair/dist/" + std::to_string(i)));
      }
      std::vector<std::size_t> boundary;
      const json& a = member(doc, "A", origin, "/pair");
      if (!a.is_array()) fail(origin, "/pair/A", "expected an array of node indices");
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i].is_number_unsigned() && !(a[i].is_number_integer() && a[i].get<long long>() >= 0)) {
          fail(origin, "/pair/A/" + std::to_string(i), "expected a node index");
        }
        boundary.push_back(a[i].get<std::size_t>());
      }
      return MetricPair::finite(std::move(table), std::move(boundary));
    }
    fail(origin, "/pair/kind", "unknown pair kind \"" + name + "\"");
  });
}

namespace {

PairPtr embedded_pair(const json& doc, const std::filesystem::path& origin) {
  auto it = doc.find("pair");
  if (it == doc.end()) return make_pair_ptr(MetricPair::half_plane());
  if (it->is_string()) {
    return make_pair_ptr(load_pair(origin.parent_path() / it->get<std::string>()));
  }
  return make_pair_ptr(pair_from_json(*it, origin.string()));
}

}  // namespace

DiscreteMeasure measure_from_json(const json& doc, const std::filesystem::path& origin) {
  const std::string name = origin.string();
  if (!doc.is_object()) fail(name, "/", "expected an object");
  PairPtr pair = embedded_pair(doc, origin);
  const json& atoms = member(doc, "atoms", name, "/");
  if (!atoms.is_array()) fail(name, "/atoms", "expected an array");
  std::vector<Atom> parsed;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::string where = "/atoms/" + std::to_string(i);
    Point x = point_from_json(member(atoms[i], "point", name, where), *pair, name, where + "/point");
    double mass = number(member(atoms[i], "mass", name, where), name, where + "/mass");
    parsed.push_back({std::move(x), mass});
  }
  return located(name, "/atoms", [&] { return DiscreteMeasure(pair, std::move(parsed)); });
}

PersistenceDiagram diagram_from_json(const json& doc, const std::string& origin) {
  if (!doc.is_object()) fail(origin, "/", "expected an object");
  PairPtr pair = embedded_pair(doc, std::filesystem::path(origin));
  const json& points = member(doc, "points", origin, "/");
  if (!points.is_array()) fail(origin, "/points", "expected an array");
  std::vector<Point> parsed;
  for (std::size_t i = 0; i < points.size(); ++i) {
    parsed.push_back(point_from_json(points[i], *pair, origin, "/points/" + std::to_string(i)));
  }
  return located(origin, "/points", [&] { return PersistenceDiagram(pair, std::move(parsed)); });
}

TransportPlan plan_from_json(const json& doc, PairPtr pair, const std::string& origin) {
  if (!doc.is_object()) fail(origin, "/", "expected an object");
  if (auto it = doc.find("pair"); it != doc.end() && it->is_object()) {
    PairPtr declared = make_pair_ptr(pair_from_json(*it, origin));
    if (pair && !same_pair(pair, declared)) {
      throw Error(ErrorCode::pair_mismatch, origin + ": plan was built on a different metric pair");
    }
    if (!pair) pair = declared;
  }
  if (!pair) pair = make_pair_ptr(MetricPair::half_plane());
  const json& entries = member(doc, "entries", origin, "/");
  if (!entries.is_array()) fail(origin, "/entries", "expected an array");
  double p = 2.0;
  if (auto it = doc.find("p"); it != doc.end()) p = number(*it, origin, "/p");
  std::vector<PlanEntry> parsed;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string where = "/entries/" + std::to_string(i);
    Point src = point_from_json(member(entries[i], "src", origin, where), *pair, origin, where + "/src");
    Point dst = point_from_json(member(entries[i], "dst", origin, where), *pair, origin, where + "/dst");
    double mass = number(member(entries[i], "mass", origin, where), origin, where + "/mass");
    parsed.push_back({std::move(src), std::move(dst), mass});
  }
  return located(origin, "/entries", [&] { return TransportPlan(pair, std::move(parsed), p); });
}

DualPotentials duals_from_json(const json& doc, const std::string& origin) {
  DualPotentials duals;
  auto table = [&](const char* key, std::map<Point, double>& out) {
    const json& values = member(doc, key, origin, "/");
    if (!values.is_array()) fail(origin, std::string("/") + key, "expected an array");
    for (std::size_t i = 0; i < values.size(); ++i) {
      const std::string where = std::string("/") + key + "/" + std::to_string(i);
      const json& x = member(values[i], "point", origin, where);
      Point point = x.is_number() ? Point{x.get<double>()} : Point(numbers(x, origin, where + "/point"));
      out[point] = number(member(values[i], "value", origin, where), origin, where + "/value");
    }
  };
  table("phi", duals.phi);
  table("psi", duals.psi);
  return duals;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::parse_error, path.string() + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse_error,
                path.string() + ": at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::parse_error, path.string() + ": cannot write file");
  out << doc.dump(2) << '\n';
}

MetricPair load_pair(const std::filesystem::path& path) {
  return pair_from_json(read_json_file(path), path.string());
}

DiscreteMeasure load_measure(const std::filesystem::path& path) {
  return measure_from_json(read_json_file(path), path);
}

PersistenceDiagram load_diagram(const std::filesystem::path& path) {
  return diagram_from_json(read_json_file(path), path.string());
}

TransportPlan load_plan(const std::filesystem::path& path, PairPtr pair) {
  return plan_from_json(read_json_file(path), std::move(pair), path.string());
}

DualPotentials load_duals(const std::filesystem::path& path) {
  return duals_from_json(read_json_file(path), path.string());
}

}  // namespace wbp::io
