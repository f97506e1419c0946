#include "finsler/io.hpp"

#include "finsler/expression.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace finsler {

namespace {

[[noreturn]] void schema(const std::string& pointer, const std::string& what) {
  throw Error(ErrorCode::SchemaError, (pointer.empty() ? "/" : pointer) + ": " + what);
}

void allow_keys(const Json& obj, const std::string& pointer, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) schema(pointer, "expected an object");
  std::set<std::string> ok(keys.begin(), keys.end());
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!ok.count(it.key())) schema(pointer + "/" + it.key(), "unknown key");
}

const Json& require(const Json& obj, const std::string& pointer, const char* key) {
  if (!obj.contains(key)) schema(pointer + "/" + key, "missing required key");
  return obj.at(key);
}

double number_at(const Json& j, const std::string& pointer) {
  if (!j.is_number()) schema(pointer, "expected a number");
  return j.get<double>();
}

Vector vector_at(const Json& j, const std::string& pointer, int n = -1) {
  if (!j.is_array()) schema(pointer, "expected an array of numbers");
  if (n >= 0 && static_cast<int>(j.size()) != n) schema(pointer, "expected " + std::to_string(n) + " entries");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = number_at(j[i], pointer + "/" + std::to_string(i));
  return v;
}

struct Ctx {
  int n = 0;
  std::string base_dir;
};

ScalarField scalar_entry(const Json& j, const std::string& pointer, const Ctx& c) {
  if (j.is_number()) return constant_field(j.get<double>());
  if (j.is_string()) {
    try {
      return expression_field(j.get<std::string>(), c.n);
    } catch (const Error& e) {
      schema(pointer, e.what());
    }
  }
  if (j.is_object()) {
    allow_keys(j, pointer, {"table"});
    const Json& t = require(j, pointer, "table");
    if (!t.is_string()) schema(pointer + "/table", "expected a file name");
    std::filesystem::path p(t.get<std::string>());
    if (p.is_relative()) p = std::filesystem::path(c.base_dir) / p;
    GridTable table = [&] {
      try {
        return GridTable::read_csv(p.string());
      } catch (const Error& e) {
        schema(pointer + "/table", e.what());
      }
    }();
    if (table.dimension() != c.n) schema(pointer + "/table", "table dimension does not match the chart");
    return table_field(std::move(table));
  }
  schema(pointer, "expected a number, an expression string or {\"table\": file}");
}

VectorField vector_entry(const Json& j, const std::string& pointer, const Ctx& c, int size) {
  if (!j.is_array() || static_cast<int>(j.size()) != size)
    schema(pointer, "expected an array of " + std::to_string(size) + " entries");
  std::vector<ScalarField> entries;
  for (std::size_t i = 0; i < j.size(); ++i) entries.push_back(scalar_entry(j[i], pointer + "/" + std::to_string(i), c));
  return vector_from_entries(std::move(entries));
}

MatrixField matrix_entry(const Json& j, const std::string& pointer, const Ctx& c, int size) {
  if (!j.is_array() || static_cast<int>(j.size()) != size)
    schema(pointer, "expected " + std::to_string(size) + " rows");
  std::vector<std::vector<ScalarField>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string pi = pointer + "/" + std::to_string(i);
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != size)
      schema(pi, "expected a row of " + std::to_string(size) + " entries");
    std::vector<ScalarField> row;
    for (std::size_t k = 0; k < j[i].size(); ++k) row.push_back(scalar_entry(j[i][k], pi + "/" + std::to_string(k), c));
    rows.push_back(std::move(row));
  }
  return matrix_from_entries(std::move(rows));
}

DerivativeMode mode_of(const Json& doc) {
  if (!doc.contains("derivatives")) return DerivativeMode::Exact;
  const Json& d = doc.at("derivatives");
  if (d == "exact") return DerivativeMode::Exact;
  if (d == "fd") return DerivativeMode::FiniteDifference;
  schema("/derivatives", "expected \"exact\" or \"fd\"");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

std::vector<double> numbers_of(const std::string& s) {
  std::vector<double> out;
  for (const auto& tok : split(s, ',')) {
    if (tok.empty()) continue;
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw Error(ErrorCode::SchemaError, "bad number '" + tok + "'");
    }
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

Json json_vector(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(json_number(v[i]));
  return a;
}

Vector parse_vector(const std::string& text) {
  const auto nums = numbers_of(text);
  if (nums.empty()) throw Error(ErrorCode::UsageError, "empty vector '" + text + "'");
  return Eigen::Map<const Vector>(nums.data(), static_cast<Eigen::Index>(nums.size()));
}

Chart parse_chart(const Json& doc, const std::string& pointer) {
  allow_keys(doc, pointer, {"box", "periodic", "region"});
  const Json& box = require(doc, pointer, "box");
  if (!box.is_array() || box.empty()) schema(pointer + "/box", "expected a list of [lo, hi] intervals");
  std::vector<Interval> iv;
  for (std::size_t i = 0; i < box.size(); ++i) {
    const Vector b = vector_at(box[i], pointer + "/box/" + std::to_string(i), 2);
    if (!(b[1] > b[0])) schema(pointer + "/box/" + std::to_string(i), "interval must have lo < hi");
    iv.push_back({b[0], b[1]});
  }
  std::vector<bool> periodic(iv.size(), false);
  if (doc.contains("periodic")) {
    const Json& p = doc.at("periodic");
    if (!p.is_array() || p.size() != iv.size()) schema(pointer + "/periodic", "expected one boolean per axis");
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (!p[i].is_boolean()) schema(pointer + "/periodic/" + std::to_string(i), "expected a boolean");
      periodic[i] = p[i].get<bool>();
    }
  }
  std::optional<Region> region;
  if (doc.contains("region")) region = parse_region(doc.at("region"), static_cast<int>(iv.size()), pointer + "/region");
  return Chart(std::move(iv), std::move(periodic), std::move(region));
}

Region parse_region(const Json& doc, int n, const std::string& pointer) {
  if (!doc.is_object()) schema(pointer, "expected a region object");
  const Json& type = require(doc, pointer, "type");
  if (!type.is_string()) schema(pointer + "/type", "expected a string");
  const std::string t = type.get<std::string>();
  auto parts = [&](const char* key) {
    const Json& ps = require(doc, pointer, key);
    if (!ps.is_array() || ps.empty()) schema(pointer + "/" + key, "expected a non-empty list of regions");
    std::vector<Region> out;
    for (std::size_t i = 0; i < ps.size(); ++i)
      out.push_back(parse_region(ps[i], n, pointer + "/" + key + "/" + std::to_string(i)));
    return out;
  };
  if (t == "everything") {
    allow_keys(doc, pointer, {"type"});
    return Region::everything();
  }
  if (t == "box") {
    allow_keys(doc, pointer, {"type", "lo", "hi"});
    return Region::box(vector_at(require(doc, pointer, "lo"), pointer + "/lo", n),
                       vector_at(require(doc, pointer, "hi"), pointer + "/hi", n));
  }
  if (t == "ball") {
    allow_keys(doc, pointer, {"type", "center", "radius"});
    return Region::ball(vector_at(require(doc, pointer, "center"), pointer + "/center", n),
                        number_at(require(doc, pointer, "radius"), pointer + "/radius"));
  }
  if (t == "halfspace") {
    allow_keys(doc, pointer, {"type", "normal", "offset"});
    return Region::halfspace(vector_at(require(doc, pointer, "normal"), pointer + "/normal", n),
                             number_at(require(doc, pointer, "offset"), pointer + "/offset"));
  }
  if (t == "union") {
    allow_keys(doc, pointer, {"type", "parts"});
    return Region::union_of(parts("parts"));
  }
  if (t == "intersection") {
    allow_keys(doc, pointer, {"type", "parts"});
    return Region::intersection_of(parts("parts"));
  }
  if (t == "difference") {
    allow_keys(doc, pointer, {"type", "a", "b"});
    return Region::difference(parse_region(require(doc, pointer, "a"), n, pointer + "/a"),
                              parse_region(require(doc, pointer, "b"), n, pointer + "/b"));
  }
  if (t == "complement") {
    allow_keys(doc, pointer, {"type", "of"});
    return Region::complement(parse_region(require(doc, pointer, "of"), n, pointer + "/of"));
  }
  if (t == "punctured") {
    allow_keys(doc, pointer, {"type", "base", "points"});
    const Json& pts = require(doc, pointer, "points");
    if (!pts.is_array()) schema(pointer + "/points", "expected a list of points");
    std::vector<Vector> points;
    for (std::size_t i = 0; i < pts.size(); ++i) points.push_back(vector_at(pts[i], pointer + "/points/" + std::to_string(i), n));
    Region base = doc.contains("base") ? parse_region(doc.at("base"), n, pointer + "/base") : Region::everything();
    return Region::punctured(std::move(base), std::move(points));
  }
  schema(pointer + "/type", "unknown region type '" + t + "'");
}

LoadedModel parse_model(const Json& doc, const std::string& base_dir) {
  if (!doc.is_object()) schema("", "model file must be a JSON object");
  const Json& fam = require(doc, "", "family");
  if (!fam.is_string()) schema("/family", "expected a string");
  const std::string f = fam.get<std::string>();
  allow_keys(doc, "", {"family", "dimension", "chart", "params", "derivatives"});
  const Chart chart = parse_chart(require(doc, "", "chart"));
  Ctx c{chart.dimension(), base_dir};
  const int n = c.n;
  if (doc.contains("dimension")) {
    const Json& d = doc.at("dimension");
    if (!d.is_number_integer() || d.get<int>() != n) schema("/dimension", "must equal the number of chart axes");
  }
  const DerivativeMode mode = mode_of(doc);
  const Json& P = require(doc, "", "params");
  const std::string pp = "/params";
  auto allow = [&](std::initializer_list<const char*> keys) { allow_keys(P, pp, keys); };
  auto M = [&](const char* key, int size) { return matrix_entry(require(P, pp, key), pp + "/" + key, c, size); };
  auto V = [&](const char* key, int size) { return vector_entry(require(P, pp, key), pp + "/" + key, c, size); };
  auto num = [&](const char* key, double fallback) {
    return P.contains(key) ? number_at(P.at(key), pp + "/" + key) : fallback;
  };
  auto time_orientation = [&]() -> Vector {
    if (P.contains("time_orientation")) return vector_at(P.at("time_orientation"), pp + "/time_orientation", n);
    Vector t = Vector::Zero(n);
    t[0] = 1.0;
    return t;
  };

  if (f == "riemannian") {
    allow({"h"});
    return MetricModel::riemannian(chart, M("h", n), mode);
  }
  if (f == "randers" || f == "matsumoto") {
    allow({"h", "beta"});
    return f == "randers" ? MetricModel::randers(chart, M("h", n), V("beta", n), mode)
                          : MetricModel::matsumoto(chart, M("h", n), V("beta", n), mode);
  }
  if (f == "zermelo") {
    allow({"g", "wind"});
    return MetricModel::zermelo(chart, M("g", n), V("wind", n), mode);
  }
  if (f == "fermat") {
    allow({"g0", "omega", "orientation"});
    Orientation o = Orientation::Forward;
    if (P.contains("orientation")) {
      const Json& oj = P.at("orientation");
      if (oj == "forward") o = Orientation::Forward;
      else if (oj == "reverse") o = Orientation::Reverse;
      else schema(pp + "/orientation", "expected \"forward\" or \"reverse\"");
    }
    return MetricModel::fermat(chart, M("g0", n), V("omega", n), o, mode);
  }
  if (f == "bogoslovsky") {
    allow({"g0", "omega", "exponent", "time_orientation"});
    return MetricModel::bogoslovsky(chart, M("g0", n), V("omega", n), num("exponent", 0.5), time_orientation(), mode);
  }
  if (f == "kostelecky") {
    allow({"g0", "a", "b", "mass", "branch", "time_orientation"});
    const double branch = num("branch", 1.0);
    if (branch != 1.0 && branch != -1.0) schema(pp + "/branch", "expected +1 or -1");
    return MetricModel::kostelecky(chart, M("g0", n), V("a", n), V("b", n), num("mass", 1.0),
                                   static_cast<int>(branch), time_orientation(), mode);
  }
  if (f == "lorentzian") {
    allow({"g", "time_orientation"});
    return MetricModel::lorentzian(chart, M("g", n), time_orientation(), mode);
  }
  if (f == "tabulated") {
    allow({"lagrangian", "margin"});
    auto bindings = coordinate_bindings(n, 0, 'x');
    const auto vb = coordinate_bindings(n, n, 'v');
    bindings.insert(bindings.end(), vb.begin(), vb.end());
    auto expr = [&](const char* key) -> LagrangianFunction {
      const Json& j = require(P, pp, key);
      if (!j.is_string()) schema(pp + "/" + key, "expected an expression in x0.. and v0..");
      std::shared_ptr<const Expression> e;
      try {
        e = std::make_shared<const Expression>(Expression::parse(j.get<std::string>(), bindings));
      } catch (const Error& err) {
        schema(pp + "/" + key, err.what());
      }
      return [e, n](const Vector& x, const Vector& v) {
        std::vector<double> args(static_cast<std::size_t>(2 * n));
        for (int i = 0; i < n; ++i) {
          args[static_cast<std::size_t>(i)] = x[i];
          args[static_cast<std::size_t>(n + i)] = v[i];
        }
        return (*e)(args);
      };
    };
    std::optional<LagrangianFunction> margin;
    if (P.contains("margin")) margin = expr("margin");
    return MetricModel::tabulated(chart, expr("lagrangian"), margin);
  }
  if (f == "stationary") {
    allow({"g0", "omega", "g", "wind"});
    if (P.contains("wind")) {
      if (P.contains("g0") || P.contains("omega")) schema(pp + "/wind", "give either g0/omega or g/wind");
      return stationary_from_zermelo(chart, M("g", n), V("wind", n), mode);
    }
    return build_stationary(chart, M("g0", n), V("omega", n), mode);
  }
  schema("/family", "unknown family '" + f + "'");
}

LoadedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::SchemaError, "cannot open model file " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, path + ": " + e.what());
  }
  const auto dir = std::filesystem::path(path).parent_path().string();
  return parse_model(doc, dir.empty() ? "." : dir);
}

MetricModel load_metric_model(const std::string& path) {
  auto m = load_model(path);
  if (auto* mm = std::get_if<MetricModel>(&m)) return *mm;
  return std::get<StationaryModel>(m).fermat;
}

StationaryModel load_stationary_model(const std::string& path) {
  auto m = load_model(path);
  if (auto* sm = std::get_if<StationaryModel>(&m)) return *sm;
  const MetricModel& mm = std::get<MetricModel>(m);
  if (const auto* p = std::get_if<FermatParams>(&mm.params())) return build_stationary(mm.chart(), p->g0, p->omega);
  throw Error(ErrorCode::UsageError, path + " does not describe a stationary spacetime");
}

GridFile parse_grid(const Json& doc, const Chart& chart) {
  allow_keys(doc, "", {"counts", "box", "stencil"});
  const Json& counts = require(doc, "", "counts");
  if (!counts.is_array() || static_cast<int>(counts.size()) != chart.dimension())
    schema("/counts", "expected one node count per chart axis");
  std::vector<int> cs;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (!counts[i].is_number_integer()) schema("/counts/" + std::to_string(i), "expected an integer");
    cs.push_back(counts[i].get<int>());
  }
  std::vector<Interval> box = chart.box;
  if (doc.contains("box")) {
    const Json& b = doc.at("box");
    if (!b.is_array() || b.size() != box.size()) schema("/box", "expected one interval per axis");
    for (std::size_t i = 0; i < b.size(); ++i) {
      const Vector iv = vector_at(b[i], "/box/" + std::to_string(i), 2);
      box[i] = {iv[0], iv[1]};
    }
  }
  GridFile g;
  try {
    g.grid = GridSpec::over_box(box, cs, chart.periodic);
  } catch (const Error& e) {
    schema("/counts", e.what());
  }
  if (doc.contains("stencil")) {
    if (!doc.at("stencil").is_number_integer() || doc.at("stencil").get<int>() < 1)
      schema("/stencil", "expected a positive integer");
    g.stencil = doc.at("stencil").get<int>();
  }
  return g;
}

GridFile load_grid(const std::string& path, const Chart& chart) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::SchemaError, "cannot open grid file " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, path + ": " + e.what());
  }
  return parse_grid(doc, chart);
}

std::string field_csv(const DistanceField& f) {
  const GridSpec& g = f.grid;
  std::ostringstream os;
  auto list = [&](auto get) {
    std::string s;
    for (int a = 0; a < g.dimension(); ++a) s += (a ? "," : "") + get(a);
    return s;
  };
  os << "# dimension=" << g.dimension()
     << ";origin=" << list([&](int a) { return format_double(g.origin[a]); })
     << ";spacing=" << list([&](int a) { return format_double(g.spacing[a]); })
     << ";counts=" << list([&](int a) { return std::to_string(g.counts[static_cast<std::size_t>(a)]); })
     << ";periodic=" << list([&](int a) { return std::string(g.periodic[static_cast<std::size_t>(a)] ? "1" : "0"); })
     << ";direction=" << to_string(f.direction) << ";stencil=" << f.stencil << "\n";
  const auto row = static_cast<std::size_t>(g.counts[0]);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    os << format_double(f.values[i]);
    os << ((i + 1) % row == 0 ? '\n' : ',');
  }
  return os.str();
}

void write_field_csv(const std::string& path, const DistanceField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::UsageError, "cannot write " + path);
  out << field_csv(field);
}

DistanceField read_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::SchemaError, "cannot open field file " + path);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw Error(ErrorCode::SchemaError, path + ": missing header");
  std::map<std::string, std::string> kv;
  for (const auto& part : split(line.substr(2), ';')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::SchemaError, path + ": bad header entry '" + part + "'");
    kv[part.substr(0, eq)] = part.substr(eq + 1);
  }
  for (const char* key : {"dimension", "origin", "spacing", "counts", "periodic", "direction", "stencil"})
    if (!kv.count(key)) throw Error(ErrorCode::SchemaError, path + ": header lacks '" + key + "'");
  DistanceField f;
  const int n = std::stoi(kv["dimension"]);
  const auto origin = numbers_of(kv["origin"]), spacing = numbers_of(kv["spacing"]);
  const auto counts = numbers_of(kv["counts"]), periodic = numbers_of(kv["periodic"]);
  if (static_cast<int>(origin.size()) != n || static_cast<int>(spacing.size()) != n ||
      static_cast<int>(counts.size()) != n || static_cast<int>(periodic.size()) != n)
    throw Error(ErrorCode::SchemaError, path + ": header lists do not match the dimension");
  f.grid.origin = Eigen::Map<const Vector>(origin.data(), n);
  f.grid.spacing = Eigen::Map<const Vector>(spacing.data(), n);
  for (int a = 0; a < n; ++a) {
    f.grid.counts.push_back(static_cast<int>(counts[static_cast<std::size_t>(a)]));
    f.grid.periodic.push_back(periodic[static_cast<std::size_t>(a)] != 0.0);
  }
  if (kv["direction"] == "fwd") f.direction = FieldDirection::Forward;
  else if (kv["direction"] == "rev") f.direction = FieldDirection::Reverse;
  else throw Error(ErrorCode::SchemaError, path + ": direction must be fwd or rev");
  f.stencil = std::stoi(kv["stencil"]);
  while (std::getline(in, line)) {
    for (const auto& tok : split(line, ',')) {
      if (tok.empty()) continue;
      try {
        f.values.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw Error(ErrorCode::SchemaError, path + ": bad value '" + tok + "'");
      }
    }
  }
  if (f.values.size() != f.grid.size())
    throw Error(ErrorCode::SchemaError, path + ": expected " + std::to_string(f.grid.size()) + " values");
  f.offsets = stencil_offsets(n, f.stencil);
  f.parent.assign(f.values.size(), kNoParent);
  f.parent_offset.assign(f.values.size(), -1);
  return f;
}

Region load_region(const std::string& path, int dimension) {
  if (std::filesystem::path(path).extension() == ".csv") {
    auto mask = std::make_shared<const DistanceField>(read_field_csv(path));
    if (mask->grid.dimension() != dimension) throw Error(ErrorCode::SchemaError, path + ": mask dimension mismatch");
    return Region([mask](const Vector& x) { return mask->values[mask->grid.nearest(x)] != 0.0; }, "mask(" + path + ")");
  }
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::SchemaError, "cannot open region file " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, path + ": " + e.what());
  }
  return parse_region(doc, dimension);
}

std::string geodesic_csv(const Geodesic& g) {
  std::ostringstream os;
  const Eigen::Index n = g.samples.empty() ? 0 : g.samples.front().x.size();
  os << "param";
  for (Eigen::Index i = 0; i < n; ++i) os << ",x" << i;
  for (Eigen::Index i = 0; i < n; ++i) os << ",v" << i;
  os << "\n";
  for (const auto& s : g.samples) {
    os << format_double(s.t);
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << format_double(s.x[i]);
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << format_double(s.v[i]);
    os << "\n";
  }
  return os.str();
}

Tolerances::Tolerances()
    : values_{{"ode_atol", 1e-9},          {"ode_rtol", 1e-9},          {"shoot_endpoint", 1e-10},
              {"unit_speed", 1e-6},        {"homogeneity", 1e-10},      {"hessian_identity", 1e-8},
              {"hessian_fd", 1e-6},        {"lift_nullity", 1e-8},      {"field_relative", 0.02},
              {"dedupe_degrees", 5.0},     {"separation_relative", 0.05},
              {"path_deviation", 1e-8}} {}

void Tolerances::override_with(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw Error(ErrorCode::UsageError, "tolerance override must be key=value");
  const std::string key = assignment.substr(0, eq);
  auto it = values_.find(key);
  if (it == values_.end()) {
    std::string known;
    for (const auto& [k, v] : values_) known += (known.empty() ? "" : ", ") + k;
    throw Error(ErrorCode::UsageError, "unknown tolerance '" + key + "' (known: " + known + ")");
  }
  const std::string val = assignment.substr(eq + 1);
  double d = 0.0;
  const auto res = std::from_chars(val.data(), val.data() + val.size(), d);
  if (res.ec != std::errc() || res.ptr != val.data() + val.size() || !(d > 0.0))
    throw Error(ErrorCode::UsageError, "tolerance '" + key + "' needs a positive number");
  it->second = d;
}

double Tolerances::operator[](const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw Error(ErrorCode::UsageError, "unknown tolerance '" + key + "'");
  return it->second;
}

}  // namespace finsler
