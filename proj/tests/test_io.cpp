#include "finsler/finsler_core.hpp"
#include "finsler/io.hpp"
#include "finsler/suite.hpp"

#include "helpers.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>

using namespace finsler;
using namespace finsler::test;

namespace {

Json zermelo(double wx) {
  Json d = Json::parse(R"J({"family": "zermelo", "dimension": 2,
    "chart": {"box": [[-1, 1], [-1, 1]]},
    "params": {"g": [[1, 0], [0, 1]], "wind": [0, 0]}})J");
  d["params"]["wind"] = {wx, 0.0};
  return d;
}

ErrorCode code_of(const std::function<void()>& f, std::string* message = nullptr) {
  try {
    f();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::UsageError;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "finsler_io_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(ModelFile, ZermeloLoads) {
  const MetricModel m = std::get<MetricModel>(parse_model(zermelo(0.5)));
  EXPECT_NEAR(evaluate(m, {vec({0, 0}), vec({1, 0})}).F, 2.0 / 3.0, 1e-14);
}

TEST(ModelFile, StrongWindIsRejected) {
  EXPECT_EQ(code_of([] { parse_model(zermelo(1.5)); }), ErrorCode::InvariantViolation);
}

TEST(ModelFile, MissingFamily) {
  Json d = zermelo(0.2);
  d.erase("family");
  std::string msg;
  EXPECT_EQ(code_of([&] { parse_model(d); }, &msg), ErrorCode::SchemaError);
  EXPECT_NE(msg.find("family"), std::string::npos);
}

TEST(ModelFile, UnknownKeyNamesPointer) {
  Json d = zermelo(0.2);
  d["params"]["colour"] = 3;
  std::string msg;
  EXPECT_EQ(code_of([&] { parse_model(d); }, &msg), ErrorCode::SchemaError);
  EXPECT_NE(msg.find("/params"), std::string::npos) << msg;
  EXPECT_NE(msg.find("colour"), std::string::npos) << msg;
}

TEST(ModelFile, DimensionMismatch) {
  Json d = zermelo(0.2);
  d["dimension"] = 3;
  std::string msg;
  EXPECT_EQ(code_of([&] { parse_model(d); }, &msg), ErrorCode::SchemaError);
  EXPECT_NE(msg.find("/dimension"), std::string::npos);
}

TEST(ModelFile, ExpressionCoefficients) {
  const Json d = Json::parse(R"J({"family": "randers", "chart": {"box": [[-1, 1], [-1, 1]]},
    "params": {"h": [["1 + x^2", 0], [0, 1]], "beta": ["0.2*sin(y)", 0.1]}})J");
  const MetricModel m = std::get<MetricModel>(parse_model(d));
  const Vector x = vec({0.5, 0.3}), v = vec({1.0, 2.0});
  const double alpha = std::sqrt(1.25 * 1 + 4.0);
  EXPECT_NEAR(evaluate(m, {x, v}).F, alpha + 0.2 * std::sin(0.3) + 0.2, 1e-13);
}

TEST(ModelFile, TableCoefficient) {
  const auto path = scratch("conformal.csv");
  {
    std::ofstream out(path);
    out << "# -1,1,3,-1,1,3\n";
    out << "1,2,3\n1,2,3\n1,2,3\n";
  }
  Json d = Json::parse(R"J({"family": "riemannian", "chart": {"box": [[-1, 1], [-1, 1]]},
    "params": {"h": [[{"table": "conformal.csv"}, 0], [0, 1]]}})J");
  const MetricModel m = std::get<MetricModel>(parse_model(d, path.parent_path().string()));
  // bilinear: 1.5 at x = -0.5
  EXPECT_NEAR(evaluate(m, {vec({-0.5, 0.2}), vec({1, 0})}).F, std::sqrt(1.5), 1e-14);
}

TEST(ModelFile, StationaryFamily) {
  const Json d = Json::parse(R"J({"family": "stationary", "chart": {"box": [[-1, 1], [-1, 1]]},
    "params": {"g0": [[1, 0], [0, 1]], "omega": [0.3, 0]}})J");
  const StationaryModel sm = std::get<StationaryModel>(parse_model(d));
  const double expect = std::sqrt(1 + 0.09) + 0.3;
  EXPECT_NEAR(evaluate(sm.fermat, {vec({0, 0}), vec({1, 0})}).F, expect, 1e-14);
}

TEST(ModelFile, FileLoadAndParseError) {
  const auto path = scratch("model.json");
  {
    std::ofstream out(path);
    out << zermelo(0.25).dump();
  }
  EXPECT_NO_THROW(load_metric_model(path.string()));
  {
    std::ofstream out(path);
    out << "{ not json";
  }
  EXPECT_EQ(code_of([&] { load_model(path.string()); }), ErrorCode::SchemaError);
}

TEST(Regions, Composition) {
  const Json d = Json::parse(R"J({"type": "difference",
    "a": {"type": "union", "parts": [{"type": "ball", "center": [0, 0], "radius": 0.5},
                                     {"type": "box", "lo": [0.4, -0.1], "hi": [0.9, 0.1]}]},
    "b": {"type": "halfspace", "normal": [0, -1], "offset": -0.3}})J");
  const Region r = parse_region(d, 2);
  EXPECT_TRUE(r.contains(vec({0, 0})));
  EXPECT_TRUE(r.contains(vec({0.8, 0})));
  EXPECT_FALSE(r.contains(vec({0, 0.45})));
  EXPECT_FALSE(r.contains(vec({0.8, 0.5})));
}

TEST(Regions, BadType) {
  std::string msg;
  EXPECT_EQ(code_of([&] { parse_region(Json::parse(R"J({"type": "blob"})J"), 2, "/region"); }, &msg),
            ErrorCode::SchemaError);
  EXPECT_NE(msg.find("/region/type"), std::string::npos);
}

TEST(Regions, Punctured) {
  const Region r = parse_region(Json::parse(R"J({"type": "punctured", "points": [[0, 0]]})J"), 2);
  EXPECT_FALSE(r.contains(vec({0, 0})));
  EXPECT_TRUE(r.contains(vec({0.01, 0})));
}

TEST(Grid, ParseAndValidate) {
  const Chart c = Chart::cube(2, 1.0);
  const GridFile g = parse_grid(Json::parse(R"J({"counts": [11, 21], "stencil": 2})J"), c);
  EXPECT_EQ(g.grid.size(), 231u);
  EXPECT_EQ(g.stencil, 2);
  EXPECT_NEAR(g.grid.spacing[1], 0.1, 1e-15);
  EXPECT_EQ(code_of([&] { parse_grid(Json::parse(R"J({"counts": [11]})J"), c); }), ErrorCode::SchemaError);
  EXPECT_EQ(code_of([&] { parse_grid(Json::parse(R"J({"counts": [11, 11], "stencil": 0})J"), c); }),
            ErrorCode::SchemaError);
}

TEST(FieldCsv, RoundTripIsExact) {
  const MetricModel m = wind(0.3);
  const GridSpec grid = GridSpec::over_chart(m.chart(), {17, 13});
  FieldOptions o;
  o.restrict_to = Region::ball(vec({0, 0}), 0.7);
  const DistanceField f = distance_field(m, FieldSource::at(vec({0.1, 0})), grid, o);
  ASSERT_TRUE(std::any_of(f.values.begin(), f.values.end(), [](double v) { return std::isinf(v); }));
  const auto path = scratch("field.csv");
  write_field_csv(path.string(), f);
  const DistanceField g = read_field_csv(path.string());
  ASSERT_EQ(g.values.size(), f.values.size());
  for (std::size_t i = 0; i < f.values.size(); ++i) EXPECT_EQ(g.values[i], f.values[i]) << i;
  EXPECT_EQ(g.grid.counts, f.grid.counts);
  EXPECT_EQ(field_csv(g), field_csv(f));
}

TEST(FieldCsv, MaskRegion) {
  const MetricModel m = euclidean(2, 1.0);
  const GridSpec grid = GridSpec::over_chart(m.chart(), {21, 21});
  const DistanceField f = distance_field(m, FieldSource::at(vec({0, 0})), grid);
  const auto path = scratch("mask.csv");
  write_field_csv(path.string(), f);
  // nonzero is inside: everything but the source node
  const Region r = load_region(path.string(), 2);
  EXPECT_FALSE(r.contains(vec({0, 0})));
  EXPECT_TRUE(r.contains(vec({0.5, 0.5})));
}

TEST(Numbers, JsonAndText) {
  EXPECT_EQ(json_number(std::numeric_limits<double>::infinity()), Json("inf"));
  EXPECT_EQ(json_number(-std::numeric_limits<double>::infinity()), Json("-inf"));
  EXPECT_EQ(json_number(0.1).get<double>(), 0.1);
  EXPECT_EQ(std::stod(format_double(0.1 + 0.2)), 0.1 + 0.2);
  const Vector v = parse_vector("1, -2.5,3e-1");
  ASSERT_EQ(v.size(), 3);
  EXPECT_EQ(v[2], 0.3);
  EXPECT_EQ(code_of([] { parse_vector(""); }), ErrorCode::UsageError);
}

TEST(Tolerances, Overrides) {
  Tolerances t;
  EXPECT_EQ(t["ode_atol"], 1e-9);
  t.override_with("ode_atol=1e-11");
  EXPECT_EQ(t["ode_atol"], 1e-11);
  std::string msg;
  EXPECT_EQ(code_of([&] { t.override_with("bogus=1"); }, &msg), ErrorCode::UsageError);
  EXPECT_NE(msg.find("unit_speed"), std::string::npos);
  EXPECT_EQ(code_of([&] { t.override_with("ode_atol=-1"); }), ErrorCode::UsageError);
  EXPECT_EQ(code_of([&] { t.override_with("ode_atol"); }), ErrorCode::UsageError);
}

TEST(Suites, UnknownNameListsRegistered) {
  std::string msg;
  EXPECT_EQ(code_of([&] { run_suite("nope", 1); }, &msg), ErrorCode::UsageError);
  for (const auto& name : suite_names()) EXPECT_NE(msg.find(name), std::string::npos) << name;
}

TEST(Suites, ReportIsDeterministic) {
  const SuiteReport a = run_suite("homogeneity", 7), b = run_suite("homogeneity", 7);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
  EXPECT_EQ(a.failures(), 0);
  EXPECT_FALSE(a.to_json().dump().find("wall_time_s") != std::string::npos);
  EXPECT_TRUE(a.to_json(true).dump().find("wall_time_s") != std::string::npos);
}
