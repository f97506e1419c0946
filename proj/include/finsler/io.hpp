#pragma once

#include "finsler/distance_field.hpp"
#include "finsler/geodesic.hpp"
#include "finsler/metric_model.hpp"
#include "finsler/stationary.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <variant>

namespace finsler {

using Json = nlohmann::json;

/// A model file describes either a single metric model or, with family
/// "stationary", a standard stationary spacetime.
using LoadedModel = std::variant<MetricModel, StationaryModel>;

/// {"family", "dimension"?, "chart", "params", "derivatives"?}. Unknown keys
/// are rejected; SchemaError messages start with the JSON pointer of the
/// offending value. Coefficient entries are numbers, expressions in the chart
/// coordinates or {"table": "file.csv"} (relative to `base_dir`).
LoadedModel parse_model(const Json& doc, const std::string& base_dir = ".");
LoadedModel load_model(const std::string& path);
MetricModel load_metric_model(const std::string& path);
StationaryModel load_stationary_model(const std::string& path);

Region parse_region(const Json& doc, int dimension, const std::string& pointer = "");
/// JSON predicate file, or a mask CSV in field format (nonzero = inside).
Region load_region(const std::string& path, int dimension);
Chart parse_chart(const Json& doc, const std::string& pointer = "/chart");

/// {"counts": [...]} over `chart`, optionally with "box" and "stencil".
struct GridFile {
  GridSpec grid;
  int stencil = 3;
};
GridFile parse_grid(const Json& doc, const Chart& chart);
GridFile load_grid(const std::string& path, const Chart& chart);

/// "# dimension=..;origin=..;spacing=..;counts=..;periodic=..;direction=..;stencil=.."
/// then one line per combination of the outer axes (axis 0 along the line),
/// values with 17 significant digits, "inf" for unreached nodes.
void write_field_csv(const std::string& path, const DistanceField& field);
std::string field_csv(const DistanceField& field);
/// Grid, direction, stencil and values of a field file.
DistanceField read_field_csv(const std::string& path);

std::string geodesic_csv(const Geodesic& g);

/// Shortest round-trip number, or "inf"/"-inf"/"nan" strings.
Json json_number(double v);
Json json_vector(const Vector& v);
Vector parse_vector(const std::string& text);

std::string format_double(double v);

/// Named numerical tolerances with defaults; overrides come as "key=value".
class Tolerances {
 public:
  Tolerances();
  void override_with(const std::string& assignment);
  double operator[](const std::string& key) const;
  const std::map<std::string, double>& all() const { return values_; }

 private:
  std::map<std::string, double> values_;
};

}  // namespace finsler
