#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "mbp/liouville.hpp"
#include "mbp/maximal_solver.hpp"
#include "mbp/metric_field.hpp"
#include "mbp/verify.hpp"

namespace mbp {

using Json = nlohmann::json;

/// Malformed JSON text; line and column are 1-based.
class JsonInputError : public std::runtime_error {
public:
    JsonInputError(const std::string& what, std::size_t line, std::size_t column);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

Json parse_json_text(const std::string& text);
Json read_json_file(const std::string& path);

/// Sorted keys, no whitespace, doubles with 17 significant digits. Equal
/// values always give byte-identical text.
std::string dump_json(const Json& j);
void write_text_file(const std::string& path, const std::string& text);

Json to_json(Complex z);
Complex complex_from_json(const Json& j);

/// {"points": [{"re", "im", "multiplicity"}]}
Json to_json(const CriticalSet& c);
Json to_json(const std::vector<CriticalPoint>& points);
/// Throws DomainError for missing fields, points outside the disk or
/// multiplicities below one.
CriticalSet critical_set_from_json(const Json& j);
std::vector<CriticalPoint> critical_points_from_json(const Json& j);

/// {"eta": {"re", "im"}, "zeros": [{"re", "im"}]}
Json to_json(const FiniteBlaschke& b);
FiniteBlaschke blaschke_from_json(const Json& j);

Json to_json(const HomotopyConfig& cfg);
Json to_json(const SolveReport& r);

/// CSV with header re,im,value, one row per node where `keep` is true.
std::string grid_csv(const std::vector<Complex>& nodes, const std::vector<double>& values,
                     const std::vector<char>& keep);

}  // namespace mbp
