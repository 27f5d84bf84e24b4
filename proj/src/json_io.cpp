#include "mbp/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mbp {

namespace {

void dump_into(const Json& j, std::string& out) {
    switch (j.type()) {
        case Json::value_t::object: {
            out += '{';
            bool first = true;
            for (const auto& [k, v] : j.items()) {
                if (!first) {
                    out += ',';
                }
                first = false;
                out += Json(k).dump();
                out += ':';
                dump_into(v, out);
            }
            out += '}';
            break;
        }
        case Json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i > 0) {
                    out += ',';
                }
                dump_into(j[i], out);
            }
            out += ']';
            break;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) {
                out += "null";
                break;
            }
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out += buf;
            break;
        }
        default:
            out += j.dump();
    }
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw DomainError(std::string("missing field \"") + key + "\"");
    }
    return j.at(key);
}

double number(const Json& j, const char* key) {
    const Json& v = field(j, key);
    if (!v.is_number()) {
        throw DomainError(std::string("field \"") + key + "\" must be a number");
    }
    return v.get<double>();
}

}  // namespace

JsonInputError::JsonInputError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
      line_(line),
      column_(column) {}

Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        // e.byte is 1-based and points just past the offending character.
        const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        std::size_t line = 1;
        std::size_t col = 1;
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw JsonInputError("malformed JSON", line, col);
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DomainError("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str());
}

std::string dump_json(const Json& j) {
    std::string out;
    dump_into(j, out);
    return out;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DomainError("cannot write " + path);
    }
    out << text;
}

Json to_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

Complex complex_from_json(const Json& j) { return {number(j, "re"), number(j, "im")}; }

Json to_json(const std::vector<CriticalPoint>& points) {
    Json arr = Json::array();
    for (const auto& e : points) {
        arr.push_back({{"re", e.point.real()}, {"im", e.point.imag()}, {"multiplicity", e.multiplicity}});
    }
    return {{"points", arr}};
}

Json to_json(const CriticalSet& c) { return to_json(c.entries()); }

std::vector<CriticalPoint> critical_points_from_json(const Json& j) {
    const Json& pts = field(j, "points");
    if (!pts.is_array()) {
        throw DomainError("\"points\" must be an array");
    }
    std::vector<CriticalPoint> out;
    for (const auto& p : pts) {
        int mult = 1;
        if (p.is_object() && p.contains("multiplicity")) {
            const Json& m = p.at("multiplicity");
            if (!m.is_number_integer()) {
                throw DomainError("multiplicity must be an integer");
            }
            mult = m.get<int>();
        }
        out.push_back({complex_from_json(p), mult});
    }
    return out;
}

CriticalSet critical_set_from_json(const Json& j) { return CriticalSet(critical_points_from_json(j)); }

Json to_json(const FiniteBlaschke& b) {
    Json zeros = Json::array();
    for (const Complex a : b.zeros()) {
        zeros.push_back(to_json(a));
    }
    return {{"eta", to_json(b.eta())}, {"zeros", zeros}};
}

FiniteBlaschke blaschke_from_json(const Json& j) {
    const Json& zs = field(j, "zeros");
    if (!zs.is_array()) {
        throw DomainError("\"zeros\" must be an array");
    }
    std::vector<Complex> zeros;
    for (const auto& z : zs) {
        zeros.push_back(complex_from_json(z));
    }
    return FiniteBlaschke(complex_from_json(field(j, "eta")), std::move(zeros));
}

Json to_json(const HomotopyConfig& cfg) {
    return {{"steps", cfg.steps},
            {"newton_tol", cfg.newton_tol},
            {"max_newton_iters", cfg.max_newton_iters},
            {"step_halving_limit", cfg.step_halving_limit},
            {"roundtrip_tol", cfg.roundtrip_tol},
            {"merge_tol", cfg.merge_tol},
            {"path_seed", cfg.path_seed}};
}

Json to_json(const SolveReport& r) {
    Json out = to_json(r.solution);
    out["requested"] = to_json(r.requested);
    out["recovered"] = to_json(r.recovered);
    out["residual_norm"] = r.residual_norm;
    out["roundtrip_error"] = r.roundtrip_error;
    out["functional"] = r.functional_value;
    Json trace = Json::array();
    for (const auto& s : r.homotopy_trace) {
        trace.push_back({{"t", s.t}, {"residual", s.residual}, {"newton_iters", s.newton_iters}});
    }
    out["homotopy_trace"] = trace;
    return out;
}

std::string grid_csv(const std::vector<Complex>& nodes, const std::vector<double>& values,
                     const std::vector<char>& keep) {
    std::string out = "re,im,value\n";
    char buf[96];
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (!keep[k]) {
            continue;
        }
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", nodes[k].real(), nodes[k].imag(), values[k]);
        out += buf;
    }
    return out;
}

}  // namespace mbp
