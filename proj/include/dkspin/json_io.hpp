#pragma once

// JSON forms of the library types. Complex numbers are always [re, im].

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dkspin/decomposition.hpp"
#include "dkspin/dynamics.hpp"
#include "dkspin/identities.hpp"
#include "dkspin/lorentz.hpp"
#include "dkspin/sectors.hpp"

namespace dk::json_io {

using Json = nlohmann::ordered_json;

/// Raised for well-formed JSON with the wrong structure.
class SchemaError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

inline Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j)
{
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw SchemaError("complex number must be [re, im], got " + j.dump());
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

template <std::size_t N>
Json to_json(const std::array<Complex, N>& v)
{
    Json out = Json::array();
    for (const auto& z : v) out.push_back(to_json(z));
    return out;
}

inline Json to_json(const Spinor4& s) { return Json::array({to_json(s.a), to_json(s.b), to_json(s.c), to_json(s.d)}); }

inline Spinor4 spinor_from_json(const Json& j)
{
    if (!j.is_array() || j.size() != 4) throw SchemaError("spinor must be an array of 4 complex numbers");
    return {complex_from_json(j[0]), complex_from_json(j[1]), complex_from_json(j[2]), complex_from_json(j[3])};
}

inline Json to_json(const TensorSet& t)
{
    Json tensor = Json::object();
    for (int s = 0; s < 6; ++s) tensor[std::string(kTensorLabels[s])] = to_json(t.tensor[s]);
    return Json{{"scalar", to_json(t.scalar)},
                {"pseudoscalar", to_json(t.pseudoscalar)},
                {"vector", to_json(t.vector)},
                {"pseudovector", to_json(t.pseudovector)},
                {"tensor", tensor}};
}

inline TensorSet tensorset_from_json(const Json& j)
{
    if (!j.is_object()) throw SchemaError("tensor set must be an object");
    TensorSet t;
    t.scalar = complex_from_json(j.at("scalar"));
    t.pseudoscalar = complex_from_json(j.at("pseudoscalar"));
    for (int a = 0; a < 4; ++a) {
        t.vector[a] = complex_from_json(j.at("vector").at(a));
        t.pseudovector[a] = complex_from_json(j.at("pseudovector").at(a));
    }
    for (int s = 0; s < 6; ++s) t.tensor[s] = complex_from_json(j.at("tensor").at(std::string(kTensorLabels[s])));
    return t;
}

inline Json component_order()
{
    Json tensor = Json::array();
    for (auto l : kTensorLabels) tensor.push_back(std::string(l));
    return Json{{"spinor", {"A", "B", "C", "D"}},
                {"vector", {"0", "1", "2", "3"}},
                {"tensor", tensor},
                {"complex", "[re, im]"}};
}

inline Json to_json(const IdentityReport& r)
{
    Json residuals = Json::array();
    for (const auto& x : r.residuals) residuals.push_back({{"index", x.index}, {"magnitude", x.magnitude}});
    return Json{{"name", r.name},
                {"verdict", r.holds ? "holds" : "fails"},
                {"max_residual", r.max_residual},
                {"tolerance", r.tolerance},
                {"scale", r.scale},
                {"residuals", residuals}};
}

inline Json to_json(const Mat2& m)
{
    return Json::array({Json::array({to_json(m(0, 0)), to_json(m(0, 1))}),
                        Json::array({to_json(m(1, 0)), to_json(m(1, 1))})});
}

inline Json to_json(const LorentzElement& g)
{
    Json lam = Json::array();
    for (int a = 0; a < 4; ++a) {
        Json row = Json::array();
        for (int b = 0; b < 4; ++b) row.push_back(g.induced()(a, b));
        lam.push_back(row);
    }
    return Json{{"sl2c", to_json(g.sl2c())}, {"induced", lam}};
}

inline Json to_json(const Quad& q)
{
    return Json::array({to_json(q.phi), to_json(q.psi), to_json(q.phi_p), to_json(q.psi_p)});
}

inline Json to_json(const std::vector<SectorResidual>& rs)
{
    Json out = Json::array();
    for (const auto& r : rs) out.push_back({{"constraint", r.label}, {"value", to_json(r.value)}, {"magnitude", std::abs(r.value)}});
    return out;
}

inline Json to_json(const EquationGroup& g)
{
    Json entries = Json::array();
    for (const auto& e : g.entries) entries.push_back({{"index", e.index}, {"value", to_json(e.value)}});
    return Json{{"name", g.name}, {"max_residual", g.max_residual}, {"entries", entries}};
}

inline Json to_json(const FieldEquationReport& r)
{
    Json out{{"system", r.system}};
    if (r.singular) {
        out["verdict"] = "rewrite singular";
        out["pseudoscalar_magnitude"] = r.pseudoscalar_magnitude;
        return out;
    }
    out["verdict"] = r.holds ? "holds" : "fails";
    out["max_residual"] = r.max_residual;
    out["tolerance"] = r.tolerance;
    Json groups = Json::array();
    for (const auto& g : r.groups) groups.push_back(to_json(g));
    out["groups"] = groups;
    if (r.system == "nonlinear") {
        out["pseudoscalar_magnitude"] = r.pseudoscalar_magnitude;
        out["fierz_residual"] = r.fierz_residual;
        out["envelope_bound"] = r.envelope_bound;
    }
    Json diag = Json::array();
    for (const auto& g : r.literal_diagnostics) diag.push_back(to_json(g));
    out["literal_diagnostics"] = diag;
    return out;
}

/// Parses text; nlohmann's parse_error message carries the byte position.
inline Json parse(const std::string& text) { return Json::parse(text); }

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Accepts {"spinors": [...]} or a bare array of spinors.
inline std::vector<Spinor4> spinors_from_json(const Json& j)
{
    const Json* list = &j;
    if (j.is_object()) {
        if (!j.contains("spinors")) throw SchemaError("expected a \"spinors\" array");
        list = &j.at("spinors");
    }
    if (!list->is_array()) throw SchemaError("expected an array of spinors");
    std::vector<Spinor4> out;
    for (const auto& s : *list) out.push_back(spinor_from_json(s));
    return out;
}

inline Json spinors_document(const std::vector<Spinor4>& spinors)
{
    Json list = Json::array();
    for (const auto& s : spinors) list.push_back(to_json(s));
    return Json{{"spinors", list}};
}

}  // namespace dk::json_io
