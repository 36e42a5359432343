#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hirschlab/error.hpp"
#include "hirschlab/hrep.hpp"
#include "hirschlab/polycomp.hpp"
#include "hirschlab/simplex.hpp"

// JSON encodings of values and certificates. Rationals are always strings.

namespace hirschlab {

using json = nlohmann::ordered_json;

inline json to_json(const Rational& r) { return r.str(); }

inline json to_json(const QVector& v)
{
    json a = json::array();
    for (const auto& x : v)
        a.push_back(x.str());
    return a;
}

inline Rational rational_from_json(const json& j)
{
    if (!j.is_string())
        throw ParseError("expected a rational string in report");
    return Rational::parse(j.get<std::string>());
}

inline QVector vector_from_json(const json& j)
{
    if (!j.is_array())
        throw ParseError("expected an array of rationals in report");
    QVector v;
    v.reserve(j.size());
    for (const auto& x : j)
        v.push_back(rational_from_json(x));
    return v;
}

/// Nonzero multipliers only, keyed by inequality label.
inline json multipliers_to_json(const HPolyhedron& system, const QVector& lambda)
{
    json a = json::array();
    for (std::size_t i = 0; i < lambda.size(); ++i)
        if (!lambda[i].is_zero())
            a.push_back(json{{"label", system.label(i)}, {"value", lambda[i].str()}});
    return a;
}

inline QVector multipliers_from_json(const HPolyhedron& system, const json& j)
{
    if (!j.is_array())
        throw ParseError("expected a multiplier list in report");
    QVector lambda(system.size());
    for (const auto& entry : j) {
        auto idx = system.find(entry.at("label").get<std::string>());
        if (!idx)
            throw ParseError("multiplier for unknown inequality " + entry.at("label").get<std::string>());
        lambda[*idx] = rational_from_json(entry.at("value"));
    }
    return lambda;
}

inline json outcome_to_json(const HPolyhedron& system, const LPOutcome& o)
{
    json j{{"status", status_name(o)}};
    if (const auto* opt = std::get_if<Optimal>(&o)) {
        j["point"] = to_json(opt->point);
        j["value"] = opt->value.str();
        j["multipliers"] = multipliers_to_json(system, opt->dual);
    } else if (const auto* unb = std::get_if<Unbounded>(&o)) {
        j["point"] = to_json(unb->feasible_point);
        j["ray"] = to_json(unb->ray);
    } else {
        j["multipliers"] = multipliers_to_json(system, std::get<Infeasible>(o).farkas);
    }
    return j;
}

inline LPOutcome outcome_from_json(const HPolyhedron& system, const json& j)
{
    const auto status = j.at("status").get<std::string>();
    if (status == "optimal")
        return Optimal{vector_from_json(j.at("point")), rational_from_json(j.at("value")),
                       multipliers_from_json(system, j.at("multipliers"))};
    if (status == "unbounded")
        return Unbounded{vector_from_json(j.at("point")), vector_from_json(j.at("ray"))};
    if (status == "infeasible")
        return Infeasible{multipliers_from_json(system, j.at("multipliers"))};
    throw ParseError("unknown LP status '" + status + "'");
}

inline json implication_to_json(const HPolyhedron& system, const std::string& target, const Implication& r)
{
    json j{{"target", target}};
    if (const auto* f = std::get_if<FarkasImplication>(&r)) {
        j["kind"] = "farkas";
        j["multipliers"] = multipliers_to_json(system, f->multipliers);
        j["slack"] = f->slack.str();
    } else if (const auto* n = std::get_if<NotImplied>(&r)) {
        j["kind"] = "not-implied";
        j["witness"] = to_json(n->witness);
    } else {
        j["kind"] = "vacuous";
        j["multipliers"] = multipliers_to_json(system, std::get<VacuouslyImplied>(r).certificate.farkas);
    }
    return j;
}

inline Implication implication_from_json(const HPolyhedron& system, const json& j)
{
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "farkas")
        return FarkasImplication{multipliers_from_json(system, j.at("multipliers")), rational_from_json(j.at("slack"))};
    if (kind == "not-implied")
        return NotImplied{vector_from_json(j.at("witness"))};
    if (kind == "vacuous")
        return VacuouslyImplied{Infeasible{multipliers_from_json(system, j.at("multipliers"))}};
    throw ParseError("unknown implication kind '" + kind + "'");
}

inline json boundedness_to_json(const HPolyhedron& p, const BoundednessResult& b)
{
    json j{{"bounded", b.bounded}};
    if (b.bounded) {
        json proofs = json::array();
        for (const auto& proof : b.proofs)
            proofs.push_back(json{{"axis", proof.axis}, {"sign", proof.sign},
                                  {"multipliers", multipliers_to_json(p, proof.multipliers)}});
        j["proofs"] = std::move(proofs);
    } else {
        j["ray"] = to_json(*b.ray);
    }
    return j;
}

inline BoundednessResult boundedness_from_json(const HPolyhedron& p, const json& j)
{
    BoundednessResult b;
    b.bounded = j.at("bounded").get<bool>();
    if (b.bounded) {
        for (const auto& proof : j.at("proofs"))
            b.proofs.push_back(DirectionProof{proof.at("axis").get<std::size_t>(), proof.at("sign").get<int>(),
                                              multipliers_from_json(p, proof.at("multipliers"))});
    } else {
        b.ray = vector_from_json(j.at("ray"));
    }
    return b;
}

inline json vertex_to_json(const HPolyhedron& p, const Vertex& v)
{
    json active = json::array();
    for (std::size_t i : v.active)
        active.push_back(p.label(i));
    return json{{"point", to_json(v.point)}, {"active", std::move(active)}};
}

inline json cube_verdict_to_json(const CubeSpec& c, const CubeVerdict& v)
{
    return json{{"is_cube", v.is_cube}, {"slab_count", c.slabs.size()}, {"rank", v.rank}, {"reasons", v.reasons}};
}

}  // namespace hirschlab
