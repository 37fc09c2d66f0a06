#pragma once

// JSON form of a cut description:
// {
//   "ambient": {"g": 2, "n": 0},
//   "multiplicities": [1],
//   "sym": 1,
//   "one_handles": 0,
//   "boundary_lengths": [],
//   "components": [ {"g": 1, "slots": ["x1", "x1"]} ]
// }
// Slots name either a curve variable "x<j>" (j = 1..k) or an ambient
// boundary "L<b>" (b = 1..n). Boundary lengths accept numbers, "p/q"
// or decimal strings.

#include <json.hpp>

#include <string>

#include "wpvol/geodesic_integrals.hpp"

namespace wpvol {

namespace cut_json_detail {

inline BigRational rational_from_json(const nlohmann::json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return BigRational(j.get<long>());
    if (j.is_number_float()) {
        // exact decimal reparse keeps e.g. 0.1 as 1/10, not the binary double
        return parse_rational(j.dump());
    }
    throw std::invalid_argument("cut json: expected a rational (number or string)");
}

inline Slot slot_from_string(const std::string& s) {
    if (s.size() < 2 || (s[0] != 'x' && s[0] != 'L'))
        throw std::invalid_argument("cut json: bad slot name '" + s + "'");
    int idx = std::stoi(s.substr(1));
    if (idx < 1) throw std::invalid_argument("cut json: slot index must be >= 1 in '" + s + "'");
    return Slot{s[0] == 'x' ? Slot::Kind::curve : Slot::Kind::boundary, idx - 1};
}

}  // namespace cut_json_detail

inline CutDescription cut_from_json(const nlohmann::json& j) {
    CutDescription cut;
    cut.ambient_g = j.at("ambient").at("g").get<int>();
    cut.ambient_n = j.at("ambient").at("n").get<int>();
    for (const auto& m : j.at("multiplicities")) cut.multiplicities.push_back(m.get<int>());
    cut.sym_order = j.value("sym", 1L);
    cut.one_handle_count = j.value("one_handles", 0);
    if (j.contains("boundary_lengths"))
        for (const auto& b : j.at("boundary_lengths"))
            cut.boundary_lengths.push_back(cut_json_detail::rational_from_json(b));
    for (const auto& c : j.at("components")) {
        CutComponent comp;
        comp.g = c.at("g").get<int>();
        for (const auto& s : c.at("slots"))
            comp.slots.push_back(cut_json_detail::slot_from_string(s.get<std::string>()));
        cut.components.push_back(std::move(comp));
    }
    cut.validate();
    return cut;
}

inline CutDescription cut_from_json_text(const std::string& text) {
    return cut_from_json(nlohmann::json::parse(text));
}

inline nlohmann::json cut_to_json(const CutDescription& cut) {
    nlohmann::json j;
    j["ambient"] = {{"g", cut.ambient_g}, {"n", cut.ambient_n}};
    j["multiplicities"] = cut.multiplicities;
    j["sym"] = cut.sym_order;
    j["one_handles"] = cut.one_handle_count;
    auto lens = nlohmann::json::array();
    for (const auto& b : cut.boundary_lengths) lens.push_back(rational_str(b));
    j["boundary_lengths"] = lens;
    auto comps = nlohmann::json::array();
    for (const auto& c : cut.components) {
        nlohmann::json jc;
        jc["g"] = c.g;
        auto slots = nlohmann::json::array();
        for (const auto& s : c.slots)
            slots.push_back((s.kind == Slot::Kind::curve ? "x" : "L") + std::to_string(s.index + 1));
        jc["slots"] = slots;
        comps.push_back(std::move(jc));
    }
    j["components"] = comps;
    return j;
}

inline nlohmann::json integral_result_to_json(const IntegralResult& r, int digits = 15) {
    nlohmann::json j;
    j["exact"] = r.exact ? nlohmann::json(r.exact->str("Lambda")) : nlohmann::json(nullptr);
    j["numeric"] = r.numeric.str(digits);
    j["error_bound"] = r.error_bound.str(digits);
    j["converged"] = r.converged;
    return j;
}

}  // namespace wpvol
