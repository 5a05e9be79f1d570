#pragma once

// JSON (de)serialization for structures, forests, machines, acceptance trees
// and solver reports.

#include <json.hpp>

#include <fstream>
#include <string>

#include "afkit/atm.hpp"
#include "afkit/bisim.hpp"
#include "afkit/solver.hpp"
#include "afkit/structures.hpp"

namespace afkit {

using Json = nlohmann::json;

inline Json structure_to_json(const Structure& s) {
    Json rels = Json::object();
    for (const auto& [p, rel] : s.relations) {
        Json tuples = Json::array();
        for (const auto& t : rel.tuples) tuples.push_back(t);
        rels[p] = Json{{"arity", rel.arity}, {"tuples", std::move(tuples)}};
    }
    Json out{{"domain_size", s.domain_size}, {"relations", std::move(rels)}};
    if (s.height) out["height"] = *s.height;
    return out;
}

inline Structure structure_from_json(const Json& j) {
    Structure s;
    try {
        s.domain_size = j.at("domain_size").get<int>();
        if (s.domain_size < 0) throw InputError("structure: negative domain");
        if (j.contains("height")) s.height = j.at("height").get<int>();
        for (const auto& [p, rel] : j.at("relations").items()) {
            int arity = rel.at("arity").get<int>();
            s.declare(p, arity);
            for (const auto& t : rel.at("tuples")) {
                Tuple tup = t.get<Tuple>();
                if (static_cast<int>(tup.size()) != arity)
                    throw InputError("structure: tuple arity mismatch in '" + p + "'");
                s.add(p, std::move(tup));
            }
        }
    } catch (const Json::exception& e) {
        throw InputError(std::string("structure JSON: ") + e.what());
    }
    if (s.height) validate_layered(s);
    return s;
}

inline AdjacentForest forest_from_json(const Json& j) {
    AdjacentForest f;
    f.s = structure_from_json(j);
    try {
        if (!j.contains("addresses")) throw InputError("forest: missing addresses");
        for (const auto& a : j.at("addresses")) f.addresses.push_back(a.get<std::vector<int>>());
    } catch (const Json::exception& e) {
        throw InputError(std::string("forest JSON: ") + e.what());
    }
    validate_forest(f);
    return f;
}

inline Json machine_to_json(const AtmSpec& m) {
    Json states = Json::array();
    auto kind_name = [](StateKind k) {
        switch (k) {
            case StateKind::Existential: return "existential";
            case StateKind::Universal: return "universal";
            case StateKind::Accept: return "accept";
            default: return "reject";
        }
    };
    for (const auto& st : m.states) states.push_back(Json{{"name", st.name}, {"kind", kind_name(st.kind)}});
    Json trans = Json::array();
    for (const auto& t : m.transitions)
        trans.push_back(Json{{"from", t.from}, {"read", t.read}, {"to", t.to}, {"write", t.write}, {"move", t.move}});
    return Json{{"states", std::move(states)}, {"alphabet", m.alphabet},     {"blank", m.blank},
                {"initial", m.initial},        {"transitions", std::move(trans)}, {"space_exponent", m.space_exponent}};
}

inline AtmSpec machine_from_json(const Json& j) {
    AtmSpec m;
    try {
        for (const auto& st : j.at("states")) {
            std::string kind = st.at("kind").get<std::string>();
            StateKind k;
            if (kind == "existential") k = StateKind::Existential;
            else if (kind == "universal") k = StateKind::Universal;
            else if (kind == "accept") k = StateKind::Accept;
            else if (kind == "reject") k = StateKind::Reject;
            else throw InputError("machine: unknown state kind '" + kind + "'");
            m.states.push_back({st.at("name").get<std::string>(), k});
        }
        m.alphabet = j.at("alphabet").get<std::vector<std::string>>();
        m.blank = j.value("blank", "_");
        m.initial = j.at("initial").get<std::string>();
        for (const auto& t : j.at("transitions"))
            m.transitions.push_back({t.at("from").get<std::string>(), t.at("read").get<std::string>(),
                                     t.at("to").get<std::string>(), t.at("write").get<std::string>(),
                                     t.at("move").get<int>()});
        m.space_exponent = j.at("space_exponent").get<int>();
    } catch (const Json::exception& e) {
        throw InputError(std::string("machine JSON: ") + e.what());
    }
    validate_machine(m);
    return m;
}

inline Json tree_to_json(const AtmSpec& m, const AcceptanceTree& tree) {
    Json nodes = Json::array();
    auto symbols = m.full_alphabet();
    for (const auto& n : tree.nodes) {
        Json tape = Json::array();
        for (int s : n.config.tape) tape.push_back(symbols[s]);
        Json children = Json::array();
        for (auto [t, c] : n.children) children.push_back(Json{{"transition", t}, {"node", c}});
        nodes.push_back(Json{{"state", m.states[n.config.state].name},
                             {"tape", std::move(tape)},
                             {"head", n.config.head},
                             {"children", std::move(children)}});
    }
    return Json{{"nodes", std::move(nodes)}};
}

inline Json report_to_json(const SolveReport& r) {
    Json out;
    switch (r.verdict) {
        case SolveReport::Verdict::ModelFound: out["verdict"] = "model_found"; break;
        case SolveReport::Verdict::NoModelUpTo: out["verdict"] = "no_model_up_to"; break;
        case SolveReport::Verdict::ReducedOnly: out["verdict"] = "reduced_only"; break;
    }
    out["n_max"] = r.n_max;
    out["pipeline"] = r.pipeline;
    out["reduction_chain"] = r.reduction_chain;
    out["wall_time_s"] = r.wall_time_s;
    out["note"] = r.note;
    if (r.model) out["model"] = structure_to_json(*r.model);
    return out;
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw InputError("malformed JSON in '" + path + "': " + e.what());
    }
    return j;
}

inline std::string load_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return text;
}

}  // namespace afkit
