#pragma once

// The unified command-line entry point.  Exit codes: 0 success or positive
// verdict, 1 negative verdict, 2 usage or input errors.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "afkit/json_io.hpp"
#include "afkit/parser.hpp"
#include "afkit/translations.hpp"

namespace afkit::cli {

inline constexpr const char* kVersion = "0.1.0";

struct Output {
    bool json = false;
    long long seed = 0;
    std::ostream* os = &std::cout;

    void emit(const std::string& text, const Json& payload) const {
        if (json) {
            Json out{{"tool", "afkit"},
                     {"version", kVersion},
                     {"seed", seed},
                     {"caps",
                      Json{{"max_ground_nodes", SearchCaps{}.max_ground_nodes},
                           {"max_types", ReductionCaps{}.max_types},
                           {"max_stars", ReductionCaps{}.max_stars}}},
                     {"result", payload}};
            *os << out.dump(2) << "\n";
        } else {
            *os << text;
        }
    }
};

namespace detail {

inline std::string word_arg(const std::string& w) {
    if (w.empty()) throw InputError("word must be non-empty");
    return w;
}

inline Tuple parse_int_list(const std::string& text) {
    Tuple out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoi(item));
    }
    return out;
}

inline int run_words_primgen(const std::string& word, const Output& out) {
    auto [gen, walk] = primitive_generator(word_arg(word));
    std::ostringstream text;
    text << "generator: " << gen << "\nlength: " << gen.size() << "\ncourse:";
    for (int v : walk.values) text << " " << v;
    text << "\n";
    out.emit(text.str(), Json{{"generator", gen}, {"length", gen.size()}, {"course", walk.values}});
    return 0;
}

inline int run_words_defects(const std::string& word, const Output& out) {
    auto d = defects(word_arg(word));
    std::ostringstream text;
    Json pairs = Json::array();
    text << "defects:";
    for (auto [i, j] : d.pairs) {
        text << " <" << i << "," << j << ">";
        pairs.push_back(Json::array({i, j}));
    }
    text << "\n";
    out.emit(text.str(), Json{{"word_length", d.word_length}, {"pairs", std::move(pairs)}});
    return 0;
}

inline int run_words_closure(int m, std::size_t cap, const std::vector<std::string>& seeds,
                             const Output& out) {
    std::set<std::string> seed_set(seeds.begin(), seeds.end());
    auto cl = lambda_closure(seed_set, m, cap);
    std::ostringstream text;
    Json words = Json::array();
    for (const auto& w : cl) {
        text << w << "\n";
        words.push_back(w);
    }
    out.emit(text.str(), Json{{"m", m}, {"size", cl.size()}, {"words", std::move(words)}});
    return 0;
}

inline int run_fml_check(const std::string& path, const Output& out) {
    auto phi = parse(load_text_file(path));
    auto rep = check_fragments(phi);
    if (!rep.index_normal) throw InputError("not index-normal: " + rep.diagnostic);
    std::ostringstream text;
    text << "in_fo2: " << rep.in_fo2 << "\nin_af: " << rep.in_af;
    if (rep.af_bracket_level) text << "\naf_bracket_level: " << *rep.af_bracket_level;
    if (rep.af_variable_count) text << "\naf_variable_count: " << *rep.af_variable_count;
    text << "\nin_gf: " << rep.in_gf << "\nin_ga: " << rep.in_ga
         << "\nuses_equality: " << rep.equality_used;
    if (!rep.in_af) text << "\ndiagnostic: " << rep.diagnostic;
    text << "\n";
    Json payload{{"in_fo2", rep.in_fo2}, {"in_af", rep.in_af},  {"in_gf", rep.in_gf},
                 {"in_ga", rep.in_ga},   {"uses_equality", rep.equality_used}};
    if (rep.af_bracket_level) payload["af_bracket_level"] = *rep.af_bracket_level;
    if (rep.af_variable_count) payload["af_variable_count"] = *rep.af_variable_count;
    if (!rep.in_af) payload["diagnostic"] = rep.diagnostic;
    out.emit(text.str(), payload);
    return rep.in_af ? 0 : 1;
}

inline int run_fml_nf(const std::string& path, const Output& out) {
    auto phi = parse(load_text_file(path));
    auto nf = to_normal_form(phi);
    Json sig = Json::object();
    for (const auto& [p, ar] : nf.sig.arity) sig[p] = ar;
    out.emit(print(nf.to_formula()) + "\n",
             Json{{"formula", print(nf.to_formula())}, {"ell", nf.ell}, {"signature", std::move(sig)}});
    return 0;
}

inline int run_fml_acl(const std::string& path, const Output& out) {
    auto phi = parse(load_text_file(path));
    auto nf = parse_normal_form(phi);
    auto cl = adjacent_closure(nf);
    out.emit(print(cl.to_formula()) + "\n",
             Json{{"formula", print(cl.to_formula())}, {"ell", cl.ell}});
    return 0;
}

inline int run_struct_eval(const std::string& spath, const std::string& fpath, const Output& out) {
    auto s = structure_from_json(load_json_file(spath));
    auto phi = parse(load_text_file(fpath));
    if (!is_sentence(phi)) throw InputError("struct eval expects a sentence");
    bool verdict = evaluate(s, phi);
    out.emit(std::string(verdict ? "true" : "false") + "\n", Json{{"holds", verdict}});
    return verdict ? 0 : 1;
}

inline int run_reduce_once(const std::string& path, bool eq_free, const Output& out) {
    auto phi = parse(load_text_file(path));
    NormalForm nf;
    try {
        nf = parse_normal_form(phi);
    } catch (const ShapeError&) {
        nf = to_normal_form(phi);
    }
    auto res = build_psi(nf, eq_free ? ReductionVariant::EqualityFree : ReductionVariant::WithEquality);
    Json reg = Json::object();
    for (const auto& [role, name] : res.registry) reg[role] = name;
    std::ostringstream text;
    text << print(res.psi.to_formula()) << "\n";
    for (const auto& [role, name] : res.registry) text << "# " << role << " -> " << name << "\n";
    out.emit(text.str(), Json{{"psi", print(res.psi.to_formula())},
                              {"ell", res.psi.ell},
                              {"registry", std::move(reg)}});
    return 0;
}

inline int run_solve(const std::string& path, int n_max, bool pipeline, const Output& out) {
    auto phi = parse(load_text_file(path));
    auto rep = decide_sat_desk(phi, n_max, pipeline);
    std::ostringstream text;
    text << (rep.verdict == SolveReport::Verdict::ModelFound ? "model found" : "no model up to cap")
         << "\n";
    if (rep.model) text << structure_to_json(*rep.model).dump(2) << "\n";
    out.emit(text.str(), report_to_json(rep));
    return rep.verdict == SolveReport::Verdict::ModelFound ? 0 : 1;
}

inline int run_translate(bool to_af, const std::string& path, const Output& out) {
    auto phi = parse(load_text_file(path));
    FormulaPtr res = to_af ? fo2_to_af(phi) : af2_to_fo2(phi);
    out.emit(print(res) + "\n", Json{{"formula", print(res)}});
    return 0;
}

inline int run_gadget(const std::string& map_text, const std::string& t_name,
                      const std::string& q_name, const Output& out) {
    Tuple course = parse_int_list(map_text);
    if (course.empty()) throw InputError("--map must list the course of values");
    int k = *std::max_element(course.begin(), course.end());
    auto phi = transitivity_formula(AdjacentFunction{course, k}, t_name, q_name);
    out.emit(print(phi) + "\n", Json{{"formula", print(phi)}});
    return 0;
}

inline int run_encode_atm(const std::string& mpath, const std::string& input, const Output& out) {
    auto m = machine_from_json(load_json_file(mpath));
    auto phi = encode_atm(m, input);
    out.emit(print(phi) + "\n", Json{{"formula", print(phi)}});
    return 0;
}

inline int run_atm(const std::string& mpath, const std::string& input, const Output& out) {
    auto m = machine_from_json(load_json_file(mpath));
    auto tree = atm_accepts(m, input);
    if (!tree) {
        out.emit("reject\n", Json{{"accepts", false}});
        return 1;
    }
    out.emit("accept\n" + tree_to_json(m, *tree).dump(2) + "\n",
             Json{{"accepts", true}, {"tree", tree_to_json(m, *tree)}});
    return 0;
}

inline int run_bisim(const std::string& apath, const std::string& bpath, const std::string& sigma_text,
                     const std::string& ta_text, const std::string& tb_text, int max_len,
                     const Output& out) {
    auto aj = load_json_file(apath);
    auto bj = load_json_file(bpath);
    Structure a = structure_from_json(aj);
    Structure b = structure_from_json(bj);
    Sigma sigma;
    {
        std::stringstream ss(sigma_text);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) sigma.insert(item);
    }
    Tuple ta = parse_int_list(ta_text), tb = parse_int_list(tb_text);
    if (max_len <= 0) {  // default: the largest sigma arity
        for (const auto& p : sigma) {
            auto it = a.relations.find(p);
            if (it != a.relations.end()) max_len = std::max(max_len, it->second.arity);
        }
        max_len = std::max<int>({max_len, (int)ta.size(), 1});
    }
    auto z = greatest_bisimulation(a, ta, b, tb, sigma, max_len);
    if (!z) {
        out.emit("not bisimilar\n", Json{{"bisimilar", false}});
        return 1;
    }
    auto rep = check_bisimulation(*z, a, b, sigma);
    if (!rep.ok) throw ConstructionError("internal: greatest bisimulation failed validation");
    out.emit("bisimilar (relation size " + std::to_string(z->pairs.size()) + ")\n",
             Json{{"bisimilar", true}, {"relation_size", z->pairs.size()}});
    return 0;
}

}  // namespace detail

inline int dispatch(const std::vector<std::string>& args, std::ostream& os = std::cout,
                    std::ostream& err = std::cerr) {
    CLI::App app{"adjacent-fragment workbench"};
    app.require_subcommand(1);
    Output out;
    out.os = &os;
    app.add_flag("--json", out.json, "machine-readable output with a reproducibility header");
    app.add_option("--seed", out.seed, "seed recorded in JSON outputs");

    std::string word, path, path2, map_text = "1,3", t_name = "T", q_name = "Q";
    std::string sigma_text, ta_text, tb_text, input;
    std::vector<std::string> seeds;
    int m = 1, n_max = 2, max_len = 0;
    std::size_t cap = 1u << 20;
    bool pipeline = false, eq_free = false;

    auto* words_cmd = app.add_subcommand("words", "word combinatorics");
    auto* primgen = words_cmd->add_subcommand("primgen", "canonical primitive generator");
    primgen->add_option("word", word)->required();
    auto* defects_cmd = words_cmd->add_subcommand("defects", "palindromic factor positions");
    defects_cmd->add_option("word", word)->required();
    auto* closure = words_cmd->add_subcommand("closure", "lambda closure of seed words");
    closure->add_option("--m", m, "word length is m+2")->required();
    closure->add_option("--cap", cap);
    closure->add_option("seeds", seeds)->required();

    auto* fml = app.add_subcommand("fml", "formula operations");
    auto* check = fml->add_subcommand("check", "fragment membership report");
    check->add_option("file", path)->required();
    auto* nf_cmd = fml->add_subcommand("nf", "normal form");
    nf_cmd->add_option("file", path)->required();
    auto* acl_cmd = fml->add_subcommand("acl", "adjacent closure of a normal form");
    acl_cmd->add_option("file", path)->required();

    auto* st = app.add_subcommand("struct", "structure operations");
    auto* eval_cmd = st->add_subcommand("eval", "evaluate a sentence in a structure");
    eval_cmd->add_option("structure", path)->required();
    eval_cmd->add_option("formula", path2)->required();

    auto* reduce = app.add_subcommand("reduce", "variable reduction");
    auto* once = reduce->add_subcommand("once", "one reduction step");
    once->add_option("file", path)->required();
    once->add_flag("--eq-free", eq_free, "use the equality-free variant");

    auto* solve = app.add_subcommand("solve", "bounded satisfiability");
    solve->add_option("file", path)->required();
    solve->add_option("--max-size", n_max)->required();
    solve->add_flag("--pipeline", pipeline, "reduce to two variables first, then elevate");

    auto* translate = app.add_subcommand("translate", "fragment translations");
    auto* to_af = translate->add_subcommand("fo2-to-af", "two-variable to adjacent");
    to_af->add_option("file", path)->required();
    auto* to_fo2 = translate->add_subcommand("af-to-fo2", "adjacent (arity <= 2) to two-variable");
    to_fo2->add_option("file", path)->required();

    auto* gadget = app.add_subcommand("gadget", "expressivity gadgets");
    auto* trans = gadget->add_subcommand("transitivity", "transitivity formula for a non-adjacent map");
    trans->add_option("--map", map_text, "course of values, comma-separated")->required();
    trans->add_option("--t", t_name);
    trans->add_option("--q", q_name);

    auto* enc = app.add_subcommand("encode-atm", "machine to guarded-adjacent sentence");
    enc->add_option("machine", path)->required();
    enc->add_option("input", input)->required();

    auto* atm = app.add_subcommand("atm", "alternating machine tools");
    auto* run = atm->add_subcommand("run", "decide acceptance and print the tree");
    run->add_option("machine", path)->required();
    run->add_option("input", input)->required();

    auto* bis = app.add_subcommand("bisim", "bounded greatest bisimulation");
    bis->add_option("a", path)->required();
    bis->add_option("b", path2)->required();
    bis->add_option("--sigma", sigma_text)->required();
    bis->add_option("--tuple-a", ta_text)->required();
    bis->add_option("--tuple-b", tb_text)->required();
    bis->add_option("--max-len", max_len, "tuple length bound; defaults to the largest sigma arity");

    std::vector<std::string> reversed_args(args.rbegin(), args.rend());
    try {
        app.parse(reversed_args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            os << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (primgen->parsed()) return detail::run_words_primgen(word, out);
        if (defects_cmd->parsed()) return detail::run_words_defects(word, out);
        if (closure->parsed()) return detail::run_words_closure(m, cap, seeds, out);
        if (check->parsed()) return detail::run_fml_check(path, out);
        if (nf_cmd->parsed()) return detail::run_fml_nf(path, out);
        if (acl_cmd->parsed()) return detail::run_fml_acl(path, out);
        if (eval_cmd->parsed()) return detail::run_struct_eval(path, path2, out);
        if (once->parsed()) return detail::run_reduce_once(path, eq_free, out);
        if (solve->parsed()) return detail::run_solve(path, n_max, pipeline, out);
        if (to_af->parsed()) return detail::run_translate(true, path, out);
        if (to_fo2->parsed()) return detail::run_translate(false, path, out);
        if (trans->parsed()) return detail::run_gadget(map_text, t_name, q_name, out);
        if (enc->parsed()) return detail::run_encode_atm(path, input, out);
        if (run->parsed()) return detail::run_atm(path, input, out);
        if (bis->parsed()) return detail::run_bisim(path, path2, sigma_text, ta_text, tb_text, max_len, out);
        err << "usage error: missing subcommand\n";
        return 2;
    } catch (const CapacityError& e) {
        err << "capacity error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

inline int dispatch_argv(int argc, char** argv, std::ostream& os = std::cout,
                         std::ostream& err = std::cerr) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return dispatch(args, os, err);
}

}  // namespace afkit::cli
