#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "spanmack/biset.hpp"
#include "spanmack/cell.hpp"
#include "spanmack/config.hpp"
#include "spanmack/derivator.hpp"
#include "spanmack/group.hpp"
#include "spanmack/mackey.hpp"
#include "spanmack/span.hpp"

namespace spanmack {

using nlohmann::json;

struct MalformedInput : std::runtime_error {
    explicit MalformedInput(const std::string& m) : std::runtime_error(m) {}
};

/// Built-in groups by name; unknown names fall through to the caller.
inline Group builtin_group(const std::string& name) {
    if (name == "e" || name == "1" || name == "C1") return FiniteGroup::trivial();
    if (name.size() > 1 && name[0] == 'C' && name.find('x') == std::string::npos) {
        int n = std::atoi(name.c_str() + 1);
        if (n >= 1) return FiniteGroup::cyclic(n);
    }
    if (name.size() > 1 && name[0] == 'S') {
        int n = std::atoi(name.c_str() + 1);
        if (n >= 1 && n <= 4) return FiniteGroup::symmetric(n);
    }
    if (name.size() > 1 && name[0] == 'A') {
        int n = std::atoi(name.c_str() + 1);
        if (n == 4) return FiniteGroup::alternating(4);
    }
    if (name.size() > 1 && name[0] == 'D') {
        int n = std::atoi(name.c_str() + 1);
        if (n >= 2) return FiniteGroup::dihedral(n);
    }
    if (name == "Q8") return FiniteGroup::dicyclic(2);
    if (name.rfind("Dic", 0) == 0) {
        int n = std::atoi(name.c_str() + 3);
        if (n >= 2) return FiniteGroup::dicyclic(n);
    }
    // products like C2xC2xC3
    auto xpos = name.find('x');
    if (xpos != std::string::npos) {
        Group a = builtin_group(name.substr(0, xpos));
        Group b = builtin_group(name.substr(xpos + 1));
        if (a && b) return FiniteGroup::product(a, b);
        return nullptr;
    }
    return nullptr;
}

/// Group: {"order": n, "mul": [[...]]} or {"perm_gens": [[...]], "degree": d}
/// or a built-in name string.
inline Group parse_group(const json& j, const Config& cfg) {
    Group g;
    if (j.is_string()) {
        g = builtin_group(j.get<std::string>());
        if (!g) throw MalformedInput("unknown group name: " + j.get<std::string>());
    } else if (j.contains("mul")) {
        auto mul = j.at("mul").get<std::vector<std::vector<Elem>>>();
        if (j.contains("order") && (int)mul.size() != j.at("order").get<int>())
            throw MalformedInput("group: order does not match the table");
        g = FiniteGroup::from_table(std::move(mul));
    } else if (j.contains("perm_gens")) {
        g = FiniteGroup::from_perm_gens(j.at("perm_gens").get<std::vector<std::vector<int>>>(),
                                        j.at("degree").get<int>());
    } else {
        throw MalformedInput("group: expected \"mul\" or \"perm_gens\"");
    }
    if (g->order() > cfg.max_group_order)
        throw OrderLimitExceeded("group order " + std::to_string(g->order()) +
                                 " exceeds the configured limit " +
                                 std::to_string(cfg.max_group_order));
    return g;
}

inline json group_to_json(const Group& g) {
    return json{{"order", g->order()}, {"mul", g->table()}};
}

/// G-set: {"group": <ref>, "size": m, "act": [[...]]}
inline GSet parse_gset(const json& j, const Config& cfg) {
    Group g = parse_group(j.at("group"), cfg);
    return GSet(g, j.at("size").get<int>(), j.at("act").get<std::vector<std::vector<int>>>());
}

inline json gset_to_json(const GSet& s) {
    return json{{"group", group_to_json(s.group)}, {"size", s.size}, {"act", s.act}};
}

/// 0-cell: {"group": ..., "set": {"size": ..., "act": ...}}
inline ZeroCell parse_zerocell(const json& j, const Config& cfg) {
    Group g = parse_group(j.at("group"), cfg);
    const json& s = j.at("set");
    return ZeroCell(GSet(g, s.at("size").get<int>(),
                         s.at("act").get<std::vector<std::vector<int>>>()));
}

inline json zerocell_to_json(const ZeroCell& z) {
    return json{{"group", group_to_json(z.group())},
                {"set", json{{"size", z.points()}, {"act", z.set.act}}}};
}

/// 1-cell: {"src": <zerocell>, "dst": <zerocell>, "alpha": [...], "theta": [[...]]}
inline OneCell parse_onecell(const json& j, const Config& cfg) {
    ZeroCell src = parse_zerocell(j.at("src"), cfg);
    ZeroCell dst = parse_zerocell(j.at("dst"), cfg);
    return OneCell(std::move(src), std::move(dst), j.at("alpha").get<std::vector<int>>(),
                   j.at("theta").get<std::vector<std::vector<Elem>>>());
}

inline json onecell_to_json(const OneCell& c) {
    return json{{"src", zerocell_to_json(c.src)},
                {"dst", zerocell_to_json(c.dst)},
                {"alpha", c.alpha},
                {"theta", c.theta}};
}

/// Span: {"beta": <onecell>, "alpha": <onecell>} sharing the apex.
inline Span parse_span(const json& j, const Config& cfg) {
    return Span(parse_onecell(j.at("beta"), cfg), parse_onecell(j.at("alpha"), cfg));
}

inline json span_to_json(const Span& s) {
    return json{{"beta", onecell_to_json(s.beta)}, {"alpha", onecell_to_json(s.alpha)}};
}

/// Biset: {"left": <group>, "right": <group>, "size": n, "lact": ..., "ract": ...}
inline Biset parse_biset(const json& j, const Config& cfg) {
    return Biset(parse_group(j.at("left"), cfg), parse_group(j.at("right"), cfg),
                 j.at("size").get<int>(), j.at("lact").get<std::vector<std::vector<int>>>(),
                 j.at("ract").get<std::vector<std::vector<int>>>());
}

inline json biset_to_json(const Biset& b) {
    return json{{"left", group_to_json(b.left)},
                {"right", group_to_json(b.right)},
                {"size", b.size},
                {"lact", b.lact},
                {"ract", b.ract}};
}

inline json rational_to_json(const Rational& r, const Config& cfg) {
    if (r.is_integer()) return json(r.num());
    if (!cfg.rational_coefficients)
        throw MalformedInput("integer coefficient mode hit the non-integer " + r.str());
    return json(r.str());
}

inline Rational parse_rational(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rational(std::stoll(s));
        return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    }
    throw MalformedInput("expected a rational (integer or \"n/d\")");
}

inline json matrix_to_json(const Mat& m, const Config& cfg) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(rational_to_json(m(i, j), cfg));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Mat parse_matrix(const json& j) {
    std::size_t rows = j.size();
    std::size_t cols = rows ? j.at(0).size() : 0;
    Mat m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < cols; ++k) m(i, k) = parse_rational(j.at(i).at(k));
    return m;
}

/// Mackey presentation: universe listing, value ranks, named matrices per
/// catalogued hom. Conjugation tables are exported eagerly, so this format
/// is meant for small universes.
inline json presentation_to_json(const MackeyPresentation& M, const Config& cfg) {
    const GroupUniverse& uni = *M.universe;
    json out;
    json groups = json::array();
    for (int r = 0; r < uni.size(); ++r) groups.push_back(group_to_json(uni.rep(r)));
    out["universe"] = std::move(groups);
    out["ranks"] = M.ranks;
    json reps = json::array();
    for (int r = 0; r < uni.size(); ++r) {
        const auto& e = uni.entry(r);
        json entry;
        json subs = json::array();
        for (int si = 0; si < (int)e.subs.size(); ++si)
            subs.push_back(json{{"subgroup", e.subs[si].H},
                                {"ind", matrix_to_json(M.ind[r][si], cfg)},
                                {"res", matrix_to_json(M.res[r][si], cfg)}});
        json quots = json::array();
        for (int qi = 0; qi < (int)e.quots.size(); ++qi)
            quots.push_back(json{{"kernel", e.quots[qi].N},
                                 {"inf", matrix_to_json(M.inf[r][qi], cfg)},
                                 {"def", matrix_to_json(M.def[r][qi], cfg)}});
        json conjs = json::array();
        for (int ai = 0; ai < (int)e.automorphisms.size(); ++ai)
            conjs.push_back(json{{"map", e.automorphisms[ai].map},
                                 {"conj", matrix_to_json(M.conj_of(r, ai), cfg)}});
        entry["ind_res"] = std::move(subs);
        entry["inf_def"] = std::move(quots);
        entry["conj"] = std::move(conjs);
        reps.push_back(std::move(entry));
    }
    out["maps"] = std::move(reps);
    return out;
}

inline std::shared_ptr<MackeyPresentation> parse_presentation(const json& j, const Config& cfg) {
    std::vector<Group> gens;
    for (const auto& gj : j.at("universe")) gens.push_back(parse_group(gj, cfg));
    auto uni = GroupUniverse::closed_over(gens, cfg.max_group_order);
    if (uni->size() != (int)gens.size())
        throw MalformedInput("presentation universe is not closed under subquotients");
    auto M = std::make_shared<MackeyPresentation>();
    M->universe = uni;
    M->ranks = j.at("ranks").get<std::vector<int>>();
    int n = uni->size();
    M->ind.resize(n);
    M->res.resize(n);
    M->inf.resize(n);
    M->def.resize(n);
    auto conj_tables = std::make_shared<std::vector<std::map<std::vector<Elem>, Mat>>>(n);
    // the listed universe must match rep order; groups were parsed in the
    // given order, and closed_over sorts, so re-find each
    for (int r = 0; r < n; ++r) {
        const auto& e = uni->entry(r);
        const json& entry = j.at("maps").at(r);
        if (entry.at("ind_res").size() != e.subs.size() ||
            entry.at("inf_def").size() != e.quots.size())
            throw MalformedInput("presentation: catalog shape mismatch at rep " +
                                 std::to_string(r));
        for (int si = 0; si < (int)e.subs.size(); ++si) {
            const json& sj = entry.at("ind_res").at(si);
            if (sj.at("subgroup").get<Subgroup>() != e.subs[si].H)
                throw MalformedInput("presentation: subgroup order mismatch");
            M->ind[r].push_back(parse_matrix(sj.at("ind")));
            M->res[r].push_back(parse_matrix(sj.at("res")));
        }
        for (int qi = 0; qi < (int)e.quots.size(); ++qi) {
            const json& qj = entry.at("inf_def").at(qi);
            if (qj.at("kernel").get<Subgroup>() != e.quots[qi].N)
                throw MalformedInput("presentation: kernel order mismatch");
            M->inf[r].push_back(parse_matrix(qj.at("inf")));
            M->def[r].push_back(parse_matrix(qj.at("def")));
        }
        for (const auto& cj : entry.at("conj"))
            (*conj_tables)[r][cj.at("map").get<std::vector<Elem>>()] =
                parse_matrix(cj.at("conj"));
    }
    M->conj_provider = [conj_tables](int rep, const GroupHom& a) {
        auto it = (*conj_tables)[rep].find(a.map);
        if (it == (*conj_tables)[rep].end())
            throw MalformedInput("presentation: missing conj table");
        return it->second;
    };
    return M;
}

/// Groupoid functors for the Kan commands are specified as 1-cells; el is
/// bijective on 1-cells so nothing is lost.
inline json diagram_to_json(const Diagram& D, const ZeroCell& base) {
    return json{{"base", zerocell_to_json(base)},
                {"sizes", D.sizes},
                {"maps", D.on_morphisms}};
}

inline std::pair<Diagram, ZeroCell> parse_diagram(const json& j, const Config& cfg) {
    ZeroCell base = parse_zerocell(j.at("base"), cfg);
    Groupoid shape = el(base);
    return {Diagram(shape, j.at("sizes").get<std::vector<int>>(),
                    j.at("maps").get<std::vector<std::vector<int>>>()),
            base};
}

} // namespace spanmack
