// Command-line surface: exact span-category and Burnside computations over
// small groups, plus the acceptance report. JSON in, JSON out (with a text
// rendering where it helps); all randomness flows from --seed.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "spanmack/acceptance.hpp"
#include "spanmack/config.hpp"
#include "spanmack/json_io.hpp"

using namespace spanmack;

namespace {

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MalformedInput("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void emit(const json& j) { std::cout << j.dump(2) << std::endl; }

Group group_from_arg(const std::string& arg, const Config& cfg) {
    if (!arg.empty() && (arg[0] == '{' || arg[0] == '[')) return parse_group(json::parse(arg), cfg);
    if (Group g = builtin_group(arg)) {
        if (g->order() > cfg.max_group_order)
            throw OrderLimitExceeded("group order exceeds the configured limit");
        return g;
    }
    return parse_group(load_json(arg), cfg);
}

MackeyPtr presentation_from_arg(const std::string& arg, const std::string& universe_arg,
                                const Config& cfg) {
    if (arg == "omega") {
        std::vector<Group> gens;
        std::stringstream ss(universe_arg.empty() ? std::string("e,C2,C3,S3") : universe_arg);
        std::string name;
        while (std::getline(ss, name, ',')) gens.push_back(group_from_arg(name, cfg));
        return omega_presentation(GroupUniverse::closed_over(gens, cfg.max_group_order));
    }
    return parse_presentation(load_json(arg), cfg);
}

std::string mat_text(const Mat& m) {
    std::ostringstream os;
    os << m;
    return os.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact span-category, Burnside and biset computations at small group order"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    Config cfg = Config::from_env();
    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "seed for all sampling");
    app.add_option("--max-order", cfg.max_group_order,
                   "group order limit (SPANMACK_MAX_ORDER overrides)");
    bool integer_mode = false;
    app.add_flag("--integer", integer_mode, "insist on integer coefficients in output");

    // --- cell ------------------------------------------------------------
    auto* cell = app.add_subcommand("cell", "0/1/2-cell operations");
    std::string cell_file, cell_second, cell_zero;
    auto* cell_check = cell->add_subcommand("check", "validate a 1-cell and report its kind");
    cell_check->add_option("--cell", cell_file, "1-cell JSON file")->required();
    auto* cell_compose = cell->add_subcommand("compose", "compose two 1-cells (outer after inner)");
    cell_compose->add_option("--inner", cell_file)->required();
    cell_compose->add_option("--outer", cell_second)->required();
    auto* cell_pullback = cell->add_subcommand("pullback", "bipullback of two 1-cells");
    cell_pullback->add_option("--left", cell_file)->required();
    cell_pullback->add_option("--right", cell_second)->required();
    auto* cell_el = cell->add_subcommand("el", "category of elements of a 0-cell");
    cell_el->add_option("--zerocell", cell_zero)->required();

    // --- factor ----------------------------------------------------------
    auto* factor = app.add_subcommand("factor", "stabilizerwise-image factorization");
    std::string factor_file;
    auto* factor_sim = factor->add_subcommand("sim", "factor a 1-cell");
    factor_sim->add_option("--cell", factor_file)->required();

    // --- span ------------------------------------------------------------
    auto* span = app.add_subcommand("span", "span category operations");
    std::string span_first, span_second, span_group, span_subgroup;
    auto* span_compose = span->add_subcommand("compose", "compose spans (second after first)");
    span_compose->add_option("--first", span_first)->required();
    span_compose->add_option("--second", span_second)->required();
    auto* span_iso = span->add_subcommand("iso", "decide span isomorphism");
    span_iso->add_option("--first", span_first)->required();
    span_iso->add_option("--second", span_second)->required();
    auto* span_dc = span->add_subcommand("dc-check",
                                         "restriction.induction against the double cosets");
    span_dc->add_option("--group", span_group)->required();
    span_dc->add_option("--subgroup", span_subgroup)->required();

    // --- burnside ----------------------------------------------------------
    auto* burn = app.add_subcommand("burnside", "ordinary Burnside modules");
    std::string burn_group, burn_gset, burn_cell;
    auto* burn_table = burn->add_subcommand("table", "basis and multiplication table");
    burn_table->add_option("--group", burn_group)->required();
    burn_table->add_option("--gset", burn_gset);
    auto* burn_maps = burn->add_subcommand("maps", "push/pull matrices of a 1-cell");
    burn_maps->add_option("--cell", burn_cell)->required();

    // --- mackey ------------------------------------------------------------
    auto* mack = app.add_subcommand("mackey", "tabulated Mackey functors");
    std::string mack_pres = "omega", mack_universe, mack_span, mack_x = "C2", mack_window;
    auto* mack_eval = mack->add_subcommand("eval", "evaluate a span linear combination");
    mack_eval->add_option("--presentation", mack_pres, "JSON file or 'omega'");
    mack_eval->add_option("--universe", mack_universe, "comma list of groups for 'omega'");
    mack_eval->add_option("--span", mack_span)->required();
    auto* mack_defl = mack->add_subcommand("deflative", "deflativity check with witness");
    mack_defl->add_option("--presentation", mack_pres);
    mack_defl->add_option("--universe", mack_universe);
    auto* mack_tensor = mack->add_subcommand("tensor", "truncated tensor presentation");
    mack_tensor->add_option("--presentation", mack_pres);
    mack_tensor->add_option("--universe", mack_universe);
    mack_tensor->add_option("--x", mack_x, "base group (point 0-cell)");
    mack_tensor->add_option("--window", mack_window, "max_order,max_set,max_orbits");
    auto* mack_green = mack->add_subcommand("green-check", "validate the Burnside Green structure");
    mack_green->add_option("--universe", mack_universe);

    // --- biset -------------------------------------------------------------
    auto* bis = app.add_subcommand("biset", "biset category operations");
    std::string bis_first, bis_second, bis_group, bis_mackey = "omega", bis_universe;
    auto* bis_compose = bis->add_subcommand("compose", "tensor over the middle group");
    bis_compose->add_option("--first", bis_first, "V (K-H)")->required();
    bis_compose->add_option("--second", bis_second, "U (H-G)")->required();
    auto* bis_span = bis->add_subcommand("to-span", "the span of a biset");
    bis_span->add_option("--biset", bis_first)->required();
    auto* bis_db = bis->add_subcommand("double-burnside", "multiplication table of B(G,G)");
    bis_db->add_option("--group", bis_group)->required();
    auto* bis_phi = bis->add_subcommand("phi", "the biset functor of a deflative presentation");
    bis_phi->add_option("--mackey", bis_mackey, "JSON file or 'omega'");
    bis_phi->add_option("--universe", bis_universe);
    bis_phi->add_option("--biset", bis_first)->required();

    // --- deriv -------------------------------------------------------------
    auto* der = app.add_subcommand("deriv", "Kan extensions over finite groupoids");
    std::string der_functor, der_diagram, der_square;
    auto* der_kan = der->add_subcommand("kan", "left Kan extension along a functor");
    der_kan->add_option("--functor", der_functor, "1-cell JSON (the functor through el)")
        ->required();
    der_kan->add_option("--diagram", der_diagram)->required();
    auto* der_bc = der->add_subcommand("base-change", "base change over a comma square");
    der_bc->add_option("--square", der_square,
                       "JSON {\"u\": <onecell>, \"v\": <onecell>, \"diagram\": <diagram>}")
        ->required();

    // --- report ------------------------------------------------------------
    auto* rep = app.add_subcommand("report", "machine-checked property report");
    auto* rep_all = rep->add_subcommand("all", "run every acceptance criterion");
    std::string rep_out;
    rep_all->add_option("--out", rep_out, "also write the JSON report to a file");

    CLI11_PARSE(app, argc, argv);
    cfg.rational_coefficients = !integer_mode;
    cfg.seed = seed;

    try {
        cfg.validate();
        if (*cell_check) {
            OneCell c = parse_onecell(load_json(cell_file), cfg);
            json out{{"valid", true},
                     {"stab_surjective", is_stab_surjective(c)},
                     {"equivalence", is_equivalence(c).has_value()}};
            emit(out);
        } else if (*cell_compose) {
            OneCell a = parse_onecell(load_json(cell_file), cfg);
            OneCell b = parse_onecell(load_json(cell_second), cfg);
            emit(onecell_to_json(compose_onecells(b, a)));
        } else if (*cell_pullback) {
            OneCell a = parse_onecell(load_json(cell_file), cfg);
            OneCell b = parse_onecell(load_json(cell_second), cfg);
            Bipullback bp = bipullback(a, b);
            json out{{"apex", zerocell_to_json(bp.apex)},
                     {"wp_left", onecell_to_json(bp.wp_left)},
                     {"wp_right", onecell_to_json(bp.wp_right)},
                     {"kappa", bp.kappa ? json(bp.kappa->eps) : json(nullptr)}};
            emit(out);
        } else if (*cell_el) {
            ZeroCell z = parse_zerocell(load_json(cell_zero), cfg);
            Groupoid g = el(z);
            json homs = json::array();
            for (int a = 0; a < g->num_objects(); ++a)
                for (int b = 0; b < g->num_objects(); ++b) {
                    auto h = g->hom(a, b);
                    if (!h.empty())
                        homs.push_back(json{{"src", a}, {"dst", b}, {"count", h.size()}});
                }
            emit(json{{"objects", g->num_objects()},
                      {"morphisms", g->num_morphisms()},
                      {"hom_sets", homs}});
        } else if (*factor_sim) {
            OneCell c = parse_onecell(load_json(factor_file), cfg);
            SImFactorization f = sim_factorize(c);
            json out{{"sim_size", f.sim_set.size},
                     {"sim_set", gset_to_json(f.sim_set)},
                     {"upsilon", onecell_to_json(f.upsilon)},
                     {"alpha_tilde", onecell_to_json(f.alpha_tilde)}};
            emit(out);
        } else if (*span_compose) {
            Span s = parse_span(load_json(span_first), cfg);
            Span t = parse_span(load_json(span_second), cfg);
            Span c = compose_spans(t, s);
            SpanLinComb canon = SpanLinComb::from_span(c);
            json terms = json::array();
            for (auto& [co, p] : canon.terms)
                terms.push_back(json{{"coefficient", rational_to_json(co, cfg)},
                                     {"apex_order", p.L->order()},
                                     {"span", span_to_json(piece_as_span(p, canon.dom, canon.cod))}});
            emit(json{{"composite", span_to_json(c)}, {"canonical_terms", terms}});
        } else if (*span_iso) {
            Span s = parse_span(load_json(span_first), cfg);
            Span t = parse_span(load_json(span_second), cfg);
            emit(json{{"isomorphic", spans_isomorphic(s, t)}});
        } else if (*span_dc) {
            Group G = group_from_arg(span_group, cfg);
            Group H = group_from_arg(span_subgroup, cfg);
            GroupHom iota = sampling::first_injection(H, G);
            OneCell cell_i = OneCell::point_hom(iota);
            SpanLinComb composite = compose_lin(SpanLinComb::from_span(lift_R(cell_i)),
                                                SpanLinComb::from_span(lift_T(cell_i)));
            SpanLinComb expected = checks::double_coset_expected(G, iota);
            json terms = json::array();
            for (auto& [co, p] : composite.terms)
                terms.push_back(json{{"coefficient", rational_to_json(co, cfg)},
                                     {"apex_order", p.L->order()}});
            emit(json{{"terms", terms}, {"matches_double_cosets", composite == expected}});
            std::cout << "res.ind decomposes into " << composite.terms.size()
                      << " double-coset terms" << std::endl;
            if (!(composite == expected)) return 1;
        } else if (*burn_table) {
            Group G = group_from_arg(burn_group, cfg);
            ZeroCell X = burn_gset.empty() ? ZeroCell::point(G)
                                           : ZeroCell(parse_gset(load_json(burn_gset), cfg));
            auto b = burnside_basis(X, cfg.max_group_order);
            json basis = json::array();
            for (int i = 0; i < b->rank(); ++i)
                basis.push_back(json{{"stabilizer_order", b->entry(i).H.size()},
                                     {"subgroup", b->entry(i).H},
                                     {"base_point", b->entry(i).x}});
            json table = json::array();
            std::ostringstream text;
            for (int i = 0; i < b->rank(); ++i) {
                json row = json::array();
                for (int j = 0; j < b->rank(); ++j) {
                    auto prod = burnside_mul(BurnsideElement::unit_vector(b, i),
                                             BurnsideElement::unit_vector(b, j));
                    json coeffs = json::array();
                    for (auto& c : prod.coeffs) coeffs.push_back(rational_to_json(c, cfg));
                    row.push_back(std::move(coeffs));
                }
                table.push_back(std::move(row));
            }
            emit(json{{"rank", b->rank()}, {"basis", basis}, {"table", table}});
        } else if (*burn_maps) {
            OneCell a = parse_onecell(load_json(burn_cell), cfg);
            emit(json{{"push", matrix_to_json(omega_push(a), cfg)},
                      {"pull", matrix_to_json(omega_pull(a), cfg)}});
        } else if (*mack_eval) {
            MackeyPtr M = presentation_from_arg(mack_pres, mack_universe, cfg);
            Span s = parse_span(load_json(mack_span), cfg);
            Mat m = evaluate_span(*M, SpanLinComb::from_span(s));
            emit(json{{"matrix", matrix_to_json(m, cfg)}});
            std::cout << mat_text(m) << std::endl;
        } else if (*mack_defl) {
            MackeyPtr M = presentation_from_arg(mack_pres, mack_universe, cfg);
            auto d = is_deflative(*M);
            json out{{"deflative", d.deflative}};
            if (!d.deflative) out["witness"] = d.where;
            emit(out);
        } else if (*mack_tensor) {
            MackeyPtr M = presentation_from_arg(mack_pres, mack_universe, cfg);
            TruncationWindow w{cfg.window_group_order, cfg.window_set_size, cfg.window_orbits};
            if (!mack_window.empty()) {
                std::stringstream ss(mack_window);
                char comma;
                ss >> w.max_group_order >> comma >> w.max_set_size >> comma >> w.max_orbits;
            }
            ZeroCell X = ZeroCell::point(group_from_arg(mack_x, cfg));
            auto t = tensor_truncated(*M, *M, X, w);
            emit(json{{"objects", t.objects.size()},
                      {"ambient_dim", t.ambient_dim},
                      {"relation_rank", t.relation_rank},
                      {"quotient_rank", t.quotient_rank}});
        } else if (*mack_green) {
            MackeyPtr M = presentation_from_arg("omega", mack_universe, cfg);
            auto rep_list = validate_green(omega_green(M));
            emit(json{{"passed", rep_list.empty()}, {"failures", rep_list}});
            if (!rep_list.empty()) return 1;
        } else if (*bis_compose) {
            Biset V = parse_biset(load_json(bis_first), cfg);
            Biset U = parse_biset(load_json(bis_second), cfg);
            emit(biset_to_json(biset_compose(V, U)));
        } else if (*bis_span) {
            Biset U = parse_biset(load_json(bis_first), cfg);
            emit(span_to_json(span_of_biset(U)));
        } else if (*bis_db) {
            Group G = group_from_arg(bis_group, cfg);
            DoubleBurnsideBasis basis(G, G);
            json table = json::array();
            for (int i = 0; i < basis.rank(); ++i) {
                json row = json::array();
                for (int j = 0; j < basis.rank(); ++j) {
                    auto prod =
                        basis.classify(biset_compose(basis.transitive[i], basis.transitive[j]));
                    json coeffs = json::array();
                    for (auto& c : prod) coeffs.push_back(rational_to_json(c, cfg));
                    row.push_back(std::move(coeffs));
                }
                table.push_back(std::move(row));
            }
            json basis_json = json::array();
            for (int i = 0; i < basis.rank(); ++i)
                basis_json.push_back(json{{"subgroup", basis.point_basis->entry(i).H},
                                          {"points", basis.transitive[i].size}});
            emit(json{{"rank", basis.rank()}, {"basis", basis_json}, {"table", table}});
        } else if (*bis_phi) {
            MackeyPtr M = presentation_from_arg(bis_mackey, bis_universe, cfg);
            BisetFunctorTable table = phi(M);
            Biset U = parse_biset(load_json(bis_first), cfg);
            Mat m = table.apply(U);
            emit(json{{"matrix", matrix_to_json(m, cfg)}});
            std::cout << mat_text(m) << std::endl;
        } else if (*der_kan) {
            OneCell u = parse_onecell(load_json(der_functor), cfg);
            auto [D, base] = parse_diagram(load_json(der_diagram), cfg);
            if (!(base == u.src)) throw MalformedInput("diagram base must be the functor source");
            Groupoid gs = D.shape;
            Groupoid gd = el(u.dst);
            auto kan = left_kan(el1(u, gs, gd), D);
            emit(diagram_to_json(kan.extended, u.dst));
        } else if (*der_bc) {
            json sq = load_json(der_square);
            OneCell u = parse_onecell(sq.at("u"), cfg);
            OneCell v = parse_onecell(sq.at("v"), cfg);
            if (!(u.dst == v.dst)) throw MalformedInput("base-change: codomains differ");
            auto [D, base] = parse_diagram(sq.at("diagram"), cfg);
            if (!(base == u.src)) throw MalformedInput("diagram base must be u's source");
            Groupoid gu = D.shape, gv = el(v.src), gk = el(u.dst);
            auto fu = el1(u, gu, gk);
            auto fv = el1(v, gv, gk);
            auto square = comma_square(fu, fv);
            bool ok = base_change_check(fu, fv, square, D);
            emit(json{{"base_change_holds", ok},
                      {"comma_objects", square.comma->num_objects()}});
            if (!ok) return 1;
        } else if (*rep_all) {
            auto results = run_acceptance(seed, nullptr);
            std::string jtext = render_report_json(results, seed);
            std::cout << jtext;
            std::cout << render_report_text(results);
            if (!rep_out.empty()) {
                std::ofstream f(rep_out);
                f << jtext;
            }
            for (const auto& c : results)
                if (!c.passed) return 1;
        }
    } catch (const MalformedInput& e) {
        std::cerr << "malformed input: " << e.what() << std::endl;
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "malformed input: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
