#include <catch2/catch_amalgamated.hpp>

#include "spanmack/green.hpp"
#include "spanmack/mackey.hpp"
#include "spanmack/tensor.hpp"
#include "test_helpers.hpp"

using namespace spanmack;
using spanmack::testing::first_injection;
using spanmack::testing::random_cell;

namespace {

UniversePtr small_universe() {
    static UniversePtr uni = GroupUniverse::closed_over(
        {FiniteGroup::trivial(), FiniteGroup::cyclic(2), FiniteGroup::cyclic(4),
         FiniteGroup::symmetric(3)});
    return uni;
}

MackeyPtr omega_small() {
    static MackeyPtr m = omega_presentation(small_universe());
    return m;
}

/// A big-functor-style presentation on the universe closed over {e, C2}:
/// values are spanned by slice classes with small apexes,
///   at e:  e1 = [pt/e], e2 = [pt/C2 -> pt/e],
///   at C2: b1 = [id], b2 = [pt/e -> pt/C2], b3 = [pt/C2, trivial twist],
///          b4 = the pulled-back class of e2 (inflation is a split
///               injection; deflation retracts it only one-sidedly).
/// def . inf != id at the quotient C2 ->> e, so this is not deflative.
std::shared_ptr<MackeyPresentation> free_style_presentation(UniversePtr uni) {
    auto M = std::make_shared<MackeyPresentation>();
    M->universe = uni;
    int n = uni->size();
    REQUIRE(n == 2);
    M->ranks = {2, 4}; // rep 0 = e, rep 1 = C2
    M->ind.resize(n);
    M->res.resize(n);
    M->inf.resize(n);
    M->def.resize(n);
    // rep e: one subgroup (itself), one quotient (trivial)
    M->ind[0] = {Mat::identity(2)};
    M->res[0] = {Mat::identity(2)};
    M->inf[0] = {Mat::identity(2)};
    M->def[0] = {Mat::identity(2)};

    // rep C2: subgroups {e} then the whole group (lexicographic);
    // quotients by {e} then by the whole group
    const auto& e1 = uni->entry(1);
    REQUIRE(e1.subs.size() == 2);
    REQUIRE(e1.subs[0].H.size() == 1);
    REQUIRE(e1.quots.size() == 2);
    REQUIRE(e1.quots[0].N.size() == 1);
    Mat ind(4, 2), res(2, 4), inf(4, 2), def(2, 4);
    ind(1, 0) = 1; // e1 -> b2
    ind(2, 1) = 1; // e2 -> b3
    res(0, 0) = 1; // b1 -> e1
    res(0, 1) = 2; // b2 -> 2 e1
    res(1, 2) = 2; // b3 -> 2 e2
    res(1, 3) = 1; // b4 -> e2
    inf(0, 0) = 1; // e1 -> b1
    inf(3, 1) = 1; // e2 -> b4
    def(1, 0) = 1; // b1 -> e2
    def(0, 1) = 1; // b2 -> e1
    def(1, 2) = 1; // b3 -> e2
    def(1, 3) = 1; // b4 -> e2
    M->ind[1] = {ind, Mat::identity(4)};
    M->res[1] = {res, Mat::identity(4)};
    M->inf[1] = {Mat::identity(4), inf};
    M->def[1] = {Mat::identity(4), def};
    std::vector<int> ranks_copy = M->ranks;
    M->conj_provider = [ranks_copy](int rep, const GroupHom&) {
        return Mat::identity(ranks_copy[rep]);
    };
    return M;
}

} // namespace

TEST_CASE("universe closure and catalogs") {
    auto uni = small_universe();
    // contains e, C2, C3, C4, C2xC2(no: not a subquotient of C4/S3? S3 has no
    // V4), S3, C6(no), ... exactly: e, C2, C3, C4, S3
    REQUIRE(uni->size() == 5);
    std::multiset<int> orders;
    for (int i = 0; i < uni->size(); ++i) orders.insert(uni->rep(i)->order());
    REQUIRE(orders == std::multiset<int>{1, 2, 3, 4, 6});
    // every subgroup and quotient resolves
    for (int i = 0; i < uni->size(); ++i) {
        for (const auto& s : uni->entry(i).subs) REQUIRE(s.rep_of >= 0);
        for (const auto& q : uni->entry(i).quots) {
            REQUIRE(q.rep_of >= 0);
            REQUIRE(q.sigma.is_surjective());
            REQUIRE(q.sigma.kernel() == q.N);
        }
    }
}

TEST_CASE("omega presentation: ranks, functoriality spot checks, deflativity") {
    auto om = omega_small();
    auto uni = small_universe();
    for (int r = 0; r < uni->size(); ++r) {
        int expected = (int)subgroup_lattice(*uni->rep(r)).class_rep.size();
        REQUIRE(om->rank_of(r) == expected);
    }
    REQUIRE(om->validate().empty());
    auto defl = is_deflative(*om);
    REQUIRE(defl.deflative);
}

TEST_CASE("evaluate_span reproduces the Burnside push/pull") {
    auto om = omega_small();
    auto uni = small_universe();
    auto c2 = uni->rep(1);
    REQUIRE(c2->order() == 2);
    auto s3 = [&] {
        for (int i = 0; i < uni->size(); ++i)
            if (uni->rep(i)->order() == 6) return uni->rep(i);
        return uni->rep(0);
    }();

    std::mt19937_64 rng(3);
    ZeroCell X(coset_gset(s3, Subgroup{0, 1}).disjoint_union(GSet::point(s3)));
    ZeroCell Y = ZeroCell::point(s3);
    for (int t = 0; t < 6; ++t) {
        OneCell a = random_cell(X, Y, rng);
        Mat viaspan_push = evaluate_span(*om, SpanLinComb::from_span(lift_T(a)));
        Mat viaspan_pull = evaluate_span(*om, SpanLinComb::from_span(lift_R(a)));
        // change of basis to the canonical Burnside bases
        auto bx = OmegaMaps::instance().basis_for(X);
        auto by = OmegaMaps::instance().basis_for(Y);
        Mat px = omega_value_to_burnside(*uni, *om, value_basis(*om, X), *bx);
        Mat py = omega_value_to_burnside(*uni, *om, value_basis(*om, Y), *by);
        REQUIRE(py * viaspan_push == omega_push(a) * px);
        REQUIRE(px * viaspan_pull == omega_pull(a) * py);
    }
}

TEST_CASE("evaluate_span: identity, functoriality, additivity, iso invariance") {
    auto om = omega_small();
    auto uni = small_universe();
    auto c2 = uni->rep(1);
    auto c4 = [&] {
        for (int i = 0; i < uni->size(); ++i)
            if (uni->rep(i)->order() == 4) return uni->rep(i);
        return uni->rep(0);
    }();
    std::mt19937_64 rng(7);
    ZeroCell X(GSet::regular(c2));
    ZeroCell Y(coset_gset(c4, Subgroup{0, 2}));
    ZeroCell Z = ZeroCell::point(c2);

    REQUIRE(evaluate_span(*om, identity_lin(X)) ==
            Mat::identity(value_basis(*om, X).total));

    for (int t = 0; t < 5; ++t) {
        Span s = Span(random_cell(ZeroCell(GSet::regular(c2)), Y, rng),
                      random_cell(ZeroCell(GSet::regular(c2)), X, rng));
        Span u = Span(random_cell(ZeroCell(GSet::regular(c4)), Z, rng),
                      random_cell(ZeroCell(GSet::regular(c4)), Y, rng));
        SpanLinComb sc = SpanLinComb::from_span(s);
        SpanLinComb uc = SpanLinComb::from_span(u);
        // matrix of the composite equals the product of matrices
        REQUIRE(evaluate_span(*om, compose_lin(uc, sc)) ==
                evaluate_span(*om, uc) * evaluate_span(*om, sc));
        // additive in the span
        REQUIRE(evaluate_span(*om, sc + sc) ==
                evaluate_span(*om, sc) + evaluate_span(*om, sc));
        // invariant under span isomorphism: compose with identity
        SpanLinComb sc2 = compose_lin(identity_lin(Y), sc);
        REQUIRE(sc == sc2);
        REQUIRE(evaluate_span(*om, sc2) == evaluate_span(*om, sc));
    }
}

TEST_CASE("res.ind over (S3, C2) matches the double-coset sum under evaluation") {
    auto om = omega_small();
    auto uni = small_universe();
    auto c2 = uni->rep(1);
    Group s3;
    for (int i = 0; i < uni->size(); ++i)
        if (uni->rep(i)->order() == 6) s3 = uni->rep(i);
    GroupHom iota = first_injection(c2, s3);
    OneCell cell = OneCell::point_hom(iota);
    SpanLinComb composite = compose_lin(SpanLinComb::from_span(lift_R(cell)),
                                        SpanLinComb::from_span(lift_T(cell)));
    Mat lhs = evaluate_span(*om, composite);
    Mat rhs = evaluate_span(*om, SpanLinComb::from_span(lift_R(cell))) *
              evaluate_span(*om, SpanLinComb::from_span(lift_T(cell)));
    REQUIRE(lhs == rhs);
    // and equals pull . push in the Burnside bases
    Mat viab = omega_pull(cell) * omega_push(cell);
    ZeroCell pt2 = ZeroCell::point(c2);
    auto b2 = OmegaMaps::instance().basis_for(pt2);
    Mat p2 = omega_value_to_burnside(*uni, *om, value_basis(*om, pt2), *b2);
    REQUIRE(p2 * lhs == viab * p2);
}

TEST_CASE("deflative self-spans evaluate to the identity for Omega") {
    auto om = omega_small();
    auto uni = small_universe();
    auto c4 = [&] {
        for (int i = 0; i < uni->size(); ++i)
            if (uni->rep(i)->order() == 4) return uni->rep(i);
        return uni->rep(0);
    }();
    std::mt19937_64 rng(13);
    ZeroCell X(GSet::regular(c4));
    ZeroCell Y(coset_gset(c4, Subgroup{0, 2}).disjoint_union(GSet::point(c4)));
    for (int t = 0; t < 6; ++t) {
        OneCell a0 = random_cell(X, Y, rng);
        auto f = sim_factorize(a0);
        // [SIm <- X -> SIm] with both legs upsilon
        Mat m = evaluate_span(*om, Span(f.upsilon, f.upsilon));
        REQUIRE(m == Mat::identity(value_basis(*om, f.upsilon.dst).total));
    }
}

TEST_CASE("non-deflative presentation is detected with a witness") {
    auto uni = GroupUniverse::closed_over({FiniteGroup::trivial(), FiniteGroup::cyclic(2)});
    auto M = free_style_presentation(uni);
    auto rep = is_deflative(*M);
    REQUIRE_FALSE(rep.deflative);
    REQUIRE(rep.witness.has_value());
    // the witness is a self-span over the C2 ->> e quotient
    REQUIRE(rep.witness->terms.size() == 1);
}

TEST_CASE("reflection: already-deflative is unchanged; free style reflects to Omega") {
    SECTION("omega reflects to itself") {
        auto om = omega_small();
        auto r = reflect_deflative(*om);
        for (int i = 0; i < om->universe->size(); ++i) {
            REQUIRE(r.reflected->rank_of(i) == om->rank_of(i));
            REQUIRE(r.projection[i] == Mat::identity(om->rank_of(i)));
        }
        REQUIRE(is_deflative(*r.reflected).deflative);
    }
    SECTION("free style at {e, C2} reflects to a deflative presentation of the right rank") {
        auto uni = GroupUniverse::closed_over({FiniteGroup::trivial(), FiniteGroup::cyclic(2)});
        auto M = free_style_presentation(uni);
        auto r = reflect_deflative(*M);
        REQUIRE(is_deflative(*r.reflected).deflative);
        auto om = omega_presentation(uni);
        // matches the Burnside ranks after reflection
        for (int i = 0; i < uni->size(); ++i)
            REQUIRE(r.reflected->rank_of(i) == om->rank_of(i));
        // idempotent
        auto r2 = reflect_deflative(*r.reflected);
        for (int i = 0; i < uni->size(); ++i)
            REQUIRE(r2.reflected->rank_of(i) == r.reflected->rank_of(i));
        // universal on samples: morphisms to a deflative target factor
        auto homs_from_M = mackey_hom_space(*M, *om);
        auto homs_from_R = mackey_hom_space(*r.reflected, *om);
        REQUIRE(homs_from_M.size() == homs_from_R.size());
    }
}

TEST_CASE("dress construction") {
    auto om = omega_small();
    auto uni = small_universe();
    auto c2 = uni->rep(1);
    SECTION("dress by the unit is the identity") {
        ZeroCell pte = ZeroCell::point(FiniteGroup::trivial());
        auto d = dress(om, pte, uni);
        for (int r = 0; r < uni->size(); ++r)
            REQUIRE(d->rank_of(r) == om->rank_of(r));
        REQUIRE(is_deflative(*d).deflative);
    }
    SECTION("dress by pt/C2 over a universe containing C2 x C2") {
        auto v4 = FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2));
        auto c2b = FiniteGroup::cyclic(2);
        auto big = GroupUniverse::closed_over(
            {FiniteGroup::trivial(), FiniteGroup::product(v4, c2b)});
        auto small2 = GroupUniverse::closed_over({FiniteGroup::trivial(), v4});
        auto om2 = omega_presentation(big);
        ZeroCell ptc2 = ZeroCell::point(small2->rep(1));
        REQUIRE(small2->rep(1)->order() == 2);
        auto d = dress(om2, ptc2, small2);
        int repe = -1, repc2 = -1, repv4 = -1;
        for (int r = 0; r < small2->size(); ++r) {
            if (small2->rep(r)->order() == 1) repe = r;
            if (small2->rep(r)->order() == 2) repc2 = r;
            if (small2->rep(r)->order() == 4) repv4 = r;
        }
        REQUIRE(repv4 >= 0);
        // value at pt/e is Omega(pt/C2): rank 2
        REQUIRE(d->rank_of(repe) == 2);
        // value at pt/C2 is Omega(pt/(C2 x C2)): rank 5
        REQUIRE(d->rank_of(repc2) == 5);
        // and at pt/V4: Omega(pt/(C2^3)): the 16 subgroup classes
        REQUIRE(d->rank_of(repv4) == 16);
        REQUIRE(is_deflative(*d).deflative);
        // products escape the small universe, so dressing Omega-over-small
        // by pt/C2 throws
        auto om_small2 = omega_presentation(small2);
        REQUIRE_THROWS_AS(dress(om_small2, ptc2, small2), UniverseExceeded);
    }
}

TEST_CASE("green structure of Omega validates; perturbations fail") {
    auto om = omega_small();
    GreenStructure g = omega_green(om);
    REQUIRE(validate_green(g).empty());

    SECTION("doubled unit fails the unit law") {
        GreenStructure bad = g;
        for (auto& u : bad.unit)
            for (auto& c : u) c *= Rational(2);
        auto report = validate_green(bad);
        bool unit_fail = false;
        for (auto& s : report)
            if (s.find("unit") != std::string::npos) unit_fail = true;
        REQUIRE(unit_fail);
    }
    SECTION("twisted multiplication fails a compatibility sample") {
        GreenStructure bad = g;
        // at the C2 rep: swap the multiplication action of the two basis
        // classes; keeps commutativity but breaks unit/Frobenius
        int repc2 = -1;
        for (int r = 0; r < om->universe->size(); ++r)
            if (om->universe->rep(r)->order() == 2) repc2 = r;
        std::swap(bad.mult[repc2][0], bad.mult[repc2][1]);
        REQUIRE_FALSE(validate_green(bad).empty());
    }
}

TEST_CASE("module actions: canonical accepted, perturbed rejected") {
    auto om = omega_small();
    ModuleAction act = unique_action(*om);
    REQUIRE(validate_module_action(*om, act).empty());

    // Omega acting on itself is the ring multiplication
    GreenStructure g = omega_green(om);
    for (int r = 0; r < om->universe->size(); ++r)
        for (std::size_t k = 0; k < act.act[r].size(); ++k)
            REQUIRE(act.act[r][k] == g.mult[r][k]);

    // the stated matrix: [C2/e] acting on Omega(pt/C2)
    int repc2 = -1;
    for (int r = 0; r < om->universe->size(); ++r)
        if (om->universe->rep(r)->order() == 2) repc2 = r;
    const Mat& m = act.act[repc2][1];
    // [C2/C2] -> [C2/e], [C2/e] -> 2 [C2/e]
    REQUIRE(m(0, 0) == Rational(0));
    REQUIRE(m(1, 0) == Rational(1));
    REQUIRE(m(0, 1) == Rational(0));
    REQUIRE(m(1, 1) == Rational(2));

    // perturbations are rejected
    for (int trial = 0; trial < 5; ++trial) {
        ModuleAction bad = act;
        int r = repc2;
        std::size_t k = trial % bad.act[r].size();
        bad.act[r][k](0, 0) += Rational(trial + 1);
        REQUIRE_FALSE(validate_module_action(*om, bad).empty());
    }
}

TEST_CASE("truncated tensor: single-object window, collapse at pt/e, monotonicity") {
    auto uni = GroupUniverse::closed_over({FiniteGroup::trivial(), FiniteGroup::cyclic(2)});
    auto om = omega_presentation(uni);
    ZeroCell pte = ZeroCell::point(FiniteGroup::trivial());

    SECTION("window with only the identity object leaves the plain tensor") {
        TruncationWindow w{1, 1, 1};
        auto t = tensor_truncated(*om, *om, pte, w);
        REQUIRE(t.objects.size() == 1);
        REQUIRE(t.ambient_dim == 1);
        REQUIRE(t.quotient_rank == 1);
    }
    SECTION("window {e; sets <= 2} collapses onto rank 1") {
        TruncationWindow w{1, 2, 2};
        auto t = tensor_truncated(*om, *om, pte, w);
        // objects: 1 point and 2 points over the trivial group
        REQUIRE(t.objects.size() == 2);
        REQUIRE(t.ambient_dim == 1 + 4);
        REQUIRE(t.quotient_rank == 1);
    }
    SECTION("enlarging the window does not grow the quotient seen from a fixed summand") {
        TruncationWindow w1{1, 2, 2}, w2{2, 2, 2};
        auto t1 = tensor_truncated(*om, *om, pte, w1);
        auto t2 = tensor_truncated(*om, *om, pte, w2);
        // the identity summand projects to rank <= its w1 image
        // (relations only grow)
        Mat p1(t1.projection.rows(), 1), p2(t2.projection.rows(), 1);
        for (std::size_t i = 0; i < t1.projection.rows(); ++i) p1(i, 0) = t1.projection(i, 0);
        for (std::size_t i = 0; i < t2.projection.rows(); ++i) p2(i, 0) = t2.projection(i, 0);
        REQUIRE(p2.rank() <= p1.rank());
    }
}

TEST_CASE("multiplication functional annihilates window generators for Omega") {
    auto uni = GroupUniverse::closed_over(
        {FiniteGroup::trivial(), FiniteGroup::cyclic(2), FiniteGroup::cyclic(4)});
    auto om = omega_presentation(uni);
    GreenStructure g = omega_green(om);
    ZeroCell X = ZeroCell::point(uni->rep(1)); // pt/C2
    REQUIRE(uni->rep(1)->order() == 2);
    TruncationWindow w{4, 4, 2};
    auto objects = enumerate_slice_objects(*uni, X, w);
    MultiplicationFunctional ell{&g, X};
    int checked = 0;
    tensor_generators(*om, *om, X, objects, [&](const TensorGenerator& gen) {
        auto v = ell.apply(objects, gen);
        for (const auto& c : v) REQUIRE(c.is_zero());
        ++checked;
    });
    REQUIRE(checked > 0);
}

TEST_CASE("representable internal hom") {
    auto om = omega_small();
    auto uni = small_universe();
    auto c2 = uni->rep(1);
    ZeroCell pte = ZeroCell::point(FiniteGroup::trivial());
    ZeroCell ptc2 = ZeroCell::point(c2);

    SECTION("window pt/e gives back N") {
        auto h = internal_hom_representable(*om, pte, ptc2);
        REQUIRE(h.value.total == value_basis(*om, ptc2).total);
        // identity span acts as the identity
        Mat a = representable_hom_action(*om, pte, identity_lin(ptc2));
        REQUIRE(a == Mat::identity(h.value.total));
    }
    SECTION("window pt/C2 at pt/e has rank 2") {
        auto h = internal_hom_representable(*om, ptc2, pte);
        REQUIRE(h.value.total == 2);
    }
}
