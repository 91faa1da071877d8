#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "spanmack/cell.hpp"
#include "spanmack/factorization.hpp"
#include "spanmack/group.hpp"
#include "spanmack/rational.hpp"

namespace spanmack {

/// Span from X/G to Y/H: a shared apex W/L with legs beta: W -> Y (codomain
/// side) and alpha: W -> X (domain side).
struct Span {
    OneCell beta;  // apex -> codomain
    OneCell alpha; // apex -> domain

    Span() = default;
    Span(OneCell b, OneCell a) : beta(std::move(b)), alpha(std::move(a)) {
        if (!(beta.src == alpha.src)) throw std::invalid_argument("Span: apexes differ");
    }

    const ZeroCell& apex() const { return beta.src; }
    const ZeroCell& dom() const { return alpha.dst; }
    const ZeroCell& cod() const { return beta.dst; }

    static Span identity(const ZeroCell& X) {
        return Span(OneCell::identity(X), OneCell::identity(X));
    }
    /// Zero morphism: the empty apex over the trivial group.
    static Span zero(const ZeroCell& dom, const ZeroCell& cod) {
        ZeroCell e(GSet::empty(FiniteGroup::trivial()));
        OneCell b = OneCell::trusted(e, cod, {}, {});
        OneCell a = OneCell::trusted(e, dom, {}, {});
        return Span(std::move(b), std::move(a));
    }
};

/// T_a = [Y <-a- X = X]  (a morphism X -> Y in the span category)
inline Span lift_T(const OneCell& a) { return Span(a, OneCell::identity(a.src)); }
/// R_a = [X = X -a-> Y]  (a morphism Y -> X in the span category)
inline Span lift_R(const OneCell& a) { return Span(OneCell::identity(a.src), a); }

inline Span involution(const Span& s) { return Span(s.alpha, s.beta); }

/// Composition via the natural weak pullback of the middle legs.
inline Span compose_spans(const Span& t, const Span& s) {
    if (!(t.dom() == s.cod())) throw EndpointMismatch("compose_spans: endpoints");
    Bipullback bp = bipullback(t.alpha, s.beta, /*with_kappa=*/false);
    return Span(compose_onecells(t.beta, bp.wp_left),
                compose_onecells(s.alpha, bp.wp_right));
}

/// Sum of spans: legs glued over the disjoint union of apexes. The empty
/// span is the zero element. Apexes over different groups are summed as
/// canonicalized linear combinations instead.
inline Span add_spans(const Span& s, const Span& t) {
    if (!(s.dom() == t.dom()) || !(s.cod() == t.cod()))
        throw EndpointMismatch("add_spans: endpoints");
    if (s.apex().points() == 0) return t;
    if (t.apex().points() == 0) return s;
    if (!same_group(s.apex().group(), t.apex().group()))
        throw std::invalid_argument("add_spans: apex groups differ; use SpanLinComb");
    ZeroCell W(s.apex().set.disjoint_union(t.apex().set));
    int n1 = s.apex().points();
    std::vector<int> ba(W.points()), aa(W.points());
    std::vector<std::vector<Elem>> bt(W.points()), at(W.points());
    for (int w = 0; w < W.points(); ++w) {
        const Span& part = w < n1 ? s : t;
        int v = w < n1 ? w : w - n1;
        ba[w] = part.beta.alpha[v];
        bt[w] = part.beta.theta[v];
        aa[w] = part.alpha.alpha[v];
        at[w] = part.alpha.theta[v];
    }
    return Span(OneCell::trusted(W, s.cod(), std::move(ba), std::move(bt)),
                OneCell::trusted(W, s.dom(), std::move(aa), std::move(at)));
}

// --- transitive pieces and span isomorphism ----------------------------------

/// A transitive span piece in collapsed form: apex pt/L with leg data
/// (y, u: L -> H_y) on the codomain side and (x, f: L -> G_x) on the domain
/// side.
struct SpanPiece {
    Group L;
    int y = -1;
    GroupHom u; // L -> H (image inside the stabilizer of y)
    int x = -1;
    GroupHom f; // L -> G
};

/// Decompose a span into transitive pieces by orbit-collapsing the apex.
/// The piece at an orbit representative w reads the legs through their
/// twists restricted to the stabilizer.
inline std::vector<SpanPiece> span_pieces(const Span& s) {
    std::vector<SpanPiece> out;
    const Group& G = s.dom().group();
    const Group& H = s.cod().group();
    for (const Orbit& o : orbits(s.apex().set)) {
        SpanPiece p;
        EmbeddedGroup stab = subgroup_as_group(*s.apex().group(), o.stabilizer);
        int w = o.rep;
        p.L = stab.group;
        p.x = s.alpha.alpha[w];
        p.y = s.beta.alpha[w];
        std::vector<Elem> fmap(stab.elems.size()), umap(stab.elems.size());
        for (std::size_t i = 0; i < stab.elems.size(); ++i) {
            fmap[i] = s.alpha.theta[w][stab.elems[i]];
            umap[i] = s.beta.theta[w][stab.elems[i]];
        }
        p.f = GroupHom(p.L, G, std::move(fmap));
        p.u = GroupHom(p.L, H, std::move(umap));
        out.push_back(std::move(p));
    }
    return out;
}

/// Realize a piece as a span with apex pt/L.
inline Span piece_as_span(const SpanPiece& p, const ZeroCell& dom, const ZeroCell& cod) {
    ZeroCell apex = ZeroCell::point(p.L);
    OneCell a = OneCell::equivariant(apex, dom, {p.x}, p.f);
    OneCell b = OneCell::equivariant(apex, cod, {p.y}, p.u);
    return Span(std::move(b), std::move(a));
}

namespace detail {

/// Search an isomorphism c: L1 -> L2 with v2(c(l)) = w(l) for the packed
/// constraint maps w, v2: L -> (value space). Backtracks over a generating
/// sequence; partial maps are kept injective and homomorphic.
inline bool constrained_iso_exists(const Group& L1, const Group& L2,
                                   const std::vector<long long>& w,
                                   const std::vector<long long>& v2) {
    if (L1->order() != L2->order()) return false;
    // fiber profile prescreen: multiset of (value, element order) must match
    {
        std::vector<std::pair<long long, int>> p1(L1->order()), p2(L2->order());
        for (Elem a = 0; a < L1->order(); ++a) p1[a] = {w[a], L1->elem_order(a)};
        for (Elem a = 0; a < L2->order(); ++a) p2[a] = {v2[a], L2->elem_order(a)};
        std::sort(p1.begin(), p1.end());
        std::sort(p2.begin(), p2.end());
        if (p1 != p2) return false;
    }
    auto gens = generating_sequence(*L1);
    if (gens.empty()) return true;
    std::vector<Elem> images(gens.size());
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        auto partial = extend_partial_hom(*L1, *L2, gens, images, i);
        if (!partial) return false;
        // keep partial injective and constraint-respecting
        std::vector<char> used(L2->order(), 0);
        for (Elem a2 = 0; a2 < L1->order(); ++a2) {
            Elem im = (*partial)[a2];
            if (im < 0) continue;
            if (used[im]) return false;
            used[im] = 1;
            if (v2[im] != w[a2]) return false;
        }
        if (i == gens.size()) {
            for (Elem a2 = 0; a2 < L1->order(); ++a2)
                if ((*partial)[a2] < 0) return false;
            return true;
        }
        for (Elem b = 0; b < L2->order(); ++b) {
            if (L2->elem_order(b) != L1->elem_order(gens[i])) continue;
            if (v2[b] != w[gens[i]]) continue;
            images[i] = b;
            if (rec(i + 1)) return true;
        }
        return false;
    };
    return rec(0);
}

} // namespace detail

/// Decide whether two pieces are isomorphic as spans between the given
/// endpoints: some iso c: L1 -> L2, g in G and h in H must satisfy
/// x2 = g x1, f2 . c = conj_g . f1, y2 = h y1, u2 . c = conj_h . u1.
inline bool pieces_isomorphic(const SpanPiece& p1, const SpanPiece& p2, const ZeroCell& dom,
                              const ZeroCell& cod) {
    if (p1.L->order() != p2.L->order() ||
        p1.L->order_profile() != p2.L->order_profile())
        return false;
    const auto& G = *dom.group();
    const auto& H = *cod.group();
    int nH = H.order();
    for (Elem g = 0; g < G.order(); ++g) {
        if (dom.set.act[g][p1.x] != p2.x) continue;
        for (Elem h = 0; h < H.order(); ++h) {
            if (cod.set.act[h][p1.y] != p2.y) continue;
            // packed constraint: l |-> (g f1(l) g^{-1}) * |H| + (h u1(l) h^{-1})
            std::vector<long long> w(p1.L->order()), v2(p2.L->order());
            for (Elem l = 0; l < p1.L->order(); ++l)
                w[l] = (long long)G.conj(g, p1.f.map[l]) * nH + H.conj(h, p1.u.map[l]);
            for (Elem l = 0; l < p2.L->order(); ++l)
                v2[l] = (long long)p2.f.map[l] * nH + p2.u.map[l];
            if (detail::constrained_iso_exists(p1.L, p2.L, w, v2)) return true;
        }
    }
    return false;
}

/// Deterministic coarse fingerprint of a piece; equal pieces get equal keys.
inline std::string piece_fingerprint(const SpanPiece& p, const ZeroCell& dom,
                                     const ZeroCell& cod) {
    const auto& G = *dom.group();
    const auto& H = *cod.group();
    // orbit classes of the two feet
    int xmin = p.x, ymin = p.y;
    for (Elem g = 0; g < G.order(); ++g) xmin = std::min(xmin, dom.set.act[g][p.x]);
    for (Elem h = 0; h < H.order(); ++h) ymin = std::min(ymin, cod.set.act[h][p.y]);
    std::set<Elem> fim(p.f.map.begin(), p.f.map.end());
    std::set<Elem> uim(p.u.map.begin(), p.u.map.end());
    std::string s = std::to_string(p.L->order()) + ":";
    for (int d : p.L->order_profile()) s += std::to_string(d) + ",";
    s += ";" + std::to_string(xmin) + ";" + std::to_string(ymin) + ";" +
         std::to_string(fim.size()) + ";" + std::to_string(uim.size());
    return s;
}

/// Span isomorphism with witness-free boolean result: decompose to pieces
/// and match them up bijectively (an isomorphism in the quotient category
/// preserves apex components).
inline bool spans_isomorphic(const Span& s, const Span& t) {
    if (!(s.dom() == t.dom()) || !(s.cod() == t.cod())) return false;
    auto ps = span_pieces(s);
    auto pt = span_pieces(t);
    if (ps.size() != pt.size()) return false;
    int n = (int)ps.size();
    // bipartite perfect matching by backtracking (piece counts are tiny)
    std::vector<int> match(n, -1);
    std::vector<char> used(n, 0);
    std::vector<std::vector<char>> compat(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i) {
        auto fi = piece_fingerprint(ps[i], s.dom(), s.cod());
        for (int j = 0; j < n; ++j) {
            if (fi != piece_fingerprint(pt[j], s.dom(), s.cod())) continue;
            compat[i][j] = pieces_isomorphic(ps[i], pt[j], s.dom(), s.cod()) ? 1 : 0;
        }
    }
    std::function<bool(int)> rec = [&](int i) -> bool {
        if (i == n) return true;
        for (int j = 0; j < n; ++j) {
            if (used[j] || !compat[i][j]) continue;
            used[j] = 1;
            match[i] = j;
            if (rec(i + 1)) return true;
            used[j] = 0;
        }
        return false;
    };
    return rec(0);
}

// --- k-linear combinations ----------------------------------------------------

/// k-linear combination of spans between fixed endpoints, kept canonical:
/// every term has a transitive collapsed apex pt/L, no two terms are
/// isomorphic, no zero coefficients. Terms are sorted by fingerprint with
/// first-seen order breaking ties, which is deterministic for a
/// deterministic input order.
struct SpanLinComb {
    ZeroCell dom;
    ZeroCell cod;
    std::vector<std::pair<Rational, SpanPiece>> terms;

    static SpanLinComb zero(ZeroCell dom, ZeroCell cod) {
        return SpanLinComb{std::move(dom), std::move(cod), {}};
    }
    static SpanLinComb from_span(const Span& s, const Rational& coeff = Rational(1)) {
        SpanLinComb out{s.dom(), s.cod(), {}};
        for (auto& p : span_pieces(s)) out.terms.emplace_back(coeff, std::move(p));
        out.canonicalize();
        return out;
    }

    void canonicalize() {
        std::vector<std::pair<Rational, SpanPiece>> merged;
        std::vector<std::string> fps;
        for (auto& [c, p] : terms) {
            if (c.is_zero()) continue;
            std::string fp = piece_fingerprint(p, dom, cod);
            bool found = false;
            for (std::size_t i = 0; i < merged.size() && !found; ++i) {
                if (fps[i] != fp) continue;
                if (pieces_isomorphic(merged[i].second, p, dom, cod)) {
                    merged[i].first += c;
                    found = true;
                }
            }
            if (!found) {
                merged.emplace_back(c, std::move(p));
                fps.push_back(std::move(fp));
            }
        }
        // drop cancelled terms, then stable-sort by fingerprint
        std::vector<std::pair<std::string, std::pair<Rational, SpanPiece>>> keyed;
        for (std::size_t i = 0; i < merged.size(); ++i)
            if (!merged[i].first.is_zero()) keyed.emplace_back(fps[i], std::move(merged[i]));
        std::stable_sort(keyed.begin(), keyed.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        terms.clear();
        for (auto& [k, t] : keyed) terms.push_back(std::move(t));
    }

    friend SpanLinComb operator+(const SpanLinComb& a, const SpanLinComb& b) {
        if (!(a.dom == b.dom) || !(a.cod == b.cod))
            throw EndpointMismatch("SpanLinComb: add endpoints");
        SpanLinComb out = a;
        for (const auto& t : b.terms) out.terms.push_back(t);
        out.canonicalize();
        return out;
    }
    friend SpanLinComb operator*(const Rational& c, const SpanLinComb& a) {
        SpanLinComb out = a;
        for (auto& t : out.terms) t.first *= c;
        out.canonicalize();
        return out;
    }

    bool operator==(const SpanLinComb& o) const {
        if (!(dom == o.dom) || !(cod == o.cod) || terms.size() != o.terms.size())
            return false;
        // canonical forms: match terms pairwise
        std::vector<char> used(terms.size(), 0);
        for (const auto& [c, p] : terms) {
            bool found = false;
            for (std::size_t j = 0; j < o.terms.size() && !found; ++j) {
                if (used[j] || !(o.terms[j].first == c)) continue;
                if (pieces_isomorphic(p, o.terms[j].second, dom, cod)) {
                    used[j] = 1;
                    found = true;
                }
            }
            if (!found) return false;
        }
        return true;
    }
};

/// Bilinear composition of canonical combinations.
inline SpanLinComb compose_lin(const SpanLinComb& t, const SpanLinComb& s) {
    if (!(t.dom == s.cod)) throw EndpointMismatch("compose_lin: endpoints");
    SpanLinComb out = SpanLinComb::zero(s.dom, t.cod);
    for (const auto& [ct, pt] : t.terms)
        for (const auto& [cs, ps] : s.terms) {
            Span composite = compose_spans(piece_as_span(pt, t.dom, t.cod),
                                           piece_as_span(ps, s.dom, s.cod));
            for (auto& piece : span_pieces(composite))
                out.terms.emplace_back(ct * cs, std::move(piece));
        }
    out.canonicalize();
    return out;
}

inline SpanLinComb involution(const SpanLinComb& s) {
    SpanLinComb out{s.cod, s.dom, {}};
    for (const auto& [c, p] : s.terms) {
        SpanPiece q;
        q.L = p.L;
        q.x = p.y;
        q.f = p.u;
        q.y = p.x;
        q.u = p.f;
        out.terms.emplace_back(c, std::move(q));
    }
    out.canonicalize();
    return out;
}

/// Collapse each term's apex group by the joint kernel of its two leg
/// homomorphisms. Evaluation under any deflative functor is blind to this
/// collapse, so collapsed forms are the comparison points for biset-side
/// identities.
inline SpanLinComb collapse_kernels(const SpanLinComb& s) {
    SpanLinComb out{s.dom, s.cod, {}};
    for (const auto& [c, p] : s.terms) {
        Subgroup ker;
        for (Elem l = 0; l < p.L->order(); ++l)
            if (p.f.map[l] == 0 && p.u.map[l] == 0) ker.push_back(l);
        if ((int)ker.size() == 1) {
            out.terms.emplace_back(c, p);
            continue;
        }
        QuotientGroup q = quotient_group(p.L, ker);
        SpanPiece r;
        r.L = q.group;
        r.x = p.x;
        r.y = p.y;
        std::vector<Elem> fmap(q.group->order()), umap(q.group->order());
        // well-defined: kernel elements map to the identity on both sides
        std::vector<char> seen(q.group->order(), 0);
        for (Elem l = 0; l < p.L->order(); ++l) {
            Elem ql = q.proj.map[l];
            if (seen[ql]) continue;
            seen[ql] = 1;
            fmap[ql] = p.f.map[l];
            umap[ql] = p.u.map[l];
        }
        r.f = GroupHom(q.group, p.f.dst, std::move(fmap));
        r.u = GroupHom(q.group, p.u.dst, std::move(umap));
        out.terms.emplace_back(c, std::move(r));
    }
    out.canonicalize();
    return out;
}

// --- products and duality -----------------------------------------------------

/// Product 0-cell: pairs (x, y) with index x * |Y| + y, componentwise
/// action of G x H. Structurally equal to the biproduct apex.
inline ZeroCell product_zerocell(const ZeroCell& X, const ZeroCell& Y) {
    Group P = FiniteGroup::product(X.group(), Y.group());
    int n = X.points() * Y.points();
    std::vector<std::vector<int>> act(P->order(), std::vector<int>(n));
    int nh = Y.group()->order();
    for (Elem g = 0; g < X.group()->order(); ++g)
        for (Elem h = 0; h < nh; ++h)
            for (int x = 0; x < X.points(); ++x)
                for (int y = 0; y < Y.points(); ++y)
                    act[g * nh + h][x * Y.points() + y] =
                        X.set.act[g][x] * Y.points() + Y.set.act[h][y];
    return ZeroCell(GSet::unchecked(P, n, std::move(act)));
}

/// Product of 1-cells on product 0-cells.
inline OneCell product_cell(const OneCell& a, const OneCell& b, const ZeroCell& src_prod,
                            const ZeroCell& dst_prod) {
    int nb = b.src.points();
    int nd = b.dst.points();
    int nbh = b.src_group()->order();
    int ndh = b.dst_group()->order();
    std::vector<int> alpha(src_prod.points());
    std::vector<std::vector<Elem>> theta(src_prod.points(),
                                         std::vector<Elem>(src_prod.group()->order()));
    for (int x = 0; x < a.src.points(); ++x)
        for (int y = 0; y < nb; ++y) {
            int w = x * nb + y;
            alpha[w] = a.alpha[x] * nd + b.alpha[y];
            for (Elem g = 0; g < a.src_group()->order(); ++g)
                for (Elem h = 0; h < nbh; ++h)
                    theta[w][g * nbh + h] = a.theta[x][g] * ndh + b.theta[y][h];
        }
    return OneCell::trusted(src_prod, dst_prod, std::move(alpha), std::move(theta));
}

/// Product of spans over product endpoints.
inline Span product_span(const Span& s, const Span& t) {
    ZeroCell apex = product_zerocell(s.apex(), t.apex());
    ZeroCell dom = product_zerocell(s.dom(), t.dom());
    ZeroCell cod = product_zerocell(s.cod(), t.cod());
    return Span(product_cell(s.beta, t.beta, apex, cod),
                product_cell(s.alpha, t.alpha, apex, dom));
}

/// Unit (coevaluation) span pt/e -> X x X built from the diagonal cell.
inline Span unit_span(const ZeroCell& X) {
    ZeroCell XX = product_zerocell(X, X);
    ZeroCell pt = ZeroCell::point(FiniteGroup::trivial());
    std::vector<int> diag(X.points());
    std::vector<std::vector<Elem>> dtheta(X.points(),
                                          std::vector<Elem>(X.group()->order()));
    int n = X.points(), ng = X.group()->order();
    for (int x = 0; x < n; ++x) {
        diag[x] = x * n + x;
        for (Elem g = 0; g < ng; ++g) dtheta[x][g] = g * ng + g;
    }
    OneCell d = OneCell::trusted(X, XX, std::move(diag), std::move(dtheta));
    return Span(d, terminal_cell(X, pt));
}
/// Counit (evaluation) span X x X -> pt/e.
inline Span counit_span(const ZeroCell& X) { return involution(unit_span(X)); }

/// Relabeling equivalence cells for the monoidal structure.
inline OneCell unitor_left_inverse(const ZeroCell& Y) {
    // Y -> pt x Y
    ZeroCell pt = ZeroCell::point(FiniteGroup::trivial());
    ZeroCell PY = product_zerocell(pt, Y);
    std::vector<int> a(Y.points());
    for (int y = 0; y < Y.points(); ++y) a[y] = y;
    std::vector<Elem> fm(Y.group()->order());
    for (Elem h = 0; h < Y.group()->order(); ++h) fm[h] = h; // e x H = H indexwise
    GroupHom f(Y.group(), PY.group(), std::move(fm));
    return OneCell::equivariant(Y, PY, std::move(a), f);
}

inline OneCell associator(const ZeroCell& X, const ZeroCell& Y, const ZeroCell& Z) {
    // (X x Y) x Z -> X x (Y x Z)
    ZeroCell XY = product_zerocell(X, Y);
    ZeroCell YZ = product_zerocell(Y, Z);
    ZeroCell L = product_zerocell(XY, Z);
    ZeroCell R = product_zerocell(X, YZ);
    int ny = Y.points(), nz = Z.points();
    int oy = Y.group()->order(), oz = Z.group()->order();
    std::vector<int> a(L.points());
    for (int x = 0; x < X.points(); ++x)
        for (int y = 0; y < ny; ++y)
            for (int z = 0; z < nz; ++z)
                a[(x * ny + y) * nz + z] = x * (ny * nz) + (y * nz + z);
    std::vector<Elem> fm(L.group()->order());
    for (Elem g = 0; g < X.group()->order(); ++g)
        for (Elem h = 0; h < oy; ++h)
            for (Elem k = 0; k < oz; ++k)
                fm[(g * oy + h) * oz + k] = g * (oy * oz) + (h * oz + k);
    GroupHom f(L.group(), R.group(), std::move(fm));
    return OneCell::equivariant(L, R, std::move(a), f);
}

inline OneCell symmetry_cell(const ZeroCell& X, const ZeroCell& Y) {
    // X x Y -> Y x X
    ZeroCell XY = product_zerocell(X, Y);
    ZeroCell YX = product_zerocell(Y, X);
    int ny = Y.points(), nx = X.points();
    int oy = Y.group()->order(), ox = X.group()->order();
    std::vector<int> a(XY.points());
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y) a[x * ny + y] = y * nx + x;
    std::vector<Elem> fm(XY.group()->order());
    for (Elem g = 0; g < ox; ++g)
        for (Elem h = 0; h < oy; ++h) fm[g * oy + h] = h * ox + g;
    GroupHom f(XY.group(), YX.group(), std::move(fm));
    return OneCell::equivariant(XY, YX, std::move(a), f);
}

/// Product of linear combinations: bilinear over piece products.
inline SpanLinComb product_lin(const SpanLinComb& s1, const SpanLinComb& s2) {
    SpanLinComb out =
        SpanLinComb::zero(product_zerocell(s1.dom, s2.dom), product_zerocell(s1.cod, s2.cod));
    for (const auto& [c1, p1] : s1.terms)
        for (const auto& [c2, p2] : s2.terms) {
            Span prod = product_span(piece_as_span(p1, s1.dom, s1.cod),
                                     piece_as_span(p2, s2.dom, s2.cod));
            for (auto& piece : span_pieces(prod)) out.terms.emplace_back(c1 * c2, std::move(piece));
        }
    out.canonicalize();
    return out;
}

inline SpanLinComb identity_lin(const ZeroCell& X) {
    return SpanLinComb::from_span(Span::identity(X));
}

/// The compact-closed transposition 𝒮(Y x X, Z) -> 𝒮(Y, X x Z), computed by
/// composing with the unit span:
///   Y -> pt x Y -> (X x X) x Y -> X x (X x Y) -> X x (Y x X) -> X x Z.
/// Intermediates are canonicalized, which keeps apexes small.
inline SpanLinComb duality_transpose(const SpanLinComb& s, const ZeroCell& Y,
                                     const ZeroCell& X, const ZeroCell& Z) {
    SpanLinComb step1 = SpanLinComb::from_span(lift_T(unitor_left_inverse(Y)));
    SpanLinComb step2 =
        product_lin(SpanLinComb::from_span(unit_span(X)), identity_lin(Y));
    SpanLinComb step3 = SpanLinComb::from_span(lift_T(associator(X, X, Y)));
    SpanLinComb step4 =
        product_lin(identity_lin(X), SpanLinComb::from_span(lift_T(symmetry_cell(X, Y))));
    SpanLinComb step5 = product_lin(identity_lin(X), s);
    return compose_lin(step5,
           compose_lin(step4, compose_lin(step3, compose_lin(step2, step1))));
}

/// Inverse transposition 𝒮(Y, X x Z) -> 𝒮(Y x X, Z), via the counit:
///   Y x X -> (X x Z) x X -> (X x X) x Z -> pt x Z -> Z.
inline SpanLinComb duality_transpose_inverse(const SpanLinComb& t, const ZeroCell& Y,
                                             const ZeroCell& X, const ZeroCell& Z) {
    SpanLinComb step1 = product_lin(t, identity_lin(X)); // Y x X -> (X x Z) x X
    // relabel (X x Z) x X -> (X x X) x Z by the coordinate shuffle
    ZeroCell XZ = product_zerocell(X, Z);
    ZeroCell L = product_zerocell(XZ, X);
    ZeroCell XX = product_zerocell(X, X);
    ZeroCell R = product_zerocell(XX, Z);
    int nx = X.points(), nz = Z.points();
    int ox = X.group()->order(), oz = Z.group()->order();
    std::vector<int> a(L.points());
    for (int x1 = 0; x1 < nx; ++x1)
        for (int z = 0; z < nz; ++z)
            for (int x2 = 0; x2 < nx; ++x2)
                a[(x1 * nz + z) * nx + x2] = (x2 * nx + x1) * nz + z;
    std::vector<Elem> fm(L.group()->order());
    for (Elem g1 = 0; g1 < ox; ++g1)
        for (Elem k = 0; k < oz; ++k)
            for (Elem g2 = 0; g2 < ox; ++g2)
                fm[(g1 * oz + k) * ox + g2] = (g2 * ox + g1) * oz + k;
    SpanLinComb step2 = SpanLinComb::from_span(
        lift_T(OneCell::equivariant(L, R, std::move(a),
                                    GroupHom(L.group(), R.group(), std::move(fm)))));
    SpanLinComb step3 = product_lin(SpanLinComb::from_span(counit_span(X)), identity_lin(Z));
    ZeroCell pt = ZeroCell::point(FiniteGroup::trivial());
    ZeroCell PZ = product_zerocell(pt, Z);
    std::vector<int> ua(PZ.points());
    for (int z = 0; z < PZ.points(); ++z) ua[z] = z;
    std::vector<Elem> um(PZ.group()->order());
    for (Elem e2 = 0; e2 < PZ.group()->order(); ++e2) um[e2] = e2;
    SpanLinComb step4 = SpanLinComb::from_span(
        lift_T(OneCell::equivariant(PZ, Z, std::move(ua),
                                    GroupHom(PZ.group(), Z.group(), std::move(um)))));
    return compose_lin(step4, compose_lin(step3, compose_lin(step2, step1)));
}

// --- double cosets (oracle-facing helper) -------------------------------------

/// Double cosets H1 \ G / H2 with representatives in element order.
inline std::vector<Elem> double_cosets(const FiniteGroup& G, const Subgroup& H1,
                                       const Subgroup& H2) {
    std::vector<char> seen(G.order(), 0);
    std::vector<Elem> reps;
    for (Elem g = 0; g < G.order(); ++g) {
        if (seen[g]) continue;
        reps.push_back(g);
        for (Elem h1 : H1)
            for (Elem h2 : H2) seen[G.mul(h1, G.mul(g, h2))] = 1;
    }
    return reps;
}

} // namespace spanmack
