#pragma once

#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "spanmack/green.hpp"
#include "spanmack/mackey.hpp"
#include "spanmack/span.hpp"

namespace spanmack {

struct GroupMismatch : std::runtime_error {
    explicit GroupMismatch(const std::string& m) : std::runtime_error(m) {}
};

/// Finite H-G-biset: commuting left H-action and right G-action tables.
struct Biset {
    Group left;  // H
    Group right; // G
    int size = 0;
    std::vector<std::vector<int>> lact; // lact[h][u]
    std::vector<std::vector<int>> ract; // ract[g][u] = u . g

    Biset() = default;
    Biset(Group l, Group r, int n, std::vector<std::vector<int>> la,
          std::vector<std::vector<int>> ra)
        : left(std::move(l)), right(std::move(r)), size(n), lact(std::move(la)),
          ract(std::move(ra)) {
        validate();
    }

    static Biset unchecked(Group l, Group r, int n, std::vector<std::vector<int>> la,
                           std::vector<std::vector<int>> ra) {
        Biset b;
        b.left = std::move(l);
        b.right = std::move(r);
        b.size = n;
        b.lact = std::move(la);
        b.ract = std::move(ra);
        return b;
    }

    /// The group G as the identity G-G-biset.
    static Biset identity(const Group& g) {
        int n = g->order();
        std::vector<std::vector<int>> la(n, std::vector<int>(n));
        std::vector<std::vector<int>> ra(n, std::vector<int>(n));
        for (Elem a = 0; a < n; ++a)
            for (int u = 0; u < n; ++u) {
                la[a][u] = g->mul(a, u);
                ra[a][u] = g->mul(u, a);
            }
        return Biset(g, g, n, std::move(la), std::move(ra));
    }

    /// View as a left (H x G)-set via (h, g) u = h u g^{-1}.
    GSet as_product_set() const {
        Group P = FiniteGroup::product(left, right);
        int ng = right->order();
        std::vector<std::vector<int>> act(P->order(), std::vector<int>(size));
        for (Elem h = 0; h < left->order(); ++h)
            for (Elem g = 0; g < ng; ++g)
                for (int u = 0; u < size; ++u)
                    act[h * ng + g][u] = lact[h][ract[right->inv(g)][u]];
        return GSet(P, size, std::move(act));
    }

    /// Transitive biset (H x G)/L from a subgroup of the product.
    static Biset from_product_subgroup(const Group& H, const Group& G, const Subgroup& L) {
        Group P = FiniteGroup::product(H, G);
        GSet cosets = coset_gset(P, L);
        int ng = G->order();
        std::vector<std::vector<int>> la(H->order(), std::vector<int>(cosets.size));
        std::vector<std::vector<int>> ra(G->order(), std::vector<int>(cosets.size));
        for (Elem h = 0; h < H->order(); ++h)
            for (int u = 0; u < cosets.size; ++u) la[h][u] = cosets.act[h * ng + 0][u];
        for (Elem g = 0; g < G->order(); ++g)
            for (int u = 0; u < cosets.size; ++u)
                ra[g][u] = cosets.act[0 * ng + G->inv(g)][u];
        return Biset(H, G, cosets.size, std::move(la), std::move(ra));
    }

    Biset disjoint_union(const Biset& o) const {
        if (!same_group(left, o.left) || !same_group(right, o.right))
            throw GroupMismatch("Biset: union groups");
        int n = size + o.size;
        std::vector<std::vector<int>> la(left->order(), std::vector<int>(n));
        std::vector<std::vector<int>> ra(right->order(), std::vector<int>(n));
        for (Elem h = 0; h < left->order(); ++h) {
            for (int u = 0; u < size; ++u) la[h][u] = lact[h][u];
            for (int u = 0; u < o.size; ++u) la[h][size + u] = size + o.lact[h][u];
        }
        for (Elem g = 0; g < right->order(); ++g) {
            for (int u = 0; u < size; ++u) ra[g][u] = ract[g][u];
            for (int u = 0; u < o.size; ++u) ra[g][size + u] = size + o.ract[g][u];
        }
        return Biset(left, right, n, std::move(la), std::move(ra));
    }

private:
    void validate() const {
        if ((int)lact.size() != left->order() || (int)ract.size() != right->order())
            throw std::invalid_argument("Biset: table sizes");
        for (int u = 0; u < size; ++u) {
            if (lact[0][u] != u || ract[0][u] != u)
                throw std::invalid_argument("Biset: identities must act trivially");
        }
        for (Elem a = 0; a < left->order(); ++a)
            for (Elem b = 0; b < left->order(); ++b)
                for (int u = 0; u < size; ++u)
                    if (lact[left->mul(a, b)][u] != lact[a][lact[b][u]])
                        throw std::invalid_argument("Biset: left action fails");
        for (Elem a = 0; a < right->order(); ++a)
            for (Elem b = 0; b < right->order(); ++b)
                for (int u = 0; u < size; ++u)
                    if (ract[right->mul(a, b)][u] != ract[b][ract[a][u]])
                        throw std::invalid_argument("Biset: right action fails");
        for (Elem h = 0; h < left->order(); ++h)
            for (Elem g = 0; g < right->order(); ++g)
                for (int u = 0; u < size; ++u)
                    if (lact[h][ract[g][u]] != ract[g][lact[h][u]])
                        throw std::invalid_argument("Biset: actions do not commute");
    }
};

/// Composition V x_H U for V: K-H and U: H-G, as classes of pairs with
/// (v, u) ~ (v h, h^{-1} u... precisely (v,u) ~ (v', u') iff v = v' h and
/// u' = h u for some h.
inline Biset biset_compose(const Biset& V, const Biset& U) {
    if (!same_group(V.right, U.left)) throw GroupMismatch("biset_compose: middle groups");
    const auto& H = *V.right;
    int npairs = V.size * U.size;
    auto pid = [&](int v, int u) { return v * U.size + u; };
    std::vector<int> uf(npairs);
    std::iota(uf.begin(), uf.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (uf[a] != a) { uf[a] = uf[uf[a]]; a = uf[a]; }
        return a;
    };
    auto unite = [&](int a, int b) {
        a = find(a); b = find(b);
        if (a != b) uf[std::max(a, b)] = std::min(a, b);
    };
    // (v, u) ~ (v h^{-1}, h u)
    for (int v = 0; v < V.size; ++v)
        for (int u = 0; u < U.size; ++u)
            for (Elem h = 0; h < H.order(); ++h)
                unite(pid(v, u), pid(V.ract[H.inv(h)][v], U.lact[h][u]));
    std::vector<int> cls(npairs, -1);
    int nclasses = 0;
    for (int p = 0; p < npairs; ++p)
        if (find(p) == p) cls[p] = nclasses++;
    for (int p = 0; p < npairs; ++p) cls[p] = cls[find(p)];

    std::vector<std::vector<int>> la(V.left->order(), std::vector<int>(nclasses));
    std::vector<std::vector<int>> ra(U.right->order(), std::vector<int>(nclasses));
    for (int v = 0; v < V.size; ++v)
        for (int u = 0; u < U.size; ++u) {
            int c = cls[pid(v, u)];
            for (Elem k = 0; k < V.left->order(); ++k) la[k][c] = cls[pid(V.lact[k][v], u)];
            for (Elem g = 0; g < U.right->order(); ++g) ra[g][c] = cls[pid(v, U.ract[g][u])];
        }
    return Biset(V.left, U.right, nclasses, std::move(la), std::move(ra));
}

/// Isomorphism of bisets, decided through the product-set translation:
/// multisets of point-stabilizer classes in H x G classify exactly.
inline bool biset_iso(const Biset& U, const Biset& V) {
    if (!same_group(U.left, V.left) || !same_group(U.right, V.right)) return false;
    if (U.size != V.size) return false;
    GSet a = U.as_product_set();
    GSet b = V.as_product_set();
    const auto& P = *a.group;
    auto lat = subgroup_lattice(P);
    auto signature = [&](const GSet& s) {
        std::multiset<int> sig;
        for (const auto& o : orbits(s)) sig.insert(lat.class_of[lat.find(o.stabilizer)]);
        return sig;
    };
    return signature(a) == signature(b);
}

/// Canonical basis of the double Burnside module B(G, H): transitive
/// H-G-biset classes, one per subgroup class of H x G; ordering follows the
/// Burnside basis of the point over H x G.
struct DoubleBurnsideBasis {
    Group H;
    Group G;
    Group product;                 // H x G
    BurnsideBasisPtr point_basis;  // basis of Omega_{HxG}(pt)
    std::vector<Biset> transitive; // aligned with point_basis entries

    explicit DoubleBurnsideBasis(Group h, Group g) : H(std::move(h)), G(std::move(g)) {
        product = FiniteGroup::product(H, G);
        point_basis = OmegaMaps::instance().basis_for(ZeroCell::point(product));
        for (int i = 0; i < point_basis->rank(); ++i)
            transitive.push_back(
                Biset::from_product_subgroup(H, G, point_basis->entry(i).H));
    }

    int rank() const { return point_basis->rank(); }

    /// Class vector of an arbitrary biset.
    std::vector<Rational> classify(const Biset& U) const {
        std::vector<Rational> out(rank());
        GSet s = U.as_product_set();
        for (const auto& o : orbits(s))
            out[point_basis->classify(o.stabilizer, 0)] += 1;
        return out;
    }
};

/// The span attached to a biset: apex the biset as an (H x G)-set, legs the
/// projection-twisted collapses to the two points.
inline Span span_of_biset(const Biset& U) {
    GSet s = U.as_product_set();
    ZeroCell apex(s);
    ZeroCell pth = ZeroCell::point(U.left);
    ZeroCell ptg = ZeroCell::point(U.right);
    int ng = U.right->order();
    std::vector<Elem> prh(s.group->order()), prg(s.group->order());
    for (Elem h = 0; h < U.left->order(); ++h)
        for (Elem g = 0; g < ng; ++g) {
            prh[h * ng + g] = h;
            prg[h * ng + g] = g;
        }
    OneCell beta = OneCell::equivariant(apex, pth, std::vector<int>(s.size, 0),
                                        GroupHom(s.group, U.left, prh));
    OneCell alpha = OneCell::equivariant(apex, ptg, std::vector<int>(s.size, 0),
                                         GroupHom(s.group, U.right, prg));
    return Span(std::move(beta), std::move(alpha));
}

/// A tabulated biset functor on a finite family of groups: the image of a
/// deflative Mackey presentation under the evaluation G |-> M(pt/G),
/// U |-> M(s_(U)).
struct BisetFunctorTable {
    MackeyPtr carrier;

    explicit BisetFunctorTable(MackeyPtr m) : carrier(std::move(m)) {
        auto defl = is_deflative(*carrier);
        if (!defl.deflative)
            throw NotDeflative("phi: presentation is not deflative (" + defl.where + ")");
    }

    int value_rank(const Group& G) const {
        return value_basis(*carrier, ZeroCell::point(G)).total;
    }

    Mat apply(const Biset& U) const {
        return evaluate_span(*carrier, SpanLinComb::from_span(span_of_biset(U)));
    }
    Mat apply(const DoubleBurnsideBasis& basis, const std::vector<Rational>& coeffs) const {
        Mat out((std::size_t)value_rank(basis.H), (std::size_t)value_rank(basis.G));
        for (int i = 0; i < basis.rank(); ++i) {
            if (coeffs[i].is_zero()) continue;
            out = out + coeffs[i] * apply(basis.transitive[i]);
        }
        return out;
    }
};

inline BisetFunctorTable phi(MackeyPtr deflative_presentation) {
    return BisetFunctorTable(std::move(deflative_presentation));
}

// --- the Yoneda-Dress comparison ---------------------------------------------------

/// The canonical identification pt/H x pt/G -> pt/(H x G) (a relabeling of
/// the one-point product cell).
inline OneCell gamma_cell(const Group& H, const Group& G) {
    ZeroCell prod = product_zerocell(ZeroCell::point(H), ZeroCell::point(G));
    ZeroCell pt = ZeroCell::point(FiniteGroup::product(H, G));
    return OneCell::equivariant(prod, pt, {0}, GroupHom::identity(prod.group()));
}

/// Both composites of the Yoneda-Dress square for a G'-G-biset V at level H:
///   through M(T_gamma) and the product span id_{pt/H} x s_(V), versus the
///   biset H x V. Returns the pair of matrices that must agree.
struct DressSquare {
    Mat via_product; // gamma . (id x s_V) : M(pt/H x pt/G) -> M(pt/(H x G'))
    Mat via_biset;   // s_(H x V) . gamma : same endpoints
};

inline DressSquare dress_compare(const MackeyPresentation& M, const Group& H,
                                 const Biset& V) {
    const Group& Gp = V.left;  // G'
    const Group& G = V.right;
    SpanLinComb idH = identity_lin(ZeroCell::point(H));
    SpanLinComb sV = SpanLinComb::from_span(span_of_biset(V));
    SpanLinComb prod = product_lin(idH, sV); // pt/H x pt/G -> pt/H x pt/G'
    SpanLinComb gam_in = SpanLinComb::from_span(lift_T(gamma_cell(H, G)));
    SpanLinComb gam_out = SpanLinComb::from_span(lift_T(gamma_cell(H, Gp)));

    // H x V as an (H x G')-(H x G)-biset
    int nv = V.size;
    int nh = H->order();
    Group HGp = FiniteGroup::product(H, Gp);
    Group HG = FiniteGroup::product(H, G);
    int n = nh * nv;
    std::vector<std::vector<int>> la(HGp->order(), std::vector<int>(n));
    std::vector<std::vector<int>> ra(HG->order(), std::vector<int>(n));
    for (Elem a = 0; a < H->order(); ++a)
        for (Elem gp = 0; gp < Gp->order(); ++gp)
            for (int i = 0; i < n; ++i) {
                int h = i / nv, v = i % nv;
                la[a * Gp->order() + gp][i] = H->mul(a, h) * nv + V.lact[gp][v];
            }
    for (Elem a = 0; a < H->order(); ++a)
        for (Elem g = 0; g < G->order(); ++g)
            for (int i = 0; i < n; ++i) {
                int h = i / nv, v = i % nv;
                ra[a * G->order() + g][i] = H->mul(h, a) * nv + V.ract[g][v];
            }
    Biset HxV(HGp, HG, n, std::move(la), std::move(ra));
    SpanLinComb sHV = SpanLinComb::from_span(span_of_biset(HxV));

    DressSquare out;
    out.via_product = evaluate_span(M, compose_lin(gam_out, prod));
    out.via_biset = evaluate_span(M, compose_lin(sHV, gam_in));
    return out;
}

} // namespace spanmack
