#pragma once

#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "spanmack/burnside.hpp"
#include "spanmack/cell.hpp"
#include "spanmack/groupoid.hpp"

namespace spanmack {

struct ShapeMismatch : std::runtime_error {
    explicit ShapeMismatch(const std::string& m) : std::runtime_error(m) {}
};
struct SizeBoundExceeded : std::runtime_error {
    explicit SizeBoundExceeded(const std::string& m) : std::runtime_error(m) {}
};

/// Set-valued diagram on a finite groupoid: a finite set per object and a
/// map per morphism, functorially.
struct Diagram {
    Groupoid shape;
    std::vector<int> sizes;                     // per object
    std::vector<std::vector<int>> on_morphisms; // per morphism, a value table

    Diagram() = default;
    Diagram(Groupoid s, std::vector<int> sz, std::vector<std::vector<int>> om)
        : shape(std::move(s)), sizes(std::move(sz)), on_morphisms(std::move(om)) {
        validate();
    }

    static Diagram constant(Groupoid s, int n) {
        std::vector<int> sz(s->num_objects(), n);
        std::vector<int> id(n);
        std::iota(id.begin(), id.end(), 0);
        std::vector<std::vector<int>> om(s->num_morphisms(), id);
        return Diagram(std::move(s), std::move(sz), std::move(om));
    }

    int apply(int morph, int value) const { return on_morphisms[morph][value]; }

    void validate() const {
        if ((int)sizes.size() != shape->num_objects())
            throw std::invalid_argument("Diagram: object count");
        if ((int)on_morphisms.size() != shape->num_morphisms())
            throw std::invalid_argument("Diagram: morphism count");
        for (int m = 0; m < shape->num_morphisms(); ++m) {
            if ((int)on_morphisms[m].size() != sizes[shape->src(m)])
                throw std::invalid_argument("Diagram: table size");
            for (int v : on_morphisms[m])
                if (v < 0 || v >= sizes[shape->dst(m)])
                    throw std::invalid_argument("Diagram: value out of range");
        }
        for (int o = 0; o < shape->num_objects(); ++o)
            for (int v = 0; v < sizes[o]; ++v)
                if (on_morphisms[shape->identity(o)][v] != v)
                    throw std::invalid_argument("Diagram: identity fails");
        for (int f = 0; f < shape->num_morphisms(); ++f)
            for (int g = 0; g < shape->num_morphisms(); ++g) {
                if (shape->dst(g) != shape->src(f)) continue;
                int fg = shape->compose(f, g);
                for (int v = 0; v < sizes[shape->src(g)]; ++v)
                    if (on_morphisms[fg][v] != on_morphisms[f][on_morphisms[g][v]])
                        throw std::invalid_argument("Diagram: composition fails");
            }
    }

    bool operator==(const Diagram& o) const {
        return sizes == o.sizes && on_morphisms == o.on_morphisms;
    }
};

/// Morphism of diagrams with a common shape.
struct DiagramMap {
    std::vector<std::vector<int>> components; // per object, a value table

    static DiagramMap validate(const Diagram& from, const Diagram& to,
                               std::vector<std::vector<int>> comp) {
        const FiniteGroupoid& S = *from.shape;
        if ((int)comp.size() != S.num_objects())
            throw std::invalid_argument("DiagramMap: component count");
        for (int o = 0; o < S.num_objects(); ++o)
            if ((int)comp[o].size() != from.sizes[o])
                throw std::invalid_argument("DiagramMap: component size");
        for (int m = 0; m < S.num_morphisms(); ++m)
            for (int v = 0; v < from.sizes[S.src(m)]; ++v)
                if (comp[S.dst(m)][from.on_morphisms[m][v]] !=
                    to.on_morphisms[m][comp[S.src(m)][v]])
                    throw std::invalid_argument("DiagramMap: naturality fails");
        return DiagramMap{std::move(comp)};
    }
};

/// Restriction u* D = D . u.
inline Diagram restrict_diagram(const GroupoidFunctor& u, const Diagram& D) {
    if (u.dst.get() != D.shape.get() && D.shape->num_morphisms() != u.dst->num_morphisms())
        throw ShapeMismatch("restrict_diagram: shapes");
    std::vector<int> sz(u.src->num_objects());
    std::vector<std::vector<int>> om(u.src->num_morphisms());
    for (int o = 0; o < u.src->num_objects(); ++o) sz[o] = D.sizes[u.on_obj[o]];
    for (int m = 0; m < u.src->num_morphisms(); ++m) om[m] = D.on_morphisms[u.on_morph[m]];
    return Diagram(u.src, std::move(sz), std::move(om));
}

/// Left Kan extension along u: I -> J, computed objectwise as the colimit
/// over the comma category (u/j): the disjoint union of D-values indexed by
/// (i, f: u(i) -> j), glued along the zig-zags generated by morphisms of I.
struct LeftKan {
    Diagram extended;
    /// class of ((i, f), d) at a fixed j: index via class_at[j][key]
    /// where key packs (i, f in hom(u(i), j), d)
    std::function<int(int j, int i, int f, int d)> class_of;
    /// the unit D -> u* u_! D
    DiagramMap unit;
};

inline LeftKan left_kan(const GroupoidFunctor& u, const Diagram& D) {
    const FiniteGroupoid& I = *u.src;
    const FiniteGroupoid& J = *u.dst;
    int nj = J.num_objects();

    // per object j: enumerate (i, f, d) triples
    struct Key {
        int i, f, d;
        bool operator<(const Key& o) const {
            return std::tie(i, f, d) < std::tie(o.i, o.f, o.d);
        }
    };
    auto keys = std::make_shared<std::vector<std::map<Key, int>>>(nj); // key -> class
    std::vector<int> sizes(nj);
    std::vector<std::vector<int>> repr(nj); // class -> packed key (for action)
    std::vector<std::map<int, Key>> repr_key(nj);

    for (int j = 0; j < nj; ++j) {
        // union-find over the triples
        std::vector<Key> all;
        std::map<Key, int> index;
        for (int i = 0; i < I.num_objects(); ++i)
            for (int f = 0; f < J.num_morphisms(); ++f) {
                if (J.src(f) != u.on_obj[i] || J.dst(f) != j) continue;
                for (int d = 0; d < D.sizes[i]; ++d) {
                    index[{i, f, d}] = (int)all.size();
                    all.push_back({i, f, d});
                }
            }
        std::vector<int> uf(all.size());
        std::iota(uf.begin(), uf.end(), 0);
        std::function<int(int)> find = [&](int a) {
            while (uf[a] != a) { uf[a] = uf[uf[a]]; a = uf[a]; }
            return a;
        };
        auto unite = [&](int a, int b) {
            a = find(a); b = find(b);
            if (a != b) uf[std::max(a, b)] = std::min(a, b);
        };
        // zig-zag generators: for phi: i -> i' in I and f': u(i') -> j,
        // ((i, f' . u(phi)), d) ~ ((i', f'), D(phi)(d))
        for (int phi = 0; phi < I.num_morphisms(); ++phi) {
            int i = I.src(phi), i2 = I.dst(phi);
            for (int f2 = 0; f2 < J.num_morphisms(); ++f2) {
                if (J.src(f2) != u.on_obj[i2] || J.dst(f2) != j) continue;
                int f1 = J.compose(f2, u.on_morph[phi]);
                for (int d = 0; d < D.sizes[i]; ++d)
                    unite(index.at({i, f1, d}), index.at({i2, f2, D.on_morphisms[phi][d]}));
            }
        }
        int nclasses = 0;
        std::vector<int> cls(all.size(), -1);
        for (std::size_t t = 0; t < all.size(); ++t)
            if (find((int)t) == (int)t) cls[t] = nclasses++;
        for (std::size_t t = 0; t < all.size(); ++t) cls[t] = cls[find((int)t)];
        sizes[j] = nclasses;
        for (std::size_t t = 0; t < all.size(); ++t) {
            (*keys)[j][all[t]] = cls[t];
            if (repr_key[j].find(cls[t]) == repr_key[j].end()) repr_key[j][cls[t]] = all[t];
        }
    }

    // action of J-morphisms: k: j -> j' sends class((i, f), d) to
    // class((i, k . f), d)
    std::vector<std::vector<int>> om(J.num_morphisms());
    for (int k = 0; k < J.num_morphisms(); ++k) {
        int j = J.src(k), j2 = J.dst(k);
        om[k].resize(sizes[j]);
        for (int c = 0; c < sizes[j]; ++c) {
            Key key = repr_key[j].at(c);
            om[k][c] = (*keys)[j2].at({key.i, J.compose(k, key.f), key.d});
        }
    }
    LeftKan out;
    out.extended = Diagram(u.dst, std::move(sizes), std::move(om));
    out.class_of = [keys](int j, int i, int f, int d) {
        return (*keys)[j].at({i, f, d});
    };
    // unit at i: d |-> class((i, id_{u(i)}), d)
    std::vector<std::vector<int>> unit_comp(I.num_objects());
    for (int i = 0; i < I.num_objects(); ++i) {
        unit_comp[i].resize(D.sizes[i]);
        for (int d = 0; d < D.sizes[i]; ++d)
            unit_comp[i][d] = out.class_of(u.on_obj[i], i, J.identity(u.on_obj[i]), d);
    }
    out.unit = DiagramMap::validate(D, restrict_diagram(u, out.extended),
                                    std::move(unit_comp));
    return out;
}

/// Adjunction transposition: maps u_! D -> E correspond to maps D -> u* E.
inline DiagramMap adjoint_transpose_down(const GroupoidFunctor& u, const Diagram& D,
                                         const LeftKan& kan, const Diagram& E,
                                         const DiagramMap& t /* u_!D -> E */) {
    const FiniteGroupoid& I = *u.src;
    const FiniteGroupoid& J = *u.dst;
    std::vector<std::vector<int>> comp(I.num_objects());
    for (int i = 0; i < I.num_objects(); ++i) {
        comp[i].resize(D.sizes[i]);
        for (int d = 0; d < D.sizes[i]; ++d)
            comp[i][d] =
                t.components[u.on_obj[i]][kan.class_of(u.on_obj[i], i,
                                                       J.identity(u.on_obj[i]), d)];
    }
    return DiagramMap::validate(D, restrict_diagram(u, E), std::move(comp));
}

inline DiagramMap adjoint_transpose_up(const GroupoidFunctor& u, const Diagram& D,
                                       const LeftKan& kan, const Diagram& E,
                                       const DiagramMap& s /* D -> u* E */) {
    const FiniteGroupoid& J = *u.dst;
    std::vector<std::vector<int>> comp(J.num_objects());
    for (int j = 0; j < J.num_objects(); ++j) {
        comp[j].resize(kan.extended.sizes[j]);
        for (int i = 0; i < u.src->num_objects(); ++i)
            for (int f = 0; f < J.num_morphisms(); ++f) {
                if (J.src(f) != u.on_obj[i] || J.dst(f) != j) continue;
                for (int d = 0; d < D.sizes[i]; ++d)
                    comp[j][kan.class_of(j, i, f, d)] =
                        E.on_morphisms[f][s.components[i][d]];
            }
    }
    return DiagramMap::validate(kan.extended, E, std::move(comp));
}

/// Search a natural isomorphism between two diagrams on one shape. Each
/// connected component is anchored at its least object; the anchor bijection
/// must intertwine the loop actions and then extends along any path.
inline std::optional<DiagramMap> find_natural_iso(const Diagram& A, const Diagram& B) {
    const FiniteGroupoid& S = *A.shape;
    if (A.sizes != B.sizes) {
        // sizes can still match componentwise only if equal objectwise; a
        // natural iso needs equal sizes everywhere
        return std::nullopt;
    }
    std::vector<std::vector<int>> comp(S.num_objects());
    for (const auto& component : S.components()) {
        int a0 = component[0];
        int n = A.sizes[a0];
        // candidate bijections at the anchor, built by backtracking with
        // loop-equivariance pruning
        auto loops = S.automorphisms(a0);
        std::vector<int> bij(n, -1);
        std::vector<char> used(n, 0);
        std::function<bool(int)> rec = [&](int v) -> bool {
            if (v == n) {
                for (int l : loops)
                    for (int x = 0; x < n; ++x)
                        if (bij[A.on_morphisms[l][x]] != B.on_morphisms[l][bij[x]])
                            return false;
                return true;
            }
            for (int w = 0; w < n; ++w) {
                if (used[w]) continue;
                bij[v] = w;
                used[w] = 1;
                bool ok = true;
                for (int l : loops) {
                    int av = A.on_morphisms[l][v];
                    if (bij[av] >= 0 && bij[av] != B.on_morphisms[l][w]) ok = false;
                }
                if (ok && rec(v + 1)) return true;
                used[w] = 0;
                bij[v] = -1;
            }
            return false;
        };
        if (!rec(0)) return std::nullopt;
        comp[a0] = bij;
        // extend along a path to every other object
        std::vector<int> via(S.num_objects(), -1); // morphism a0 -> obj
        via[a0] = S.identity(a0);
        std::vector<int> queue{a0};
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            int cur = queue[qi];
            for (int m = 0; m < S.num_morphisms(); ++m) {
                int nxt = -1, path = -1;
                if (S.src(m) == cur && via[S.dst(m)] < 0) {
                    nxt = S.dst(m);
                    path = S.compose(m, via[cur]);
                } else if (S.dst(m) == cur && via[S.src(m)] < 0) {
                    nxt = S.src(m);
                    path = S.compose(S.inverse(m), via[cur]);
                }
                if (nxt >= 0) {
                    via[nxt] = path;
                    queue.push_back(nxt);
                }
            }
        }
        for (int obj : component) {
            if (obj == a0) continue;
            comp[obj].resize(A.sizes[obj]);
            int p = via[obj];
            // naturality forces comp_obj = B(p) . comp_a0 . A(p)^{-1}
            std::vector<int> ainv(A.sizes[obj]);
            for (int x = 0; x < A.sizes[a0]; ++x) ainv[A.on_morphisms[p][x]] = x;
            for (int x = 0; x < A.sizes[obj]; ++x)
                comp[obj][x] = B.on_morphisms[p][bij[ainv[x]]];
        }
    }
    // full validation
    try {
        DiagramMap m = DiagramMap::validate(A, B, comp);
        return m;
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

// --- comma squares -------------------------------------------------------------

struct CommaSquare {
    Groupoid comma;
    GroupoidFunctor p_left;  // comma -> src of u
    GroupoidFunctor p_right; // comma -> src of v
    std::vector<int> lambda; // per comma object: the morphism u(i) -> v(j) in K
};

/// Comma groupoid (u/v) for u: I -> K and v: J -> K: objects (i, j, f) with
/// f: u(i) -> v(j); morphisms pairs (phi, psi) with the square commuting.
inline CommaSquare comma_square(const GroupoidFunctor& u, const GroupoidFunctor& v) {
    const FiniteGroupoid& I = *u.src;
    const FiniteGroupoid& J = *v.src;
    const FiniteGroupoid& K = *u.dst;

    struct Obj {
        int i, j, f;
    };
    std::vector<Obj> objs;
    std::map<std::tuple<int, int, int>, int> oidx;
    for (int i = 0; i < I.num_objects(); ++i)
        for (int j = 0; j < J.num_objects(); ++j)
            for (int f = 0; f < K.num_morphisms(); ++f) {
                if (K.src(f) != u.on_obj[i] || K.dst(f) != v.on_obj[j]) continue;
                oidx[{i, j, f}] = (int)objs.size();
                objs.push_back({i, j, f});
            }
    struct Mor {
        int src, dst, phi, psi;
    };
    std::vector<Mor> mors;
    std::map<std::tuple<int, int, int>, int> midx; // (srcobj, phi, psi)
    for (int s = 0; s < (int)objs.size(); ++s)
        for (int phi = 0; phi < I.num_morphisms(); ++phi) {
            if (I.src(phi) != objs[s].i) continue;
            for (int psi = 0; psi < J.num_morphisms(); ++psi) {
                if (J.src(psi) != objs[s].j) continue;
                // f' . u(phi) = v(psi) . f
                int rhs = K.compose(v.on_morph[psi], objs[s].f);
                // f' = rhs . u(phi)^{-1}
                int fp = K.compose(rhs, K.inverse(u.on_morph[phi]));
                auto it = oidx.find({I.dst(phi), J.dst(psi), fp});
                if (it == oidx.end()) continue;
                midx[{s, phi, psi}] = (int)mors.size();
                mors.push_back({s, it->second, phi, psi});
            }
        }
    std::vector<FiniteGroupoid::Morph> morphs(mors.size());
    for (std::size_t m = 0; m < mors.size(); ++m) morphs[m] = {mors[m].src, mors[m].dst};
    std::vector<int> ids(objs.size());
    for (int o = 0; o < (int)objs.size(); ++o)
        ids[o] = midx.at({o, I.identity(objs[o].i), J.identity(objs[o].j)});
    std::vector<std::vector<int>> comp(mors.size(), std::vector<int>(mors.size(), -1));
    for (std::size_t m2 = 0; m2 < mors.size(); ++m2)
        for (std::size_t m1 = 0; m1 < mors.size(); ++m1) {
            if (mors[m1].dst != mors[m2].src) continue;
            comp[m2][m1] = midx.at({mors[m1].src, I.compose(mors[m2].phi, mors[m1].phi),
                                    J.compose(mors[m2].psi, mors[m1].psi)});
        }
    CommaSquare out;
    out.comma = FiniteGroupoid::make((int)objs.size(), std::move(morphs), std::move(ids),
                                     std::move(comp), /*validate=*/false);
    std::vector<int> poi(objs.size()), pom(mors.size());
    std::vector<int> qoi(objs.size()), qom(mors.size());
    for (int o = 0; o < (int)objs.size(); ++o) {
        poi[o] = objs[o].i;
        qoi[o] = objs[o].j;
    }
    for (std::size_t m = 0; m < mors.size(); ++m) {
        pom[m] = mors[m].phi;
        qom[m] = mors[m].psi;
    }
    out.p_left = GroupoidFunctor(out.comma, u.src, std::move(poi), std::move(pom));
    out.p_right = GroupoidFunctor(out.comma, v.src, std::move(qoi), std::move(qom));
    out.lambda.resize(objs.size());
    for (int o = 0; o < (int)objs.size(); ++o) out.lambda[o] = objs[o].f;
    return out;
}

/// Base change along a comma square: (p_right)_! (p_left)* D versus
/// v* u_! D; a natural isomorphism must exist (its choice is irrelevant).
inline bool base_change_check(const GroupoidFunctor& u, const GroupoidFunctor& v,
                              const CommaSquare& sq, const Diagram& D) {
    Diagram lhs = left_kan(sq.p_right, restrict_diagram(sq.p_left, D)).extended;
    Diagram rhs = restrict_diagram(v, left_kan(u, D).extended);
    return find_natural_iso(lhs, rhs).has_value();
}

// --- the semi-Mackey dictionary ---------------------------------------------------

/// Translate a diagram on el(X/G) into a G-set over X (points are the
/// fiberwise elements) and back.
struct SliceDictionary {
    ZeroCell base;
    Groupoid el_base;

    explicit SliceDictionary(ZeroCell b) : base(std::move(b)), el_base(el(base)) {}

    struct SliceSet {
        GSet total;
        std::vector<int> to_base;
    };

    SliceSet to_gset(const Diagram& D) const {
        const auto& G = *base.group();
        int n = 0;
        std::vector<int> offset(base.points() + 1, 0);
        for (int x = 0; x < base.points(); ++x) {
            offset[x + 1] = offset[x] + D.sizes[x];
            n = offset[x + 1];
        }
        std::vector<std::vector<int>> act(G.order(), std::vector<int>(n));
        std::vector<int> to_base(n);
        for (int x = 0; x < base.points(); ++x)
            for (int d = 0; d < D.sizes[x]; ++d) {
                to_base[offset[x] + d] = x;
                for (Elem g = 0; g < G.order(); ++g) {
                    int gx = base.set.act[g][x];
                    int m = x * G.order() + g; // morphism index in el(base)
                    act[g][offset[x] + d] = offset[gx] + D.on_morphisms[m][d];
                }
            }
        return {GSet(base.group(), n, std::move(act)), std::move(to_base)};
    }

    Diagram to_diagram(const GSet& A, const std::vector<int>& to_base) const {
        const auto& G = *base.group();
        std::vector<std::vector<int>> fibers(base.points());
        std::vector<int> pos(A.size, -1);
        for (int a = 0; a < A.size; ++a) {
            pos[a] = (int)fibers[to_base[a]].size();
            fibers[to_base[a]].push_back(a);
        }
        std::vector<int> sizes(base.points());
        for (int x = 0; x < base.points(); ++x) sizes[x] = (int)fibers[x].size();
        std::vector<std::vector<int>> om(base.points() * G.order());
        for (int x = 0; x < base.points(); ++x)
            for (Elem g = 0; g < G.order(); ++g) {
                auto& table = om[x * G.order() + g];
                table.resize(sizes[x]);
                for (int d = 0; d < sizes[x]; ++d) table[d] = pos[A.act[g][fibers[x][d]]];
            }
        return Diagram(el_base, std::move(sizes), std::move(om));
    }
};

/// Enumerate the isomorphism classes of diagrams on el(X/G) with all value
/// sizes bounded, through the dictionary: multisets of Burnside basis
/// classes with bounded fibers.
inline std::vector<BurnsideElement> bounded_classes(const ZeroCell& X, int max_fiber,
                                                    BurnsideBasisPtr basis) {
    // fiber profile of each basis element: points over each x
    int nb = basis->rank();
    std::vector<std::vector<int>> fiber(nb, std::vector<int>(X.points(), 0));
    for (int i = 0; i < nb; ++i)
        for (int p = 0; p < basis->entry(i).realization.size; ++p)
            fiber[i][basis->entry(i).to_base[p]] += 1;
    std::vector<BurnsideElement> out;
    std::vector<int> counts(nb, 0);
    std::function<void(int, const std::vector<int>&)> rec = [&](int i,
                                                                const std::vector<int>& used) {
        if (i == nb) {
            BurnsideElement e = BurnsideElement::zero(basis);
            for (int k = 0; k < nb; ++k) e.coeffs[k] = counts[k];
            out.push_back(std::move(e));
            return;
        }
        for (int c = 0;; ++c) {
            counts[i] = c;
            bool ok = true;
            std::vector<int> now = used;
            for (int x = 0; x < X.points(); ++x) {
                now[x] += c * fiber[i][x];
                if (now[x] > max_fiber) ok = false;
            }
            if (!ok) break;
            rec(i + 1, now);
        }
        counts[i] = 0;
    };
    std::vector<int> used(X.points(), 0);
    rec(0, used);
    return out;
}

/// Realize a Burnside class vector (with nonnegative integers) as a G-set
/// over X.
inline std::pair<GSet, std::vector<int>> realize_class(const BurnsideElement& e) {
    const BurnsideBasis& b = *e.basis;
    GSet total = GSet::empty(b.base().group());
    std::vector<int> to_base;
    for (int i = 0; i < b.rank(); ++i) {
        if (e.coeffs[i].is_zero()) continue;
        if (!e.coeffs[i].is_integer() || e.coeffs[i].num() < 0)
            throw std::invalid_argument("realize_class: not a nonnegative integer vector");
        for (long long c = 0; c < e.coeffs[i].num(); ++c) {
            total = total.disjoint_union(b.entry(i).realization);
            to_base.insert(to_base.end(), b.entry(i).to_base.begin(),
                           b.entry(i).to_base.end());
        }
    }
    return {std::move(total), std::move(to_base)};
}

} // namespace spanmack
