#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace spanmack {

using Elem = int; // group element index; identity is always 0

struct OrderLimitExceeded : std::runtime_error {
    explicit OrderLimitExceeded(const std::string& m) : std::runtime_error(m) {}
};
struct NonInjectiveHom : std::runtime_error {
    explicit NonInjectiveHom(const std::string& m) : std::runtime_error(m) {}
};

class FiniteGroup;
/// Shared immutable handle; everything downstream passes groups around by
/// this, so tables are never copied and references never dangle.
using Group = std::shared_ptr<const FiniteGroup>;

/// Finite group as a Cayley table. Identity is element 0. Immutable after
/// construction; all groups in scope have order <= ~24 so O(n^2) tables and
/// O(n^3) validation are cheap.
class FiniteGroup {
public:
    static Group from_table(std::vector<std::vector<Elem>> mul, std::string name = "") {
        auto g = std::make_shared<FiniteGroup>(Private{});
        g->mul_ = std::move(mul);
        g->name_ = std::move(name);
        g->finish(true);
        return g;
    }

    /// For tables that are valid by construction (products, subgroups,
    /// quotients of validated groups); skips the O(n^3) axiom check.
    static Group from_table_unchecked(std::vector<std::vector<Elem>> mul,
                                      std::string name = "") {
        auto g = std::make_shared<FiniteGroup>(Private{});
        g->mul_ = std::move(mul);
        g->name_ = std::move(name);
        g->finish(false);
        return g;
    }

    static Group trivial() { return from_table({{0}}, "e"); }

    static Group cyclic(int n) {
        std::vector<std::vector<Elem>> t(n, std::vector<Elem>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) t[i][j] = (i + j) % n;
        return from_table(std::move(t), "C" + std::to_string(n));
    }

    /// Dihedral group of order 2n: elements r^i (i<n) then s r^i.
    static Group dihedral(int n) {
        int m = 2 * n;
        auto idx = [n](int flip, int rot) { return flip * n + rot; };
        std::vector<std::vector<Elem>> t(m, std::vector<Elem>(m));
        for (int f1 = 0; f1 < 2; ++f1)
            for (int r1 = 0; r1 < n; ++r1)
                for (int f2 = 0; f2 < 2; ++f2)
                    for (int r2 = 0; r2 < n; ++r2) {
                        // (s^f1 r^r1)(s^f2 r^r2) = s^(f1+f2) r^(r2 ± r1)
                        int rot = f2 ? ((n - r1) % n + r2) % n : (r1 + r2) % n;
                        t[idx(f1, r1)][idx(f2, r2)] = idx((f1 + f2) % 2, rot);
                    }
        return from_table(std::move(t), "D" + std::to_string(n));
    }

    /// Dicyclic group of order 4n (n=2 gives the quaternion group Q8):
    /// <a,b | a^{2n}=e, b^2=a^n, bab^{-1}=a^{-1}>, elements a^i then b a^i.
    static Group dicyclic(int n) {
        int tn = 2 * n, m = 4 * n;
        auto idx = [tn](int bpow, int apow) { return bpow * tn + apow; };
        std::vector<std::vector<Elem>> t(m, std::vector<Elem>(m));
        for (int b1 = 0; b1 < 2; ++b1)
            for (int a1 = 0; a1 < tn; ++a1)
                for (int b2 = 0; b2 < 2; ++b2)
                    for (int a2 = 0; a2 < tn; ++a2) {
                        int apow, bpow;
                        if (b2 == 0) {
                            bpow = b1;
                            apow = (a1 + a2) % tn;
                        } else if (b1 == 0) {
                            // a^a1 b = b a^{-a1}
                            bpow = 1;
                            apow = ((tn - a1) % tn + a2) % tn;
                        } else {
                            // (b a^a1)(b a^a2) = b^2 a^{a2-a1} = a^{n-a1+a2}
                            bpow = 0;
                            apow = ((n + tn - a1) % tn + a2) % tn;
                        }
                        t[idx(b1, a1)][idx(b2, a2)] = idx(bpow, apow);
                    }
        std::string nm = (n == 2) ? "Q8" : "Dic" + std::to_string(n);
        return from_table(std::move(t), nm);
    }

    static Group symmetric(int n) {
        std::vector<std::vector<int>> gens;
        for (int i = 0; i + 1 < n; ++i) {
            std::vector<int> tr(n);
            std::iota(tr.begin(), tr.end(), 0);
            std::swap(tr[i], tr[i + 1]);
            gens.push_back(tr);
        }
        return from_perm_gens(gens, n, "S" + std::to_string(n));
    }

    static Group alternating(int n) {
        std::vector<std::vector<int>> gens;
        for (int i = 0; i + 2 < n; ++i) {
            std::vector<int> c(n);
            std::iota(c.begin(), c.end(), 0);
            c[i] = i + 1; c[i + 1] = i + 2; c[i + 2] = i;
            gens.push_back(c);
        }
        return from_perm_gens(gens, n, "A" + std::to_string(n));
    }

    /// Close permutation generators under composition; elements are indexed
    /// in BFS discovery order from the identity.
    static Group from_perm_gens(const std::vector<std::vector<int>>& gens, int degree,
                                std::string name = "") {
        std::vector<int> id(degree);
        std::iota(id.begin(), id.end(), 0);
        std::vector<std::vector<int>> elems{id};
        std::map<std::vector<int>, Elem> index{{id, 0}};
        for (std::size_t i = 0; i < elems.size(); ++i) {
            for (const auto& g : gens) {
                std::vector<int> prod(degree);
                for (int p = 0; p < degree; ++p) prod[p] = g[elems[i][p]];
                if (index.emplace(prod, (Elem)elems.size()).second)
                    elems.push_back(prod);
            }
        }
        int m = (int)elems.size();
        std::vector<std::vector<Elem>> t(m, std::vector<Elem>(m));
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) {
                std::vector<int> prod(degree);
                for (int p = 0; p < degree; ++p) prod[p] = elems[a][elems[b][p]];
                t[a][b] = index.at(prod);
            }
        return from_table(std::move(t), std::move(name));
    }

    /// Direct product; element (x, y) has index x * |b| + y. Memoized by
    /// handle identity since span composition rebuilds the same products
    /// over and over.
    static Group product(const Group& a, const Group& b) {
        // keys hold the factors alive, so the addresses stay unique
        static std::map<std::pair<Group, Group>, Group> cache;
        auto key = std::make_pair(a, b);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        int m = a->order() * b->order();
        auto idx = [&](Elem x, Elem y) { return x * b->order() + y; };
        std::vector<std::vector<Elem>> t(m, std::vector<Elem>(m));
        for (Elem x1 = 0; x1 < a->order(); ++x1)
            for (Elem y1 = 0; y1 < b->order(); ++y1)
                for (Elem x2 = 0; x2 < a->order(); ++x2)
                    for (Elem y2 = 0; y2 < b->order(); ++y2)
                        t[idx(x1, y1)][idx(x2, y2)] =
                            idx(a->mul(x1, x2), b->mul(y1, y2));
        Group p = from_table_unchecked(std::move(t), a->name() + "x" + b->name());
        if (cache.size() < 4096) cache.emplace(key, p);
        return p;
    }

    int order() const { return (int)mul_.size(); }
    Elem mul(Elem a, Elem b) const { return mul_[a][b]; }
    Elem inv(Elem a) const { return inv_[a]; }
    Elem conj(Elem g, Elem a) const { return mul(g, mul(a, inv(g))); } // g a g^-1
    int elem_order(Elem a) const { return elem_order_[a]; }

    const std::string& name() const { return name_; }
    const std::vector<std::vector<Elem>>& table() const { return mul_; }

    bool operator==(const FiniteGroup& o) const { return mul_ == o.mul_; }
    bool operator!=(const FiniteGroup& o) const { return !(*this == o); }

    /// Sorted multiset of element orders; cheap isomorphism prescreen.
    const std::vector<int>& order_profile() const { return order_profile_; }

    bool is_abelian() const {
        for (Elem a = 0; a < order(); ++a)
            for (Elem b = 0; b < a; ++b)
                if (mul(a, b) != mul(b, a)) return false;
        return true;
    }

    struct Private {};
    explicit FiniteGroup(Private) {}

private:
    void finish(bool validate_axioms) {
        int n = order();
        if (n == 0) throw std::invalid_argument("FiniteGroup: empty table");
        if (validate_axioms) {
            for (Elem a = 0; a < n; ++a) {
                if ((int)mul_[a].size() != n)
                    throw std::invalid_argument("FiniteGroup: ragged table");
                if (mul_[0][a] != a || mul_[a][0] != a)
                    throw std::invalid_argument("FiniteGroup: element 0 is not the identity");
            }
            for (Elem a = 0; a < n; ++a)
                for (Elem b = 0; b < n; ++b)
                    for (Elem c = 0; c < n; ++c)
                        if (mul_[mul_[a][b]][c] != mul_[a][mul_[b][c]])
                            throw std::invalid_argument("FiniteGroup: not associative");
        }
        inv_.assign(n, -1);
        for (Elem a = 0; a < n; ++a)
            for (Elem b = 0; b < n; ++b)
                if (mul_[a][b] == 0) inv_[a] = b;
        for (Elem a = 0; a < n; ++a)
            if (inv_[a] < 0) throw std::invalid_argument("FiniteGroup: missing inverse");
        elem_order_.assign(n, 0);
        for (Elem a = 0; a < n; ++a) {
            Elem x = a;
            int k = 1;
            while (x != 0) { x = mul_[x][a]; ++k; }
            elem_order_[a] = k;
        }
        order_profile_ = elem_order_;
        std::sort(order_profile_.begin(), order_profile_.end());
    }

    std::vector<std::vector<Elem>> mul_;
    std::vector<Elem> inv_;
    std::vector<int> elem_order_;
    std::vector<int> order_profile_;
    std::string name_;
};

inline bool same_group(const Group& a, const Group& b) {
    return a == b || *a == *b;
}

/// Group homomorphism given by its full value table.
struct GroupHom {
    Group src;
    Group dst;
    std::vector<Elem> map;

    GroupHom() = default;
    GroupHom(Group s, Group d, std::vector<Elem> m)
        : src(std::move(s)), dst(std::move(d)), map(std::move(m)) {
        validate();
    }

    static GroupHom identity(const Group& g) {
        std::vector<Elem> m(g->order());
        std::iota(m.begin(), m.end(), 0);
        return GroupHom(g, g, std::move(m));
    }
    static GroupHom trivial(const Group& s, const Group& d) {
        return GroupHom(s, d, std::vector<Elem>(s->order(), 0));
    }

    Elem operator()(Elem a) const { return map[a]; }

    bool is_injective() const {
        std::set<Elem> img(map.begin(), map.end());
        return (int)img.size() == src->order();
    }
    bool is_surjective() const {
        std::set<Elem> img(map.begin(), map.end());
        return (int)img.size() == dst->order();
    }
    bool is_isomorphism() const { return is_injective() && is_surjective(); }

    GroupHom inverse() const {
        if (!is_isomorphism()) throw std::domain_error("GroupHom: not invertible");
        std::vector<Elem> m(dst->order());
        for (Elem a = 0; a < src->order(); ++a) m[map[a]] = a;
        return GroupHom(dst, src, std::move(m));
    }

    friend GroupHom compose(const GroupHom& f, const GroupHom& g) {
        // f after g
        if (!same_group(g.dst, f.src))
            throw std::invalid_argument("GroupHom: compose mismatch");
        std::vector<Elem> m(g.src->order());
        for (Elem a = 0; a < g.src->order(); ++a) m[a] = f.map[g.map[a]];
        return GroupHom(g.src, f.dst, std::move(m));
    }

    std::vector<Elem> kernel() const {
        std::vector<Elem> k;
        for (Elem a = 0; a < src->order(); ++a)
            if (map[a] == 0) k.push_back(a);
        return k;
    }

private:
    void validate() const {
        if ((int)map.size() != src->order())
            throw std::invalid_argument("GroupHom: table size");
        if (map[0] != 0) throw std::invalid_argument("GroupHom: does not fix identity");
        for (Elem a = 0; a < src->order(); ++a)
            for (Elem b = 0; b < src->order(); ++b)
                if (map[src->mul(a, b)] != dst->mul(map[a], map[b]))
                    throw std::invalid_argument("GroupHom: not a homomorphism");
    }
};

/// Finite left G-set as an action table act[g][x].
struct GSet {
    Group group;
    int size = 0;
    std::vector<std::vector<int>> act; // act[g][x]

    GSet() = default;
    GSet(Group g, int n, std::vector<std::vector<int>> a)
        : group(std::move(g)), size(n), act(std::move(a)) {
        validate();
    }

    /// For action tables valid by construction; skips the axiom check.
    static GSet unchecked(Group g, int n, std::vector<std::vector<int>> a) {
        GSet s;
        s.group = std::move(g);
        s.size = n;
        s.act = std::move(a);
        return s;
    }

    static GSet trivial(const Group& g, int n) {
        std::vector<int> id(n);
        std::iota(id.begin(), id.end(), 0);
        return GSet(g, n, std::vector<std::vector<int>>(g->order(), id));
    }
    static GSet point(const Group& g) { return trivial(g, 1); }
    static GSet empty(const Group& g) {
        return GSet(g, 0, std::vector<std::vector<int>>(g->order()));
    }
    /// Left translation action of G on itself.
    static GSet regular(const Group& g) {
        std::vector<std::vector<int>> a(g->order(), std::vector<int>(g->order()));
        for (Elem x = 0; x < g->order(); ++x)
            for (Elem y = 0; y < g->order(); ++y) a[x][y] = g->mul(x, y);
        return GSet(g, g->order(), std::move(a));
    }

    int apply(Elem g, int x) const { return act[g][x]; }

    bool operator==(const GSet& o) const {
        return same_group(group, o.group) && size == o.size && act == o.act;
    }
    bool operator!=(const GSet& o) const { return !(*this == o); }

    std::vector<Elem> stabilizer(int x) const {
        std::vector<Elem> s;
        for (Elem g = 0; g < group->order(); ++g)
            if (act[g][x] == x) s.push_back(g);
        return s;
    }

    GSet disjoint_union(const GSet& other) const {
        if (!same_group(group, other.group))
            throw std::invalid_argument("GSet: union over different groups");
        int n = size + other.size;
        std::vector<std::vector<int>> a(group->order(), std::vector<int>(n));
        for (Elem g = 0; g < group->order(); ++g) {
            for (int x = 0; x < size; ++x) a[g][x] = act[g][x];
            for (int x = 0; x < other.size; ++x) a[g][size + x] = size + other.act[g][x];
        }
        return GSet(group, n, std::move(a));
    }

    /// Pull the action back along a homomorphism f: H -> G.
    GSet restrict_along(const GroupHom& f) const {
        if (!same_group(f.dst, group)) throw std::invalid_argument("GSet: restrict mismatch");
        std::vector<std::vector<int>> a(f.src->order());
        for (Elem h = 0; h < f.src->order(); ++h) a[h] = act[f.map[h]];
        return GSet(f.src, size, std::move(a));
    }

private:
    void validate() const {
        if ((int)act.size() != group->order())
            throw std::invalid_argument("GSet: table rows != order");
        for (const auto& row : act)
            if ((int)row.size() != size) throw std::invalid_argument("GSet: ragged table");
        for (int x = 0; x < size; ++x)
            if (act[0][x] != x) throw std::invalid_argument("GSet: identity must act trivially");
        for (Elem g = 0; g < group->order(); ++g)
            for (Elem h = 0; h < group->order(); ++h)
                for (int x = 0; x < size; ++x)
                    if (act[group->mul(g, h)][x] != act[g][act[h][x]])
                        throw std::invalid_argument("GSet: not a left action");
    }
};

struct EquivariantMap {
    GSet src;
    GSet dst;
    std::vector<int> map;

    EquivariantMap(GSet s, GSet d, std::vector<int> m)
        : src(std::move(s)), dst(std::move(d)), map(std::move(m)) {
        if (!same_group(src.group, dst.group))
            throw std::invalid_argument("EquivariantMap: groups differ");
        if ((int)map.size() != src.size) throw std::invalid_argument("EquivariantMap: size");
        for (Elem g = 0; g < src.group->order(); ++g)
            for (int x = 0; x < src.size; ++x)
                if (map[src.act[g][x]] != dst.act[g][map[x]])
                    throw std::invalid_argument("EquivariantMap: not equivariant");
    }
};

/// One orbit of a G-set: points (ascending), canonical representative
/// (the minimum point index), and the representative's stabilizer.
struct Orbit {
    std::vector<int> points;
    int rep = -1;
    std::vector<Elem> stabilizer;
    /// transversal[i] sends rep to points[i]; transversal at rep is e.
    std::vector<Elem> transversal;

    Elem send_to(int point) const {
        auto it = std::lower_bound(points.begin(), points.end(), point);
        return transversal[it - points.begin()];
    }
};

inline std::vector<Orbit> orbits(const GSet& X) {
    std::vector<Orbit> out;
    std::vector<int> seen(X.size, 0);
    for (int x0 = 0; x0 < X.size; ++x0) {
        if (seen[x0]) continue;
        Orbit o;
        o.rep = x0;
        std::vector<Elem> send_to(X.size, -1);
        send_to[x0] = 0;
        std::vector<int> queue{x0};
        seen[x0] = 1;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            int x = queue[qi];
            for (Elem g = 0; g < X.group->order(); ++g) {
                int y = X.act[g][x];
                if (!seen[y]) {
                    seen[y] = 1;
                    send_to[y] = X.group->mul(g, send_to[x]);
                    queue.push_back(y);
                }
            }
        }
        std::sort(queue.begin(), queue.end());
        o.points = queue;
        for (int p : o.points) o.transversal.push_back(send_to[p]);
        o.stabilizer = X.stabilizer(x0);
        out.push_back(std::move(o));
    }
    return out;
}

/// Result of the induction construction: the induced G-set together with the
/// class map (xi, x) -> point index.
struct Induced {
    GSet gset;
    std::vector<std::vector<int>> class_of; // class_of[xi][x]
};

/// Ind_iota X = (G x X)/~ where (xi,x) ~ (xi', x') iff x' = h x and
/// xi = xi' iota(h) for some h; G acts on the first coordinate. Classes are
/// numbered by their lexicographically least (xi, x) member.
inline Induced induce(const GroupHom& iota, const GSet& X) {
    if (!iota.is_injective()) throw NonInjectiveHom("induce: iota is not injective");
    if (!same_group(iota.src, X.group)) throw std::invalid_argument("induce: group mismatch");
    const FiniteGroup& G = *iota.dst;
    const FiniteGroup& H = *iota.src;
    int npairs = G.order() * X.size;
    auto pid = [&](Elem xi, int x) { return xi * X.size + x; };

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
    // (xi, x) ~ (xi iota(h), h^{-1} x)
    for (Elem xi = 0; xi < G.order(); ++xi)
        for (int x = 0; x < X.size; ++x)
            for (Elem h = 0; h < H.order(); ++h)
                unite(pid(xi, x), pid(G.mul(xi, iota.map[h]), X.act[H.inv(h)][x]));

    std::vector<int> cls(npairs, -1);
    int nclasses = 0;
    for (int p = 0; p < npairs; ++p)
        if (find(p) == p) cls[p] = nclasses++;
    for (int p = 0; p < npairs; ++p) cls[p] = cls[find(p)];

    std::vector<std::vector<int>> a(G.order(), std::vector<int>(nclasses, -1));
    for (Elem g = 0; g < G.order(); ++g)
        for (Elem xi = 0; xi < G.order(); ++xi)
            for (int x = 0; x < X.size; ++x)
                a[g][cls[pid(xi, x)]] = cls[pid(G.mul(g, xi), x)];

    Induced out{GSet(iota.dst, nclasses, std::move(a)), {}};
    out.class_of.assign(G.order(), std::vector<int>(X.size));
    for (Elem xi = 0; xi < G.order(); ++xi)
        for (int x = 0; x < X.size; ++x) out.class_of[xi][x] = cls[pid(xi, x)];
    return out;
}

/// Subgroup of an ambient group: sorted element list.
using Subgroup = std::vector<Elem>;

inline Subgroup closure(const FiniteGroup& G, std::vector<Elem> gens) {
    std::set<Elem> s(gens.begin(), gens.end());
    s.insert(0);
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<Elem> cur(s.begin(), s.end());
        for (Elem a : cur)
            for (Elem b : cur)
                if (s.insert(G.mul(a, b)).second) grew = true;
    }
    return Subgroup(s.begin(), s.end());
}

inline Subgroup conjugate_subgroup(const FiniteGroup& G, const Subgroup& H, Elem g) {
    Subgroup out;
    out.reserve(H.size());
    for (Elem h : H) out.push_back(G.conj(g, h));
    std::sort(out.begin(), out.end());
    return out;
}

struct SubgroupLattice {
    std::vector<Subgroup> subgroups; // all subgroups, lexicographically sorted
    std::vector<int> class_of;       // subgroup index -> conjugacy class
    std::vector<int> class_rep;      // class -> index of its representative
    std::map<Subgroup, int> index;

    int find(const Subgroup& h) const {
        auto it = index.find(h);
        if (it == index.end()) throw std::invalid_argument("SubgroupLattice: unknown subgroup");
        return it->second;
    }
};

/// All subgroups with conjugacy classes; the representative of each class is
/// the lexicographically least element subset in it.
inline SubgroupLattice subgroup_lattice(const FiniteGroup& G, int order_limit = 24) {
    if (G.order() > order_limit)
        throw OrderLimitExceeded("subgroup_lattice: order " + std::to_string(G.order()) +
                                 " exceeds limit " + std::to_string(order_limit));
    std::set<Subgroup> found;
    found.insert(Subgroup{0});
    std::vector<Subgroup> queue{Subgroup{0}};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
        Subgroup h = queue[qi];
        for (Elem g = 0; g < G.order(); ++g) {
            if (std::binary_search(h.begin(), h.end(), g)) continue;
            auto gens = h;
            gens.push_back(g);
            Subgroup bigger = closure(G, gens);
            if (found.insert(bigger).second) queue.push_back(bigger);
        }
    }
    SubgroupLattice lat;
    lat.subgroups.assign(found.begin(), found.end());
    int n = (int)lat.subgroups.size();
    lat.class_of.assign(n, -1);
    for (int i = 0; i < n; ++i) lat.index[lat.subgroups[i]] = i;
    for (int i = 0; i < n; ++i) {
        if (lat.class_of[i] >= 0) continue;
        int cls = (int)lat.class_rep.size();
        lat.class_rep.push_back(i);
        for (Elem g = 0; g < G.order(); ++g) {
            Subgroup c = conjugate_subgroup(G, lat.subgroups[i], g);
            lat.class_of[lat.index.at(c)] = cls;
        }
    }
    return lat;
}

/// A subgroup re-indexed as a standalone group, with translation both ways.
struct EmbeddedGroup {
    Group group;
    std::vector<Elem> elems;    // element i of `group` is elems[i] in the parent
    std::vector<Elem> index_of; // parent elem -> subgroup index (-1 outside)
};

inline EmbeddedGroup subgroup_as_group(const FiniteGroup& G, const Subgroup& H) {
    EmbeddedGroup e;
    e.elems = H;
    std::sort(e.elems.begin(), e.elems.end());
    if (e.elems.empty() || e.elems[0] != 0)
        throw std::invalid_argument("subgroup_as_group: missing identity");
    e.index_of.assign(G.order(), -1);
    for (int i = 0; i < (int)e.elems.size(); ++i) e.index_of[e.elems[i]] = i;
    int n = (int)e.elems.size();
    std::vector<std::vector<Elem>> t(n, std::vector<Elem>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Elem p = G.mul(e.elems[a], e.elems[b]);
            if (e.index_of[p] < 0) throw std::invalid_argument("subgroup_as_group: not closed");
            t[a][b] = e.index_of[p];
        }
    e.group = FiniteGroup::from_table_unchecked(std::move(t));
    return e;
}

inline GroupHom inclusion_hom(const Group& G, const EmbeddedGroup& H) {
    return GroupHom(H.group, G, H.elems);
}

/// Image factorization f = iota . q with q surjective onto the image and
/// iota injective.
struct HomFactorization {
    EmbeddedGroup image; // image as a subgroup of dst
    GroupHom q;          // src ->> image.group
    GroupHom iota;       // image.group -> dst
};

inline HomFactorization hom_image_factorization(const GroupHom& f) {
    std::set<Elem> img_set(f.map.begin(), f.map.end());
    Subgroup img(img_set.begin(), img_set.end());
    HomFactorization out;
    out.image = subgroup_as_group(*f.dst, img);
    std::vector<Elem> qmap(f.src->order());
    for (Elem a = 0; a < f.src->order(); ++a) qmap[a] = out.image.index_of[f.map[a]];
    out.q = GroupHom(f.src, out.image.group, std::move(qmap));
    out.iota = inclusion_hom(f.dst, out.image);
    return out;
}

inline bool is_normal(const FiniteGroup& G, const Subgroup& N) {
    for (Elem g = 0; g < G.order(); ++g)
        if (conjugate_subgroup(G, N, g) != N) return false;
    return true;
}

/// Quotient G/N for normal N with the projection hom. Cosets are numbered
/// in order of least member, so the identity coset is 0.
struct QuotientGroup {
    Group group;
    GroupHom proj; // the original group ->> group
};

inline QuotientGroup quotient_group(const Group& G, const Subgroup& N) {
    if (!is_normal(*G, N)) throw std::invalid_argument("quotient_group: not normal");
    std::vector<int> coset(G->order(), -1);
    std::vector<Elem> reps;
    for (Elem g = 0; g < G->order(); ++g) {
        if (coset[g] >= 0) continue;
        int c = (int)reps.size();
        reps.push_back(g);
        for (Elem n : N) coset[G->mul(g, n)] = c;
    }
    int m = (int)reps.size();
    std::vector<std::vector<Elem>> t(m, std::vector<Elem>(m));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) t[a][b] = coset[G->mul(reps[a], reps[b])];
    QuotientGroup q;
    q.group = FiniteGroup::from_table_unchecked(std::move(t));
    std::vector<Elem> pmap(coset.begin(), coset.end());
    q.proj = GroupHom(G, q.group, std::move(pmap));
    return q;
}

/// The coset G-set G/H with its natural left action; point 0 is the coset H.
inline GSet coset_gset(const Group& G, const Subgroup& H) {
    if (closure(*G, H) != H) throw std::invalid_argument("coset_gset: not a subgroup");
    std::vector<int> coset(G->order(), -1);
    std::vector<Elem> reps;
    for (Elem g = 0; g < G->order(); ++g) {
        if (coset[g] >= 0) continue;
        int c = (int)reps.size();
        reps.push_back(g);
        for (Elem h : H) coset[G->mul(g, h)] = c;
    }
    int m = (int)reps.size();
    std::vector<std::vector<int>> a(G->order(), std::vector<int>(m));
    for (Elem g = 0; g < G->order(); ++g)
        for (int c = 0; c < m; ++c) a[g][c] = coset[G->mul(g, reps[c])];
    return GSet(G, m, std::move(a));
}

namespace detail {

/// Short generating sequence picked greedily.
inline std::vector<Elem> generating_sequence(const FiniteGroup& G) {
    std::vector<Elem> gens;
    Subgroup have{0};
    for (Elem g = 1; g < G.order(); ++g) {
        if (std::binary_search(have.begin(), have.end(), g)) continue;
        gens.push_back(g);
        auto withg = have;
        withg.push_back(g);
        have = closure(G, withg);
        if ((int)have.size() == G.order()) break;
    }
    return gens;
}

/// Extend gens[i] |-> images[i] to the subgroup generated so far. Returns
/// the partial table (-1 where undefined) or nullopt on inconsistency.
inline std::optional<std::vector<Elem>> extend_partial_hom(const FiniteGroup& A,
                                                           const FiniteGroup& B,
                                                           const std::vector<Elem>& gens,
                                                           const std::vector<Elem>& images,
                                                           std::size_t upto) {
    std::vector<Elem> map(A.order(), -1);
    map[0] = 0;
    std::vector<Elem> known{0};
    for (std::size_t i = 0; i < upto; ++i) {
        if (map[gens[i]] >= 0) {
            if (map[gens[i]] != images[i]) return std::nullopt;
            continue;
        }
        map[gens[i]] = images[i];
        known.push_back(gens[i]);
        bool grew = true;
        while (grew) {
            grew = false;
            auto cur = known;
            for (Elem a : cur)
                for (Elem b : cur) {
                    Elem ab = A.mul(a, b);
                    Elem im = B.mul(map[a], map[b]);
                    if (map[ab] < 0) {
                        map[ab] = im;
                        known.push_back(ab);
                        grew = true;
                    } else if (map[ab] != im) {
                        return std::nullopt;
                    }
                }
        }
    }
    return map;
}

} // namespace detail

/// All homomorphisms A -> B, by backtracking over images of a generating
/// sequence with element-order pruning. Intended for small groups.
inline std::vector<GroupHom> all_homs(const Group& A, const Group& B) {
    auto gens = detail::generating_sequence(*A);
    std::vector<GroupHom> out;
    if (gens.empty()) {
        out.push_back(GroupHom::trivial(A, B));
        return out;
    }
    std::vector<Elem> images(gens.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        auto partial = detail::extend_partial_hom(*A, *B, gens, images, i);
        if (!partial) return;
        if (i == gens.size()) {
            bool total = true;
            for (Elem a = 0; a < A->order(); ++a)
                if ((*partial)[a] < 0) total = false;
            if (total) out.emplace_back(A, B, std::move(*partial));
            return;
        }
        for (Elem b = 0; b < B->order(); ++b) {
            if (A->elem_order(gens[i]) % B->elem_order(b) != 0) continue;
            images[i] = b;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

/// All isomorphisms A -> B; empty when not isomorphic.
inline std::vector<GroupHom> all_isomorphisms(const Group& A, const Group& B) {
    std::vector<GroupHom> out;
    if (A->order() != B->order() || A->order_profile() != B->order_profile()) return out;
    auto gens = detail::generating_sequence(*A);
    if (gens.empty()) {
        out.push_back(GroupHom::identity(A));
        return out;
    }
    std::vector<Elem> images(gens.size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        auto partial = detail::extend_partial_hom(*A, *B, gens, images, i);
        if (!partial) return;
        if (i == gens.size()) {
            GroupHom h(A, B, std::move(*partial));
            if (h.is_injective()) out.push_back(std::move(h));
            return;
        }
        for (Elem b = 0; b < B->order(); ++b) {
            if (B->elem_order(b) != A->elem_order(gens[i])) continue;
            images[i] = b;
            rec(i + 1);
        }
    };
    rec(0);
    return out;
}

/// First isomorphism A -> B in backtracking order, or nullopt.
inline std::optional<GroupHom> find_isomorphism(const Group& A, const Group& B) {
    if (A->order() != B->order() || A->order_profile() != B->order_profile())
        return std::nullopt;
    auto gens = detail::generating_sequence(*A);
    if (gens.empty()) return GroupHom::identity(A);
    std::optional<GroupHom> found;
    std::vector<Elem> images(gens.size(), 0);
    std::function<bool(std::size_t)> rec = [&](std::size_t i) {
        auto partial = detail::extend_partial_hom(*A, *B, gens, images, i);
        if (!partial) return false;
        if (i == gens.size()) {
            GroupHom h(A, B, std::move(*partial));
            if (h.is_injective()) {
                found = std::move(h);
                return true;
            }
            return false;
        }
        for (Elem b = 0; b < B->order(); ++b) {
            if (B->elem_order(b) != A->elem_order(gens[i])) continue;
            images[i] = b;
            if (rec(i + 1)) return true;
        }
        return false;
    };
    rec(0);
    return found;
}

} // namespace spanmack
