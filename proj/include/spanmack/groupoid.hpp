#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace spanmack {

class FiniteGroupoid;
using Groupoid = std::shared_ptr<const FiniteGroupoid>;

/// Finite groupoid with explicitly listed morphisms. Morphisms are flat
/// indices; compose(f, g) means "f after g" and is defined only when
/// src(f) == dst(g).
class FiniteGroupoid {
public:
    struct Morph {
        int src;
        int dst;
    };

    static Groupoid make(int nobjects, std::vector<Morph> morphs,
                         std::vector<int> identity_of,
                         std::vector<std::vector<int>> comp_table,
                         bool validate_tables = true) {
        auto g = std::make_shared<FiniteGroupoid>(Private{});
        g->nobj_ = nobjects;
        g->morphs_ = std::move(morphs);
        g->id_ = std::move(identity_of);
        g->comp_ = std::move(comp_table);
        if (validate_tables) g->validate();
        g->fill_inverses();
        return g;
    }

    int num_objects() const { return nobj_; }
    int num_morphisms() const { return (int)morphs_.size(); }
    int src(int f) const { return morphs_[f].src; }
    int dst(int f) const { return morphs_[f].dst; }
    int identity(int obj) const { return id_[obj]; }
    int inverse(int f) const { return inv_[f]; }

    int compose(int f, int g) const { // f after g
        if (morphs_[g].dst != morphs_[f].src)
            throw std::invalid_argument("FiniteGroupoid: compose mismatch");
        return comp_[f][g];
    }

    std::vector<int> hom(int a, int b) const {
        std::vector<int> out;
        for (int f = 0; f < num_morphisms(); ++f)
            if (morphs_[f].src == a && morphs_[f].dst == b) out.push_back(f);
        return out;
    }

    /// Connected components, each listing its objects in ascending order.
    std::vector<std::vector<int>> components() const {
        std::vector<int> comp_of(nobj_, -1);
        int ncomp = 0;
        for (int o = 0; o < nobj_; ++o) {
            if (comp_of[o] >= 0) continue;
            std::vector<int> stack{o};
            comp_of[o] = ncomp;
            while (!stack.empty()) {
                int cur = stack.back();
                stack.pop_back();
                for (int f = 0; f < num_morphisms(); ++f) {
                    int other = -1;
                    if (morphs_[f].src == cur) other = morphs_[f].dst;
                    else if (morphs_[f].dst == cur) other = morphs_[f].src;
                    if (other >= 0 && comp_of[other] < 0) {
                        comp_of[other] = ncomp;
                        stack.push_back(other);
                    }
                }
            }
            ++ncomp;
        }
        std::vector<std::vector<int>> out(ncomp);
        for (int o = 0; o < nobj_; ++o) out[comp_of[o]].push_back(o);
        return out;
    }

    /// Loop morphisms at an object.
    std::vector<int> automorphisms(int obj) const { return hom(obj, obj); }

    void validate() const {
        if ((int)id_.size() != nobj_)
            throw std::invalid_argument("FiniteGroupoid: identity table size");
        for (int o = 0; o < nobj_; ++o)
            if (morphs_[id_[o]].src != o || morphs_[id_[o]].dst != o)
                throw std::invalid_argument("FiniteGroupoid: bad identity");
        if ((int)comp_.size() != num_morphisms())
            throw std::invalid_argument("FiniteGroupoid: comp table size");
        for (int f = 0; f < num_morphisms(); ++f)
            for (int g = 0; g < num_morphisms(); ++g) {
                if (morphs_[g].dst != morphs_[f].src) continue;
                int fg = comp_[f][g];
                if (fg < 0 || morphs_[fg].src != morphs_[g].src ||
                    morphs_[fg].dst != morphs_[f].dst)
                    throw std::invalid_argument("FiniteGroupoid: comp endpoints");
            }
        for (int f = 0; f < num_morphisms(); ++f)
            if (comp_[f][id_[morphs_[f].src]] != f || comp_[id_[morphs_[f].dst]][f] != f)
                throw std::invalid_argument("FiniteGroupoid: unit law");
        for (int f = 0; f < num_morphisms(); ++f)
            for (int g = 0; g < num_morphisms(); ++g) {
                if (morphs_[g].dst != morphs_[f].src) continue;
                for (int h = 0; h < num_morphisms(); ++h) {
                    if (morphs_[h].dst != morphs_[g].src) continue;
                    if (comp_[comp_[f][g]][h] != comp_[f][comp_[g][h]])
                        throw std::invalid_argument("FiniteGroupoid: not associative");
                }
            }
        // invertibility
        for (int f = 0; f < num_morphisms(); ++f) {
            bool has = false;
            for (int g : hom(morphs_[f].dst, morphs_[f].src))
                if (comp_[g][f] == id_[morphs_[f].src] && comp_[f][g] == id_[morphs_[f].dst])
                    has = true;
            if (!has) throw std::invalid_argument("FiniteGroupoid: morphism not invertible");
        }
    }

    struct Private {};
    explicit FiniteGroupoid(Private) {}

private:
    void fill_inverses() {
        inv_.assign(num_morphisms(), -1);
        for (int f = 0; f < num_morphisms(); ++f)
            for (int g : hom(morphs_[f].dst, morphs_[f].src))
                if (comp_[g][f] == id_[morphs_[f].src] && comp_[f][g] == id_[morphs_[f].dst]) {
                    inv_[f] = g;
                    break;
                }
    }

    int nobj_ = 0;
    std::vector<Morph> morphs_;
    std::vector<int> id_;
    std::vector<std::vector<int>> comp_; // comp_[f][g] = f . g
    std::vector<int> inv_;
};

/// Functor between finite groupoids, tabulated.
struct GroupoidFunctor {
    Groupoid src;
    Groupoid dst;
    std::vector<int> on_obj;
    std::vector<int> on_morph;

    GroupoidFunctor() = default;
    GroupoidFunctor(Groupoid s, Groupoid d, std::vector<int> oo, std::vector<int> om)
        : src(std::move(s)), dst(std::move(d)), on_obj(std::move(oo)), on_morph(std::move(om)) {
        validate();
    }

    static GroupoidFunctor identity(const Groupoid& g) {
        std::vector<int> oo(g->num_objects()), om(g->num_morphisms());
        for (int i = 0; i < g->num_objects(); ++i) oo[i] = i;
        for (int i = 0; i < g->num_morphisms(); ++i) om[i] = i;
        return GroupoidFunctor(g, g, std::move(oo), std::move(om));
    }

    friend GroupoidFunctor compose(const GroupoidFunctor& f, const GroupoidFunctor& g) {
        // f after g
        std::vector<int> oo(g.src->num_objects()), om(g.src->num_morphisms());
        for (int i = 0; i < g.src->num_objects(); ++i) oo[i] = f.on_obj[g.on_obj[i]];
        for (int i = 0; i < g.src->num_morphisms(); ++i) om[i] = f.on_morph[g.on_morph[i]];
        return GroupoidFunctor(g.src, f.dst, std::move(oo), std::move(om));
    }

    bool operator==(const GroupoidFunctor& o) const {
        return on_obj == o.on_obj && on_morph == o.on_morph;
    }

    bool is_essentially_surjective() const {
        std::set<int> hit;
        for (int o = 0; o < src->num_objects(); ++o) hit.insert(on_obj[o]);
        for (int o = 0; o < dst->num_objects(); ++o) {
            bool reached = false;
            for (int h : hit)
                if (!dst->hom(h, o).empty()) { reached = true; break; }
            if (!reached) return false;
        }
        return true;
    }

    bool is_fully_faithful() const {
        for (int a = 0; a < src->num_objects(); ++a)
            for (int b = 0; b < src->num_objects(); ++b) {
                auto in = src->hom(a, b);
                auto out = dst->hom(on_obj[a], on_obj[b]);
                if (in.size() != out.size()) return false;
                std::set<int> images;
                for (int f : in) images.insert(on_morph[f]);
                if (images.size() != in.size()) return false;
                for (int f : images)
                    if (std::find(out.begin(), out.end(), f) == out.end()) return false;
            }
        return true;
    }

    bool is_equivalence() const { return is_essentially_surjective() && is_fully_faithful(); }

private:
    void validate() const {
        if ((int)on_obj.size() != src->num_objects() ||
            (int)on_morph.size() != src->num_morphisms())
            throw std::invalid_argument("GroupoidFunctor: table sizes");
        for (int f = 0; f < src->num_morphisms(); ++f)
            if (dst->src(on_morph[f]) != on_obj[src->src(f)] ||
                dst->dst(on_morph[f]) != on_obj[src->dst(f)])
                throw std::invalid_argument("GroupoidFunctor: endpoints not preserved");
        for (int o = 0; o < src->num_objects(); ++o)
            if (on_morph[src->identity(o)] != dst->identity(on_obj[o]))
                throw std::invalid_argument("GroupoidFunctor: identities not preserved");
        for (int f = 0; f < src->num_morphisms(); ++f)
            for (int g = 0; g < src->num_morphisms(); ++g) {
                if (src->dst(g) != src->src(f)) continue;
                if (on_morph[src->compose(f, g)] != dst->compose(on_morph[f], on_morph[g]))
                    throw std::invalid_argument("GroupoidFunctor: composition not preserved");
            }
    }
};

/// Natural transformation between parallel groupoid functors.
struct GroupoidNatTrans {
    GroupoidFunctor from;
    GroupoidFunctor to;
    std::vector<int> component; // per source object, a morphism of dst

    GroupoidNatTrans(GroupoidFunctor f, GroupoidFunctor g, std::vector<int> c)
        : from(std::move(f)), to(std::move(g)), component(std::move(c)) {
        const FiniteGroupoid& D = *from.dst;
        if ((int)component.size() != from.src->num_objects())
            throw std::invalid_argument("GroupoidNatTrans: component count");
        for (int o = 0; o < from.src->num_objects(); ++o)
            if (D.src(component[o]) != from.on_obj[o] || D.dst(component[o]) != to.on_obj[o])
                throw std::invalid_argument("GroupoidNatTrans: component endpoints");
        for (int m = 0; m < from.src->num_morphisms(); ++m) {
            int a = from.src->src(m), b = from.src->dst(m);
            if (D.compose(component[b], from.on_morph[m]) !=
                D.compose(to.on_morph[m], component[a]))
                throw std::invalid_argument("GroupoidNatTrans: naturality fails");
        }
    }
};

} // namespace spanmack
