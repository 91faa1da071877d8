#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "spanmack/factorization.hpp"
#include "spanmack/matrix.hpp"
#include "spanmack/span.hpp"

namespace spanmack {

struct BasisMismatch : std::runtime_error {
    explicit BasisMismatch(const std::string& m) : std::runtime_error(m) {}
};
struct BaseMismatch : std::runtime_error {
    explicit BaseMismatch(const std::string& m) : std::runtime_error(m) {}
};

/// Canonical basis of the Burnside module of a 0-cell X/G: transitive
/// G-sets over X, tagged by pairs (subgroup H, fixed point x of H) up to
/// simultaneous conjugacy. The canonical tag is the lexicographically least
/// conjugate pair; entries are sorted by descending |H|, then by tag.
class BurnsideBasis {
public:
    struct Entry {
        Subgroup H;
        int x;
        GSet realization;          // G/H as a G-set
        std::vector<int> to_base;  // realization point -> point of X
    };

    explicit BurnsideBasis(ZeroCell base, int order_limit = 64) : base_(std::move(base)) {
        const auto& G = *base_.group();
        auto lat = subgroup_lattice(G, order_limit);
        std::map<std::pair<Subgroup, int>, int> seen;
        for (const auto& H : lat.subgroups) {
            for (int x = 0; x < base_.points(); ++x) {
                bool fixed = true;
                for (Elem h : H)
                    if (base_.set.act[h][x] != x) { fixed = false; break; }
                if (!fixed) continue;
                auto tag = canonical_pair(H, x);
                if (seen.emplace(tag, 0).second) tags_.push_back(std::move(tag));
            }
        }
        std::sort(tags_.begin(), tags_.end(), [](const auto& a, const auto& b) {
            if (a.first.size() != b.first.size()) return a.first.size() > b.first.size();
            return a < b;
        });
        for (int i = 0; i < (int)tags_.size(); ++i) index_[tags_[i]] = i;
        for (auto& [H, x] : tags_) {
            Entry e;
            e.H = H;
            e.x = x;
            e.realization = coset_gset(base_.group(), H);
            // coset rep of point c: reconstruct by scanning (coset numbering
            // is by least member, in element order)
            std::vector<Elem> reps;
            std::vector<int> cst(G.order(), -1);
            for (Elem g = 0; g < G.order(); ++g) {
                if (cst[g] >= 0) continue;
                reps.push_back(g);
                for (Elem h : H) cst[G.mul(g, h)] = (int)reps.size() - 1;
            }
            e.to_base.resize(e.realization.size);
            for (int c = 0; c < e.realization.size; ++c)
                e.to_base[c] = base_.set.act[reps[c]][x];
            entries_.push_back(std::move(e));
        }
    }

    const ZeroCell& base() const { return base_; }
    int rank() const { return (int)entries_.size(); }
    const Entry& entry(int i) const { return entries_[i]; }

    /// Index of the class of a transitive piece given by (stabilizer K of a
    /// point, the point's image in X).
    int classify(const Subgroup& K, int x) const {
        auto it = index_.find(canonical_pair(K, x));
        if (it == index_.end()) throw std::logic_error("BurnsideBasis: unknown class");
        return it->second;
    }

    std::string label(int i) const {
        const auto& G = *base_.group();
        std::string s = "[" + (base_.group()->name().empty() ? "G" : base_.group()->name()) +
                        "/H" + std::to_string(i) + "|H|=" +
                        std::to_string(entries_[i].H.size());
        if (base_.points() > 1) s += ",x=" + std::to_string(entries_[i].x);
        (void)G;
        return s + "]";
    }

private:
    std::pair<Subgroup, int> canonical_pair(const Subgroup& K, int x) const {
        const auto& G = *base_.group();
        std::pair<Subgroup, int> best;
        bool first = true;
        for (Elem g = 0; g < G.order(); ++g) {
            std::pair<Subgroup, int> cand{conjugate_subgroup(G, K, g), base_.set.act[g][x]};
            if (first || cand < best) {
                best = std::move(cand);
                first = false;
            }
        }
        return best;
    }

    ZeroCell base_;
    std::vector<std::pair<Subgroup, int>> tags_;
    std::vector<Entry> entries_;
    std::map<std::pair<Subgroup, int>, int> index_;
};

using BurnsideBasisPtr = std::shared_ptr<const BurnsideBasis>;

inline BurnsideBasisPtr burnside_basis(ZeroCell base, int order_limit = 64) {
    return std::make_shared<BurnsideBasis>(std::move(base), order_limit);
}

struct BurnsideElement {
    BurnsideBasisPtr basis;
    std::vector<Rational> coeffs;

    static BurnsideElement zero(BurnsideBasisPtr b) {
        std::vector<Rational> c(b->rank());
        return {std::move(b), std::move(c)};
    }
    static BurnsideElement unit_vector(BurnsideBasisPtr b, int i) {
        auto e = zero(std::move(b));
        e.coeffs[i] = 1;
        return e;
    }
    bool operator==(const BurnsideElement& o) const { return coeffs == o.coeffs; }

    BurnsideElement& operator+=(const BurnsideElement& o) {
        if (basis->rank() != o.basis->rank()) throw BasisMismatch("BurnsideElement: +=");
        for (int i = 0; i < (int)coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
        return *this;
    }
};

/// Classify every orbit of a G-set-over-X and accumulate the class vector.
inline void classify_into(const BurnsideBasis& basis, const GSet& A,
                          const std::vector<int>& to_base, const Rational& coeff,
                          std::vector<Rational>& acc) {
    for (const Orbit& o : orbits(A))
        acc[basis.classify(o.stabilizer, to_base[o.rep])] += coeff;
}

/// Multiplication: fibered product over the base, orbit-decomposed.
inline BurnsideElement burnside_mul(const BurnsideElement& a, const BurnsideElement& b) {
    if (a.basis != b.basis && a.basis->base() != b.basis->base())
        throw BasisMismatch("burnside_mul: bases differ");
    const BurnsideBasis& basis = *a.basis;
    const auto& G = *basis.base().group();
    BurnsideElement out = BurnsideElement::zero(a.basis);
    for (int i = 0; i < basis.rank(); ++i) {
        if (a.coeffs[i].is_zero()) continue;
        for (int j = 0; j < basis.rank(); ++j) {
            if (b.coeffs[j].is_zero()) continue;
            const auto& A = basis.entry(i);
            const auto& B = basis.entry(j);
            // fibered product {(p, q) : to_base(p) = to_base(q)}
            std::vector<std::pair<int, int>> pts;
            std::map<std::pair<int, int>, int> idx;
            for (int p = 0; p < A.realization.size; ++p)
                for (int q = 0; q < B.realization.size; ++q)
                    if (A.to_base[p] == B.to_base[q]) {
                        idx[{p, q}] = (int)pts.size();
                        pts.push_back({p, q});
                    }
            std::vector<std::vector<int>> act(G.order(), std::vector<int>(pts.size()));
            std::vector<int> to_base(pts.size());
            for (int t = 0; t < (int)pts.size(); ++t) to_base[t] = A.to_base[pts[t].first];
            for (Elem g = 0; g < G.order(); ++g)
                for (int t = 0; t < (int)pts.size(); ++t)
                    act[g][t] = idx.at({A.realization.act[g][pts[t].first],
                                        B.realization.act[g][pts[t].second]});
            GSet fib = GSet::unchecked(basis.base().group(), (int)pts.size(), std::move(act));
            classify_into(basis, fib, to_base, a.coeffs[i] * b.coeffs[j], out.coeffs);
        }
    }
    return out;
}

/// Multiplicative unit: the class of the identity X -> X.
inline BurnsideElement burnside_unit(BurnsideBasisPtr basis) {
    BurnsideElement out = BurnsideElement::zero(basis);
    ZeroCell X = basis->base();
    std::vector<int> id(X.points());
    for (int i = 0; i < X.points(); ++i) id[i] = i;
    classify_into(*basis, X.set, id, Rational(1), out.coeffs);
    return out;
}

// --- the big Burnside functor ---------------------------------------------------
//
// Finitely supported elements of the big Burnside module of X/G are kept as
// canonical linear combinations of spans [pt/e <- A/K -> X/G]; the span
// canonicalization provides exactly the needed identification up to
// isomorphism in the slice category.

struct BigBurnsideElement {
    ZeroCell base;
    SpanLinComb combo; // dom = base, cod = pt/e

    static BigBurnsideElement zero(const ZeroCell& base) {
        return {base, SpanLinComb::zero(base, ZeroCell::point(FiniteGroup::trivial()))};
    }
    /// The class of a structure cell A/K -> X/G.
    static BigBurnsideElement from_cell(const OneCell& structure,
                                        const Rational& coeff = Rational(1)) {
        ZeroCell pt = ZeroCell::point(FiniteGroup::trivial());
        OneCell to_pt = terminal_cell(structure.src, pt);
        BigBurnsideElement out{structure.dst,
                               SpanLinComb::from_span(Span(to_pt, structure), coeff)};
        return out;
    }
    bool operator==(const BigBurnsideElement& o) const { return combo == o.combo; }
    BigBurnsideElement operator+(const BigBurnsideElement& o) const {
        return {base, combo + o.combo};
    }
};

/// i : Omega_G(X) -> Omega_big(X), embedding G-sets over X as equivariant
/// structure cells.
inline BigBurnsideElement map_i(const BurnsideElement& z) {
    const BurnsideBasis& basis = *z.basis;
    BigBurnsideElement out = BigBurnsideElement::zero(basis.base());
    for (int i = 0; i < basis.rank(); ++i) {
        if (z.coeffs[i].is_zero()) continue;
        const auto& e = basis.entry(i);
        auto emb = subgroup_as_group(*basis.base().group(), e.H);
        SpanPiece p;
        p.L = emb.group;
        p.x = e.x;
        p.f = inclusion_hom(basis.base().group(), emb);
        p.y = 0;
        p.u = GroupHom::trivial(emb.group, out.combo.cod.group());
        out.combo.terms.emplace_back(z.coeffs[i], std::move(p));
    }
    out.combo.canonicalize();
    return out;
}

/// p : Omega_big(X) -> Omega_G(X), reading off the stabilizerwise image of
/// each structure cell.
inline BurnsideElement map_p(const BigBurnsideElement& e, BurnsideBasisPtr basis) {
    if (!(basis->base() == e.base)) throw BaseMismatch("map_p: base mismatch");
    BurnsideElement out = BurnsideElement::zero(basis);
    for (const auto& [c, piece] : e.combo.terms) {
        OneCell structure =
            OneCell::equivariant(ZeroCell::point(piece.L), e.base, {piece.x}, piece.f);
        SImFactorization f = sim_factorize(structure);
        classify_into(*basis, f.sim_set, f.alpha_tilde.alpha, c, out.coeffs);
    }
    return out;
}

/// Covariant big structure map: compose structure cells with a.
inline BigBurnsideElement big_push(const OneCell& a, const BigBurnsideElement& e) {
    if (!(a.src == e.base)) throw EndpointMismatch("big_push: endpoints");
    BigBurnsideElement out = BigBurnsideElement::zero(a.dst);
    for (const auto& [c, piece] : e.combo.terms) {
        SpanPiece q;
        q.L = piece.L;
        q.x = a.alpha[piece.x];
        std::vector<Elem> fmap(piece.L->order());
        for (Elem l = 0; l < piece.L->order(); ++l) fmap[l] = a.theta[piece.x][piece.f.map[l]];
        q.f = GroupHom(piece.L, a.dst.group(), std::move(fmap));
        q.y = 0;
        q.u = GroupHom::trivial(piece.L, out.combo.cod.group());
        out.combo.terms.emplace_back(c, std::move(q));
    }
    out.combo.canonicalize();
    return out;
}

/// Contravariant big structure map: natural weak pullback along a.
inline BigBurnsideElement big_pull(const OneCell& a, const BigBurnsideElement& e) {
    if (!(a.dst == e.base)) throw EndpointMismatch("big_pull: endpoints");
    BigBurnsideElement out = BigBurnsideElement::zero(a.src);
    ZeroCell pt = out.combo.cod;
    for (const auto& [c, piece] : e.combo.terms) {
        OneCell structure =
            OneCell::equivariant(ZeroCell::point(piece.L), e.base, {piece.x}, piece.f);
        Bipullback bp = bipullback(a, structure, /*with_kappa=*/false);
        OneCell to_pt = terminal_cell(bp.apex, pt);
        Span back(to_pt, bp.wp_left);
        for (auto& q : span_pieces(back)) out.combo.terms.emplace_back(c, std::move(q));
    }
    out.combo.canonicalize();
    return out;
}

/// Product in the big Burnside ring: natural weak pullback over the base.
inline BigBurnsideElement big_mul(const BigBurnsideElement& e1, const BigBurnsideElement& e2) {
    if (!(e1.base == e2.base)) throw BaseMismatch("big_mul: bases differ");
    BigBurnsideElement out = BigBurnsideElement::zero(e1.base);
    ZeroCell pt = out.combo.cod;
    for (const auto& [c1, p1] : e1.combo.terms)
        for (const auto& [c2, p2] : e2.combo.terms) {
            OneCell s1 = OneCell::equivariant(ZeroCell::point(p1.L), e1.base, {p1.x}, p1.f);
            OneCell s2 = OneCell::equivariant(ZeroCell::point(p2.L), e2.base, {p2.x}, p2.f);
            Bipullback bp = bipullback(s1, s2, /*with_kappa=*/false);
            Span back(terminal_cell(bp.apex, pt), compose_onecells(s1, bp.wp_left));
            for (auto& q : span_pieces(back))
                out.combo.terms.emplace_back(c1 * c2, std::move(q));
        }
    out.combo.canonicalize();
    return out;
}

// --- the induced Mackey structure on the ordinary Burnside modules ---------------

/// Push/pull matrices of the ordinary Burnside functor along a 1-cell,
/// defined as p . (big push/pull) . i, in the canonical bases of source and
/// target. Memoized per 1-cell 2-cell-isomorphism class: candidates are
/// bucketed by the endpoint tables and reused only after an exact 2-cell
/// check.
class OmegaMaps {
public:
    static OmegaMaps& instance() {
        static OmegaMaps m;
        return m;
    }

    Mat push(const OneCell& a) { return get(a, true); }
    Mat pull(const OneCell& a) { return get(a, false); }

    BurnsideBasisPtr basis_for(const ZeroCell& z) {
        std::lock_guard<std::mutex> lk(mu_);
        for (auto& [cell, b] : bases_)
            if (cell == z) return b;
        auto b = burnside_basis(z);
        bases_.emplace_back(z, b);
        return b;
    }

private:
    Mat get(const OneCell& a, bool is_push) {
        {
            std::lock_guard<std::mutex> lk(mu_);
            for (auto& entry : memo_) {
                if (entry.is_push != is_push) continue;
                if (!(entry.cell.src == a.src) || !(entry.cell.dst == a.dst)) continue;
                if (entry.cell.alpha == a.alpha && entry.cell.theta == a.theta)
                    return entry.mat;
                if (find_twocell(entry.cell, a)) return entry.mat;
            }
        }
        BurnsideBasisPtr sb = basis_for(a.src);
        BurnsideBasisPtr db = basis_for(a.dst);
        const BurnsideBasisPtr& colb = is_push ? sb : db;
        const BurnsideBasisPtr& rowb = is_push ? db : sb;
        Mat m((std::size_t)rowb->rank(), (std::size_t)colb->rank());
        for (int j = 0; j < colb->rank(); ++j) {
            BigBurnsideElement big = map_i(BurnsideElement::unit_vector(colb, j));
            BigBurnsideElement moved = is_push ? big_push(a, big) : big_pull(a, big);
            BurnsideElement res = map_p(moved, rowb);
            for (int i = 0; i < rowb->rank(); ++i) m(i, j) = res.coeffs[i];
        }
        std::lock_guard<std::mutex> lk(mu_);
        memo_.push_back({a, is_push, m});
        return m;
    }

    struct MemoEntry {
        OneCell cell;
        bool is_push;
        Mat mat;
    };
    std::mutex mu_;
    std::vector<MemoEntry> memo_;
    std::vector<std::pair<ZeroCell, BurnsideBasisPtr>> bases_;
};

inline Mat omega_push(const OneCell& a) { return OmegaMaps::instance().push(a); }
inline Mat omega_pull(const OneCell& a) { return OmegaMaps::instance().pull(a); }

} // namespace spanmack
