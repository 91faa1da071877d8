#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spanmack/burnside.hpp"
#include "spanmack/matrix.hpp"
#include "spanmack/span.hpp"
#include "spanmack/universe.hpp"

namespace spanmack {

struct NotDeflative : std::runtime_error {
    explicit NotDeflative(const std::string& m) : std::runtime_error(m) {}
};

/// Finite tabulated Mackey functor over a group universe: a free-module
/// rank per representative and exact matrices for the five generator
/// families (induction and restriction for subgroups, inflation and
/// deflation for quotients, transport along automorphisms). Every span
/// evaluation reduces to these through orbit collapapse and image
/// factorization; that reduction is evaluate_span below.
class MackeyPresentation {
public:
    UniversePtr universe;
    std::vector<int> ranks;
    // aligned with the universe catalogs
    std::vector<std::vector<Mat>> ind, res; // per rep, per subgroup entry
    std::vector<std::vector<Mat>> inf, def; // per rep, per quotient entry
    /// Transport along automorphisms, supplied lazily: automorphism groups
    /// can be large (GL(4,2) for C2^4) while evaluation only ever touches a
    /// few of them.
    std::function<Mat(int rep, const GroupHom& aut)> conj_provider;

    int rank_of(int rep) const { return ranks[rep]; }

    Mat conj_of(int rep, int aut_index) const {
        {
            std::lock_guard<std::mutex> lk(mu_);
            auto it = conj_cache_.find({rep, aut_index});
            if (it != conj_cache_.end()) return it->second;
        }
        Mat m = conj_provider(rep, universe->entry(rep).automorphisms[aut_index]);
        std::lock_guard<std::mutex> lk(mu_);
        conj_cache_.emplace(std::make_pair(rep, aut_index), m);
        return m;
    }

    /// Functoriality spot-checks on the catalogued generators; throws on
    /// malformed shapes, returns a list of violated identities.
    std::vector<std::string> validate(int samples = 0) const;

    /// Contravariant value of a hom f between representatives (through the
    /// image factorization): M(R') -> M(R) for f: R -> R'.
    Mat star_of_hom(int rsrc, int rdst, const GroupHom& f) const {
        return hom_matrix(rsrc, rdst, f, false);
    }
    /// Covariant value: M(R) -> M(R') for f: R -> R'.
    Mat shriek_of_hom(int rsrc, int rdst, const GroupHom& f) const {
        return hom_matrix(rsrc, rdst, f, true);
    }

private:
    Mat hom_matrix(int rsrc, int rdst, const GroupHom& f, bool covariant) const {
        {
            std::lock_guard<std::mutex> lk(mu_);
            auto it = hom_memo_.find({covariant, rsrc, rdst, f.map});
            if (it != hom_memo_.end()) return it->second;
        }
        const auto& src_entry = universe->entry(rsrc);
        const auto& dst_entry = universe->entry(rdst);

        // image subgroup of the destination representative
        std::set<Elem> img_set(f.map.begin(), f.map.end());
        Subgroup img(img_set.begin(), img_set.end());
        const auto& sub = dst_entry.subs[dst_entry.sub_index.at(img)];

        // kernel as a normal subgroup of the source representative
        Subgroup ker = f.kernel();
        const auto& quot = src_entry.quots[src_entry.quot_index.at(ker)];
        if (quot.rep_of != sub.rep_of)
            throw std::logic_error("MackeyPresentation: image/quotient rep mismatch");
        int q = quot.rep_of;

        // the automorphism of reps[q] induced by f between the two
        // identifications: a(sigma(l)) = psi(f(l))
        const Group& Q = universe->rep(q);
        std::vector<Elem> amap(Q->order(), -1);
        for (Elem l = 0; l < f.src->order(); ++l) {
            Elem z = quot.sigma.map[l];
            Elem w = sub.psi.map[sub.emb.index_of[f.map[l]]];
            if (amap[z] >= 0 && amap[z] != w)
                throw std::logic_error("MackeyPresentation: inconsistent induced map");
            amap[z] = w;
        }
        GroupHom a(Q, Q, amap);
        const auto& qe = universe->entry(q);
        Mat conj_a = conj_of(q, qe.aut_index.at(a.map));
        Mat result;
        if (covariant) {
            // M_!(f) = ind . conj(a) . def
            result = ind[rdst][dst_entry.sub_index.at(img)] * conj_a *
                     def[rsrc][src_entry.quot_index.at(ker)];
        } else {
            // M*(f) = inf . conj(a)^{-1} . res
            Mat conj_ainv = conj_of(q, qe.aut_index.at(a.inverse().map));
            result = inf[rsrc][src_entry.quot_index.at(ker)] * conj_ainv *
                     res[rdst][dst_entry.sub_index.at(img)];
        }
        std::lock_guard<std::mutex> lk(mu_);
        hom_memo_.emplace(std::make_tuple(covariant, rsrc, rdst, f.map), result);
        return result;
    }

    mutable std::mutex mu_;
    mutable std::map<std::tuple<bool, int, int, std::vector<Elem>>, Mat> hom_memo_;
    mutable std::map<std::pair<int, int>, Mat> conj_cache_;
};

using MackeyPtr = std::shared_ptr<const MackeyPresentation>;

/// The additive value basis of a presentation at a 0-cell.
inline ValueBasis value_basis(const GroupUniverse& uni, const MackeyPresentation& M,
                              const ZeroCell& Z) {
    ValueBasis vb;
    vb.cell = Z;
    int off = 0;
    for (Orbit& o : orbits(Z.set)) {
        ValueBasis::Block b;
        b.orbit_rep = o.rep;
        b.stab = subgroup_as_group(*Z.group(), o.stabilizer);
        auto [idx, phi] = uni.find(b.stab.group);
        b.rep_idx = idx;
        b.phi = std::move(phi);
        b.offset = off;
        b.rank = M.rank_of(idx);
        off += b.rank;
        b.orbit = std::move(o);
        vb.blocks.push_back(std::move(b));
    }
    vb.total = off;
    return vb;
}
inline ValueBasis value_basis(const MackeyPresentation& M, const ZeroCell& Z) {
    return value_basis(*M.universe, M, Z);
}

namespace detail {

/// Reduce one foot of a span piece: the point x and hom f: L -> G_x become
/// a hom between universe representatives, through the canonical orbit
/// transport and the catalogued identifications.
struct ReducedFoot {
    int block;     // value-basis block index
    GroupHom fbar; // reps[L_idx] -> reps[block rep]
};

inline ReducedFoot reduce_foot(const ValueBasis& vb, const Group& Lrep, const GroupHom& psiL_inv,
                               int x, const GroupHom& f) {
    const auto& G = *vb.cell.group();
    for (int bi = 0; bi < (int)vb.blocks.size(); ++bi) {
        const auto& b = vb.blocks[bi];
        auto& pts = b.orbit.points;
        if (!std::binary_search(pts.begin(), pts.end(), x)) continue;
        Elem sigma = b.orbit.send_to(x); // sigma . rep = x
        Elem g0 = G.inv(sigma);          // g0 . x = rep
        std::vector<Elem> fbar(Lrep->order());
        for (Elem lr = 0; lr < Lrep->order(); ++lr) {
            Elem in_g = G.conj(g0, f.map[psiL_inv.map[lr]]);
            Elem in_stab = b.stab.index_of[in_g];
            if (in_stab < 0) throw std::logic_error("reduce_foot: transport left stabilizer");
            fbar[lr] = b.phi.map[in_stab];
        }
        Group target = b.phi.dst;
        return {bi, GroupHom(Lrep, target, std::move(fbar))};
    }
    throw std::logic_error("reduce_foot: point not found");
}

} // namespace detail

/// Evaluate a linear combination of spans as a matrix between the canonical
/// value bases of the domain and codomain.
inline Mat evaluate_span(const MackeyPresentation& M, const SpanLinComb& s) {
    const GroupUniverse& uni = *M.universe;
    ValueBasis vdom = value_basis(uni, M, s.dom);
    ValueBasis vcod = value_basis(uni, M, s.cod);
    Mat out((std::size_t)vcod.total, (std::size_t)vdom.total);
    for (const auto& [coeff, p] : s.terms) {
        auto [Lidx, psiL] = uni.find(p.L);
        GroupHom psiL_inv = psiL.inverse();
        const Group& Lrep = uni.rep(Lidx);
        auto domfoot = detail::reduce_foot(vdom, Lrep, psiL_inv, p.x, p.f);
        auto codfoot = detail::reduce_foot(vcod, Lrep, psiL_inv, p.y, p.u);
        Mat mstar = M.star_of_hom(Lidx, vdom.blocks[domfoot.block].rep_idx, domfoot.fbar);
        Mat mshriek = M.shriek_of_hom(Lidx, vcod.blocks[codfoot.block].rep_idx, codfoot.fbar);
        Mat piece = mshriek * mstar;
        int roff = vcod.blocks[codfoot.block].offset;
        int coff = vdom.blocks[domfoot.block].offset;
        for (std::size_t i = 0; i < piece.rows(); ++i)
            for (std::size_t j = 0; j < piece.cols(); ++j)
                out(roff + i, coff + j) += coeff * piece(i, j);
    }
    return out;
}

inline Mat evaluate_span(const MackeyPresentation& M, const Span& s) {
    return evaluate_span(M, SpanLinComb::from_span(s));
}

// --- deflativity ---------------------------------------------------------------

struct DeflativityReport {
    bool deflative = true;
    // on failure: the stab-surjective self-span with F(s) != id
    std::optional<SpanLinComb> witness;
    std::string where;
};

/// def(q) . inf(q) = id for every quotient in the universe catalog. By the
/// generator factorization this is the deflativity condition restricted to
/// the universe.
inline DeflativityReport is_deflative(const MackeyPresentation& M) {
    const GroupUniverse& uni = *M.universe;
    for (int r = 0; r < uni.size(); ++r) {
        const auto& e = uni.entry(r);
        for (int qi = 0; qi < (int)e.quots.size(); ++qi) {
            const auto& q = e.quots[qi];
            Mat comp = M.def[r][qi] * M.inf[r][qi];
            if (comp == Mat::identity(M.rank_of(q.rep_of))) continue;
            DeflativityReport rep;
            rep.deflative = false;
            rep.where = "def.inf != id at rep " + std::to_string(r) + " quotient by |N|=" +
                        std::to_string(q.N.size());
            // witness: [pt/Q <-sigma- pt/R -sigma-> pt/Q]
            OneCell cell = OneCell::point_hom(q.sigma);
            rep.witness = SpanLinComb::from_span(Span(cell, cell));
            return rep;
        }
    }
    return {};
}

// --- the Burnside presentation ---------------------------------------------------

/// The ordinary Burnside functor tabulated over a universe, with all
/// generator matrices computed through i / big structure maps / p.
inline std::shared_ptr<MackeyPresentation> omega_presentation(UniversePtr uni) {
    auto M = std::make_shared<MackeyPresentation>();
    M->universe = uni;
    int n = uni->size();
    M->ranks.resize(n);
    M->ind.resize(n);
    M->res.resize(n);
    M->inf.resize(n);
    M->def.resize(n);
    for (int r = 0; r < n; ++r) {
        const auto& e = uni->entry(r);
        ZeroCell pt = ZeroCell::point(uni->rep(r));
        M->ranks[r] = OmegaMaps::instance().basis_for(pt)->rank();
        for (const auto& s : e.subs) {
            GroupHom up = compose(GroupHom(s.emb.group, uni->rep(r), s.emb.elems),
                                  s.psi.inverse());
            OneCell cell = OneCell::point_hom(up);
            M->ind[r].push_back(omega_push(cell));
            M->res[r].push_back(omega_pull(cell));
        }
        for (const auto& q : e.quots) {
            OneCell cell = OneCell::point_hom(q.sigma);
            M->def[r].push_back(omega_push(cell));
            M->inf[r].push_back(omega_pull(cell));
        }
    }
    M->conj_provider = [](int, const GroupHom& a) {
        return omega_push(OneCell::point_hom(a));
    };
    return M;
}

/// Change of basis from the additive value basis of the Burnside
/// presentation at Z to the canonical Burnside basis of Z (a permutation).
inline Mat omega_value_to_burnside(const GroupUniverse& uni, const MackeyPresentation& omega,
                                   const ValueBasis& vb, const BurnsideBasis& bb) {
    Mat P((std::size_t)bb.rank(), (std::size_t)vb.total);
    for (const auto& b : vb.blocks) {
        ZeroCell pt = ZeroCell::point(uni.rep(b.rep_idx));
        auto rb = OmegaMaps::instance().basis_for(pt);
        for (int k = 0; k < rb->rank(); ++k) {
            // subgroup class rep of reps[b.rep_idx], pulled back to the parent
            const Subgroup& Kbar = rb->entry(k).H;
            GroupHom phi_inv = b.phi.inverse();
            Subgroup K;
            for (Elem z : Kbar) K.push_back(b.stab.elems[phi_inv.map[z]]);
            std::sort(K.begin(), K.end());
            P(bb.classify(K, b.orbit_rep), b.offset + k) = 1;
        }
    }
    return P;
}

// --- the deflative reflection -----------------------------------------------------

struct Reflection {
    std::shared_ptr<MackeyPresentation> reflected;
    std::vector<Mat> projection; // per rep: M(rep) -> reflected(rep)
    std::vector<Mat> section;    // per rep: right inverse of the projection
};

/// Quotient by the smallest subfunctor containing every im(def.inf - id):
/// the deflative reflection, with its levelwise projection.
inline Reflection reflect_deflative(const MackeyPresentation& M) {
    const GroupUniverse& uni = *M.universe;
    int n = uni.size();
    // generating vectors of the kernel subfunctor, per rep
    std::vector<std::vector<std::vector<Rational>>> gens(n);
    auto is_zero_vec = [](const std::vector<Rational>& v) {
        for (const auto& c : v)
            if (!c.is_zero()) return false;
        return true;
    };
    for (int r = 0; r < n; ++r) {
        const auto& e = uni.entry(r);
        for (int qi = 0; qi < (int)e.quots.size(); ++qi) {
            int q = e.quots[qi].rep_of;
            Mat d = M.def[r][qi] * M.inf[r][qi] - Mat::identity(M.rank_of(q));
            for (std::size_t j = 0; j < d.cols(); ++j) {
                std::vector<Rational> v(d.rows());
                for (std::size_t i = 0; i < d.rows(); ++i) v[i] = d(i, j);
                if (!is_zero_vec(v)) gens[q].push_back(std::move(v));
            }
        }
    }
    // closure under all catalogued maps until the ranks stabilize
    auto rank_of = [&](int r) {
        if (gens[r].empty()) return (std::size_t)0;
        Mat m(gens[r].size(), M.rank_of(r));
        for (std::size_t i = 0; i < gens[r].size(); ++i)
            for (int j = 0; j < M.rank_of(r); ++j) m(i, j) = gens[r][i][j];
        return m.rank();
    };
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::size_t> before(n);
        for (int r = 0; r < n; ++r) before[r] = rank_of(r);
        for (int r = 0; r < n; ++r) {
            const auto& e = uni.entry(r);
            auto push_through = [&](const Mat& m, int src, int dst) {
                // snapshot: src and dst can be the same rep
                auto source = gens[src];
                for (const auto& v : source) {
                    if ((int)v.size() != (int)m.cols()) continue;
                    auto w2 = m.apply(v);
                    if (!is_zero_vec(w2)) gens[dst].push_back(std::move(w2));
                }
                // keep the lists short: reduce to a spanning basis
                if (gens[dst].size() > 4 * (std::size_t)M.rank_of(dst)) {
                    Mat m2(gens[dst].size(), M.rank_of(dst));
                    for (std::size_t i = 0; i < gens[dst].size(); ++i)
                        for (int j = 0; j < M.rank_of(dst); ++j) m2(i, j) = gens[dst][i][j];
                    std::size_t rk = m2.echelonize();
                    std::vector<std::vector<Rational>> basis;
                    for (std::size_t i = 0; i < rk; ++i) {
                        std::vector<Rational> v(m2.cols());
                        for (std::size_t j = 0; j < m2.cols(); ++j) v[j] = m2(i, j);
                        basis.push_back(std::move(v));
                    }
                    gens[dst] = std::move(basis);
                }
            };
            for (int si = 0; si < (int)e.subs.size(); ++si) {
                push_through(M.ind[r][si], e.subs[si].rep_of, r);
                push_through(M.res[r][si], r, e.subs[si].rep_of);
            }
            for (int qi = 0; qi < (int)e.quots.size(); ++qi) {
                push_through(M.def[r][qi], r, e.quots[qi].rep_of);
                push_through(M.inf[r][qi], e.quots[qi].rep_of, r);
            }
            for (int ai = 0; ai < (int)e.automorphisms.size(); ++ai)
                push_through(M.conj_of(r, ai), r, r);
        }
        for (int r = 0; r < n; ++r)
            if (rank_of(r) != before[r]) grew = true;
        // prune to a basis to keep the generator lists small
        for (int r = 0; r < n; ++r) {
            if (gens[r].empty()) continue;
            Mat m(gens[r].size(), M.rank_of(r));
            for (std::size_t i = 0; i < gens[r].size(); ++i)
                for (int j = 0; j < M.rank_of(r); ++j) m(i, j) = gens[r][i][j];
            std::size_t rk = m.echelonize();
            std::vector<std::vector<Rational>> basis;
            for (std::size_t i = 0; i < rk; ++i) {
                std::vector<Rational> v(m.cols());
                for (std::size_t j = 0; j < m.cols(); ++j) v[j] = m(i, j);
                basis.push_back(std::move(v));
            }
            gens[r] = std::move(basis);
        }
    }

    // quotient coordinates: non-pivot coordinates of the kernel span
    Reflection out;
    out.reflected = std::make_shared<MackeyPresentation>();
    out.reflected->universe = M.universe;
    out.reflected->ranks.resize(n);
    out.projection.resize(n);
    out.section.resize(n);
    for (int r = 0; r < n; ++r) {
        int rk = M.rank_of(r);
        Mat K((std::size_t)std::max<std::size_t>(gens[r].size(), 1), (std::size_t)rk);
        for (std::size_t i = 0; i < gens[r].size(); ++i)
            for (int j = 0; j < rk; ++j) K(i, j) = gens[r][i][j];
        std::vector<std::size_t> piv;
        K.echelonize(&piv);
        std::vector<char> is_piv(rk, 0);
        for (auto c : piv) is_piv[c] = 1;
        int qrank = rk - (int)piv.size();
        out.reflected->ranks[r] = qrank;
        // quotient coordinates are the free (non-pivot) ones; the reduced
        // echelon rows give e_{piv[t]} = -sum over free j of K(t, j) e_j in
        // the quotient
        Mat proj((std::size_t)qrank, (std::size_t)rk);
        {
            int row = 0;
            for (int j = 0; j < rk; ++j) {
                if (is_piv[j]) continue;
                proj(row, j) = 1;
                for (std::size_t t = 0; t < piv.size(); ++t)
                    proj(row, piv[t]) = -K(t, j);
                ++row;
            }
        }
        out.projection[r] = proj;
        // section: free coordinates embed
        Mat sec((std::size_t)rk, (std::size_t)qrank);
        {
            int col = 0;
            for (int j = 0; j < rk; ++j) {
                if (is_piv[j]) continue;
                sec(j, col) = 1;
                ++col;
            }
        }
        out.section[r] = sec;
    }
    // transported matrices
    auto projection = out.projection;
    auto section = out.section;
    auto transport = [&](const Mat& m, int src, int dst) {
        return out.projection[dst] * m * out.section[src];
    };
    for (int r = 0; r < n; ++r) {
        const auto& e = uni.entry(r);
        out.reflected->ind.emplace_back();
        out.reflected->res.emplace_back();
        out.reflected->inf.emplace_back();
        out.reflected->def.emplace_back();
        for (int si = 0; si < (int)e.subs.size(); ++si) {
            out.reflected->ind[r].push_back(transport(M.ind[r][si], e.subs[si].rep_of, r));
            out.reflected->res[r].push_back(transport(M.res[r][si], r, e.subs[si].rep_of));
        }
        for (int qi = 0; qi < (int)e.quots.size(); ++qi) {
            out.reflected->def[r].push_back(transport(M.def[r][qi], r, e.quots[qi].rep_of));
            out.reflected->inf[r].push_back(transport(M.inf[r][qi], e.quots[qi].rep_of, r));
        }
    }
    // conj of the quotient: transported tables (the reflection is a
    // small-universe tool, eager tabulation is fine here)
    std::vector<std::vector<Mat>> conj_tables(n);
    for (int r = 0; r < n; ++r)
        for (int ai = 0; ai < (int)uni.entry(r).automorphisms.size(); ++ai)
            conj_tables[r].push_back(projection[r] * M.conj_of(r, ai) * section[r]);
    auto uni_ptr = M.universe;
    out.reflected->conj_provider = [conj_tables, uni_ptr](int rep, const GroupHom& a) {
        return conj_tables[rep][uni_ptr->entry(rep).aut_index.at(a.map)];
    };
    return out;
}

/// The Dress construction M_X = M(- x X), tabulated over a universe whose
/// products with X stay inside M's universe (the presented window must
/// shrink: the largest representative times X always escapes the original).
/// Value ranks come from the additive bases at the products; generator
/// matrices are evaluations of product spans. Throws UniverseExceeded when
/// a product stabilizer leaves M's universe.
inline std::shared_ptr<MackeyPresentation> dress(MackeyPtr Mptr, const ZeroCell& X,
                                                 UniversePtr over) {
    const MackeyPresentation& M = *Mptr;
    const GroupUniverse& uni = *over;
    auto D = std::make_shared<MackeyPresentation>();
    D->universe = over;
    int n = uni.size();
    D->ranks.resize(n);
    D->ind.resize(n);
    D->res.resize(n);
    D->inf.resize(n);
    D->def.resize(n);
    SpanLinComb idX = identity_lin(X);
    for (int r = 0; r < n; ++r) {
        ZeroCell pt = ZeroCell::point(uni.rep(r));
        D->ranks[r] = value_basis(*M.universe, M, product_zerocell(pt, X)).total;
    }
    for (int r = 0; r < n; ++r) {
        const auto& e = uni.entry(r);
        auto dressed = [&](const OneCell& cell, bool covariant) {
            Span lifted = covariant ? lift_T(cell) : lift_R(cell);
            return evaluate_span(M, product_lin(SpanLinComb::from_span(lifted), idX));
        };
        for (const auto& s : e.subs) {
            GroupHom up = compose(GroupHom(s.emb.group, uni.rep(r), s.emb.elems),
                                  s.psi.inverse());
            OneCell cell = OneCell::point_hom(up);
            D->ind[r].push_back(dressed(cell, true));
            D->res[r].push_back(dressed(cell, false));
        }
        for (const auto& q : e.quots) {
            OneCell cell = OneCell::point_hom(q.sigma);
            D->def[r].push_back(dressed(cell, true));
            D->inf[r].push_back(dressed(cell, false));
        }
    }
    // dressed conj: evaluated on demand (automorphism groups can be large)
    ZeroCell Xcopy = X;
    D->conj_provider = [Mptr, Xcopy](int, const GroupHom& a) {
        return evaluate_span(*Mptr,
                             product_lin(SpanLinComb::from_span(lift_T(OneCell::point_hom(a))),
                                         identity_lin(Xcopy)));
    };
    return D;
}

/// Morphism space Hom(M, N) in the tabulated category: families of matrices
/// commuting with every catalogued generator. Returns a basis, each entry a
/// per-rep block matrix.
inline std::vector<std::vector<Mat>> mackey_hom_space(const MackeyPresentation& M,
                                                      const MackeyPresentation& N) {
    const GroupUniverse& uni = *M.universe;
    int n = uni.size();
    // unknowns: phi_r (rankN_r x rankM_r)
    std::vector<int> off(n + 1, 0);
    for (int r = 0; r < n; ++r) off[r + 1] = off[r] + N.rank_of(r) * M.rank_of(r);
    int unknowns = off[n];
    std::vector<std::vector<Rational>> rows;
    auto emit = [&](const Mat& a, int rsrc, int rdst, const Mat& b) {
        // condition: phi_dst . a = b . phi_src  (a: M-side, b: N-side)
        for (int i = 0; i < N.rank_of(rdst); ++i)
            for (int j = 0; j < M.rank_of(rsrc); ++j) {
                std::vector<Rational> row(unknowns);
                // (phi_dst . a)(i, j) = sum_k phi_dst(i, k) a(k, j)
                for (int k = 0; k < M.rank_of(rdst); ++k)
                    row[off[rdst] + i * M.rank_of(rdst) + k] += a(k, j);
                // (b . phi_src)(i, j) = sum_k b(i, k) phi_src(k, j)
                for (int k = 0; k < N.rank_of(rsrc); ++k)
                    row[off[rsrc] + k * M.rank_of(rsrc) + j] -= b(i, k);
                rows.push_back(std::move(row));
            }
    };
    for (int r = 0; r < n; ++r) {
        const auto& e = uni.entry(r);
        for (int si = 0; si < (int)e.subs.size(); ++si) {
            emit(M.ind[r][si], e.subs[si].rep_of, r, N.ind[r][si]);
            emit(M.res[r][si], r, e.subs[si].rep_of, N.res[r][si]);
        }
        for (int qi = 0; qi < (int)e.quots.size(); ++qi) {
            emit(M.def[r][qi], r, e.quots[qi].rep_of, N.def[r][qi]);
            emit(M.inf[r][qi], e.quots[qi].rep_of, r, N.inf[r][qi]);
        }
        for (int ai = 0; ai < (int)e.automorphisms.size(); ++ai)
            emit(M.conj_of(r, ai), r, r, N.conj_of(r, ai));
    }
    Mat sys(rows.size(), (std::size_t)unknowns);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < unknowns; ++j) sys(i, j) = rows[i][j];
    Mat ker = sys.kernel();
    std::vector<std::vector<Mat>> basis;
    for (std::size_t c = 0; c < ker.cols(); ++c) {
        std::vector<Mat> phi(n);
        for (int r = 0; r < n; ++r) {
            phi[r] = Mat((std::size_t)N.rank_of(r), (std::size_t)M.rank_of(r));
            for (int i = 0; i < N.rank_of(r); ++i)
                for (int j = 0; j < M.rank_of(r); ++j)
                    phi[r](i, j) = ker(off[r] + i * M.rank_of(r) + j, c);
        }
        basis.push_back(std::move(phi));
    }
    return basis;
}

inline std::vector<std::string> MackeyPresentation::validate(int) const {
    std::vector<std::string> bad;
    const GroupUniverse& uni = *universe;
    for (int r = 0; r < uni.size(); ++r) {
        const auto& e = uni.entry(r);
        // identity entries: the full subgroup and the trivial quotient
        Subgroup full;
        for (Elem g = 0; g < uni.rep(r)->order(); ++g) full.push_back(g);
        auto it = e.sub_index.find(full);
        if (it != e.sub_index.end()) {
            const auto& s = e.subs[it->second];
            // ind/res along the identity-like inclusion must be conj moves
            Mat m = ind[r][it->second] * res[r][it->second];
            if (!(m.rows() == m.cols())) bad.push_back("shape mismatch at rep " + std::to_string(r));
            (void)s;
        }
        // conj functoriality: conj(a) conj(b) = conj(ab); inner = identity
        int nauts = (int)e.automorphisms.size();
        if (nauts <= 48) {
            for (int ai = 0; ai < nauts; ++ai)
                for (int bi = 0; bi < nauts; ++bi) {
                    GroupHom ab = compose(e.automorphisms[ai], e.automorphisms[bi]);
                    Mat lhs = conj_of(r, ai) * conj_of(r, bi);
                    if (lhs != conj_of(r, e.aut_index.at(ab.map))) {
                        bad.push_back("conj not functorial at rep " + std::to_string(r));
                        goto next_rep;
                    }
                }
        }
        for (Elem g = 0; g < uni.rep(r)->order(); ++g) {
            std::vector<Elem> cmap(uni.rep(r)->order());
            for (Elem x = 0; x < uni.rep(r)->order(); ++x) cmap[x] = uni.rep(r)->conj(g, x);
            auto iti = e.aut_index.find(cmap);
            if (iti == e.aut_index.end()) continue;
            if (conj_of(r, iti->second) != Mat::identity(rank_of(r))) {
                bad.push_back("inner automorphism acts nontrivially at rep " +
                              std::to_string(r));
                break;
            }
        }
    next_rep:;
    }
    return bad;
}

} // namespace spanmack
