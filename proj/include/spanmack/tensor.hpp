#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "spanmack/green.hpp"
#include "spanmack/mackey.hpp"

namespace spanmack {

struct WindowExceeded : std::runtime_error {
    explicit WindowExceeded(const std::string& m) : std::runtime_error(m) {}
};

/// Finite truncation window for the coend: bounds on the slice objects and
/// on the morphism enumeration. The index category is infinite; nothing
/// here claims to compute the untruncated coend.
struct TruncationWindow {
    int max_group_order = 6;
    int max_set_size = 6;
    int max_orbits = 3;
};

/// One object of the truncated slice diagram: a structure cell A/K -> X/G.
struct SliceObject {
    OneCell structure;
    bool transitive = false;
    std::vector<int> component_of; // for multi-orbit objects: indices of the
                                   // transitive window objects of its pieces
    std::vector<int> component_offset; // point offsets of the pieces inside A
};

/// Enumerate slice objects over X within the window, one per isomorphism
/// class: transitive ones first (coset spaces with all cells into X), then
/// multi-orbit disjoint unions of those over a common group.
inline std::vector<SliceObject> enumerate_slice_objects(const GroupUniverse& uni,
                                                        const ZeroCell& X,
                                                        const TruncationWindow& w) {
    std::vector<SliceObject> out;
    std::vector<SpanPiece> seen; // collapsed forms for iso dedup
    ZeroCell pte = ZeroCell::point(FiniteGroup::trivial());
    auto collapsed = [&](const OneCell& cell) {
        auto ps = span_pieces(Span(terminal_cell(cell.src, pte), cell));
        return ps;
    };
    auto piece_known = [&](const SpanPiece& p) {
        for (const auto& q : seen)
            if (pieces_isomorphic(p, q, X, pte)) return true;
        return false;
    };

    struct TransData {
        int rep;       // universe rep of K
        Subgroup H;    // subgroup class rep
        int x;
        GroupHom f;    // H-as-group -> (stabilizer of x)-as-group target in G
        OneCell cell;
    };
    std::vector<TransData> trans;
    for (int r = 0; r < uni.size(); ++r) {
        const Group& K = uni.rep(r);
        if (K->order() > w.max_group_order) continue;
        const auto& lat = uni.entry(r).lattice;
        for (int cls = 0; cls < (int)lat.class_rep.size(); ++cls) {
            const Subgroup& H = lat.subgroups[lat.class_rep[cls]];
            GSet A = coset_gset(K, H);
            if (A.size > w.max_set_size) continue;
            auto comps = orbit_decompose(ZeroCell(A));
            const auto& c0 = comps[0];
            for (int x = 0; x < X.points(); ++x) {
                auto xstab = subgroup_as_group(*X.group(), X.set.stabilizer(x));
                for (const auto& f : all_homs(c0.stab.group, xstab.group)) {
                    // cell: A -> pt/H -> X through the collapse
                    GroupHom into_g(c0.stab.group, X.group(), [&] {
                        std::vector<Elem> m(c0.stab.group->order());
                        for (Elem l = 0; l < c0.stab.group->order(); ++l)
                            m[l] = xstab.elems[f.map[l]];
                        return m;
                    }());
                    OneCell point_cell =
                        OneCell::equivariant(c0.point_cell, X, {x}, into_g);
                    OneCell cell = compose_onecells(point_cell, c0.collapse);
                    auto ps = collapsed(cell);
                    if (ps.size() != 1) throw std::logic_error("slice enum: not transitive");
                    if (piece_known(ps[0])) continue;
                    seen.push_back(ps[0]);
                    SliceObject o;
                    o.structure = cell;
                    o.transitive = true;
                    out.push_back(std::move(o));
                    trans.push_back({r, H, x, f, cell});
                }
            }
        }
    }
    int ntrans = (int)out.size();

    // multi-orbit objects over a common group: disjoint unions of the
    // transitive ones over the same universe rep, up to max_set_size points
    // and max_orbits pieces; recorded with their component indices so the
    // inclusion relations can be generated without another search.
    std::vector<std::vector<int>> by_rep(uni.size());
    for (int t = 0; t < ntrans; ++t) by_rep[trans[t].rep].push_back(t);
    for (int r = 0; r < uni.size(); ++r) {
        const auto& ts = by_rep[r];
        if (ts.empty()) continue;
        // multisets as nondecreasing index sequences
        std::vector<int> stack;
        std::function<void(int, int)> rec = [&](int start, int used) {
            if ((int)stack.size() >= 2) {
                SliceObject o;
                o.transitive = false;
                GSet A = trans[stack[0]].cell.src.set;
                std::vector<int> alpha = trans[stack[0]].cell.alpha;
                std::vector<std::vector<Elem>> theta = trans[stack[0]].cell.theta;
                o.component_of = {stack[0]};
                o.component_offset = {0};
                for (std::size_t i = 1; i < stack.size(); ++i) {
                    o.component_offset.push_back(A.size);
                    o.component_of.push_back(stack[i]);
                    const OneCell& c = trans[stack[i]].cell;
                    A = A.disjoint_union(c.src.set);
                    alpha.insert(alpha.end(), c.alpha.begin(), c.alpha.end());
                    theta.insert(theta.end(), c.theta.begin(), c.theta.end());
                }
                o.structure = OneCell::trusted(ZeroCell(A), X, std::move(alpha),
                                               std::move(theta));
                out.push_back(std::move(o));
            }
            if ((int)stack.size() >= w.max_orbits) return;
            for (int i = start; i < (int)ts.size(); ++i) {
                int sz = trans[ts[i]].cell.src.points();
                if (used + sz > w.max_set_size) continue;
                stack.push_back(ts[i]);
                rec(i, used + sz);
                stack.pop_back();
            }
        };
        rec(0, 0);
    }
    return out;
}

/// A relation generator of the truncated coend: a sparse vector over the
/// ambient sum of M(A) (x) N(A).
struct TensorGenerator {
    int obj_plus;  // summand receiving the + part
    int obj_minus; // summand receiving the - part
    std::vector<Rational> plus;  // in M(A+) (x) N(A+), row-major m (x) n
    std::vector<Rational> minus; // in M(A-) (x) N(A-)
};

/// Stream the two relation-generator families over all window morphisms:
/// slice morphisms between transitive objects, plus component inclusions of
/// the multi-orbit objects. The callback receives each generator once.
inline void tensor_generators(const MackeyPresentation& M, const MackeyPresentation& N,
                              const ZeroCell& X, const std::vector<SliceObject>& objects,
                              const std::function<void(const TensorGenerator&)>& emit) {
    const GroupUniverse& uni = *M.universe;
    int nobj = (int)objects.size();
    std::vector<ValueBasis> mb, nb;
    for (const auto& o : objects) {
        mb.push_back(value_basis(uni, M, o.structure.src));
        nb.push_back(value_basis(uni, N, o.structure.src));
    }

    auto emit_families = [&](int o1, int o2, const OneCell& phi) {
        SpanLinComb tphi = SpanLinComb::from_span(lift_T(phi));
        SpanLinComb rphi = SpanLinComb::from_span(lift_R(phi));
        Mat Mstar = evaluate_span(M, rphi);   // M(A2) -> M(A1)
        Mat Mshriek = evaluate_span(M, tphi); // M(A1) -> M(A2)
        Mat Nstar = evaluate_span(N, rphi);
        Mat Nshriek = evaluate_span(N, tphi);
        int m1 = mb[o1].total, n1 = nb[o1].total;
        int m2 = mb[o2].total, n2 = nb[o2].total;
        // family 1: M*(phi)m' (x) n  -  m' (x) N_!(phi)n
        for (int mp = 0; mp < m2; ++mp)
            for (int nn = 0; nn < n1; ++nn) {
                TensorGenerator g;
                g.obj_plus = o1;
                g.obj_minus = o2;
                g.plus.assign(m1 * n1, Rational(0));
                for (int i = 0; i < m1; ++i) g.plus[i * n1 + nn] = Mstar(i, mp);
                g.minus.assign(m2 * n2, Rational(0));
                for (int i = 0; i < n2; ++i) g.minus[mp * n2 + i] = Nshriek(i, nn);
                emit(g);
            }
        // family 2: M_!(phi)m (x) n'  -  m (x) N*(phi)n'
        for (int mm = 0; mm < m1; ++mm)
            for (int np = 0; np < n2; ++np) {
                TensorGenerator g;
                g.obj_plus = o2;
                g.obj_minus = o1;
                g.plus.assign(m2 * n2, Rational(0));
                for (int i = 0; i < m2; ++i) g.plus[i * n2 + np] = Mshriek(i, mm);
                g.minus.assign(m1 * n1, Rational(0));
                for (int i = 0; i < n1; ++i) g.minus[mm * n1 + i] = Nstar(i, np);
                emit(g);
            }
    };

    // slice morphisms between transitive objects: per-orbit choices of a
    // target point and a stabilizer hom, kept when the slice triangle
    // commutes up to a 2-cell
    for (int o1 = 0; o1 < nobj; ++o1) {
        if (!objects[o1].transitive) continue;
        const OneCell& a1 = objects[o1].structure;
        auto comps = orbit_decompose(a1.src);
        const auto& c0 = comps[0];
        for (int o2 = 0; o2 < nobj; ++o2) {
            if (!objects[o2].transitive) continue;
            const OneCell& a2 = objects[o2].structure;
            for (int y = 0; y < a2.src.points(); ++y) {
                auto ystab = subgroup_as_group(*a2.src.group(), a2.src.set.stabilizer(y));
                for (const auto& h : all_homs(c0.stab.group, ystab.group)) {
                    GroupHom into(c0.stab.group, a2.src.group(), [&] {
                        std::vector<Elem> m(c0.stab.group->order());
                        for (Elem l = 0; l < c0.stab.group->order(); ++l)
                            m[l] = ystab.elems[h.map[l]];
                        return m;
                    }());
                    OneCell point_cell = OneCell::equivariant(c0.point_cell, a2.src, {y}, into);
                    OneCell phi = compose_onecells(point_cell, c0.collapse);
                    if (!find_twocell(compose_onecells(a2, phi), a1)) continue;
                    emit_families(o1, o2, phi);
                }
            }
        }
    }
    // component inclusions of multi-orbit objects
    for (int o2 = 0; o2 < nobj; ++o2) {
        if (objects[o2].transitive) continue;
        for (std::size_t ci = 0; ci < objects[o2].component_of.size(); ++ci) {
            int o1 = objects[o2].component_of[ci];
            int off = objects[o2].component_offset[ci];
            const OneCell& a1 = objects[o1].structure;
            std::vector<int> inc(a1.src.points());
            for (int p = 0; p < a1.src.points(); ++p) inc[p] = off + p;
            OneCell phi = OneCell::equivariant(a1.src, objects[o2].structure.src, std::move(inc),
                                               GroupHom::identity(a1.src_group()));
            emit_families(o1, o2, phi);
        }
    }
}

/// The truncated coend as a quotient presentation: ambient sum of
/// M(A) (x) N(A) over the window objects, modulo the span of the relation
/// generators.
struct TensorTruncation {
    std::vector<SliceObject> objects;
    std::vector<int> offsets;
    int ambient_dim = 0;
    Mat relations;  // rows span the relation submodule
    std::size_t relation_rank = 0;
    int quotient_rank = 0;
    Mat projection; // ambient -> quotient coordinates
};

inline TensorTruncation tensor_truncated(const MackeyPresentation& M,
                                         const MackeyPresentation& N, const ZeroCell& X,
                                         const TruncationWindow& w) {
    const GroupUniverse& uni = *M.universe;
    TensorTruncation out;
    out.objects = enumerate_slice_objects(uni, X, w);
    int nobj = (int)out.objects.size();
    out.offsets.assign(nobj + 1, 0);
    for (int o = 0; o < nobj; ++o) {
        int m = value_basis(uni, M, out.objects[o].structure.src).total;
        int n = value_basis(uni, N, out.objects[o].structure.src).total;
        out.offsets[o + 1] = out.offsets[o] + m * n;
    }
    out.ambient_dim = out.offsets[nobj];

    std::vector<std::vector<Rational>> rows;
    tensor_generators(M, N, X, out.objects, [&](const TensorGenerator& g) {
        std::vector<Rational> row(out.ambient_dim);
        for (std::size_t i = 0; i < g.plus.size(); ++i)
            row[out.offsets[g.obj_plus] + i] += g.plus[i];
        for (std::size_t i = 0; i < g.minus.size(); ++i)
            row[out.offsets[g.obj_minus] + i] -= g.minus[i];
        bool nonzero = false;
        for (const auto& v : row)
            if (!v.is_zero()) { nonzero = true; break; }
        if (nonzero) rows.push_back(std::move(row));
    });
    out.relations = Mat(std::max<std::size_t>(rows.size(), 1), (std::size_t)out.ambient_dim);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < out.ambient_dim; ++j) out.relations(i, j) = rows[i][j];
    Mat ech = out.relations;
    std::vector<std::size_t> piv;
    out.relation_rank = ech.echelonize(&piv);
    out.quotient_rank = out.ambient_dim - (int)out.relation_rank;
    std::vector<char> is_piv(out.ambient_dim, 0);
    for (auto c : piv) is_piv[c] = 1;
    out.projection = Mat((std::size_t)out.quotient_rank, (std::size_t)out.ambient_dim);
    int row = 0;
    for (int j = 0; j < out.ambient_dim; ++j) {
        if (is_piv[j]) continue;
        out.projection(row, j) = 1;
        for (std::size_t t = 0; t < piv.size(); ++t) out.projection(row, piv[t]) = -ech(t, j);
        ++row;
    }
    return out;
}

/// The representable internal hom: for M represented at W, the value at X
/// is N(W x X) with the span action transported through the product. The
/// W = pt/e case realizes the hom out of the unit as N itself.
struct RepresentableHom {
    ZeroCell window_cell; // W
    ValueBasis value;     // N(W x X)
};

inline RepresentableHom internal_hom_representable(const MackeyPresentation& N,
                                                   const ZeroCell& W, const ZeroCell& X) {
    RepresentableHom out;
    out.window_cell = W;
    out.value = value_basis(*N.universe, N, product_zerocell(W, X));
    return out;
}

/// The action of a span s: X -> Y on the representable internal hom values:
/// N(id_W x s): N(W x X) -> N(W x Y).
inline Mat representable_hom_action(const MackeyPresentation& N, const ZeroCell& W,
                                    const SpanLinComb& s) {
    return evaluate_span(N, product_lin(identity_lin(W), s));
}

// --- the multiplication functional -----------------------------------------------

/// The multiplication-to-values functional on a tensor summand: for a Green
/// structure Gamma and the summand at (A -> X), send m (x) n to
/// Gamma_!(structure)(m . n), landing in Gamma(X). Relation generators of
/// the truncated coend must be annihilated when the multiplication descends
/// to the tensor (the well-definedness certificate).
struct MultiplicationFunctional {
    const GreenStructure* green;
    ZeroCell base;

    /// functional matrix on the summand of one slice object:
    /// Gamma(X)-coordinates x (rankM(A) * rankN(A))
    Mat on_object(const SliceObject& obj) const {
        const MackeyPresentation& GM = *green->functor;
        const GroupUniverse& uni = *GM.universe;
        ValueBasis vb = value_basis(uni, GM, obj.structure.src);
        ValueBasis vx = value_basis(uni, GM, base);
        Mat push = evaluate_span(GM, SpanLinComb::from_span(lift_T(obj.structure)));
        Mat out((std::size_t)vx.total, (std::size_t)(vb.total * vb.total));
        // blockwise multiplication: classes on different orbits multiply to 0
        for (const auto& b : vb.blocks) {
            for (int k = 0; k < b.rank; ++k)
                for (int l = 0; l < b.rank; ++l) {
                    std::vector<Rational> ek(b.rank), el(b.rank);
                    ek[k] = 1;
                    el[l] = 1;
                    std::vector<Rational> prod =
                        green->mult[b.rep_idx][k].apply(el); // e_k . e_l at the rep
                    // embed into the A-value, push to X
                    std::vector<Rational> at_a(vb.total);
                    for (int i = 0; i < b.rank; ++i) at_a[b.offset + i] = prod[i];
                    std::vector<Rational> at_x = push.apply(at_a);
                    int col = (b.offset + k) * vb.total + (b.offset + l);
                    for (int i = 0; i < vx.total; ++i) out(i, col) = at_x[i];
                }
        }
        return out;
    }

    /// Apply to a generator; zero means the generator is annihilated.
    std::vector<Rational> apply(const std::vector<SliceObject>& objects,
                                const TensorGenerator& g) const {
        Mat fp = on_object(objects[g.obj_plus]);
        Mat fm = on_object(objects[g.obj_minus]);
        auto vp = fp.apply(g.plus);
        auto vm = fm.apply(g.minus);
        for (std::size_t i = 0; i < vp.size(); ++i) vp[i] -= vm[i];
        return vp;
    }
};

} // namespace spanmack
