#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "spanmack/mackey.hpp"

namespace spanmack {

/// A Green structure on a tabulated Mackey functor: levelwise multiplication
/// tables (mult[r][k] = matrix of multiplication by the k-th basis element)
/// and levelwise unit vectors.
struct GreenStructure {
    MackeyPtr functor;
    std::vector<std::vector<Mat>> mult;
    std::vector<std::vector<Rational>> unit;

    Mat multiply_by(int r, const std::vector<Rational>& v) const {
        Mat m((std::size_t)functor->rank_of(r), (std::size_t)functor->rank_of(r));
        for (int k = 0; k < functor->rank_of(r); ++k)
            if (!v[k].is_zero()) m = m + v[k] * mult[r][k];
        return m;
    }
};

/// The Burnside Green structure: fibered-product multiplication, unit the
/// class of the one-point set (the image of p on the identity class).
inline GreenStructure omega_green(MackeyPtr omega) {
    GreenStructure g;
    g.functor = omega;
    const GroupUniverse& uni = *omega->universe;
    for (int r = 0; r < uni.size(); ++r) {
        ZeroCell pt = ZeroCell::point(uni.rep(r));
        auto b = OmegaMaps::instance().basis_for(pt);
        std::vector<Mat> mats;
        for (int k = 0; k < b->rank(); ++k) {
            Mat m((std::size_t)b->rank(), (std::size_t)b->rank());
            for (int j = 0; j < b->rank(); ++j) {
                auto prod = burnside_mul(BurnsideElement::unit_vector(b, k),
                                         BurnsideElement::unit_vector(b, j));
                for (int i = 0; i < b->rank(); ++i) m(i, j) = prod.coeffs[i];
            }
            mats.push_back(std::move(m));
        }
        g.mult.push_back(std::move(mats));
        g.unit.push_back(burnside_unit(b).coeffs);
    }
    return g;
}

/// Levelwise and compatibility checks for a Green structure. Returns the
/// names of violated identities (empty = pass).
inline std::vector<std::string> validate_green(const GreenStructure& g) {
    std::vector<std::string> bad;
    const MackeyPresentation& M = *g.functor;
    const GroupUniverse& uni = *M.universe;
    auto vec_mul = [&](int r, const Mat& bymat, const std::vector<Rational>& v) {
        return bymat.apply(v);
    };
    (void)vec_mul;
    for (int r = 0; r < uni.size(); ++r) {
        int rk = M.rank_of(r);
        // commutativity and associativity
        for (int k = 0; k < rk && bad.empty(); ++k)
            for (int j = 0; j < rk; ++j) {
                std::vector<Rational> ek(rk), ej(rk);
                ek[k] = 1;
                ej[j] = 1;
                if (g.mult[r][k].apply(ej) != g.mult[r][j].apply(ek)) {
                    bad.push_back("commutativity at rep " + std::to_string(r));
                    break;
                }
                // (e_k e_j) x = e_k (e_j x)
                Mat lhs = g.multiply_by(r, g.mult[r][k].apply(ej));
                Mat rhs = g.mult[r][k] * g.mult[r][j];
                if (lhs != rhs) {
                    bad.push_back("associativity at rep " + std::to_string(r));
                    break;
                }
            }
        // unit law
        if (g.multiply_by(r, g.unit[r]) != Mat::identity(rk))
            bad.push_back("unit law at rep " + std::to_string(r));
    }
    // restriction and inflation are ring maps; induction satisfies the
    // projection formula; deflation satisfies its Frobenius form
    for (int r = 0; r < uni.size(); ++r) {
        const auto& e = uni.entry(r);
        for (int si = 0; si < (int)e.subs.size(); ++si) {
            int h = e.subs[si].rep_of;
            const Mat& rs = M.res[r][si];
            const Mat& in = M.ind[r][si];
            if (rs.apply(g.unit[r]) != g.unit[h]) {
                bad.push_back("res does not preserve the unit at rep " + std::to_string(r));
                break;
            }
            bool ok = true;
            for (int k = 0; k < M.rank_of(r) && ok; ++k) {
                std::vector<Rational> ek(M.rank_of(r));
                ek[k] = 1;
                // res(e_k . x) = res(e_k) . res(x)
                Mat lhs = rs * g.mult[r][k];
                Mat rhs = g.multiply_by(h, rs.apply(ek)) * rs;
                if (lhs != rhs) {
                    bad.push_back("res not multiplicative at rep " + std::to_string(r));
                    ok = false;
                }
            }
            for (int k = 0; k < M.rank_of(h) && ok; ++k) {
                std::vector<Rational> ek(M.rank_of(h));
                ek[k] = 1;
                // ind(a . res(b)) = ind(a) . b
                Mat lhs = in * g.mult[h][k] * rs;
                Mat rhs = g.multiply_by(r, in.apply(ek));
                if (lhs != rhs) {
                    bad.push_back("projection formula fails at rep " + std::to_string(r));
                    ok = false;
                }
            }
        }
        for (int qi = 0; qi < (int)e.quots.size(); ++qi) {
            int q = e.quots[qi].rep_of;
            const Mat& nf = M.inf[r][qi];
            const Mat& df = M.def[r][qi];
            if (nf.apply(g.unit[q]) != g.unit[r]) {
                bad.push_back("inf does not preserve the unit at rep " + std::to_string(r));
                break;
            }
            bool ok = true;
            for (int k = 0; k < M.rank_of(q) && ok; ++k) {
                std::vector<Rational> ek(M.rank_of(q));
                ek[k] = 1;
                Mat lhs = nf * g.mult[q][k];
                Mat rhs = g.multiply_by(r, nf.apply(ek)) * nf;
                if (lhs != rhs) {
                    bad.push_back("inf not multiplicative at rep " + std::to_string(r));
                    ok = false;
                }
                // def(inf(a) . b) = a . def(b)
                Mat lhs2 = df * g.multiply_by(r, nf.apply(ek));
                Mat rhs2 = g.mult[q][k] * df;
                if (lhs2 != rhs2) {
                    bad.push_back("deflation Frobenius fails at rep " + std::to_string(r));
                    ok = false;
                }
            }
        }
        int nauts = (int)e.automorphisms.size();
        for (int ai = 0; ai < nauts && nauts <= 48; ++ai) {
            Mat c = M.conj_of(r, ai);
            if (c.apply(g.unit[r]) != g.unit[r]) {
                bad.push_back("conj does not preserve the unit at rep " + std::to_string(r));
                break;
            }
        }
    }
    return bad;
}

// --- module structures over the Burnside Green functor -----------------------

/// Levelwise action tables: act[r][k] = action of the k-th Burnside basis
/// class of reps[r] on M(reps[r]).
struct ModuleAction {
    std::vector<std::vector<Mat>> act;

    Mat act_by(const MackeyPresentation& M, int r, const std::vector<Rational>& v) const {
        Mat m((std::size_t)M.rank_of(r), (std::size_t)M.rank_of(r));
        for (std::size_t k = 0; k < act[r].size(); ++k)
            if (!v[k].is_zero()) m = m + v[k] * act[r][k];
        return m;
    }
};

/// The canonical action of the Burnside functor on a deflative M: the class
/// [R/K] acts as ind^R_K . res^R_K, the levelwise shadow of the unitor.
inline ModuleAction unique_action(const MackeyPresentation& M) {
    const GroupUniverse& uni = *M.universe;
    ModuleAction out;
    out.act.resize(uni.size());
    for (int r = 0; r < uni.size(); ++r) {
        ZeroCell pt = ZeroCell::point(uni.rep(r));
        auto b = OmegaMaps::instance().basis_for(pt);
        const auto& e = uni.entry(r);
        for (int k = 0; k < b->rank(); ++k) {
            int si = e.sub_index.at(b->entry(k).H);
            out.act[r].push_back(M.ind[r][si] * M.res[r][si]);
        }
    }
    return out;
}

/// Validate a candidate action: unit and associativity over the Burnside
/// structure constants, projection/deflation compatibility (the action is a
/// morphism of Mackey functors), and the unitor compatibility on the
/// catalogued big classes, which pins the action to unique_action.
inline std::vector<std::string> validate_module_action(const MackeyPresentation& M,
                                                       const ModuleAction& cand) {
    std::vector<std::string> bad;
    const GroupUniverse& uni = *M.universe;
    auto defl = is_deflative(M);
    if (!defl.deflative) {
        bad.push_back("module carrier is not deflative: " + defl.where);
        return bad;
    }
    MackeyPtr omega; // the Burnside presentation over the same universe
    {
        auto om = omega_presentation(M.universe);
        omega = om;
    }
    for (int r = 0; r < uni.size(); ++r) {
        ZeroCell pt = ZeroCell::point(uni.rep(r));
        auto b = OmegaMaps::instance().basis_for(pt);
        int rk = M.rank_of(r);
        // unit: [R/R] is basis entry 0
        if (cand.act[r].empty() || cand.act[r][0] != Mat::identity(rk)) {
            bad.push_back("unit action is not the identity at rep " + std::to_string(r));
            continue;
        }
        // associativity over structure constants
        for (int k = 0; k < b->rank(); ++k)
            for (int j = 0; j < b->rank(); ++j) {
                auto prod = burnside_mul(BurnsideElement::unit_vector(b, k),
                                         BurnsideElement::unit_vector(b, j));
                Mat rhs = cand.act_by(M, r, prod.coeffs);
                if (cand.act[r][k] * cand.act[r][j] != rhs) {
                    bad.push_back("action associativity fails at rep " + std::to_string(r));
                    goto next_rep;
                }
            }
    next_rep:;
    }
    // compatibility across the catalog: ind_M(a . res_M(m)) = ind_Omega(a) . m
    // and def_M(inf_Omega(b) . m) = b . def_M(m)
    for (int r = 0; r < uni.size() && bad.empty(); ++r) {
        const auto& e = uni.entry(r);
        for (int si = 0; si < (int)e.subs.size(); ++si) {
            int h = e.subs[si].rep_of;
            for (int k = 0; k < omega->rank_of(h); ++k) {
                std::vector<Rational> ek(omega->rank_of(h));
                ek[k] = 1;
                Mat lhs = M.ind[r][si] * cand.act[h][k] * M.res[r][si];
                Mat rhs = cand.act_by(M, r, omega->ind[r][si].apply(ek));
                if (lhs != rhs) {
                    bad.push_back("action projection formula fails at rep " +
                                  std::to_string(r));
                    break;
                }
            }
        }
        for (int qi = 0; qi < (int)e.quots.size(); ++qi) {
            int q = e.quots[qi].rep_of;
            for (int k = 0; k < omega->rank_of(q); ++k) {
                std::vector<Rational> ek(omega->rank_of(q));
                ek[k] = 1;
                Mat lhs = M.def[r][qi] * cand.act_by(M, r, omega->inf[r][qi].apply(ek));
                Mat rhs = cand.act[q][k] * M.def[r][qi];
                if (lhs != rhs) {
                    bad.push_back("action deflation compatibility fails at rep " +
                                  std::to_string(r));
                    break;
                }
            }
        }
    }
    // unitor compatibility: for the catalogued big classes a: A -> pt/R,
    // M_!(a) M*(a) = action of p([a]); on the basis classes this forces the
    // ind.res formula, so a valid candidate equals unique_action
    if (bad.empty()) {
        ModuleAction uq = unique_action(M);
        for (int r = 0; r < uni.size() && bad.empty(); ++r) {
            ZeroCell pt = ZeroCell::point(uni.rep(r));
            auto b = OmegaMaps::instance().basis_for(pt);
            for (int k = 0; k < b->rank(); ++k) {
                const auto& entry = b->entry(k);
                auto emb = subgroup_as_group(*uni.rep(r), entry.H);
                OneCell cell = OneCell::equivariant(ZeroCell(entry.realization), pt,
                                                    std::vector<int>(entry.realization.size, 0),
                                                    GroupHom::identity(uni.rep(r)));
                Mat unitor = evaluate_span(M, Span(cell, cell));
                if (unitor != cand.act[r][k]) {
                    bad.push_back("unitor compatibility fails at rep " + std::to_string(r) +
                                  " class " + std::to_string(k));
                    break;
                }
                (void)emb;
            }
            if (bad.empty()) {
                for (std::size_t k = 0; k < uq.act[r].size(); ++k)
                    if (!(uq.act[r][k] == cand.act[r][k])) {
                        bad.push_back("candidate deviates from the canonical action at rep " +
                                      std::to_string(r));
                        break;
                    }
            }
        }
    }
    return bad;
}

} // namespace spanmack
