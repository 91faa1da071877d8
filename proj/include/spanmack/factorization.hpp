#pragma once

#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "spanmack/cell.hpp"
#include "spanmack/group.hpp"

namespace spanmack {

struct NoMediator : std::runtime_error {
    explicit NoMediator(const std::string& m) : std::runtime_error(m) {}
};

/// Stab-surjectivity of a 1-cell a: X/G -> Y/H:
///   (i)  Y = H a(X), and
///   (ii) whenever h a(x) = h' a(x') there is g with x' = gx and
///        h = h' theta_x(g).
/// Condition (ii) is scanned as: for all x, x' and all d in H with
/// d a(x) = a(x'), some g has x' = gx and d = theta_x(g).
inline bool is_stab_surjective(const OneCell& a) {
    const auto& G = *a.src_group();
    const auto& H = *a.dst_group();
    const GSet& X = a.src.set;
    const GSet& Y = a.dst.set;

    std::vector<char> hit(Y.size, 0);
    for (int x = 0; x < X.size; ++x)
        for (Elem h = 0; h < H.order(); ++h) hit[Y.act[h][a.alpha[x]]] = 1;
    for (int y = 0; y < Y.size; ++y)
        if (!hit[y]) return false;

    for (int x = 0; x < X.size; ++x)
        for (int x2 = 0; x2 < X.size; ++x2)
            for (Elem d = 0; d < H.order(); ++d) {
                if (Y.act[d][a.alpha[x]] != a.alpha[x2]) continue;
                bool witnessed = false;
                for (Elem g = 0; g < G.order() && !witnessed; ++g)
                    if (X.act[g][x] == x2 && a.theta[x][g] == d) witnessed = true;
                if (!witnessed) return false;
            }
    return true;
}

/// The stabilizerwise-image factorization of a 1-cell a: X/G -> Y/H:
/// SIm(a) = (H x X)/~ with (eta, x) ~ (eta', x') iff x' = gx and
/// eta = eta' theta_x(g) for some g; H acts by h[eta, x] = [h eta, x].
/// upsilon: X/G -> SIm/H is (x |-> [e,x], theta) and is stab-surjective;
/// alpha_tilde: SIm/H -> Y/H is the equivariant [eta,x] |-> eta a(x).
struct SImFactorization {
    OneCell source;
    GSet sim_set;        // over H
    OneCell upsilon;     // X/G -> SIm/H, stab-surjective
    OneCell alpha_tilde; // SIm/H -> Y/H, equivariant
    std::vector<std::vector<int>> class_map; // (eta, x) -> class index
};

inline SImFactorization sim_factorize(const OneCell& a) {
    const auto& G = *a.src_group();
    const auto& H = *a.dst_group();
    const GSet& X = a.src.set;
    int npairs = H.order() * X.size;
    auto pid = [&](Elem eta, int x) { return eta * X.size + x; };

    std::vector<int> uf(npairs);
    std::iota(uf.begin(), uf.end(), 0);
    std::function<int(int)> find = [&](int v) {
        while (uf[v] != v) { uf[v] = uf[uf[v]]; v = uf[v]; }
        return v;
    };
    auto unite = [&](int p, int q) {
        p = find(p); q = find(q);
        if (p != q) uf[std::max(p, q)] = std::min(p, q);
    };
    // (eta, x) ~ (eta theta_x(g)^{-1}, g x)
    for (Elem eta = 0; eta < H.order(); ++eta)
        for (int x = 0; x < X.size; ++x)
            for (Elem g = 0; g < G.order(); ++g)
                unite(pid(eta, x), pid(H.mul(eta, H.inv(a.theta[x][g])), X.act[g][x]));

    std::vector<int> cls(npairs, -1);
    int nclasses = 0;
    for (int p = 0; p < npairs; ++p)
        if (find(p) == p) cls[p] = nclasses++;
    for (int p = 0; p < npairs; ++p) cls[p] = cls[find(p)];

    std::vector<std::vector<int>> act(H.order(), std::vector<int>(nclasses));
    for (Elem h = 0; h < H.order(); ++h)
        for (Elem eta = 0; eta < H.order(); ++eta)
            for (int x = 0; x < X.size; ++x)
                act[h][cls[pid(eta, x)]] = cls[pid(H.mul(h, eta), x)];
    GSet sim = GSet::unchecked(a.dst.group(), nclasses, std::move(act));
    ZeroCell simcell(sim);

    std::vector<int> ua(X.size);
    for (int x = 0; x < X.size; ++x) ua[x] = cls[pid(0, x)];
    OneCell upsilon = OneCell::trusted(a.src, simcell, std::move(ua), a.theta);

    std::vector<int> ta(nclasses, -1);
    for (Elem eta = 0; eta < H.order(); ++eta)
        for (int x = 0; x < X.size; ++x)
            ta[cls[pid(eta, x)]] = a.dst.set.act[eta][a.alpha[x]];
    OneCell alpha_tilde =
        OneCell::trusted(simcell, a.dst, std::move(ta),
                         std::vector<std::vector<Elem>>(nclasses, GroupHom::identity(a.dst.group()).map));

    SImFactorization out{a, std::move(sim), std::move(upsilon), std::move(alpha_tilde), {}};
    out.class_map.assign(H.order(), std::vector<int>(X.size));
    for (Elem eta = 0; eta < H.order(); ++eta)
        for (int x = 0; x < X.size; ++x) out.class_map[eta][x] = cls[pid(eta, x)];
    return out;
}

/// Search an H-equivariant map between H-sets extending rep |-> image
/// choices; images must have at least the representative's stabilizer.
inline std::optional<std::vector<int>> find_equivariant_map(
    const GSet& A, const GSet& B, const std::function<bool(const std::vector<int>&)>& accept) {
    const auto& H = *A.group;
    auto orbs = orbits(A);
    std::vector<int> map(A.size, -1);
    std::function<bool(std::size_t)> rec = [&](std::size_t oi) {
        if (oi == orbs.size()) return accept(map);
        const Orbit& o = orbs[oi];
        for (int b = 0; b < B.size; ++b) {
            bool ok = true;
            for (Elem s : o.stabilizer)
                if (B.act[s][b] != b) { ok = false; break; }
            if (!ok) continue;
            for (std::size_t pi = 0; pi < o.points.size(); ++pi)
                map[o.points[pi]] = B.act[o.transversal[pi]][b];
            if (rec(oi + 1)) return true;
        }
        return false;
    };
    if (!rec(0)) return std::nullopt;
    return map;
}

/// Verify the uniqueness statement for an alternative factorization of a:
/// given alt = (upsilon': X/G -> S/H stab-surjective, a': S/H -> Y/H
/// equivariant) composing to a, find the H-equivariant equivalence omega
/// with upsilon' ~ omega . upsilon_a and alpha_tilde ~ a' . omega.
/// Throws NoMediator when no omega exists (a falsified instance).
inline OneCell verify_factorization_uniqueness(const OneCell& a, const OneCell& upsilon_alt,
                                               const OneCell& a_alt) {
    if (!find_twocell(compose_onecells(a_alt, upsilon_alt), a))
        throw std::invalid_argument("verify_factorization_uniqueness: alt does not compose to a");
    if (!is_stab_surjective(upsilon_alt))
        throw std::invalid_argument("verify_factorization_uniqueness: upsilon' not stab-surjective");

    SImFactorization canon = sim_factorize(a);
    const ZeroCell& sim = canon.upsilon.dst;
    const ZeroCell& S = upsilon_alt.dst;

    auto idh = GroupHom::identity(a.dst.group());
    auto accept = [&](const std::vector<int>& m) {
        // omega must make both triangles commute up to 2-cells
        OneCell om = OneCell::trusted(sim, S, m,
                                      std::vector<std::vector<Elem>>(sim.points(), idh.map));
        // validate: m equivariant by construction of the search
        if (!find_twocell(compose_onecells(om, canon.upsilon), upsilon_alt)) return false;
        if (!find_twocell(compose_onecells(a_alt, om), canon.alpha_tilde)) return false;
        return is_equivalence(om).has_value();
    };
    auto m = find_equivariant_map(sim.set, S.set, accept);
    if (!m) throw NoMediator("verify_factorization_uniqueness: no mediating equivalence");
    return OneCell::equivariant(sim, S, *m, idh);
}

} // namespace spanmack
