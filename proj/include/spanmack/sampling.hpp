#pragma once

#include <random>
#include <stdexcept>

#include "spanmack/cell.hpp"

namespace spanmack {

/// Deterministic sampling of the combinatorial objects, driven entirely by
/// one seeded generator; every report artifact flows from these.
namespace sampling {

using Rng = std::mt19937_64;

inline GroupHom first_injection(const Group& a, const Group& b) {
    for (auto& h : all_homs(a, b))
        if (h.is_injective()) return h;
    throw std::runtime_error("first_injection: none exists");
}

/// Random G-set: a disjoint union of coset spaces of random subgroups.
inline GSet random_gset(const Group& G, int max_orbits, int max_points, Rng& rng,
                        int order_limit = 64) {
    auto lat = subgroup_lattice(*G, order_limit);
    GSet x = GSet::empty(G);
    int n = 1 + (int)(rng() % max_orbits);
    for (int i = 0; i < n; ++i) {
        GSet orbit = coset_gset(G, lat.subgroups[rng() % lat.subgroups.size()]);
        if (x.size + orbit.size > max_points) break;
        x = x.disjoint_union(orbit);
    }
    if (x.size == 0) x = GSet::point(G);
    return x;
}

/// Random valid 1-cell X/G -> Y/H: orbitwise (target point, stabilizer hom)
/// choices through the collapse equivalences, then a random 2-cell twist.
inline OneCell random_cell(const ZeroCell& X, const ZeroCell& Y, Rng& rng) {
    const auto& H = *Y.group();
    auto comps = orbit_decompose(X);
    std::vector<int> alpha(X.points());
    std::vector<std::vector<Elem>> theta(X.points(),
                                         std::vector<Elem>(X.group()->order()));
    for (auto& c : comps) {
        while (true) {
            int y = (int)(rng() % Y.points());
            auto ystab = subgroup_as_group(H, Y.set.stabilizer(y));
            auto homs = all_homs(c.stab.group, ystab.group);
            if (homs.empty()) continue;
            const GroupHom& f = homs[rng() % homs.size()];
            for (std::size_t i = 0; i < c.parent_point.size(); ++i) {
                int px = c.parent_point[i];
                alpha[px] = y;
                for (Elem g = 0; g < X.group()->order(); ++g)
                    theta[px][g] = ystab.elems[f.map[c.collapse.theta[i][g]]];
            }
            break;
        }
    }
    OneCell base = OneCell::trusted(X, Y, std::move(alpha), std::move(theta));
    std::vector<Elem> eps(X.points());
    for (auto& e : eps) e = (Elem)(rng() % H.order());
    std::vector<int> a2(X.points());
    std::vector<std::vector<Elem>> t2(X.points(), std::vector<Elem>(X.group()->order()));
    for (int x = 0; x < X.points(); ++x) {
        a2[x] = Y.set.act[eps[x]][base.alpha[x]];
        for (Elem g = 0; g < X.group()->order(); ++g) {
            int gx = X.set.act[g][x];
            t2[x][g] = H.mul(eps[gx], H.mul(base.theta[x][g], H.inv(eps[x])));
        }
    }
    return OneCell(X, Y, std::move(a2), std::move(t2));
}

} // namespace sampling
} // namespace spanmack
