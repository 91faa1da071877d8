#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "spanmack/cell.hpp"
#include "spanmack/group.hpp"

namespace spanmack {

struct UniverseExceeded : std::runtime_error {
    explicit UniverseExceeded(const std::string& m) : std::runtime_error(m) {}
};

/// A finite family of groups closed under subgroups and quotients up to
/// isomorphism, with chosen representatives and per-representative catalogs
/// of subgroups, quotients and automorphisms. This is the finite window
/// through which Mackey presentations see the object class.
class GroupUniverse {
public:
    struct SubEntry {
        Subgroup H;        // subgroup of the representative
        EmbeddedGroup emb; // H as a standalone group
        int rep_of;        // universe index of its class
        GroupHom psi;      // emb.group -> reps[rep_of]
    };
    struct QuotEntry {
        Subgroup N;    // normal subgroup
        int rep_of;    // universe index of R/N's class
        GroupHom sigma; // R ->> reps[rep_of], kernel N
    };
    struct Entry {
        Group rep;
        SubgroupLattice lattice;
        std::vector<SubEntry> subs;
        std::map<Subgroup, int> sub_index;
        std::vector<QuotEntry> quots;
        std::map<Subgroup, int> quot_index;
        std::vector<GroupHom> automorphisms;
        std::map<std::vector<Elem>, int> aut_index;
    };

    /// Close the given groups under subgroups and quotients up to iso.
    static std::shared_ptr<const GroupUniverse> closed_over(const std::vector<Group>& gens,
                                                            int order_limit = 24) {
        auto uni = std::make_shared<GroupUniverse>();
        uni->order_limit_ = order_limit;
        std::vector<Group> queue = gens;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            Group g = queue[qi];
            if (g->order() > order_limit)
                throw OrderLimitExceeded("GroupUniverse: generator exceeds order limit");
            if (uni->find_rep(g) >= 0) continue;
            uni->reps_.push_back(g);
            auto lat = subgroup_lattice(*g, order_limit);
            for (const auto& H : lat.subgroups)
                queue.push_back(subgroup_as_group(*g, H).group);
            for (const auto& N : lat.subgroups)
                if (is_normal(*g, N)) queue.push_back(quotient_group(g, N).group);
        }
        std::sort(uni->reps_.begin(), uni->reps_.end(),
                  [](const Group& a, const Group& b) {
                      if (a->order() != b->order()) return a->order() < b->order();
                      return a->order_profile() < b->order_profile();
                  });
        uni->build_catalogs();
        return uni;
    }

    int size() const { return (int)reps_.size(); }
    const Group& rep(int i) const { return reps_[i]; }
    const Entry& entry(int i) const { return entries_[i]; }

    int find_rep(const Group& g) const {
        for (int i = 0; i < (int)reps_.size(); ++i) {
            if (reps_[i] == g) return i;
            if (find_isomorphism(g, reps_[i])) return i;
        }
        return -1;
    }

    /// Representative index and a fixed isomorphism onto it. Deterministic
    /// (first isomorphism in backtracking order), memoized by Cayley table.
    std::pair<int, GroupHom> find(const Group& g) const {
        {
            std::lock_guard<std::mutex> lk(mu_);
            auto it = find_memo_.find(g->table());
            if (it != find_memo_.end())
                return {it->second.first, GroupHom(g, reps_[it->second.first], it->second.second)};
        }
        for (int i = 0; i < (int)reps_.size(); ++i) {
            if (auto iso = find_isomorphism(g, reps_[i])) {
                std::lock_guard<std::mutex> lk(mu_);
                find_memo_[g->table()] = {i, iso->map};
                return {i, *iso};
            }
        }
        throw UniverseExceeded("GroupUniverse: group of order " + std::to_string(g->order()) +
                               " (" + g->name() + ") not in universe");
    }

private:
    void build_catalogs() {
        entries_.resize(reps_.size());
        for (int r = 0; r < (int)reps_.size(); ++r) {
            Entry& e = entries_[r];
            e.rep = reps_[r];
            e.lattice = subgroup_lattice(*reps_[r], order_limit_);
            for (const auto& H : e.lattice.subgroups) {
                SubEntry s;
                s.H = H;
                s.emb = subgroup_as_group(*reps_[r], H);
                auto [idx, psi] = find(s.emb.group);
                s.rep_of = idx;
                s.psi = std::move(psi);
                e.sub_index[H] = (int)e.subs.size();
                e.subs.push_back(std::move(s));
            }
            for (const auto& N : e.lattice.subgroups) {
                if (!is_normal(*reps_[r], N)) continue;
                QuotEntry q;
                q.N = N;
                QuotientGroup qg = quotient_group(reps_[r], N);
                auto [idx, iso] = find(qg.group);
                q.rep_of = idx;
                q.sigma = compose(iso, qg.proj);
                e.quot_index[N] = (int)e.quots.size();
                e.quots.push_back(std::move(q));
            }
            for (auto& a : all_isomorphisms(reps_[r], reps_[r])) {
                e.aut_index[a.map] = (int)e.automorphisms.size();
                e.automorphisms.push_back(std::move(a));
            }
        }
    }

    int order_limit_ = 24;
    std::vector<Group> reps_;
    std::vector<Entry> entries_;
    mutable std::mutex mu_;
    mutable std::map<std::vector<std::vector<Elem>>, std::pair<int, std::vector<Elem>>> find_memo_;
};

using UniversePtr = std::shared_ptr<const GroupUniverse>;

/// The additive value basis of a Mackey presentation at a 0-cell: one block
/// of rank(rep) coordinates per orbit, through the collapse equivalences.
struct ValueBasis {
    struct Block {
        int orbit_rep;      // point of the cell
        EmbeddedGroup stab; // its stabilizer
        int rep_idx;        // universe representative of the stabilizer
        GroupHom phi;       // stab.group -> reps[rep_idx]
        Orbit orbit;
        int offset;
        int rank;
    };
    ZeroCell cell;
    std::vector<Block> blocks;
    int total = 0;
};

} // namespace spanmack
