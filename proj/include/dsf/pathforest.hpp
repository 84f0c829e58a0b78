#pragma once

#include <cstdint>
#include <set>
#include <unordered_map>
#include <vector>

#include "dsf/successor.hpp"

namespace dsf {

struct VertexHash {
    std::size_t operator()(const Vertex& v) const {
        std::uint64_t h = detail::kGolden;
        for (int i = 0; i < v.dim; ++i)
            h = detail::mix64(h ^ (std::uint64_t(std::int64_t(v.c[i])) +
                                   detail::kGolden * std::uint64_t(i + 1)));
        return static_cast<std::size_t>(h);
    }
};

/// Advances a family of paths in tandem (lowest head first) until every head
/// has passed `horizon`, merging heads that land on an occupied vertex.
/// Tandem order makes head-equality a complete coalescence test: a path that
/// joins another's trail always catches up to the stalled head exactly.
///
/// Observer contract:
///   void on_start(int id, const Vertex& v);
///   void on_step(int id, const Vertex& from, const Vertex& to);
///   void on_merge(int into_id, int from_id);   // from_id's head disappears
template <class Observer>
void advance_path_family(const FieldParams& params, const std::vector<Vertex>& starts,
                         std::int64_t horizon, Observer& obs,
                         int max_radius = kDefaultMaxRadius) {
    struct HeadLess {
        bool operator()(const std::pair<Vertex, int>& a,
                        const std::pair<Vertex, int>& b) const {
            if (a.first.level() != b.first.level())
                return a.first.level() < b.first.level();
            if (a.first != b.first) return lex_less(a.first, b.first);
            return a.second < b.second;
        }
    };
    std::set<std::pair<Vertex, int>, HeadLess> heads;
    std::unordered_map<Vertex, int, VertexHash> occupied;
    occupied.reserve(starts.size() * 2);

    for (std::size_t i = 0; i < starts.size(); ++i) {
        const Vertex& s = starts[i];
        const int id = static_cast<int>(i);
        obs.on_start(id, s);
        auto it = occupied.find(s);
        if (it != occupied.end()) {
            obs.on_merge(it->second, id);  // duplicate start
            continue;
        }
        occupied.emplace(s, id);
        heads.insert({s, id});
    }

    while (!heads.empty() && heads.begin()->first.level() <= horizon) {
        auto [pos, id] = *heads.begin();
        heads.erase(heads.begin());
        occupied.erase(pos);
        const Vertex next = successor(params, pos, max_radius);
        obs.on_step(id, pos, next);
        auto it = occupied.find(next);
        if (it != occupied.end()) {
            obs.on_merge(it->second, id);
        } else {
            occupied.emplace(next, id);
            heads.insert({next, id});
        }
    }
}

}  // namespace dsf
