#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "kesbn/errors.hpp"

namespace kesbn {

// Memo of family scores. One tree per child node; each level down branches on
// the next parent in ascending node order, so every caller ordering of the
// same parent set reaches the same entry, and only branches that are actually
// touched get allocated. A stored value is returned verbatim forever — the
// compute callback must be a pure function of (child, parent set).
//
// entry_cap is an escape hatch for pathological workloads: when the number of
// stored values would exceed it, the whole cache is dropped and refilled.
// Zero means unbounded (the default; realistic searches fit easily).
class ScoreCache {
public:
    explicit ScoreCache(std::size_t entry_cap = 0) : cap_(entry_cap) {}

    template <class Compute>
    double get_or_compute(int child, std::span<const int> parents, Compute&& compute) {
        std::vector<int> ps(parents.begin(), parents.end());
        std::sort(ps.begin(), ps.end());
        for (int p : ps)
            if (p == child) throw OverlapError("child cannot be its own parent");

        if (Node* node = walk(child, ps, false); node && node->value) {
            ++hits_;
            return *node->value;
        }
        const double v = compute();
        ++misses_;
        if (cap_ > 0 && entries_ >= cap_) {
            roots_.clear();
            entries_ = 0;
        }
        Node* node = walk(child, ps, true);
        node->value = v;
        ++entries_;
        return v;
    }

    std::uint64_t hits() const { return hits_; }
    std::uint64_t misses() const { return misses_; }
    std::size_t entry_count() const { return entries_; }

    void clear() {
        roots_.clear();
        entries_ = 0;
        hits_ = misses_ = 0;
    }

private:
    struct Node {
        std::map<int, std::unique_ptr<Node>> next;
        std::optional<double> value;
    };

    Node* walk(int child, const std::vector<int>& sorted_parents, bool create) {
        auto it = roots_.find(child);
        if (it == roots_.end()) {
            if (!create) return nullptr;
            it = roots_.emplace(child, std::make_unique<Node>()).first;
        }
        Node* node = it->second.get();
        for (int p : sorted_parents) {
            auto nx = node->next.find(p);
            if (nx == node->next.end()) {
                if (!create) return nullptr;
                nx = node->next.emplace(p, std::make_unique<Node>()).first;
            }
            node = nx->second.get();
        }
        return node;
    }

    std::map<int, std::unique_ptr<Node>> roots_;
    std::size_t cap_ = 0;
    std::size_t entries_ = 0;
    std::uint64_t hits_ = 0;
    std::uint64_t misses_ = 0;
};

}  // namespace kesbn
