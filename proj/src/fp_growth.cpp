#include "ixrl/fp_growth.hpp"

#include <algorithm>
#include <bit>
#include <unordered_map>

#include "ixrl/errors.hpp"

namespace ixrl {

namespace {

class FpTree {
public:
    struct Node {
        int item = -1;
        std::uint64_t count = 0;
        int parent = -1;
        int link = -1;  // next node carrying the same item
        std::vector<std::pair<int, int>> children;  // (item, node)
    };

    // Builds the tree from transactions whose items are already filtered and
    // sorted into header order.
    explicit FpTree(const std::vector<std::pair<std::vector<int>, std::uint64_t>>& paths) {
        nodes_.push_back({});
        for (const auto& [items, w] : paths) {
            int cur = 0;
            for (int item : items) {
                int next = -1;
                for (const auto& [it, node] : nodes_[static_cast<std::size_t>(cur)].children)
                    if (it == item) { next = node; break; }
                if (next < 0) {
                    next = static_cast<int>(nodes_.size());
                    Node n;
                    n.item = item;
                    n.parent = cur;
                    auto head = heads_.find(item);
                    n.link = head == heads_.end() ? -1 : head->second;
                    heads_[item] = next;
                    nodes_.push_back(std::move(n));
                    nodes_[static_cast<std::size_t>(cur)].children.emplace_back(item, next);
                }
                nodes_[static_cast<std::size_t>(next)].count += w;
                cur = next;
            }
        }
    }

    const std::vector<Node>& nodes() const { return nodes_; }
    int head(int item) const {
        auto it = heads_.find(item);
        return it == heads_.end() ? -1 : it->second;
    }

private:
    std::vector<Node> nodes_;
    std::unordered_map<int, int> heads_;
};

using Paths = std::vector<std::pair<std::vector<int>, std::uint64_t>>;

void mine(const Paths& db, std::uint64_t min_support, std::vector<int>& suffix, std::vector<Itemset>& out) {
    std::unordered_map<int, std::uint64_t> freq;
    for (const auto& [items, w] : db)
        for (int i : items) freq[i] += w;
    // Header order: descending support, ties by item id.
    std::vector<int> order;
    for (const auto& [item, f] : freq)
        if (f >= min_support) order.push_back(item);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return freq[a] != freq[b] ? freq[a] > freq[b] : a < b;
    });
    if (order.empty()) return;
    std::unordered_map<int, std::size_t> rank;
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i;

    Paths filtered;
    filtered.reserve(db.size());
    for (const auto& [items, w] : db) {
        std::vector<int> kept;
        for (int i : items)
            if (rank.count(i)) kept.push_back(i);
        if (kept.empty()) continue;
        std::sort(kept.begin(), kept.end(), [&](int a, int b) { return rank[a] < rank[b]; });
        filtered.emplace_back(std::move(kept), w);
    }
    const FpTree tree(filtered);
    const auto& nodes = tree.nodes();

    // Least frequent items first, as in the classic bottom-up traversal.
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int item = *it;
        suffix.push_back(item);
        Itemset found;
        found.items = suffix;
        std::sort(found.items.begin(), found.items.end());
        found.support = freq[item];
        out.push_back(std::move(found));

        Paths conditional;
        for (int n = tree.head(item); n >= 0; n = nodes[static_cast<std::size_t>(n)].link) {
            std::vector<int> prefix;
            for (int p = nodes[static_cast<std::size_t>(n)].parent; p > 0; p = nodes[static_cast<std::size_t>(p)].parent)
                prefix.push_back(nodes[static_cast<std::size_t>(p)].item);
            if (!prefix.empty()) conditional.emplace_back(std::move(prefix), nodes[static_cast<std::size_t>(n)].count);
        }
        if (!conditional.empty()) mine(conditional, min_support, suffix, out);
        suffix.pop_back();
    }
}

}  // namespace

std::vector<Itemset> fp_growth(const std::vector<WeightedTransaction>& db, std::uint64_t min_support) {
    if (min_support == 0) throw ConfigError("min_support must be at least 1");
    Paths paths;
    paths.reserve(db.size());
    for (const auto& t : db) {
        if (t.weight == 0) continue;
        std::vector<int> items = t.items;
        std::sort(items.begin(), items.end());
        items.erase(std::unique(items.begin(), items.end()), items.end());
        if (!items.empty()) paths.emplace_back(std::move(items), t.weight);
    }
    std::vector<Itemset> out;
    std::vector<int> suffix;
    mine(paths, min_support, suffix, out);
    std::sort(out.begin(), out.end(), [](const Itemset& a, const Itemset& b) {
        return a.items.size() != b.items.size() ? a.items.size() < b.items.size() : a.items < b.items;
    });
    return out;
}

SupportIndex::SupportIndex(const std::vector<Itemset>& sets) {
    for (const auto& s : sets) table_[s.items] = s.support;
}

std::uint64_t SupportIndex::support(const std::vector<int>& sorted_items) const {
    auto it = table_.find(sorted_items);
    return it == table_.end() ? 0 : it->second;
}

std::uint64_t SupportIndex::any_support(const std::vector<int>& items) const {
    if (items.size() > 20) throw UsageError("itemset too large for inclusion-exclusion");
    const std::uint32_t full = (1u << items.size()) - 1;
    std::int64_t total = 0;
    std::vector<int> subset;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        subset.clear();
        for (std::size_t i = 0; i < items.size(); ++i)
            if (mask & (1u << i)) subset.push_back(items[i]);
        const auto s = static_cast<std::int64_t>(support(subset));
        total += (std::popcount(mask) % 2 == 1) ? s : -s;
    }
    return static_cast<std::uint64_t>(total);
}

double SupportIndex::jaccard(const std::vector<int>& items) const {
    const std::uint64_t any = any_support(items);
    if (any == 0) return 0.0;
    return static_cast<double>(support(items)) / static_cast<double>(any);
}

std::vector<AssociationRule> rules_of(const std::vector<int>& items, const SupportIndex& index,
                                      std::uint64_t total_weight) {
    std::vector<AssociationRule> rules;
    if (items.size() < 2 || total_weight == 0) return rules;
    const double n = static_cast<double>(total_weight);
    const double joint = static_cast<double>(index.support(items)) / n;
    const std::uint32_t full = (1u << items.size()) - 1;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
        AssociationRule r;
        for (std::size_t i = 0; i < items.size(); ++i)
            (mask & (1u << i) ? r.antecedent : r.consequent).push_back(items[i]);
        const double pa = static_cast<double>(index.support(r.antecedent)) / n;
        const double pc = static_cast<double>(index.support(r.consequent)) / n;
        if (pa <= 0.0 || pc <= 0.0) continue;
        r.lift = joint / (pa * pc);
        rules.push_back(std::move(r));
    }
    return rules;
}

}  // namespace ixrl
