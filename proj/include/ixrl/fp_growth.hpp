#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace ixrl {

struct WeightedTransaction {
    std::vector<int> items;
    std::uint64_t weight = 1;
};

struct Itemset {
    std::vector<int> items;  // sorted ascending
    std::uint64_t support = 0;  // total weight of transactions containing all items

    friend bool operator==(const Itemset&, const Itemset&) = default;
};

// All itemsets whose support reaches min_support, mined with an FP-tree.
// Output is sorted by size, then lexicographically.
std::vector<Itemset> fp_growth(const std::vector<WeightedTransaction>& db, std::uint64_t min_support = 1);

// Support lookup over a mining result; absent itemsets have support 0.
class SupportIndex {
public:
    explicit SupportIndex(const std::vector<Itemset>& sets);
    std::uint64_t support(const std::vector<int>& sorted_items) const;
    // Weight of transactions containing at least one of the items, by
    // inclusion-exclusion over the subsets' supports.
    std::uint64_t any_support(const std::vector<int>& sorted_items) const;
    double jaccard(const std::vector<int>& sorted_items) const;

private:
    std::map<std::vector<int>, std::uint64_t> table_;
};

struct AssociationRule {
    std::vector<int> antecedent;
    std::vector<int> consequent;
    double lift = 0.0;
};

// Rules A => C for every split of `items` into two nonempty parts, with lift
// measured on supports as fractions of total_weight.
std::vector<AssociationRule> rules_of(const std::vector<int>& items, const SupportIndex& index,
                                      std::uint64_t total_weight);

}  // namespace ixrl
