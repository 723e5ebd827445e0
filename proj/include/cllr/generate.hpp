#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cllr/term.hpp"

namespace cllr {

/// Which constructors a generator may draw from.
struct GenOptions {
    std::vector<std::string> alphabet{"a", "b", "c"};
    bool bottom = true;
    bool tau = true;
    bool choice = true;
    bool conj = true;
    bool disj = true;
    bool par = true;

    static GenOptions basic(std::vector<std::string> alphabet);
};

/// Deterministic pseudo-random term source (same seed, same sequence).
class TermGenerator {
public:
    TermGenerator(std::uint64_t seed, GenOptions opts);

    /// A term of exactly `nodes` constructor nodes (constants included).
    Term exact(std::size_t nodes);
    /// A term whose node count is drawn uniformly from [1, max_nodes].
    Term up_to(std::size_t max_nodes);
    /// A left-nested choice of `n` visible prefixes over continuations of at most `cont_nodes` nodes.
    Term guarded_sum(std::size_t n, std::size_t cont_nodes);
    /// Same, with a fixed action list.
    Term guarded_sum(const std::vector<std::string>& actions, std::size_t cont_nodes);

    std::size_t below(std::size_t n);
    Action visible();
    SyncSet sync_set();
    const GenOptions& options() const { return opts_; }

private:
    std::mt19937_64 rng_;
    GenOptions opts_;
};

/// A term with between 1 and `size` nodes, basic when requested.
Term gen_term(std::uint64_t seed, std::size_t size, const std::vector<std::string>& alphabet, bool basic_only);

/// Every term of at most `max_nodes` nodes over the given alphabet (plus tau, 0 and bot),
/// using every subset of the alphabet as a sync set. Ordered by size, then by term order.
std::vector<Term> enumerate_terms(std::size_t max_nodes, const std::vector<std::string>& alphabet);

}  // namespace cllr
