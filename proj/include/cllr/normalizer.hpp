#pragma once

#include <memory>
#include <vector>

#include "cllr/axioms.hpp"
#include "cllr/syntax.hpp"

namespace cllr {

/// Bottom, or a sorted, duplicate-free left-nested disjunction of prefix-injective
/// guarded sums with sorted summands and recursively normal continuations.
struct NormalForm {
    Term term;

    bool is_bottom() const { return term.is_bottom(); }
    /// Empty for Bottom.
    std::vector<GuardedSum> disjuncts() const;
};

struct Normalized {
    NormalForm nf;
    EqProof proof;  // input = nf.term
};

/// Normalization with memoized results; proofs of repeated subterms are shared.
class Normalizer {
public:
    Normalizer();
    ~Normalizer();
    Normalizer(Normalizer&&) noexcept;
    Normalizer& operator=(Normalizer&&) noexcept;

    Normalized normalize(const Term& t);

    /// Both arguments normal forms other than Bottom.
    Normalized conj_nf(const Term& x, const Term& y);
    /// Both arguments normal guarded sums; the result is a guarded sum.
    Normalized choice_nf(const Term& x, const Term& y);
    Normalized par_nf(const Term& x, const Term& y, const SyncSet& sync);

    std::size_t cache_size() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

Normalized normalize(const Term& t);

}  // namespace cllr
