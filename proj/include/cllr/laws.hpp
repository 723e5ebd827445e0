#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cllr/generate.hpp"
#include "cllr/refinement.hpp"

namespace cllr {

/// One instantiation of a law's variables.
struct LawInstance {
    std::vector<Term> terms;
    Action action = Action::visible("a");
    SyncSet sync;
};

std::string describe(const LawInstance& inst);

struct Law {
    std::string name;
    std::function<LawInstance(TermGenerator&, std::size_t size)> draw;
    /// Side conditions; an instance failing them says nothing about the law.
    std::function<bool(const LawInstance&, std::size_t bound)> admissible;
    std::function<bool(const LawInstance&, std::size_t bound)> holds;
};

/// Algebraic laws of the preorder, each drawn from random terms.
const std::vector<Law>& law_catalogue();
const Law* find_law(const std::string& name);

struct FuzzConfig {
    std::uint64_t seed = 0;
    std::size_t count = 100;
    std::size_t size = 8;
    std::vector<std::string> alphabet{"a", "b", "c"};
    std::size_t state_bound = kDefaultStateBound;
    Exec exec = Exec::Parallel;
    bool shrink = true;
};

struct LawFailure {
    std::size_t index;
    LawInstance instance;  // shrunk when requested
    std::string error;     // set when the case threw instead of failing
};

struct LawRun {
    std::string law;
    std::size_t cases = 0;
    std::size_t skipped = 0;  // inadmissible draws
    std::vector<LawFailure> failures;  // ordered by case index
};

/// Runs `fn(i)` for i < n, concurrently for Exec::Parallel.
void for_cases(std::size_t n, Exec exec, const std::function<void(std::size_t)>& fn);

/// Seed of case `index` of law number `law` in a run seeded with `seed`.
std::uint64_t case_seed(std::uint64_t seed, std::size_t law, std::size_t index);

LawRun run_law(const Law& law, std::size_t law_index, const FuzzConfig& cfg);

/// Greedily replaces subterms with 0 while the instance stays admissible and failing.
LawInstance shrink_instance(const Law& law, LawInstance inst, std::size_t bound);

}  // namespace cllr
