#include "cllr/generate.hpp"

#include <algorithm>
#include <stdexcept>

namespace cllr {

GenOptions GenOptions::basic(std::vector<std::string> alphabet) {
    GenOptions o;
    o.alphabet = std::move(alphabet);
    o.bottom = false;
    o.conj = false;
    return o;
}

TermGenerator::TermGenerator(std::uint64_t seed, GenOptions opts) : rng_(seed), opts_(std::move(opts)) {
    if (opts_.alphabet.empty()) throw std::invalid_argument("generator alphabet must be nonempty");
}

std::size_t TermGenerator::below(std::size_t n) { return n <= 1 ? 0 : static_cast<std::size_t>(rng_() % n); }

Action TermGenerator::visible() { return Action::visible(opts_.alphabet[below(opts_.alphabet.size())]); }

SyncSet TermGenerator::sync_set() {
    std::vector<std::string> names;
    for (const auto& a : opts_.alphabet)
        if (below(2)) names.push_back(a);
    return SyncSet(std::move(names));
}

Term TermGenerator::exact(std::size_t nodes) {
    if (nodes <= 1) return opts_.bottom && below(4) == 0 ? Term::bottom() : Term::nil();
    enum Pick { Pre, Ch, Co, Di, Pa };
    std::vector<Pick> picks{Pre, Pre};
    if (nodes >= 3) {
        if (opts_.choice) picks.push_back(Ch);
        if (opts_.conj) picks.push_back(Co);
        if (opts_.disj) picks.push_back(Di);
        if (opts_.par) picks.push_back(Pa);
    }
    const Pick p = picks[below(picks.size())];
    if (p == Pre) {
        const std::size_t n = opts_.alphabet.size() + (opts_.tau ? 1 : 0);
        const std::size_t k = below(n);
        Action a = k < opts_.alphabet.size() ? Action::visible(opts_.alphabet[k]) : Action::tau();
        return Term::prefix(std::move(a), exact(nodes - 1));
    }
    const std::size_t left = 1 + below(nodes - 2);
    Term l = exact(left);
    Term r = exact(nodes - 1 - left);
    switch (p) {
        case Ch: return Term::choice(std::move(l), std::move(r));
        case Co: return Term::conj(std::move(l), std::move(r));
        case Di: return Term::disj(std::move(l), std::move(r));
        default: return Term::par(std::move(l), std::move(r), sync_set());
    }
}

Term TermGenerator::up_to(std::size_t max_nodes) { return exact(1 + below(std::max<std::size_t>(max_nodes, 1))); }

Term TermGenerator::guarded_sum(std::size_t n, std::size_t cont_nodes) {
    std::vector<std::string> actions;
    for (std::size_t i = 0; i < n; ++i) actions.push_back(visible().name());
    return guarded_sum(actions, cont_nodes);
}

Term TermGenerator::guarded_sum(const std::vector<std::string>& actions, std::size_t cont_nodes) {
    Term t;
    for (std::size_t i = 0; i < actions.size(); ++i) {
        Term s = Term::prefix(Action::visible(actions[i]), up_to(cont_nodes));
        t = i == 0 ? s : Term::choice(std::move(t), std::move(s));
    }
    return t;
}

Term gen_term(std::uint64_t seed, std::size_t size, const std::vector<std::string>& alphabet, bool basic_only) {
    GenOptions o;
    o.alphabet = alphabet;
    if (basic_only) o = GenOptions::basic(alphabet);
    TermGenerator g(seed, std::move(o));
    return g.up_to(size);
}

std::vector<Term> enumerate_terms(std::size_t max_nodes, const std::vector<std::string>& alphabet) {
    std::vector<Action> actions{Action::tau()};
    for (const auto& a : alphabet) actions.push_back(Action::visible(a));
    std::vector<SyncSet> syncs;
    for (std::size_t mask = 0; mask < (std::size_t{1} << alphabet.size()); ++mask) {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < alphabet.size(); ++i)
            if (mask >> i & 1) names.push_back(alphabet[i]);
        syncs.emplace_back(std::move(names));
    }
    std::vector<std::vector<Term>> by_size(max_nodes + 1);
    if (max_nodes >= 1) by_size[1] = {Term::nil(), Term::bottom()};
    for (std::size_t n = 2; n <= max_nodes; ++n) {
        auto& out = by_size[n];
        for (const auto& a : actions)
            for (const auto& b : by_size[n - 1]) out.push_back(Term::prefix(a, b));
        for (std::size_t l = 1; l + 1 < n; ++l)
            for (const auto& x : by_size[l])
                for (const auto& y : by_size[n - 1 - l]) {
                    out.push_back(Term::choice(x, y));
                    out.push_back(Term::conj(x, y));
                    out.push_back(Term::disj(x, y));
                    for (const auto& s : syncs) out.push_back(Term::par(x, y, s));
                }
        std::sort(out.begin(), out.end());
    }
    std::vector<Term> all;
    for (auto& v : by_size) all.insert(all.end(), v.begin(), v.end());
    return all;
}

}  // namespace cllr
