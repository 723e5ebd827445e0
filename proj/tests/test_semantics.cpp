#include <map>

#include "cllr/generate.hpp"
#include "cllr/semantics.hpp"
#include "helpers.hpp"

using namespace cllr;
using cllr::test::t;

namespace {

std::vector<std::pair<std::string, std::string>> show(const std::vector<Transition>& ts) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& x : ts) out.emplace_back(x.label.str(), format(x.target));
    return out;
}

using Shown = std::vector<std::pair<std::string, std::string>>;

std::vector<std::string> show(const std::vector<Term>& ts) {
    std::vector<std::string> out;
    for (const auto& x : ts) out.push_back(format(x));
    std::sort(out.begin(), out.end());
    return out;
}

// Direct recursive evaluation of the inconsistency rules. Every premise
// refers to strictly smaller terms, so plain memoized recursion is exact.
class FOracle {
public:
    bool operator()(const Term& x) {
        if (auto it = memo_.find(x); it != memo_.end()) return it->second;
        const bool v = eval(x);
        memo_[x] = v;
        return v;
    }

private:
    bool eval(const Term& x) {
        switch (x.kind()) {
            case Kind::Nil: return false;
            case Kind::Bottom: return true;
            case Kind::Prefix: return (*this)(x.body());
            case Kind::Disj: return (*this)(x.left()) && (*this)(x.right());
            case Kind::ExtChoice:
            case Kind::Par: return (*this)(x.left()) || (*this)(x.right());
            case Kind::Conj: break;
        }
        if ((*this)(x.left()) || (*this)(x.right())) return true;
        const auto outs = step(x);
        const bool stable = std::none_of(outs.begin(), outs.end(), [](auto& o) { return o.label.is_tau(); });
        auto labels = [](const Term& y) {
            std::set<Action> s;
            for (const auto& o : step(y)) s.insert(o.label);
            return s;
        };
        if (stable && labels(x.left()) != labels(x.right())) return true;
        std::map<Action, bool> all_f;
        for (const auto& o : outs) {
            auto [it, fresh] = all_f.emplace(o.label, true);
            it->second = it->second && (*this)(o.target);
        }
        for (const auto& [a, v] : all_f)
            if (v) return true;
        if (stable) return false;
        std::vector<Term> desc;
        descend(x, desc);
        return std::all_of(desc.begin(), desc.end(), [&](const Term& d) { return (*this)(d); });
    }
    void descend(const Term& x, std::vector<Term>& out) {
        bool moved = false;
        for (const auto& o : step(x))
            if (o.label.is_tau()) {
                moved = true;
                descend(o.target, out);
            }
        if (!moved) out.push_back(x);
    }
    std::map<Term, bool> memo_;
};

}  // namespace

TEST_CASE("step examples") {
    CHECK(show(step(t("a.0"))) == Shown{{"a", "0"}});
    CHECK(show(step(t("(a.0 \\/ b.0) [] c.0"))) == Shown{{"tau", "a.0 [] c.0"}, {"tau", "b.0 [] c.0"}});
    // Right a-derivatives coincide, so the pairing yields two distinct targets.
    CHECK(show(step(t("(a.b.0 [] a.c.0) /\\ (a.b.0 [] a.b.0)"))) ==
          Shown{{"a", "b.0 /\\ b.0"}, {"a", "c.0 /\\ b.0"}});
    CHECK(step(t("0")).empty());
    CHECK(step(t("bot")).empty());
    CHECK(show(step(t("a.0 \\/ a.0"))) == Shown{{"tau", "a.0"}});
}

TEST_CASE("step respects internal-action precedence") {
    CHECK(show(step(t("a.0 [] tau.b.0"))) == Shown{{"tau", "a.0 [] b.0"}});
    CHECK(show(step(t("a.0 |[]| tau.b.0"))) == Shown{{"tau", "a.0 |[]| b.0"}});
    CHECK(show(step(t("a.0 |[]| b.0"))) == Shown{{"a", "0 |[]| b.0"}, {"b", "a.0 |[]| 0"}});
    CHECK(show(step(t("a.0 |[a]| a.b.0"))) == Shown{{"a", "0 |[a]| b.0"}});
    CHECK(show(step(t("a.0 |[a]| b.0"))) == Shown{{"b", "a.0 |[a]| 0"}});
    CHECK(show(step(t("a.0 /\\ tau.a.0"))) == Shown{{"tau", "a.0 /\\ a.0"}});
    CHECK(show(step(t("a.0 /\\ b.0"))).empty());
}

TEST_CASE("build_lts examples") {
    auto l0 = build_lts(t("0"));
    CHECK(l0.size() == 1);
    CHECK(l0.transition_count() == 0);
    CHECK_FALSE(l0.inconsistent(l0.root()));

    auto lb = build_lts(t("bot"));
    CHECK(lb.size() == 1);
    CHECK(lb.transition_count() == 0);
    CHECK(lb.inconsistent(lb.root()));

    auto la = build_lts(t("a.bot"));
    CHECK(la.size() == 2);
    CHECK(la.transition_count() == 1);
    CHECK(la.inconsistent(t("a.bot")));
    CHECK(la.inconsistent(t("bot")));
}

TEST_CASE("state bound is enforced") {
    const Term big = t("(a.0 [] b.0) |[]| (a.0 [] b.0) |[]| (a.0 [] b.0) |[]| (a.0 [] b.0)");
    CHECK_THROWS_AS(build_lts(big, 5), ResourceLimitError);
    CHECK_NOTHROW(build_lts(big, 1000));
}

TEST_CASE("compute_f examples") {
    CHECK(compute_f({t("c.0 /\\ b.0")}, {}) == std::vector<bool>{true});
    const Term ex = t("(a.b.0 [] a.c.0) /\\ (a.b.0 [] a.b.0)");
    auto l = build_lts(ex);
    CHECK_FALSE(l.inconsistent(ex));
    CHECK(l.inconsistent(t("c.0 /\\ b.0")));
    CHECK_FALSE(build_lts(t("a.(bot \\/ 0)")).inconsistent(t("a.(bot \\/ 0)")));
    CHECK(build_lts(t("a.bot [] a.0")).inconsistent(t("a.bot [] a.0")));
    CHECK(build_lts(t("tau.(a.0 /\\ b.0) /\\ 0")).inconsistent(t("tau.(a.0 /\\ b.0) /\\ 0")));
}

TEST_CASE("compute_f on an explicit graph agrees with build_lts") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Term x = gen_term(seed, 10, {"a", "b"}, false);
        auto l = build_lts(x);
        std::vector<Term> states;
        std::vector<Edge> edges;
        for (StateId s = 0; s < l.size(); ++s) {
            states.push_back(l.term(s));
            for (const auto& o : l.successors(s)) edges.push_back({s, o.label, o.target});
        }
        const auto f = compute_f(states, edges);
        for (StateId s = 0; s < l.size(); ++s) CHECK(f[s] == l.inconsistent(s));
    }
}

TEST_CASE("ready sets") {
    auto l = build_lts({t("a.0 [] b.0"), t("0"), t("a.0 \\/ b.0")});
    CHECK(l.ready_set(t("a.0 [] b.0")) == std::set<Action>{Action::visible("a"), Action::visible("b")});
    CHECK(l.ready_set(t("0")).empty());
    CHECK(l.ready_set(t("a.0 \\/ b.0")) == std::set<Action>{Action::tau()});
    CHECK_THROWS_AS(l.ready_set(t("c.0")), UnknownStateError);
}

TEST_CASE("weak transitions") {
    auto l = build_lts({t("a.0 \\/ b.0"), t("bot"), t("a.0"), t("a.(b.0 \\/ c.0)"), t("a.bot")});
    CHECK(show(l.weak_eps_stable(t("a.0 \\/ b.0"))) == std::vector<std::string>{"a.0", "b.0"});
    CHECK(l.weak_eps_stable(t("bot")).empty());
    CHECK(show(l.weak_eps_stable(t("a.0"))) == std::vector<std::string>{"a.0"});
    CHECK(show(l.weak_act_stable(t("a.(b.0 \\/ c.0)"), Action::visible("a"))) == std::vector<std::string>{"b.0", "c.0"});
    CHECK(l.weak_act_stable(t("a.bot"), Action::visible("a")).empty());
    CHECK(l.weak_act_stable(t("a.0"), Action::visible("b")).empty());
    CHECK_THROWS_AS(l.weak_eps_stable(t("d.0")), UnknownStateError);
}

TEST_CASE("inconsistency agrees with the recursive oracle") {
    FOracle oracle;
    for (const Term& x : enumerate_terms(4, {"a", "b"})) {
        auto l = build_lts(x);
        for (StateId s = 0; s < l.size(); ++s) CHECK(l.inconsistent(s) == oracle(l.term(s)));
    }
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const Term x = gen_term(seed, 14, {"a", "b", "c"}, false);
        auto l = build_lts(x);
        for (StateId s = 0; s < l.size(); ++s) CHECK(l.inconsistent(s) == oracle(l.term(s)));
    }
}

TEST_CASE("generated systems are logic LTSs") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        auto l = build_lts(gen_term(seed, 14, {"a", "b", "c"}, false));
        const auto rep = check_llts(l);
        CHECK_MESSAGE(rep.ok(), (rep.ok() ? "" : rep.violations.front()));
    }
}

TEST_CASE("inconsistency is compositional") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        TermGenerator g(seed, {});
        const Term p = g.up_to(7), q = g.up_to(7);
        const Term cs[] = {Term::disj(p, q), Term::prefix(g.visible(), p), Term::prefix(Action::tau(), p),
                           Term::choice(p, q), Term::par(p, q, g.sync_set()), Term::conj(p, q)};
        auto l = build_lts({cs[0], cs[1], cs[2], cs[3], cs[4], cs[5]});
        // The operands are reachable from the disjunction.
        const bool fp = l.inconsistent(p), fq = l.inconsistent(q);
        CHECK(l.inconsistent(cs[0]) == (fp && fq));
        CHECK(l.inconsistent(cs[1]) == fp);
        CHECK(l.inconsistent(cs[2]) == fp);
        CHECK(l.inconsistent(cs[3]) == (fp || fq));
        CHECK(l.inconsistent(cs[4]) == (fp || fq));
        if (fp || fq) CHECK(l.inconsistent(cs[5]));
    }
}

TEST_CASE("stable descendants of compositions decompose") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        TermGenerator g(seed + 1000, {});
        const Term p = g.up_to(7), q = g.up_to(7);
        const Term cs[] = {Term::choice(p, q), Term::par(p, q, g.sync_set()), Term::conj(p, q)};
        auto l = build_lts({p, q, cs[0], cs[1], cs[2]});
        const auto wp = l.weak_eps_stable(p), wq = l.weak_eps_stable(q);
        for (const Term& c : cs)
            for (const Term& d : l.weak_eps_stable(c)) {
                REQUIRE(d.same_operator(c));
                CHECK(std::find(wp.begin(), wp.end(), d.left()) != wp.end());
                CHECK(std::find(wq.begin(), wq.end(), d.right()) != wq.end());
            }
    }
}

TEST_CASE("basic terms are consistent") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        const Term x = gen_term(seed, 14, {"a", "b", "c"}, true);
        CHECK_FALSE(build_lts(x).inconsistent(x));
    }
}

TEST_CASE("exports") {
    auto l = build_lts(t("a.0 \\/ bot"));
    const auto j = l.to_json();
    CHECK(j["root"] == 0);
    CHECK(j["states"].size() == 4);
    CHECK(j["transitions"].size() == 3);
    CHECK(j["states"][0]["term"] == "a.0 \\/ bot");
    const std::string dot = l.to_dot();
    CHECK(dot.find("peripheries=2") != std::string::npos);
    CHECK(dot.find("style=dashed") != std::string::npos);
    CHECK(dot.find("a.0 \\\\/ bot") != std::string::npos);
}
