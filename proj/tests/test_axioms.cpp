#include <algorithm>
#include <random>

#include "cllr/axioms.hpp"
#include "cllr/generate.hpp"
#include "cllr/refinement.hpp"
#include "helpers.hpp"

using namespace cllr;
using cllr::test::t;

namespace {

bool matches(AxiomName a, Direction d, const char* l, const char* r) { return bool(match_axiom(a, d, t(l), t(r))); }

std::vector<Term> sorted_flat(const Term& x, Kind op) {
    auto v = flatten(x, op);
    std::sort(v.begin(), v.end());
    return v;
}

// Ground instances built from random terms, one or more per axiom.
std::vector<std::pair<AxiomName, std::pair<Term, Term>>> instances(TermGenerator& g, TermGenerator& basic) {
    const Term x = g.up_to(5), y = g.up_to(5), z = g.up_to(5);
    const Term bx = basic.guarded_sum(2, 3), by = basic.guarded_sum(2, 3);
    const Action a = g.visible();
    const SyncSet s = g.sync_set();
    const Term B = Term::bottom(), O = Term::nil();
    using C = std::pair<Term, Term>;
    std::vector<std::pair<AxiomName, C>> v = {
        {AxiomName::EC1, {Term::choice(x, y), Term::choice(y, x)}},
        {AxiomName::EC2, {Term::choice(Term::choice(x, y), z), Term::choice(x, Term::choice(y, z))}},
        {AxiomName::EC3, {Term::choice(bx, bx), bx}},
        {AxiomName::EC4, {Term::choice(x, O), x}},
        {AxiomName::EC5, {Term::choice(x, B), B}},
        {AxiomName::DI1, {Term::disj(x, y), Term::disj(y, x)}},
        {AxiomName::DI2, {Term::disj(x, Term::disj(y, z)), Term::disj(Term::disj(x, y), z)}},
        {AxiomName::DI3, {Term::disj(x, x), x}},
        {AxiomName::DI4, {Term::disj(x, B), x}},
        {AxiomName::DI5, {x, Term::disj(x, y)}},
        {AxiomName::CO1, {Term::conj(x, y), Term::conj(y, x)}},
        {AxiomName::CO2, {Term::conj(x, x), x}},
        {AxiomName::CO3, {Term::conj(x, B), B}},
        {AxiomName::PR1, {Term::prefix(a, B), B}},
        {AxiomName::PR2, {Term::prefix(Action::tau(), x), x}},
        {AxiomName::PA1, {Term::par(x, y, s), Term::par(y, x, s)}},
        {AxiomName::PA2, {Term::par(x, B, s), B}},
        {AxiomName::DS1, {Term::choice(x, Term::disj(y, z)), Term::disj(Term::choice(x, y), Term::choice(x, z))}},
        {AxiomName::DS2, {Term::conj(x, Term::disj(y, z)), Term::disj(Term::conj(x, y), Term::conj(x, z))}},
        {AxiomName::DS3, {Term::par(x, Term::disj(y, z), s), Term::disj(Term::par(x, y, s), Term::par(x, z, s))}},
        {AxiomName::DS4, {Term::prefix(a, Term::disj(bx, by)), Term::choice(Term::prefix(a, bx), Term::prefix(a, by))}},
        {AxiomName::EXP1, {Term::par(bx, by, s), expansion(bx, by, s)}},
        {AxiomName::EXP2, {expansion(bx, by, s), Term::par(bx, by, s)}},
    };
    // ECC schemas over a shared action sequence.
    auto s1 = *as_guarded_sum(bx);
    GuardedSum s2 = s1, zipped = s1;
    for (std::size_t i = 0; i < s1.size(); ++i) {
        s2[i].continuation = g.up_to(3);
        zipped[i].continuation = Term::conj(s1[i].continuation, s2[i].continuation);
    }
    const Term conj = Term::conj(sum_term(s1), sum_term(s2));
    v.push_back({AxiomName::ECC2, {sum_term(zipped), conj}});
    if (is_injective_in_prefixes(s1)) v.push_back({AxiomName::ECC3, {conj, sum_term(zipped)}});
    if (prefix_set(*as_guarded_sum(bx)) != prefix_set(*as_guarded_sum(by))) v.push_back({AxiomName::ECC1, {Term::conj(bx, by), B}});
    return v;
}

// Replaces one node (chosen by `pick`) with a mutated copy.
ProofPtr perturb(const ProofPtr& p, std::mt19937_64& rng, TermGenerator& g) {
    if (p->children.empty() || rng() % 3 == 0) {
        auto n = std::make_shared<ProofNode>(*p);
        switch (rng() % 4) {
            case 0: n->rhs = g.up_to(4); break;
            case 1: n->lhs = g.up_to(4); break;
            case 2: n->axiom = all_axioms()[rng() % all_axioms().size()]; n->rule = Rule::Axiom; n->children.clear(); break;
            default: n->direction = n->direction == Direction::L2R ? Direction::R2L : Direction::L2R; break;
        }
        return n;
    }
    auto n = std::make_shared<ProofNode>(*p);
    const std::size_t i = rng() % n->children.size();
    n->children[i] = perturb(n->children[i], rng, g);
    return n;
}

}  // namespace

TEST_CASE("match_axiom examples") {
    auto m = match_axiom(AxiomName::DI5, Direction::L2R, t("a.0"), t("a.0 \\/ b.0"));
    REQUIRE(m);
    CHECK(m.inst->vars.at("x") == t("a.0"));
    CHECK(m.inst->vars.at("y") == t("b.0"));

    auto d = match_axiom(AxiomName::DS4, Direction::L2R, t("a.(bot \\/ 0)"), t("a.bot [] a.0"));
    CHECK_FALSE(d);
    CHECK(d.failure.find("side condition") != std::string::npos);

    auto e = match_axiom(AxiomName::ECC1, Direction::L2R, t("a.0 /\\ b.0"), t("bot"));
    REQUIRE(e);
    CHECK(e.inst->n == 1);
    CHECK(e.inst->m == 1);
    CHECK_FALSE(matches(AxiomName::ECC1, Direction::L2R, "a.0 /\\ a.b.0", "bot"));
}

TEST_CASE("side conditions and directions") {
    CHECK_FALSE(matches(AxiomName::DI5, Direction::R2L, "a.0 \\/ b.0", "a.0"));
    CHECK(match_axiom(AxiomName::DI5, Direction::R2L, t("a.0 \\/ b.0"), t("a.0")).failure.find("left to right") !=
          std::string::npos);
    CHECK_FALSE(matches(AxiomName::PR1, Direction::L2R, "tau.bot", "bot"));
    CHECK(matches(AxiomName::PR1, Direction::L2R, "a.bot", "bot"));
    CHECK(matches(AxiomName::PR1, Direction::R2L, "bot", "a.bot"));
    CHECK(matches(AxiomName::PR2, Direction::L2R, "tau.a.0", "a.0"));
    CHECK(matches(AxiomName::EC2, Direction::L2R, "(a.0 [] b.0) [] c.0", "a.0 [] (b.0 [] c.0)"));
    CHECK_FALSE(matches(AxiomName::EC2, Direction::L2R, "a.0 [] (b.0 [] c.0)", "(a.0 [] b.0) [] c.0"));
    CHECK(matches(AxiomName::DS4, Direction::L2R, "a.(b.0 \\/ 0)", "a.b.0 [] a.0"));
    CHECK_FALSE(matches(AxiomName::DS4, Direction::L2R, "tau.(b.0 \\/ 0)", "tau.b.0 [] tau.0"));
    // EC3 only for stable terms: (b.0 \/ c.0) [] (b.0 \/ c.0) reaches b.0 [] c.0.
    CHECK(matches(AxiomName::EC3, Direction::L2R, "(a.0 [] b.0) [] (a.0 [] b.0)", "a.0 [] b.0"));
    CHECK(matches(AxiomName::EC3, Direction::R2L, "a.bot /\\ 0", "(a.bot /\\ 0) [] (a.bot /\\ 0)"));
    CHECK_FALSE(matches(AxiomName::EC3, Direction::L2R, "(b.0 \\/ c.0) [] (b.0 \\/ c.0)", "b.0 \\/ c.0"));
    CHECK_FALSE(matches(AxiomName::EC3, Direction::R2L, "tau.b.0", "tau.b.0 [] tau.b.0"));
    CHECK(match_axiom(AxiomName::EC3, Direction::L2R, t("tau.0 [] tau.0"), t("tau.0")).failure.find("side condition") !=
          std::string::npos);
    CHECK_FALSE(refines(t("(b.0 \\/ c.0) [] (b.0 \\/ c.0)"), t("b.0 \\/ c.0")).holds);
    // ECC3 needs the left sum injective.
    CHECK(matches(AxiomName::ECC3, Direction::L2R, "a.0 /\\ a.b.0", "a.(0 /\\ b.0)"));
    CHECK_FALSE(matches(AxiomName::ECC3, Direction::L2R, "(a.0 [] a.0) /\\ (a.b.0 [] a.c.0)", "a.(0 /\\ b.0) [] a.(0 /\\ c.0)"));
    CHECK(matches(AxiomName::ECC2, Direction::L2R, "a.(0 /\\ b.0) [] a.(0 /\\ c.0)", "(a.0 [] a.0) /\\ (a.b.0 [] a.c.0)"));
    CHECK(matches(AxiomName::ECC2, Direction::L2R, "0", "0 /\\ 0"));
    // Expansion with empty families uses 0.
    CHECK(expansion(t("a.0"), t("a.0"), SyncSet{"a"}) == t("(0 [] 0) [] a.(0 |[a]| 0)"));
    CHECK(matches(AxiomName::EXP1, Direction::L2R, "a.0 |[a]| b.0", "(0 [] b.(a.0 |[a]| 0)) [] 0"));
    CHECK(matches(AxiomName::EXP2, Direction::L2R, "(0 [] b.(a.0 |[a]| 0)) [] 0", "a.0 |[a]| b.0"));
    CHECK_FALSE(matches(AxiomName::EXP2, Direction::L2R, "(a.(bot |[]| 0) [] 0) [] 0", "a.bot |[]| 0"));
    CHECK(matches(AxiomName::EXP1, Direction::L2R, "a.bot |[]| 0", "(a.(bot |[]| 0) [] 0) [] 0"));
}

TEST_CASE("equational axioms match symmetrically") {
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        TermGenerator g(seed, {}), gb(seed, GenOptions::basic({"a", "b", "c"}));
        for (const auto& [name, claim] : instances(g, gb)) {
            const auto& [l, r] = claim;
            INFO(axiom_name(name) << ": " << format(l) << " <= " << format(r));
            CHECK(match_axiom(name, Direction::L2R, l, r));
            if (is_equational(name)) {
                CHECK(bool(match_axiom(name, Direction::R2L, r, l)));
            } else {
                CHECK_FALSE(match_axiom(name, Direction::R2L, r, l));
            }
        }
        // Random pairs: the two readings agree.
        for (int k = 0; k < 10; ++k) {
            const Term l = g.up_to(6), r = g.up_to(6);
            for (AxiomName a : all_axioms()) {
                if (!is_equational(a)) continue;
                CHECK(bool(match_axiom(a, Direction::L2R, l, r)) == bool(match_axiom(a, Direction::R2L, r, l)));
            }
        }
    }
}

TEST_CASE("axiom instances are sound") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        TermGenerator g(seed + 1000, GenOptions{{"a", "b"}}), gb(seed, GenOptions::basic({"a", "b"}));
        for (const auto& [name, claim] : instances(g, gb)) {
            INFO(axiom_name(name) << ": " << format(claim.first) << " <= " << format(claim.second));
            CHECK(refines(claim.first, claim.second).holds);
            if (is_equational(name)) CHECK(refines(claim.second, claim.first).holds);
        }
    }
}

TEST_CASE("check_proof examples") {
    CHECK(check_proof(proof_ref(t("a.0"))));
    auto p1 = proof_axiom(AxiomName::DI5, Direction::L2R, t("a.0"), t("a.0 \\/ b.0"));
    auto p2 = proof_axiom(AxiomName::DI1, Direction::L2R, t("a.0 \\/ b.0"), t("b.0 \\/ a.0"));
    auto tr = proof_trans(p1, p2);
    CHECK(tr->lhs == t("a.0"));
    CHECK(tr->rhs == t("b.0 \\/ a.0"));
    CHECK(check_proof(tr));

    auto ctx = std::make_shared<ProofNode>();
    ctx->rule = Rule::Context;
    ctx->lhs = t("a.0");
    ctx->rhs = t("a.bot");
    ctx->children = {proof_ref(t("0"))};
    auto r = check_proof(ctx);
    CHECK_FALSE(r);
    CHECK(r.reason.find("premise") != std::string::npos);

    auto bad_leaf = proof_trans(p1, proof_axiom(AxiomName::DI1, Direction::L2R, t("a.0 \\/ b.0"), t("a.0 \\/ b.0")));
    auto r2 = check_proof(bad_leaf);
    CHECK_FALSE(r2);
    CHECK(r2.path == "/1");

    auto broken = std::make_shared<ProofNode>(*tr);
    broken->rhs = t("a.0 \\/ b.0");
    CHECK_FALSE(check_proof(broken));
}

TEST_CASE("context proofs") {
    const Term shape = t("a.0 [] (b.0 \\/ 0)");
    auto inner = eq_axiom(AxiomName::DI1, Direction::L2R, t("b.0 \\/ 0"), t("0 \\/ b.0"));
    auto c = eq_context(shape, {eq_refl(t("a.0")), inner});
    CHECK(c.lhs() == shape);
    CHECK(c.rhs() == t("a.0 [] (0 \\/ b.0)"));
    CHECK(check_proof(c.fwd));
    CHECK(check_proof(c.bwd));
    CHECK(eq_context(shape, {eq_refl(t("a.0")), eq_refl(t("b.0 \\/ 0"))}).fwd->rule == Rule::Ref);
}

TEST_CASE("reorder_proof examples") {
    auto p = reorder_proof(t("(a.0 [] b.0) [] c.0"), t("a.0 [] (c.0 [] b.0)"));
    REQUIRE(p);
    CHECK(check_proof(p->fwd));
    CHECK(check_proof(p->bwd));
    CHECK(p->lhs() == t("(a.0 [] b.0) [] c.0"));
    CHECK(p->rhs() == t("a.0 [] (c.0 [] b.0)"));

    auto q = reorder_proof(t("a.0 \\/ b.0"), t("b.0 \\/ a.0"));
    REQUIRE(q);
    CHECK(check_proof(q->fwd));
    CHECK(q->fwd->rule == Rule::Axiom);
    CHECK(q->fwd->axiom == AxiomName::DI1);

    CHECK_FALSE(reorder_proof(t("a.0 [] b.0"), t("a.0 [] a.0")));
}

TEST_CASE("reorder_proof exists iff flattenings agree") {
    std::mt19937_64 rng(7);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        TermGenerator g(seed + 5, {});
        const Kind op = seed % 2 ? Kind::ExtChoice : Kind::Disj;
        std::vector<Term> items;
        const std::size_t n = 1 + rng() % 6;
        for (std::size_t i = 0; i < n; ++i) items.push_back(g.up_to(3));
        auto shuffled = items;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        if (seed % 5 == 0) shuffled[rng() % n] = g.up_to(3);
        // Random bracketing of the shuffled list.
        std::function<Term(std::size_t, std::size_t)> build = [&](std::size_t lo, std::size_t hi) -> Term {
            if (hi - lo == 1) return shuffled[lo];
            const std::size_t mid = lo + 1 + rng() % (hi - lo - 1);
            const Term l = build(lo, mid), r = build(mid, hi);
            return op == Kind::Disj ? Term::disj(l, r) : Term::choice(l, r);
        };
        const Term src = left_nest(op, items), dst = build(0, n);
        const bool same = sorted_flat(src, op) == sorted_flat(dst, op) ||
                          sorted_flat(src, Kind::ExtChoice) == sorted_flat(dst, Kind::ExtChoice) ||
                          sorted_flat(src, Kind::Disj) == sorted_flat(dst, Kind::Disj);
        auto p = reorder_proof(src, dst);
        INFO(format(src) << " => " << format(dst));
        CHECK(p.has_value() == same);
        if (p) {
            CHECK(p->lhs() == src);
            CHECK(p->rhs() == dst);
            CHECK(check_proof(p->fwd));
            CHECK(check_proof(p->bwd));
        }
    }
}

TEST_CASE("sort and dedup proofs") {
    const std::vector<Term> items = {t("b.0"), t("a.0"), t("b.0"), t("0"), t("a.0")};
    for (Kind op : {Kind::ExtChoice, Kind::Disj}) {
        auto p = sort_dedup_proof(op, items, true);
        auto expect = items;
        std::sort(expect.begin(), expect.end());
        expect.erase(std::unique(expect.begin(), expect.end()), expect.end());
        CHECK(p.lhs() == left_nest(op, items));
        CHECK(p.rhs() == left_nest(op, expect));
        CHECK(check_proof(p.fwd));
        CHECK(check_proof(p.bwd));
        auto nodedup = sort_dedup_proof(op, items, false);
        CHECK(flatten(nodedup.rhs(), op).size() == items.size());
        CHECK(check_proof(nodedup.fwd));
    }
    const Term nested = t("(a.0 [] (b.0 [] c.0)) [] (0 [] a.0)");
    auto ln = left_nest_proof(Kind::ExtChoice, nested);
    CHECK(ln.rhs() == left_nest(Kind::ExtChoice, flatten(nested, Kind::ExtChoice)));
    CHECK(check_proof(ln.fwd));
    CHECK(check_proof(ln.bwd));
}

TEST_CASE("proof json round trip") {
    auto p = reorder_proof(t("(a.0 [] b.0) [] (c.0 [] a.0)"), t("c.0 [] ((b.0 [] a.0) [] a.0)"));
    REQUIRE(p);
    auto shared = proof_trans(p->fwd, p->bwd);
    const auto j = proof_to_json(shared);
    auto back = proof_from_json(j);
    CHECK(check_proof(back));
    CHECK(back->lhs == shared->lhs);
    CHECK(back->rhs == shared->rhs);
    CHECK(proof_to_json(back) == j);
    CHECK(proof_size(back) == proof_size(shared));

    auto leaf = proof_to_json(proof_axiom(AxiomName::DI5, Direction::L2R, t("a.0"), t("a.0 \\/ b.0")));
    CHECK(leaf["rule"] == "AXIOM");
    CHECK(leaf["axiom"] == "DI5");
    CHECK(leaf["direction"] == "L2R");
    CHECK(leaf["claimLhs"] == "a.0");
    CHECK(leaf["claimRhs"] == "a.0 \\/ b.0");
    CHECK(leaf["children"].empty());
    CHECK_THROWS(proof_from_json(nlohmann::json{{"rule", "MAGIC"}}));
}

TEST_CASE("perturbed proofs stay sound") {
    std::size_t still_valid = 0, rejected = 0;
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        TermGenerator g(seed + 300, GenOptions{{"a", "b"}});
        std::mt19937_64 rng(seed);
        std::vector<Term> items;
        for (int i = 0; i < 4; ++i) items.push_back(g.up_to(3));
        const Kind op = seed % 2 ? Kind::ExtChoice : Kind::Disj;
        const auto base = sort_dedup_proof(op, items, true);
        for (const ProofPtr& pf : {base.fwd, base.bwd}) {
            REQUIRE(check_proof(pf));
            auto bad = perturb(pf, rng, g);
            if (check_proof(bad)) {
                ++still_valid;
                CHECK(refines(bad->lhs, bad->rhs).holds);
            } else {
                ++rejected;
            }
        }
    }
    CHECK(rejected > 0);
    MESSAGE("perturbations accepted: " << still_valid << ", rejected: " << rejected);
}
