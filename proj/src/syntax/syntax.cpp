#include <algorithm>

#include "cllr/syntax.hpp"

namespace cllr {

namespace {

// Binding strength, loosest first. Constants bind tightest.
int level(const Term& t) {
    switch (t.kind()) {
        case Kind::Disj: return 1;
        case Kind::Conj: return 2;
        case Kind::ExtChoice: return 3;
        case Kind::Par: return 4;
        case Kind::Prefix: return 5;
        default: return 6;
    }
}

void emit(const Term& t, int min_level, std::string& out) {
    const bool parens = level(t) < min_level;
    if (parens) out += '(';
    switch (t.kind()) {
        case Kind::Nil: out += '0'; break;
        case Kind::Bottom: out += "bot"; break;
        case Kind::Prefix:
            out += t.action().str();
            out += '.';
            emit(t.body(), 5, out);
            break;
        default: {
            const int lv = level(t);
            emit(t.left(), lv, out);
            switch (t.kind()) {
                case Kind::Disj: out += " \\/ "; break;
                case Kind::Conj: out += " /\\ "; break;
                case Kind::ExtChoice: out += " [] "; break;
                default: {
                    out += " |[";
                    const auto& names = t.sync().names();
                    for (std::size_t i = 0; i < names.size(); ++i) {
                        if (i) out += ',';
                        out += names[i];
                    }
                    out += "]| ";
                }
            }
            emit(t.right(), lv + 1, out);
        }
    }
    if (parens) out += ')';
}

}  // namespace

std::string format(const Term& t) {
    std::string out;
    emit(t, 0, out);
    return out;
}

bool is_basic(const Term& t) {
    switch (t.kind()) {
        case Kind::Nil: return true;
        case Kind::Bottom:
        case Kind::Conj: return false;
        case Kind::Prefix: return is_basic(t.body());
        default: return is_basic(t.left()) && is_basic(t.right());
    }
}

bool is_stable(const Term& t) {
    switch (t.kind()) {
        case Kind::Nil:
        case Kind::Bottom: return true;
        case Kind::Prefix: return !t.action().is_tau();
        case Kind::Disj: return false;
        default: return is_stable(t.left()) && is_stable(t.right());
    }
}

std::optional<GuardedSum> as_guarded_sum(const Term& t) {
    if (t.is_nil()) return GuardedSum{};
    GuardedSum rev;
    Term cur = t;
    while (cur.is(Kind::ExtChoice)) {
        const Term& r = cur.right();
        if (!r.is(Kind::Prefix) || r.action().is_tau()) return std::nullopt;
        rev.push_back({r.action(), r.body()});
        cur = cur.left();
    }
    if (!cur.is(Kind::Prefix) || cur.action().is_tau()) return std::nullopt;
    rev.push_back({cur.action(), cur.body()});
    std::reverse(rev.begin(), rev.end());
    return rev;
}

Term sum_term(const GuardedSum& summands) {
    if (summands.empty()) return Term::nil();
    Term t = Term::prefix(summands.front().action, summands.front().continuation);
    for (std::size_t i = 1; i < summands.size(); ++i)
        t = Term::choice(std::move(t), Term::prefix(summands[i].action, summands[i].continuation));
    return t;
}

bool is_injective_in_prefixes(const GuardedSum& s) {
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
            if (s[i].action == s[j].action) return false;
    return true;
}

std::set<Action> prefix_set(const GuardedSum& s) {
    std::set<Action> out;
    for (const auto& m : s) out.insert(m.action);
    return out;
}

namespace {
void flatten_into(const Term& t, Kind op, std::vector<Term>& out) {
    if (t.kind() != op) {
        out.push_back(t);
        return;
    }
    flatten_into(t.left(), op, out);
    flatten_into(t.right(), op, out);
}
}  // namespace

std::vector<Term> flatten(const Term& t, Kind op) {
    std::vector<Term> out;
    flatten_into(t, op, out);
    return out;
}

Term left_nest(Kind op, const std::vector<Term>& items) {
    Term t = items.at(0);
    for (std::size_t i = 1; i < items.size(); ++i) {
        t = op == Kind::Disj ? Term::disj(std::move(t), items[i]) : Term::choice(std::move(t), items[i]);
    }
    return t;
}

bool is_basic_normal_form(const Term& t) {
    // Left-nested disjunction: the right operand of every ∨-spine node is a disjunct.
    Term cur = t;
    for (;;) {
        const Term& disjunct = cur.is(Kind::Disj) ? cur.right() : cur;
        auto sum = as_guarded_sum(disjunct);
        if (!sum || !is_injective_in_prefixes(*sum)) return false;
        for (const auto& m : *sum)
            if (!is_basic_normal_form(m.continuation)) return false;
        if (!cur.is(Kind::Disj)) return true;
        cur = cur.left();
    }
}

bool is_normal_form(const Term& t) { return t.is_bottom() || is_basic_normal_form(t); }

nlohmann::json term_to_json(const Term& t) {
    nlohmann::json j;
    j["kind"] = kind_name(t.kind());
    switch (t.kind()) {
        case Kind::Nil:
        case Kind::Bottom: break;
        case Kind::Prefix:
            j["action"] = t.action().str();
            j["body"] = term_to_json(t.body());
            break;
        default:
            j["left"] = term_to_json(t.left());
            j["right"] = term_to_json(t.right());
            if (t.is(Kind::Par)) j["sync"] = t.sync().names();
    }
    return j;
}

Term term_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "Nil") return Term::nil();
    if (kind == "Bottom") return Term::bottom();
    if (kind == "Prefix") {
        const std::string a = j.at("action").get<std::string>();
        return Term::prefix(a == "tau" ? Action::tau() : Action::visible(a), term_from_json(j.at("body")));
    }
    Term l = term_from_json(j.at("left"));
    Term r = term_from_json(j.at("right"));
    if (kind == "ExtChoice") return Term::choice(std::move(l), std::move(r));
    if (kind == "Conj") return Term::conj(std::move(l), std::move(r));
    if (kind == "Disj") return Term::disj(std::move(l), std::move(r));
    if (kind == "Par") return Term::par(std::move(l), std::move(r), SyncSet(j.at("sync").get<std::vector<std::string>>()));
    throw std::invalid_argument("unknown term kind '" + kind + "'");
}

}  // namespace cllr
