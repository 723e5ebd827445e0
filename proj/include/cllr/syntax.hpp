#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cllr/term.hpp"

namespace cllr {

/// Concrete syntax (ASCII), loosest to tightest:
///
///   term   := disj
///   disj   := conj ("\/" conj)*
///   conj   := choice ("/\" choice)*
///   choice := par ("[]" par)*
///   par    := pre ("|[" actlist "]|" pre)*
///   pre    := action "." pre | atom
///   atom   := "0" | "bot" | "(" term ")"
///   action := "tau" | [a-z][a-zA-Z0-9_]*
///
/// All binary operators associate to the left. `bot` is reserved and `tau`
/// may not appear in a synchronisation list.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, std::vector<std::string> expected, std::string found);

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }
    const std::vector<std::string>& expected() const { return expected_; }
    const std::string& found() const { return found_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::vector<std::string> expected_;
    std::string found_;
};

Term parse(std::string_view text);

/// One summand a.t of a guarded sum.
struct Summand {
    Action action;
    Term continuation;
    bool operator==(const Summand&) const = default;
};

/// View of a left-nested external choice of visible prefixes. Empty means 0.
using GuardedSum = std::vector<Summand>;

/// No ⊥ and no ∧ anywhere in the term.
bool is_basic(const Term& t);

/// No τ-transition: no ∨ and no τ-prefix outside prefix bodies.
bool is_stable(const Term& t);

/// Left-nested □ of visible prefixes (or 0); absent otherwise.
std::optional<GuardedSum> as_guarded_sum(const Term& t);

/// The left-nested general external choice over `summands`; 0 when empty.
Term sum_term(const GuardedSum& summands);

bool is_injective_in_prefixes(const GuardedSum& s);
std::set<Action> prefix_set(const GuardedSum& s);

/// Operands of the maximal left/right nesting of one binary operator kind, in order.
std::vector<Term> flatten(const Term& t, Kind op);
/// Left-nested general disjunction/choice of a nonempty list.
Term left_nest(Kind op, const std::vector<Term>& items);

bool is_normal_form(const Term& t);
/// NF minus ⊥.
bool is_basic_normal_form(const Term& t);

nlohmann::json term_to_json(const Term& t);
Term term_from_json(const nlohmann::json& j);

}  // namespace cllr
