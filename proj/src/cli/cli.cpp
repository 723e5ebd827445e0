#include "cllr/cli.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cllr/axioms.hpp"
#include "cllr/laws.hpp"
#include "cllr/normalizer.hpp"
#include "cllr/prover.hpp"
#include "cllr/refinement.hpp"
#include "cllr/syntax.hpp"

namespace cllr::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::size_t default_bound() {
    const char* env = std::getenv(kStateBoundEnv);
    if (!env || !*env) return kDefaultStateBound;
    try {
        std::size_t used = 0;
        const long long v = std::stoll(env, &used);
        if (used == std::strlen(env) && v >= 1) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw UsageError(std::string(kStateBoundEnv) + " must be a positive integer");
}

// "@path" reads a file, "-" reads stdin, anything else is the text itself.
std::string resolve(const std::string& arg, std::istream& in) {
    if (arg == "-") {
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    }
    if (!arg.empty() && arg[0] == '@') {
        std::ifstream f(arg.substr(1));
        if (!f) throw UsageError("cannot read " + arg.substr(1));
        std::ostringstream os;
        os << f.rdbuf();
        return os.str();
    }
    return arg;
}

std::vector<std::string> split_alphabet(const std::string& s) {
    std::vector<std::string> v;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',') {
            if (!cur.empty()) v.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    return v;
}

void print_lts_text(std::ostream& out, const Lts& l) {
    out << "states " << l.size() << ", transitions " << l.transition_count() << "\n";
    for (StateId s = 0; s < l.size(); ++s) {
        out << "s" << s << (s == l.root() ? " root" : "") << (l.stable(s) ? " stable" : "")
            << (l.inconsistent(s) ? " F" : "") << ": " << format(l.term(s)) << "\n";
        for (const auto& o : l.successors(s)) out << "  --" << o.label.str() << "-> s" << o.target << "\n";
    }
}

struct Options {
    std::size_t bound = kDefaultStateBound;
    std::string alphabet = "a,b,c";
    std::string format = "text";
    std::vector<std::string> terms;
    bool witness = false;
    bool proof = false;
    bool list = false;
    bool serial = false;
    bool no_shrink = false;
    std::size_t count = 100;
    std::size_t size = 8;
    std::uint64_t seed = 0;
    std::vector<std::string> laws;
};

class Runner {
public:
    Runner(std::ostream& out, std::ostream& err, std::istream& in) : out_(out), err_(err), in_(in) {}

    int execute(const std::vector<std::string>& args) {
        CLI::App app{"Workbench for finite CLL_R terms", "cllr"};
        app.require_subcommand(1);
        app.set_help_all_flag("--help-all");
        o_.bound = default_bound();

        auto global = [&](CLI::App* c) {
            c->add_option("--state-bound", o_.bound, "Maximum number of reachable states")->check(CLI::PositiveNumber);
        };
        auto terms = [&](CLI::App* c, std::size_t n) {
            c->add_option("terms", o_.terms, "Terms, @file or - for stdin")->expected(static_cast<int>(n))->required();
            global(c);
        };

        auto* parse_cmd = app.add_subcommand("parse", "Print the canonical form of a term");
        terms(parse_cmd, 1);
        auto* lts_cmd = app.add_subcommand("lts", "Export the reachable transition system");
        terms(lts_cmd, 1);
        lts_cmd->add_option("--format", o_.format)->check(CLI::IsMember({"text", "json", "dot"}));
        auto* cons_cmd = app.add_subcommand("consistent", "Whether the term is outside F");
        terms(cons_cmd, 1);
        auto* ref_cmd = app.add_subcommand("refines", "Whether the first term refines the second");
        terms(ref_cmd, 2);
        ref_cmd->add_flag("--witness", o_.witness, "Explain a negative verdict");
        ref_cmd->add_option("--format", o_.format)->check(CLI::IsMember({"text", "json"}));
        auto* eq_cmd = app.add_subcommand("equiv", "Whether the terms refine each other");
        terms(eq_cmd, 2);
        auto* norm_cmd = app.add_subcommand("normalize", "Print the normal form");
        terms(norm_cmd, 1);
        norm_cmd->add_flag("--proof", o_.proof, "Also print both derivations as JSON");
        auto* prove_cmd = app.add_subcommand("prove", "Derivation of t1 <= t2, or a witness");
        terms(prove_cmd, 2);
        auto* check_cmd = app.add_subcommand("check-proof", "Validate a proof JSON file");
        check_cmd->add_option("proof", o_.terms, "Proof file, @file or - for stdin")->expected(1)->required();
        auto* fuzz_cmd = app.add_subcommand("fuzz", "Test algebraic laws on random terms");
        global(fuzz_cmd);
        fuzz_cmd->add_option("--law", o_.laws, "Law name (repeatable); default all");
        fuzz_cmd->add_option("--count", o_.count)->check(CLI::NonNegativeNumber);
        fuzz_cmd->add_option("--size", o_.size)->check(CLI::PositiveNumber);
        fuzz_cmd->add_option("--seed", o_.seed);
        fuzz_cmd->add_option("--alphabet", o_.alphabet, "Comma-separated action names");
        fuzz_cmd->add_flag("--serial", o_.serial, "Run cases on one thread");
        fuzz_cmd->add_flag("--no-shrink", o_.no_shrink);
        fuzz_cmd->add_flag("--list", o_.list, "List law names");

        std::vector<std::string> rev(args.rbegin(), args.rend());
        try {
            app.parse(rev);
        } catch (const CLI::CallForHelp&) {
            out_ << app.help();
            return kOk;
        } catch (const CLI::CallForAllHelp&) {
            out_ << app.help("", CLI::AppFormatMode::All);
            return kOk;
        } catch (const CLI::ParseError& e) {
            err_ << "error: " << e.what() << "\n" << "run with --help for usage\n";
            return kUsage;
        }

        if (parse_cmd->parsed()) return cmd_parse();
        if (lts_cmd->parsed()) return cmd_lts();
        if (cons_cmd->parsed()) return cmd_consistent();
        if (ref_cmd->parsed()) return cmd_refines();
        if (eq_cmd->parsed()) return cmd_equiv();
        if (norm_cmd->parsed()) return cmd_normalize();
        if (prove_cmd->parsed()) return cmd_prove();
        if (check_cmd->parsed()) return cmd_check();
        return cmd_fuzz();
    }

private:
    Term term(std::size_t i) { return parse(resolve(o_.terms.at(i), in_)); }

    int cmd_parse() {
        out_ << format(term(0)) << "\n";
        return kOk;
    }

    int cmd_lts() {
        const Lts l = build_lts({term(0)}, o_.bound);
        if (o_.format == "json")
            out_ << l.to_json().dump(2) << "\n";
        else if (o_.format == "dot")
            out_ << l.to_dot();
        else
            print_lts_text(out_, l);
        return kOk;
    }

    int cmd_consistent() {
        const Term t = term(0);
        const bool bad = build_lts({t}, o_.bound).inconsistent(t);
        out_ << (bad ? "inconsistent" : "consistent") << "\n";
        return bad ? kNegative : kOk;
    }

    int cmd_refines() {
        const auto r = refines(term(0), term(1), o_.bound);
        if (o_.format == "json") {
            nlohmann::json j{{"refines", r.holds}};
            if (o_.witness && r.witness) j["witness"] = witness_to_json(*r.witness);
            out_ << j.dump(2) << "\n";
        } else {
            out_ << (r.holds ? "refined" : "not refined") << "\n";
            if (o_.witness && r.witness) out_ << describe(*r.witness) << "\n";
        }
        return r.holds ? kOk : kNegative;
    }

    int cmd_equiv() {
        const bool e = rs_equiv(term(0), term(1), o_.bound);
        out_ << (e ? "equivalent" : "not equivalent") << "\n";
        return e ? kOk : kNegative;
    }

    int cmd_normalize() {
        Normalizer n;
        const auto r = n.normalize(term(0));
        out_ << format(r.nf.term) << "\n";
        if (o_.proof)
            out_ << nlohmann::json{{"forward", proof_to_json(r.proof.fwd)}, {"backward", proof_to_json(r.proof.bwd)}}.dump(2)
                 << "\n";
        return kOk;
    }

    int cmd_prove() {
        const Term p = term(0), q = term(1);
        Prover prover(ProverOptions{o_.bound, true, Exec::Parallel});
        const auto v = prover.prove(p, q);
        if (v.derivable) {
            out_ << proof_to_json(v.proof).dump(2) << "\n";
            return kOk;
        }
        err_ << "not derivable\n";
        if (v.witness) out_ << witness_to_json(*v.witness).dump(2) << "\n";
        return kNegative;
    }

    int cmd_check() {
        const std::string& a = o_.terms.at(0);
        const std::string text = resolve(a == "-" || a.starts_with('@') ? a : "@" + a, in_);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw UsageError(std::string("malformed proof JSON: ") + e.what());
        }
        ProofPtr p;
        try {
            p = proof_from_json(j);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw UsageError(std::string("malformed proof: ") + e.what());
        }
        const auto r = check_proof(p);
        if (r.ok) {
            out_ << "valid: " << format(p->lhs) << " <= " << format(p->rhs) << "\n";
            return kOk;
        }
        out_ << "invalid at " << (r.path.empty() ? "/" : r.path) << ": " << r.reason << "\n";
        return kNegative;
    }

    int cmd_fuzz() {
        if (o_.list) {
            for (const auto& l : law_catalogue()) out_ << l.name << "\n";
            return kOk;
        }
        FuzzConfig cfg;
        cfg.seed = o_.seed;
        cfg.count = o_.count;
        cfg.size = o_.size;
        cfg.alphabet = split_alphabet(o_.alphabet);
        cfg.state_bound = o_.bound;
        cfg.exec = o_.serial ? Exec::Serial : Exec::Parallel;
        cfg.shrink = !o_.no_shrink;
        if (cfg.alphabet.empty()) throw UsageError("alphabet must not be empty");

        std::vector<std::size_t> chosen;
        const auto& all = law_catalogue();
        if (o_.laws.empty()) {
            for (std::size_t k = 0; k < all.size(); ++k) chosen.push_back(k);
        } else {
            for (const auto& name : o_.laws) {
                const Law* l = find_law(name);
                if (!l) throw UsageError("unknown law " + name);
                chosen.push_back(static_cast<std::size_t>(l - all.data()));
            }
        }
        std::size_t violations = 0;
        for (std::size_t k : chosen) {
            const auto run = run_law(all[k], k, cfg);
            violations += run.failures.size();
            out_ << run.law << ": " << run.cases << " cases, " << run.skipped << " skipped, " << run.failures.size()
                 << " violations\n";
            for (const auto& f : run.failures) {
                out_ << "  case " << f.index << ": " << describe(f.instance);
                if (!f.error.empty()) out_ << " (error: " << f.error << ")";
                out_ << "\n";
            }
        }
        out_ << (violations ? "FAILED" : "ok") << ": " << violations << " violations\n";
        return violations ? kNegative : kOk;
    }

    std::ostream& out_;
    std::ostream& err_;
    std::istream& in_;
    Options o_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
    try {
        return Runner(out, err, in).execute(args);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ResourceLimitError& e) {
        err << "resource limit: " << e.what() << "\n";
        return kResource;
    }
}

}  // namespace cllr::cli
