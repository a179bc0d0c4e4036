#include "cyclic/bounds.hpp"
#include "cyclic/checker.hpp"
#include "cyclic/cnf.hpp"
#include "cyclic/compile.hpp"
#include "cyclic/format.hpp"
#include "cyclic/interp.hpp"
#include "cyclic/proof.hpp"
#include "cyclic/term.hpp"
#include "cyclic/transform.hpp"
#include "cyclic/translate.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <sstream>

using namespace cyclic;

namespace {

// rejection: the input is well formed but not accepted
struct Rejected : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Values parse_values(const std::string& s) {
    Values out;
    if (s.empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_value(item));
    return out;
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_file(out_path, text);
    }
}

ProofGraph load_proof(const std::string& path) {
    ProofGraph g = parse_proof(read_file(path));
    auto kind = GraphKind::WithOracles;
    for (const auto& [id, n] : g.nodes)
        if (n.rule == Rule::SRec) kind = GraphKind::Derivation;
    auto errs = validate_graph(g, kind);
    if (!errs.empty())
        throw ProofError("node " + std::to_string(errs.front().node) + ": " + errs.front().message);
    return g;
}

std::pair<std::string, TermPtr> load_term(const std::string& path, const std::string& name) {
    TermDocument d = parse_terms(read_file(path));
    if (name.empty()) {
        if (d.terms.empty()) throw TermError("no terms in " + path);
        return d.terms.front();
    }
    return {name, d.term(name)};
}

bool is_term_file(const std::string& path) { return path.size() > 5 && path.substr(path.size() - 5) == ".term"; }

struct Options {
    std::string input, output, system = "cb", normals, safes, term, program, function, guard_mode = "zero", target = "circular",
                                                                           dot, json;
    std::uint64_t fuel = 1000000, seed = 1;
    int samples = 200;
    bool no_flatten = false;
};

int cmd_check(const Options& o) {
    ProofGraph g = load_proof(o.input);
    Classification c = classify(g);
    std::string report = report_json(g, c);
    if (!o.json.empty()) write_file(o.json, report);
    bool ok = true;
    std::string reason;
    if (o.system == "bminus") {
        ok = c.valid;
    } else if (o.system == "cnb") {
        ok = c.cls != ProofClass::None;
    } else {
        ok = c.cls == ProofClass::CB;
    }
    if (!ok) {
        if (!c.safe)
            reason = "not safe";
        else if (c.progressing != Progress::Progressing)
            reason = "not progressing";
        else if (!c.left_leaning)
            reason = "not left-leaning";
    }
    std::cout << (ok ? "accepted" : "rejected") << " class=" << class_name(c.cls);
    if (!ok) {
        std::cout << " reason=" << reason;
        if (!c.witness_cycle.empty()) {
            std::cout << " witness=";
            for (std::size_t i = 0; i < c.witness_cycle.size(); ++i) std::cout << (i ? "," : "") << c.witness_cycle[i];
        }
    }
    std::cout << "\n";
    return ok ? 0 : 1;
}

EvalConfig config(const Options& o) {
    EvalConfig cfg;
    cfg.fuel = o.fuel;
    cfg.guard_mode = o.guard_mode == "strict" ? GuardMode::StrictError : GuardMode::ZeroResult;
    return cfg;
}

int cmd_eval(const Options& o) {
    Values x = parse_values(o.normals), y = parse_values(o.safes);
    Value v;
    if (is_term_file(o.input) || !o.term.empty()) {
        auto [name, t] = load_term(o.input, o.term);
        if (x.size() != static_cast<std::size_t>(t->m) || y.size() != static_cast<std::size_t>(t->n))
            throw EvalError("arity mismatch: " + name + " takes " + std::to_string(t->m) + " normal and " +
                            std::to_string(t->n) + " safe inputs");
        v = eval_term(t, {}, x, y, config(o));
    } else {
        ProofGraph g = load_proof(o.input);
        const Sequent& s = g.at(g.root).seq;
        if (x.size() != static_cast<std::size_t>(s.boxed) || y.size() != static_cast<std::size_t>(s.plain))
            throw EvalError("arity mismatch: root sequent is " + to_string(s));
        v = eval_proof(g, x, y, config(o));
    }
    std::cout << v << "\n";
    return 0;
}

int cmd_eval_pp(const Options& o) {
    TermDocument d = parse_terms(read_file(o.input));
    if (d.programs.empty()) throw TermError("no programs in " + o.input);
    const PPProgram* p = &d.programs.front();
    if (!o.program.empty()) {
        p = nullptr;
        for (const auto& q : d.programs)
            if (q.name == o.program) p = &q;
        if (!p) throw TermError("unknown program " + o.program);
    }
    std::string f = o.function.empty() ? p->main : o.function;
    const PPFunction& fn = p->function(f);
    Values x = parse_values(o.normals), y = parse_values(o.safes);
    if (x.size() != static_cast<std::size_t>(fn.m) || y.size() != static_cast<std::size_t>(fn.n))
        throw EvalError("arity mismatch: " + f + " takes " + std::to_string(fn.m) + " normal and " +
                        std::to_string(fn.n) + " safe inputs");
    std::cout << eval_pp(*p, f, {}, x, y, config(o)) << "\n";
    return 0;
}

int cmd_compile(const Options& o) {
    auto [name, t] = load_term(o.input, o.term);
    ProofGraph g;
    if (o.target == "derivation") {
        g = term_to_derivation(t, name);
    } else if (check_term_class(t, TermClass::B)) {
        g = nb_to_circular(t, name);
    } else {
        g = srec_eliminate(term_to_derivation(t, name));
    }
    emit(o.output, serialize_proof(g));
    return 0;
}

int cmd_translate(const Options& o) {
    ProofGraph g = load_proof(o.input);
    PPProgram p;
    try {
        p = translate(g, !o.no_flatten);
    } catch (const TranslateError& e) {
        throw Rejected(e.what());
    }
    emit(o.output, serialize_program(p));
    return 0;
}

int cmd_cyclenf(const Options& o) {
    ProofGraph g = load_proof(o.input);
    CycleNF c = cycle_normal_form(g);
    ProofGraph out = cnf_to_graph(c);
    if (!o.dot.empty()) write_file(o.dot, export_dot(out));
    emit(o.output, serialize_proof(out));
    return 0;
}

int cmd_bound(const Options& o) {
    auto [name, t] = load_term(o.input, o.term);
    BoundPair b = synthesize_bound(t);
    std::string j = bound_json(name, b);
    if (!o.json.empty()) write_file(o.json, j);
    std::cout << "e(n) = " << to_string(b.e) << "\nd = " << b.d << "\npolynomial = " << (b.is_polynomial ? "true" : "false")
              << "\n";
    return 0;
}

int cmd_verify_bound(const Options& o) {
    auto [name, t] = load_term(o.input, o.term);
    VerifyReport r = verify_bound(t, name, o.samples, o.seed);
    std::string j = verify_report_json(r);
    if (!o.json.empty()) write_file(o.json, j);
    std::cout << name << ": " << r.samples << " samples, " << r.violations << " violations, max slack " << r.max_slack
              << "\n";
    for (const auto& ex : r.examples) std::cout << "  violation " << ex << "\n";
    return r.violations == 0 ? 0 : 1;
}

int cmd_export_dot(const Options& o) {
    emit(o.output, export_dot(load_proof(o.input)));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cyclic proof checker, interpreter, compiler and translator"};
    app.require_subcommand(1);
    Options o;
    auto add_input = [&](CLI::App* s) { s->add_option("input", o.input, "input file")->required()->check(CLI::ExistingFile); };
    auto add_eval = [&](CLI::App* s) {
        s->add_option("--normals", o.normals, "comma-separated normal inputs");
        s->add_option("--safes", o.safes, "comma-separated safe inputs");
        s->add_option("--fuel", o.fuel, "step budget");
        s->add_option("--guard-mode", o.guard_mode, "guard failure handling")->check(CLI::IsMember({"zero", "strict"}));
    };

    auto* check = app.add_subcommand("check", "classify a proof");
    add_input(check);
    check->add_option("--system", o.system)->check(CLI::IsMember({"cb", "cnb", "bminus"}));
    check->add_option("--json", o.json, "write the JSON report");

    auto* eval = app.add_subcommand("eval", "evaluate a proof or term");
    add_input(eval);
    add_eval(eval);
    eval->add_option("--term", o.term, "term name");

    auto* eval_pp_cmd = app.add_subcommand("eval-pp", "evaluate a guarded recursion program");
    add_input(eval_pp_cmd);
    add_eval(eval_pp_cmd);
    eval_pp_cmd->add_option("--program", o.program);
    eval_pp_cmd->add_option("--function", o.function);

    auto* compile = app.add_subcommand("compile", "compile a term into a proof");
    add_input(compile);
    compile->add_option("--term", o.term);
    compile->add_option("--target", o.target)->check(CLI::IsMember({"derivation", "circular"}));
    compile->add_option("-o,--output", o.output);

    auto* translate_cmd = app.add_subcommand("translate", "translate a proof into a guarded recursion program");
    add_input(translate_cmd);
    translate_cmd->add_option("-o,--output", o.output);
    translate_cmd->add_flag("--no-flatten", o.no_flatten, "keep simultaneous blocks");

    auto* cyclenf = app.add_subcommand("cyclenf", "cycle normal form");
    add_input(cyclenf);
    cyclenf->add_option("--dot", o.dot);
    cyclenf->add_option("-o,--output", o.output);

    auto* bound = app.add_subcommand("bound", "synthesize a growth bound");
    add_input(bound);
    bound->add_option("--term", o.term);
    bound->add_option("--json", o.json);

    auto* verify = app.add_subcommand("verify-bound", "check a growth bound on random inputs");
    add_input(verify);
    verify->add_option("--term", o.term);
    verify->add_option("--samples", o.samples)->check(CLI::NonNegativeNumber);
    verify->add_option("--seed", o.seed);
    verify->add_option("--json", o.json);

    auto* dot = app.add_subcommand("export-dot", "export a proof as DOT");
    add_input(dot);
    dot->add_option("-o,--output", o.output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (check->parsed()) return cmd_check(o);
        if (eval->parsed()) return cmd_eval(o);
        if (eval_pp_cmd->parsed()) return cmd_eval_pp(o);
        if (compile->parsed()) return cmd_compile(o);
        if (translate_cmd->parsed()) return cmd_translate(o);
        if (cyclenf->parsed()) return cmd_cyclenf(o);
        if (bound->parsed()) return cmd_bound(o);
        if (verify->parsed()) return cmd_verify_bound(o);
        if (dot->parsed()) return cmd_export_dot(o);
    } catch (const FuelExhausted&) {
        std::cout << "fuel-exhausted\n";
        return 1;
    } catch (const Rejected& e) {
        std::cerr << "rejected: " << e.what() << "\n";
        return 1;
    } catch (const GuardViolation& e) {
        std::cerr << "guard violation: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
