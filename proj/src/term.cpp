#include "cyclic/term.hpp"
#include "cyclic/value.hpp"

#include <cctype>
#include <functional>
#include <set>
#include <sstream>

namespace cyclic {

const char* guard_name(Guard g) { return g == Guard::StrictNormals ? "strict" : "strict-sub"; }

namespace {

std::shared_ptr<Term> node(Op op, int m, int n) {
    auto t = std::make_shared<Term>();
    t->op = op;
    t->m = m;
    t->n = n;
    return t;
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw TermError(msg);
}

std::string arity(const TermPtr& t) { return "(" + std::to_string(t->m) + ";" + std::to_string(t->n) + ")"; }

}  // namespace

TermPtr zero(int m, int n) {
    require(m >= 0 && n >= 0, "zero: negative arity");
    return node(Op::Zero, m, n);
}

TermPtr proj_normal(int m, int n, int i) {
    require(i >= 0 && i < m && n >= 0, "normal projection index out of range");
    auto t = node(Op::ProjN, m, n);
    t->index = i;
    return t;
}

TermPtr proj_safe(int m, int n, int j) {
    require(j >= 0 && j < n && m >= 0, "safe projection index out of range");
    auto t = node(Op::ProjS, m, n);
    t->index = j;
    return t;
}

TermPtr succ0() { return node(Op::S0, 0, 1); }
TermPtr succ1() { return node(Op::S1, 0, 1); }
TermPtr pred_fn() { return node(Op::Pred, 0, 1); }
TermPtr cond_fn() { return node(Op::Cond, 0, 4); }

TermPtr oracle(const std::string& name, int m, int n) {
    require(!name.empty() && m >= 0 && n >= 0, "bad oracle");
    auto t = node(Op::Oracle, m, n);
    t->name = name;
    return t;
}

TermPtr comp_safe(int m, int n, TermPtr h, std::vector<TermPtr> ts) {
    require(h->m == m || h->m == 0, "comp-s: head normal arity " + arity(h) + " vs " + std::to_string(m));
    require(h->n == static_cast<int>(ts.size()), "comp-s: head expects " + std::to_string(h->n) + " safe arguments, got " +
                                                      std::to_string(ts.size()));
    for (const auto& t : ts)
        require(t->m == m && t->n == n, "comp-s: argument arity " + arity(t) + " vs (" + std::to_string(m) + ";" +
                                            std::to_string(n) + ")");
    auto t = node(Op::CompSafe, m, n);
    t->args.push_back(std::move(h));
    for (auto& a : ts) t->args.push_back(std::move(a));
    return t;
}

TermPtr comp_normal(int m, int n, TermPtr h, std::vector<TermPtr> rs) {
    require(h->m == static_cast<int>(rs.size()), "comp-n: head expects " + std::to_string(h->m) + " normal arguments, got " +
                                                     std::to_string(rs.size()));
    require(h->n == n, "comp-n: head safe arity " + arity(h) + " vs " + std::to_string(n));
    for (const auto& r : rs) require(r->m == m && r->n == 0, "comp-n: argument arity " + arity(r) + " vs (" + std::to_string(m) + ";0)");
    auto t = node(Op::CompNormal, m, n);
    t->args.push_back(std::move(h));
    for (auto& a : rs) t->args.push_back(std::move(a));
    return t;
}

TermPtr srec(TermPtr g, TermPtr h0, TermPtr h1) {
    int m = g->m + 1, n = g->n;
    require(h0->m == m && h0->n == n + 1 && h1->m == m && h1->n == n + 1,
            "srec: steps must have arity (" + std::to_string(m) + ";" + std::to_string(n + 1) + ")");
    auto t = node(Op::SRecN, m, n);
    t->args = {std::move(g), std::move(h0), std::move(h1)};
    return t;
}

TermPtr snrec(const std::string& a, TermPtr g, TermPtr h0, TermPtr h1) {
    int m = g->m + 1, n = g->n;
    require(h0->m == m && h0->n == n && h1->m == m && h1->n == n,
            "snrec: steps must have arity (" + std::to_string(m) + ";" + std::to_string(n) + ")");
    auto t = node(Op::SNRec, m, n);
    t->name = a;
    t->args = {std::move(g), std::move(h0), std::move(h1)};
    return t;
}

TermPtr srec_pp(const std::string& a, TermPtr h) {
    auto t = node(Op::SRecPP, h->m, h->n);
    t->name = a;
    t->guard = Guard::StrictNormalsSubsetSafes;
    t->args = {std::move(h)};
    return t;
}

TermPtr snrec_pp(const std::string& a, TermPtr h) {
    auto t = node(Op::SNRecPP, h->m, h->n);
    t->name = a;
    t->guard = Guard::StrictNormals;
    t->args = {std::move(h)};
    return t;
}

TermPtr simrec_pp(Guard guard, int select, std::vector<std::string> as, std::vector<TermPtr> hs) {
    require(!hs.empty() && as.size() == hs.size(), "simrecpp: one oracle per function");
    require(select >= 0 && select < static_cast<int>(hs.size()), "simrecpp: selection out of range");
    for (const auto& h : hs) require(h->m == hs[0]->m && h->n == hs[0]->n, "simrecpp: arities must agree");
    auto t = node(Op::SimRecPP, hs[0]->m, hs[0]->n);
    t->guard = guard;
    t->index = select;
    t->names = std::move(as);
    t->args = std::move(hs);
    return t;
}

TermPtr guarded_call(const std::string& f, int m, int n, Guard guard) {
    auto t = node(Op::GuardedCall, m, n);
    t->name = f;
    t->guard = guard;
    return t;
}

TermPtr call(const std::string& f, int m, int n) {
    auto t = node(Op::Call, m, n);
    t->name = f;
    return t;
}

TermPtr constant(int m, int n, const std::string& decimal) {
    Value v = parse_value(decimal);
    TermPtr t = zero(m, n);
    for (std::size_t i = length(v); i-- > 0;) {
        bool bit = bit_test(v, static_cast<unsigned>(i));
        t = comp_safe(m, n, bit ? succ1() : succ0(), {t});
    }
    return t;
}

namespace {

void free_oracles(const TermPtr& t, std::set<std::string>& bound, bool& found) {
    if (found) return;
    switch (t->op) {
        case Op::Oracle:
            if (!bound.count(t->name)) found = true;
            return;
        case Op::GuardedCall:
            found = true;
            return;
        case Op::SNRec: case Op::SRecPP: case Op::SNRecPP: {
            bool fresh = bound.insert(t->name).second;
            for (const auto& a : t->args) free_oracles(a, bound, found);
            if (fresh) bound.erase(t->name);
            return;
        }
        case Op::SimRecPP: {
            std::vector<std::string> added;
            for (const auto& a : t->names)
                if (bound.insert(a).second) added.push_back(a);
            for (const auto& a : t->args) free_oracles(a, bound, found);
            for (const auto& a : added) bound.erase(a);
            return;
        }
        default:
            for (const auto& a : t->args) free_oracles(a, bound, found);
    }
}

}  // namespace

bool is_oracle_free(const TermPtr& t) {
    std::set<std::string> bound;
    bool found = false;
    free_oracles(t, bound, found);
    return !found;
}

bool is_structural_normal(const TermPtr& t) {
    if (t->op != Op::CompNormal) return false;
    std::set<int> seen;
    for (std::size_t i = 1; i < t->args.size(); ++i) {
        const auto& r = t->args[i];
        if (r->op != Op::ProjN || !seen.insert(r->index).second) return false;
    }
    return true;
}

std::size_t term_size(const TermPtr& t) {
    std::size_t s = 1;
    for (const auto& a : t->args) s += term_size(a);
    return s;
}

const PPFunction& PPProgram::function(const std::string& f) const {
    for (const auto& fn : functions)
        if (fn.name == f) return fn;
    throw TermError("unknown program function " + f);
}

bool PPProgram::has(const std::string& f) const {
    for (const auto& fn : functions)
        if (fn.name == f) return true;
    return false;
}

TermPtr TermDocument::term(const std::string& name) const {
    for (const auto& [n, t] : terms)
        if (n == name) return t;
    throw TermError("unknown term " + name);
}

// ---- parsing ----

namespace {

struct Token {
    std::string text;
    std::size_t line, col;
};

std::vector<Token> tokenize(const std::string& s) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < s.size();) {
        char c = s[i];
        if (c == '#') {
            while (i < s.size() && s[i] != '\n') ++i;
            continue;
        }
        if (c == '\n') {
            ++line;
            col = 1;
            ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            ++col;
            continue;
        }
        if (c == '(' || c == ')' || c == '=') {
            out.push_back({std::string(1, c), line, col});
            ++i;
            ++col;
            continue;
        }
        std::size_t start = i, startcol = col;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '(' && s[i] != ')' && s[i] != '#') {
            ++i;
            ++col;
        }
        out.push_back({s.substr(start, i - start), line, startcol});
    }
    return out;
}

class TermParser {
public:
    explicit TermParser(const std::string& text) : toks_(tokenize(text)) {}

    TermDocument parse() {
        while (pos_ < toks_.size()) {
            std::string kw = next().text;
            if (kw == "oracle") {
                std::string name = ident();
                int m = number(), n = number();
                doc_.oracles[name] = {m, n};
            } else if (kw == "term") {
                std::string name = ident();
                expect("=");
                for (const auto& [k, v] : doc_.terms)
                    if (k == name) fail("duplicate term " + name);
                doc_.terms.emplace_back(name, expr());
            } else if (kw == "program") {
                program();
            } else {
                fail_at(toks_[pos_ - 1], "expected 'oracle', 'term' or 'program'");
            }
        }
        return std::move(doc_);
    }

private:
    struct Scope {
        std::map<std::string, std::pair<int, int>> oracles;
    };

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    TermDocument doc_;
    std::vector<std::pair<std::string, std::pair<int, int>>> bound_;
    std::map<std::string, std::pair<int, int>> funs_;
    bool in_program_ = false;

    [[noreturn]] void fail_at(const Token& t, const std::string& msg) const {
        throw TermError(std::to_string(t.line) + ":" + std::to_string(t.col) + ": " + msg);
    }
    [[noreturn]] void fail(const std::string& msg) const {
        if (pos_ == 0 || toks_.empty()) throw TermError("1:1: " + msg);
        fail_at(toks_[std::min(pos_, toks_.size()) - 1], msg);
    }
    const Token& next() {
        if (pos_ >= toks_.size()) fail("unexpected end of input");
        return toks_[pos_++];
    }
    const Token& peek() {
        if (pos_ >= toks_.size()) fail("unexpected end of input");
        return toks_[pos_];
    }
    void expect(const std::string& s) {
        const Token& t = next();
        if (t.text != s) fail_at(t, "expected '" + s + "'");
    }
    std::string ident() {
        const Token& t = next();
        if (t.text == "(" || t.text == ")" || t.text == "=") fail_at(t, "expected identifier");
        return t.text;
    }
    int number() {
        const Token& t = next();
        for (char c : t.text)
            if (!std::isdigit(static_cast<unsigned char>(c))) fail_at(t, "expected number");
        if (t.text.empty() || t.text.size() > 6) fail_at(t, "expected small number");
        return std::stoi(t.text);
    }
    Guard guard_kind() {
        const Token& t = next();
        if (t.text == "strict") return Guard::StrictNormals;
        if (t.text == "strict-sub") return Guard::StrictNormalsSubsetSafes;
        fail_at(t, "expected guard kind 'strict' or 'strict-sub'");
    }

    template <class F>
    TermPtr wrap(const Token& at, F&& f) {
        try {
            return f();
        } catch (const TermError& e) {
            fail_at(at, e.what());
        }
    }

    TermPtr expr() {
        const Token& t = next();
        if (t.text == "s0") return succ0();
        if (t.text == "s1") return succ1();
        if (t.text == "p") return pred_fn();
        if (t.text == "cond") return cond_fn();
        if (t.text != "(") fail_at(t, "unexpected '" + t.text + "'");
        const Token& head = next();
        const std::string& h = head.text;
        TermPtr out;
        if (h == "zero") {
            int m = number(), n = number();
            out = wrap(head, [&] { return zero(m, n); });
        } else if (h == "pn" || h == "ps") {
            int m = number(), n = number(), i = number();
            out = wrap(head, [&] { return h == "pn" ? proj_normal(m, n, i) : proj_safe(m, n, i); });
        } else if (h == "const") {
            int m = number(), n = number();
            std::string v = ident();
            out = wrap(head, [&] { return constant(m, n, v); });
        } else if (h == "call") {
            std::string a = ident();
            auto ar = lookup_oracle(a, head);
            out = oracle(a, ar.first, ar.second);
        } else if (h == "comp-s" || h == "comp-n") {
            int m = number(), n = number();
            TermPtr fh = expr();
            std::vector<TermPtr> args;
            while (peek().text != ")") args.push_back(expr());
            out = wrap(head, [&] { return h == "comp-s" ? comp_safe(m, n, fh, args) : comp_normal(m, n, fh, args); });
        } else if (h == "srec") {
            TermPtr g = expr(), h0 = expr(), h1 = expr();
            out = wrap(head, [&] { return srec(g, h0, h1); });
        } else if (h == "snrec") {
            std::string a = ident();
            TermPtr g = expr();
            bound_.push_back({a, {0, g->n}});
            TermPtr h0 = expr();
            TermPtr h1 = peek().text == ")" ? h0 : expr();
            bound_.pop_back();
            out = wrap(head, [&] { return snrec(a, g, h0, h1); });
        } else if (h == "srecpp" || h == "snrecpp") {
            std::string a = ident();
            int m = number(), n = number();
            bound_.push_back({a, {m, n}});
            TermPtr body = expr();
            bound_.pop_back();
            if (body->m != m || body->n != n) fail_at(head, "recursion body arity differs from declared arity");
            out = h == "srecpp" ? srec_pp(a, body) : snrec_pp(a, body);
        } else if (h == "simrecpp") {
            Guard gk = guard_kind();
            int sel = number(), m = number(), n = number();
            expect("(");
            std::vector<std::string> as;
            while (peek().text != ")") as.push_back(ident());
            expect(")");
            for (const auto& a : as) bound_.push_back({a, {m, n}});
            std::vector<TermPtr> hs;
            while (peek().text != ")") hs.push_back(expr());
            for (std::size_t i = 0; i < as.size(); ++i) bound_.pop_back();
            out = wrap(head, [&] { return simrec_pp(gk, sel, as, hs); });
        } else if (h == "gcall") {
            if (!in_program_) fail_at(head, "gcall outside a program");
            std::string f = ident();
            Guard gk = guard_kind();
            auto it = funs_.find(f);
            if (it == funs_.end()) fail_at(head, "unknown program function " + f);
            out = guarded_call(f, it->second.first, it->second.second, gk);
        } else if (h == "fcall") {
            if (!in_program_) fail_at(head, "fcall outside a program");
            std::string f = ident();
            auto it = funs_.find(f);
            if (it == funs_.end()) fail_at(head, "unknown program function " + f);
            out = call(f, it->second.first, it->second.second);
        } else if (h == "ref") {
            std::string name = ident();
            bool found = false;
            for (const auto& [k, v] : doc_.terms)
                if (k == name) {
                    out = v;
                    found = true;
                }
            if (!found) fail_at(head, "unknown term " + name);
        } else {
            fail_at(head, "unknown constructor '" + h + "'");
        }
        expect(")");
        return out;
    }

    std::pair<int, int> lookup_oracle(const std::string& a, const Token& at) {
        for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
            if (it->first == a) return it->second;
        auto it = doc_.oracles.find(a);
        if (it == doc_.oracles.end()) fail_at(at, "oracle " + a + " used before declaration");
        return {it->second.m, it->second.n};
    }

    void program() {
        PPProgram p;
        p.name = ident();
        // pre-scan function headers so bodies may refer to later functions
        funs_.clear();
        std::size_t save = pos_;
        int depth = 0;
        for (std::size_t i = pos_; i < toks_.size(); ++i) {
            const auto& t = toks_[i].text;
            if (t == "(") ++depth;
            if (t == ")") --depth;
            if (depth == 0 && t == "end") break;
            if (depth == 0 && t == "fun" && i + 3 < toks_.size()) {
                try {
                    funs_[toks_[i + 1].text] = {std::stoi(toks_[i + 2].text), std::stoi(toks_[i + 3].text)};
                } catch (const std::exception&) {
                    fail_at(toks_[i], "bad function header");
                }
            }
        }
        pos_ = save;
        in_program_ = true;
        while (true) {
            const Token& kw = next();
            if (kw.text == "end") break;
            if (kw.text == "main") {
                p.main = ident();
            } else if (kw.text == "fun") {
                PPFunction f;
                f.name = ident();
                f.m = number();
                f.n = number();
                if (peek().text == "block") {
                    next();
                    f.block = number();
                }
                expect("=");
                f.body = expr();
                if (f.body->m != f.m || f.body->n != f.n) fail_at(kw, "body arity differs from header of " + f.name);
                if (p.has(f.name)) fail_at(kw, "duplicate function " + f.name);
                p.functions.push_back(std::move(f));
            } else {
                fail_at(kw, "expected 'fun', 'main' or 'end'");
            }
        }
        in_program_ = false;
        if (p.main.empty() || !p.has(p.main)) fail("program " + p.name + " has no valid main");
        doc_.programs.push_back(std::move(p));
    }
};

void emit(const TermPtr& t, std::ostream& out) {
    auto list = [&](const char* head, auto&& rest) {
        out << "(" << head;
        rest();
        out << ")";
    };
    switch (t->op) {
        case Op::Zero: out << "(zero " << t->m << " " << t->n << ")"; return;
        case Op::ProjN: out << "(pn " << t->m << " " << t->n << " " << t->index << ")"; return;
        case Op::ProjS: out << "(ps " << t->m << " " << t->n << " " << t->index << ")"; return;
        case Op::S0: out << "s0"; return;
        case Op::S1: out << "s1"; return;
        case Op::Pred: out << "p"; return;
        case Op::Cond: out << "cond"; return;
        case Op::Oracle: out << "(call " << t->name << ")"; return;
        case Op::GuardedCall: out << "(gcall " << t->name << " " << guard_name(t->guard) << ")"; return;
        case Op::Call: out << "(fcall " << t->name << ")"; return;
        case Op::CompSafe: case Op::CompNormal:
            list(t->op == Op::CompSafe ? "comp-s" : "comp-n", [&] {
                out << " " << t->m << " " << t->n;
                for (const auto& a : t->args) {
                    out << " ";
                    emit(a, out);
                }
            });
            return;
        case Op::SRecN:
            list("srec", [&] {
                for (const auto& a : t->args) {
                    out << " ";
                    emit(a, out);
                }
            });
            return;
        case Op::SNRec:
            list("snrec", [&] {
                out << " " << t->name;
                out << " ";
                emit(t->args[0], out);
                out << " ";
                emit(t->args[1], out);
                if (t->args[2] != t->args[1]) {
                    out << " ";
                    emit(t->args[2], out);
                }
            });
            return;
        case Op::SRecPP: case Op::SNRecPP:
            list(t->op == Op::SRecPP ? "srecpp" : "snrecpp", [&] {
                out << " " << t->name << " " << t->m << " " << t->n << " ";
                emit(t->args[0], out);
            });
            return;
        case Op::SimRecPP:
            list("simrecpp", [&] {
                out << " " << guard_name(t->guard) << " " << t->index << " " << t->m << " " << t->n << " (";
                for (std::size_t i = 0; i < t->names.size(); ++i) out << (i ? " " : "") << t->names[i];
                out << ")";
                for (const auto& a : t->args) {
                    out << " ";
                    emit(a, out);
                }
            });
            return;
    }
}

}  // namespace

TermDocument parse_terms(const std::string& text) { return TermParser(text).parse(); }

std::string serialize_term(const TermPtr& t) {
    std::ostringstream out;
    emit(t, out);
    return out.str();
}

std::string serialize_program(const PPProgram& p) {
    std::ostringstream out;
    out << "program " << p.name << "\n";
    for (const auto& f : p.functions) {
        out << "fun " << f.name << " " << f.m << " " << f.n << " block " << f.block << " =\n  ";
        emit(f.body, out);
        out << "\n";
    }
    out << "main " << p.main << "\nend\n";
    return out.str();
}

std::string serialize_document(const TermDocument& d) {
    std::ostringstream out;
    for (const auto& [name, decl] : d.oracles) out << "oracle " << name << " " << decl.m << " " << decl.n << "\n";
    for (const auto& [name, t] : d.terms) {
        out << "term " << name << " = ";
        emit(t, out);
        out << "\n";
    }
    for (const auto& p : d.programs) out << serialize_program(p);
    return out.str();
}

}  // namespace cyclic
