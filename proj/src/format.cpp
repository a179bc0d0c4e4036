#include "cyclic/format.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace cyclic {

ParseError::ParseError(std::size_t l, std::size_t c, const std::string& msg)
    : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), column(c) {}

namespace {

class LineLexer {
public:
    LineLexer(const std::string& s, std::size_t line) : s_(s), line_(line) {}

    void skip_ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool at_end() {
        skip_ws();
        return i_ >= s_.size();
    }
    [[noreturn]] void error(const std::string& msg) const { throw ParseError(line_, i_ + 1, msg); }

    std::string word() {
        skip_ws();
        std::size_t start = i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_' || s_[i_] == '\'' ||
                                  s_[i_] == '-' || s_[i_] == '.'))
            ++i_;
        if (start == i_) error("expected identifier");
        return s_.substr(start, i_ - start);
    }
    NodeId number() {
        skip_ws();
        std::size_t start = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (start == i_) error("expected number");
        try {
            return std::stoull(s_.substr(start, i_ - start));
        } catch (const std::exception&) {
            i_ = start;
            error("number out of range");
        }
    }
    bool peek(char c) {
        skip_ws();
        return i_ < s_.size() && s_[i_] == c;
    }
    bool peek_word(const std::string& w) {
        skip_ws();
        return s_.compare(i_, w.size(), w) == 0 &&
               (i_ + w.size() == s_.size() || !std::isalnum(static_cast<unsigned char>(s_[i_ + w.size()])));
    }
    void expect(char c) {
        if (!peek(c)) error(std::string("expected '") + c + "'");
        ++i_;
    }
    void expect_word(const std::string& w) {
        std::size_t at = i_;
        std::string got = word();
        if (got != w) {
            i_ = at;
            skip_ws();
            error("expected '" + w + "'");
        }
    }
    bool take(const std::string& tok) {
        skip_ws();
        if (s_.compare(i_, tok.size(), tok) == 0) {
            i_ += tok.size();
            return true;
        }
        return false;
    }
    std::size_t col() const { return i_ + 1; }

private:
    const std::string& s_;
    std::size_t line_;
    std::size_t i_ = 0;
};

SType parse_type(LineLexer& lx) {
    std::string t = lx.word();
    if (t == "N") return SType::Plain;
    if (t == "bN") return SType::Boxed;
    lx.error("unknown type '" + t + "'");
}

Sequent parse_sequent(LineLexer& lx) {
    Sequent s;
    bool seen_plain = false;
    if (!lx.take("=>")) {
        while (true) {
            SType t = parse_type(lx);
            if (t == SType::Boxed) {
                if (seen_plain) lx.error("plain N listed before a boxed bN");
                ++s.boxed;
            } else {
                seen_plain = true;
                ++s.plain;
            }
            if (lx.take(",")) continue;
            if (lx.take("=>")) break;
            lx.error("expected ',' or '=>'");
        }
    }
    s.succ = parse_type(lx);
    return s;
}

}  // namespace

ProofGraph parse_proof(const std::string& text) {
    ProofGraph g;
    bool header = false;
    std::istringstream in(text);
    std::string raw;
    std::size_t lineno = 0;
    std::map<NodeId, std::pair<std::size_t, std::size_t>> where;
    std::vector<std::tuple<NodeId, NodeId, std::size_t, std::size_t>> refs;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw.substr(0, raw.find('#'));
        LineLexer lx(line, lineno);
        if (lx.at_end()) continue;
        std::string kw = lx.word();
        if (kw == "proof") {
            if (header) lx.error("duplicate proof header");
            g.name = lx.word();
            lx.expect_word("root");
            g.root = lx.number();
            header = true;
        } else if (kw == "node") {
            if (!header) lx.error("node before proof header");
            std::size_t idcol = lx.col();
            NodeId id = lx.number();
            if (g.nodes.count(id)) throw ParseError(lineno, idcol, "duplicate node id " + std::to_string(id));
            lx.expect(':');
            std::size_t rulecol = lx.col();
            std::string rname = lx.word();
            auto rule = rule_from_name(rname);
            if (!rule) throw ParseError(lineno, rulecol, "unknown rule '" + rname + "'");
            Node n;
            n.rule = *rule;
            if (lx.peek('(')) {
                lx.expect('(');
                if (n.rule == Rule::ExchN || n.rule == Rule::ExchBox) {
                    n.pos = static_cast<int>(lx.number());
                } else if (n.rule == Rule::Dis) {
                    if (!lx.peek(')')) {
                        n.dis.push_back(lx.number());
                        while (lx.take(",")) n.dis.push_back(lx.number());
                    }
                } else if (n.rule == Rule::Oracle) {
                    n.oracle = lx.word();
                } else {
                    lx.error("rule '" + rname + "' takes no parameter");
                }
                lx.expect(')');
            } else if (n.rule == Rule::ExchN || n.rule == Rule::ExchBox) {
                lx.error("exchange needs a position parameter");
            }
            if (lx.peek_word("oracle")) {
                lx.expect_word("oracle");
                n.oracle = lx.word();
            }
            if (n.rule == Rule::Oracle && n.oracle.empty()) lx.error("oracle leaf needs a name");
            if (n.rule != Rule::Oracle && !n.oracle.empty()) lx.error("only oracle leaves carry a name");
            lx.expect_word("seq");
            n.seq = parse_sequent(lx);
            lx.expect_word("premises");
            lx.expect('[');
            if (!lx.peek(']')) {
                do {
                    std::size_t c = lx.col();
                    NodeId p = lx.number();
                    n.premises.push_back(p);
                    refs.emplace_back(id, p, lineno, c);
                } while (lx.take(","));
            }
            lx.expect(']');
            if (!lx.at_end()) lx.error("trailing input");
            where[id] = {lineno, idcol};
            g.nodes.emplace(id, std::move(n));
        } else {
            throw ParseError(lineno, 1, "expected 'proof' or 'node'");
        }
    }
    if (!header) throw ParseError(lineno + 1, 1, "missing proof header");
    for (const auto& [from, to, l, c] : refs)
        if (!g.nodes.count(to)) throw ParseError(l, c, "premise refers to undeclared node " + std::to_string(to));
    if (!g.nodes.count(g.root)) throw ParseError(1, 1, "root " + std::to_string(g.root) + " is not declared");
    return g;
}

std::string serialize_proof(const ProofGraph& g) {
    std::ostringstream out;
    out << "proof " << g.name << " root " << g.root << "\n";
    for (const auto& [id, n] : g.nodes) {
        out << "node " << id << " : " << rule_name(n.rule);
        if (n.rule == Rule::ExchN || n.rule == Rule::ExchBox) out << "(" << n.pos << ")";
        if (n.rule == Rule::Dis) {
            out << "(";
            for (std::size_t i = 0; i < n.dis.size(); ++i) out << (i ? "," : "") << n.dis[i];
            out << ")";
        }
        if (n.rule == Rule::Oracle) out << " oracle " << n.oracle;
        out << " seq " << to_string(n.seq) << " premises [";
        for (std::size_t i = 0; i < n.premises.size(); ++i) out << (i ? "," : "") << n.premises[i];
        out << "]\n";
    }
    return out.str();
}

std::vector<std::pair<NodeId, std::size_t>> back_edges(const ProofGraph& g) {
    std::vector<std::pair<NodeId, std::size_t>> out;
    std::map<NodeId, int> state;  // 1 on stack, 2 done
    struct Frame {
        NodeId id;
        std::size_t next;
    };
    std::vector<Frame> stack{{g.root, 0}};
    state[g.root] = 1;
    while (!stack.empty()) {
        Frame& f = stack.back();
        const Node& n = g.at(f.id);
        if (f.next == n.premises.size()) {
            state[f.id] = 2;
            stack.pop_back();
            continue;
        }
        std::size_t i = f.next++;
        NodeId p = n.premises[i];
        int s = state[p];
        if (s == 1) {
            out.emplace_back(f.id, i);
        } else if (s == 0) {
            state[p] = 1;
            stack.push_back({p, 0});
        }
    }
    return out;
}

std::string export_dot(const ProofGraph& g) {
    std::ostringstream out;
    out << "digraph \"" << g.name << "\" {\n  rankdir=BT;\n  node [shape=box, fontname=\"monospace\"];\n";
    for (const auto& [id, n] : g.nodes) {
        std::string label = rule_name(n.rule);
        if (n.rule == Rule::ExchN || n.rule == Rule::ExchBox) label += "(" + std::to_string(n.pos) + ")";
        if (n.rule == Rule::Oracle) label += " " + n.oracle;
        if (n.rule == Rule::Dis) {
            label += "(";
            for (std::size_t i = 0; i < n.dis.size(); ++i) label += (i ? "," : "") + std::to_string(n.dis[i]);
            label += ")";
        }
        label += " : " + to_string(n.seq);
        out << "  n" << id << " [label=\"" << id << ": " << label << "\"";
        if (n.rule == Rule::Dis) out << ", style=filled, fillcolor=lightgrey";
        if (id == g.root) out << ", peripheries=2";
        out << "];\n";
    }
    auto back = back_edges(g);
    std::set<std::pair<NodeId, std::size_t>> bset(back.begin(), back.end());
    for (const auto& [id, n] : g.nodes) {
        for (std::size_t i = 0; i < n.premises.size(); ++i) {
            out << "  n" << n.premises[i] << " -> n" << id << " [label=\"" << i << "\"";
            if (bset.count({id, i})) out << ", style=dashed, color=red, constraint=false";
            out << "];\n";
        }
    }
    out << "}\n";
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << data;
}

}  // namespace cyclic
