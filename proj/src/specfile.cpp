#include "vrhr/specfile.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "vrhr/translate.hpp"

namespace vrhr {

std::string SpecError::format(const std::string& filename) const {
    std::ostringstream os;
    if (!filename.empty())
        os << filename << ":";
    os << line << ":" << col << ": " << message;
    return os.str();
}

TypeTable SpecFile::type_table() const {
    TypeTable t;
    t.types = processes;
    for (const auto& p : processes)
        t.alphabet.process_types.insert(p.name);
    for (const auto& [port, type] : ports)
        t.alphabet.port_type[port] = type;
    return t;
}

const GrammarDecl* SpecFile::find_grammar(const std::string& name) const {
    for (const auto& g : grammars)
        if (g.name == name)
            return &g;
    return nullptr;
}

const LabelingDecl* SpecFile::find_labeling(const std::string& name) const {
    for (const auto& l : labelings)
        if (l.name == name)
            return &l;
    return nullptr;
}

const FormulaDecl* SpecFile::find_formula(const std::string& name) const {
    for (const auto& f : formulas)
        if (f.name == name)
            return &f;
    return nullptr;
}

const AnalysisDecl* SpecFile::find_analysis(const std::string& name) const {
    for (const auto& a : analyses)
        if (a.name == name)
            return &a;
    return nullptr;
}

namespace {

struct Token {
    enum class Kind { Ident, Nat, String, Punct, End };
    Kind kind;
    std::string text;
    uint64_t nat = 0;
    int line = 1, col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) { advance(); }

    const Token& peek() const { return tok_; }

    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw SpecError{tok_.line, tok_.col, msg};
    }

private:
    void advance() {
        skip_space();
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= text_.size()) {
            tok_ = {Token::Kind::End, "", 0, line_, col_};
            return;
        }
        char c = text_[pos_];
        if (isalpha((unsigned char)c) || c == '_') {
            size_t start = pos_;
            while (pos_ < text_.size() &&
                   (isalnum((unsigned char)text_[pos_]) || text_[pos_] == '_'))
                bump();
            tok_ = {Token::Kind::Ident, text_.substr(start, pos_ - start), 0, tok_.line, tok_.col};
            return;
        }
        if (isdigit((unsigned char)c)) {
            uint64_t v = 0;
            size_t start = pos_;
            while (pos_ < text_.size() && isdigit((unsigned char)text_[pos_])) {
                v = v * 10 + (uint64_t)(text_[pos_] - '0');
                bump();
            }
            tok_ = {Token::Kind::Nat, text_.substr(start, pos_ - start), v, tok_.line, tok_.col};
            return;
        }
        if (c == '"') {
            bump();
            std::string s;
            while (pos_ < text_.size() && text_[pos_] != '"') {
                s += text_[pos_];
                bump();
            }
            if (pos_ >= text_.size())
                throw SpecError{tok_.line, tok_.col, "unterminated string"};
            bump();
            tok_ = {Token::Kind::String, s, 0, tok_.line, tok_.col};
            return;
        }
        // multi-char punctuation first
        static const char* puncts[] = {"->", "==", "!=", "<=", ">=", "&&", "||"};
        for (const char* p : puncts) {
            size_t n = strlen(p);
            if (text_.compare(pos_, n, p) == 0) {
                tok_ = {Token::Kind::Punct, p, 0, tok_.line, tok_.col};
                pos_ += n;
                col_ += (int)n;
                return;
            }
        }
        tok_ = {Token::Kind::Punct, std::string(1, c), 0, tok_.line, tok_.col};
        bump();
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                bump();
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    bump();
            } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
                bump();
                bump();
                while (pos_ + 1 < text_.size() &&
                       !(text_[pos_] == '*' && text_[pos_ + 1] == '/'))
                    bump();
                if (pos_ + 1 >= text_.size())
                    throw SpecError{line_, col_, "unterminated comment"};
                bump();
                bump();
            } else {
                break;
            }
        }
    }

    void bump() {
        if (text_[pos_] == '\n') {
            line_++;
            col_ = 1;
        } else {
            col_++;
        }
        pos_++;
    }

    const std::string& text_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

class Parser {
public:
    Parser(const std::string& text, const ImportLoader& loader, int depth)
        : lex_(text), loader_(loader), depth_(depth) {}

    SpecFile parse() {
        SpecFile spec;
        while (lex_.peek().kind != Token::Kind::End) {
            std::string kw = expect_ident("declaration");
            if (kw == "import") {
                std::string path = expect_string();
                expect_punct(";");
                if (!loader_)
                    lex_.fail("imports are not available here");
                if (depth_ > 16)
                    lex_.fail("import nesting too deep (cycle?)");
                auto text = loader_(path);
                if (!text)
                    lex_.fail("cannot import '" + path + "'");
                Parser sub(*text, loader_, depth_ + 1);
                SpecFile inner = sub.parse();
                append(spec, std::move(inner));
            } else if (kw == "process") {
                spec.processes.push_back(parse_process());
            } else if (kw == "port") {
                std::string port = expect_ident("port name");
                expect_keyword("of");
                std::string type = expect_ident("process type");
                expect_punct(";");
                spec.ports.push_back({port, type});
            } else if (kw == "vr" || kw == "hr") {
                expect_keyword("grammar");
                spec.grammars.push_back(parse_grammar(kw == "vr" ? Algebra::VR : Algebra::HR));
            } else if (kw == "labeling") {
                spec.labelings.push_back(parse_labeling());
            } else if (kw == "formula") {
                spec.formulas.push_back(parse_formula_decl());
            } else if (kw == "analysis") {
                spec.analyses.push_back(parse_analysis());
            } else {
                lex_.fail("unknown declaration '" + kw + "'");
            }
        }
        return spec;
    }

    TermPtr parse_single_term() {
        TermPtr t = parse_term();
        if (lex_.peek().kind != Token::Kind::End)
            lex_.fail("trailing input after term");
        return t;
    }

    FormulaPtr parse_single_formula() {
        FormulaPtr f = parse_formula();
        if (lex_.peek().kind != Token::Kind::End)
            lex_.fail("trailing input after formula");
        return f;
    }

private:
    static void append(SpecFile& into, SpecFile&& other) {
        for (auto& x : other.processes)
            into.processes.push_back(std::move(x));
        for (auto& x : other.ports)
            into.ports.push_back(std::move(x));
        for (auto& x : other.grammars)
            into.grammars.push_back(std::move(x));
        for (auto& x : other.labelings)
            into.labelings.push_back(std::move(x));
        for (auto& x : other.formulas)
            into.formulas.push_back(std::move(x));
        for (auto& x : other.analyses)
            into.analyses.push_back(std::move(x));
    }

    std::string expect_ident(const std::string& what) {
        if (lex_.peek().kind != Token::Kind::Ident)
            lex_.fail("expected " + what);
        return lex_.next().text;
    }

    std::string expect_string() {
        if (lex_.peek().kind != Token::Kind::String)
            lex_.fail("expected a string literal");
        return lex_.next().text;
    }

    uint64_t expect_nat() {
        if (lex_.peek().kind != Token::Kind::Nat)
            lex_.fail("expected a natural number");
        return lex_.next().nat;
    }

    void expect_keyword(const std::string& kw) {
        if (lex_.peek().kind != Token::Kind::Ident || lex_.peek().text != kw)
            lex_.fail("expected '" + kw + "'");
        lex_.next();
    }

    void expect_punct(const std::string& p) {
        if (lex_.peek().kind != Token::Kind::Punct || lex_.peek().text != p)
            lex_.fail("expected '" + p + "'");
        lex_.next();
    }

    bool accept_punct(const std::string& p) {
        if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == p) {
            lex_.next();
            return true;
        }
        return false;
    }

    bool peek_ident(const std::string& kw) const {
        return lex_.peek().kind == Token::Kind::Ident && lex_.peek().text == kw;
    }

    ProcessType parse_process() {
        std::string name = expect_ident("process type name");
        expect_punct("{");
        std::vector<std::string> places;
        std::string initial;
        std::vector<TransitionSpec> transitions;
        while (!accept_punct("}")) {
            std::string kw = expect_ident("process item");
            if (kw == "places") {
                places.push_back(expect_ident("place name"));
                while (accept_punct(","))
                    places.push_back(expect_ident("place name"));
                expect_punct(";");
            } else if (kw == "init") {
                initial = expect_ident("place name");
                expect_punct(";");
            } else if (kw == "obs" || kw == "int") {
                TransitionSpec t;
                t.observable = kw == "obs";
                t.name = expect_ident("transition name");
                expect_punct(":");
                t.from = expect_ident("place name");
                expect_punct("->");
                t.to = expect_ident("place name");
                expect_punct(";");
                transitions.push_back(std::move(t));
            } else {
                lex_.fail("unknown process item '" + kw + "'");
            }
        }
        if (initial.empty())
            lex_.fail("process '" + name + "' has no init place");
        try {
            return make_process_type(name, places, initial, transitions);
        } catch (const std::exception& e) {
            lex_.fail(e.what());
        }
    }

    GrammarDecl parse_grammar(Algebra algebra) {
        GrammarDecl decl;
        decl.grammar.algebra = algebra;
        decl.name = expect_ident("grammar name");
        expect_punct("{");
        std::set<std::string> nts;
        while (!accept_punct("}")) {
            if (peek_ident("axiom")) {
                lex_.next();
                decl.grammar.axioms.push_back(expect_ident("axiom nonterminal"));
                expect_punct(";");
                continue;
            }
            std::string lhs = expect_ident("nonterminal");
            expect_punct("->");
            TermPtr rhs = parse_term();
            expect_punct(";");
            nts.insert(lhs);
            decl.grammar.rules.push_back({lhs, rhs});
        }
        for (const auto& a : decl.grammar.axioms)
            nts.insert(a);
        // Nonterminals are exactly the rule left-hand sides plus axioms;
        // identifiers inside terms resolve to these during validation.
        decl.grammar.nonterminals.assign(nts.begin(), nts.end());
        return decl;
    }

    EdgeLabel parse_edge_label() {
        if (accept_punct("(")) {
            std::string a = expect_ident("transition name");
            expect_punct(",");
            std::string b = expect_ident("transition name");
            expect_punct(")");
            return make_pair_label(a, b);
        }
        return expect_ident("edge label");
    }

    TermPtr parse_term() {
        std::string head = expect_ident("term");
        if (head == "union" || head == "compose") {
            expect_punct("(");
            TermPtr l = parse_term();
            expect_punct(",");
            TermPtr r = parse_term();
            expect_punct(")");
            return head == "union" ? mk_union(l, r) : mk_compose(l, r);
        }
        if (head == "add_edge" || head == "edge") {
            expect_punct("[");
            EdgeLabel label = parse_edge_label();
            expect_punct(";");
            std::string p1 = expect_ident("port");
            expect_punct("->");
            std::string p2 = expect_ident("port");
            expect_punct("]");
            if (head == "edge")
                return mk_edge(label, p1, p2);
            expect_punct("(");
            TermPtr child = parse_term();
            expect_punct(")");
            return mk_add_edge(label, p1, p2, child);
        }
        if (head == "relab") {
            expect_punct("[");
            std::vector<std::pair<std::string, std::string>> map;
            if (!accept_punct("]")) {
                do {
                    std::string a = expect_ident("port");
                    expect_punct("->");
                    std::string b = expect_ident("port");
                    map.push_back({a, b});
                } while (accept_punct(","));
                expect_punct("]");
            }
            expect_punct("(");
            TermPtr child = parse_term();
            expect_punct(")");
            return mk_relab(std::move(map), child);
        }
        if (head == "vertex") {
            expect_punct("[");
            std::string p = expect_ident("port");
            expect_punct("]");
            return mk_vertex(p);
        }
        return mk_nonterminal(head);
    }

    LabelingDecl parse_labeling() {
        LabelingDecl decl;
        decl.name = expect_ident("labeling name");
        expect_punct("{");
        while (!accept_punct("}")) {
            std::string place = expect_ident("place name");
            expect_punct("->");
            std::string var = expect_ident("variable");
            expect_punct(";");
            if (!decl.map.insert({place, var}).second)
                lex_.fail("place '" + place + "' labeled twice");
        }
        return decl;
    }

    FormulaDecl parse_formula_decl() {
        FormulaDecl decl;
        decl.name = expect_ident("formula name");
        expect_punct("=");
        decl.formula = parse_formula();
        expect_punct(";");
        return decl;
    }

    FormulaPtr parse_formula() {
        FormulaPtr f = parse_or();
        check_boolean(f);
        return f;
    }

    void reject_quantifier() {
        if (peek_ident("forall") || peek_ident("exists"))
            lex_.fail("quantified formulas unsupported: the evaluator is restricted to "
                      "quantifier-free arithmetic");
    }

    FormulaPtr parse_or() {
        FormulaPtr f = parse_and();
        while (accept_punct("||") || (peek_ident("or") && (lex_.next(), true)))
            f = f_or(f, parse_and());
        return f;
    }

    FormulaPtr parse_and() {
        FormulaPtr f = parse_not();
        while (accept_punct("&&") || (peek_ident("and") && (lex_.next(), true)))
            f = f_and(f, parse_not());
        return f;
    }

    FormulaPtr parse_not() {
        reject_quantifier();
        if (accept_punct("!") || (peek_ident("not") && (lex_.next(), true)))
            return f_not(parse_not());
        return parse_cmp();
    }

    FormulaPtr parse_cmp() {
        FormulaPtr l = parse_sum();
        static const std::pair<const char*, Formula::CmpOp> ops[] = {
            {"==", Formula::CmpOp::Eq}, {"=", Formula::CmpOp::Eq},  {"!=", Formula::CmpOp::Ne},
            {"<=", Formula::CmpOp::Le}, {"<", Formula::CmpOp::Lt},  {">=", Formula::CmpOp::Ge},
            {">", Formula::CmpOp::Gt},
        };
        for (const auto& [p, op] : ops)
            if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == p) {
                lex_.next();
                return f_cmp(op, l, parse_sum());
            }
        return l;
    }

    FormulaPtr parse_sum() {
        FormulaPtr f = parse_prod();
        while (accept_punct("+"))
            f = f_add(f, parse_prod());
        return f;
    }

    FormulaPtr parse_prod() {
        FormulaPtr f = parse_atom();
        while (accept_punct("*"))
            f = f_mul(f, parse_atom());
        return f;
    }

    FormulaPtr parse_atom() {
        reject_quantifier();
        if (lex_.peek().kind == Token::Kind::Nat)
            return f_const(lex_.next().nat);
        if (lex_.peek().kind == Token::Kind::Ident)
            return f_var(lex_.next().text);
        if (accept_punct("(")) {
            FormulaPtr f = parse_or();
            expect_punct(")");
            return f;
        }
        if (lex_.peek().kind == Token::Kind::Punct && lex_.peek().text == "!") {
            lex_.next();
            return f_not(parse_not());
        }
        lex_.fail("expected a formula atom");
    }

    void check_boolean(const FormulaPtr& f) {
        switch (f->kind) {
        case Formula::Kind::And:
        case Formula::Kind::Or:
            check_boolean(f->a);
            check_boolean(f->b);
            return;
        case Formula::Kind::Not:
            check_boolean(f->a);
            return;
        case Formula::Kind::Cmp:
            check_arith(f->a);
            check_arith(f->b);
            return;
        default:
            lex_.fail("formula must be a boolean combination of comparisons");
        }
    }

    void check_arith(const FormulaPtr& f) {
        switch (f->kind) {
        case Formula::Kind::Const:
        case Formula::Kind::Var:
            return;
        case Formula::Kind::Add:
        case Formula::Kind::Mul:
            check_arith(f->a);
            check_arith(f->b);
            return;
        default:
            lex_.fail("comparison operand must be arithmetic");
        }
    }

    AnalysisDecl parse_analysis() {
        AnalysisDecl decl;
        decl.name = expect_ident("analysis name");
        expect_punct("{");
        while (!accept_punct("}")) {
            std::string kw = expect_ident("analysis item");
            if (kw == "grammar") {
                decl.grammar = expect_ident("grammar name");
            } else if (kw == "labeling") {
                decl.labeling = expect_ident("labeling name");
            } else if (kw == "formula") {
                decl.formula = expect_ident("formula name");
            } else if (kw == "max_steps") {
                decl.bounds.max_steps = (int)expect_nat();
                decl.has_max_steps = true;
            } else if (kw == "max_vertices") {
                decl.bounds.max_vertices = (int)expect_nat();
                decl.has_max_vertices = true;
            } else if (kw == "max_states") {
                decl.bounds.max_states = (size_t)expect_nat();
                decl.has_max_states = true;
            } else {
                lex_.fail("unknown analysis item '" + kw + "'");
            }
            expect_punct(";");
        }
        return decl;
    }

    Lexer lex_;
    const ImportLoader& loader_;
    int depth_;
};

} // namespace

SpecFile parse_spec(const std::string& text, const ImportLoader& loader) {
    Parser p(text, loader, 0);
    return p.parse();
}

SpecFile parse_spec_file(const std::string& path) {
    std::string dir;
    auto slash = path.find_last_of('/');
    if (slash != std::string::npos)
        dir = path.substr(0, slash + 1);
    ImportLoader loader = [dir](const std::string& rel) -> std::optional<std::string> {
        std::ifstream in(dir + rel);
        if (!in)
            return std::nullopt;
        std::ostringstream os;
        os << in.rdbuf();
        return os.str();
    };
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_spec(os.str(), loader);
}

ValidationReport validate_spec(const SpecFile& spec) {
    ValidationReport rep;
    TypeTable table = spec.type_table();
    ValidationReport trep = table.validate();
    for (auto& v : trep.items)
        rep.add(v.message);

    std::set<std::string> names;
    for (const auto& g : spec.grammars) {
        if (!names.insert("g:" + g.name).second)
            rep.add("duplicate grammar '" + g.name + "'");
        ValidationReport grep = g.grammar.validate(table.alphabet);
        for (auto& v : grep.items)
            rep.add("grammar '" + g.name + "': " + v.message);
    }
    auto places = table.place_home();
    for (const auto& l : spec.labelings) {
        if (!names.insert("l:" + l.name).second)
            rep.add("duplicate labeling '" + l.name + "'");
        for (const auto& [q, x] : l.map)
            if (!places.count(q))
                rep.add("labeling '" + l.name + "' labels unknown place '" + q + "'");
    }
    for (const auto& f : spec.formulas)
        if (!names.insert("f:" + f.name).second)
            rep.add("duplicate formula '" + f.name + "'");
    for (const auto& a : spec.analyses) {
        if (!names.insert("a:" + a.name).second)
            rep.add("duplicate analysis '" + a.name + "'");
        if (!a.grammar.empty() && !spec.find_grammar(a.grammar))
            rep.add("analysis '" + a.name + "' references unknown grammar '" + a.grammar + "'");
        if (!a.labeling.empty() && !spec.find_labeling(a.labeling))
            rep.add("analysis '" + a.name + "' references unknown labeling '" + a.labeling + "'");
        if (!a.formula.empty() && !spec.find_formula(a.formula))
            rep.add("analysis '" + a.name + "' references unknown formula '" + a.formula + "'");
    }
    return rep;
}

namespace {

void print_process(std::ostream& os, const ProcessType& p) {
    os << "process " << p.name << " {\n  places ";
    for (size_t q = 0; q < p.net.places.size(); ++q) {
        if (q)
            os << ", ";
        os << p.net.places[q];
    }
    os << ";\n  init " << p.net.places[p.initial_place()] << ";\n";
    for (size_t t = 0; t < p.net.transitions.size(); ++t) {
        os << "  " << (p.is_observable((int)t) ? "obs" : "int") << " " << p.net.transitions[t]
           << ": " << p.net.places[p.pre_place((int)t)] << " -> "
           << p.net.places[p.post_place((int)t)] << ";\n";
    }
    os << "}\n";
}

} // namespace

std::string print_spec(const SpecFile& spec) {
    std::ostringstream os;
    for (const auto& p : spec.processes) {
        print_process(os, p);
        os << "\n";
    }
    for (const auto& [port, type] : spec.ports)
        os << "port " << port << " of " << type << ";\n";
    if (!spec.ports.empty())
        os << "\n";
    for (const auto& g : spec.grammars) {
        os << (g.grammar.algebra == Algebra::VR ? "vr" : "hr") << " grammar " << g.name << " {\n";
        for (const auto& a : g.grammar.axioms)
            os << "  axiom " << a << ";\n";
        for (const auto& r : g.grammar.rules)
            os << "  " << r.lhs << " -> " << print_term(r.rhs) << ";\n";
        os << "}\n\n";
    }
    for (const auto& l : spec.labelings) {
        os << "labeling " << l.name << " {\n";
        for (const auto& [q, x] : l.map)
            os << "  " << q << " -> " << x << ";\n";
        os << "}\n\n";
    }
    for (const auto& f : spec.formulas)
        os << "formula " << f.name << " = " << print_formula(f.formula) << ";\n";
    if (!spec.formulas.empty())
        os << "\n";
    for (const auto& a : spec.analyses) {
        os << "analysis " << a.name << " {\n";
        if (!a.grammar.empty())
            os << "  grammar " << a.grammar << ";\n";
        if (!a.labeling.empty())
            os << "  labeling " << a.labeling << ";\n";
        if (!a.formula.empty())
            os << "  formula " << a.formula << ";\n";
        if (a.has_max_steps)
            os << "  max_steps " << a.bounds.max_steps << ";\n";
        if (a.has_max_vertices)
            os << "  max_vertices " << a.bounds.max_vertices << ";\n";
        if (a.has_max_states)
            os << "  max_states " << a.bounds.max_states << ";\n";
        os << "}\n\n";
    }
    return os.str();
}

TermPtr parse_term_text(const std::string& text, const SpecFile& spec, Algebra algebra) {
    Parser p(text, {}, 0);
    TermPtr t = p.parse_single_term();
    TypeTable table = spec.type_table();
    ValidationReport rep = validate_term(t, table.alphabet, algebra, false);
    if (!rep.ok())
        throw std::runtime_error("invalid term:\n" + rep.to_string());
    return t;
}

SpecFile translate_spec(const SpecFile& spec) {
    TypeTable base = spec.type_table();
    ValidationReport rep = validate_spec(spec);
    if (!rep.ok())
        throw std::runtime_error("spec is invalid:\n" + rep.to_string());

    ExpandedAlphabet exp = expand_type_table(base);
    SpecFile out;
    out.processes = exp.table.types;
    for (const auto& [port, type] : exp.table.alphabet.port_type)
        out.ports.push_back({port, type});

    size_t max_obs = 1;
    for (const auto& p : base.types)
        max_obs = std::max(max_obs, p.observable.size());

    for (const auto& g : spec.grammars) {
        if (g.grammar.algebra != Algebra::VR)
            continue; // HR grammars pass through untranslated
        TranslatedGrammar tg = translate_grammar(g.grammar, base);
        out.grammars.push_back({g.name, tg.grammar});
    }
    for (const auto& l : spec.labelings)
        out.labelings.push_back({l.name, lift_variable_labeling(l.map, base)});
    out.formulas = spec.formulas;
    for (auto a : spec.analyses) {
        // Routed systems carry one router per (vertex, transition) plus fresh
        // routers per merge; widen the vertex bound for that overhead.
        a.bounds.max_vertices = a.bounds.max_vertices * (int)(2 + max_obs) +
                                4 * a.bounds.max_steps;
        out.analyses.push_back(a);
    }
    return out;
}

} // namespace vrhr
