#include "pexa/parser.hpp"

#include <cctype>
#include <map>
#include <set>

#include "pexa/state_space.hpp"

namespace pexa {

namespace {

enum class Tok {
    End,
    Ident,
    Int,
    Decimal,
    KwVar,
    KwWrap,
    KwSkip,
    KwAbort,
    KwIf,
    KwThen,
    KwElse,
    KwFi,
    KwDo,
    KwOd,
    KwTrue,
    KwFalse,
    KwMax,
    KwMin,
    Semi,
    Colon,
    DotDot,
    Assign, // :=
    Arrow,  // ->
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Not,
    And,
    Or,
    Question,
};

struct Token {
    Tok kind;
    std::string text;
    SourceLoc loc;
};

const std::map<std::string, Tok> kKeywords = {
    {"var", Tok::KwVar},   {"wrap", Tok::KwWrap}, {"skip", Tok::KwSkip}, {"abort", Tok::KwAbort},
    {"if", Tok::KwIf},     {"then", Tok::KwThen}, {"else", Tok::KwElse}, {"fi", Tok::KwFi},
    {"do", Tok::KwDo},     {"od", Tok::KwOd},     {"true", Tok::KwTrue}, {"false", Tok::KwFalse},
    {"max", Tok::KwMax},   {"min", Tok::KwMin},
};

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    size_t i = 0;
    auto loc = [&]() { return SourceLoc{line, col}; };
    auto advance = [&](size_t n) {
        for (size_t k = 0; k < n; ++k) {
            if (text[i + k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        i += n;
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '#') { // comment to end of line
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        SourceLoc l = loc();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            std::string word = text.substr(i, j - i);
            auto kw = kKeywords.find(word);
            out.push_back({kw == kKeywords.end() ? Tok::Ident : kw->second, word, l});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            // A single '.' followed by a digit continues a decimal literal;
            // ".." belongs to a range.
            if (j + 1 < text.size() && text[j] == '.' && std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
                ++j;
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
                out.push_back({Tok::Decimal, text.substr(i, j - i), l});
            } else {
                out.push_back({Tok::Int, text.substr(i, j - i), l});
            }
            advance(j - i);
            continue;
        }
        auto two = [&](char a, char b) {
            return c == a && i + 1 < text.size() && text[i + 1] == b;
        };
        if (two(':', '=')) {
            out.push_back({Tok::Assign, ":=", l});
            advance(2);
        } else if (two('.', '.')) {
            out.push_back({Tok::DotDot, "..", l});
            advance(2);
        } else if (two('-', '>')) {
            out.push_back({Tok::Arrow, "->", l});
            advance(2);
        } else if (two('<', '=')) {
            out.push_back({Tok::Le, "<=", l});
            advance(2);
        } else if (two('>', '=')) {
            out.push_back({Tok::Ge, ">=", l});
            advance(2);
        } else if (two('!', '=')) {
            out.push_back({Tok::Ne, "!=", l});
            advance(2);
        } else if (two('&', '&')) {
            out.push_back({Tok::And, "&&", l});
            advance(2);
        } else if (two('|', '|')) {
            out.push_back({Tok::Or, "||", l});
            advance(2);
        } else {
            Tok k;
            switch (c) {
                case ';': k = Tok::Semi; break;
                case ':': k = Tok::Colon; break;
                case '[': k = Tok::LBracket; break;
                case ']': k = Tok::RBracket; break;
                case '(': k = Tok::LParen; break;
                case ')': k = Tok::RParen; break;
                case ',': k = Tok::Comma; break;
                case '+': k = Tok::Plus; break;
                case '-': k = Tok::Minus; break;
                case '*': k = Tok::Star; break;
                case '/': k = Tok::Slash; break;
                case '=': k = Tok::Eq; break;
                case '<': k = Tok::Lt; break;
                case '>': k = Tok::Gt; break;
                case '!': k = Tok::Not; break;
                case '&': k = Tok::And; break;
                case '|': k = Tok::Or; break;
                case '?': k = Tok::Question; break;
                default:
                    throw ParseError(l, std::string("unexpected character '") + c + "'");
            }
            out.push_back({k, std::string(1, c), l});
            advance(1);
        }
    }
    out.push_back({Tok::End, "", {line, col}});
    return out;
}

class Parser {
public:
    explicit Parser(const std::string& text) : tokens_(lex(text)) {}

    const Token& peek(size_t ahead = 0) const {
        size_t idx = pos_ + ahead;
        return idx < tokens_.size() ? tokens_[idx] : tokens_.back();
    }
    Token next() {
        Token t = peek();
        if (t.kind != Tok::End) ++pos_;
        return t;
    }
    bool accept(Tok k) {
        if (peek().kind == k) {
            ++pos_;
            return true;
        }
        return false;
    }
    Token expect(Tok k, const std::string& what) {
        if (peek().kind != k)
            throw ParseError(peek().loc, "expected " + what + ", found '" + describe(peek()) + "'");
        return next();
    }
    bool at_end() const { return peek().kind == Tok::End; }
    size_t checkpoint() const { return pos_; }
    void rewind(size_t cp) { pos_ = cp; }

    static std::string describe(const Token& t) {
        return t.kind == Tok::End ? "end of input" : t.text;
    }

    // ---- numbers ----

    long parse_int_value() {
        bool neg = accept(Tok::Minus);
        Token t = expect(Tok::Int, "integer");
        long v = std::stol(t.text);
        return neg ? -v : v;
    }

    Rat parse_rational() {
        SourceLoc l = peek().loc;
        bool neg = accept(Tok::Minus);
        Rat q;
        if (peek().kind == Tok::Decimal) {
            q = rat_from_string(next().text);
        } else {
            Token num = expect(Tok::Int, "number");
            if (accept(Tok::Slash)) {
                Token den = expect(Tok::Int, "denominator");
                if (den.text == "0") throw ParseError(den.loc, "zero denominator");
                q = Rat(mpz_class(num.text), mpz_class(den.text));
                q.canonicalize();
            } else {
                q = Rat(mpz_class(num.text));
            }
        }
        if (neg) q = -q;
        (void)l;
        return q;
    }

    // ---- arithmetic expressions ----

    AExprPtr parse_aexpr() {
        AExprPtr e = parse_aterm();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            SourceLoc l = peek().loc;
            AExpr::Kind k = next().kind == Tok::Plus ? AExpr::Kind::Add : AExpr::Kind::Sub;
            e = abin(k, e, parse_aterm(), l);
        }
        return e;
    }

    AExprPtr parse_aterm() {
        AExprPtr e = parse_afactor();
        while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
            SourceLoc l = peek().loc;
            AExpr::Kind k = next().kind == Tok::Star ? AExpr::Kind::Mul : AExpr::Kind::Div;
            e = abin(k, e, parse_afactor(), l);
        }
        return e;
    }

    AExprPtr parse_afactor() {
        SourceLoc l = peek().loc;
        if (accept(Tok::Minus)) {
            // Unary minus folds constants; general negation is 0 - e.
            AExprPtr inner = parse_afactor();
            if (inner->kind == AExpr::Kind::Const) return aconst(-inner->value, l);
            return abin(AExpr::Kind::Sub, aconst(0, l), inner, l);
        }
        if (peek().kind == Tok::Int) return aconst(std::stol(next().text), l);
        if (peek().kind == Tok::Ident) return avar(next().text, l);
        if (accept(Tok::LParen)) {
            AExprPtr e = parse_aexpr();
            expect(Tok::RParen, "')'");
            return e;
        }
        throw ParseError(l, "expected arithmetic expression, found '" + describe(peek()) + "'");
    }

    // ---- boolean predicates ----

    BExprPtr parse_bexpr() {
        BExprPtr e = parse_bterm();
        while (peek().kind == Tok::Or) {
            SourceLoc l = next().loc;
            e = bor(e, parse_bterm(), l);
        }
        return e;
    }

    BExprPtr parse_bterm() {
        BExprPtr e = parse_bfactor();
        while (peek().kind == Tok::And) {
            SourceLoc l = next().loc;
            e = band(e, parse_bfactor(), l);
        }
        return e;
    }

    BExprPtr parse_bfactor() {
        SourceLoc l = peek().loc;
        if (accept(Tok::Not)) return bnot(parse_bfactor(), l);
        if (accept(Tok::KwTrue)) return bconst(true, l);
        if (accept(Tok::KwFalse)) return bconst(false, l);
        // Try a comparison first; fall back to a parenthesized predicate.
        size_t cp = checkpoint();
        try {
            AExprPtr lhs = parse_aexpr();
            CmpOp op = parse_cmp_op();
            AExprPtr rhs = parse_aexpr();
            return bcmp(op, lhs, rhs, l);
        } catch (const ParseError&) {
            rewind(cp);
        }
        if (accept(Tok::LParen)) {
            BExprPtr e = parse_bexpr();
            expect(Tok::RParen, "')'");
            return e;
        }
        throw ParseError(l, "expected predicate, found '" + describe(peek()) + "'");
    }

    CmpOp parse_cmp_op() {
        switch (peek().kind) {
            case Tok::Eq: next(); return CmpOp::Eq;
            case Tok::Ne: next(); return CmpOp::Ne;
            case Tok::Lt: next(); return CmpOp::Lt;
            case Tok::Le: next(); return CmpOp::Le;
            case Tok::Gt: next(); return CmpOp::Gt;
            case Tok::Ge: next(); return CmpOp::Ge;
            default:
                throw ParseError(peek().loc,
                                 "expected comparison operator, found '" + describe(peek()) + "'");
        }
    }

    // ---- expectation expressions ----

    EExprPtr parse_eexpr() {
        EExprPtr e = parse_eterm();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            SourceLoc l = peek().loc;
            EExpr::Kind k = next().kind == Tok::Plus ? EExpr::Kind::Add : EExpr::Kind::Monus;
            e = ebin(k, e, parse_eterm(), l);
        }
        return e;
    }

    EExprPtr parse_eterm() {
        EExprPtr e = parse_efactor();
        while (peek().kind == Tok::Star) {
            SourceLoc l = next().loc;
            EExprPtr rhs = parse_efactor();
            if (e->kind == EExpr::Kind::Const && rhs->kind == EExpr::Kind::Const) {
                e = econst(e->coeff * rhs->coeff, l);
            } else if (e->kind == EExpr::Kind::Const) {
                e = escale(e->coeff, rhs, l);
            } else if (rhs->kind == EExpr::Kind::Const) {
                e = escale(rhs->coeff, e, l);
            } else {
                throw ParseError(l, "scaling requires a rational constant operand");
            }
        }
        return e;
    }

    EExprPtr parse_efactor() {
        SourceLoc l = peek().loc;
        if (peek().kind == Tok::Int || peek().kind == Tok::Decimal) {
            return econst(parse_rational(), l);
        }
        if (accept(Tok::LBracket)) {
            BExprPtr pred = parse_bexpr();
            expect(Tok::RBracket, "']'");
            return eindicator(pred, l);
        }
        if (peek().kind == Tok::KwMax || peek().kind == Tok::KwMin) {
            EExpr::Kind k = next().kind == Tok::KwMax ? EExpr::Kind::Max : EExpr::Kind::Min;
            expect(Tok::LParen, "'('");
            EExprPtr a = parse_eexpr();
            expect(Tok::Comma, "','");
            EExprPtr b = parse_eexpr();
            expect(Tok::RParen, "')'");
            return ebin(k, a, b, l);
        }
        if (accept(Tok::LParen)) {
            EExprPtr e = parse_eexpr();
            expect(Tok::RParen, "')'");
            return e;
        }
        throw ParseError(l, "expected expectation expression, found '" + describe(peek()) + "'");
    }

    // ---- statements ----

    ProgramPtr parse_stmt() {
        ProgramPtr e = parse_choice();
        if (peek().kind == Tok::Semi) {
            SourceLoc l = next().loc;
            return prog_seq(e, parse_stmt(), l);
        }
        return e;
    }

    ProgramPtr parse_choice() {
        ProgramPtr e = parse_atom();
        if (peek().kind == Tok::LBracket) {
            SourceLoc l = next().loc;
            if (accept(Tok::RBracket)) return prog_demonic(e, parse_choice(), l);
            Rat p = parse_rational();
            expect(Tok::RBracket, "']'");
            return prog_prob(p, e, parse_choice(), l);
        }
        return e;
    }

    ProgramPtr parse_atom() {
        SourceLoc l = peek().loc;
        switch (peek().kind) {
            case Tok::KwSkip: next(); return prog_skip(l);
            case Tok::KwAbort: next(); return prog_abort(l);
            case Tok::KwIf: {
                next();
                BExprPtr g = parse_bexpr();
                expect(Tok::KwThen, "'then'");
                ProgramPtr t = parse_stmt();
                expect(Tok::KwElse, "'else'");
                ProgramPtr f = parse_stmt();
                expect(Tok::KwFi, "'fi'");
                return prog_if(g, t, f, l);
            }
            case Tok::KwDo: {
                next();
                BExprPtr g = parse_bexpr();
                expect(Tok::Arrow, "'->'");
                ProgramPtr body = parse_stmt();
                expect(Tok::KwOd, "'od'");
                return prog_loop(g, body, l);
            }
            case Tok::LParen: {
                next();
                ProgramPtr p = parse_stmt();
                expect(Tok::RParen, "')'");
                return p;
            }
            case Tok::Ident: {
                Token name = next();
                expect(Tok::Assign, "':='");
                return prog_assign(name.text, parse_aexpr(), l);
            }
            default:
                throw ParseError(l, "expected statement, found '" + describe(peek()) + "'");
        }
    }

    // ---- declarations / model ----

    Model parse_model() {
        Model m;
        std::set<std::string> names;
        while (peek().kind == Tok::KwVar) {
            SourceLoc l = next().loc;
            Token name = expect(Tok::Ident, "variable name");
            expect(Tok::Colon, "':'");
            long lo = parse_int_value();
            expect(Tok::DotDot, "'..'");
            long hi = parse_int_value();
            bool wrap = accept(Tok::KwWrap);
            expect(Tok::Semi, "';'");
            if (!names.insert(name.text).second)
                throw ParseError(name.loc, "duplicate declaration of '" + name.text + "'");
            m.decls.push_back(VarDecl{name.text, lo, hi, wrap, l});
        }
        m.program = parse_stmt();
        if (!at_end())
            throw ParseError(peek().loc, "unexpected trailing input '" + describe(peek()) + "'");
        return m;
    }

    // ---- queries ----

    Query parse_query() {
        Query q;
        Token head = expect(Tok::Ident, "Pmin, Pmax, Rmin or Rmax");
        expect(Tok::Eq, "'='");
        expect(Tok::Question, "'?'");
        expect(Tok::LBracket, "'['");
        if (head.text == "Pmin" || head.text == "Pmax") {
            q.kind = Query::Kind::BoundedUntil;
            q.mode = head.text == "Pmin" ? Query::Mode::Min : Query::Mode::Max;
            expect(Tok::KwTrue, "'true'");
            Token u = expect(Tok::Ident, "'U'");
            if (u.text != "U") throw ParseError(u.loc, "expected 'U'");
            expect(Tok::Le, "'<='");
            long horizon = parse_int_value();
            if (horizon < 0) throw ParseError(u.loc, "negative horizon");
            q.horizon = horizon;
            q.target = parse_bexpr();
        } else if (head.text == "Rmin" || head.text == "Rmax") {
            q.kind = Query::Kind::ExpectedReward;
            q.mode = head.text == "Rmin" ? Query::Mode::Min : Query::Mode::Max;
            Token f = expect(Tok::Ident, "'F'");
            if (f.text != "F") throw ParseError(f.loc, "expected 'F'");
            q.target = parse_bexpr();
        } else {
            throw ParseError(head.loc, "expected Pmin, Pmax, Rmin or Rmax");
        }
        expect(Tok::RBracket, "']'");
        if (!at_end())
            throw ParseError(peek().loc, "unexpected trailing input '" + describe(peek()) + "'");
        return q;
    }

private:
    std::vector<Token> tokens_;
    size_t pos_ = 0;
};

void collect_vars_a(const AExprPtr& e, std::vector<std::pair<std::string, SourceLoc>>& out) {
    if (!e) return;
    if (e->kind == AExpr::Kind::Var) out.emplace_back(e->var, e->loc);
    collect_vars_a(e->lhs, out);
    collect_vars_a(e->rhs, out);
}

void collect_vars_b(const BExprPtr& e, std::vector<std::pair<std::string, SourceLoc>>& out) {
    if (!e) return;
    collect_vars_a(e->alhs, out);
    collect_vars_a(e->arhs, out);
    collect_vars_b(e->lhs, out);
    collect_vars_b(e->rhs, out);
}

}  // namespace

Model parse_model(const std::string& text) { return Parser(text).parse_model(); }

BExprPtr parse_predicate(const std::string& text) {
    Parser p(text);
    BExprPtr e = p.parse_bexpr();
    if (!p.at_end())
        throw ParseError(p.peek().loc, "unexpected trailing input '" + Parser::describe(p.peek()) + "'");
    return e;
}

EExprPtr parse_expectation(const std::string& text) {
    Parser p(text);
    EExprPtr e = p.parse_eexpr();
    if (!p.at_end())
        throw ParseError(p.peek().loc, "unexpected trailing input '" + Parser::describe(p.peek()) + "'");
    return e;
}

Query parse_query(const std::string& text) {
    Parser p(text);
    Query q = p.parse_query();
    q.text = text;
    return q;
}

std::vector<std::pair<std::string, BExprPtr>> parse_predicate_lines(const std::string& text) {
    std::vector<std::pair<std::string, BExprPtr>> out;
    size_t start = 0;
    int lineno = 1;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        std::string line =
            end == std::string::npos ? text.substr(start) : text.substr(start, end - start);
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        size_t b = line.find_first_not_of(" \t\r");
        size_t e = line.find_last_not_of(" \t\r");
        if (b != std::string::npos) {
            std::string trimmed = line.substr(b, e - b + 1);
            try {
                out.emplace_back(trimmed, parse_predicate(trimmed));
            } catch (const ParseError& pe) {
                throw ParseError({lineno, pe.loc.col}, pe.what());
            }
        }
        if (end == std::string::npos) break;
        start = end + 1;
        ++lineno;
    }
    return out;
}

std::vector<Diagnostic> validate_model(const Model& m) {
    std::vector<Diagnostic> diags;
    std::map<std::string, const VarDecl*> decls;
    for (const auto& d : m.decls) {
        if (decls.count(d.name))
            diags.push_back({d.loc, Severity::Error, "duplicate declaration of '" + d.name + "'"});
        else
            decls[d.name] = &d;
        if (d.lo > d.hi)
            diags.push_back({d.loc, Severity::Error,
                             "empty domain for '" + d.name + "': " + std::to_string(d.lo) + ".." +
                                 std::to_string(d.hi)});
    }

    auto check_vars = [&](const std::vector<std::pair<std::string, SourceLoc>>& vars) {
        for (const auto& [name, loc] : vars) {
            if (!decls.count(name))
                diags.push_back({loc, Severity::Error, "undeclared variable '" + name + "'"});
        }
    };

    // Collect assignments for the exhaustive in-domain check below.
    std::vector<const Program*> assigns;
    std::vector<const Program*> stack{m.program.get()};
    while (!stack.empty()) {
        const Program* p = stack.back();
        stack.pop_back();
        if (!p) continue;
        std::vector<std::pair<std::string, SourceLoc>> vars;
        switch (p->kind) {
            case Program::Kind::Assign:
                if (!decls.count(p->var))
                    diags.push_back(
                        {p->loc, Severity::Error, "assignment to undeclared variable '" + p->var + "'"});
                collect_vars_a(p->expr, vars);
                assigns.push_back(p);
                break;
            case Program::Kind::ProbChoice:
                if (p->prob < 0 || p->prob > 1)
                    diags.push_back({p->loc, Severity::Error,
                                     "probability " + rat_str(p->prob) + " outside [0,1]"});
                break;
            case Program::Kind::If:
            case Program::Kind::Loop: collect_vars_b(p->guard, vars); break;
            default: break;
        }
        check_vars(vars);
        if (p->left) stack.push_back(p->left.get());
        if (p->right) stack.push_back(p->right.get());
    }

    if (!diags.empty()) return diags;

    // Every assignment must stay in-domain in every state, unless wrapped.
    try {
        StateSpace space(m.decls);
        for (const Program* a : assigns) {
            const VarDecl& d = *decls.at(a->var);
            if (d.wrap) continue;
            for (size_t s = 0; s < space.count(); ++s) {
                long v = eval_aexpr(a->expr, space, s);
                if (v < d.lo || v > d.hi) {
                    diags.push_back({a->loc, Severity::Error,
                                     "assignment to '" + a->var + "' can leave domain (value " +
                                         std::to_string(v) + " at state " + space.valuation_str(s) +
                                         "); declare '" + a->var + "' wrap or guard the update"});
                    break;
                }
            }
        }
    } catch (const std::exception& ex) {
        diags.push_back({{0, 0}, Severity::Error, ex.what()});
    }
    return diags;
}

}  // namespace pexa
