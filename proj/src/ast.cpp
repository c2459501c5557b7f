#include "pexa/ast.hpp"

#include <sstream>

namespace pexa {

std::string diag_str(const Diagnostic& d) {
    std::ostringstream os;
    os << d.loc.line << ":" << d.loc.col << ": "
       << (d.severity == Severity::Error ? "error" : "warning") << ": " << d.message;
    return os.str();
}

ParseError::ParseError(SourceLoc l, const std::string& message)
    : std::runtime_error(std::to_string(l.line) + ":" + std::to_string(l.col) + ": " + message),
      loc(l) {}

AExprPtr aconst(long value, SourceLoc loc) {
    auto e = std::make_shared<AExpr>();
    e->kind = AExpr::Kind::Const;
    e->value = value;
    e->loc = loc;
    return e;
}

AExprPtr avar(std::string name, SourceLoc loc) {
    auto e = std::make_shared<AExpr>();
    e->kind = AExpr::Kind::Var;
    e->var = std::move(name);
    e->loc = loc;
    return e;
}

AExprPtr abin(AExpr::Kind kind, AExprPtr lhs, AExprPtr rhs, SourceLoc loc) {
    auto e = std::make_shared<AExpr>();
    e->kind = kind;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    e->loc = loc;
    return e;
}

BExprPtr bconst(bool value, SourceLoc loc) {
    auto e = std::make_shared<BExpr>();
    e->kind = BExpr::Kind::Const;
    e->bval = value;
    e->loc = loc;
    return e;
}

BExprPtr bcmp(CmpOp op, AExprPtr lhs, AExprPtr rhs, SourceLoc loc) {
    auto e = std::make_shared<BExpr>();
    e->kind = BExpr::Kind::Cmp;
    e->op = op;
    e->alhs = std::move(lhs);
    e->arhs = std::move(rhs);
    e->loc = loc;
    return e;
}

BExprPtr bnot(BExprPtr inner, SourceLoc loc) {
    auto e = std::make_shared<BExpr>();
    e->kind = BExpr::Kind::Not;
    e->lhs = std::move(inner);
    e->loc = loc;
    return e;
}

BExprPtr band(BExprPtr lhs, BExprPtr rhs, SourceLoc loc) {
    auto e = std::make_shared<BExpr>();
    e->kind = BExpr::Kind::And;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    e->loc = loc;
    return e;
}

BExprPtr bor(BExprPtr lhs, BExprPtr rhs, SourceLoc loc) {
    auto e = std::make_shared<BExpr>();
    e->kind = BExpr::Kind::Or;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    e->loc = loc;
    return e;
}

EExprPtr econst(Rat value, SourceLoc loc) {
    auto e = std::make_shared<EExpr>();
    e->kind = EExpr::Kind::Const;
    e->coeff = std::move(value);
    e->loc = loc;
    return e;
}

EExprPtr eindicator(BExprPtr pred, SourceLoc loc) {
    auto e = std::make_shared<EExpr>();
    e->kind = EExpr::Kind::Indicator;
    e->pred = std::move(pred);
    e->loc = loc;
    return e;
}

EExprPtr escale(Rat coeff, EExprPtr inner, SourceLoc loc) {
    auto e = std::make_shared<EExpr>();
    e->kind = EExpr::Kind::Scale;
    e->coeff = std::move(coeff);
    e->lhs = std::move(inner);
    e->loc = loc;
    return e;
}

EExprPtr ebin(EExpr::Kind kind, EExprPtr lhs, EExprPtr rhs, SourceLoc loc) {
    auto e = std::make_shared<EExpr>();
    e->kind = kind;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    e->loc = loc;
    return e;
}

namespace {

ProgramPtr make_program(Program::Kind kind, SourceLoc loc) {
    auto p = std::make_shared<Program>();
    p->kind = kind;
    p->loc = loc;
    return p;
}

}  // namespace

ProgramPtr prog_skip(SourceLoc loc) { return make_program(Program::Kind::Skip, loc); }
ProgramPtr prog_abort(SourceLoc loc) { return make_program(Program::Kind::Abort, loc); }

ProgramPtr prog_assign(std::string var, AExprPtr expr, SourceLoc loc) {
    auto p = make_program(Program::Kind::Assign, loc);
    auto* raw = const_cast<Program*>(p.get());
    raw->var = std::move(var);
    raw->expr = std::move(expr);
    return p;
}

ProgramPtr prog_seq(ProgramPtr left, ProgramPtr right, SourceLoc loc) {
    auto p = make_program(Program::Kind::Seq, loc);
    auto* raw = const_cast<Program*>(p.get());
    raw->left = std::move(left);
    raw->right = std::move(right);
    return p;
}

ProgramPtr prog_prob(Rat prob, ProgramPtr left, ProgramPtr right, SourceLoc loc) {
    auto p = make_program(Program::Kind::ProbChoice, loc);
    auto* raw = const_cast<Program*>(p.get());
    raw->prob = std::move(prob);
    raw->left = std::move(left);
    raw->right = std::move(right);
    return p;
}

ProgramPtr prog_demonic(ProgramPtr left, ProgramPtr right, SourceLoc loc) {
    auto p = make_program(Program::Kind::DemonicChoice, loc);
    auto* raw = const_cast<Program*>(p.get());
    raw->left = std::move(left);
    raw->right = std::move(right);
    return p;
}

ProgramPtr prog_if(BExprPtr guard, ProgramPtr then_branch, ProgramPtr else_branch, SourceLoc loc) {
    auto p = make_program(Program::Kind::If, loc);
    auto* raw = const_cast<Program*>(p.get());
    raw->guard = std::move(guard);
    raw->left = std::move(then_branch);
    raw->right = std::move(else_branch);
    return p;
}

ProgramPtr prog_loop(BExprPtr guard, ProgramPtr body, SourceLoc loc) {
    auto p = make_program(Program::Kind::Loop, loc);
    auto* raw = const_cast<Program*>(p.get());
    raw->guard = std::move(guard);
    raw->left = std::move(body);
    return p;
}

// ---------------------------------------------------------------------------
// Printing. Parenthesization is chosen so that parse(print(x)) == x.

namespace {

const char* cmp_str(CmpOp op) {
    switch (op) {
        case CmpOp::Eq: return "=";
        case CmpOp::Ne: return "!=";
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
    }
    return "?";
}

int aexpr_prec(const AExpr& e) {
    switch (e.kind) {
        case AExpr::Kind::Add:
        case AExpr::Kind::Sub: return 1;
        case AExpr::Kind::Mul:
        case AExpr::Kind::Div: return 2;
        default: return 3;
    }
}

void print_aexpr_rec(const AExprPtr& e, int parent_prec, std::ostringstream& os) {
    int prec = aexpr_prec(*e);
    bool paren = prec < parent_prec;
    if (paren) os << "(";
    switch (e->kind) {
        case AExpr::Kind::Const: os << e->value; break;
        case AExpr::Kind::Var: os << e->var; break;
        case AExpr::Kind::Add:
            print_aexpr_rec(e->lhs, prec, os);
            os << " + ";
            print_aexpr_rec(e->rhs, prec + 1, os);
            break;
        case AExpr::Kind::Sub:
            print_aexpr_rec(e->lhs, prec, os);
            os << " - ";
            print_aexpr_rec(e->rhs, prec + 1, os);
            break;
        case AExpr::Kind::Mul:
            print_aexpr_rec(e->lhs, prec, os);
            os << " * ";
            print_aexpr_rec(e->rhs, prec + 1, os);
            break;
        case AExpr::Kind::Div:
            print_aexpr_rec(e->lhs, prec, os);
            os << " / ";
            print_aexpr_rec(e->rhs, prec + 1, os);
            break;
    }
    if (paren) os << ")";
}

int bexpr_prec(const BExpr& e) {
    switch (e.kind) {
        case BExpr::Kind::Or: return 1;
        case BExpr::Kind::And: return 2;
        default: return 3;
    }
}

void print_bexpr_rec(const BExprPtr& e, int parent_prec, std::ostringstream& os) {
    int prec = bexpr_prec(*e);
    bool paren = prec < parent_prec;
    if (paren) os << "(";
    switch (e->kind) {
        case BExpr::Kind::Const: os << (e->bval ? "true" : "false"); break;
        case BExpr::Kind::Cmp:
            print_aexpr_rec(e->alhs, 0, os);
            os << " " << cmp_str(e->op) << " ";
            print_aexpr_rec(e->arhs, 0, os);
            break;
        case BExpr::Kind::Not:
            os << "!";
            if (e->lhs->kind == BExpr::Kind::Const || e->lhs->kind == BExpr::Kind::Not) {
                print_bexpr_rec(e->lhs, 3, os);
            } else {
                os << "(";
                print_bexpr_rec(e->lhs, 0, os);
                os << ")";
            }
            break;
        case BExpr::Kind::And:
            print_bexpr_rec(e->lhs, prec, os);
            os << " & ";
            print_bexpr_rec(e->rhs, prec + 1, os);
            break;
        case BExpr::Kind::Or:
            print_bexpr_rec(e->lhs, prec, os);
            os << " | ";
            print_bexpr_rec(e->rhs, prec + 1, os);
            break;
    }
    if (paren) os << ")";
}

int eexpr_prec(const EExpr& e) {
    switch (e.kind) {
        case EExpr::Kind::Add:
        case EExpr::Kind::Monus: return 1;
        case EExpr::Kind::Scale: return 2;
        default: return 3;
    }
}

void print_eexpr_rec(const EExprPtr& e, int parent_prec, std::ostringstream& os) {
    int prec = eexpr_prec(*e);
    bool paren = prec < parent_prec;
    if (paren) os << "(";
    switch (e->kind) {
        case EExpr::Kind::Const: os << rat_str(e->coeff); break;
        case EExpr::Kind::Indicator:
            os << "[";
            print_bexpr_rec(e->pred, 0, os);
            os << "]";
            break;
        case EExpr::Kind::Scale:
            os << rat_str(e->coeff) << " * ";
            print_eexpr_rec(e->lhs, prec + 1, os);
            break;
        case EExpr::Kind::Add:
            print_eexpr_rec(e->lhs, prec, os);
            os << " + ";
            print_eexpr_rec(e->rhs, prec + 1, os);
            break;
        case EExpr::Kind::Monus:
            print_eexpr_rec(e->lhs, prec, os);
            os << " - ";
            print_eexpr_rec(e->rhs, prec + 1, os);
            break;
        case EExpr::Kind::Max:
        case EExpr::Kind::Min:
            os << (e->kind == EExpr::Kind::Max ? "max(" : "min(");
            print_eexpr_rec(e->lhs, 0, os);
            os << ", ";
            print_eexpr_rec(e->rhs, 0, os);
            os << ")";
            break;
    }
    if (paren) os << ")";
}

// Statement-level precedence: Seq = 1, choices = 2, atoms = 3.
int prog_prec(const Program& p) {
    switch (p.kind) {
        case Program::Kind::Seq: return 1;
        case Program::Kind::ProbChoice:
        case Program::Kind::DemonicChoice: return 2;
        default: return 3;
    }
}

void print_program_rec(const ProgramPtr& p, int parent_prec, std::ostringstream& os) {
    int prec = prog_prec(*p);
    bool paren = prec < parent_prec;
    if (paren) os << "(";
    switch (p->kind) {
        case Program::Kind::Skip: os << "skip"; break;
        case Program::Kind::Abort: os << "abort"; break;
        case Program::Kind::Assign:
            os << p->var << " := ";
            print_aexpr_rec(p->expr, 0, os);
            break;
        case Program::Kind::Seq:
            print_program_rec(p->left, prec + 1, os);
            os << "; ";
            print_program_rec(p->right, prec, os);
            break;
        case Program::Kind::ProbChoice:
            print_program_rec(p->left, prec + 1, os);
            os << " [" << rat_str(p->prob) << "] ";
            print_program_rec(p->right, prec, os);
            break;
        case Program::Kind::DemonicChoice:
            print_program_rec(p->left, prec + 1, os);
            os << " [] ";
            print_program_rec(p->right, prec, os);
            break;
        case Program::Kind::If:
            os << "if ";
            print_bexpr_rec(p->guard, 0, os);
            os << " then ";
            print_program_rec(p->left, 0, os);
            os << " else ";
            print_program_rec(p->right, 0, os);
            os << " fi";
            break;
        case Program::Kind::Loop:
            os << "do ";
            print_bexpr_rec(p->guard, 0, os);
            os << " -> ";
            print_program_rec(p->left, 0, os);
            os << " od";
            break;
    }
    if (paren) os << ")";
}

}  // namespace

std::string print_aexpr(const AExprPtr& e) {
    std::ostringstream os;
    print_aexpr_rec(e, 0, os);
    return os.str();
}

std::string print_bexpr(const BExprPtr& e) {
    std::ostringstream os;
    print_bexpr_rec(e, 0, os);
    return os.str();
}

std::string print_eexpr(const EExprPtr& e) {
    std::ostringstream os;
    print_eexpr_rec(e, 0, os);
    return os.str();
}

std::string print_program(const ProgramPtr& p) {
    std::ostringstream os;
    print_program_rec(p, 0, os);
    return os.str();
}

std::string print_model(const Model& m) {
    std::ostringstream os;
    for (const auto& d : m.decls) {
        os << "var " << d.name << ": " << d.lo << ".." << d.hi << (d.wrap ? " wrap" : "") << ";\n";
    }
    print_program_rec(m.program, 0, os);
    os << "\n";
    return os.str();
}

std::string print_query(const Query& q) {
    std::ostringstream os;
    if (q.kind == Query::Kind::BoundedUntil) {
        os << (q.mode == Query::Mode::Min ? "Pmin" : "Pmax") << "=? [true U<=" << q.horizon << " ("
           << print_bexpr(q.target) << ")]";
    } else {
        os << (q.mode == Query::Mode::Min ? "Rmin" : "Rmax") << "=? [F (" << print_bexpr(q.target)
           << ")]";
    }
    return os.str();
}

// ---------------------------------------------------------------------------

bool equal_aexpr(const AExprPtr& a, const AExprPtr& b) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case AExpr::Kind::Const: return a->value == b->value;
        case AExpr::Kind::Var: return a->var == b->var;
        default: return equal_aexpr(a->lhs, b->lhs) && equal_aexpr(a->rhs, b->rhs);
    }
}

bool equal_bexpr(const BExprPtr& a, const BExprPtr& b) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case BExpr::Kind::Const: return a->bval == b->bval;
        case BExpr::Kind::Cmp:
            return a->op == b->op && equal_aexpr(a->alhs, b->alhs) && equal_aexpr(a->arhs, b->arhs);
        case BExpr::Kind::Not: return equal_bexpr(a->lhs, b->lhs);
        default: return equal_bexpr(a->lhs, b->lhs) && equal_bexpr(a->rhs, b->rhs);
    }
}

bool equal_program(const ProgramPtr& a, const ProgramPtr& b) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Program::Kind::Skip:
        case Program::Kind::Abort: return true;
        case Program::Kind::Assign: return a->var == b->var && equal_aexpr(a->expr, b->expr);
        case Program::Kind::Seq:
        case Program::Kind::DemonicChoice:
            return equal_program(a->left, b->left) && equal_program(a->right, b->right);
        case Program::Kind::ProbChoice:
            return a->prob == b->prob && equal_program(a->left, b->left) &&
                   equal_program(a->right, b->right);
        case Program::Kind::If:
            return equal_bexpr(a->guard, b->guard) && equal_program(a->left, b->left) &&
                   equal_program(a->right, b->right);
        case Program::Kind::Loop:
            return equal_bexpr(a->guard, b->guard) && equal_program(a->left, b->left);
    }
    return false;
}

bool equal_model(const Model& a, const Model& b) {
    if (a.decls.size() != b.decls.size()) return false;
    for (size_t i = 0; i < a.decls.size(); ++i) {
        const auto& da = a.decls[i];
        const auto& db = b.decls[i];
        if (da.name != db.name || da.lo != db.lo || da.hi != db.hi || da.wrap != db.wrap)
            return false;
    }
    return equal_program(a.program, b.program);
}

bool has_demonic_choice(const ProgramPtr& p) {
    if (!p) return false;
    if (p->kind == Program::Kind::DemonicChoice) return true;
    return has_demonic_choice(p->left) || has_demonic_choice(p->right);
}

bool has_loop(const ProgramPtr& p) {
    if (!p) return false;
    if (p->kind == Program::Kind::Loop) return true;
    return has_loop(p->left) || has_loop(p->right);
}

bool has_abort(const ProgramPtr& p) {
    if (!p) return false;
    if (p->kind == Program::Kind::Abort) return true;
    return has_abort(p->left) || has_abort(p->right);
}

std::vector<ProgramPtr> demonic_components(const ProgramPtr& p) {
    std::vector<ProgramPtr> out;
    if (!p) return out;
    if (p->kind == Program::Kind::DemonicChoice) {
        auto l = demonic_components(p->left);
        auto r = demonic_components(p->right);
        out.insert(out.end(), l.begin(), l.end());
        out.insert(out.end(), r.begin(), r.end());
    } else {
        out.push_back(p);
    }
    return out;
}

}  // namespace pexa
