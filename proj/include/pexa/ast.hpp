#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "pexa/rational.hpp"

namespace pexa {

struct SourceLoc {
    int line = 0;
    int col = 0;
};

enum class Severity { Error, Warning };

struct Diagnostic {
    SourceLoc loc;
    Severity severity = Severity::Error;
    std::string message;
};

std::string diag_str(const Diagnostic& d);

class ParseError : public std::runtime_error {
public:
    ParseError(SourceLoc loc, const std::string& message);
    SourceLoc loc;
};

// ---------------------------------------------------------------------------
// Integer-valued arithmetic expressions. Division truncates toward zero.

struct AExpr;
using AExprPtr = std::shared_ptr<const AExpr>;

struct AExpr {
    enum class Kind { Const, Var, Add, Sub, Mul, Div };
    Kind kind;
    long value = 0;    // Const
    std::string var;   // Var
    AExprPtr lhs, rhs; // binary ops
    SourceLoc loc;
};

AExprPtr aconst(long value, SourceLoc loc = {});
AExprPtr avar(std::string name, SourceLoc loc = {});
AExprPtr abin(AExpr::Kind kind, AExprPtr lhs, AExprPtr rhs, SourceLoc loc = {});

// ---------------------------------------------------------------------------
// Boolean predicates over program variables.

struct BExpr;
using BExprPtr = std::shared_ptr<const BExpr>;

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

struct BExpr {
    enum class Kind { Const, Cmp, Not, And, Or };
    Kind kind;
    bool bval = false; // Const
    CmpOp op = CmpOp::Eq;
    AExprPtr alhs, arhs; // Cmp
    BExprPtr lhs, rhs;   // Not (lhs), And, Or
    SourceLoc loc;
};

BExprPtr bconst(bool value, SourceLoc loc = {});
BExprPtr bcmp(CmpOp op, AExprPtr lhs, AExprPtr rhs, SourceLoc loc = {});
BExprPtr bnot(BExprPtr inner, SourceLoc loc = {});
BExprPtr band(BExprPtr lhs, BExprPtr rhs, SourceLoc loc = {});
BExprPtr bor(BExprPtr lhs, BExprPtr rhs, SourceLoc loc = {});

// ---------------------------------------------------------------------------
// Expectation expressions: non-negative linear combinations of predicate
// indicators, closed under pointwise max/min and truncated subtraction.

struct EExpr;
using EExprPtr = std::shared_ptr<const EExpr>;

struct EExpr {
    enum class Kind { Const, Indicator, Scale, Add, Monus, Max, Min };
    Kind kind;
    Rat coeff;     // Const, Scale
    BExprPtr pred; // Indicator
    EExprPtr lhs, rhs;
    SourceLoc loc;
};

EExprPtr econst(Rat value, SourceLoc loc = {});
EExprPtr eindicator(BExprPtr pred, SourceLoc loc = {});
EExprPtr escale(Rat coeff, EExprPtr inner, SourceLoc loc = {});
EExprPtr ebin(EExpr::Kind kind, EExprPtr lhs, EExprPtr rhs, SourceLoc loc = {});

// ---------------------------------------------------------------------------
// Programs.

struct Program;
using ProgramPtr = std::shared_ptr<const Program>;

struct Program {
    enum class Kind { Skip, Abort, Assign, Seq, ProbChoice, DemonicChoice, If, Loop };
    Kind kind;
    std::string var; // Assign target
    AExprPtr expr;   // Assign rhs
    Rat prob;        // ProbChoice weight of the left branch
    BExprPtr guard;  // If / Loop
    // Seq, ProbChoice, DemonicChoice, If use left/right; Loop body is left.
    ProgramPtr left, right;
    SourceLoc loc;
};

ProgramPtr prog_skip(SourceLoc loc = {});
ProgramPtr prog_abort(SourceLoc loc = {});
ProgramPtr prog_assign(std::string var, AExprPtr expr, SourceLoc loc = {});
ProgramPtr prog_seq(ProgramPtr left, ProgramPtr right, SourceLoc loc = {});
ProgramPtr prog_prob(Rat p, ProgramPtr left, ProgramPtr right, SourceLoc loc = {});
ProgramPtr prog_demonic(ProgramPtr left, ProgramPtr right, SourceLoc loc = {});
ProgramPtr prog_if(BExprPtr guard, ProgramPtr then_branch, ProgramPtr else_branch, SourceLoc loc = {});
ProgramPtr prog_loop(BExprPtr guard, ProgramPtr body, SourceLoc loc = {});

struct VarDecl {
    std::string name;
    long lo = 0;
    long hi = 0;
    bool wrap = false;
    SourceLoc loc;
};

struct Model {
    std::vector<VarDecl> decls;
    ProgramPtr program;
};

// Performance queries, shaped after PCTL bounded-until and reachability
// reward with min/max adversaries.
struct Query {
    enum class Kind { BoundedUntil, ExpectedReward };
    enum class Mode { Min, Max };
    Kind kind = Kind::BoundedUntil;
    Mode mode = Mode::Min;
    BExprPtr target;
    long horizon = 0; // BoundedUntil only
    std::string text; // original source, echoed into reports
};

// ---------------------------------------------------------------------------
// Pretty printing and structural equality (used by round-trip tests).

std::string print_aexpr(const AExprPtr& e);
std::string print_bexpr(const BExprPtr& e);
std::string print_eexpr(const EExprPtr& e);
std::string print_program(const ProgramPtr& p);
std::string print_model(const Model& m);
std::string print_query(const Query& q);

bool equal_aexpr(const AExprPtr& a, const AExprPtr& b);
bool equal_bexpr(const BExprPtr& a, const BExprPtr& b);
bool equal_program(const ProgramPtr& a, const ProgramPtr& b);
bool equal_model(const Model& a, const Model& b);

// True if the AST contains a DemonicChoice node anywhere.
bool has_demonic_choice(const ProgramPtr& p);
// True if the AST contains a Loop node anywhere.
bool has_loop(const ProgramPtr& p);
// True if the AST contains an Abort node anywhere.
bool has_abort(const ProgramPtr& p);

// Splits nested top-level demonic choices into their deterministic
// components: P [] (Q [] R) yields [P, Q, R].
std::vector<ProgramPtr> demonic_components(const ProgramPtr& p);

}  // namespace pexa
