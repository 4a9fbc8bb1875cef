#include "vrhr/formula.hpp"

#include <functional>
#include <sstream>
#include <stdexcept>

namespace vrhr {

namespace {
FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }
} // namespace

FormulaPtr f_const(uint64_t v) {
    Formula f;
    f.kind = Formula::Kind::Const;
    f.value = v;
    return make(std::move(f));
}

FormulaPtr f_var(std::string name) {
    Formula f;
    f.kind = Formula::Kind::Var;
    f.var = std::move(name);
    return make(std::move(f));
}

static FormulaPtr binary(Formula::Kind k, FormulaPtr a, FormulaPtr b) {
    Formula f;
    f.kind = k;
    f.a = std::move(a);
    f.b = std::move(b);
    return make(std::move(f));
}

FormulaPtr f_add(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::Add, std::move(a), std::move(b)); }
FormulaPtr f_mul(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::Mul, std::move(a), std::move(b)); }
FormulaPtr f_and(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::And, std::move(a), std::move(b)); }
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) { return binary(Formula::Kind::Or, std::move(a), std::move(b)); }

FormulaPtr f_cmp(Formula::CmpOp op, FormulaPtr a, FormulaPtr b) {
    Formula f;
    f.kind = Formula::Kind::Cmp;
    f.op = op;
    f.a = std::move(a);
    f.b = std::move(b);
    return make(std::move(f));
}

FormulaPtr f_not(FormulaPtr a) {
    Formula f;
    f.kind = Formula::Kind::Not;
    f.a = std::move(a);
    return make(std::move(f));
}

std::set<std::string> free_vars(const FormulaPtr& f) {
    std::set<std::string> out;
    std::function<void(const FormulaPtr&)> go = [&](const FormulaPtr& u) {
        if (!u)
            return;
        if (u->kind == Formula::Kind::Var)
            out.insert(u->var);
        go(u->a);
        go(u->b);
    };
    go(f);
    return out;
}

namespace {

uint64_t eval_arith(const FormulaPtr& f, const std::function<uint64_t(const std::string&)>& look) {
    switch (f->kind) {
    case Formula::Kind::Const:
        return f->value;
    case Formula::Kind::Var:
        return look(f->var);
    case Formula::Kind::Add:
        return eval_arith(f->a, look) + eval_arith(f->b, look);
    case Formula::Kind::Mul:
        return eval_arith(f->a, look) * eval_arith(f->b, look);
    default:
        throw std::runtime_error("boolean subformula used as an arithmetic term");
    }
}

bool eval_bool(const FormulaPtr& f, const std::function<uint64_t(const std::string&)>& look) {
    switch (f->kind) {
    case Formula::Kind::Cmp: {
        uint64_t l = eval_arith(f->a, look);
        uint64_t r = eval_arith(f->b, look);
        switch (f->op) {
        case Formula::CmpOp::Eq: return l == r;
        case Formula::CmpOp::Ne: return l != r;
        case Formula::CmpOp::Lt: return l < r;
        case Formula::CmpOp::Le: return l <= r;
        case Formula::CmpOp::Gt: return l > r;
        case Formula::CmpOp::Ge: return l >= r;
        }
        break;
    }
    case Formula::Kind::And:
        return eval_bool(f->a, look) && eval_bool(f->b, look);
    case Formula::Kind::Or:
        return eval_bool(f->a, look) || eval_bool(f->b, look);
    case Formula::Kind::Not:
        return !eval_bool(f->a, look);
    default:
        throw std::runtime_error("arithmetic term used as a boolean formula");
    }
    throw std::logic_error("unreachable");
}

} // namespace

bool eval_formula(const FormulaPtr& f, const Valuation& v) {
    return eval_bool(f, [&](const std::string& x) -> uint64_t {
        auto it = v.find(x);
        if (it == v.end())
            throw std::runtime_error("valuation misses variable '" + x + "'");
        return it->second;
    });
}

std::string print_formula(const FormulaPtr& f) {
    std::ostringstream os;
    std::function<void(const FormulaPtr&, int)> pr = [&](const FormulaPtr& u, int prec) {
        auto paren = [&](int p, auto&& body) {
            if (p < prec)
                os << "(";
            body();
            if (p < prec)
                os << ")";
        };
        switch (u->kind) {
        case Formula::Kind::Const:
            os << u->value;
            break;
        case Formula::Kind::Var:
            os << u->var;
            break;
        case Formula::Kind::Add:
            paren(3, [&] { pr(u->a, 3); os << " + "; pr(u->b, 4); });
            break;
        case Formula::Kind::Mul:
            paren(4, [&] { pr(u->a, 4); os << " * "; pr(u->b, 5); });
            break;
        case Formula::Kind::Cmp: {
            const char* ops[] = {"=", "!=", "<", "<=", ">", ">="};
            paren(2, [&] { pr(u->a, 3); os << " " << ops[(int)u->op] << " "; pr(u->b, 3); });
            break;
        }
        case Formula::Kind::And:
            paren(1, [&] { pr(u->a, 1); os << " && "; pr(u->b, 2); });
            break;
        case Formula::Kind::Or:
            paren(0, [&] { pr(u->a, 0); os << " || "; pr(u->b, 1); });
            break;
        case Formula::Kind::Not:
            os << "!";
            pr(u->a, 5);
            break;
        }
    };
    pr(f, 0);
    return os.str();
}

bool CompiledFormula::eval(const std::vector<uint64_t>& counts) const {
    return eval_bool(root, [&](const std::string& x) -> uint64_t {
        auto it = index.find(x);
        return it == index.end() ? 0 : counts[it->second];
    });
}

CompiledFormula compile_formula(const FormulaPtr& f, const std::vector<std::string>& var_order) {
    CompiledFormula c{f, var_order, {}};
    for (size_t i = 0; i < var_order.size(); ++i)
        c.index[var_order[i]] = i;
    return c;
}

} // namespace vrhr
