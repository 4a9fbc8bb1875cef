#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace vrhr {

/// Quantifier-free arithmetic over counting variables: naturals, +, *,
/// comparisons and boolean connectives. Quantifiers are rejected at parse
/// time by the frontend.
struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    enum class Kind { Const, Var, Add, Mul, Cmp, And, Or, Not };
    enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

    Kind kind;
    uint64_t value = 0;   // Const
    std::string var;      // Var
    CmpOp op = CmpOp::Eq; // Cmp
    FormulaPtr a, b;
};

FormulaPtr f_const(uint64_t v);
FormulaPtr f_var(std::string name);
FormulaPtr f_add(FormulaPtr a, FormulaPtr b);
FormulaPtr f_mul(FormulaPtr a, FormulaPtr b);
FormulaPtr f_cmp(Formula::CmpOp op, FormulaPtr a, FormulaPtr b);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_not(FormulaPtr a);

using Valuation = std::map<std::string, uint64_t>;

std::set<std::string> free_vars(const FormulaPtr& f);

/// Throws std::runtime_error on a variable missing from the valuation.
bool eval_formula(const FormulaPtr& f, const Valuation& v);

std::string print_formula(const FormulaPtr& f);

/// Formula with variables resolved to indices into a fixed variable order,
/// for evaluation on counting vectors during exploration. Variables absent
/// from the order read as 0.
struct CompiledFormula {
    FormulaPtr root;
    std::vector<std::string> var_order;
    std::map<std::string, size_t> index; // resolved once

    bool eval(const std::vector<uint64_t>& counts) const;
};

CompiledFormula compile_formula(const FormulaPtr& f, const std::vector<std::string>& var_order);

} // namespace vrhr
