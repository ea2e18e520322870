#pragma once

// Solver-agnostic MILP surface. Models are assembled in a ModelBuilder and
// handed to solve(); the backend is HiGHS.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Highs.h>

namespace railmaint::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct VarId {
    int index = -1;
    friend bool operator==(VarId, VarId) = default;
};

enum class VarKind { Binary, Continuous };
enum class Sense { LessEqual, Equal, GreaterEqual };

struct Term {
    VarId var;
    double coef = 0.0;
};

class LinExpr {
public:
    LinExpr() = default;
    LinExpr(VarId v, double c = 1.0) { add(v, c); }  // NOLINT: implicit by intent

    LinExpr& add(VarId v, double c = 1.0) {
        if (c != 0.0) terms_.push_back({v, c});
        return *this;
    }
    LinExpr& add_constant(double c) {
        constant_ += c;
        return *this;
    }
    LinExpr& operator+=(const LinExpr& o) {
        terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
        constant_ += o.constant_;
        return *this;
    }

    [[nodiscard]] const std::vector<Term>& terms() const noexcept { return terms_; }
    [[nodiscard]] double constant() const noexcept { return constant_; }

private:
    std::vector<Term> terms_;
    double constant_ = 0.0;
};

struct Variable {
    VarKind kind = VarKind::Continuous;
    double lower = 0.0;
    double upper = kInf;
    std::string name;
};

struct Constraint {
    std::vector<Term> terms;  // merged, sorted by variable index
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
    std::string name;
};

/// Minimisation model under construction.
class ModelBuilder {
public:
    VarId add_binary(std::string name) { return add_var(VarKind::Binary, 0.0, 1.0, std::move(name)); }

    VarId add_continuous(double lower, double upper, std::string name) {
        return add_var(VarKind::Continuous, lower, upper, std::move(name));
    }

    /// Adds `expr (sense) rhs`; the expression's constant moves to the right-hand side.
    void add_constraint(const LinExpr& expr, Sense sense, double rhs, std::string name = {}) {
        Constraint c;
        c.terms = merged(expr.terms());
        c.sense = sense;
        c.rhs = rhs - expr.constant();
        c.name = std::move(name);
        constraints_.push_back(std::move(c));
    }

    void add_objective(VarId v, double coef) {
        check(v);
        objective_[static_cast<std::size_t>(v.index)] += coef;
    }
    void add_objective(const LinExpr& expr) {
        for (const auto& t : expr.terms()) add_objective(t.var, t.coef);
        objective_constant_ += expr.constant();
    }

    /// Pins a variable to a value through its bounds.
    void fix(VarId v, double value) {
        check(v);
        auto& var = vars_[static_cast<std::size_t>(v.index)];
        var.lower = var.upper = value;
    }

    [[nodiscard]] int num_vars() const noexcept { return static_cast<int>(vars_.size()); }
    [[nodiscard]] int num_constraints() const noexcept { return static_cast<int>(constraints_.size()); }
    [[nodiscard]] const std::vector<Variable>& variables() const noexcept { return vars_; }
    [[nodiscard]] const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
    [[nodiscard]] const std::vector<double>& objective() const noexcept { return objective_; }
    [[nodiscard]] double objective_constant() const noexcept { return objective_constant_; }
    [[nodiscard]] const Variable& variable(VarId v) const { return vars_.at(static_cast<std::size_t>(v.index)); }

    [[nodiscard]] bool has_integers() const {
        return std::any_of(vars_.begin(), vars_.end(), [](const Variable& v) { return v.kind == VarKind::Binary; });
    }

    /// Objective evaluated at a full assignment.
    [[nodiscard]] double evaluate_objective(const std::vector<double>& values) const {
        double sum = objective_constant_;
        for (std::size_t i = 0; i < objective_.size(); ++i) sum += objective_[i] * values.at(i);
        return sum;
    }

private:
    VarId add_var(VarKind kind, double lower, double upper, std::string name) {
        if (lower > upper) throw std::invalid_argument("ModelBuilder: lower bound exceeds upper bound");
        vars_.push_back({kind, lower, upper, std::move(name)});
        objective_.push_back(0.0);
        return VarId{static_cast<int>(vars_.size()) - 1};
    }

    void check(VarId v) const {
        if (v.index < 0 || v.index >= num_vars()) throw std::out_of_range("ModelBuilder: undeclared variable");
    }

    std::vector<Term> merged(const std::vector<Term>& in) const {
        std::vector<Term> out(in);
        for (const auto& t : out) check(t.var);
        std::sort(out.begin(), out.end(), [](const Term& a, const Term& b) { return a.var.index < b.var.index; });
        std::size_t w = 0;
        for (std::size_t r = 0; r < out.size(); ++r) {
            if (w > 0 && out[w - 1].var == out[r].var)
                out[w - 1].coef += out[r].coef;
            else
                out[w++] = out[r];
        }
        out.resize(w);
        std::erase_if(out, [](const Term& t) { return t.coef == 0.0; });
        return out;
    }

    std::vector<Variable> vars_;
    std::vector<Constraint> constraints_;
    std::vector<double> objective_;
    double objective_constant_ = 0.0;
};

struct SolveOptions {
    double time_limit = 10800.0;                 // seconds
    std::optional<double> relative_mip_gap;      // backend default when unset
    int thread_count = 1;
    std::optional<int> solver_seed;
    bool log_to_console = false;

    void validate() const {
        if (!(time_limit > 0.0)) throw std::invalid_argument("SolveOptions: time_limit must be positive");
        if (thread_count < 1) throw std::invalid_argument("SolveOptions: thread_count must be >= 1");
    }
};

enum class SolveStatus { Optimal, FeasibleTimeLimit, Infeasible, Error };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "Optimal";
        case SolveStatus::FeasibleTimeLimit: return "FeasibleTimeLimit";
        case SolveStatus::Infeasible: return "Infeasible";
        case SolveStatus::Error: return "Error";
    }
    return "?";
}

struct SolveResult {
    SolveStatus status = SolveStatus::Error;
    double objective_value = kInf;
    double best_bound = -kInf;
    std::vector<double> values;  // indexed by VarId::index
    double wall_time = 0.0;
    std::string message;

    [[nodiscard]] bool has_solution() const noexcept {
        return status == SolveStatus::Optimal || status == SolveStatus::FeasibleTimeLimit;
    }
    [[nodiscard]] double value(VarId v) const { return values.at(static_cast<std::size_t>(v.index)); }
};

namespace detail {

inline HighsLp to_highs(const ModelBuilder& b) {
    HighsLp lp;
    const auto& vars = b.variables();
    lp.num_col_ = static_cast<HighsInt>(vars.size());
    lp.num_row_ = static_cast<HighsInt>(b.constraints().size());
    lp.sense_ = ObjSense::kMinimize;
    lp.offset_ = b.objective_constant();
    lp.col_cost_ = b.objective();
    lp.col_lower_.reserve(vars.size());
    lp.col_upper_.reserve(vars.size());
    lp.integrality_.reserve(vars.size());
    lp.col_names_.reserve(vars.size());
    for (const auto& v : vars) {
        lp.col_lower_.push_back(v.lower);
        lp.col_upper_.push_back(v.upper);
        lp.integrality_.push_back(v.kind == VarKind::Binary ? HighsVarType::kInteger : HighsVarType::kContinuous);
        lp.col_names_.push_back(v.name);
    }
    // column-wise assembly
    const auto& rows = b.constraints();
    std::vector<HighsInt> count(vars.size() + 1, 0);
    for (const auto& c : rows)
        for (const auto& t : c.terms) ++count[static_cast<std::size_t>(t.var.index) + 1];
    for (std::size_t i = 1; i < count.size(); ++i) count[i] += count[i - 1];
    auto& a = lp.a_matrix_;
    a.format_ = MatrixFormat::kColwise;
    a.num_col_ = lp.num_col_;
    a.num_row_ = lp.num_row_;
    a.start_ = count;
    a.index_.resize(static_cast<std::size_t>(count.back()));
    a.value_.resize(a.index_.size());
    std::vector<HighsInt> fill(count.begin(), count.end() - 1);
    int row = 0;
    for (const auto& c : rows) {
        for (const auto& t : c.terms) {
            const auto pos = static_cast<std::size_t>(fill[static_cast<std::size_t>(t.var.index)]++);
            a.index_[pos] = row;
            a.value_[pos] = t.coef;
        }
        lp.row_lower_.push_back(c.sense == Sense::LessEqual ? -kHighsInf : c.rhs);
        lp.row_upper_.push_back(c.sense == Sense::GreaterEqual ? kHighsInf : c.rhs);
        lp.row_names_.push_back(c.name.empty() ? "r" + std::to_string(row) : c.name);
        ++row;
    }
    if (!b.has_integers()) lp.integrality_.clear();
    return lp;
}

inline void configure(Highs& highs, const SolveOptions& opts) {
    highs.setOptionValue("output_flag", opts.log_to_console);
    highs.setOptionValue("time_limit", opts.time_limit);
    highs.setOptionValue("threads", static_cast<HighsInt>(opts.thread_count));
    if (opts.relative_mip_gap) highs.setOptionValue("mip_rel_gap", *opts.relative_mip_gap);
    if (opts.solver_seed) highs.setOptionValue("random_seed", static_cast<HighsInt>(*opts.solver_seed));
}

}  // namespace detail

/// Solves the model. Binary values within 1e-6 of 0 or 1 are snapped.
inline SolveResult solve(const ModelBuilder& builder, const SolveOptions& opts = {}) {
    opts.validate();
    SolveResult res;
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

    Highs highs;
    detail::configure(highs, opts);
    if (highs.passModel(detail::to_highs(builder)) == HighsStatus::kError) {
        res.message = "backend rejected the model";
        res.wall_time = elapsed();
        return res;
    }
    const HighsStatus run_status = highs.run();
    res.wall_time = elapsed();
    const HighsModelStatus ms = highs.getModelStatus();
    const HighsInfo& info = highs.getInfo();
    res.message = highs.modelStatusToString(ms);

    if (ms == HighsModelStatus::kInfeasible) {
        res.status = SolveStatus::Infeasible;
        return res;
    }
    const bool has_primal = info.primal_solution_status == kSolutionStatusFeasible;
    if (run_status == HighsStatus::kError || !has_primal) {
        res.status = SolveStatus::Error;
        return res;
    }
    res.status = ms == HighsModelStatus::kOptimal ? SolveStatus::Optimal : SolveStatus::FeasibleTimeLimit;
    res.values = highs.getSolution().col_value;
    const auto& vars = builder.variables();
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i].kind != VarKind::Binary) continue;
        double& x = res.values[i];
        if (std::abs(x) <= 1e-6) x = 0.0;
        else if (std::abs(x - 1.0) <= 1e-6) x = 1.0;
    }
    res.objective_value = info.objective_function_value;
    res.best_bound = builder.has_integers() ? info.mip_dual_bound : res.objective_value;
    return res;
}

/// Writes the model in CPLEX LP text format.
inline void export_lp(const ModelBuilder& builder, const std::string& path) {
    Highs highs;
    highs.setOptionValue("output_flag", false);
    if (highs.passModel(detail::to_highs(builder)) == HighsStatus::kError ||
        highs.writeModel(path) == HighsStatus::kError)
        throw std::runtime_error("failed to export LP model to " + path);
}

}  // namespace railmaint::milp
