#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <railmaint/milp.hpp>

using namespace railmaint::milp;
using Catch::Approx;

TEST_CASE("one-variable LP", "[milp]") {
    ModelBuilder b;
    const auto x = b.add_continuous(0.0, kInf, "x");
    b.add_objective(x, 1.0);
    b.add_constraint(LinExpr(x), Sense::GreaterEqual, 3.0);
    const auto r = solve(b);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.objective_value == Approx(3.0).margin(1e-9));
    CHECK(r.value(x) == Approx(3.0).margin(1e-9));
    CHECK(r.best_bound == Approx(3.0).margin(1e-9));
}

TEST_CASE("binary cover", "[milp]") {
    ModelBuilder b;
    const auto x = b.add_binary("x");
    const auto y = b.add_binary("y");
    b.add_objective(LinExpr(x).add(y));
    b.add_constraint(LinExpr(x).add(y), Sense::GreaterEqual, 1.0);
    const auto r = solve(b);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.objective_value == Approx(1.0).margin(1e-9));
    CHECK(r.value(x) + r.value(y) == 1.0);
    CHECK((r.value(x) == 0.0 || r.value(x) == 1.0));
}

TEST_CASE("infeasible model is reported", "[milp]") {
    ModelBuilder b;
    const auto x = b.add_binary("x");
    b.add_constraint(LinExpr(x), Sense::GreaterEqual, 2.0);
    const auto r = solve(b);
    CHECK(r.status == SolveStatus::Infeasible);
    CHECK_FALSE(r.has_solution());
}

TEST_CASE("expression handling", "[milp]") {
    ModelBuilder b;
    const auto x = b.add_continuous(0.0, 10.0, "x");
    const auto y = b.add_continuous(0.0, 10.0, "y");
    // x + x + y + 2 <= 8  ->  2x + y <= 6
    LinExpr e(x);
    e.add(x).add(y).add_constant(2.0);
    b.add_constraint(e, Sense::LessEqual, 8.0);
    REQUIRE(b.constraints().size() == 1);
    const auto& c = b.constraints()[0];
    REQUIRE(c.terms.size() == 2);
    CHECK(c.terms[0].coef == 2.0);
    CHECK(c.rhs == 6.0);

    b.add_objective(LinExpr(x, -1.0).add(y, -1.0).add_constant(5.0));
    const auto r = solve(b);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.objective_value == Approx(5.0 - 6.0).margin(1e-9));  // x = 0, y = 6
    CHECK(b.evaluate_objective(r.values) == Approx(r.objective_value).margin(1e-9));

    CHECK_THROWS(b.add_objective(VarId{42}, 1.0));
    CHECK_THROWS(b.add_continuous(2.0, 1.0, "bad"));
}

TEST_CASE("fixing a variable", "[milp]") {
    ModelBuilder b;
    const auto x = b.add_binary("x");
    const auto y = b.add_binary("y");
    b.add_objective(LinExpr(x, 3.0).add(y, 1.0));
    b.add_constraint(LinExpr(x).add(y), Sense::Equal, 1.0);
    b.fix(x, 1.0);
    const auto r = solve(b);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.objective_value == Approx(3.0));
}

TEST_CASE("LP export", "[milp]") {
    ModelBuilder b;
    const auto x = b.add_binary("x");
    b.add_objective(x, 1.0);
    b.add_constraint(LinExpr(x), Sense::GreaterEqual, 1.0, "need_x");
    const auto path = std::filesystem::temp_directory_path() / "railmaint_export_test.lp";
    export_lp(b, path.string());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    CHECK(text.find("need_x") != std::string::npos);
    CHECK(text.find("bin") != std::string::npos);
    std::filesystem::remove(path);
}

TEST_CASE("invalid options are rejected", "[milp]") {
    ModelBuilder b;
    b.add_binary("x");
    SolveOptions o;
    o.time_limit = 0.0;
    CHECK_THROWS(solve(b, o));
    o = {};
    o.thread_count = 0;
    CHECK_THROWS(solve(b, o));
}
