#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "prooflab/pipeline.hpp"

using namespace pl;

namespace {

ExperimentSpec entry(std::string family, int n, std::vector<std::string> stages, std::string am = "") {
    ExperimentSpec s;
    s.name = family + std::to_string(n);
    s.family = std::move(family);
    s.n = n;
    s.stages = std::move(stages);
    s.amendments = std::move(am);
    return s;
}

}  // namespace

TEST_CASE("empty pipeline does nothing") {
    EntryResult r = run_entry(entry("ind", 3, {}), 1);
    CHECK(r.ok);
    CHECK(r.stages.empty());
}

TEST_CASE("stage types must line up") {
    CHECK_THROWS_AS(entry("ind", 3, {"psim"}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(entry("ind", 3, {"oracle", "cdcl2p0"}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(entry("ind", 3, {"frobnicate"}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(entry("ind", 3, {"indxor2"}).validate(), std::invalid_argument);
    CHECK_NOTHROW(entry("ind", 3, {"oracle", "check", "psim", "check", "width-audit"}).validate());
}

TEST_CASE("DECISION-L pipeline on Ind(6)") {
    auto s = entry("ind", 6, {"simulate", "check", "cdcl2half", "check-half", "half2ordered", "check-ordered", "half2cdcl"},
                   "PI-D,DECISION-L");
    EntryResult r = run_entry(s, 2);
    REQUIRE(r.ok);
    REQUIRE(r.stages.size() == 7);
    const StageRecord &h2o = r.stages[4];
    CHECK(h2o.bound == doctest::Approx(6.0 * h2o.input_size));
    CHECK(h2o.measured <= h2o.bound);
    CHECK(r.stages[6].bound == doctest::Approx(7.0));
    auto j = nlohmann::json::parse(h2o.json());
    CHECK(j["stage"] == "half2ordered");
    CHECK(j["seed"] == 2);
    CHECK(j["version"] == kVersion);
}

TEST_CASE("oracle to psim to CDCL pipeline") {
    auto s = entry("ind", 6, {"oracle", "check", "psim", "check", "p02cdcl", "check"}, "PI-D,FIRST-L");
    EntryResult r = run_entry(s, 1);
    CHECK(r.ok);
    CHECK(r.stages.size() == 6);
}

TEST_CASE("a failing stage halts the entry") {
    auto s = entry("random", 8, {"oracle", "psim"});
    s.width = 3;
    s.clauses = 4;  // satisfiable
    EntryResult r = run_entry(s, 1);
    CHECK_FALSE(r.ok);
    CHECK(r.failed_stage == "oracle");
    CHECK(r.stages.size() == 1);
}

TEST_CASE("a tight budget is reported as such") {
    auto s = entry("random", 9, {"oracle"});
    s.clauses = 60;
    s.budget = 5;
    EntryResult r = run_entry(s, 1);
    CHECK_FALSE(r.ok);
    CHECK(r.budget);
}

TEST_CASE("experiment files") {
    std::stringstream ok(R"({"entries":[{"name":"a","family":"indxor","n":3,"r":2,"stages":["indxor2","check"],"seeds":[1,2]}]})");
    auto specs = read_experiments(ok);
    REQUIRE(specs.size() == 1);
    CHECK(specs[0].seeds.size() == 2);
    CHECK(run_entry(specs[0], 1).ok);

    std::stringstream typo(R"([{"famly":"ind"}])");
    CHECK_THROWS_AS(read_experiments(typo), ParseError);
    std::stringstream broken("{");
    CHECK_THROWS_AS(read_experiments(broken), ParseError);
}

TEST_CASE("CSV rows have one field per header column") {
    auto s = entry("stone", 3, {"stone", "check"});
    s.m = 3;
    EntryResult r = run_entry(s, 1);
    REQUIRE(r.ok);
    auto count = [](const std::string &line) { return std::count(line.begin(), line.end(), ','); };
    for (const auto &st : r.stages) CHECK(count(st.csv()) == count(StageRecord::csv_header()));
}
