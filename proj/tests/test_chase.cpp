#include <doctest.h>

#include <algorithm>
#include <random>

#include "rdfex/chase.hpp"
#include "rdfex/textio.hpp"
#include "support/brute.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace rdfex;
using testsupport::fixture_instance;
using testsupport::fixture_setting;

namespace {

RelationalSchema schema_s_key() {
    RelationalSchema schema;
    schema.relations["S"] = {"a1", "a2"};
    schema.fds.push_back({"S", {"a1"}, {"a2"}});
    return schema;
}

int count_pred(const TypedGraph& g, const std::string& pred) {
    int n = 0;
    for (const auto& t : g.triples())
        if (t.pred == pred) ++n;
    return n;
}

}  // namespace

TEST_CASE("fd_chase unifies nulls under a key") {
    SourceInstance inst;
    inst.add("S", {Value::null_lit(3), Value::null_lit(4)});
    inst.add("S", {Value::null_lit(3), Value::null_lit(5)});

    auto result = fd_chase(inst, schema_s_key());
    auto* done = std::get_if<FdChaseDone>(&result);
    REQUIRE(done);
    CHECK(done->unifier.at(Value::null_lit(5)) == Value::null_lit(4));
    CHECK(done->instance.fact_count() == 1);
    CHECK(done->instance.contains("S", {Value::null_lit(3), Value::null_lit(4)}));
}

TEST_CASE("fd_chase fails on distinct constants") {
    RelationalSchema schema;
    schema.relations["User"] = {"uid", "name"};
    schema.fds.push_back({"User", {"uid"}, {"name"}});
    SourceInstance inst;
    inst.add("User", {Value::lit("1"), Value::lit("a")});
    inst.add("User", {Value::lit("1"), Value::lit("b")});

    auto result = fd_chase(inst, schema);
    auto* failure = std::get_if<FdFailure>(&result);
    REQUIRE(failure);
    CHECK(failure->fd.relation == "User");
    std::set<Value> clash{failure->clash.first, failure->clash.second};
    CHECK(clash == std::set<Value>{Value::lit("a"), Value::lit("b")});
}

TEST_CASE("fd_chase leaves the figure instance untouched") {
    Setting s = fixture_setting("bug.setting");
    SourceInstance inst = fixture_instance("bug.inst", s.source);
    auto result = fd_chase(inst, s.source);
    auto* done = std::get_if<FdChaseDone>(&result);
    REQUIRE(done);
    CHECK(done->identity());
    CHECK(done->instance == inst);
}

TEST_CASE("fd_chase is idempotent and constant beats null") {
    SourceInstance inst;
    inst.add("S", {Value::null_lit(0), Value::lit("c")});
    inst.add("S", {Value::null_lit(0), Value::null_lit(1)});
    auto result = fd_chase(inst, schema_s_key());
    auto* done = std::get_if<FdChaseDone>(&result);
    REQUIRE(done);
    CHECK(done->unifier.at(Value::null_lit(1)) == Value::lit("c"));

    auto again = fd_chase(done->instance, schema_s_key());
    auto* done2 = std::get_if<FdChaseDone>(&again);
    REQUIRE(done2);
    CHECK(done2->identity());
    CHECK(done2->instance == done->instance);
}

TEST_CASE("fd_chase matches pairwise closure on random tableaux") {
    // Reference: apply FDs pairwise until no change, tracking merges naively.
    testsupport::Rng rng(21);
    for (int round = 0; round < 200; ++round) {
        RelationalSchema schema = schema_s_key();
        SourceInstance inst;
        std::uniform_int_distribution<int> val(0, 3);
        for (int i = 0, n = val(rng) + val(rng); i < n && i < 8; ++i) {
            Tuple t;
            for (int k = 0; k < 2; ++k) {
                if (testsupport::coin(rng, 0.7)) t.push_back(Value::null_lit(val(rng)));
                else t.push_back(Value::lit(std::to_string(val(rng))));
            }
            inst.add("S", std::move(t));
        }

        // Naive reference closure.
        std::map<Value, Value> subst;
        auto walk = [&subst](Value v) {
            while (subst.count(v)) v = subst.at(v);
            return v;
        };
        bool failed = false;
        SourceInstance cur = inst;
        bool changed = true;
        while (changed && !failed) {
            changed = false;
            std::vector<Tuple> ts(cur.tuples("S").begin(), cur.tuples("S").end());
            for (size_t i = 0; i < ts.size() && !failed; ++i) {
                for (size_t j = 0; j < ts.size() && !failed; ++j) {
                    if (walk(ts[i][0]) != walk(ts[j][0])) continue;
                    Value a = walk(ts[i][1]), b = walk(ts[j][1]);
                    if (a == b) continue;
                    if (!a.is_null() && !b.is_null()) {
                        failed = true;
                    } else {
                        if (!b.is_null() || (a.is_null() && b.null_id() < a.null_id()))
                            std::swap(a, b);
                        subst[b] = a;
                        changed = true;
                    }
                }
            }
            if (changed) {
                SourceInstance next;
                for (const auto& t : cur.tuples("S")) next.add("S", {walk(t[0]), walk(t[1])});
                cur = std::move(next);
            }
        }

        auto result = fd_chase(inst, schema);
        if (failed) {
            CHECK(std::holds_alternative<FdFailure>(result));
        } else {
            auto* done = std::get_if<FdChaseDone>(&result);
            REQUIRE(done);
            CHECK(done->instance == cur);
        }
    }
}

TEST_CASE("core_pre_solution materializes the running example") {
    Setting s = fixture_setting("bug.setting");
    SourceInstance inst = fixture_instance("bug.inst", s.source);
    auto result = core_pre_solution(s, inst);
    auto* g = std::get_if<TypedGraph>(&result);
    REQUIRE(g);

    CHECK(g->triple_count() == 13);
    CHECK(g->type_fact_count() == 5);
    CHECK(count_pred(*g, ":descr") == 3);
    CHECK(count_pred(*g, ":rep") == 3);
    CHECK(count_pred(*g, ":related") == 2);
    CHECK(count_pred(*g, ":name") == 2);
    CHECK(count_pred(*g, ":tracks") == 2);
    CHECK(count_pred(*g, ":email") == 1);

    // Type propagation adds TUser to both users via delta(TBug, :rep).
    for (int i = 1; i <= 3; ++i)
        CHECK(g->has_type(Value::iri("bug:" + std::to_string(i)), "TBug"));
    CHECK(g->has_type(Value::iri("usr:1"), "TUser"));
    CHECK(g->has_type(Value::iri("usr:2"), "TUser"));
    CHECK(g->null_free());
}

TEST_CASE("core_pre_solution of the empty instance is empty") {
    Setting s = fixture_setting("bug.setting");
    auto result = core_pre_solution(s, SourceInstance{});
    auto* g = std::get_if<TypedGraph>(&result);
    REQUIRE(g);
    CHECK(g->triple_count() == 0);
    CHECK(g->type_fact_count() == 0);
}

TEST_CASE("core_pre_solution reports a kind clash when TP hits a literal") {
    auto parsed = parse_setting(
        "relation R(a, b)\n"
        "iri f(x) = \"f:{x}\"\n"
        "shape T { :p -> @U [*] }\n"
        "shape U { }\n"
        "rule R(x, y) => T(f(x))\n"
        "rule R(x, y) => Triple(f(x), :p, y)\n");
    REQUIRE(parsed.ok());
    SourceInstance inst;
    inst.add("R", {Value::lit("1"), Value::lit("v")});

    auto result = core_pre_solution(*parsed, inst);
    auto* clash = std::get_if<KindClash>(&result);
    REQUIRE(clash);
    CHECK(clash->node == Value::lit("v"));
    CHECK(clash->type == "U");
    CHECK(clash->pred == ":p");
}

TEST_CASE("core_pre_solution is order independent and minimal") {
    Setting s = fixture_setting("bug.setting");
    SourceInstance inst = fixture_instance("bug.inst", s.source);
    auto baseline = std::get<TypedGraph>(core_pre_solution(s, inst));

    std::mt19937_64 rng(5);
    for (int round = 0; round < 10; ++round) {
        Setting shuffled = s;
        std::shuffle(shuffled.tgds.begin(), shuffled.tgds.end(), rng);
        auto result = core_pre_solution(shuffled, inst);
        REQUIRE(std::holds_alternative<TypedGraph>(result));
        CHECK(std::get<TypedGraph>(result) == baseline);
    }
}

TEST_CASE("core_pre_solution agrees with the naive reference chase") {
    testsupport::Rng rng(2024);
    int compared = 0;
    for (int round = 0; round < 300; ++round) {
        Setting s = testsupport::random_setting(rng);
        if (!validate_setting(s).empty()) continue;
        std::vector<Value> domain{Value::lit("0"), Value::lit("1"), Value::lit("2")};
        SourceInstance inst = testsupport::random_instance(rng, s.source, domain, 6);
        auto chased = fd_chase(inst, s.source);
        if (!std::holds_alternative<FdChaseDone>(chased)) continue;
        if (!std::get<FdChaseDone>(chased).identity()) continue;

        auto mine = core_pre_solution(s, inst);
        auto brute = testsupport::brute_core_pre_solution(s, inst);
        if (brute.kind_clash) {
            CHECK(std::holds_alternative<KindClash>(mine));
        } else {
            REQUIRE(std::holds_alternative<TypedGraph>(mine));
            CHECK(std::get<TypedGraph>(mine) == brute.graph);
        }
        ++compared;
    }
    CHECK(compared > 100);
}

TEST_CASE("check_pf flags duplicate functional objects") {
    Setting s = fixture_setting("bug.setting");
    SourceInstance inst = fixture_instance("bug.inst", s.source);
    auto j0 = std::get<TypedGraph>(core_pre_solution(s, inst));
    CHECK(check_pf(j0, s.shapes).empty());

    ShapeSchema shapes;
    shapes.types.insert("T");
    shapes.delta[{"T", ":p"}] = {ShapeTarget::literal_mark(), Mult::One};
    TypedGraph g;
    g.add_type(Value::iri("a:1"), "T");
    g.add_triple(Value::iri("a:1"), ":p", Value::lit("x"));
    g.add_triple(Value::iri("a:1"), ":p", Value::lit("y"));
    auto violations = check_pf(g, shapes);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].kind == ShapeViolation::PF);
    CHECK(violations[0].witnesses.size() == 2);

    shapes.delta[{"T", ":p"}] = {ShapeTarget::literal_mark(), Mult::Star};
    CHECK(check_pf(g, shapes).empty());
}

TEST_CASE("validate_shapes accepts the figure solution and flags the core gaps") {
    Setting s = fixture_setting("bug.setting");
    TypedGraph fig2 = testsupport::fixture_graph("fig2.graph");
    CHECK(validate_shapes(fig2, s.shapes).empty());

    SourceInstance inst = fixture_instance("bug.inst", s.source);
    auto j0 = std::get<TypedGraph>(core_pre_solution(s, inst));
    auto violations = validate_shapes(j0, s.shapes);
    REQUIRE(violations.size() == 2);
    for (const auto& v : violations) {
        CHECK(v.kind == ShapeViolation::PE);
        CHECK(v.node == Value::iri("usr:2"));
        CHECK(v.type == "TUser");
    }
    std::set<std::string> preds{violations[0].pred, violations[1].pred};
    CHECK(preds == std::set<std::string>{":email", ":tracks"});

    CHECK(validate_shapes(TypedGraph{}, s.shapes).empty());
}

TEST_CASE("validate_shapes subsumes check_pf") {
    testsupport::Rng rng(77);
    for (int round = 0; round < 100; ++round) {
        Setting s = testsupport::random_setting(rng);
        TypedGraph g = testsupport::random_graph(rng, 6, 10);
        for (const auto& n : g.nodes())
            if (!n.is_literal() && testsupport::coin(rng, 0.5))
                g.add_type(n, "T" + std::to_string(testsupport::pick(rng, 0, 2)));
        auto full = validate_shapes(g, s.shapes);
        bool full_has_pf = std::any_of(full.begin(), full.end(), [](const ShapeViolation& v) {
            return v.kind == ShapeViolation::PF;
        });
        CHECK(full_has_pf == !check_pf(g, s.shapes).empty());
    }
}
