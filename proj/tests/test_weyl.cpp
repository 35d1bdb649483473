#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tlweyl/jw.hpp"
#include "tlweyl/relations.hpp"
#include "tlweyl/weyl.hpp"

#include <nlohmann/json.hpp>

using namespace tlweyl;

static Tile T(TileKind k, int pos, int kk = 0) {
    Tile t;
    t.kind = k;
    t.pos = pos;
    t.k = kk;
    return t;
}

TEST_CASE("diagram language: words, validation, labels") {
    CHECK(word_norm("++-") == 1);
    CHECK(word_norm("") == 0);

    WeylDiagram id = identity_diagram("+-");
    CHECK(validate(id).empty());
    CHECK(id.source == id.target);

    // cup then cap: the three intermediate boundary words
    WeylDiagram zz = make_diagram(
        "+", {{T(TileKind::cup_right, 0)}, {T(TileKind::cap_left, 1)}});
    CHECK(validate(zz).empty());
    CHECK(zz.target == "+");
    RegionLabeling rl = region_labels(zz, 3);
    REQUIRE(rl.boundary_labels.size() == 3);
    CHECK(rl.boundary_labels[0] == std::vector<int>{3, 4});
    CHECK(rl.boundary_labels[1] == std::vector<int>{3, 4, 3, 4});
    CHECK(rl.boundary_labels[2] == std::vector<int>{3, 4});
}

TEST_CASE("gate: dips, vanishing bubbles, invalid boxes") {
    // closed clockwise circle at level 0 dips to -1
    WeylDiagram c = make_diagram(
        "", {{T(TileKind::cup_left, 0)}, {T(TileKind::cap_left, 0)}});
    CHECK(gate_check(c, 0).status == GateStatus::zero);
    CHECK(gate_check(c, 1).status == GateStatus::admissible);

    WeylDiagram b = make_diagram("", {{T(TileKind::bubble, 0, 1)}});
    CHECK(gate_check(b, 1).status == GateStatus::zero); // 1 - 2 < 0
    CHECK(gate_check(b, 2).status == GateStatus::admissible);

    WeylDiagram bx = make_diagram("", {{T(TileKind::box, 0, -2)}});
    CHECK(gate_check(bx, 0).status == GateStatus::invalid);
}

TEST_CASE("diagram json round trip") {
    WeylDiagram d = make_diagram(
        "-+", {{T(TileKind::bubble, 1, 2)}, {T(TileKind::cap_right, 0)},
               {T(TileKind::cup_right, 0)}, {T(TileKind::bubble, 1, 2)}});
    nlohmann::json j = diagram_to_json(d);
    WeylDiagram d2 = diagram_from_json(j);
    CHECK(d2.source == d.source);
    CHECK(d2.target == d.target);
    REQUIRE(d2.slices.size() == d.slices.size());
    for (std::size_t s = 0; s < d.slices.size(); ++s) {
        REQUIRE(d2.slices[s].size() == d.slices[s].size());
        for (std::size_t i = 0; i < d.slices[s].size(); ++i) {
            CHECK(d2.slices[s][i].kind == d.slices[s][i].kind);
            CHECK(d2.slices[s][i].pos == d.slices[s][i].pos);
            CHECK(d2.slices[s][i].k == d.slices[s][i].k);
        }
    }
}

TEST_CASE("macro expansion is stable on macro-free diagrams") {
    WeylDiagram d = make_diagram(
        "+", {{T(TileKind::cup_right, 0)}, {T(TileKind::cap_left, 1)}});
    FormalDiagram f = macro_expand(d);
    REQUIRE(f.terms.size() == 1);
    CHECK(f.terms[0].first == RatFun::one());
}

TEST_CASE("standard identity leaf counts") {
    // leaves of the identity on the word w over the simple (n, m) are the
    // label chains; the empty word has exactly one leaf
    StdState s0 = std_identity("", 3, 1);
    CHECK(s0.leaves.size() == 1);
    // one induction step splits into at most two labels
    StdState s1 = std_identity("+", 3, 1);
    CHECK(s1.leaves.size() == 2); // labels 0 and 2 at level 4
    StdState s2 = std_identity("+", 3, 3);
    CHECK(s2.leaves.size() == 2); // labels 2 and 4
    StdState s3 = std_identity("+", 0, 0);
    CHECK(s3.leaves.size() == 1); // only label 1 at level 1
    StdState s4 = std_identity("-", 1, 1);
    CHECK(s4.leaves.size() == 1);
}

TEST_CASE("zigzag relations pin the cup/cap normalizations") {
    for (const char *name : {"zigzag-a", "zigzag-b", "zigzag-c", "zigzag-d"}) {
        RelationReport r = verify_relation(name, 3, 1);
        INFO(name);
        CHECK(r.pass);
    }
}

TEST_CASE("circle evaluations") {
    for (const char *name :
         {"circle-right-plain", "circle-left-plain", "circle-right-bubble",
          "circle-left-bubble"}) {
        RelationReport r = verify_relation(name, 3, 1);
        INFO(name);
        for (const auto &inst : r.instances) {
            INFO("n=" << inst.n << " m=" << inst.m << " " << inst.detail);
            CHECK(inst.pass);
        }
    }
}

TEST_CASE("closed scalars: clockwise circle with plain bubble") {
    // circle around a bubble of label 0 at level n: [n]/[n+1] on block n
    for (int n = 1; n <= 3; ++n) {
        FormalDiagram f;
        f.source = "";
        f.target = "";
        f.terms.push_back(
            {RatFun::one(),
             make_diagram("", {{T(TileKind::cup_left, 0)},
                               {T(TileKind::bubble, 1, 0)},
                               {T(TileKind::cap_left, 0)}})});
        auto sc = closed_scalar(f, n);
        bool found_top = false;
        for (const auto &[m, s] : sc)
            if (m == n) {
                found_top = true;
                CHECK(s == qint(n) / qint(n + 1));
            }
        CHECK(found_top);
    }
}

TEST_CASE("bridge between evaluators at small levels") {
    for (int n = 0; n <= 3; ++n) {
        FormalDiagram zig;
        zig.source = "+";
        zig.target = "+";
        zig.terms.push_back(
            {RatFun::one(),
             make_diagram("+", {{T(TileKind::cup_right, 0)},
                                {T(TileKind::cap_left, 1)}})});
        CHECK(evaluator_bridge_check(zig, n));

        FormalDiagram bub;
        bub.source = "+";
        bub.target = "+";
        bub.terms.push_back(
            {RatFun::one(), make_diagram("+", {{T(TileKind::bubble, 1, 0)}})});
        CHECK(evaluator_bridge_check(bub, n));

        if (n <= 2) {
            FormalDiagram cc;
            cc.source = "++";
            cc.target = "++";
            cc.terms.push_back(
                {RatFun::one(),
                 make_diagram("++", {{T(TileKind::cupcap_up, 0)}})});
            CHECK(evaluator_bridge_check(cc, n));
        }
    }
}

TEST_CASE("equivariance and naturality of evaluated components") {
    for (int n = 1; n <= 2; ++n) {
        ModuleRep R = regular_module(n);
        WeylDiagram d = make_diagram(
            "+", {{T(TileKind::cup_right, 0)}, {T(TileKind::cap_left, 1)}});
        NatTransComponent c = eval_diagram(d, R);
        CHECK(equivariance_check(c, R));
        CHECK(naturality_check(d, n, 12345u));

        WeylDiagram e2 = make_diagram("++", {{T(TileKind::cupcap_up, 0)}});
        NatTransComponent ce = eval_diagram(e2, R);
        CHECK(equivariance_check(ce, R));
        CHECK(naturality_check(e2, n, 777u));
    }
}

TEST_CASE("full relation suite on simples, honest cross-check at low level") {
    auto reports = verify_all(4, 2);
    for (const auto &r : reports) {
        INFO(r.relation);
        for (const auto &inst : r.instances) {
            INFO("n=" << inst.n << " m=" << inst.m << " " << inst.detail);
            CHECK(inst.pass);
        }
    }
}

TEST_CASE("restriction-induction splits as induction-restriction plus base") {
    RelationReport r = weyliso_split_check(4);
    for (const auto &inst : r.instances) {
        INFO(inst.relation << " n=" << inst.n << " m=" << inst.m << " "
                           << inst.detail);
        CHECK(inst.pass);
    }
}

TEST_CASE("direct bubbles agree with their macro expansions") {
    RelationReport r = bubble_consistency_check(2, 4);
    for (const auto &inst : r.instances) {
        INFO("n=" << inst.n << " m=" << inst.m << " " << inst.detail);
        CHECK(inst.pass);
    }
}
