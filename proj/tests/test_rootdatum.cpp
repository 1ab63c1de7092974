// Unit tests for Cartan/root data: validation rules, builtins, pairings.

#include "doctest.h"

#include "coverquant/rootdatum.hpp"

using namespace coverquant;

TEST_CASE("builtin osp(1|2)") {
    RootDatum rd = builtin_datum("osp(1|2)");
    CHECK(rd.rank() == 1);
    CHECK(rd.d(0) == 1);
    CHECK(rd.parity(0) == 1);
    CHECK(validate(rd).empty());
    CHECK(rd.pair_i(0, {3}) == 3);
    CHECK(rd.pair(rd.embed_y[0], rd.embed_x[0]) == 2);  // <i, i'> = 2
    CHECK(rd.tilde({2}) == Coweight{2});
    CHECK(rd.dominant({0}));
    CHECK_FALSE(rd.dominant({-1}));
}

TEST_CASE("builtin osp(1|4)") {
    RootDatum rd = builtin_datum("osp(1|4)");
    CHECK(rd.rank() == 2);
    CHECK(rd.d(0) == 1);
    CHECK(rd.d(1) == 2);
    CHECK(rd.cd.a(0, 1) == -2);
    CHECK(rd.cd.a(1, 0) == -1);
    CHECK(rd.parity(0) == 1);
    CHECK(rd.parity(1) == 0);
    CHECK(validate(rd).empty());
    // pi_{i+j} = pi^{d_1 + d_2} = pi^3 = pi
    CHECK(rd.pi_nu({1, 1}) == PiScalar::pi());
    CHECK(rd.v_nu({1, 1}) == PiScalar::v(3));
    // all i.j even
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(rd.cd.dot[i][j] % 2 == 0);
}

TEST_CASE("unknown builtin rejected") {
    CHECK_THROWS(builtin_datum("sl2"));
}

TEST_CASE("validation catches bar-inconsistency") {
    CartanDatum cd;
    cd.rank = 1;
    cd.dot = {{2}};
    cd.parity = {0};  // d=1 odd but parity even: violates (d)
    auto errs = validate(cd);
    bool found = false;
    for (auto& e : errs) found = found || e.find("(d)") != std::string::npos;
    CHECK(found);
}

TEST_CASE("validation catches anisotropy failure") {
    // odd i with odd a_ij
    CartanDatum cd;
    cd.rank = 2;
    cd.dot = {{2, -1}, {-1, 2}};  // a_12 = -1 odd while both roots odd
    cd.parity = {1, 1};
    auto errs = validate(cd);
    CHECK_FALSE(errs.empty());
}

TEST_CASE("tilde pairing identity <tilde nu, mu'> = nu.mu") {
    for (auto name : {"osp(1|2)", "osp(1|4)"}) {
        RootDatum rd = builtin_datum(name);
        std::vector<NuVec> nus;
        if (rd.rank() == 1)
            nus = {{0}, {1}, {3}};
        else
            nus = {{0, 0}, {1, 0}, {0, 2}, {2, 1}, {1, 3}};
        for (auto& nu : nus)
            for (auto& mu : nus)
                CHECK(rd.pair(rd.tilde(nu), rd.nu_to_x(mu)) == rd.dot_nn(nu, mu));
    }
}
