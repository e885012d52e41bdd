#include <doctest.h>

#include "ssp/rng.hpp"

using ssp::RngStream;

TEST_CASE("identical (seed, stream, call sequence) reproduces samples") {
    RngStream a(42, "env");
    RngStream b(42, "env");
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different seeds and labels give different sequences") {
    RngStream a(42, "env");
    RngStream b(43, "env");
    RngStream c(42, "learner");
    int equal_ab = 0, equal_ac = 0;
    for (int i = 0; i < 64; ++i) {
        const auto va = a.next_u64();
        if (va == b.next_u64()) ++equal_ab;
        if (va == c.next_u64()) ++equal_ac;
    }
    CHECK(equal_ab == 0);
    CHECK(equal_ac == 0);
}

TEST_CASE("derived streams are independent of the parent's position") {
    RngStream parent(7, "env");
    RngStream child_early = parent.derive("sub");
    for (int i = 0; i < 100; ++i) parent.next_u64();
    RngStream child_late = parent.derive("sub");
    for (int i = 0; i < 100; ++i) CHECK(child_early.next_u64() == child_late.next_u64());
}

TEST_CASE("uniform stays in [0,1) and is roughly centered") {
    RngStream rng(123, "env");
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    // mean of n uniforms: 0.5 +/- 4 sigma, sigma = 1/sqrt(12 n)
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("uniform_int covers the range") {
    RngStream rng(5, "env");
    int counts[4] = {0, 0, 0, 0};
    for (int i = 0; i < 40000; ++i) ++counts[rng.uniform_int(4)];
    for (int c : counts) CHECK(c > 9000);
}
