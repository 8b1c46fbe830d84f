#include <doctest.h>

#include "test_helpers.hpp"

#include "msr/approx.hpp"
#include "msr/exact.hpp"
#include "msr/io.hpp"
#include "msr/lp.hpp"

#include <functional>

using namespace msr;

namespace {

LpProblem make_lp(int m, int n, std::initializer_list<double> a,
                  std::initializer_list<double> b, std::initializer_list<double> c) {
    LpProblem lp;
    lp.A = Eigen::MatrixXd(m, n);
    int idx = 0;
    for (double v : a) lp.A(idx / n, idx % n) = v, ++idx;
    lp.b = Eigen::VectorXd(m);
    idx = 0;
    for (double v : b) lp.b(idx++) = v;
    lp.c = Eigen::VectorXd(n);
    idx = 0;
    for (double v : c) lp.c(idx++) = v;
    return lp;
}

}  // namespace

TEST_CASE("trivial linear programs") {
    auto one = solve_lp(make_lp(1, 1, {1}, {1}, {1}));
    CHECK(one.status == LpStatus::optimal);
    CHECK(one.value == doctest::Approx(1.0));
    CHECK(one.x(0) == doctest::Approx(1.0));

    auto pick = solve_lp(make_lp(1, 2, {1, 1}, {1}, {2, 3}));
    CHECK(pick.status == LpStatus::optimal);
    CHECK(pick.value == doctest::Approx(3.0));
    CHECK(pick.x(1) == doctest::Approx(1.0));

    auto unbounded = solve_lp(make_lp(1, 2, {1, 0}, {1}, {0, 1}));
    CHECK(unbounded.status == LpStatus::unbounded);

    CHECK_THROWS_AS(solve_lp(make_lp(1, 1, {1}, {-1}, {1})), input_error);
}

TEST_CASE("relaxation of the worked example dominates its optimum") {
    Instance intro = msrtest::intro_instance();
    auto candidates = enumerate_candidates(intro, 3);
    auto lp = build_relaxation(candidates, intro);
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::optimal);
    CHECK(lp_feasible(lp, sol.x));
    const int opt = solve_exact(intro).length_value;
    CHECK(opt == 8);
    CHECK(sol.value >= opt - 1e-6);
}

TEST_CASE("weak duality against brute-forced basic duals") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        Rng rng(seed * 13);
        const int m = 1 + rng.below(3);
        const int n = 1 + rng.below(3);
        LpProblem lp;
        lp.A = Eigen::MatrixXd(m, n);
        lp.b = Eigen::VectorXd(m);
        lp.c = Eigen::VectorXd(n);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) lp.A(i, j) = rng.below(4);
        for (int i = 0; i < m; ++i) lp.b(i) = 1 + rng.below(5);
        for (int j = 0; j < n; ++j) lp.c(j) = rng.below(5);

        auto primal = solve_lp(lp);
        if (primal.status != LpStatus::optimal) continue;
        CHECK(lp_feasible(lp, primal.x));
        CHECK(primal.value == doctest::Approx(lp.c.dot(primal.x)).epsilon(1e-7));

        // Dual: min b.y, A^T y >= c, y >= 0.  Basic candidates come from
        // solving all m-subsets of the m + n potentially active constraints.
        const int total = m + n;
        std::vector<int> pick(m);
        std::function<void(int, int)> enumerate = [&](int start, int depth) {
            if (depth == m) {
                Eigen::MatrixXd M(m, m);
                Eigen::VectorXd rhs(m);
                for (int r = 0; r < m; ++r) {
                    const int cidx = pick[r];
                    if (cidx < n) {
                        for (int i = 0; i < m; ++i) M(r, i) = lp.A(i, cidx);
                        rhs(r) = lp.c(cidx);
                    } else {
                        for (int i = 0; i < m; ++i) M(r, i) = 0.0;
                        M(r, cidx - n) = 1.0;
                        rhs(r) = 0.0;
                    }
                }
                Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
                if (!lu.isInvertible()) return;
                Eigen::VectorXd y = lu.solve(rhs);
                if ((y.array() < -1e-7).any()) return;
                if (((lp.A.transpose() * y - lp.c).array() < -1e-7).any()) return;
                CHECK(primal.value <= lp.b.dot(y) + 1e-6);
                return;
            }
            for (int v = start; v < total; ++v) {
                pick[depth] = v;
                enumerate(v + 1, depth + 1);
            }
        };
        enumerate(0, 0);
    }
}

TEST_CASE("positive scaling of the objective") {
    LpProblem lp = make_lp(2, 2, {1, 2, 2, 1}, {4, 4}, {3, 1});
    auto base = solve_lp(lp);
    REQUIRE(base.status == LpStatus::optimal);
    LpProblem scaled = lp;
    scaled.c *= 7.0;
    auto more = solve_lp(scaled);
    REQUIRE(more.status == LpStatus::optimal);
    CHECK(more.value == doctest::Approx(7.0 * base.value).epsilon(1e-9));
    CHECK(lp_feasible(lp, more.x));
    // The returned point stays optimal for the unscaled objective.
    CHECK(lp.c.dot(more.x) == doctest::Approx(base.value).epsilon(1e-9));
}

TEST_CASE("solver determinism") {
    LpProblem lp = make_lp(2, 3, {1, 1, 0, 0, 1, 1}, {2, 2}, {1, 1, 1});
    auto a = solve_lp(lp);
    auto b = solve_lp(lp);
    CHECK(a.value == b.value);
    CHECK(a.x == b.x);
}
