#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hexrelay/capacity.hpp"
#include "hexrelay/rng.hpp"

using namespace hexrelay;

namespace {
constexpr double W = 1.0e7;
const LinkAdaptation kLa{};

SinrSample mk(NodeRef::Kind kind, int cell, int type, double gamma) {
    return {{0.0, 0.0}, {kind, cell, type}, gamma, 0.1, Backend::Exact};
}
}  // namespace

TEST_CASE("spectral efficiency branches") {
    CHECK(spectral_efficiency(dbm_to_linear(-11.0), kLa, W) == 0.0);
    CHECK(spectral_efficiency(1.0, kLa, W) == doctest::Approx(0.6 * W).epsilon(1e-12));
    CHECK(spectral_efficiency(dbm_to_linear(30.0), kLa, W) == doctest::Approx(4.4 * W));

    // the -10 dB boundary belongs to the middle branch
    CHECK(spectral_efficiency(0.1, kLa, W) ==
          doctest::Approx(0.6 * W * std::log2(1.1)).epsilon(1e-12));

    // continuity at the 22 dB cap within 0.01*W
    const double at_cap = spectral_efficiency(dbm_to_linear(22.0), kLa, W);
    CHECK(std::abs(at_cap - 4.4 * W) < 0.01 * W);

    // monotone non-decreasing
    Rng rng(1);
    for (int t = 0; t < 500; ++t) {
        const double a = rng.uniform(0.0, 400.0);
        const double b = a + rng.uniform(0.0, 100.0);
        CHECK(spectral_efficiency(a, kLa, W) <= spectral_efficiency(b, kLa, W));
    }
}

TEST_CASE("node capacities") {
    SUBCASE("no relays") {
        std::vector<SinrSample> s{mk(NodeRef::Kind::ENB, 0, 0, 1.0),
                                  mk(NodeRef::Kind::ENB, 0, 0, 3.0),
                                  mk(NodeRef::Kind::ENB, 1, 0, 2.0)};  // excluded
        const auto caps = node_capacities(s, 0, kLa, W);
        CHECK(caps.c_rn.empty());
        CHECK(caps.p_enb == doctest::Approx(2.0 / 3.0));
        CHECK(caps.excluded_fraction == doctest::Approx(1.0 / 3.0));
        CHECK(caps.p_enb + caps.excluded_fraction == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("uniform field: area-weighted capacities recombine to c(gamma)") {
        const double g = 5.0;
        std::vector<SinrSample> s{
            mk(NodeRef::Kind::ENB, 0, 0, g),   mk(NodeRef::Kind::ENB, 0, 0, g),
            mk(NodeRef::Kind::Relay, 0, 1, g), mk(NodeRef::Kind::Relay, 2, 1, g),
            mk(NodeRef::Kind::Relay, 0, 2, g), mk(NodeRef::Kind::Relay, 0, 2, g)};
        const auto caps = node_capacities(s, 2, kLa, W);
        const double c = spectral_efficiency(g, kLa, W);
        // every node sees the same per-area capacity
        CHECK(caps.c_enb == doctest::Approx(c));
        CHECK(caps.c_rn[0] == doctest::Approx(c));
        CHECK(caps.c_rn[1] == doctest::Approx(c));
        // and the serving-fraction-weighted recombination gives c back
        double mix = caps.p_enb * caps.c_enb;
        for (std::size_t i = 0; i < caps.c_rn.size(); ++i) mix += caps.p_rn[i] * caps.c_rn[i];
        CHECK(mix == doctest::Approx(c).epsilon(1e-12));
    }

    SUBCASE("a relay that serves nothing has zero capacity") {
        std::vector<SinrSample> s{mk(NodeRef::Kind::ENB, 0, 0, 1.0),
                                  mk(NodeRef::Kind::Relay, 0, 2, 1.0)};
        const auto caps = node_capacities(s, 2, kLa, W);
        CHECK(caps.c_rn[0] == 0.0);
        CHECK(caps.p_rn[0] == 0.0);
        CHECK(caps.c_rn[1] > 0.0);
    }

    SUBCASE("fractions sum to one") {
        Rng rng(2);
        std::vector<SinrSample> s;
        for (int t = 0; t < 1000; ++t) {
            const int pick = static_cast<int>(rng.uniform_int(4));
            if (pick == 0)
                s.push_back(mk(NodeRef::Kind::ENB, 0, 0, rng.uniform(0.1, 100.0)));
            else if (pick == 1)
                s.push_back(mk(NodeRef::Kind::ENB, 3, 0, rng.uniform(0.1, 100.0)));
            else
                s.push_back(mk(NodeRef::Kind::Relay, 0, pick - 1, rng.uniform(0.1, 100.0)));
        }
        const auto caps = node_capacities(s, 3, kLa, W);
        double total = caps.p_enb + caps.excluded_fraction;
        for (double p : caps.p_rn) total += p;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("cell capacity") {
    const std::vector<double> rn{1.0, 3.0};
    CHECK(cell_capacity(2.0, rn, 1.0) == 0.0);
    CHECK(cell_capacity(2.0, rn, 0.5) == doctest::Approx(3.0));
    CHECK(cell_capacity(5.0, {}, 0.0) == doctest::Approx(5.0));

    // linear in (1 - tau)
    Rng rng(3);
    for (int t = 0; t < 100; ++t) {
        const double tau = rng.uniform(0.0, 1.0);
        CHECK(cell_capacity(2.0, rn, tau) ==
              doctest::Approx((1.0 - tau) * 6.0).epsilon(1e-12));
    }
}

TEST_CASE("tau star") {
    CHECK(tau_star(2.0, 2.0, {}) == doctest::Approx(0.0));
    const std::vector<double> rn{1.0, 1.0};
    CHECK(tau_star(2.0, 2.0, rn) == doctest::Approx(0.5));
    CHECK(tau_star(2.0, 1.0, {}) == doctest::Approx(-1.0));  // relays never help
    CHECK_THROWS_AS(tau_star(2.0, 0.0, {}), std::domain_error);

    // strictly increasing in the relay total
    double prev = -10.0;
    for (double s = 0.0; s < 5.0; s += 0.25) {
        const std::vector<double> v{s};
        const double ts = tau_star(2.0, 2.0, v);
        CHECK(ts > prev);
        prev = ts;
    }
}

TEST_CASE("tau backhaul") {
    CHECK(tau_backhaul({}, 4.4) == 0.0);
    const std::vector<double> rn{2.2, 2.2};
    CHECK(tau_backhaul(rn, 4.4) == doctest::Approx(0.5));
    CHECK_THROWS_AS(tau_backhaul(rn, 0.0), std::domain_error);

    SUBCASE("fixed point holds to 1e-12") {
        Rng rng(4);
        for (int t = 0; t < 500; ++t) {
            std::vector<double> v;
            const int n = 1 + static_cast<int>(rng.uniform_int(6));
            double sum = 0.0;
            for (int i = 0; i < n; ++i) {
                v.push_back(rng.uniform(0.0, 10.0));
                sum += v.back();
            }
            const double cb = rng.uniform(0.5, 10.0);
            const double tb = tau_backhaul(v, cb);
            CHECK(tb >= 0.0);
            CHECK(tb < 1.0);
            CHECK(std::abs(tb - sum * (1.0 - tb) / cb) <= 1e-12);
        }
    }

    SUBCASE("increasing in each relay capacity") {
        std::vector<double> v{1.0, 2.0};
        const double base = tau_backhaul(v, 4.4);
        v[1] += 0.5;
        CHECK(tau_backhaul(v, 4.4) > base);
    }
}

TEST_CASE("per-UE throughput") {
    CHECK(per_ue_throughput(3.0, 1.0, 5) == 0.0);
    CHECK(per_ue_throughput(3.0, 0.25, 1) == doctest::Approx(2.25));
    CHECK(per_ue_throughput(3.0, 0.25, 10) ==
          doctest::Approx(per_ue_throughput(3.0, 0.25, 5) / 2.0));
    CHECK_THROWS_AS(per_ue_throughput(3.0, 0.0, 0), std::invalid_argument);
}

TEST_CASE("compensated summation is order-insensitive") {
    Rng rng(5);
    std::vector<double> xs;
    for (int i = 0; i < 100000; ++i)
        xs.push_back(rng.uniform(0.0, 1.0) * std::pow(10.0, rng.uniform(-8.0, 8.0)));

    KahanSum fwd;
    for (double x : xs) fwd.add(x);
    KahanSum rev;
    for (auto it = xs.rbegin(); it != xs.rend(); ++it) rev.add(*it);
    CHECK(fwd.value() == doctest::Approx(rev.value()).epsilon(1e-12));
}
