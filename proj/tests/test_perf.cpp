#include <doctest.h>

#include <cmath>
#include <vector>

#include "rissa/error.hpp"
#include "rissa/perf.hpp"
#include "support.hpp"

using namespace rissa;
using rissa::testing::rel_err;

namespace {

double db(double v) { return std::pow(10.0, v / 10.0); }

SystemParams setting(int n, double p_db, double q_db, double lambda_db) {
    SystemParams s;
    s.n_elements = n;
    s.p = db(p_db);
    s.q = db(q_db);
    s.lambda = db(lambda_db);
    return s;
}

// Operating points of the shipped outage, capacity and BER sweeps.
std::vector<SystemParams> operating_points() {
    return {
        setting(16, 0, 0, -5),    setting(32, 10, 0, -5),   setting(16, 20, 0, -5),
        setting(16, 10, -10, 0),  setting(32, 30, -10, 0),  setting(64, 0, -10, 0),
        setting(16, 10, -20, 0),  setting(32, 10, 0, 0),    setting(64, 10, 10, 0),
        setting(8, 10, -5, 0),    setting(16, -20, -30, -5), setting(32, 0, -30, -5),
        setting(64, 10, -30, -5),
    };
}

}  // namespace

TEST_CASE("conditional BER identities") {
    const auto bpsk = modulation("bpsk");
    CHECK(ber_conditional(bpsk, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    double prev = 0.5;
    for (int i = 1; i <= 10; ++i) {
        const double rho = 0.3 * i * i;
        const double got = ber_conditional(bpsk, rho);
        CHECK(rel_err(got, 0.5 * std::erfc(std::sqrt(rho))) < 1e-10);
        CHECK(rel_err(ber_conditional(modulation("bfsk"), rho), 0.5 * std::erfc(std::sqrt(rho / 2))) < 1e-10);
        CHECK(rel_err(ber_conditional(modulation("dpsk"), rho), 0.5 * std::exp(-rho)) < 1e-12);
        CHECK(rel_err(ber_conditional(modulation("ncbfsk"), rho), 0.5 * std::exp(-rho / 2)) < 1e-12);
        CHECK(got < prev);
        CHECK(got > 0.0);
        prev = got;
    }
    CHECK_THROWS_AS(modulation("qpsk"), DomainError);
    CHECK_THROWS_AS(ber_conditional(bpsk, -1.0), DomainError);
    CHECK_THROWS_AS(ber_conditional(Modulation{0.0, 1.0, "bad"}, 1.0), DomainError);
}

TEST_CASE("mode names round-trip") {
    for (Mode m : {Mode::exact, Mode::asymptotic, Mode::asymptotic_infinite_p, Mode::oracle}) {
        CHECK(parse_mode(to_string(m)) == m);
    }
    CHECK_THROWS_AS(parse_mode("mc"), DomainError);
}

TEST_CASE("outage exact agrees with the channel-gain integral") {
    for (const auto& s : operating_points()) {
        const SnrDistribution d(s);
        for (double g : {db(0), db(10), db(20)}) {
            const auto e = outage(d, g, Mode::exact);
            const auto o = outage(d, g, Mode::oracle);
            INFO("N=" << s.n_elements << " P=" << s.p << " Q=" << s.q << " gth=" << g);
            CHECK(std::abs(e.value - o.value) < 1e-9);
            CHECK(e.value >= -1e-12);
            CHECK(e.value <= 1.0 + 1e-12);
            CHECK(e.error_estimate >= 0.0);
        }
    }
}

TEST_CASE("capacity and BER: exact vs quadrature oracles") {
    const auto bpsk = modulation("bpsk");
    for (const auto& s : operating_points()) {
        const SnrDistribution d(s);
        INFO("N=" << s.n_elements << " P=" << s.p << " Q=" << s.q << " lambda=" << s.lambda);
        const auto ce = capacity(d, Mode::exact);
        const auto co = capacity(d, Mode::oracle);
        CHECK(rel_err(ce.value, co.value) < 1e-5);
        const auto be = avg_ber(d, bpsk, Mode::exact);
        const auto bo = avg_ber(d, bpsk, Mode::oracle);
        INFO("ber exact " << be.value << " oracle " << bo.value);
        CHECK(rel_err(be.value, bo.value) < 1e-5);
        CHECK(be.value > 0.0);
        CHECK(be.value <= 0.5);
    }
}

TEST_CASE("exact = asymptotic + peak-power term") {
    const auto d = SnrDistribution(setting(32, 10, -10, 0));
    const auto dec = capacity_terms(d);
    CHECK(std::abs(capacity(d, Mode::exact).value - (capacity(d, Mode::asymptotic).value + dec.peak)) < 1e-9);
    const auto b = ber_terms(d, modulation("dpsk"));
    CHECK(std::abs(avg_ber(d, modulation("dpsk"), Mode::exact).value -
                   (avg_ber(d, modulation("dpsk"), Mode::asymptotic).value + b.peak)) < 1e-9);
    const auto o = outage_terms(d, 10.0);
    CHECK(std::abs(outage(d, 10.0, Mode::exact).value - (outage(d, 10.0, Mode::asymptotic).value + o.peak)) < 1e-9);
}

TEST_CASE("limits") {
    const SnrDistribution d(setting(16, 10, 0, -5));
    CHECK(outage(d, 1e-6, Mode::exact).value < 1e-12);
    CHECK_THROWS_AS(outage(d, 0.0, Mode::exact), DomainError);
    const SnrDistribution tiny(setting(16, -80, 0, -5));
    CHECK(capacity(tiny, Mode::exact).value < 1e-4);
    CHECK(avg_ber(tiny, modulation("bpsk"), Mode::exact).value > 0.49);
}

TEST_CASE("asymptotic forms approach the exact values as P lambda / Q grows") {
    const auto bpsk = modulation("bpsk");
    for (double q_db : {0.0, -10.0}) {
        double gap_o = 1.0;
        double gap_c = 1e9;
        double gap_b = 1.0;
        for (double p_db : {0.0, 10.0, 20.0, 30.0, 40.0}) {
            const SnrDistribution d(setting(16, p_db, q_db, -5));
            const double go = std::abs(outage(d, 10.0, Mode::exact).value - outage(d, 10.0, Mode::asymptotic).value);
            const double gc = std::abs(capacity(d, Mode::exact).value - capacity(d, Mode::asymptotic).value);
            const double gb = std::abs(avg_ber(d, bpsk, Mode::exact).value - avg_ber(d, bpsk, Mode::asymptotic).value);
            INFO("P_dB=" << p_db);
            CHECK(go <= gap_o);
            CHECK(gc <= gap_c);
            CHECK(gb <= gap_b);
            gap_o = go;
            gap_c = gc;
            gap_b = gb;
        }
        CHECK(gap_c < 1e-2);
    }
    // Ratio 100 beats ratio 10.
    const auto at = [](double ratio) {
        auto s = setting(4, 0, -20, 0);
        s.p = ratio * s.q / s.lambda;
        const SnrDistribution d(s);
        return std::abs(outage(d, 10.0, Mode::exact).value - outage(d, 10.0, Mode::asymptotic).value);
    };
    CHECK(at(10.0) > 1e-3);
    CHECK(at(100.0) < at(10.0));
}

TEST_CASE("infinite-P forms are the x -> 0 limit of the asymptotic forms") {
    const auto bpsk = modulation("bpsk");
    const SnrDistribution d(setting(16, 120, -10, 0));
    CHECK(d.x() < 1e-10);
    CHECK(std::abs(outage(d, 10.0, Mode::asymptotic).value - outage(d, 10.0, Mode::asymptotic_infinite_p).value) < 1e-6);
    CHECK(rel_err(capacity(d, Mode::asymptotic).value, capacity(d, Mode::asymptotic_infinite_p).value) < 1e-6);
    CHECK(rel_err(avg_ber(d, bpsk, Mode::asymptotic).value, avg_ber(d, bpsk, Mode::asymptotic_infinite_p).value) <
          1e-6);
}

TEST_CASE("monotonicity in P, Q and N") {
    const auto bpsk = modulation("bpsk");
    auto check_ladder = [&](auto make) {
        double o_prev = 2.0;
        double b_prev = 1.0;
        double c_prev = -1.0;
        for (int i = 0; i < 5; ++i) {
            const SnrDistribution d(make(i));
            const double o = outage(d, 10.0, Mode::exact).value;
            const double c = capacity(d, Mode::exact).value;
            const double b = avg_ber(d, bpsk, Mode::exact).value;
            CHECK(o <= o_prev + 1e-12);
            CHECK(b <= b_prev + 1e-12);
            CHECK(c >= c_prev - 1e-12);
            o_prev = o;
            b_prev = b;
            c_prev = c;
        }
    };
    check_ladder([](int i) { return setting(16, -10.0 + 10.0 * i, 0, -5); });
    check_ladder([](int i) { return setting(16, 10, -20.0 + 10.0 * i, 0); });
    check_ladder([](int i) { return setting(4 << i, 0, -10, 0); });
}

TEST_CASE("peak-power saturation between 30 and 40 dB") {
    for (const auto& [q_db, l_db] : {std::pair{0.0, -5.0}, {-10.0, 0.0}}) {
        for (int n : {16, 32}) {
            const SnrDistribution a(setting(n, 30, q_db, l_db));
            const SnrDistribution b(setting(n, 40, q_db, l_db));
            const double oa = outage(a, 10.0, Mode::exact).value;
            const double ob = outage(b, 10.0, Mode::exact).value;
            CHECK(std::abs(oa - ob) <= 0.01 * std::max(oa, ob) + 1e-12);
            CHECK(rel_err(capacity(b, Mode::exact).value, capacity(a, Mode::exact).value) < 0.01);
        }
    }
}
