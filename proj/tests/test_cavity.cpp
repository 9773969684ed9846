#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lhmdecay/cavity.hpp"

using lhm::cplx;
using lhm::HostOptics;
using lhm::MaterialParams;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

HostOptics random_host(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> re(-4.0, 4.0);
    std::uniform_real_distribution<double> im(0.01, 2.01);
    return {{re(rng), im(rng)}, {re(rng), im(rng)}};
}

}  // namespace

TEST(Mie, VacuumHostGivesZero) {
    const HostOptics vac{};
    for (double w : {0.1, 1.0, 3.7}) {
        for (double r : {0.05, 0.5, 10.0}) {
            for (int n = 1; n <= 30; n += 7) {
                const auto c = lhm::mie_coefficients(n, w, r, vac);
                EXPECT_EQ(c.cm, cplx(0.0, 0.0));
                EXPECT_EQ(c.cn, cplx(0.0, 0.0));
            }
        }
    }
}

TEST(Mie, DipoleTermReproducesClosedForm) {
    const HostOptics host{{-2.0, 0.2}, {-1.2, 0.1}};
    for (double w : {0.3, 0.7, 1.0, 1.4, 2.2}) {
        const auto c = lhm::mie_coefficients(1, w, 0.5, host);
        const double closed = lhm::rate_center(w, 0.5, host).ratio;
        EXPECT_LE(rel(1.0 + c.cn.real(), closed), 1e-8) << "w = " << w;
    }
}

TEST(Mie, ReflectionFallsWithDamping) {
    double previous = INFINITY;
    for (double g : {0.001, 0.01, 0.05}) {
        const auto p = MaterialParams::paper(g);
        const double mag = std::abs(lhm::mie_coefficients(1, 1.05, 10.0, HostOptics::of(p, 1.05)).cn);
        EXPECT_LT(mag, previous);
        previous = mag;
    }
    EXPECT_NEAR(previous, 2.0310, 1e-3);
}

TEST(Mie, BoundedForAbsorbingHosts) {
    std::mt19937_64 rng(29);
    for (int t = 0; t < 100; ++t) {
        const HostOptics h = random_host(rng);
        for (int n = 1; n <= 5; ++n) {
            const auto c = lhm::mie_coefficients(n, 1.0, 2.0, h);
            EXPECT_TRUE(std::isfinite(std::abs(1.0 + c.cn)));
            EXPECT_TRUE(std::isfinite(std::abs(1.0 + c.cm)));
        }
    }
}

TEST(Mie, RejectsBadInput) {
    EXPECT_THROW(lhm::mie_coefficients(0, 1.0, 1.0, HostOptics{}), std::out_of_range);
    EXPECT_THROW(lhm::mie_coefficients(1, 1.0, -1.0, HostOptics{}), std::invalid_argument);
}

TEST(CenterRate, CrossOracleRandomHosts) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> radius(0.05, 20.0);
    std::uniform_real_distribution<double> freq(0.5, 1.5);
    for (int t = 0; t < 100; ++t) {
        const HostOptics h = random_host(rng);
        const double r = radius(rng);
        const double w = freq(rng);
        const lhm::CavityGeometry g{r, 0.0};
        const double series = lhm::rate_radial(w, g, h).ratio;
        const double closed = lhm::rate_center(w, r, h).ratio;
        ASSERT_LE(rel(series, closed), 1e-8) << "t = " << t;
    }
}

TEST(CenterRate, LosslessDielectricAgreesWithSeries) {
    const HostOptics h{2.25, 1.0};
    const auto closed = lhm::rate_center(1.0, 0.05, h);
    const auto series = lhm::rate_radial(1.0, lhm::CavityGeometry{0.05, 0.0}, h);
    EXPECT_EQ(closed.method, lhm::RateMethod::closed_form);
    EXPECT_LE(rel(closed.ratio, series.ratio), 1e-8);
}

TEST(CenterRate, VacuumUsesRegularRoute) {
    const auto r = lhm::rate_center(1.0, 0.3, HostOptics{});
    EXPECT_EQ(r.method, lhm::RateMethod::series);
    EXPECT_NEAR(r.ratio, 1.0, 1e-12);
}

TEST(CenterRate, ImpedanceMatchedLargeCavity) {
    for (cplx e : {cplx(1.5, 0.05), cplx(2.0, 0.3), cplx(-1.0, 0.1)}) {
        const HostOptics h{e, e};
        const double radius = 200.0 / lhm::wavenumber(1.0);
        EXPECT_NEAR(lhm::rate_center(1.0, radius, h).ratio, 1.0, 1e-5);
    }
}

TEST(CenterRate, RequiresCentre) {
    lhm::CavityConfig cfg{1.0, 0.2, lhm::Orientation::radial, MaterialParams::paper(0.01)};
    EXPECT_THROW(lhm::rate_center(1.0, cfg), std::invalid_argument);
}

TEST(SeriesRate, OrientationDegeneracyAtCentre) {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> radius(0.05, 20.0);
    for (int t = 0; t < 20; ++t) {
        const HostOptics h = random_host(rng);
        const lhm::CavityGeometry g{radius(rng), 0.0};
        EXPECT_EQ(lhm::rate_radial(1.0, g, h).ratio, lhm::rate_tangential(1.0, g, h).ratio);
    }
}

TEST(SeriesRate, VacuumIsTransparent) {
    for (double r : {0.05, 0.5, 10.0}) {
        for (double frac : {0.0, 0.4, 0.9}) {
            const lhm::CavityGeometry g{r, frac * r};
            for (double w : {0.5, 1.0, 2.0}) {
                EXPECT_NEAR(lhm::rate_radial(w, g, HostOptics{}).ratio, 1.0, 1e-10);
                EXPECT_NEAR(lhm::rate_tangential(w, g, HostOptics{}).ratio, 1.0, 1e-10);
            }
        }
    }
}

TEST(SeriesRate, OffCentreTangentialConverges) {
    const lhm::CavityConfig cfg{10.0, 4.0, lhm::Orientation::tangential, MaterialParams::paper(0.001)};
    const auto r = lhm::rate_series(1.06, cfg);
    EXPECT_TRUE(r.converged);
    EXPECT_LT(r.terms_used, 300);
    EXPECT_LE(r.truncation_estimate, 1e-10);
    EXPECT_NEAR(r.ratio, 1.15666, 1e-4);
}

TEST(SeriesRate, NonnegativeForAbsorbingHosts) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> frac(0.0, 0.95);
    std::uniform_real_distribution<double> radius(0.05, 5.0);
    for (int t = 0; t < 100; ++t) {
        const HostOptics h = random_host(rng);
        const double r = radius(rng);
        const lhm::CavityGeometry g{r, frac(rng) * r};
        EXPECT_GT(lhm::rate_radial(1.0, g, h).ratio, 0.0);
        EXPECT_GT(lhm::rate_tangential(1.0, g, h).ratio, 0.0);
    }
}

TEST(SeriesRate, SmallDielectricCavityPeak) {
    const auto p = MaterialParams::paper_dielectric(0.001);
    const lhm::CavityConfig cfg{0.05, 0.0, lhm::Orientation::radial, p};
    double best = 0.0;
    double at = 0.0;
    for (double w = 1.10; w <= 1.30; w += 1e-4) {
        const double r = lhm::rate_series(w, cfg).ratio;
        if (r > best) {
            best = r;
            at = w;
        }
    }
    EXPECT_NEAR(at, 1.198, 0.01);
    EXPECT_GT(best, 1e3);
}

TEST(SeriesRate, PeakHeightsFallWithDamping) {
    const auto grid = lhm::uniform_grid(1.03, 1.2741, 2441);
    std::vector<double> r;
    for (double w : grid) {
        r.push_back(lhm::rate_center(w, 10.0, HostOptics::of(MaterialParams::paper_dielectric(0.001), w)).ratio);
    }
    int peaks = 0;
    for (std::size_t k = 1; k + 1 < r.size(); ++k) {
        if (r[k] > r[k - 1] && r[k] > r[k + 1] && r[k] > 1.0) {
            ++peaks;
            const double w = grid[k];
            const double mid = lhm::rate_center(w, 10.0, HostOptics::of(MaterialParams::paper_dielectric(0.01), w)).ratio;
            const double high = lhm::rate_center(w, 10.0, HostOptics::of(MaterialParams::paper_dielectric(0.05), w)).ratio;
            EXPECT_GT(r[k], mid);
            EXPECT_GT(mid, high);
        }
    }
    EXPECT_GE(peaks, 3);
}

TEST(SeriesRate, RejectsBadInput) {
    const lhm::CavityGeometry outside{1.0, 1.0};
    EXPECT_THROW(lhm::rate_radial(1.0, outside, HostOptics{}), std::invalid_argument);
    EXPECT_THROW(lhm::rate_radial(1.0, lhm::CavityGeometry{1.0, 0.2}, HostOptics{}, 0.0),
                 std::invalid_argument);
    EXPECT_THROW(lhm::rate_tangential(-1.0, lhm::CavityGeometry{1.0, 0.2}, HostOptics{}),
                 std::domain_error);
}

TEST(Expansion, VacuumIsTrivial) {
    const auto e = lhm::rate_center_expansion(1.0, 0.05, HostOptics{});
    EXPECT_DOUBLE_EQ(e.leading, 1.0);
    EXPECT_EQ(e.term_r3, 0.0);
    EXPECT_EQ(e.term_r1, 0.0);
    EXPECT_DOUBLE_EQ(e.sum, 1.0);
}

TEST(Expansion, LosslessReducesToLocalFieldFactor) {
    const HostOptics h{2.25, 1.44};
    const auto e = lhm::rate_center_expansion(1.0, 0.05, h);
    const double lf = 3.0 * 2.25 / (1.0 + 4.5);
    EXPECT_NEAR(e.leading, lf * lf * 1.44 * 1.8, 1e-13);
    EXPECT_EQ(e.term_r3, 0.0);
    EXPECT_NEAR(e.term_r1, 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(e.sum, e.leading);
}

TEST(Expansion, FirstOrderRemainder) {
    const HostOptics h{{2.0, 0.5}, {1.3, 0.1}};
    std::vector<double> errs;
    for (double r : {0.02, 0.01, 0.005}) {
        const double exact = lhm::rate_center(1.0, r, h).ratio;
        // absolute: the exact rate itself grows like R^-3
        errs.push_back(std::abs(lhm::rate_center_expansion(1.0, r, h).sum - exact));
    }
    EXPECT_NEAR(errs[0] / errs[1], 2.10, 0.02);
    EXPECT_NEAR(errs[1] / errs[2], 2.07, 0.02);
}

TEST(Expansion, PoleAndRangeErrors) {
    EXPECT_THROW(lhm::rate_center_expansion(1.0, 0.05, HostOptics{{-0.5, 0.0}, 1.0}),
                 lhm::ExpansionPoleError);
    EXPECT_THROW(lhm::rate_center_expansion(1.0, 1.0, HostOptics{}), std::domain_error);
}

TEST(BulkLossless, Examples) {
    EXPECT_EQ(lhm::rate_bulk_lossless(4.0, 1.0), 2.0);
    EXPECT_EQ(lhm::rate_bulk_lossless(1.0, -1.0), 0.0);
    EXPECT_EQ(lhm::rate_bulk_lossless(-1.0, -1.0), 1.0);
    EXPECT_EQ(lhm::rate_bulk_lossless(-1.0, 4.0), 0.0);
}

TEST(SmallCavity, PurelyDielectric) {
    EXPECT_EQ(lhm::rate_small_cavity_absorptive(1.0, 0.01, HostOptics{2.0, {1.5, 0.3}}).rate, 0.0);
    const cplx eps(2.0, 1.0);
    const double a = lhm::rate_small_cavity_absorptive(1.0, 0.01, HostOptics{eps, 1.0}).rate;
    for (cplx mu : {cplx(-3.0, 0.2), cplx(0.5, 2.0), cplx(7.0, 0.0)}) {
        EXPECT_EQ(lhm::rate_small_cavity_absorptive(1.0, 0.01, HostOptics{eps, mu}).rate, a);
    }
    EXPECT_EQ(a, lhm::rate_center_expansion(1.0, 0.01, HostOptics{eps, 1.0}).term_r3);
    const auto s = lhm::rate_small_cavity_absorptive(1.0, 0.01, HostOptics{eps, 1.0});
    EXPECT_GT(s.dominance, 0.9);
}
