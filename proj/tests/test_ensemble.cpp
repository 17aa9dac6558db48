#include <cmath>

#include "doctest.h"
#include "wkelab/ensemble.hpp"
#include "wkelab/errors.hpp"

using namespace wkl;

TEST_CASE("draws depend only on (seed, mode, sample)") {
    const auto t = TorusSpec::make(2, 4.0);
    const ModeSet ms(t, 1.0);
    const auto a = sample_eta(NoiseLaw::Gaussian, 5, ms, 3);
    for (std::size_t i = 0; i < ms.size(); ++i)
        CHECK(a[i] == draw_eta(NoiseLaw::Gaussian, 5, mode_key(ms[i]), 3));
    CHECK(a != sample_eta(NoiseLaw::Gaussian, 6, ms, 3));
    CHECK(a != sample_eta(NoiseLaw::Gaussian, 5, ms, 4));
}

TEST_CASE("noise moments") {
    EnsembleStats st(3);
    for (std::uint64_t s = 0; s < 200000; ++s) {
        const cplx e = draw_eta(NoiseLaw::Gaussian, 1, 42, s);
        const double r[3] = {std::norm(e), std::norm(e) * std::norm(e), e.real()};
        st.add(r);
    }
    CHECK(std::abs(st.mean(0) - 1.0) < 4 * st.stderr_of(0));
    CHECK(std::abs(st.mean(1) - 2.0) < 4 * st.stderr_of(1));
    CHECK(std::abs(st.mean(2)) < 4 * st.stderr_of(2));
    for (std::uint64_t s = 0; s < 100; ++s)
        CHECK(std::abs(draw_eta(NoiseLaw::Circle, 1, 42, s)) == doctest::Approx(1.0));
}

TEST_CASE("welford and chan merge") {
    std::vector<double> xs;
    for (int i = 0; i < 101; ++i) xs.push_back(std::sin(i * 1.3) * 10 + i * 0.01);
    EnsembleStats all(1), a(1), b(1);
    for (int i = 0; i < 101; ++i) {
        all.add(&xs[i]);
        (i < 40 ? a : b).add(&xs[i]);
    }
    a.merge(b);
    double m = 0, v = 0;
    for (double x : xs) m += x;
    m /= xs.size();
    for (double x : xs) v += (x - m) * (x - m);
    v /= xs.size() - 1;
    CHECK(all.mean(0) == doctest::Approx(m));
    CHECK(all.variance(0) == doctest::Approx(v));
    CHECK(a.mean(0) == doctest::Approx(m));
    CHECK(a.variance(0) == doctest::Approx(v));
    CHECK(a.count() == 101);
}

TEST_CASE("well prepared data") {
    const auto t = TorusSpec::make(2, 4.0);
    auto ms = std::make_shared<const ModeSet>(t, 1.0);
    const auto p = Profile::gaussian(2.0, 0.5);
    std::vector<cplx> eta(ms->size(), cplx(0, 1));
    const auto f = well_prepared_field(p, eta, ms);
    for (std::size_t i = 0; i < ms->size(); ++i)
        CHECK(std::norm(f.a[i]) == doctest::Approx(p.at((*ms)[i], t)));
    Profile bad;
    bad.kind = Profile::Kind::Custom;
    bad.custom = [](const double*, int) { return -1.0; };
    CHECK_THROWS_AS(well_prepared_field(bad, eta, ms), ValidationError);
    CHECK(Profile::gaussian(1, 1).truncation_residual(t) == doctest::Approx(std::exp(-36.0)));
}

TEST_CASE("chaos tail check") {
    // F = sum a_k eta_k: M is sum |a_k|^2 (only the empty pairing exists).
    const int K = 6;
    std::vector<cplx> a(K);
    for (int k = 0; k < K; ++k) a[k] = 1.0 / (k + 1);
    const auto rep = chaos_tail_check(a, K, {1}, NoiseLaw::Gaussian, 20000, 3, {0.5, 1, 2, 3});
    double M = 0;
    for (auto z : a) M += std::norm(z);
    CHECK(rep.M == doctest::Approx(M));
    CHECK(rep.monotone);
    // |F|^2 / M is exponential with mean 1 for complex Gaussian F.
    CHECK(rep.exceedance[1] == doctest::Approx(std::exp(-1.0)).epsilon(0.05));

    // n = 2 with opposite signs: the diagonal pairing contributes (sum_k |a_kk|)^2.
    std::vector<cplx> b(K * K, 0.0);
    for (int k = 0; k < K; ++k) b[k * K + k] = 1.0;
    const auto r2 = chaos_tail_check(b, K, {1, -1}, NoiseLaw::Circle, 100, 3, {1.0});
    CHECK(r2.M == doctest::Approx(K + K * K));
    CHECK_THROWS_AS(chaos_tail_check(b, K, {1}, NoiseLaw::Circle, 10, 1, {}), ValidationError);
    CHECK_THROWS_AS(chaos_tail_check(std::vector<cplx>(1, 1.0), 1, std::vector<int>(9, 1),
                                     NoiseLaw::Circle, 10, 1, {}),
                    ValidationError);
}
