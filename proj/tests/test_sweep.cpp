#include "util.hpp"

#include "specmat/canonical.hpp"
#include "specmat/errors.hpp"
#include "specmat/sweep.hpp"

#include <doctest.h>

#include <algorithm>

using namespace specmat;
using namespace testutil;

namespace {

SweepSpec fig2(SweepMethod m = SweepMethod::Chebyshev)
{
    SweepSpec s;
    s.path = PathKind::AlphaList;
    s.a0 = -0.5;
    s.alphas = {{2, 1}, {8, 5}, {4, 3}, {5, 4}, {7, 6}, {9, 8}};
    s.steps = 6;
    s.method = m;
    s.count = 16;
    return s;
}

int count_of(const std::string& s, const std::string& pat)
{
    int n = 0;
    for (size_t p = s.find(pat); p != std::string::npos; p = s.find(pat, p + 1)) ++n;
    return n;
}

} // namespace

TEST_CASE("one-step CSV")
{
    SweepSpec s;
    s.path = PathKind::Segment;
    s.a0 = s.a1 = 3;
    s.d0 = s.d1 = 2;
    s.steps = 2;
    s.count = 6;
    auto recs = run_sweep(s);
    REQUIRE(recs.size() == 2);
    recs.resize(1);
    std::string csv = to_csv(recs);
    CHECK(csv.rfind("step,a,d,region,track,re_lambda2,im_lambda2,multiplicity,residual\n", 0) == 0);
    CHECK(count_of(csv, "\n") == 1 + int(recs[0].eigenvalues.size()));
    CHECK(recs[0].region == RegionTag::R5);
}

TEST_CASE("json round trip")
{
    auto recs = run_sweep(fig2());
    auto back = records_from_json(to_json(recs));
    REQUIRE(back.size() == recs.size());
    CHECK(to_csv(back) == to_csv(recs));
    for (size_t i = 0; i < recs.size(); ++i) {
        CHECK(back[i].p == recs[i].p);
        CHECK(back[i].q == recs[i].q);
        CHECK(back[i].d == recs[i].d);
        REQUIRE(back[i].eigenvalues.size() == recs[i].eigenvalues.size());
        for (size_t j = 0; j < recs[i].eigenvalues.size(); ++j) {
            CHECK(back[i].eigenvalues[j].ev.value == recs[i].eigenvalues[j].ev.value);
            CHECK(back[i].eigenvalues[j].ev.multiplicity == recs[i].eigenvalues[j].ev.multiplicity);
            CHECK(back[i].eigenvalues[j].track == recs[i].eigenvalues[j].track);
        }
    }
    CHECK_THROWS_AS(records_from_json("{not json"), Error);
}

TEST_CASE("determinism and serial/parallel equality")
{
    SweepSpec s;
    s.path = PathKind::Segment;
    s.a0 = -0.5;
    s.d0 = 1.7;
    s.a1 = 0.5;
    s.d1 = 2.3;
    s.steps = 5;
    s.count = 10;
    std::string one = to_csv(run_sweep(s)), two = to_csv(run_sweep(s));
    CHECK(one == two);
    s.exec = Exec::Serial;
    CHECK(to_csv(run_sweep(s)) == one);
}

TEST_CASE("region annotation and R6 sentinel")
{
    SweepSpec s;
    s.path = PathKind::Segment;
    s.a0 = -1;
    s.d0 = 1;
    s.a1 = 1;
    s.d1 = 1;
    s.steps = 3;
    s.count = 6;
    auto recs = run_sweep(s);
    REQUIRE(recs.size() == 3);
    for (const auto& r : recs) CHECK(r.region == classify_region(r.a, r.d).tag);
    CHECK(recs[0].whole_plane);
    CHECK(recs[0].eigenvalues.empty());
    CHECK(!recs[1].whole_plane);
    std::string csv = to_csv(recs);
    CHECK(csv.find(",-1,nan,nan,0,nan") != std::string::npos);
}

TEST_CASE("alpha sweep at a=-1/2: one negative eigenvalue, growing")
{
    auto recs = run_sweep(fig2());
    REQUIRE(recs.size() == 6);
    double prev = 0, prev_d = 1e9;
    for (const auto& r : recs) {
        CHECK(r.d < prev_d);
        prev_d = r.d;
        int neg = 0;
        double mod = 0;
        for (const auto& e : r.eigenvalues)
            if (e.ev.value.real() < 0 && std::abs(e.ev.value.imag()) <= 1e-9 * std::abs(e.ev.value)) {
                ++neg;
                mod = std::abs(e.ev.value);
            }
        CHECK(neg == 1);
        CHECK(mod > prev);
        prev = mod;
    }
    CHECK(recs.back().d == doctest::Approx(1.5034571988062035).epsilon(1e-12));
}

TEST_CASE("chebyshev sweep with verify")
{
    SweepSpec s = fig2();
    s.alphas = {{2, 1}, {4, 3}};
    s.steps = 2;
    s.verify = true;
    CHECK_NOTHROW(run_sweep(s));
}

TEST_CASE("Lambda+(2) toward (-1, 1)")
{
    SweepSpec s;
    s.path = PathKind::Lambda;
    s.p = 2;
    s.q = 1;
    s.a0 = -0.6;
    s.a1 = -0.98;
    s.steps = 4;
    s.count = 30;
    s.method = SweepMethod::Chebyshev;
    auto recs = run_sweep(s);
    double prev = 1e9, prev_arg = 1e9;
    for (const auto& r : recs) {
        // one simple negative eigenvalue moving to 0; the rest closing on the positive axis
        std::vector<cplx> left;
        double arg = 0;
        for (const auto& e : r.eigenvalues) {
            if (e.ev.value.real() < -1e-12)
                left.push_back(e.ev.value);
            else if (std::abs(e.ev.value) > 0 && std::abs(e.ev.value) < 50)
                arg = std::max(arg, std::abs(std::arg(e.ev.value)));
        }
        REQUIRE(left.size() == 1);
        CHECK(std::abs(left[0].imag()) <= 1e-12 * std::abs(left[0]));
        CHECK(std::abs(left[0]) < prev);
        CHECK(arg < prev_arg);
        prev = std::abs(left[0]);
        prev_arg = arg;
    }
}

TEST_CASE("track ids")
{
    auto recs = run_sweep(fig2());
    for (const auto& r : recs)
        for (const auto& e : r.eigenvalues) CHECK(e.track >= 0);
    // the negative eigenvalue keeps its track
    int t = -1;
    for (const auto& r : recs)
        for (const auto& e : r.eigenvalues)
            if (e.ev.value.real() < 0 && std::abs(e.ev.value.imag()) < 1e-9 * std::abs(e.ev.value)) {
                if (t < 0)
                    t = e.track;
                CHECK(e.track == t);
            }
}

TEST_CASE("svg output")
{
    auto recs = run_sweep(fig2());
    std::string svg = to_svg(recs);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(count_of(svg, "fill=\"white\" stroke=\"#999\"") == 6);
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("negative eigenvalue tracking")
{
    auto rows = track_negative_eigenvalue(-0.5, 1.5012, 1.62, 100, Exec::Serial);
    REQUIRE(rows.size() == 100);
    for (size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].d > rows[i - 1].d);
        CHECK(rows[i].lambda2 > rows[i - 1].lambda2);
    }
    CHECK(rows.front().lambda2 < rows.back().lambda2);

    // R5 curve: closed form -4 pi^2 / 3
    NegativeRow r = negative_eigenvalue(-1, 0);
    CHECK(r.lambda2 == doctest::Approx(-4 * pi2 / 3).epsilon(1e-9));

    // the R5-curve family approaching (-1/2, 3/2) escapes to -inf
    double prev = 0;
    for (double a : {-0.9, -0.7, -0.6, -0.55}) {
        double d = (a * a - 1) / a;
        auto [bp, bm] = a4_eigs(a, d);
        (void)bm;
        double im = (1.0 / std::sqrt(bp)).imag();
        double ref = -pi2 / (im * im);
        NegativeRow n = negative_eigenvalue(a, d);
        CHECK(n.lambda2 == doctest::Approx(ref).epsilon(1e-8));
        CHECK(n.lambda2 < prev);
        prev = n.lambda2;
    }

    auto par = track_negative_eigenvalue(-0.5, 1.5012, 1.62, 100, Exec::Parallel);
    CHECK(negative_to_csv(par) == negative_to_csv(rows));

    CHECK_THROWS_AS(negative_eigenvalue(0.5, 0.5), Error);
}

TEST_CASE("misc")
{
    CHECK(parse_sweep_method("chebyshev") == SweepMethod::Chebyshev);
    CHECK_THROWS_AS(parse_sweep_method("fourier"), Error);
    CHECK_THROWS_AS(write_file("/nonexistent-dir/x/y.csv", "x"), Error);

    Spectrum sp;
    Eigenvalue z;
    z.value = 0.0;
    Eigenvalue d;
    d.value = 5.0;
    d.analytic_order = 2;
    Eigenvalue s;
    s.value = 7.0;
    sp.eigenvalues = {z, d, s};
    CHECK(truncate_count(sp, 2).eigenvalues.size() == 2);
    CHECK(truncate_count(sp, 3).eigenvalues.size() == 2);
    CHECK(truncate_count(sp, 4).eigenvalues.size() == 3);
}
