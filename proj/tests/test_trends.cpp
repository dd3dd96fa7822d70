#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "emotrend/errors.hpp"
#include "emotrend/rng.hpp"
#include "emotrend/stats.hpp"
#include "emotrend/trends.hpp"

using namespace emotrend;
namespace fs = std::filesystem;

namespace {

DailySeries series_of(std::vector<double> values, std::int64_t first_day = 18000,
                      SeriesUnit unit = SeriesUnit::proportion) {
    DailySeries s;
    s.name = "test";
    s.unit = unit;
    for (std::size_t i = 0; i < values.size(); ++i) {
        s.points.push_back({first_day + static_cast<std::int64_t>(i), values[i]});
    }
    return s;
}

// Independent oracle: textbook simple-regression formulas with the t-tail
// computed by adaptive Simpson quadrature of the density (no shared code with
// the incomplete-beta path in src).
struct OlsOracle {
    double slope, intercept, stderr_slope, t, p;
};

double t_density(double x, double nu) {
    // log-space to sidestep overflow in the gamma ratio.
    const auto lg = [](double a) { return std::lgamma(a); };
    const double log_c = lg((nu + 1.0) / 2.0) - lg(nu / 2.0) - 0.5 * std::log(nu * M_PI);
    return std::exp(log_c - (nu + 1.0) / 2.0 * std::log1p(x * x / nu));
}

double simpson(double a, double b, double fa, double fm, double fb, double nu, double eps,
               int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = t_density(lm, nu);
    const double frm = t_density(rm, nu);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) < 15.0 * eps) {
        return left + right + (left + right - whole) / 15.0;
    }
    return simpson(a, m, fa, flm, fm, nu, eps / 2.0, depth - 1) +
           simpson(m, b, fm, frm, fb, nu, eps / 2.0, depth - 1);
}

double t_two_sided_p_by_quadrature(double t, double nu) {
    const double a = 0.0;
    const double b = std::fabs(t);
    if (b == 0.0) return 1.0;
    const double integral =
        simpson(a, b, t_density(a, nu), t_density(0.5 * (a + b), nu), t_density(b, nu), nu,
                1e-14, 40);
    return std::max(0.0, 1.0 - 2.0 * integral);
}

OlsOracle ols_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    OlsOracle o;
    o.slope = sxy / sxx;
    o.intercept = my - o.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - o.intercept - o.slope * x[i];
        rss += r * r;
    }
    o.stderr_slope = std::sqrt(rss / (n - 2.0) / sxx);
    o.t = o.slope / o.stderr_slope;
    o.p = t_two_sided_p_by_quadrature(o.t, n - 2.0);
    return o;
}

}  // namespace

TEST_CASE("student t machinery matches reference values") {
    // Reference values computed with an independent statistics package.
    CHECK(student_t_cdf(1.0, 5) == doctest::Approx(0.8183912661754387).epsilon(1e-12));
    CHECK(student_t_cdf(2.5, 10) == doctest::Approx(0.9842765778816956).epsilon(1e-12));
    CHECK(student_t_cdf(-1.7, 3) == doctest::Approx(0.09384532077670496).epsilon(1e-12));
    CHECK(student_t_cdf(0.3, 28) == doctest::Approx(0.6168034376157097).epsilon(1e-12));
    CHECK(student_t_two_sided_p(2.5, 10) == doctest::Approx(0.031446844236608776).epsilon(1e-12));
    CHECK(student_t_quantile(0.975, 2) == doctest::Approx(4.302652729696142).epsilon(1e-10));
    CHECK(student_t_quantile(0.5, 7) == doctest::Approx(0.0));
}

TEST_CASE("topic_trend_series averages theta per day") {
    LdaModel model;
    model.k = 2;
    model.alpha = 1.0;
    model.beta = 0.1;
    model.vocab.add("w");
    model.doc_ids = {"a", "b", "c"};
    model.docs = {{0}, {0}, {0}};
    model.theta = {{0.2, 0.8}, {0.4, 0.6}, {0.6, 0.4}};

    std::vector<DayBucket> buckets = {
        {100, {"a", "b"}},
        {101, {}},
        {102, {"c"}},
    };
    const DailySeries series = topic_trend_series(model, buckets, 0);
    REQUIRE(series.size() == 2);  // the empty day emits no point
    CHECK(series.points[0].day == 100);
    CHECK(series.points[0].value == doctest::Approx(0.3));
    CHECK(series.points[1].day == 102);
    CHECK(series.points[1].value == doctest::Approx(0.6));

    SUBCASE("one-hot thetas give a constant series at 1") {
        model.theta = {{1.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}};
        const DailySeries ones = topic_trend_series(model, buckets, 0);
        for (const auto& p : ones.points) CHECK(p.value == doctest::Approx(1.0));
    }
    SUBCASE("values stay inside [0,1]") {
        for (const auto& p : series.points) {
            CHECK(p.value >= 0.0);
            CHECK(p.value <= 1.0);
        }
    }
    SUBCASE("topic index is validated") {
        CHECK_THROWS_AS(topic_trend_series(model, buckets, 2), ConfigError);
    }
}

namespace {

Annotation labeled(const std::string& id, Emotion e) {
    Annotation a;
    a.tweet_id = id;
    a.vector.scores[static_cast<std::size_t>(e)] = 1.0;
    a.vector.label = e;
    return a;
}

Annotation unlabeled(const std::string& id) {
    Annotation a;
    a.tweet_id = id;
    return a;
}

}  // namespace

TEST_CASE("emotion_trend_series computes per-day label percentages") {
    const std::vector<Annotation> annotations = {
        labeled("a", Emotion::joy),  labeled("b", Emotion::joy), labeled("c", Emotion::fear),
        labeled("d", Emotion::anger), unlabeled("e"),            labeled("f", Emotion::trust),
    };
    const std::vector<DayBucket> buckets = {
        {200, {"a", "b", "c", "d", "e"}},
        {201, {"e"}},           // only an unlabeled tweet: day omitted
        {202, {"f"}},
    };
    const auto series = emotion_trend_series(annotations, buckets);

    const auto& joy = series.at(Emotion::joy);
    REQUIRE(joy.size() == 2);
    CHECK(joy.points[0].value == doctest::Approx(50.0));
    CHECK(series.at(Emotion::fear).points[0].value == doctest::Approx(25.0));
    CHECK(series.at(Emotion::anger).points[0].value == doctest::Approx(25.0));
    CHECK(series.at(Emotion::sadness).points[0].value == doctest::Approx(0.0));

    // Day 202 has a single trust label.
    CHECK(series.at(Emotion::trust).points[1].value == doctest::Approx(100.0));

    // Percentages across the eight emotions sum to 100 on every present day.
    for (std::size_t day_idx = 0; day_idx < joy.size(); ++day_idx) {
        double total = 0.0;
        for (const auto& [emotion, s] : series) total += s.points[day_idx].value;
        CHECK(total == doctest::Approx(100.0).epsilon(1e-9));
    }
}

TEST_CASE("ols_fit on an exact line") {
    std::vector<double> values;
    for (int i = 0; i < 10; ++i) values.push_back(2.0 * i + 1.0);
    const TrendFit fit = ols_fit(series_of(values));
    CHECK(std::fabs(fit.slope - 2.0) < 1e-9);
    CHECK(std::fabs(fit.intercept - 1.0) < 1e-9);
    CHECK(fit.p_value < 1e-12);
    CHECK(fit.n == 10);
}

TEST_CASE("ols_fit on a constant series") {
    const TrendFit fit = ols_fit(series_of({3.5, 3.5, 3.5, 3.5}));
    CHECK(fit.slope == 0.0);
    CHECK(fit.p_value == 1.0);
}

TEST_CASE("ols_fit matches the frozen reference on the 30-point fixture") {
    // Fixture and expected values generated once with an independent
    // statistics package (slope 0.35, noise sd 1.4, rounded to 6 decimals).
    const std::vector<double> y = {
        4.366736,  1.697688,  2.745948, 3.620523,  2.295508,  3.752892,  4.098753, 1.993386,
        6.224721,  5.990698,  4.624399, 5.609832,  6.907419,  6.184101,  6.560151, 5.215462,
        8.376412,  8.123433,  8.684244, 6.512866,  11.31098,  9.56607,   9.158004, 12.890701,
        10.33646,  8.71905,   10.532681, 8.246359, 13.269155, 11.566936};
    const TrendFit fit = ols_fit(series_of(y));
    CHECK(fit.slope == doctest::Approx(0.330685187541713).epsilon(1e-9));
    CHECK(fit.intercept == doctest::Approx(2.177783713978495).epsilon(1e-9));
    CHECK(fit.slope_stderr == doctest::Approx(0.030153515914835814).epsilon(1e-9));
    CHECK(fit.t_stat == doctest::Approx(10.966720712625515).epsilon(1e-9));
    CHECK(fit.p_value == doctest::Approx(1.208174803247235e-11).epsilon(1e-6));
}

TEST_CASE("ols_fit agrees with the quadrature oracle on random series") {
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x, y;
        const double slope = rng.uniform() * 4.0 - 2.0;
        const double intercept = rng.uniform() * 10.0 - 5.0;
        const double noise = 0.2 + rng.uniform() * 2.0;
        for (int i = 0; i < 30; ++i) {
            x.push_back(static_cast<double>(i));
            y.push_back(slope * i + intercept + noise * rng.gaussian());
        }
        const TrendFit fit = ols_fit(series_of(y));
        const OlsOracle oracle = ols_oracle(x, y);
        CHECK(std::fabs(fit.slope - oracle.slope) < 1e-6);
        CHECK(std::fabs(fit.slope_stderr - oracle.stderr_slope) < 1e-6);
        CHECK(std::fabs(fit.p_value - oracle.p) < 1e-6);
    }
}

TEST_CASE("ols_fit equivariance under shift and scale of y") {
    Rng rng(5);
    std::vector<double> y;
    for (int i = 0; i < 20; ++i) y.push_back(0.5 * i + rng.gaussian());

    const TrendFit base = ols_fit(series_of(y));

    std::vector<double> shifted = y;
    for (auto& v : shifted) v += 7.25;
    const TrendFit shift_fit = ols_fit(series_of(shifted));
    CHECK(shift_fit.slope == doctest::Approx(base.slope).epsilon(1e-9));
    CHECK(shift_fit.intercept == doctest::Approx(base.intercept + 7.25).epsilon(1e-9));
    CHECK(shift_fit.p_value == doctest::Approx(base.p_value).epsilon(1e-9));

    std::vector<double> scaled = y;
    for (auto& v : scaled) v *= -3.0;
    const TrendFit scale_fit = ols_fit(series_of(scaled));
    CHECK(scale_fit.slope == doctest::Approx(-3.0 * base.slope).epsilon(1e-9));
    CHECK(std::fabs(scale_fit.p_value - base.p_value) < 1e-9);
}

TEST_CASE("ols_fit errors") {
    CHECK_THROWS_AS(ols_fit(series_of({1.0, 2.0})), DataError);  // too few points

    DailySeries degenerate;
    degenerate.points = {{100, 1.0}, {100, 2.0}, {100, 3.0}};  // no day variance
    CHECK_THROWS_AS(ols_fit(degenerate), DataError);
}

TEST_CASE("mean_ci hand values") {
    SUBCASE("constant series collapses to the mean") {
        const MeanCi ci = mean_ci(series_of({4.0, 4.0, 4.0}), 0.95);
        CHECK(ci.lower == doctest::Approx(4.0));
        CHECK(ci.mean == doctest::Approx(4.0));
        CHECK(ci.upper == doctest::Approx(4.0));
    }
    SUBCASE("1,2,3 at 95%") {
        // mean 2, half-width t_{0.975,2} * sd / sqrt(3) = 2.4841377117195456.
        const MeanCi ci = mean_ci(series_of({1.0, 2.0, 3.0}), 0.95);
        CHECK(ci.mean == doctest::Approx(2.0));
        CHECK(ci.lower == doctest::Approx(-0.48413771171954556).epsilon(1e-9));
        CHECK(ci.upper == doctest::Approx(4.484137711719546).epsilon(1e-9));
    }
    SUBCASE("higher level widens the interval") {
        const MeanCi narrow = mean_ci(series_of({1.0, 2.0, 4.0, 3.0}), 0.95);
        const MeanCi wide = mean_ci(series_of({1.0, 2.0, 4.0, 3.0}), 0.99);
        CHECK(wide.upper - wide.lower > narrow.upper - narrow.lower);
    }
    SUBCASE("interval is symmetric about the mean") {
        const MeanCi ci = mean_ci(series_of({2.0, 5.0, 3.0, 9.0, 4.0}), 0.9);
        CHECK(ci.upper - ci.mean == doctest::Approx(ci.mean - ci.lower).epsilon(1e-12));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(mean_ci(series_of({1.0}), 0.95), DataError);
        CHECK_THROWS_AS(mean_ci(series_of({1.0, 2.0}), 1.5), ConfigError);
    }
}

TEST_CASE("tail_window keeps the trailing days") {
    const DailySeries s = series_of({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    const DailySeries tail = tail_window(s, 4);
    REQUIRE(tail.size() == 4);
    CHECK(tail.points.front().value == 7.0);
    CHECK(tail.points.back().value == 10.0);
}

TEST_CASE("csv writers emit one row per point/fit") {
    const fs::path dir = fs::temp_directory_path() / "emotrend_trends_tests";
    fs::create_directories(dir);

    std::vector<DailySeries> series = {series_of({0.1, 0.2, 0.3})};
    series[0].name = "topic_0";
    const fs::path series_path = dir / "series.csv";
    write_series_csv(series, series_path.string());

    std::ifstream in(series_path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "day,series,value");
    int rows = 0;
    while (std::getline(in, line)) rows += line.empty() ? 0 : 1;
    CHECK(rows == 3);

    const TrendFit fit = ols_fit(series_of({1.0, 2.0, 3.0, 4.0}));
    write_trend_report_csv({{"topic_0", "full", fit}}, (dir / "trend.csv").string());
    write_mean_ci_csv({{"topic_0", mean_ci(series_of({1.0, 2.0, 3.0}), 0.95), 3}},
                      (dir / "ci.csv").string());
    std::ifstream trend_in(dir / "trend.csv");
    std::getline(trend_in, line);
    CHECK(line == "series,window,slope,stderr,p,n");
    std::getline(trend_in, line);
    CHECK(line.substr(0, 13) == "topic_0,full,");
}
