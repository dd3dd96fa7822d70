#include "emotrend/trends.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <unordered_map>

#include "emotrend/errors.hpp"
#include "emotrend/numfmt.hpp"
#include "emotrend/stats.hpp"

namespace emotrend {

DailySeries topic_trend_series(const LdaModel& model, const std::vector<DayBucket>& buckets,
                               int topic) {
    if (topic < 0 || topic >= model.k) throw ConfigError("topic index out of range");
    std::unordered_map<std::string, std::size_t> row_of;
    row_of.reserve(model.doc_ids.size());
    for (std::size_t i = 0; i < model.doc_ids.size(); ++i) row_of.emplace(model.doc_ids[i], i);

    DailySeries series;
    series.name = "topic_" + std::to_string(topic);
    series.unit = SeriesUnit::proportion;
    for (const DayBucket& bucket : buckets) {
        double sum = 0.0;
        std::size_t count = 0;
        for (const std::string& id : bucket.tweet_ids) {
            const auto it = row_of.find(id);
            if (it == row_of.end()) continue;  // doc dropped as zero-token
            sum += model.theta[it->second][static_cast<std::size_t>(topic)];
            ++count;
        }
        if (count > 0) {
            series.points.push_back({bucket.day, sum / static_cast<double>(count)});
        }
    }
    return series;
}

std::map<Emotion, DailySeries> emotion_trend_series(const std::vector<Annotation>& annotations,
                                                    const std::vector<DayBucket>& buckets) {
    std::unordered_map<std::string, const Annotation*> by_id;
    by_id.reserve(annotations.size());
    for (const Annotation& a : annotations) by_id.emplace(a.tweet_id, &a);

    std::map<Emotion, DailySeries> out;
    for (int e = 0; e < kNumEmotions; ++e) {
        DailySeries s;
        s.name = emotion_name(static_cast<Emotion>(e));
        s.unit = SeriesUnit::percent;
        out.emplace(static_cast<Emotion>(e), std::move(s));
    }

    for (const DayBucket& bucket : buckets) {
        std::array<std::size_t, kNumEmotions> counts{};
        std::size_t labeled = 0;
        for (const std::string& id : bucket.tweet_ids) {
            const auto it = by_id.find(id);
            if (it == by_id.end() || !it->second->vector.label) continue;
            ++counts[static_cast<std::size_t>(*it->second->vector.label)];
            ++labeled;
        }
        if (labeled == 0) continue;
        for (int e = 0; e < kNumEmotions; ++e) {
            out.at(static_cast<Emotion>(e))
                .points.push_back({bucket.day, 100.0 * static_cast<double>(counts[static_cast<std::size_t>(e)]) /
                                                   static_cast<double>(labeled)});
        }
    }
    return out;
}

TrendFit ols_fit(const DailySeries& series) {
    const std::size_t n = series.points.size();
    if (n < 3) throw DataError("trend fit needs at least 3 points");

    const std::int64_t first_day = series.points.front().day;
    double sum_x = 0.0, sum_y = 0.0;
    for (const auto& p : series.points) {
        sum_x += static_cast<double>(p.day - first_day);
        sum_y += p.value;
    }
    const double mean_x = sum_x / static_cast<double>(n);
    const double mean_y = sum_y / static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0;
    for (const auto& p : series.points) {
        const double dx = static_cast<double>(p.day - first_day) - mean_x;
        sxx += dx * dx;
        sxy += dx * (p.value - mean_y);
    }
    if (sxx == 0.0) throw DataError("trend fit undefined: zero variance in day axis");

    TrendFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;

    double rss = 0.0;
    for (const auto& p : series.points) {
        const double x = static_cast<double>(p.day - first_day);
        const double resid = p.value - (fit.intercept + fit.slope * x);
        rss += resid * resid;
    }
    const double dof = static_cast<double>(n - 2);
    fit.slope_stderr = std::sqrt(rss / dof / sxx);

    if (fit.slope_stderr == 0.0) {
        // Exact fit: slope 0 on a constant series is "no trend", anything
        // else is infinitely significant.
        fit.t_stat = fit.slope == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        fit.p_value = fit.slope == 0.0 ? 1.0 : 0.0;
        return fit;
    }
    fit.t_stat = fit.slope / fit.slope_stderr;
    fit.p_value = student_t_two_sided_p(fit.t_stat, dof);
    return fit;
}

MeanCi mean_ci(const DailySeries& series, double level) {
    const std::size_t n = series.points.size();
    if (n < 2) throw DataError("mean CI needs at least 2 points");
    if (!(level > 0.0 && level < 1.0)) throw ConfigError("confidence level must lie in (0,1)");

    double sum = 0.0;
    for (const auto& p : series.points) sum += p.value;
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (const auto& p : series.points) ss += (p.value - mean) * (p.value - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    const double t = student_t_quantile(0.5 * (1.0 + level), static_cast<double>(n - 1));
    const double half_width = t * sd / std::sqrt(static_cast<double>(n));

    MeanCi ci;
    ci.mean = mean;
    ci.lower = mean - half_width;
    ci.upper = mean + half_width;
    ci.level = level;
    return ci;
}

DailySeries tail_window(const DailySeries& series, std::int64_t days) {
    DailySeries out;
    out.name = series.name;
    out.unit = series.unit;
    if (series.points.empty() || days <= 0) return out;
    const std::int64_t cutoff = series.points.back().day - days + 1;
    for (const auto& p : series.points) {
        if (p.day >= cutoff) out.points.push_back(p);
    }
    return out;
}

void write_series_csv(const std::vector<DailySeries>& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open series file for writing: " + path);
    out << "day,series,value\n";
    for (const DailySeries& s : series) {
        for (const auto& p : s.points) {
            out << format_civil_day(civil_from_days(p.day)) << ',' << s.name << ','
                << format_double(p.value) << '\n';
        }
    }
    if (!out) throw IoError("write failed: " + path);
}

void write_trend_report_csv(const std::vector<TrendReportRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open trend report for writing: " + path);
    out << "series,window,slope,stderr,p,n\n";
    for (const auto& row : rows) {
        out << row.series << ',' << row.window << ',' << format_double(row.fit.slope) << ','
            << format_double(row.fit.slope_stderr) << ',' << format_double(row.fit.p_value) << ','
            << row.fit.n << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

void write_mean_ci_csv(const std::vector<MeanCiRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open mean/CI report for writing: " + path);
    out << "series,mean,lower,upper,level,n\n";
    for (const auto& row : rows) {
        out << row.series << ',' << format_double(row.ci.mean) << ',' << format_double(row.ci.lower)
            << ',' << format_double(row.ci.upper) << ',' << format_double(row.ci.level) << ','
            << row.n << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace emotrend
