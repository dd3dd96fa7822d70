#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "emotrend/corpus.hpp"
#include "emotrend/lexicon.hpp"
#include "emotrend/topics.hpp"

namespace emotrend {

enum class SeriesUnit { proportion, percent };

struct DailyPoint {
    std::int64_t day = 0;  // day serial (days since 1970-01-01)
    double value = 0.0;
};

// Days strictly increasing; unit tag fixed per series.
struct DailySeries {
    std::string name;
    SeriesUnit unit = SeriesUnit::proportion;
    std::vector<DailyPoint> points;

    std::size_t size() const { return points.size(); }
};

struct TrendFit {
    double slope = 0.0;      // per day
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double t_stat = 0.0;
    double p_value = 1.0;    // two-sided, n-2 dof
    std::size_t n = 0;
};

struct MeanCi {
    double mean = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double level = 0.95;
};

// Mean doc-topic proportion per day for topic `topic`; days whose bucket has
// no modeled docs emit no point.
DailySeries topic_trend_series(const LdaModel& model, const std::vector<DayBucket>& buckets,
                               int topic);

// Per-day percentage of labeled tweets carrying each emotion. Days with zero
// labeled tweets are omitted; present days sum to 100 across the 8 emotions.
std::map<Emotion, DailySeries> emotion_trend_series(const std::vector<Annotation>& annotations,
                                                    const std::vector<DayBucket>& buckets);

// Ordinary least squares of value on day offset (x = day - first day), with a
// two-sided t-test on the slope. Wants >= 3 points and non-degenerate x.
TrendFit ols_fit(const DailySeries& series);

// t-interval for the mean of the daily values.
MeanCi mean_ci(const DailySeries& series, double level = 0.95);

// Restrict to the trailing `days` calendar days present in the series.
DailySeries tail_window(const DailySeries& series, std::int64_t days);

// day,series,value rows (day as YYYY-MM-DD).
void write_series_csv(const std::vector<DailySeries>& series, const std::string& path);
// series,window,slope,stderr,t,p,n rows.
struct TrendReportRow {
    std::string series;
    std::string window;
    TrendFit fit;
};
void write_trend_report_csv(const std::vector<TrendReportRow>& rows, const std::string& path);
// series,mean,lower,upper,level,n rows.
struct MeanCiRow {
    std::string series;
    MeanCi ci;
    std::size_t n = 0;
};
void write_mean_ci_csv(const std::vector<MeanCiRow>& rows, const std::string& path);

}  // namespace emotrend
