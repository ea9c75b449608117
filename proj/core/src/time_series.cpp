#include "rotorqec/time_series.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace rotorqec {

int TimeSeries::column_index(const std::string& name) const {
    auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw std::out_of_range("TimeSeries: no column " + name);
    return static_cast<int>(it - columns.begin());
}

double TimeSeries::value(int sample, const std::string& name) const {
    return rows.at(sample).at(column_index(name));
}

double TimeSeries::interp(double t, const std::string& name) const {
    if (times.empty()) throw std::out_of_range("TimeSeries: empty");
    const int k = column_index(name);
    if (t <= times.front()) return rows.front()[k];
    if (t >= times.back()) return rows.back()[k];
    auto it = std::upper_bound(times.begin(), times.end(), t);
    const int i = static_cast<int>(it - times.begin());
    const double t0 = times[i - 1], t1 = times[i];
    const double w = (t1 > t0) ? (t - t0) / (t1 - t0) : 0.0;
    return (1.0 - w) * rows[i - 1][k] + w * rows[i][k];
}

void TimeSeries::append(double t, const std::vector<double>& record) {
    if (record.size() != columns.size())
        throw std::invalid_argument("TimeSeries: record size does not match columns");
    if (!times.empty() && t <= times.back())
        throw std::invalid_argument("TimeSeries: times must be strictly increasing");
    times.push_back(t);
    rows.push_back(record);
}

namespace {
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}
}  // namespace

void TimeSeries::write_csv(std::ostream& os) const {
    os << "time";
    for (const auto& c : columns) os << "," << c;
    os << "\n";
    for (int i = 0; i < n_samples(); ++i) {
        os << fmt(times[i]);
        for (double v : rows[i]) os << "," << fmt(v);
        os << "\n";
    }
}

std::string TimeSeries::to_json(int indent) const {
    nlohmann::json j;
    j["columns"] = columns;
    j["times"] = times;
    nlohmann::json data = nlohmann::json::object();
    for (size_t k = 0; k < columns.size(); ++k) {
        std::vector<double> col(rows.size());
        for (size_t i = 0; i < rows.size(); ++i) col[i] = rows[i][k];
        data[columns[k]] = col;
    }
    j["records"] = data;
    return j.dump(indent);
}

}  // namespace rotorqec
