#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rotorqec {

/// Sampled observable record of one simulation run. Column order is fixed:
/// time first, then observables in declaration order (the CSV/JSON writers
/// reproduce it bit-exactly).
struct TimeSeries {
    std::vector<double> times;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;  // rows[i][k] for times[i], columns[k]

    int n_samples() const { return static_cast<int>(times.size()); }
    int column_index(const std::string& name) const;
    double value(int sample, const std::string& name) const;
    /// Linear interpolation of a column at time t (clamped to the range).
    double interp(double t, const std::string& name) const;

    void append(double t, const std::vector<double>& record);
    void write_csv(std::ostream& os) const;
    std::string to_json(int indent = 2) const;
};

}  // namespace rotorqec
