#include "rotorqec/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

namespace rotorqec {

namespace {

std::optional<TimeSeries> load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    TimeSeries ts;
    std::string line;
    if (!std::getline(in, line)) return std::nullopt;
    {
        std::stringstream ss(line);
        std::string cell;
        bool first = true;
        while (std::getline(ss, cell, ',')) {
            if (first) { first = false; continue; }  // "time"
            ts.columns.push_back(cell);
        }
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != ts.columns.size() + 1) return std::nullopt;
        ts.times.push_back(row[0]);
        ts.rows.emplace_back(row.begin() + 1, row.end());
    }
    return ts;
}

struct Checker {
    VerifyReport report;
    std::string dir;
    std::map<std::string, TimeSeries> loaded;

    const TimeSeries* series(const std::string& preset) {
        auto it = loaded.find(preset);
        if (it != loaded.end()) return it->second.times.empty() ? nullptr : &it->second;
        auto ts = load_csv(dir + "/" + preset + "/timeseries.csv");
        if (!ts) {
            ++report.missing;
            report.checks.push_back({preset, "output present", false, "timeseries.csv missing"});
            loaded.emplace(preset, TimeSeries{});
            return nullptr;
        }
        auto [pos, ok] = loaded.emplace(preset, std::move(*ts));
        return &pos->second;
    }

    void add(const std::string& preset, const std::string& what, bool pass,
             const std::string& detail) {
        report.checks.push_back({preset, what, pass, detail});
    }

    void check_value(const std::string& preset, const std::string& col, double t,
                     double target, double tol) {
        const TimeSeries* ts = series(preset);
        if (!ts) return;
        const double v = ts->interp(t, col);
        std::ostringstream os;
        os << col << "(" << t << ") = " << v << ", expected " << target << " +- " << tol;
        add(preset, col + " checkpoint", std::abs(v - target) <= tol, os.str());
    }

    void check_trace(const std::string& preset) {
        const TimeSeries* ts = series(preset);
        if (!ts) return;
        double worst = 0.0;
        bool has = false;
        for (size_t k = 0; k < ts->columns.size(); ++k)
            if (ts->columns[k] == "trace") {
                has = true;
                for (const auto& row : ts->rows) worst = std::max(worst, std::abs(row[k] - 1.0));
            }
        if (!has) return;
        std::ostringstream os;
        os << "max |tr rho - 1| = " << worst;
        add(preset, "trace preserved", worst < 1e-8, os.str());
    }

    /// Value of the first interior local maximum of a column (after t_min).
    std::optional<double> first_local_max(const std::string& preset, const std::string& col,
                                          double t_min) {
        const TimeSeries* ts = series(preset);
        if (!ts) return std::nullopt;
        const int k = ts->column_index(col);
        for (int i = 1; i + 1 < ts->n_samples(); ++i) {
            if (ts->times[i] < t_min) continue;
            const double a = ts->rows[i - 1][k], b = ts->rows[i][k], c = ts->rows[i + 1][k];
            if (b >= a && b > c) return b;
        }
        return std::nullopt;
    }

    /// col(A) >= col(B) pointwise (interpolated on A's grid) over [t0, t1].
    void check_dominates(const std::string& a, const std::string& b, const std::string& col,
                         double t0, double t1, const std::string& what) {
        const TimeSeries* sa = series(a);
        const TimeSeries* sb = series(b);
        if (!sa || !sb) return;
        double worst = 1.0;
        double worst_t = t0;
        const int k = sa->column_index(col);
        for (int i = 0; i < sa->n_samples(); ++i) {
            const double t = sa->times[i];
            if (t < t0 || t > t1) continue;
            const double diff = sa->rows[i][k] - sb->interp(t, col);
            if (diff < worst) { worst = diff; worst_t = t; }
        }
        std::ostringstream os;
        os << col << "(" << a << ") - " << col << "(" << b << ") >= " << worst << " at t = "
           << worst_t << " over [" << t0 << ", " << t1 << "]";
        add(a, what, worst >= -1e-9, os.str());
    }
};

}  // namespace

VerifyReport verify_output_dir(const std::string& dir) {
    Checker c;
    c.dir = dir;

    for (const auto& name : preset_names()) c.check_trace(name);

    // Repump checkpoints.
    c.check_value("dec_repump_down", "phys_fid", 0.05, 0.974, 0.005);
    c.check_value("dec_repump_down", "J_expect", 0.05, 7.0, 0.01);
    c.check_value("dec_repump_up", "phys_fid", 0.05, 0.987, 0.005);
    c.check_value("dec_repump_up", "J_expect", 0.05, 7.0, 0.01);

    // Zeeman checkpoints: fidelity at t = 0.5, symmetric between the sides,
    // plus the finite-cooling oscillation (a local maximum before settling).
    c.check_value("dec_zeeman_left", "phys_fid", 0.5, 0.994, 0.003);
    c.check_value("dec_zeeman_right", "phys_fid", 0.5, 0.994, 0.003);
    {
        const TimeSeries* l = c.series("dec_zeeman_left");
        const TimeSeries* r = c.series("dec_zeeman_right");
        if (l && r) {
            const double dl = l->interp(0.5, "phys_fid");
            const double dr = r->interp(0.5, "phys_fid");
            std::ostringstream os;
            os << "|left - right| = " << std::abs(dl - dr) << ", expected <= 0.002";
            c.add("dec_zeeman_left", "left/right symmetry", std::abs(dl - dr) <= 0.002, os.str());
        }
        auto peak = c.first_local_max("dec_zeeman_left", "phys_fid", 0.02);
        c.add("dec_zeeman_left", "cooling oscillation present", peak.has_value(),
              peak ? "local maximum before settling" : "fidelity curve is monotone");
    }

    // Sequential-correction orderings.
    c.check_dominates("seq_cs725_word0", "decay_cs725_word0", "F0", 0.5, 2.0,
                      "corrected beats free decay");
    c.check_dominates("seq_cs725_plus", "decay_cs725_plus", "Fplus", 0.5, 2.0,
                      "corrected beats free decay");
    c.check_dominates("seq_a7m22_word0", "decay_a7m22_word0", "F0", 0.5, 2.0,
                      "corrected beats free decay");
    c.check_dominates("seq_a7m22_plus", "decay_a7m22_plus", "Fplus", 0.5, 2.0,
                      "corrected beats free decay");
    c.check_dominates("seq_a7m22_word0", "seq_cs725_word0", "F0", 0.5, 2.0,
                      "approximate beats exact");
    c.check_dominates("seq_a7m22_plus", "seq_cs725_plus", "Fplus", 0.5, 2.0,
                      "approximate beats exact");

    // DEC orderings and gains.
    c.check_dominates("dec_full_word0", "dec_repump_word0", "F0", 0.2, 2.0,
                      "full DEC beats repump-only");
    c.check_dominates("dec_repump_word0", "decay_cs725_word0", "F0", 0.2, 2.0,
                      "repump-only beats nothing");
    c.check_dominates("dec_full_plus", "dec_repump_plus", "F0", 0.2, 2.0,
                      "full DEC beats repump-only");
    c.check_dominates("dec_repump_plus", "decay_cs725_plus", "F0", 0.2, 2.0,
                      "repump-only beats nothing");
    {
        const TimeSeries* fw = c.series("dec_full_word0");
        const TimeSeries* rw = c.series("dec_repump_word0");
        const TimeSeries* fp = c.series("dec_full_plus");
        const TimeSeries* rp = c.series("dec_repump_plus");
        if (fw && rw && fp && rp) {
            const double gain_f0 = fw->interp(2.0, "F0") - rw->interp(2.0, "F0");
            const double gain_fplus = fp->interp(2.0, "Fplus") - rp->interp(2.0, "Fplus");
            std::ostringstream os;
            os << "F0 gain " << gain_f0 << " vs Fplus gain " << gain_fplus;
            c.add("dec_full_word0", "F0 gain exceeds Fplus gain", gain_f0 > gain_fplus, os.str());
        }
    }

    // Worst-case sweep decreases with J_C.
    {
        const TimeSeries* sw = c.series("worstcase_a_sweep");
        if (sw) {
            const int k = sw->column_index("worst_case_infidelity");
            bool dec = sw->n_samples() >= 2;
            for (int i = 1; i < sw->n_samples(); ++i)
                if (sw->rows[i][k] >= sw->rows[i - 1][k]) { dec = false; break; }
            c.add("worstcase_a_sweep", "strictly decreasing", dec,
                  dec ? "monotone over the sweep" : "not strictly decreasing");
        }
    }

    return c.report;
}

}  // namespace rotorqec
